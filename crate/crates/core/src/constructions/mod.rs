//! Colorings, MST-ratio evaluation and the named extremal configurations.

mod named;
mod registry;
mod sublattice;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Metric, PointCloud};
use crate::spanning::mst;

pub use named::{
    fig5, fig8, integer_checkerboard, near_collapse, seven_points, stretched_hex, three_way_split,
    NearCollapse, StretchedLattice, FIG5_K_MAX,
};
pub use registry::{build as build_construction, Instance};
pub use sublattice::{
    asymptotic_sublattice_ratio, packing_coloring, sublattice_coloring, PackingFamily,
};

/// Steiner-ratio lower bound used for the universal upper bound on the MST-ratio.
pub const STEINER_RATIO_LOWER: f64 = 0.824;

/// `2 / 0.824`, no MST-ratio can exceed this.
pub const SUPMAX_UPPER_BOUND: f64 = 2.0 / STEINER_RATIO_LOWER;

/// A label per point; labels are `< arity`. Class 0 is the subset `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    labels: Vec<u32>,
    arity: u32,
}

impl Coloring {
    pub fn new(labels: Vec<u32>, arity: u32) -> Result<Coloring> {
        if arity < 2 {
            return Err(Error::InvalidParameter(format!("arity {arity} must be at least 2")));
        }
        if let Some(bad) = labels.iter().find(|&&l| l >= arity) {
            return Err(Error::InvalidParameter(format!("label {bad} is not below arity {arity}")));
        }
        Ok(Coloring { labels, arity })
    }

    /// Two-coloring with label 0 on `subset` and 1 elsewhere.
    pub fn from_subset(len: usize, subset: &[usize]) -> Result<Coloring> {
        let mut labels = vec![1; len];
        for &k in subset {
            if k >= len {
                return Err(Error::IndexOutOfRange { index: k, len });
            }
            labels[k] = 0;
        }
        Ok(Coloring { labels, arity: 2 })
    }

    pub fn uniform(len: usize) -> Coloring {
        Coloring {
            labels: vec![0; len],
            arity: 2,
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class(&self, label: u32) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(k, _)| k)
            .collect()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.arity as usize];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }

    /// Swaps the two classes of a two-coloring.
    pub fn complement(&self) -> Coloring {
        Coloring {
            labels: self.labels.iter().map(|&l| if l == 0 { 1 } else { 0 }).collect(),
            arity: 2,
        }
    }

    /// Moves point `k` to the other class of a two-coloring.
    pub fn flip(&mut self, k: usize) {
        self.labels[k] = 1 - self.labels[k].min(1);
    }

    pub(crate) fn check_cloud(&self, cloud: &PointCloud) -> Result<()> {
        if self.labels.len() != cloud.len() {
            return Err(Error::ColoringMismatch(format!(
                "{} labels for {} points",
                self.labels.len(),
                cloud.len()
            )));
        }
        Ok(())
    }
}

/// The three (or more) tree lengths behind an MST-ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    /// Length of the tree on class 0.
    pub len_b: f64,
    /// Combined length of the trees on the other classes.
    pub len_complement: f64,
    pub len_a: f64,
    pub ratio: f64,
    pub counts: Vec<usize>,
    pub class_lengths: Vec<f64>,
}

/// Length of the minimum spanning tree of the points at `indices`; zero for
/// fewer than two points.
pub fn class_tree_length(cloud: &PointCloud, indices: &[usize], metric: Metric) -> Result<f64> {
    if indices.len() <= 1 {
        return Ok(0.0);
    }
    Ok(mst(&cloud.subset(indices), metric)?.total_length())
}

/// Sum of the class tree lengths divided by the tree length of the whole cloud.
pub fn multiway_ratio(cloud: &PointCloud, coloring: &Coloring, metric: Metric) -> Result<RatioReport> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    coloring.check_cloud(cloud)?;
    metric.check(cloud)?;
    if cloud.len() < 2 {
        return Err(Error::ZeroDenominator("a single point has a tree of length zero".into()));
    }
    let len_a = mst(cloud, metric)?.total_length();
    if !(len_a > 0.0) {
        return Err(Error::ZeroDenominator("the whole tree has length zero".into()));
    }
    let class_lengths = (0..coloring.arity())
        .map(|c| class_tree_length(cloud, &coloring.class(c), metric))
        .collect::<Result<Vec<f64>>>()?;
    let len_b = class_lengths[0];
    let len_complement: f64 = class_lengths[1..].iter().sum();
    Ok(RatioReport {
        len_b,
        len_complement,
        len_a,
        ratio: (len_b + len_complement) / len_a,
        counts: coloring.counts(),
        class_lengths,
    })
}

/// The MST-ratio of `cloud` and the class-0 subset of a two-coloring.
pub fn mst_ratio(cloud: &PointCloud, coloring: &Coloring, metric: Metric) -> Result<RatioReport> {
    if coloring.arity() != 2 {
        return Err(Error::InvalidParameter(format!(
            "mst_ratio needs a two-coloring, got arity {}",
            coloring.arity()
        )));
    }
    multiway_ratio(cloud, coloring, metric)
}

/// `true` unless the ratio exceeds the universal bound `2 / 0.824`.
pub fn supmax_check(report: &RatioReport) -> bool {
    report.ratio <= SUPMAX_UPPER_BOUND
}
