//! Zero-dimensional persistence of the radius filtration and the chromatic
//! norms of a two-colored cloud.
//!
//! Every edge of the minimum spanning tree of a set kills one component at
//! half its length, and one class lives forever. The domain diagram is that
//! of `B` and `C` side by side, the image diagram is that of the whole cloud
//! (its deaths biject with the edges of `MST(A)`), and the kernel norm is the
//! difference of the two.

use serde::{Deserialize, Serialize};

use crate::constructions::Coloring;
use crate::error::{Error, Result};
use crate::lattice::{Metric, PointCloud};
use crate::spanning::{compensated_sum, mst};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagramPoint {
    pub birth: f64,
    /// `None` for an essential class.
    pub death: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersistenceDiagram {
    pub points: Vec<DiagramPoint>,
    /// Value substituted for infinite deaths in norms.
    pub cutoff: f64,
}

impl PersistenceDiagram {
    pub fn max_finite_death(&self) -> f64 {
        self.points.iter().filter_map(|p| p.death).fold(0.0, f64::max)
    }

    pub fn essential_count(&self) -> usize {
        self.points.iter().filter(|p| p.death.is_none()).count()
    }

    /// Columns `birth,death`; essential classes have death `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("birth,death\n");
        for p in &self.points {
            let death = p.death.map_or_else(|| "inf".to_string(), crate::numfmt::fmt);
            out.push_str(&format!("{},{}\n", crate::numfmt::fmt(p.birth), death));
        }
        out
    }
}

fn deaths(cloud: &PointCloud, subset: &[usize], metric: Metric) -> Result<Vec<f64>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &k in subset {
        cloud.check_index(k)?;
    }
    if subset.len() == 1 {
        return Ok(Vec::new());
    }
    let tree = mst(&cloud.subset(subset), metric)?;
    Ok(tree.edges().iter().map(|e| e.length() / 2.0).collect())
}

/// Diagram of the points `subset`: `(0, l/2)` per tree edge of length `l`
/// and one essential `(0, inf)`.
pub fn zero_dim_diagram(
    cloud: &PointCloud,
    subset: &[usize],
    metric: Metric,
    cutoff: f64,
) -> Result<PersistenceDiagram> {
    let d = deaths(cloud, subset, metric)?;
    let mut points: Vec<DiagramPoint> = d
        .into_iter()
        .map(|death| DiagramPoint {
            birth: 0.0,
            death: Some(death),
        })
        .collect();
    points.push(DiagramPoint {
        birth: 0.0,
        death: None,
    });
    let diagram = PersistenceDiagram { points, cutoff };
    if !(cutoff >= diagram.max_finite_death()) {
        return Err(Error::InvalidParameter(format!(
            "cutoff {cutoff} is below the largest finite death {}",
            diagram.max_finite_death()
        )));
    }
    Ok(diagram)
}

/// Sum of `death - birth`, with infinite deaths valued at the cutoff.
pub fn one_norm(diagram: &PersistenceDiagram) -> f64 {
    compensated_sum(diagram.points.iter().map(|p| p.death.unwrap_or(diagram.cutoff) - p.birth))
}

/// How infinite deaths enter the norms.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "q")]
pub enum CutoffPolicy {
    /// The largest finite death over the three diagrams.
    #[default]
    MaxFiniteDeath,
    Fixed(f64),
    /// Drop essential classes, which is the same as a cutoff of zero.
    ExcludeInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChromaticNorms {
    pub domain_norm: f64,
    pub image_norm: f64,
    pub kernel_norm: f64,
    pub image_share: f64,
    pub kernel_share: f64,
    /// Value of each infinite death; zero when they are excluded.
    pub cutoff: f64,
}

/// Domain, image and kernel norms of a two-coloring.
///
/// `domain = L_B / 2 + L_C / 2 + 2q` and `image = L_A / 2 + q`.
pub fn chromatic_norms(
    cloud: &PointCloud,
    coloring: &Coloring,
    metric: Metric,
    policy: CutoffPolicy,
) -> Result<ChromaticNorms> {
    if coloring.arity() != 2 {
        return Err(Error::InvalidParameter("chromatic norms need a two-coloring".into()));
    }
    coloring.check_cloud(cloud)?;
    let all: Vec<usize> = (0..cloud.len()).collect();
    let b = coloring.class(0);
    let c = coloring.class(1);
    if b.is_empty() {
        return Err(Error::EmptyClass(0));
    }
    if c.is_empty() {
        return Err(Error::EmptyClass(1));
    }
    let (db, dc, da) = (deaths(cloud, &b, metric)?, deaths(cloud, &c, metric)?, deaths(cloud, &all, metric)?);
    let max_death = db.iter().chain(&dc).chain(&da).copied().fold(0.0, f64::max);
    let q = match policy {
        CutoffPolicy::MaxFiniteDeath => max_death,
        CutoffPolicy::ExcludeInfinite => 0.0,
        CutoffPolicy::Fixed(q) => {
            if !(q >= max_death) {
                return Err(Error::InvalidParameter(format!(
                    "cutoff {q} is below the largest finite death {max_death}"
                )));
            }
            q
        }
    };
    let domain_norm = compensated_sum(db.iter().chain(&dc).copied()) + 2.0 * q;
    let image_norm = compensated_sum(da.iter().copied()) + q;
    if !(domain_norm > 0.0) {
        return Err(Error::ZeroDenominator("the domain norm is zero".into()));
    }
    let kernel_norm = domain_norm - image_norm;
    Ok(ChromaticNorms {
        domain_norm,
        image_norm,
        kernel_norm,
        image_share: image_norm / domain_norm,
        kernel_share: kernel_norm / domain_norm,
        cutoff: q,
    })
}

/// `(domain - 2q) / (image - q)`, the MST-ratio recovered from the norms.
pub fn ratio_from_norms(norms: &ChromaticNorms) -> Result<f64> {
    let den = norms.image_norm - norms.cutoff;
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator("the image norm has no finite part".into()));
    }
    Ok((norms.domain_norm - 2.0 * norms.cutoff) / den)
}
