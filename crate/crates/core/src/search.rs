//! Exhaustive and stochastic search over two-colorings.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{class_tree_length, mst_ratio, Coloring, RatioReport};
use crate::error::{Error, Result};
use crate::lattice::{sq_distance_unchecked, Metric, PointCloud};
use crate::spanning::{compensated_sum, mst};

pub const DEFAULT_MAX_POINTS: usize = 22;

/// Ratios closer than this are ties.
pub const RATIO_TIE: f64 = 1e-12;

// Largest cloud for which a dense distance matrix is kept.
const DENSE_LIMIT: usize = 2048;

/// Pairwise Euclidean distances of a cloud.
#[derive(Debug, Clone)]
struct DenseMetric {
    n: usize,
    d: Vec<f64>,
}

impl DenseMetric {
    fn new(cloud: &PointCloud, metric: Metric) -> DenseMetric {
        let n = cloud.len();
        let mut d = vec![0.0; n * n];
        for p in 0..n {
            for q in p + 1..n {
                let x = sq_distance_unchecked(metric, cloud, p, q).sqrt();
                d[p * n + q] = x;
                d[q * n + p] = x;
            }
        }
        DenseMetric { n, d }
    }

    /// Prim on the points `idx`.
    fn tree_length(&self, idx: &[usize], scratch: &mut Vec<f64>) -> f64 {
        let m = idx.len();
        if m <= 1 {
            return 0.0;
        }
        scratch.clear();
        scratch.resize(m, f64::INFINITY);
        let mut in_tree = vec![false; m];
        let mut lengths = Vec::with_capacity(m - 1);
        let mut cur = 0;
        in_tree[0] = true;
        for _ in 1..m {
            let row = &self.d[idx[cur] * self.n..(idx[cur] + 1) * self.n];
            let mut next = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..m {
                if in_tree[v] {
                    continue;
                }
                let w = row[idx[v]];
                if w < scratch[v] {
                    scratch[v] = w;
                }
                if scratch[v] < best {
                    best = scratch[v];
                    next = v;
                }
            }
            in_tree[next] = true;
            lengths.push(best);
            cur = next;
        }
        compensated_sum(lengths)
    }
}

/// Class tree lengths of a two-coloring, dense where possible.
enum Evaluator<'a> {
    Dense(DenseMetric),
    Sparse(&'a PointCloud, Metric),
}

impl<'a> Evaluator<'a> {
    fn new(cloud: &'a PointCloud, metric: Metric) -> Evaluator<'a> {
        if !metric.is_hex() && cloud.len() <= DENSE_LIMIT {
            Evaluator::Dense(DenseMetric::new(cloud, metric))
        } else {
            Evaluator::Sparse(cloud, metric)
        }
    }

    fn class_length(&self, idx: &[usize], scratch: &mut Vec<f64>) -> Result<f64> {
        match self {
            Evaluator::Dense(d) => Ok(d.tree_length(idx, scratch)),
            Evaluator::Sparse(cloud, metric) => class_tree_length(cloud, idx, *metric),
        }
    }
}

fn whole_tree_length(cloud: &PointCloud, metric: Metric) -> Result<f64> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let len = mst(cloud, metric)?.total_length();
    if !(len > 0.0) {
        return Err(Error::ZeroDenominator("the whole tree has length zero".into()));
    }
    Ok(len)
}

fn labels_from_mask(n: usize, mask: u64) -> Vec<u32> {
    (0..n)
        .map(|k| if k > 0 && mask >> (k - 1) & 1 == 1 { 1 } else { 0 })
        .collect()
}

/// Lexicographic order on label vectors with point 0 fixed to class 0.
fn lex_key(n: usize, mask: u64) -> u64 {
    (1..n).fold(0u64, |acc, k| (acc << 1) | (mask >> (k - 1) & 1))
}

#[derive(Debug, Clone, Copy)]
struct Best {
    ratio: f64,
    key: u64,
    mask: u64,
}

impl Best {
    const NONE: Best = Best {
        ratio: f64::NEG_INFINITY,
        key: u64::MAX,
        mask: 0,
    };

    fn better(self, other: Best) -> Best {
        if other.ratio > self.ratio + RATIO_TIE {
            other
        } else if self.ratio > other.ratio + RATIO_TIE {
            self
        } else if other.key < self.key {
            other
        } else {
            self
        }
    }
}

/// The maximum MST-ratio over all splits into two non-empty classes, by
/// enumeration.
///
/// Point 0 stays in class 0, which visits each unordered partition once.
/// Among colorings within `1e-12` of the maximum the lexicographically
/// smallest label vector wins.
pub fn brute_force_max(
    cloud: &PointCloud,
    metric: Metric,
    max_points: usize,
) -> Result<(Coloring, RatioReport)> {
    let n = cloud.len();
    if n > max_points || n > 40 {
        return Err(Error::TooLarge {
            points: n,
            max: max_points.min(40),
        });
    }
    metric.check(cloud)?;
    if n < 2 {
        return Err(Error::ZeroDenominator("fewer than two points".into()));
    }
    let len_a = whole_tree_length(cloud, metric)?;
    let eval = Evaluator::new(cloud, metric);
    let total = 1u64 << (n - 1);
    const CHUNK: u64 = 1 << 12;
    let chunks: Vec<Result<Best>> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut best = Best::NONE;
            let mut scratch = Vec::new();
            let (mut b, mut w) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for mask in (c * CHUNK).max(1)..((c + 1) * CHUNK).min(total) {
                b.clear();
                w.clear();
                b.push(0);
                for k in 1..n {
                    if mask >> (k - 1) & 1 == 1 {
                        w.push(k)
                    } else {
                        b.push(k)
                    }
                }
                let ratio = (eval.class_length(&b, &mut scratch)?
                    + eval.class_length(&w, &mut scratch)?)
                    / len_a;
                best = best.better(Best {
                    ratio,
                    key: lex_key(n, mask),
                    mask,
                });
            }
            Ok(best)
        })
        .collect();
    let mut best = Best::NONE;
    for c in chunks {
        best = best.better(c?);
    }
    let coloring = Coloring::new(labels_from_mask(n, best.mask), 2)?;
    let report = mst_ratio(cloud, &coloring, metric)?;
    Ok((coloring, report))
}

/// Best of `samples` uniformly random two-colorings, reproducible from `seed`.
pub fn sample_max(
    cloud: &PointCloud,
    metric: Metric,
    samples: u64,
    seed: u64,
) -> Result<(Coloring, RatioReport)> {
    let n = cloud.len();
    metric.check(cloud)?;
    if n < 2 {
        return Err(Error::ZeroDenominator("fewer than two points".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("at least one sample is needed".into()));
    }
    let len_a = whole_tree_length(cloud, metric)?;
    let eval = Evaluator::new(cloud, metric);
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<Result<(f64, Vec<u32>)>> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut best = (f64::NEG_INFINITY, Vec::new());
            let mut scratch = Vec::new();
            let mut labels = vec![0u32; n];
            let (mut b, mut w) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for _ in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                b.clear();
                w.clear();
                for (k, l) in labels.iter_mut().enumerate() {
                    *l = rng.gen_range(0..2);
                    if *l == 0 { b.push(k) } else { w.push(k) }
                }
                let ratio = (eval.class_length(&b, &mut scratch)?
                    + eval.class_length(&w, &mut scratch)?)
                    / len_a;
                if ratio > best.0 {
                    best = (ratio, labels.clone());
                }
            }
            Ok(best)
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for c in chunks {
        let c = c?;
        if c.0 > best.0 {
            best = c;
        }
    }
    let coloring = Coloring::new(best.1, 2)?;
    let report = mst_ratio(cloud, &coloring, metric)?;
    Ok((coloring, report))
}

/// Tree lengths of the two classes of a coloring, plus the whole-cloud tree.
///
/// The cache remembers the labels it was computed for; using it with any
/// other coloring is an error.
#[derive(Debug, Clone)]
pub struct RatioCache {
    labels: Vec<u32>,
    metric: Metric,
    class_lengths: [f64; 2],
    len_a: f64,
}

impl RatioCache {
    pub fn new(cloud: &PointCloud, coloring: &Coloring, metric: Metric) -> Result<RatioCache> {
        let r = mst_ratio(cloud, coloring, metric)?;
        Ok(RatioCache {
            labels: coloring.labels().to_vec(),
            metric,
            class_lengths: [r.class_lengths[0], r.class_lengths[1]],
            len_a: r.len_a,
        })
    }

    pub fn ratio(&self) -> f64 {
        (self.class_lengths[0] + self.class_lengths[1]) / self.len_a
    }

    pub fn class_lengths(&self) -> [f64; 2] {
        self.class_lengths
    }

    pub fn len_a(&self) -> f64 {
        self.len_a
    }

    pub fn is_valid_for(&self, coloring: &Coloring) -> bool {
        coloring.arity() == 2 && self.labels == coloring.labels()
    }

    fn flipped_lengths(&self, cloud: &PointCloud, flip: usize, eval: Option<&Evaluator>) -> Result<[f64; 2]> {
        cloud.check_index(flip)?;
        let mut classes = [Vec::new(), Vec::new()];
        for (k, &l) in self.labels.iter().enumerate() {
            let l = if k == flip { 1 - l } else { l };
            classes[l as usize].push(k);
        }
        let mut scratch = Vec::new();
        let mut out = [0.0; 2];
        for (c, idx) in classes.iter().enumerate() {
            out[c] = match eval {
                Some(e) => e.class_length(idx, &mut scratch)?,
                None => class_tree_length(cloud, idx, self.metric)?,
            };
        }
        Ok(out)
    }

    fn apply(&mut self, flip: usize, lengths: [f64; 2]) {
        self.labels[flip] = 1 - self.labels[flip];
        self.class_lengths = lengths;
    }
}

/// The MST-ratio after moving point `flip` to the other class, recomputing
/// only the two class trees.
pub fn incremental_ratio(
    cloud: &PointCloud,
    coloring: &Coloring,
    cache: &RatioCache,
    flip: usize,
) -> Result<f64> {
    if !cache.is_valid_for(coloring) {
        return Err(Error::StaleCache);
    }
    let l = cache.flipped_lengths(cloud, flip, None)?;
    Ok((l[0] + l[1]) / cache.len_a)
}

/// Geometric cooling `T_k = t0 * alpha^k`; `t0 = 0` is pure hill climbing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub t0: f64,
    pub alpha: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            t0: 0.05,
            alpha: 0.999,
        }
    }
}

impl Schedule {
    pub fn greedy() -> Schedule {
        Schedule { t0: 0.0, alpha: 1.0 }
    }

    pub fn temperature(&self, step: usize) -> f64 {
        self.t0 * self.alpha.powi(step.min(i32::MAX as usize) as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchStep {
    pub step: usize,
    pub flip: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub seed: u64,
    pub initial_ratio: f64,
    /// Accepted moves, in order.
    pub steps: Vec<SearchStep>,
    pub best_coloring: Coloring,
    pub best_ratio: f64,
    /// No single flip of the best coloring improves it.
    pub local_max: bool,
}

impl SearchTrace {
    /// Columns `step,flip,ratio`; row 0 has an empty flip and the initial ratio.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,flip,ratio\n");
        let _ = writeln!(out, "0,,{}", crate::numfmt::fmt(self.initial_ratio));
        for s in &self.steps {
            let _ = writeln!(out, "{},{},{}", s.step + 1, s.flip, crate::numfmt::fmt(s.ratio));
        }
        out
    }
}

/// Single-flip local search with simulated annealing.
///
/// Each step proposes a uniformly random flip; improvements are always
/// accepted and a loss `d` is accepted with probability `exp(-d / T)`.
pub fn local_search(
    cloud: &PointCloud,
    metric: Metric,
    init: &Coloring,
    seed: u64,
    budget: usize,
    schedule: Schedule,
) -> Result<SearchTrace> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    if !(schedule.t0 >= 0.0 && schedule.alpha > 0.0 && schedule.alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("bad schedule {schedule:?}")));
    }
    let n = cloud.len();
    let mut cache = RatioCache::new(cloud, init, metric)?;
    let eval = Evaluator::new(cloud, metric);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial_ratio = cache.ratio();
    let mut current = initial_ratio;
    let mut best_ratio = initial_ratio;
    let mut best_labels = cache.labels.clone();
    let mut steps = Vec::new();
    for step in 0..budget {
        let flip = rng.gen_range(0..n);
        let lengths = cache.flipped_lengths(cloud, flip, Some(&eval))?;
        let ratio = (lengths[0] + lengths[1]) / cache.len_a;
        let delta = ratio - current;
        let t = schedule.temperature(step);
        let accept = if delta >= 0.0 {
            true
        } else if t > 0.0 {
            rng.gen::<f64>() < (delta / t).exp()
        } else {
            false
        };
        if accept {
            cache.apply(flip, lengths);
            current = ratio;
            steps.push(SearchStep { step, flip, ratio });
            if ratio > best_ratio + RATIO_TIE {
                best_ratio = ratio;
                best_labels = cache.labels.clone();
            }
        }
    }
    let best_coloring = Coloring::new(best_labels, 2)?;
    let best_cache = RatioCache::new(cloud, &best_coloring, metric)?;
    let mut local_max = true;
    for k in 0..n {
        let l = best_cache.flipped_lengths(cloud, k, Some(&eval))?;
        if (l[0] + l[1]) / best_cache.len_a > best_cache.ratio() + RATIO_TIE {
            local_max = false;
            break;
        }
    }
    Ok(SearchTrace {
        seed,
        initial_ratio,
        steps,
        best_coloring,
        best_ratio: best_cache.ratio(),
        local_max,
    })
}

/// A uniformly random two-coloring.
pub fn random_coloring(len: usize, seed: u64) -> Coloring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = (0..len).map(|_| rng.gen_range(0..2)).collect();
    Coloring::new(labels, 2).expect("labels are binary")
}
