use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::hex_distance;

/// Credit handed to every short edge.
pub const CREDIT: f64 = 0.25;

/// Cost of an edge of Euclidean length `len`: `(len - 5/4) / CREDIT`.
pub fn edge_cost(len: f64) -> f64 {
    (len - 1.25) / CREDIT
}

fn w(k: u32) -> f64 {
    let k = f64::from(k);
    edge_cost((4.0 * k * k - 2.0 * k + 1.0).sqrt())
}

fn x(k: u32) -> f64 {
    edge_cost(2.0 * f64::from(k))
}

fn y(k: u32) -> f64 {
    let k = f64::from(k);
    edge_cost((4.0 * k * k + 2.0 * k + 1.0).sqrt())
}

// z_0 = 0 by convention
fn z(k: u32) -> f64 {
    if k == 0 {
        0.0
    } else {
        edge_cost(2.0 * f64::from(k) + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostRow {
    pub hex_len: u64,
    pub sq_len: u64,
    pub euclid_len: f64,
    pub cost: f64,
}

impl CostRow {
    /// The cost cut (not rounded) to two decimals.
    pub fn truncated_cost(&self) -> f64 {
        (self.cost * 100.0 + 1e-9).floor() / 100.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostTable {
    pub credit: f64,
    pub rows: Vec<CostRow>,
}

/// One row per distinct Euclidean length of a lattice vector whose hexagonal
/// length lies in `2..=2 k_max + 1`.
pub fn cost_table(k_max: u32) -> Result<CostTable> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let top = 2 * u64::from(k_max) + 1;
    let mut rows = Vec::new();
    for h in 2..=top {
        let h_i = h as i64;
        let mut sq: Vec<u64> = (0..=h_i)
            .flat_map(|i| (-h_i..=h_i).map(move |j| (i, j)))
            .filter(|&(i, j)| hex_distance(i, j) == h)
            .map(|(i, j)| (i * i + i * j + j * j) as u64)
            .collect();
        sq.sort_unstable();
        sq.dedup();
        for s in sq {
            let euclid_len = (s as f64).sqrt();
            rows.push(CostRow {
                hex_len: h,
                sq_len: s,
                euclid_len,
                cost: edge_cost(euclid_len),
            });
        }
    }
    Ok(CostTable {
        credit: CREDIT,
        rows,
    })
}

/// Gaps `w_k - z_{k-1}`, `x_k - w_k`, `y_k - x_k`, `z_k - y_k` at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub k: u32,
    pub gaps: [f64; 4],
    pub holds: [bool; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapAudit {
    pub rows: Vec<GapRow>,
}

/// Closed intervals for the four gaps.
pub fn gap_bounds() -> [(f64, f64); 4] {
    let s3 = 3f64.sqrt();
    [
        (2.0, 4.0 * (s3 - 1.0)),
        (4.0 * (2.0 - s3), 2.0),
        (2.0, 4.0 * (7f64.sqrt() - 2.0)),
        (2f64.sqrt(), 2.0),
    ]
}

const GAP_TOL: f64 = 1e-12;

impl GapAudit {
    /// Every interval holds for every `k >= 2`.
    pub fn holds(&self) -> bool {
        self.rows.iter().filter(|r| r.k >= 2).all(|r| r.holds.iter().all(|&h| h))
    }

    /// `(k, gap index)` of every violated interval, `k = 1` included.
    pub fn violations(&self) -> Vec<(u32, usize)> {
        self.rows
            .iter()
            .flat_map(|r| (0..4).filter(|&g| !r.holds[g]).map(move |g| (r.k, g)))
            .collect()
    }
}

/// Evaluates the four gap intervals for `1 <= k <= k_max`.
///
/// At `k = 1` the first gap is `w_1 - z_0 = w_1 < 2`; it is reported as a
/// violation but excluded from [`GapAudit::holds`].
pub fn audit_cost_gaps(k_max: u32) -> Result<GapAudit> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let bounds = gap_bounds();
    let rows = (1..=k_max)
        .map(|k| {
            let gaps = [w(k) - z(k - 1), x(k) - w(k), y(k) - x(k), z(k) - y(k)];
            let mut holds = [false; 4];
            for g in 0..4 {
                let (lo, hi) = bounds[g];
                holds[g] = gaps[g] >= lo - GAP_TOL && gaps[g] <= hi + GAP_TOL;
            }
            GapRow { k, gaps, holds }
        })
        .collect();
    Ok(GapAudit { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_rows() {
        let t = cost_table(1).unwrap();
        let got: Vec<(u64, u64, f64)> = t
            .rows
            .iter()
            .map(|r| (r.hex_len, r.sq_len, r.truncated_cost()))
            .collect();
        assert_eq!(got, vec![(2, 3, 1.92), (2, 4, 3.0), (3, 7, 5.58), (3, 9, 7.0)]);
        for r in &t.rows {
            assert!((r.cost - (r.euclid_len - 1.25) / t.credit).abs() < 1e-15);
        }
    }

    #[test]
    fn named_costs_match_rows() {
        let t = cost_table(3).unwrap();
        for k in 1..=3u32 {
            for v in [w(k), x(k), y(k), z(k)] {
                assert!(t.rows.iter().any(|r| (r.cost - v).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn k1_anomaly_is_reported() {
        let a = audit_cost_gaps(3).unwrap();
        assert!(a.holds());
        assert_eq!(a.violations(), vec![(1, 0)]);
        assert!((a.rows[0].gaps[0] - w(1)).abs() < 1e-15);
        assert!(audit_cost_gaps(0).is_err());
    }

    #[test]
    fn last_gap_approaches_two() {
        let a = audit_cost_gaps(1000).unwrap();
        let g = a.rows[999].gaps[3];
        assert!(g < 2.0 && g > 1.999);
    }
}
