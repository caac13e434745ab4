use serde::{Deserialize, Serialize};

use crate::constructions::Coloring;
use crate::error::{Error, Result};
use crate::lattice::{LatticeCoord, PointCloud};

/// Sublattice membership test for the lattice spanned by the two rows of `g`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sublattice {
    g: [[i64; 2]; 2],
    det: i64,
}

impl Sublattice {
    pub(crate) fn new(g: [[i64; 2]; 2]) -> Result<Sublattice> {
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det.abs() < 2 {
            return Err(Error::DegenerateSublattice(det.abs()));
        }
        Ok(Sublattice { g, det })
    }

    #[cfg(test)]
    pub(crate) fn index(&self) -> i64 {
        self.det.abs()
    }

    /// `true` iff `(di, dj) = x * g[0] + y * g[1]` for integers `x`, `y`.
    pub(crate) fn contains(&self, di: i64, dj: i64) -> bool {
        let g = self.g;
        let x = di * g[1][1] - dj * g[1][0];
        let y = dj * g[0][0] - di * g[0][1];
        x % self.det == 0 && y % self.det == 0
    }
}

/// Label 0 on points congruent to `offset` modulo the lattice spanned by the
/// rows of `generators`, label 1 elsewhere.
pub fn sublattice_coloring(
    cloud: &PointCloud,
    generators: [[i64; 2]; 2],
    offset: LatticeCoord,
) -> Result<Coloring> {
    let sub = Sublattice::new(generators)?;
    let coords = cloud.lattice_coords()?;
    if let Some(n) = cloud.period() {
        let n = n as i64;
        if !(sub.contains(n, 0) && sub.contains(0, n)) {
            return Err(Error::IncompatiblePeriod { period: n as u32 });
        }
    }
    let labels = coords
        .iter()
        .map(|c| if sub.contains(c.i - offset.i, c.j - offset.j) { 0 } else { 1 })
        .collect();
    Coloring::new(labels, 2)
}

/// The four hexagonal packings: one third, one quarter, one seventh and one
/// ninth of the points, with minimum distances `sqrt(3)`, 2, `sqrt(7)` and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PackingFamily {
    Third,
    Quarter,
    Seventh,
    Ninth,
}

impl PackingFamily {
    pub const ALL: [PackingFamily; 4] = [
        PackingFamily::Third,
        PackingFamily::Quarter,
        PackingFamily::Seventh,
        PackingFamily::Ninth,
    ];

    pub fn generators(self) -> [[i64; 2]; 2] {
        match self {
            PackingFamily::Third => [[1, 1], [2, -1]],
            PackingFamily::Quarter => [[2, 0], [0, 2]],
            PackingFamily::Seventh => [[1, 2], [3, -1]],
            PackingFamily::Ninth => [[3, 0], [0, 3]],
        }
    }

    pub fn index(self) -> u32 {
        match self {
            PackingFamily::Third => 3,
            PackingFamily::Quarter => 4,
            PackingFamily::Seventh => 7,
            PackingFamily::Ninth => 9,
        }
    }

    /// Squared minimum distance between points of the sublattice.
    pub fn min_sq_distance(self) -> u32 {
        match self {
            PackingFamily::Third => 3,
            PackingFamily::Quarter => 4,
            PackingFamily::Seventh => 7,
            PackingFamily::Ninth => 9,
        }
    }

    /// Limit of the MST-ratio on ever larger tori.
    pub fn limit_ratio(self) -> f64 {
        asymptotic_sublattice_ratio(self.index(), (self.min_sq_distance() as f64).sqrt())
    }

    pub fn name(self) -> &'static str {
        match self {
            PackingFamily::Third => "third",
            PackingFamily::Quarter => "quarter",
            PackingFamily::Seventh => "seventh",
            PackingFamily::Ninth => "ninth",
        }
    }

    pub fn parse(s: &str) -> Option<PackingFamily> {
        PackingFamily::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// The packing coloring of a hexagonal cloud.
pub fn packing_coloring(cloud: &PointCloud, family: PackingFamily) -> Result<Coloring> {
    if !cloud.basis().is_hexagonal() {
        return Err(Error::NotHexagonal);
    }
    sublattice_coloring(cloud, family.generators(), LatticeCoord::ORIGIN)
}

/// `(spacing + index - 1) / index`: the limiting ratio of an index-`m`
/// sublattice with minimum distance `spacing` inside a lattice of minimum
/// distance 1, where both trees use only the shortest available edges.
pub fn asymptotic_sublattice_ratio(index: u32, spacing: f64) -> f64 {
    (spacing + index as f64 - 1.0) / index as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate_rhombus, Basis, Topology};

    // Brute-force minimum distance among the label-0 points of a 20x20 window.
    fn min_blue_sq_distance(generators: [[i64; 2]; 2]) -> f64 {
        let hex = Basis::hexagonal();
        let cloud = generate_rhombus(&hex, 20, Topology::Plane).unwrap();
        let c = sublattice_coloring(&cloud, generators, LatticeCoord::ORIGIN).unwrap();
        let blue: Vec<LatticeCoord> = c
            .class(0)
            .iter()
            .map(|&k| cloud.coords().unwrap()[k])
            .collect();
        let mut best = f64::INFINITY;
        for (x, p) in blue.iter().enumerate() {
            for q in &blue[x + 1..] {
                let (di, dj) = ((q.i - p.i) as f64, (q.j - p.j) as f64);
                best = best.min(di * di + di * dj + dj * dj);
            }
        }
        best
    }

    #[test]
    fn sublattice_minimum_distances() {
        assert_eq!(min_blue_sq_distance([[1, 1], [2, -1]]), 3.0);
        assert_eq!(min_blue_sq_distance([[1, 2], [3, -1]]), 7.0);
        for f in PackingFamily::ALL {
            assert_eq!(min_blue_sq_distance(f.generators()), f.min_sq_distance() as f64);
            assert_eq!(Sublattice::new(f.generators()).unwrap().index(), f.index() as i64);
        }
    }

    #[test]
    fn quarter_on_even_torus() {
        for n in [4u32, 6, 8, 10] {
            let t = generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n).unwrap()).unwrap();
            let c = sublattice_coloring(&t, [[2, 0], [0, 2]], LatticeCoord::ORIGIN).unwrap();
            assert_eq!(c.class(0).len() as u32, n * n / 4);
        }
        let odd = generate_rhombus(&Basis::hexagonal(), 5, Topology::torus(5).unwrap()).unwrap();
        assert_eq!(
            packing_coloring(&odd, PackingFamily::Quarter),
            Err(Error::IncompatiblePeriod { period: 5 })
        );
    }

    #[test]
    fn degenerate_generators() {
        let c = generate_rhombus(&Basis::hexagonal(), 3, Topology::Plane).unwrap();
        assert_eq!(
            sublattice_coloring(&c, [[1, 0], [0, 1]], LatticeCoord::ORIGIN),
            Err(Error::DegenerateSublattice(1))
        );
        assert_eq!(
            sublattice_coloring(&c, [[2, 0], [4, 0]], LatticeCoord::ORIGIN),
            Err(Error::DegenerateSublattice(0))
        );
    }

    #[test]
    fn offsets_select_cosets() {
        let t = generate_rhombus(&Basis::hexagonal(), 6, Topology::torus(6).unwrap()).unwrap();
        let mut total = 0;
        for off in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let c = sublattice_coloring(&t, [[2, 0], [0, 2]], LatticeCoord::from(off)).unwrap();
            total += c.class(0).len();
        }
        assert_eq!(total, 36);
    }

    #[test]
    fn asymptotic_values() {
        assert_eq!(asymptotic_sublattice_ratio(4, 2.0), 1.25);
        assert!((asymptotic_sublattice_ratio(9, 3.0) - 11.0 / 9.0).abs() < 1e-15);
        let s3 = 3f64.sqrt();
        assert!((asymptotic_sublattice_ratio(3, s3) - (2.0 + s3) / 3.0).abs() < 1e-15);
    }
}
