use serde::Serialize;

use crate::lattice::{hex_distance, LatticeCoord};
use crate::union_find::DisjointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Up,
    Down,
}

/// A unit triangle of the hexagonal lattice.
///
/// `Up` at `(i, j)` has corners `(i, j), (i+1, j), (i, j+1)`; `Down` at
/// `(i, j)` has corners `(i+1, j), (i, j+1), (i+1, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triangle {
    pub i: i64,
    pub j: i64,
    pub orientation: Orientation,
}

impl Triangle {
    pub const fn new(i: i64, j: i64, orientation: Orientation) -> Triangle {
        Triangle { i, j, orientation }
    }

    pub fn vertices(&self) -> [LatticeCoord; 3] {
        let (i, j) = (self.i, self.j);
        match self.orientation {
            Orientation::Up => [
                LatticeCoord::new(i, j),
                LatticeCoord::new(i + 1, j),
                LatticeCoord::new(i, j + 1),
            ],
            Orientation::Down => [
                LatticeCoord::new(i + 1, j),
                LatticeCoord::new(i, j + 1),
                LatticeCoord::new(i + 1, j + 1),
            ],
        }
    }

    /// The three triangles sharing an edge with this one, each paired with
    /// the shared edge.
    pub fn edge_neighbors(&self) -> [(Triangle, [LatticeCoord; 2]); 3] {
        let (i, j) = (self.i, self.j);
        let c = LatticeCoord::new;
        match self.orientation {
            Orientation::Up => [
                (Triangle::new(i, j - 1, Orientation::Down), [c(i, j), c(i + 1, j)]),
                (Triangle::new(i - 1, j, Orientation::Down), [c(i, j), c(i, j + 1)]),
                (Triangle::new(i, j, Orientation::Down), [c(i + 1, j), c(i, j + 1)]),
            ],
            Orientation::Down => [
                (Triangle::new(i, j + 1, Orientation::Up), [c(i, j + 1), c(i + 1, j + 1)]),
                (Triangle::new(i + 1, j, Orientation::Up), [c(i + 1, j), c(i + 1, j + 1)]),
                (Triangle::new(i, j, Orientation::Up), [c(i + 1, j), c(i, j + 1)]),
            ],
        }
    }

    /// The six triangles around a lattice vertex.
    pub fn around(v: LatticeCoord) -> [Triangle; 6] {
        let (i, j) = (v.i, v.j);
        [
            Triangle::new(i, j, Orientation::Up),
            Triangle::new(i - 1, j, Orientation::Up),
            Triangle::new(i, j - 1, Orientation::Up),
            Triangle::new(i - 1, j, Orientation::Down),
            Triangle::new(i, j - 1, Orientation::Down),
            Triangle::new(i - 1, j - 1, Orientation::Down),
        ]
    }
}

/// The triangles of `kH`, the hexagon of hexagonal radius `k` around the origin.
pub fn hexagon_triangles(k: u32) -> Vec<Triangle> {
    let k = i64::from(k);
    let mut out = Vec::with_capacity((6 * k * k) as usize);
    for j in -k - 1..=k {
        for i in -k - 1..=k {
            for o in [Orientation::Up, Orientation::Down] {
                let t = Triangle::new(i, j, o);
                if t.vertices().iter().all(|v| hex_distance(v.i, v.j) <= k as u64) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A set of unit triangles on the hexagonal torus of period `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleRegion {
    n: i64,
    member: Vec<bool>,
}

impl TriangleRegion {
    pub fn empty(n: u32) -> TriangleRegion {
        let n = i64::from(n);
        TriangleRegion {
            n,
            member: vec![false; (2 * n * n) as usize],
        }
    }

    pub fn period(&self) -> u32 {
        self.n as u32
    }

    pub(crate) fn slot(&self, t: Triangle) -> usize {
        let (i, j) = (t.i.rem_euclid(self.n), t.j.rem_euclid(self.n));
        (2 * (j * self.n + i)) as usize + usize::from(t.orientation == Orientation::Down)
    }

    fn triangle_at(&self, slot: usize) -> Triangle {
        let cell = (slot / 2) as i64;
        let o = if slot % 2 == 0 { Orientation::Up } else { Orientation::Down };
        Triangle::new(cell % self.n, cell / self.n, o)
    }

    pub(crate) fn slots(&self) -> usize {
        self.member.len()
    }

    pub fn insert(&mut self, t: Triangle) {
        let s = self.slot(t);
        self.member[s] = true;
    }

    pub fn contains(&self, t: Triangle) -> bool {
        self.member[self.slot(t)]
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.contains(&true)
    }

    /// Members in canonical position, ordered by `(j, i, orientation)`.
    pub fn triangles(&self) -> Vec<Triangle> {
        (0..self.slots())
            .filter(|&s| self.member[s])
            .map(|s| self.triangle_at(s))
            .collect()
    }

    pub fn complement(&self) -> TriangleRegion {
        TriangleRegion {
            n: self.n,
            member: self.member.iter().map(|&m| !m).collect(),
        }
    }

    /// Components under shared-edge adjacency, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Triangle>> {
        let mut ds = DisjointSet::new(self.slots());
        for s in 0..self.slots() {
            if !self.member[s] {
                continue;
            }
            for (nb, _) in self.triangle_at(s).edge_neighbors() {
                let t = self.slot(nb);
                if self.member[t] {
                    ds.union(s, t);
                }
            }
        }
        ds.components()
            .into_iter()
            .filter(|c| self.member[c[0]])
            .map(|c| c.into_iter().map(|s| self.triangle_at(s)).collect())
            .collect()
    }

    /// Lattice vertices incident to triangles both inside and outside the region.
    pub fn frontier_vertices(&self) -> Vec<LatticeCoord> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for i in 0..self.n {
                let v = LatticeCoord::new(i, j);
                let inside = Triangle::around(v).map(|t| self.contains(t));
                if inside.contains(&true) && inside.contains(&false) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Unit edges separating the region from its complement, each reported
    /// from the inside triangle.
    pub fn frontier_edges(&self) -> Vec<[LatticeCoord; 2]> {
        let mut out = Vec::new();
        for t in self.triangles() {
            for (nb, e) in t.edge_neighbors() {
                if !self.contains(nb) {
                    out.push(e);
                }
            }
        }
        out
    }
}
