//! Thickenings of a subset of the hexagonal torus and the hierarchy of rooms,
//! houses, blocks and compounds they induce.
//!
//! The thickening `T_k(B)` is the union of the hexagons `kH + u`, `u in B`,
//! stored as a set of unit triangles. Two hexagons overlap, touch, or are
//! disjoint when the hexagonal distance of their centers is less than, equal
//! to, or larger than `2k`. The components of `B` under the threshold graphs
//!
//! | structure | edge `uv` when                                    |
//! |-----------|---------------------------------------------------|
//! | room      | `hex <= 2k - 1`                                   |
//! | house     | room edge, or `hex = 2k` and `euclid < 2k`        |
//! | block     | `hex <= 2k`                                       |
//! | compound  | block edge, or `hex = 2k + 1` and `euclid < 2k+1` |
//!
//! are nested, so `r_k >= h_k >= b_k >= c_k >= r_{k+1}`. On the torus an edge
//! exists when any representative of the pair satisfies the predicate.

mod cost;
mod triangles;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{hex_distance, torus_translates, LatticeCoord, PointCloud};
use crate::union_find::DisjointSet;

pub use cost::{
    audit_cost_gaps, cost_table, edge_cost, gap_bounds, CostRow, CostTable, GapAudit, GapRow, CREDIT,
};
pub use triangles::{hexagon_triangles, Orientation, Triangle, TriangleRegion};

/// Validated subset of a hexagonal torus.
struct TorusSubset<'a> {
    n: i64,
    coords: &'a [LatticeCoord],
    members: Vec<usize>,
}

impl<'a> TorusSubset<'a> {
    fn new(cloud: &'a PointCloud, subset: &[usize], k: u32) -> Result<TorusSubset<'a>> {
        if !cloud.basis().is_hexagonal() {
            return Err(Error::NotHexagonal);
        }
        let n = cloud.period().ok_or_else(|| {
            Error::TopologyMismatch("thickenings are computed on the torus".into())
        })?;
        if k == 0 {
            return Err(Error::InvalidParameter("thickening level must be at least 1".into()));
        }
        if n <= 4 * k {
            return Err(Error::PeriodTooSmall { period: n, k });
        }
        if subset.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut members = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            cloud.check_index(m)?;
        }
        Ok(TorusSubset {
            n: i64::from(n),
            coords: cloud.lattice_coords()?,
            members,
        })
    }

    fn coord(&self, m: usize) -> LatticeCoord {
        self.coords[self.members[m]]
    }

    /// `(hex, squared Euclidean)` length of every representative of a pair.
    fn representatives(&self, a: usize, b: usize) -> impl Iterator<Item = (u64, i64)> {
        let (p, q) = (self.coord(a), self.coord(b));
        torus_translates(q.i - p.i, q.j - p.j, self.n)
            .map(|(i, j)| (hex_distance(i, j), i * i + i * j + j * j))
    }

    fn component_count(&self, edge: impl Fn(u64, i64) -> bool) -> usize {
        self.partition(edge).set_count()
    }

    fn partition(&self, edge: impl Fn(u64, i64) -> bool) -> DisjointSet {
        let m = self.members.len();
        let mut ds = DisjointSet::new(m);
        for a in 0..m {
            for b in a + 1..m {
                if self.representatives(a, b).any(|(h, s)| edge(h, s)) {
                    ds.union(a, b);
                }
            }
        }
        ds
    }
}

fn room_edge(k: u64) -> impl Fn(u64, i64) -> bool {
    move |h, _| h < 2 * k
}

fn house_edge(k: u64) -> impl Fn(u64, i64) -> bool {
    move |h, s| h < 2 * k || (h == 2 * k && s < (4 * k * k) as i64)
}

fn block_edge(k: u64) -> impl Fn(u64, i64) -> bool {
    move |h, _| h <= 2 * k
}

fn compound_edge(k: u64) -> impl Fn(u64, i64) -> bool {
    move |h, s| h <= 2 * k || (h == 2 * k + 1 && s < ((2 * k + 1) * (2 * k + 1)) as i64)
}

/// `T_k(B)` for `B` given by indices into a cloud on the hexagonal torus.
pub fn thickening(cloud: &PointCloud, subset: &[usize], k: u32) -> Result<TriangleRegion> {
    let b = TorusSubset::new(cloud, subset, k)?;
    Ok(region_of(&b, k, &mut |_, _| {}))
}

fn region_of(b: &TorusSubset, k: u32, visit: &mut dyn FnMut(usize, usize)) -> TriangleRegion {
    let mut region = TriangleRegion::empty(b.n as u32);
    let hexagon = hexagon_triangles(k);
    for m in 0..b.members.len() {
        let u = b.coord(m);
        for t in &hexagon {
            let t = Triangle::new(t.i + u.i, t.j + u.j, t.orientation);
            region.insert(t);
            visit(m, region.slot(t));
        }
    }
    region
}

/// Backyards of `T_k(B)` and how many houses each one touches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Backyards {
    pub k: u32,
    /// Backyards adjacent to at most two houses.
    pub alpha: usize,
    /// Backyards adjacent to three or more houses.
    pub beta: usize,
    pub components: Vec<Vec<Triangle>>,
    pub adjacent_houses: Vec<usize>,
}

/// The components of the complement of `T_k(B)`, with adjacency to houses
/// measured through shared triangle edges.
pub fn backyards(cloud: &PointCloud, subset: &[usize], k: u32) -> Result<Backyards> {
    let b = TorusSubset::new(cloud, subset, k)?;
    Ok(backyards_of(&b, k))
}

fn backyards_of(b: &TorusSubset, k: u32) -> Backyards {
    let mut houses = b.partition(house_edge(u64::from(k)));
    let house_of: Vec<usize> = houses.labels();
    let mut owner = vec![usize::MAX; 2 * (b.n * b.n) as usize];
    // overlapping hexagons belong to one room, hence to one house
    let region = region_of(b, k, &mut |m, slot| owner[slot] = house_of[m]);
    let components = region.complement().components();
    let mut adjacent_houses = Vec::with_capacity(components.len());
    for comp in &components {
        let mut touched: Vec<usize> = comp
            .iter()
            .flat_map(|t| t.edge_neighbors())
            .filter(|(nb, _)| region.contains(*nb))
            .map(|(nb, _)| owner[region.slot(nb)])
            .collect();
        touched.sort_unstable();
        touched.dedup();
        adjacent_houses.push(touched.len());
    }
    Backyards {
        k,
        alpha: adjacent_houses.iter().filter(|&&h| h <= 2).count(),
        beta: adjacent_houses.iter().filter(|&&h| h >= 3).count(),
        components,
        adjacent_houses,
    }
}

/// Counts of one level of the hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HabitatLevel {
    pub k: u32,
    pub rooms: usize,
    pub houses: usize,
    pub blocks: usize,
    pub compounds: usize,
    /// Rooms of level `k + 1`.
    pub next_rooms: usize,
    pub backyards: usize,
    pub alpha: usize,
    pub beta: usize,
}

impl HabitatLevel {
    /// `r_k >= h_k >= b_k >= c_k >= r_{k+1} >= 1`.
    pub fn is_monotone(&self) -> bool {
        self.rooms >= self.houses
            && self.houses >= self.blocks
            && self.blocks >= self.compounds
            && self.compounds >= self.next_rooms
            && self.next_rooms >= 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HabitatSummary {
    pub period: u32,
    pub points: usize,
    pub levels: Vec<HabitatLevel>,
    /// Smallest `l >= 0` with a single room at level `l + 1`.
    pub depth: u32,
}

impl HabitatSummary {
    pub fn level(&self, k: u32) -> Option<&HabitatLevel> {
        self.levels.iter().find(|l| l.k == k)
    }
}

/// Per-level counts for `1 <= k <= k_max`.
pub fn habitat_summary(cloud: &PointCloud, subset: &[usize], k_max: u32) -> Result<HabitatSummary> {
    let b = TorusSubset::new(cloud, subset, k_max)?;
    let mut levels = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let kk = u64::from(k);
        let yards = backyards_of(&b, k);
        levels.push(HabitatLevel {
            k,
            rooms: b.component_count(room_edge(kk)),
            houses: b.component_count(house_edge(kk)),
            blocks: b.component_count(block_edge(kk)),
            compounds: b.component_count(compound_edge(kk)),
            next_rooms: b.component_count(room_edge(kk + 1)),
            backyards: yards.components.len(),
            alpha: yards.alpha,
            beta: yards.beta,
        });
    }
    // every pair is within hexagonal distance n on the torus
    let mut depth = 0u32;
    while b.component_count(room_edge(u64::from(depth) + 1)) > 1 {
        depth += 1;
    }
    Ok(HabitatSummary {
        period: b.n as u32,
        points: b.members.len(),
        levels,
        depth,
    })
}

/// `beta_k <= 2 h_k - 2 b_k + 2`; `false` when level `k` was not computed.
pub fn check_backyard_bound(summary: &HabitatSummary, k: u32) -> bool {
    summary.level(k).is_some_and(|l| {
        l.beta as i64 <= 2 * l.houses as i64 - 2 * l.blocks as i64 + 2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{fig5, packing_coloring, PackingFamily};
    use crate::lattice::{generate_rhombus, Basis, Topology};
    use crate::spanning::{filtered_forest, hex_mst};

    fn torus(n: u32) -> PointCloud {
        generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n).unwrap()).unwrap()
    }

    fn at(cloud: &PointCloud, i: i64, j: i64) -> usize {
        cloud.index_of(LatticeCoord::new(i, j)).unwrap()
    }

    #[test]
    fn singleton() {
        let t = torus(8);
        assert_eq!(thickening(&t, &[0], 1).unwrap().len(), 6);
        assert_eq!(thickening(&t, &[5], 1).unwrap().len(), 6);
        let s = habitat_summary(&t, &[0], 1).unwrap();
        let l = &s.levels[0];
        assert_eq!((l.rooms, l.houses, l.blocks, l.compounds), (1, 1, 1, 1));
        assert_eq!((l.backyards, l.alpha, l.beta), (1, 1, 0));
        assert_eq!(s.depth, 0);
        assert!(check_backyard_bound(&s, 1));
        assert!(!check_backyard_bound(&s, 2));
    }

    #[test]
    fn hexagons_touch_at_distance_2k() {
        let t = torus(12);
        for k in 1..=2u32 {
            let d = 2 * i64::from(k);
            let a = thickening(&t, &[0], k).unwrap();
            for (i, j) in [(d, 0), (0, d), (d, -d), (d - 1, 1)] {
                let other = thickening(&t, &[at(&t, i, j)], k).unwrap();
                let shared = a.triangles().iter().filter(|x| other.contains(**x)).count();
                assert_eq!(shared, 0, "k={k} offset ({i},{j})");
                let fa = a.frontier_vertices();
                assert!(other.frontier_vertices().iter().any(|v| fa.contains(v)));
            }
            let near = thickening(&t, &[at(&t, d - 1, 0)], k).unwrap();
            assert!(a.triangles().iter().any(|x| near.contains(*x)));
        }
    }

    #[test]
    fn errors() {
        let t = torus(8);
        assert_eq!(
            habitat_summary(&t, &[0], 2).unwrap_err(),
            Error::PeriodTooSmall { period: 8, k: 2 }
        );
        assert_eq!(habitat_summary(&t, &[], 1).unwrap_err(), Error::EmptySet);
        let plane = generate_rhombus(&Basis::hexagonal(), 8, Topology::Plane).unwrap();
        assert!(matches!(thickening(&plane, &[0], 1), Err(Error::TopologyMismatch(_))));
    }

    #[test]
    fn fig5_counts() {
        let (cloud, coloring, _) = fig5().unwrap();
        let s = habitat_summary(&cloud, &coloring.class(0), 3).unwrap();
        let l = &s.levels[0];
        assert_eq!((l.rooms, l.houses, l.blocks, l.compounds), (5, 4, 3, 2));
        assert_eq!(l.next_rooms, 1);
        assert_eq!(s.depth, 1);
        assert!(s.levels.iter().all(HabitatLevel::is_monotone));
    }

    #[test]
    fn quarter_packing() {
        let t = torus(8);
        let b = packing_coloring(&t, PackingFamily::Quarter).unwrap().class(0);
        let s = habitat_summary(&t, &b, 1).unwrap();
        let l = &s.levels[0];
        assert_eq!((l.rooms, l.houses, l.blocks, l.compounds), (16, 16, 1, 1));
        // one triangular backyard per down triangle of the sublattice
        assert_eq!(l.beta, 32);
        assert!(check_backyard_bound(&s, 1));
        let y = backyards(&t, &b, 1).unwrap();
        assert!(y.adjacent_houses.iter().all(|&h| h == 3));
    }

    #[test]
    fn third_packing_leaves_no_backyard() {
        let t = torus(9);
        let b = packing_coloring(&t, PackingFamily::Third).unwrap().class(0);
        assert!(thickening(&t, &b, 1).unwrap().complement().is_empty());
        let s = habitat_summary(&t, &b, 1).unwrap();
        assert_eq!((s.levels[0].backyards, s.levels[0].beta), (0, 0));
        assert!(check_backyard_bound(&s, 1));
    }

    #[test]
    fn full_set_has_no_backyard() {
        let t = torus(6);
        let all: Vec<usize> = (0..36).collect();
        let y = backyards(&t, &all, 1).unwrap();
        assert!(y.components.is_empty());
    }

    #[test]
    fn rooms_agree_with_filtered_hex_tree() {
        let t = torus(10);
        let b: Vec<usize> = (0..100).filter(|k| k % 7 == 0 || k % 11 == 3).collect();
        let s = habitat_summary(&t, &b, 2).unwrap();
        let tree = hex_mst(&t.subset(&b)).unwrap();
        for l in &s.levels {
            assert_eq!(l.rooms, filtered_forest(&tree, 2 * u64::from(l.k) - 1).component_count());
        }
    }
}
