//! Minimum spanning trees under the four metrics, hexagonal-length spanning
//! trees with the (hex length, Euclidean length, index) tie order, and the
//! threshold forests obtained by cutting a tree at a hexagonal length.
//!
//! Lattice clouds use Kruskal over candidate edges generated from lattice
//! offsets inside a growing radius. Once the candidate graph is connected the
//! result is a minimum spanning tree of the complete graph, because every
//! omitted edge is longer than every candidate. Free clouds use dense Prim,
//! which is also exported as an independent reference implementation.

use serde::Serialize;

use crate::error::Result;
use crate::lattice::{hex_distance, torus_translates, Basis, LatticeCoord, Metric, PointCloud};
use crate::union_find::DisjointSet;

/// A tree edge between points `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// Squared Euclidean length (an exact integer for the hexagonal and integer lattices).
    pub sq_len: f64,
    /// Hexagonal length, present for clouds on the unit hexagonal lattice.
    pub hex_len: Option<u64>,
}

impl Edge {
    pub fn length(&self) -> f64 {
        self.sq_len.sqrt()
    }
}

/// Sum with Neumaier compensation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A spanning tree together with its Euclidean length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanningTree {
    edges: Vec<Edge>,
    total_length: f64,
    point_count: usize,
}

impl SpanningTree {
    fn from_edges(edges: Vec<Edge>, point_count: usize) -> Self {
        let total_length = compensated_sum(edges.iter().map(Edge::length));
        Self {
            edges,
            total_length,
            point_count,
        }
    }

    fn empty(point_count: usize) -> Self {
        Self::from_edges(Vec::new(), point_count)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Euclidean length, whatever metric built the tree.
    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn longest_edge(&self) -> f64 {
        self.edges.iter().map(Edge::length).fold(0.0, f64::max)
    }

    /// `true` when the edges form an acyclic graph touching every point.
    pub fn is_spanning_tree(&self) -> bool {
        if self.edges.len() != self.point_count.saturating_sub(1) {
            return false;
        }
        let mut ds = DisjointSet::new(self.point_count);
        self.edges
            .iter()
            .all(|e| e.a < e.b && e.b < self.point_count && ds.union(e.a, e.b))
    }

    /// `{"edges": [[a, b], ...], "length": L}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "edges": self.edges.iter().map(|e| [e.a, e.b]).collect::<Vec<_>>(),
            "length": self.total_length,
        })
    }
}

/// The sub-forest of a tree retaining edges of hexagonal length at most `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    threshold: u64,
    components: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Forest {
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Cuts `tree` at hexagonal length `threshold`.
///
/// For a tree built by [`hex_mst`] the components equal those of the graph
/// joining every pair at hexagonal distance at most `threshold`.
pub fn filtered_forest(tree: &SpanningTree, threshold: u64) -> Forest {
    let edges: Vec<Edge> = tree
        .edges
        .iter()
        .filter(|e| e.hex_len.is_some_and(|h| h <= threshold))
        .copied()
        .collect();
    let mut ds = DisjointSet::new(tree.point_count);
    for e in &edges {
        ds.union(e.a, e.b);
    }
    Forest {
        threshold,
        components: ds.components(),
        edges,
    }
}

/// A minimum spanning tree of `cloud` under `metric`.
///
/// Hexagonal metrics delegate to the hexagonal-length tree of [`hex_mst`].
/// The Euclidean length of a minimum spanning tree does not depend on how
/// ties are broken; the edge set is made deterministic by ordering candidates
/// by `(length, a, b)`.
pub fn mst(cloud: &PointCloud, metric: Metric) -> Result<SpanningTree> {
    metric.check(cloud)?;
    if cloud.len() <= 1 {
        return Ok(SpanningTree::empty(cloud.len()));
    }
    if !cloud.is_lattice() {
        return prim(cloud, metric);
    }
    Ok(lattice_kruskal(cloud, metric))
}

/// The spanning tree obtained by adding edges in order of non-decreasing
/// hexagonal length, then Euclidean length, then `(a, b)`.
///
/// Distances are measured on the torus when the cloud is toroidal.
pub fn hex_mst(cloud: &PointCloud) -> Result<SpanningTree> {
    let metric = Metric::hex_for(cloud.topology());
    metric.check(cloud)?;
    if cloud.len() <= 1 {
        return Ok(SpanningTree::empty(cloud.len()));
    }
    Ok(lattice_kruskal(cloud, metric))
}

// Ordering key of the representative joining two points.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key {
    hex: u64,
    sq: f64,
}

impl Key {
    fn cmp(&self, other: &Key) -> std::cmp::Ordering {
        self.hex.cmp(&other.hex).then(self.sq.total_cmp(&other.sq))
    }
}

fn offset_key(metric: Metric, basis: &Basis, di: i64, dj: i64) -> Key {
    let sq = basis.sq_norm(di, dj);
    if metric.is_hex() {
        Key {
            hex: hex_distance(di, dj),
            sq,
        }
    } else {
        Key { hex: 0, sq }
    }
}

/// Minimal key over the representatives of the pair `(p, q)`, with the
/// minimizing offset.
fn pair_key(metric: Metric, cloud: &PointCloud, p: usize, q: usize) -> (Key, Option<(i64, i64)>) {
    match cloud.coords() {
        None => {
            let (a, b) = (cloud.cartesian()[p], cloud.cartesian()[q]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            (Key { hex: 0, sq: dx * dx + dy * dy }, None)
        }
        Some(c) => {
            let (di, dj) = (c[q].i - c[p].i, c[q].j - c[p].j);
            let basis = cloud.basis();
            let best = match (metric.is_torus(), cloud.period()) {
                (true, Some(n)) => torus_translates(di, dj, n as i64)
                    .map(|(x, y)| (offset_key(metric, basis, x, y), (x, y)))
                    .min_by(|a, b| a.0.cmp(&b.0))
                    .expect("nine translates"),
                _ => (offset_key(metric, basis, di, dj), (di, dj)),
            };
            (best.0, Some(best.1))
        }
    }
}

fn make_edge(cloud: &PointCloud, a: usize, b: usize, key: Key, offset: Option<(i64, i64)>) -> Edge {
    let hex_len = match offset {
        Some((di, dj)) if cloud.basis().is_hexagonal() => Some(hex_distance(di, dj)),
        _ => None,
    };
    Edge {
        a: a.min(b),
        b: a.max(b),
        sq_len: key.sq,
        hex_len,
    }
}

/// Dense Prim, `O(V^2)` time and `O(V)` memory.
///
/// Works for every metric; for hexagonal metrics the edge weights are compared
/// lexicographically by (hexagonal, Euclidean) length, which yields a tree with
/// the same key multiset as [`hex_mst`].
pub fn prim(cloud: &PointCloud, metric: Metric) -> Result<SpanningTree> {
    metric.check(cloud)?;
    let n = cloud.len();
    if n <= 1 {
        return Ok(SpanningTree::empty(n));
    }
    let mut in_tree = vec![false; n];
    let mut best: Vec<(Key, usize, Option<(i64, i64)>)> =
        vec![(Key { hex: u64::MAX, sq: f64::INFINITY }, usize::MAX, None); n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut current = 0usize;
    in_tree[0] = true;
    for _ in 1..n {
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let (key, off) = pair_key(metric, cloud, current, v);
            if key.cmp(&best[v].0).is_lt() {
                best[v] = (key, current, off);
            }
        }
        let next = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&x, &y| best[x].0.cmp(&best[y].0).then(x.cmp(&y)))
            .expect("a vertex remains");
        let (key, parent, off) = best[next];
        edges.push(make_edge(cloud, parent, next, key, off));
        in_tree[next] = true;
        current = next;
    }
    edges.sort_by(|x, y| {
        let kx = Key { hex: x.hex_len.unwrap_or(0), sq: x.sq_len };
        let ky = Key { hex: y.hex_len.unwrap_or(0), sq: y.sq_len };
        if metric.is_hex() { kx.cmp(&ky) } else { x.sq_len.total_cmp(&y.sq_len) }
            .then((x.a, x.b).cmp(&(y.a, y.b)))
    });
    Ok(SpanningTree::from_edges(edges, n))
}

/// Dense lookup from lattice coordinates to point index.
struct Grid {
    min_i: i64,
    min_j: i64,
    width: i64,
    height: i64,
    period: Option<i64>,
    cells: Vec<u32>,
}

impl Grid {
    const EMPTY: u32 = u32::MAX;

    fn new(coords: &[LatticeCoord], period: Option<i64>) -> Grid {
        let (min_i, min_j, width, height) = match period {
            Some(n) => (0, 0, n, n),
            None => {
                let min_i = coords.iter().map(|c| c.i).min().unwrap_or(0);
                let max_i = coords.iter().map(|c| c.i).max().unwrap_or(0);
                let min_j = coords.iter().map(|c| c.j).min().unwrap_or(0);
                let max_j = coords.iter().map(|c| c.j).max().unwrap_or(0);
                (min_i, min_j, max_i - min_i + 1, max_j - min_j + 1)
            }
        };
        let mut cells = vec![Self::EMPTY; (width * height) as usize];
        for (k, c) in coords.iter().enumerate() {
            cells[((c.j - min_j) * width + (c.i - min_i)) as usize] = k as u32;
        }
        Grid {
            min_i,
            min_j,
            width,
            height,
            period,
            cells,
        }
    }

    fn get(&self, i: i64, j: i64) -> Option<usize> {
        let (x, y) = match self.period {
            Some(n) => (i.rem_euclid(n), j.rem_euclid(n)),
            None => (i - self.min_i, j - self.min_j),
        };
        if x < 0 || y < 0 || x >= self.width || y >= self.height {
            return None;
        }
        match self.cells[(y * self.width + x) as usize] {
            Self::EMPTY => None,
            k => Some(k as usize),
        }
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    key: Key,
    a: u32,
    b: u32,
    di: i32,
    dj: i32,
}

fn kruskal_pass(cloud: &PointCloud, mut cands: Vec<Candidate>) -> Option<Vec<Edge>> {
    cands.sort_unstable_by(|x, y| x.key.cmp(&y.key).then((x.a, x.b).cmp(&(y.a, y.b))));
    let n = cloud.len();
    let mut ds = DisjointSet::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for c in cands {
        if ds.union(c.a as usize, c.b as usize) {
            edges.push(make_edge(
                cloud,
                c.a as usize,
                c.b as usize,
                c.key,
                Some((c.di as i64, c.dj as i64)),
            ));
            if edges.len() == n - 1 {
                return Some(edges);
            }
        }
    }
    None
}

fn all_pairs(cloud: &PointCloud, metric: Metric) -> Vec<Candidate> {
    let n = cloud.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            let (key, off) = pair_key(metric, cloud, a, b);
            let (di, dj) = off.expect("lattice cloud");
            out.push(Candidate {
                key,
                a: a as u32,
                b: b as u32,
                di: di as i32,
                dj: dj as i32,
            });
        }
    }
    out
}

fn lattice_kruskal(cloud: &PointCloud, metric: Metric) -> SpanningTree {
    let coords = cloud.lattice_coords().expect("lattice cloud");
    let basis = cloud.basis();
    let n = cloud.len();
    let use_torus = metric.is_torus();
    let period = if use_torus { cloud.period().map(|p| p as i64) } else { None };
    let grid = Grid::new(coords, period);
    let extent = grid.width.max(grid.height);

    // radius: squared Euclidean length, or hexagonal length for hex metrics
    let mut radius = if metric.is_hex() { 2.0 } else { 4.0 * basis.gram()[0] };
    loop {
        let (bi, bj) = if metric.is_hex() {
            (radius as i64, radius as i64)
        } else {
            basis.offset_bounds(radius)
        };
        let mut offsets = Vec::new();
        for dj in -bj..=bj {
            for di in -bi..=bi {
                if (di, dj) == (0, 0) {
                    continue;
                }
                let key = offset_key(metric, basis, di, dj);
                let inside = if metric.is_hex() {
                    key.hex as f64 <= radius
                } else {
                    key.sq <= radius
                };
                if inside {
                    offsets.push((di, dj, key));
                }
            }
        }
        let exhaustive = bi >= extent && bj >= extent;
        let pairs = n * (n - 1) / 2;
        if exhaustive || offsets.len().saturating_mul(n) / 2 >= pairs {
            let edges = kruskal_pass(cloud, all_pairs(cloud, metric))
                .expect("the complete graph is connected");
            return SpanningTree::from_edges(edges, n);
        }
        let mut cands = Vec::with_capacity(offsets.len() * n / 2);
        for (a, c) in coords.iter().enumerate() {
            for &(di, dj, key) in &offsets {
                if let Some(b) = grid.get(c.i + di, c.j + dj) {
                    if b > a {
                        cands.push(Candidate {
                            key,
                            a: a as u32,
                            b: b as u32,
                            di: di as i32,
                            dj: dj as i32,
                        });
                    }
                }
            }
        }
        if let Some(edges) = kruskal_pass(cloud, cands) {
            return SpanningTree::from_edges(edges, n);
        }
        radius *= if metric.is_hex() { 2.0 } else { 4.0 };
    }
}
