//! Lattice bases, exact lattice coordinates, point clouds and the four
//! distance functions (Euclidean and hexagonal, in the plane and on the torus).
//!
//! Distances between lattice points are evaluated from the Gram matrix of the
//! basis, so for the integer and hexagonal lattices every squared Euclidean
//! distance is an exactly representable integer. Square roots are taken once,
//! at the very end.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted `|det(u, v)|` for a basis.
pub const DET_EPS: f64 = 1e-12;

/// Tolerance for comparing distances that are not lattice-exact.
pub const DIST_EPS: f64 = 1e-9;

/// A lattice point `i * u + j * v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeCoord {
    pub i: i64,
    pub j: i64,
}

impl LatticeCoord {
    pub const ORIGIN: LatticeCoord = LatticeCoord { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }
}

impl From<(i64, i64)> for LatticeCoord {
    fn from((i, j): (i64, i64)) -> Self {
        Self { i, j }
    }
}

/// Three integer coordinates `(a, b, c)` with `a + b + c = 0`.
///
/// The frame is the one in which the basis vectors of the hexagonal lattice
/// read `u = z - y` and `v = x - y`, where `x`, `y`, `z` are the three vectors
/// of length `1/sqrt(3)` pointing up, lower-left and lower-right. With this
/// orientation `a x + b y + c z` is the same cartesian point as `i u + j v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriCoord {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl TriCoord {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a + b + c != 0 {
            return Err(Error::InvalidParameter(format!(
                "tri-coordinates ({a}, {b}, {c}) do not sum to zero"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// Inverse of [`tri_coords`].
    pub fn to_lattice(self) -> LatticeCoord {
        LatticeCoord::new(self.c, self.a)
    }

    /// Hexagonal distance between two tri-coordinate points.
    pub fn hex_distance(self, other: TriCoord) -> u64 {
        (self.a - other.a)
            .unsigned_abs()
            .max((self.b - other.b).unsigned_abs())
            .max((self.c - other.c).unsigned_abs())
    }
}

/// Tri-coordinates of the lattice point `(i, j)`.
pub fn tri_coords(i: i64, j: i64) -> TriCoord {
    TriCoord {
        a: j,
        b: -(i + j),
        c: i,
    }
}

/// Hexagonal length `max(|i|, |j|, |i + j|)` of the lattice vector `(i, j)`.
pub fn hex_distance(di: i64, dj: i64) -> u64 {
    di.unsigned_abs()
        .max(dj.unsigned_abs())
        .max((di + dj).unsigned_abs())
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn sub_scaled(a: [f64; 2], b: [f64; 2], m: f64) -> [f64; 2] {
    [a[0] - m * b[0], a[1] - m * b[1]]
}

// Snap Gram entries that sit on a half-integer up to rounding noise, so the
// quadratic form of the integer and hexagonal lattices is exact.
fn snap_half(x: f64) -> f64 {
    let h = (2.0 * x).round();
    if (2.0 * x - h).abs() < 1e-9 * x.abs().max(1.0) {
        h / 2.0
    } else {
        x
    }
}

/// A reduced lattice basis.
///
/// After construction `|u| <= |v|` and `|u . v| <= |u|^2 / 2`. The basis
/// remembers the unimodular transform back to the vectors it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    u: [f64; 2],
    v: [f64; 2],
    gram: [f64; 3],
    // rows: reduced u and v as integer combinations of the input vectors
    transform: [[i64; 2]; 2],
}

/// Build a Lagrange-Gauss reduced basis spanning the same lattice as `u`, `v`.
pub fn make_basis(u: [f64; 2], v: [f64; 2]) -> Result<Basis> {
    if !(u.iter().chain(v.iter()).all(|x| x.is_finite())) {
        return Err(Error::InvalidParameter("basis vectors must be finite".into()));
    }
    let det = u[0] * v[1] - u[1] * v[0];
    if !(det.abs() > DET_EPS) {
        return Err(Error::DegenerateBasis(det.abs()));
    }
    let (mut a, mut b) = (u, v);
    let (mut ta, mut tb) = ([1i64, 0], [0i64, 1]);
    loop {
        // equal lengths up to rounding keep their input order
        if dot(b, b) < dot(a, a) * (1.0 - 1e-12) {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut ta, &mut tb);
        }
        let q = dot(a, b) / dot(a, a);
        // |q| <= 1/2 is already reduced; exact halves must not oscillate.
        if q.abs() <= 0.5 + 1e-12 {
            break;
        }
        let m = q.round();
        b = sub_scaled(b, a, m);
        let mi = m as i64;
        tb = [tb[0] - mi * ta[0], tb[1] - mi * ta[1]];
    }
    let gram = [snap_half(dot(a, a)), snap_half(dot(a, b)), snap_half(dot(b, b))];
    Ok(Basis {
        u: a,
        v: b,
        gram,
        transform: [ta, tb],
    })
}

impl Basis {
    /// The unit hexagonal basis `u = (1, 0)`, `v = (1/2, sqrt(3)/2)`.
    pub fn hexagonal() -> Basis {
        make_basis([1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]).expect("hexagonal basis")
    }

    /// The integer lattice `Z^2`.
    pub fn square() -> Basis {
        make_basis([1.0, 0.0], [0.0, 1.0]).expect("square basis")
    }

    pub fn u(&self) -> [f64; 2] {
        self.u
    }

    pub fn v(&self) -> [f64; 2] {
        self.v
    }

    /// `(u.u, u.v, v.v)`.
    pub fn gram(&self) -> [f64; 3] {
        self.gram
    }

    /// `|v| / |u|`, the length of `v` once `u` is normalized to unit length.
    pub fn nu(&self) -> f64 {
        (self.gram[2] / self.gram[0]).sqrt()
    }

    pub fn det(&self) -> f64 {
        self.u[0] * self.v[1] - self.u[1] * self.v[0]
    }

    pub fn is_hexagonal(&self) -> bool {
        self.gram == [1.0, 0.5, 1.0]
    }

    pub fn point(&self, c: LatticeCoord) -> [f64; 2] {
        let (i, j) = (c.i as f64, c.j as f64);
        [i * self.u[0] + j * self.v[0], i * self.u[1] + j * self.v[1]]
    }

    /// Squared Euclidean length of the lattice vector `(di, dj)`.
    pub fn sq_norm(&self, di: i64, dj: i64) -> f64 {
        let (x, y) = (di as f64, dj as f64);
        self.gram[0] * x * x + 2.0 * self.gram[1] * x * y + self.gram[2] * y * y
    }

    /// Bounds `(I, J)` such that every lattice vector of squared length at
    /// most `r2` has `|di| <= I` and `|dj| <= J`.
    pub fn offset_bounds(&self, r2: f64) -> (i64, i64) {
        let r = r2.max(0.0).sqrt();
        let det = self.det().abs();
        let bi = (r * self.gram[2].sqrt() / det + 1e-9).floor() as i64;
        let bj = (r * self.gram[0].sqrt() / det + 1e-9).floor() as i64;
        (bi, bj)
    }

    /// Coordinates of `c` with respect to the vectors the basis was built from.
    pub fn to_input_coords(&self, c: LatticeCoord) -> LatticeCoord {
        let [ta, tb] = self.transform;
        LatticeCoord::new(c.i * ta[0] + c.j * tb[0], c.i * ta[1] + c.j * tb[1])
    }

    /// Inverse of [`Basis::to_input_coords`].
    pub fn from_input_coords(&self, c: LatticeCoord) -> LatticeCoord {
        let [ta, tb] = self.transform;
        // (i', j') = (i, j) * M with M = [ta; tb] and det(M) = +-1.
        let det = ta[0] * tb[1] - ta[1] * tb[0];
        let i = (c.i * tb[1] - c.j * tb[0]) * det;
        let j = (c.j * ta[0] - c.i * ta[1]) * det;
        LatticeCoord::new(i, j)
    }
}

/// Plane or rhombus torus of period `n` (identifying `a` with `a + i n u + j n v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Topology {
    Plane,
    Torus { n: u32 },
}

impl Topology {
    pub fn torus(n: u32) -> Result<Topology> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("torus period {n} must be at least 2")));
        }
        Ok(Topology::Torus { n })
    }

    pub fn period(&self) -> Option<u32> {
        match *self {
            Topology::Plane => None,
            Topology::Torus { n } => Some(n),
        }
    }
}

/// The four distance functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    EuclideanPlane,
    EuclideanTorus,
    HexPlane,
    HexTorus,
}

impl Metric {
    /// The Euclidean metric native to a topology.
    pub fn euclidean_for(topology: Topology) -> Metric {
        match topology {
            Topology::Plane => Metric::EuclideanPlane,
            Topology::Torus { .. } => Metric::EuclideanTorus,
        }
    }

    pub fn hex_for(topology: Topology) -> Metric {
        match topology {
            Topology::Plane => Metric::HexPlane,
            Topology::Torus { .. } => Metric::HexTorus,
        }
    }

    pub fn is_hex(self) -> bool {
        matches!(self, Metric::HexPlane | Metric::HexTorus)
    }

    pub fn is_torus(self) -> bool {
        matches!(self, Metric::EuclideanTorus | Metric::HexTorus)
    }

    /// Checks that the metric can be evaluated on `cloud`.
    pub fn check(self, cloud: &PointCloud) -> Result<()> {
        if self.is_torus() && cloud.topology.period().is_none() {
            return Err(Error::TopologyMismatch(format!(
                "{self:?} requires a toroidal point cloud"
            )));
        }
        if self.is_hex() {
            if cloud.coords.is_none() {
                return Err(Error::TopologyMismatch(
                    "hexagonal distance requires lattice coordinates".into(),
                ));
            }
            if !cloud.basis.is_hexagonal() {
                return Err(Error::NotHexagonal);
            }
        }
        Ok(())
    }
}

/// A finite point set: lattice points with a basis and a topology, or free
/// cartesian points in the plane (used by the perturbed constructions).
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    basis: Basis,
    topology: Topology,
    coords: Option<Vec<LatticeCoord>>,
    cartesian: Vec<[f64; 2]>,
}

impl PointCloud {
    /// Lattice points; on the torus coordinates are reduced into `[0, n)^2`.
    pub fn from_coords(
        basis: Basis,
        topology: Topology,
        coords: impl IntoIterator<Item = LatticeCoord>,
    ) -> Result<PointCloud> {
        let mut canon: Vec<LatticeCoord> = coords.into_iter().collect();
        if let Some(n) = topology.period() {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("torus period {n} must be at least 2")));
            }
            let n = n as i64;
            for c in canon.iter_mut() {
                *c = LatticeCoord::new(c.i.rem_euclid(n), c.j.rem_euclid(n));
            }
        }
        let mut seen = HashMap::with_capacity(canon.len());
        for (k, c) in canon.iter().enumerate() {
            if seen.insert(*c, k).is_some() {
                return Err(Error::DuplicatePoint(k));
            }
        }
        let cartesian = canon.iter().map(|&c| basis.point(c)).collect();
        Ok(PointCloud {
            basis,
            topology,
            coords: Some(canon),
            cartesian,
        })
    }

    /// Free points in the plane, compared by exact cartesian equality.
    pub fn from_points(points: impl IntoIterator<Item = [f64; 2]>) -> Result<PointCloud> {
        let cartesian: Vec<[f64; 2]> = points.into_iter().collect();
        let mut seen = HashMap::with_capacity(cartesian.len());
        for (k, p) in cartesian.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite()) {
                return Err(Error::InvalidParameter(format!("point {k} is not finite")));
            }
            // +0.0 and -0.0 are the same point
            let key = ((p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits());
            if seen.insert(key, k).is_some() {
                return Err(Error::DuplicatePoint(k));
            }
        }
        Ok(PointCloud {
            basis: Basis::square(),
            topology: Topology::Plane,
            coords: None,
            cartesian,
        })
    }

    pub fn len(&self) -> usize {
        self.cartesian.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cartesian.is_empty()
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn period(&self) -> Option<u32> {
        self.topology.period()
    }

    pub fn is_lattice(&self) -> bool {
        self.coords.is_some()
    }

    pub fn coords(&self) -> Option<&[LatticeCoord]> {
        self.coords.as_deref()
    }

    pub fn lattice_coords(&self) -> Result<&[LatticeCoord]> {
        self.coords.as_deref().ok_or_else(|| {
            Error::TopologyMismatch("operation requires lattice coordinates".into())
        })
    }

    pub fn cartesian(&self) -> &[[f64; 2]] {
        &self.cartesian
    }

    /// The points at `indices`, in that order, with the same basis and topology.
    pub fn subset(&self, indices: &[usize]) -> PointCloud {
        PointCloud {
            basis: self.basis.clone(),
            topology: self.topology,
            coords: self
                .coords
                .as_ref()
                .map(|c| indices.iter().map(|&k| c[k]).collect()),
            cartesian: indices.iter().map(|&k| self.cartesian[k]).collect(),
        }
    }

    /// Position of the lattice point `c` in this cloud, if present.
    pub fn index_of(&self, c: LatticeCoord) -> Option<usize> {
        let coords = self.coords.as_ref()?;
        let c = match self.topology.period() {
            Some(n) => LatticeCoord::new(c.i.rem_euclid(n as i64), c.j.rem_euclid(n as i64)),
            None => c,
        };
        coords.iter().position(|&x| x == c)
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    fn delta(&self, p: usize, q: usize) -> Option<(i64, i64)> {
        let c = self.coords.as_ref()?;
        Some((c[q].i - c[p].i, c[q].j - c[p].j))
    }
}

/// The 9 translates `(di + k n, dj + l n)`, `k, l in {-1, 0, 1}`.
pub(crate) fn torus_translates(di: i64, dj: i64, n: i64) -> impl Iterator<Item = (i64, i64)> {
    (-1..=1).flat_map(move |k| (-1..=1).map(move |l| (di + k * n, dj + l * n)))
}

/// Minimal squared Euclidean length over the torus translates.
pub(crate) fn torus_sq_norm(basis: &Basis, di: i64, dj: i64, n: i64) -> f64 {
    let best = torus_translates(di, dj, n)
        .map(|(a, b)| basis.sq_norm(a, b))
        .fold(f64::INFINITY, f64::min);
    debug_assert!({
        let wide = (-2..=2)
            .flat_map(|k| (-2..=2).map(move |l| (di + k * n, dj + l * n)))
            .map(|(a, b)| basis.sq_norm(a, b))
            .fold(f64::INFINITY, f64::min);
        wide == best
    });
    best
}

/// `(hex length, squared Euclidean length)` of the representative minimizing
/// the hexagonal length, ties broken by Euclidean length.
pub(crate) fn torus_hex_key(basis: &Basis, di: i64, dj: i64, n: i64) -> (u64, f64) {
    torus_translates(di, dj, n)
        .map(|(a, b)| (hex_distance(a, b), basis.sq_norm(a, b)))
        .min_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)))
        .expect("nine translates")
}

/// Squared Euclidean distance between points `p` and `q` under a Euclidean metric.
pub fn sq_distance(metric: Metric, cloud: &PointCloud, p: usize, q: usize) -> Result<f64> {
    cloud.check_index(p)?;
    cloud.check_index(q)?;
    metric.check(cloud)?;
    Ok(sq_distance_unchecked(metric, cloud, p, q))
}

pub(crate) fn sq_distance_unchecked(metric: Metric, cloud: &PointCloud, p: usize, q: usize) -> f64 {
    match cloud.delta(p, q) {
        None => {
            let (a, b) = (cloud.cartesian[p], cloud.cartesian[q]);
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            dx * dx + dy * dy
        }
        Some((di, dj)) => match (metric, cloud.topology) {
            (Metric::EuclideanTorus | Metric::HexTorus, Topology::Torus { n }) => {
                if metric.is_hex() {
                    torus_hex_key(&cloud.basis, di, dj, n as i64).1
                } else {
                    torus_sq_norm(&cloud.basis, di, dj, n as i64)
                }
            }
            _ => cloud.basis.sq_norm(di, dj),
        },
    }
}

/// Distance between points `p` and `q`.
///
/// Euclidean variants return the Euclidean length; hexagonal variants return
/// the hexagonal length. Torus variants minimize over the translates.
pub fn distance(metric: Metric, cloud: &PointCloud, p: usize, q: usize) -> Result<f64> {
    cloud.check_index(p)?;
    cloud.check_index(q)?;
    metric.check(cloud)?;
    Ok(match metric {
        Metric::EuclideanPlane | Metric::EuclideanTorus => {
            sq_distance_unchecked(metric, cloud, p, q).sqrt()
        }
        Metric::HexPlane => {
            let (di, dj) = cloud.delta(p, q).expect("checked lattice");
            hex_distance(di, dj) as f64
        }
        Metric::HexTorus => {
            let (di, dj) = cloud.delta(p, q).expect("checked lattice");
            let n = cloud.period().expect("checked torus") as i64;
            torus_hex_key(&cloud.basis, di, dj, n).0 as f64
        }
    })
}

/// All lattice points inside the square `[-r, r]^2`, ordered by `(j, i)`.
pub fn generate_square(basis: &Basis, r: f64) -> Result<PointCloud> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("square half-width {r} must be positive")));
    }
    // every point of the square lies within r * sqrt(2) of the origin
    let (bi, bj) = basis.offset_bounds(2.0 * r * r);
    let tol = 1e-9 * r.max(1.0);
    let mut coords = Vec::new();
    for j in -bj..=bj {
        for i in -bi..=bi {
            let p = basis.point(LatticeCoord::new(i, j));
            if p[0].abs() <= r + tol && p[1].abs() <= r + tol {
                coords.push(LatticeCoord::new(i, j));
            }
        }
    }
    PointCloud::from_coords(basis.clone(), Topology::Plane, coords)
}

/// The `n^2` points `i u + j v` with `0 <= i, j < n`, ordered by `(j, i)`.
pub fn generate_rhombus(basis: &Basis, n: u32, topology: Topology) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::InvalidParameter("rhombus side must be positive".into()));
    }
    if let Some(p) = topology.period() {
        if n > p {
            return Err(Error::TopologyMismatch(format!(
                "rhombus of side {n} does not fit on a torus of period {p}"
            )));
        }
    }
    let n = n as i64;
    let coords = (0..n).flat_map(|j| (0..n).map(move |i| LatticeCoord::new(i, j)));
    PointCloud::from_coords(basis.clone(), topology, coords)
}
