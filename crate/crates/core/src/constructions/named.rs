use std::collections::BTreeMap;

use crate::constructions::{packing_coloring, Coloring, PackingFamily};
use crate::error::{Error, Result};
use crate::lattice::{generate_rhombus, generate_square, make_basis, Basis, LatticeCoord, PointCloud, Topology};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Golden angle in radians; successive perturbations rotate by this much.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// 10 x 10 hexagonal rhombus in the plane with the quarter sublattice as `B`.
pub fn fig8() -> Result<(PointCloud, Coloring)> {
    let cloud = generate_rhombus(&Basis::hexagonal(), 10, Topology::Plane)?;
    let coloring = packing_coloring(&cloud, PackingFamily::Quarter)?;
    Ok((cloud, coloring))
}

/// Largest thickening level the six-point configuration of [`fig5`] supports.
pub const FIG5_K_MAX: u32 = 3;

/// Six points `a..f` on the hexagonal torus of period 16 whose first
/// thickening has five rooms, four houses, three blocks and two compounds:
/// `a`, `b` share an edge, `e`, `f` overlap, `b`, `e` touch at a vertex, `d`
/// sits across a narrow channel from `a`, and `c` is isolated at level one
/// but joins the others in a single room of the second thickening.
///
/// Returns the full torus with `B` as class 0, and the labels of `a..f` in order.
pub fn fig5() -> Result<(PointCloud, Coloring, Vec<(char, usize)>)> {
    let n = 16u32;
    let cloud = generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n)?)?;
    let named = [
        ('a', (0, 0)),
        ('b', (1, 1)),
        ('c', (7, 1)),
        ('d', (-2, -1)),
        ('e', (3, 1)),
        ('f', (4, 1)),
    ];
    let mut labels = Vec::new();
    for (name, c) in named {
        let k = cloud
            .index_of(LatticeCoord::from(c))
            .expect("point lies on the torus");
        labels.push((name, k));
    }
    let subset: Vec<usize> = labels.iter().map(|&(_, k)| k).collect();
    let coloring = Coloring::from_subset(cloud.len(), &subset)?;
    Ok((cloud, coloring, labels))
}

/// The hexagonal lattice stretched horizontally by 9, cropped to `[-r, r]^2`,
/// with one third of the points blue.
///
/// Columns are `9/2` apart, points within a column `sqrt(3)` apart, and the
/// blue points (every third row of the unstretched lattice, through the
/// origin) form a hexagonal lattice of spacing `3 sqrt(3)`.
#[derive(Debug, Clone)]
pub struct StretchedLattice {
    pub r: f64,
    pub cloud: PointCloud,
    pub coloring: Coloring,
    /// `p_r`, the number of columns.
    pub columns: usize,
    /// `q_r`, points in the central column.
    pub central_column: usize,
    /// `b_r`, blue points in the central column.
    pub central_blue: usize,
    /// `n_r`.
    pub points: usize,
    /// `m_r`.
    pub blue: usize,
    /// Column end points (top or bottom) that are blue.
    pub blue_column_ends: usize,
}

impl StretchedLattice {
    /// `sqrt(3) (n_r - p_r) + sqrt(21) (p_r - 1)`.
    pub fn tree_length_formula(&self) -> f64 {
        SQRT3 * (self.points - self.columns) as f64 + 21f64.sqrt() * (self.columns - 1) as f64
    }

    /// `3 sqrt(3) (m_r - 1)`.
    pub fn blue_tree_length_formula(&self) -> f64 {
        3.0 * SQRT3 * (self.blue - 1) as f64
    }

    /// The complement tree: every column chain spans its non-blue end points,
    /// so each blue column end shortens it by `sqrt(3)`.
    pub fn complement_tree_length_formula(&self) -> f64 {
        self.tree_length_formula() - SQRT3 * self.blue_column_ends as f64
    }

    /// Ratio assuming the complement tree is as long as the whole tree.
    pub fn closed_form_ratio(&self) -> f64 {
        let a = self.tree_length_formula();
        (self.blue_tree_length_formula() + a) / a
    }

    /// Exact ratio accounting for blue column ends.
    pub fn boundary_corrected_ratio(&self) -> f64 {
        (self.blue_tree_length_formula() + self.complement_tree_length_formula())
            / self.tree_length_formula()
    }
}

fn floor_tol(x: f64) -> usize {
    (x + 1e-9 * x.abs().max(1.0)).floor() as usize
}

pub fn stretched_hex(r: f64) -> Result<StretchedLattice> {
    if !(r >= 9.0) || !r.is_finite() {
        return Err(Error::RegionTooSmall(format!("stretched lattice needs r >= 9, got {r}")));
    }
    let basis = make_basis([9.0, 0.0], [4.5, SQRT3 / 2.0])?;
    let cloud = generate_square(&basis, r)?;
    let coords = cloud.lattice_coords()?;

    // (column, row) in the frame of the unstretched input basis
    let frame: Vec<(i64, i64)> = coords
        .iter()
        .map(|&c| {
            let k = basis.to_input_coords(c);
            (2 * k.i + k.j, k.j)
        })
        .collect();
    let labels: Vec<u32> = frame
        .iter()
        .map(|&(_, row)| if row.rem_euclid(3) == 0 { 0 } else { 1 })
        .collect();
    let coloring = Coloring::new(labels, 2)?;

    let mut columns: BTreeMap<i64, Vec<(i64, bool)>> = BTreeMap::new();
    for (k, &(col, row)) in frame.iter().enumerate() {
        columns
            .entry(col)
            .or_default()
            .push((row, coloring.labels()[k] == 0));
    }
    let mut blue_column_ends = 0;
    for pts in columns.values_mut() {
        pts.sort_unstable();
        let (first, last) = (pts[0], pts[pts.len() - 1]);
        blue_column_ends += usize::from(first.1) + usize::from(last.1 && pts.len() > 1);
    }
    let central = columns.get(&0).map(Vec::as_slice).unwrap_or(&[]);
    let lattice = StretchedLattice {
        r,
        columns: columns.len(),
        central_column: central.len(),
        central_blue: central.iter().filter(|p| p.1).count(),
        points: cloud.len(),
        blue: coloring.class(0).len(),
        blue_column_ends,
        cloud,
        coloring,
    };

    let p_r = 2 * floor_tol(2.0 * r / 9.0) + 1;
    let q_r = 2 * floor_tol(r / SQRT3) + 1;
    let b_r = 2 * floor_tol(r / (3.0 * SQRT3)) + 1;
    let (n, m, p) = (lattice.points, lattice.blue, lattice.columns);
    let counts_ok = lattice.columns == p_r
        && lattice.central_column == q_r
        && lattice.central_blue == b_r
        && n - 2 * p <= 3 * m
        && 3 * m <= n + 2 * p;
    if !counts_ok {
        return Err(Error::InvalidParameter(format!(
            "stretched lattice counts disagree with the column formulas at r = {r}"
        )));
    }
    Ok(lattice)
}

/// Seven points: a unit equilateral triangle `B`, and a copy shifted by
/// `eps / 2` together with its barycenter as the complement.
pub fn seven_points(eps: f64) -> Result<(PointCloud, Coloring)> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 0.1)")));
    }
    let tri = [[0.0, 0.0], [1.0, 0.0], [0.5, SQRT3 / 2.0]];
    let bary = [0.5, SQRT3 / 6.0];
    let shift = [0.5 * eps * GOLDEN_ANGLE.cos(), 0.5 * eps * GOLDEN_ANGLE.sin()];
    let moved = tri
        .iter()
        .chain(std::iter::once(&bary))
        .map(|p| [p[0] + shift[0], p[1] + shift[1]]);
    let cloud = PointCloud::from_points(tri.iter().copied().chain(moved))?;
    let coloring = Coloring::new(vec![0, 0, 0, 1, 1, 1, 1], 2)?;
    Ok((cloud, coloring))
}

/// The origin, `n - 2` points on the circle of radius `eps`, and `b = (1, 0)`.
#[derive(Debug, Clone)]
pub struct NearCollapse {
    pub cloud: PointCloud,
    /// `B = {b, first cluster point}`.
    pub coloring: Coloring,
    pub b_index: usize,
}

impl NearCollapse {
    /// `B = {b}`.
    pub fn singleton_coloring(&self) -> Coloring {
        Coloring::from_subset(self.cloud.len(), &[self.b_index]).expect("index in range")
    }
}

pub fn near_collapse(n: usize, eps: f64) -> Result<NearCollapse> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("near-collapse needs n >= 3, got {n}")));
    }
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("eps = {eps} must be non-negative")));
    }
    let cluster = (1..n - 1).map(|k| {
        let t = k as f64 * GOLDEN_ANGLE;
        [eps * t.cos(), eps * t.sin()]
    });
    let points = std::iter::once([0.0, 0.0])
        .chain(cluster)
        .chain(std::iter::once([1.0, 0.0]));
    let cloud = PointCloud::from_points(points)?;
    let b_index = n - 1;
    let coloring = Coloring::from_subset(n, &[b_index, 1])?;
    Ok(NearCollapse {
        cloud,
        coloring,
        b_index,
    })
}

/// `n x n` portion of the integer lattice; `B` is the even (or odd) parity class.
pub fn integer_checkerboard(n: u32, odd: bool) -> Result<(PointCloud, Coloring)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("checkerboard needs n >= 2, got {n}")));
    }
    let cloud = generate_rhombus(&Basis::square(), n, Topology::Plane)?;
    let parity = u32::from(odd);
    let labels = cloud
        .lattice_coords()?
        .iter()
        .map(|c| if ((c.i + c.j).rem_euclid(2) as u32) == parity { 0 } else { 1 })
        .collect();
    Ok((cloud, Coloring::new(labels, 2)?))
}

/// The hexagonal torus of period `n` split into the three cosets of the
/// index-3 sublattice.
pub fn three_way_split(n: u32) -> Result<(PointCloud, Coloring)> {
    if n % 3 != 0 {
        return Err(Error::IncompatiblePeriod { period: n });
    }
    let cloud = generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n)?)?;
    let labels = cloud
        .lattice_coords()?
        .iter()
        .map(|c| (c.i - c.j).rem_euclid(3) as u32)
        .collect();
    Ok((cloud, Coloring::new(labels, 3)?))
}
