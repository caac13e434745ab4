//! SVG drawings of colored clouds, their class trees and thickenings.
//!
//! One lattice step is 72 user units and the y axis points up, so drawings
//! of the same lattice overlay exactly. Output is byte-for-byte deterministic.

use std::fmt::Write as _;

use crate::constructions::Coloring;
use crate::error::Result;
use crate::habitat::thickening;
use crate::lattice::{torus_translates, Metric, PointCloud};
use crate::spanning::mst;

pub const UNITS_PER_STEP: f64 = 72.0;

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const FILLS: [&str; 3] = ["#f4d6d6", "#f9e8e8", "#fcf3f3"];
const MARGIN: f64 = 36.0;

#[derive(Debug, Clone, Default)]
pub struct RenderOptions {
    /// Thickening levels of class 0 drawn under the points.
    pub thickenings: Vec<u32>,
    /// Skip the class trees.
    pub hide_edges: bool,
}

fn coord(x: f64) -> String {
    let s = format!("{:.3}", x * UNITS_PER_STEP);
    if s == "-0.000" { "0.000".into() } else { s }
}

struct Bounds {
    min: [f64; 2],
    max: [f64; 2],
}

impl Bounds {
    fn new() -> Bounds {
        Bounds {
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        }
    }

    fn add(&mut self, p: [f64; 2]) {
        for a in 0..2 {
            self.min[a] = self.min[a].min(p[a]);
            self.max[a] = self.max[a].max(p[a]);
        }
    }
}

/// Cartesian segment for the shortest representative of the pair `(a, b)`.
fn segment(cloud: &PointCloud, metric: Metric, a: usize, b: usize) -> [[f64; 2]; 2] {
    let p = cloud.cartesian()[a];
    let (Some(c), Some(n), true) = (cloud.coords(), cloud.period(), metric.is_torus()) else {
        return [p, cloud.cartesian()[b]];
    };
    let basis = cloud.basis();
    let (di, dj) = (c[b].i - c[a].i, c[b].j - c[a].j);
    let (i, j) = torus_translates(di, dj, i64::from(n))
        .min_by(|x, y| basis.sq_norm(x.0, x.1).total_cmp(&basis.sq_norm(y.0, y.1)))
        .expect("nine translates");
    let (u, v) = (basis.u(), basis.v());
    let (i, j) = (i as f64, j as f64);
    [p, [p[0] + i * u[0] + j * v[0], p[1] + i * u[1] + j * v[1]]]
}

pub fn render_svg(
    cloud: &PointCloud,
    coloring: &Coloring,
    metric: Metric,
    options: &RenderOptions,
) -> Result<String> {
    coloring.check_cloud(cloud)?;
    metric.check(cloud)?;
    let mut bounds = Bounds::new();
    for &p in cloud.cartesian() {
        bounds.add(p);
    }
    let mut body = String::new();

    let mut levels = options.thickenings.clone();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    let blue = coloring.class(0);
    for (rank, &k) in levels.iter().enumerate() {
        let region = thickening(cloud, &blue, k)?;
        let fill = FILLS[(levels.len() - 1 - rank).min(FILLS.len() - 1)];
        let _ = writeln!(body, "<g class=\"thickening k{k}\" fill=\"{fill}\" stroke=\"none\">");
        for t in region.triangles() {
            let pts: Vec<String> = t
                .vertices()
                .iter()
                .map(|&v| {
                    let p = cloud.basis().point(v);
                    bounds.add(p);
                    format!("{},{}", coord(p[0]), coord(-p[1]))
                })
                .collect();
            let _ = writeln!(body, "<polygon points=\"{}\"/>", pts.join(" "));
        }
        let _ = writeln!(body, "</g>");
    }

    if !options.hide_edges {
        for label in 0..coloring.arity() {
            let class = coloring.class(label);
            if class.len() < 2 {
                continue;
            }
            let tree = mst(&cloud.subset(&class), metric)?;
            let color = PALETTE[label as usize % PALETTE.len()];
            let _ = writeln!(
                body,
                "<g class=\"edges class-{label}\" stroke=\"{color}\" stroke-width=\"3\">"
            );
            for e in tree.edges() {
                let [p, q] = segment(cloud, metric, class[e.a], class[e.b]);
                bounds.add(q);
                let _ = writeln!(
                    body,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                    coord(p[0]),
                    coord(-p[1]),
                    coord(q[0]),
                    coord(-q[1])
                );
            }
            let _ = writeln!(body, "</g>");
        }
    }

    let _ = writeln!(body, "<g class=\"points\" stroke=\"none\">");
    for (k, p) in cloud.cartesian().iter().enumerate() {
        let color = PALETTE[coloring.labels()[k] as usize % PALETTE.len()];
        let _ = writeln!(
            body,
            "<circle cx=\"{}\" cy=\"{}\" r=\"8\" fill=\"{color}\"/>",
            coord(p[0]),
            coord(-p[1])
        );
    }
    let _ = writeln!(body, "</g>");

    if cloud.is_empty() {
        bounds.add([0.0, 0.0]);
    }
    let x0 = bounds.min[0] * UNITS_PER_STEP - MARGIN;
    let y0 = -bounds.max[1] * UNITS_PER_STEP - MARGIN;
    let w = (bounds.max[0] - bounds.min[0]) * UNITS_PER_STEP + 2.0 * MARGIN;
    let h = (bounds.max[1] - bounds.min[1]) * UNITS_PER_STEP + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0:.3} {y0:.3} {w:.3} {h:.3}\" width=\"{w:.3}\" height=\"{h:.3}\">"
    );
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}
