use std::collections::BTreeMap;

use crate::constructions::named::{
    fig5, fig8, integer_checkerboard, near_collapse, seven_points, stretched_hex, three_way_split,
};
use crate::constructions::{packing_coloring, Coloring, PackingFamily};
use crate::error::{Error, Result};
use crate::lattice::{generate_rhombus, Basis, Metric, PointCloud, Topology};

/// Default torus period for packings: divisible by 3, 4 and 7.
const DEFAULT_PACKING_PERIOD: u32 = 84;

/// A named configuration ready for evaluation.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub cloud: PointCloud,
    pub coloring: Coloring,
    pub metric: Metric,
    /// Exact ratio predicted by a closed form, where one is known.
    pub closed_form: Option<f64>,
}

struct Spec<'a> {
    family: &'a str,
    params: BTreeMap<&'a str, &'a str>,
    flags: Vec<&'a str>,
}

fn parse(name: &str) -> Spec<'_> {
    let mut parts = name.split(':');
    let family = parts.next().unwrap_or("");
    let mut params = BTreeMap::new();
    let mut flags = Vec::new();
    for p in parts {
        match p.split_once('=') {
            Some((k, v)) => {
                params.insert(k, v);
            }
            None => flags.push(p),
        }
    }
    Spec {
        family,
        params,
        flags,
    }
}

impl Spec<'_> {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidParameter(format!("cannot parse {key}={v}"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| {
            Error::InvalidParameter(format!("construction {} needs {key}=...", self.family))
        })
    }
}

/// `(delta (N^2/m - 1) + (N^2 (m-1)/m - 1)) / (N^2 - 1)`: a packing on a torus
/// whose trees use only sublattice-shortest and unit edges.
fn packing_torus_ratio(family: PackingFamily, n: u32) -> f64 {
    let total = f64::from(n) * f64::from(n);
    let m = f64::from(family.index());
    let delta = f64::from(family.min_sq_distance()).sqrt();
    (delta * (total / m - 1.0) + (total * (m - 1.0) / m - 1.0)) / (total - 1.0)
}

/// Builds a construction by name.
///
/// Names: `fig8`, `fig5`, `stretched:r=R`, `packing:FAMILY[:n=N]`,
/// `seven[:eps=E]`, `near-collapse:n=N:eps=E`, `checkerboard:n=N[:odd]`,
/// `three-way:n=N`. `torus` overrides the period of torus constructions.
pub fn build(name: &str, torus: Option<u32>) -> Result<Instance> {
    let spec = parse(name);
    let (cloud, coloring, closed_form) = match spec.family {
        "fig8" => {
            let (cloud, coloring) = fig8()?;
            (cloud, coloring, Some(122.0 / 99.0))
        }
        "fig5" => {
            let (cloud, coloring, _) = fig5()?;
            (cloud, coloring, None)
        }
        "stretched" => {
            let s = stretched_hex(spec.require("r")?)?;
            let exact = s.boundary_corrected_ratio();
            (s.cloud, s.coloring, Some(exact))
        }
        "packing" => {
            let family = spec
                .flags
                .first()
                .and_then(|f| PackingFamily::parse(f))
                .ok_or_else(|| Error::UnknownConstruction(name.to_string()))?;
            let n = torus
                .or(spec.get("n")?)
                .unwrap_or(DEFAULT_PACKING_PERIOD);
            let cloud = generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n)?)?;
            let coloring = packing_coloring(&cloud, family)?;
            (cloud, coloring, Some(packing_torus_ratio(family, n)))
        }
        "seven" => {
            let (cloud, coloring) = seven_points(spec.get("eps")?.unwrap_or(0.01))?;
            (cloud, coloring, None)
        }
        "near-collapse" => {
            let nc = near_collapse(spec.require("n")?, spec.require("eps")?)?;
            (nc.cloud, nc.coloring, None)
        }
        "checkerboard" => {
            let n: u32 = spec.require("n")?;
            let (cloud, coloring) = integer_checkerboard(n, spec.flags.contains(&"odd"))?;
            let total = f64::from(n) * f64::from(n);
            (cloud, coloring, Some(2f64.sqrt() * (total - 2.0) / (total - 1.0)))
        }
        "three-way" => {
            let n = torus.map_or_else(|| spec.require("n"), Ok)?;
            let (cloud, coloring) = three_way_split(n)?;
            let total = f64::from(n) * f64::from(n);
            let closed = 3.0 * 3f64.sqrt() * (total / 3.0 - 1.0) / (total - 1.0);
            (cloud, coloring, Some(closed))
        }
        _ => return Err(Error::UnknownConstruction(name.to_string())),
    };
    let metric = Metric::euclidean_for(cloud.topology());
    Ok(Instance {
        name: name.to_string(),
        cloud,
        coloring,
        metric,
        closed_form,
    })
}
