//! The JSON point-set document shared by the library and the command line.
//!
//! ```json
//! { "basis": {"u": [1, 0], "v": [0.5, 0.866]},
//!   "topology": {"type": "torus", "n": 6},
//!   "coords": [[0, 0], [1, 0]],
//!   "colors": [0, 1] }
//! ```
//!
//! Free clouds carry `"points": [[x, y], ...]` instead of `coords`.

use serde::{Deserialize, Serialize};

use crate::constructions::Coloring;
use crate::error::{Error, Result};
use crate::lattice::{make_basis, LatticeCoord, PointCloud, Topology};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDoc {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetDocument {
    pub basis: BasisDoc,
    pub topology: Topology,
    #[serde(default)]
    pub coords: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
}

impl PointSetDocument {
    pub fn from_cloud(cloud: &PointCloud, coloring: Option<&Coloring>) -> PointSetDocument {
        let basis = cloud.basis();
        let (coords, points) = match cloud.coords() {
            Some(c) => (c.iter().map(|c| [c.i, c.j]).collect(), None),
            None => (Vec::new(), Some(cloud.cartesian().to_vec())),
        };
        PointSetDocument {
            basis: BasisDoc {
                u: basis.u(),
                v: basis.v(),
            },
            topology: cloud.topology(),
            coords,
            points,
            colors: coloring.map(|c| c.labels().to_vec()),
        }
    }

    /// Coordinates are read relative to the stored `u`, `v`, which need not be reduced.
    pub fn to_cloud(&self) -> Result<PointCloud> {
        if let Some(points) = &self.points {
            if !self.coords.is_empty() {
                return Err(Error::Document("both coords and points given".into()));
            }
            if self.topology != Topology::Plane {
                return Err(Error::Document("free points must lie in the plane".into()));
            }
            return PointCloud::from_points(points.iter().copied());
        }
        let basis = make_basis(self.basis.u, self.basis.v)?;
        let coords: Vec<LatticeCoord> = self
            .coords
            .iter()
            .map(|&[i, j]| basis.from_input_coords(LatticeCoord::new(i, j)))
            .collect();
        PointCloud::from_coords(basis, self.topology, coords)
    }

    /// The stored two-coloring, or `B = A` when absent.
    pub fn coloring(&self, len: usize) -> Result<Coloring> {
        match &self.colors {
            None => Ok(Coloring::uniform(len)),
            Some(labels) => {
                if labels.len() != len {
                    return Err(Error::ColoringMismatch(format!(
                        "{} colors for {len} points",
                        labels.len()
                    )));
                }
                let arity = labels.iter().max().map_or(2, |&m| (m + 1).max(2));
                Coloring::new(labels.clone(), arity)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<PointSetDocument> {
        serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::fig8;
    use crate::lattice::{generate_rhombus, Basis};

    #[test]
    fn round_trip() {
        let (cloud, coloring) = fig8().unwrap();
        let doc = PointSetDocument::from_cloud(&cloud, Some(&coloring));
        let back = PointSetDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_cloud().unwrap(), cloud);
        assert_eq!(back.coloring(cloud.len()).unwrap(), coloring);
    }

    #[test]
    fn torus_and_free_points() {
        let t = generate_rhombus(&Basis::hexagonal(), 3, Topology::torus(3).unwrap()).unwrap();
        let text = PointSetDocument::from_cloud(&t, None).to_json();
        assert!(text.contains("\"torus\""));
        let back = PointSetDocument::from_json(&text).unwrap();
        assert_eq!(back.to_cloud().unwrap(), t);
        assert_eq!(back.coloring(9).unwrap(), Coloring::uniform(9));

        let free = PointCloud::from_points([[0.0, 0.0], [0.3, 0.1]]).unwrap();
        let back = PointSetDocument::from_json(&PointSetDocument::from_cloud(&free, None).to_json())
            .unwrap();
        assert_eq!(back.to_cloud().unwrap(), free);
    }

    #[test]
    fn unreduced_input_basis() {
        let text = r#"{"basis":{"u":[1,0],"v":[5,1]},"topology":{"type":"plane"},
                       "coords":[[0,0],[0,1],[1,0]],"colors":[0,1,1]}"#;
        let doc = PointSetDocument::from_json(text).unwrap();
        let cloud = doc.to_cloud().unwrap();
        let pts = cloud.cartesian();
        assert!((pts[1][0] - 5.0).abs() < 1e-12 && (pts[1][1] - 1.0).abs() < 1e-12);
        assert!(PointSetDocument::from_json("{").is_err());
        assert!(doc.coloring(2).is_err());
    }
}
