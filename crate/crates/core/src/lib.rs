//! MST-ratio of bi-colored point sets on lattices in the plane and on the torus.
//!
//! The ratio of a finite set `A` and a subset `B` is the combined length of
//! the minimum spanning trees of `B` and `A \ B` divided by the length of the
//! minimum spanning tree of `A`.

pub mod constructions;
pub mod doc;
pub mod error;
pub mod habitat;
pub mod lattice;
pub mod numfmt;
pub mod persistence;
pub mod render;
pub mod search;
pub mod spanning;
mod union_find;

pub use constructions::{
    build_construction, mst_ratio, multiway_ratio, packing_coloring, sublattice_coloring,
    supmax_check, Coloring, Instance, PackingFamily, RatioReport,
};
pub use doc::PointSetDocument;
pub use error::{Error, Result};
pub use habitat::{
    audit_cost_gaps, backyards, check_backyard_bound, cost_table, habitat_summary, thickening,
    HabitatSummary, TriangleRegion,
};
pub use lattice::{
    distance, generate_rhombus, generate_square, hex_distance, make_basis, tri_coords, Basis,
    LatticeCoord, Metric, PointCloud, Topology, TriCoord,
};
pub use persistence::{
    chromatic_norms, one_norm, ratio_from_norms, zero_dim_diagram, ChromaticNorms, CutoffPolicy,
    PersistenceDiagram,
};
pub use search::{
    brute_force_max, incremental_ratio, local_search, sample_max, RatioCache, Schedule,
    SearchTrace,
};
pub use spanning::{filtered_forest, hex_mst, mst, Edge, Forest, SpanningTree};
pub use union_find::DisjointSet;
