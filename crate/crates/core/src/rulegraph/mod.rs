//! Subgraphs of lattice grids described by rules, motifs, explicit edge
//! rules or isometry orbits.

pub mod format;
pub mod orbit;
pub mod rule;
pub mod spec;

pub use format::{parse_construction, Claims, ConstructionFile};
pub use orbit::{build_orbit_edges, EdgeTable, OrbitSpec};
pub use rule::{Condition, LinearForm, RuleExpr};
pub use spec::{validate_spec, Coverage, EdgeRule, EdgeSet, MotifSpec, PeriodicGraphSpec, ValidationReport, VertexSet, Violation};
