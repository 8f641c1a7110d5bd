//! Architecture connectivity graphs and SWAP routing.

mod graph;
mod router;

pub use graph::{preset_names, ArchitectureGraph, GraphSpec};
pub use router::{
    active_subcircuit, degree_shortfalls, swap_count, transpile, validate_routing, DegreeShortfall, Layout,
    RoutingViolation,
};
