//! Schreier graphs of the level actions, their substitutional construction,
//! growth and export.

mod analysis;
mod export;
mod graph;
mod substitution;

pub use analysis::{
    graph_adjacency, graph_adjacency_f64, growth_and_diameter, growth_exponent_fit,
    product_growth_polynomial, GrowthReport, GrowthSeries, FULL_DIAMETER_MAX_VERTICES,
};
pub use export::{dot_edge_count, from_csv, to_csv, to_dot};
pub use graph::{action_graph, labeled_isomorphic, LabeledGraph};
pub use substitution::{substitution_graph, Replacement, SubstitutionRuleSet};
