//! Iterated analogies between two poles, validated against author overlap,
//! and conceptual-axis spectrum experiments.

mod authors;
mod graph;
mod overlap;
mod spectrum;
mod suite;

pub use authors::{author_overlap, AuthorIndex};
pub use graph::{build_analogy_graph, AnalogyEdge, AnalogyGraph, Direction, DEFAULT_MAX_DEPTH};
pub use overlap::{analogy_graph_overlap_fraction, CycleRule, OverlapFraction};
pub use spectrum::{
    axis_spectrum, axis_stability, discipline_members, project_all, subdiscipline_axis_correlation,
    DisciplineMean, SpectrumReport, StabilityPoint,
};
pub use suite::{analogy_suite_tasks, discipline_pair_analogy_suite, top_by_pagerank, SuiteOptions, SuiteReport};
