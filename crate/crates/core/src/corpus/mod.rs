//! Citation graph ingestion, trail sampling and synthetic planted-partition
//! networks.

mod graph;
mod synthetic;
mod trails;
mod walk;

pub use graph::{load_citation_graph, LoadReport, PaperGraph, PeriodicalId};
pub use synthetic::{
    generate_synthetic_authorship, generate_synthetic_graph, AuthorshipSpec, SyntheticNetwork,
    SyntheticSpec,
};
pub use trails::{read_trails, write_trails, TrailCorpus};
pub use walk::{
    generate_trail_corpus, sample_paper_trail, walk_from, PaperTrail, DEFAULT_MAX_STEPS,
};
