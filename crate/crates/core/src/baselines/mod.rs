//! Sparse citation-based comparators built from the periodical citation
//! matrix, plus the simple discipline and venue predictors.

mod cv;
mod jaccard;
mod matrix;
mod pagerank;
mod predict;

pub use cv::{citation_vector, CitationVector, CitationVectors};
pub use jaccard::{jaccard_similarity, JaccardModel};
pub use matrix::{build_periodical_citation_matrix, PeriodicalCitationMatrix};
pub use pagerank::{pagerank_scores, PageRankConfig};
pub use predict::{predict_discipline_citation_weight, predict_venue_majority};
