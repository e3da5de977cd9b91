//! Quantitative evaluation protocols comparing the embedding with the
//! citation baselines.

mod catalog;
mod ecs;
mod kde;
mod kendall;
mod kmeans;
mod knn;
mod pairs;
mod venue;

pub use catalog::{DisciplineCatalog, Label, INTERDISCIPLINE};
pub use ecs::{element_centric_similarity, ClusteringAgreement, DEFAULT_ECS_ALPHA};
pub use kde::{kl_divergence, silverman_bandwidth, Kernel, KDE_GRID_POINTS};
pub use kendall::{
    kendall_tau, parse_rankings, rank_evaluation, CandidateRanker, DisciplineRanker, ModelRanker, RankingTarget,
    ScorerRanking,
};
pub use kmeans::{kmeans, kmeans_cluster, KMeansResult};
pub use knn::{citation_weight_f1, predict_discipline_knn, stratified_folds, F1Report, Prediction};
pub use pairs::{pair_group_report, GroupSummary, PairGroup, PairGroupReport, Scorer};
pub use venue::{venue_prediction_eval, VenueModelAccuracy, VenueReport};
