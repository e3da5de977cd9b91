//! Dense vector embeddings of scholarly periodicals learned from citation
//! trails, together with the sparse citation baselines and evaluation
//! protocols used to compare them.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! * [`corpus`] loads a paper citation graph (or plants a synthetic one) and
//!   samples random-walk trails that follow references to a dead end.
//! * [`sgns`] trains input/output periodical vectors from those trails with
//!   skip-gram negative sampling.
//! * [`vectorspace`] answers similarity, analogy and axis queries.
//! * [`baselines`] builds the periodical citation matrix and its derived
//!   comparators (citation vectors, Jaccard, PageRank, simple predictors).
//! * [`evaluation`] and [`analogy`] hold the quantitative protocols.
//! * [`cli`] wires everything into the `venuevec` executable.

pub mod analogy;
pub mod baselines;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod model;
pub mod seed;
pub mod sgns;
pub mod stats;
pub mod vectorspace;

pub use error::{Error, Result};
