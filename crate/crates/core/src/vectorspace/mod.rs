//! Read-only queries over trained periodical vectors.

mod axis;
mod store;

pub use axis::{build_axis, project_on_axis, Axis};
pub use store::{cosine_similarity, Neighbor, VectorStore};
pub(crate) use store::norm;
