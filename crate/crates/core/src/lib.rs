//! Orthogonal alignment of embedding spaces, with numerical checks of the
//! error bounds that govern it and tools to measure retrieval after
//! alignment.
//!
//! Embeddings are stored column-wise: an [`EmbeddingMatrix`] of `D` dims
//! and `N` items holds a `D × N` matrix plus one id per column.

pub mod align;
pub mod bounds;
pub mod embedding;
mod error;
pub mod io;
pub mod linalg;
pub mod retrieval;
pub mod synth;

pub use embedding::EmbeddingMatrix;
pub use error::{Error, Result};
