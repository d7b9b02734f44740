//! Embedding and transform storage.

mod binary;
mod pair;
mod transform_file;
mod tsv;

use std::io::Write;
use std::path::Path;

pub use binary::{
    decode_embeddings, encode_embeddings, read_embeddings, read_embeddings_typed, write_embeddings, Dtype,
    EmbeddingFileHeader, EMBEDDING_MAGIC, HEADER_LEN,
};
pub use pair::{pair_by_id, PairPolicy};
pub use transform_file::{decode_transform, encode_transform, read_transform, write_transform, TRANSFORM_MAGIC};
pub use tsv::{format_tsv, parse_tsv, read_tsv, write_tsv};

use crate::embedding::EmbeddingMatrix;
use crate::error::Result;

/// Reads embeddings from either format, detected by the `EMB1` magic.
pub fn load_embeddings(path: &Path) -> Result<(EmbeddingMatrix, Option<Dtype>)> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(&EMBEDDING_MAGIC) {
        let (m, dtype) = decode_embeddings(&bytes)?;
        Ok((m, Some(dtype)))
    } else {
        let text = std::str::from_utf8(&bytes).map_err(|e| crate::Error::Parse {
            line: 0,
            message: format!("neither EMB1 nor UTF-8 text: {e}"),
        })?;
        Ok((parse_tsv(text)?, None))
    }
}

/// Writes through a temporary file in the destination directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
