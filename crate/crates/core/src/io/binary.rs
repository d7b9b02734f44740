//! `EMB1` binary embedding files.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size | field                                   |
//! |-------:|-----:|-----------------------------------------|
//! | 0      | 4    | magic `EMB1`                            |
//! | 4      | 1    | dtype: 0 = f32, 1 = f64                 |
//! | 5      | 4    | dims (u32, ≥ 1)                         |
//! | 9      | 8    | count (u64)                             |
//! | 17     | 8    | id_block_len (u64)                      |
//! | 25     | ...  | id block: `count` UTF-8 ids, each terminated by `\n` |
//! | ...    | ...  | `count × dims` values, item-major       |

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::write_atomic;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};

pub const EMBEDDING_MAGIC: [u8; 4] = *b"EMB1";
pub const HEADER_LEN: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dtype {
    #[default]
    F32,
    F64,
}

impl Dtype {
    pub fn code(self) -> u8 {
        match self {
            Dtype::F32 => 0,
            Dtype::F64 => 1,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(Dtype::F32),
            1 => Ok(Dtype::F64),
            other => Err(Error::UnsupportedDtype(other)),
        }
    }

    pub fn width(self) -> usize {
        match self {
            Dtype::F32 => 4,
            Dtype::F64 => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingFileHeader {
    pub dtype: Dtype,
    pub dims: u32,
    pub count: u64,
    pub id_block_len: u64,
}

impl EmbeddingFileHeader {
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 || bytes[..4] != EMBEDDING_MAGIC {
            return Err(Error::BadMagic {
                expected: EMBEDDING_MAGIC,
                found: bytes[..bytes.len().min(4)].to_vec(),
            });
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated {
                needed: HEADER_LEN as u64,
                available: bytes.len() as u64,
            });
        }
        let dtype = Dtype::from_code(bytes[4])?;
        let dims = u32::from_le_bytes(bytes[5..9].try_into().unwrap());
        let count = u64::from_le_bytes(bytes[9..17].try_into().unwrap());
        let id_block_len = u64::from_le_bytes(bytes[17..25].try_into().unwrap());
        if dims == 0 {
            return Err(Error::InvalidArgument("header declares zero dimensions".into()));
        }
        Ok(Self {
            dtype,
            dims,
            count,
            id_block_len,
        })
    }

    fn encode(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&EMBEDDING_MAGIC);
        out.push(self.dtype.code());
        out.extend_from_slice(&self.dims.to_le_bytes());
        out.extend_from_slice(&self.count.to_le_bytes());
        out.extend_from_slice(&self.id_block_len.to_le_bytes());
    }

    /// Total file size implied by the header, or `None` on overflow.
    fn expected_len(&self) -> Option<u64> {
        let values = self
            .count
            .checked_mul(self.dims as u64)?
            .checked_mul(self.dtype.width() as u64)?;
        (HEADER_LEN as u64)
            .checked_add(self.id_block_len)?
            .checked_add(values)
    }
}

/// Serialises `m` in the `EMB1` format.
pub fn encode_embeddings(m: &EmbeddingMatrix, dtype: Dtype) -> Result<Vec<u8>> {
    let dims = u32::try_from(m.dims())
        .map_err(|_| Error::InvalidArgument(format!("{} dimensions do not fit in u32", m.dims())))?;
    let mut ids = Vec::new();
    for id in m.ids() {
        if id.contains('\n') {
            return Err(Error::InvalidId(id.clone()));
        }
        ids.extend_from_slice(id.as_bytes());
        ids.push(b'\n');
    }
    let header = EmbeddingFileHeader {
        dtype,
        dims,
        count: m.count() as u64,
        id_block_len: ids.len() as u64,
    };
    let mut out = Vec::with_capacity(HEADER_LEN + ids.len() + m.values().len() * dtype.width());
    header.encode(&mut out);
    out.extend_from_slice(&ids);
    // Column-major storage is already item-major.
    for (i, &v) in m.values().iter().enumerate() {
        match dtype {
            Dtype::F64 => out.extend_from_slice(&v.to_le_bytes()),
            Dtype::F32 => {
                let narrow = v as f32;
                if !narrow.is_finite() {
                    return Err(Error::NonFinite {
                        row: i % m.dims(),
                        column: i / m.dims(),
                    });
                }
                out.extend_from_slice(&narrow.to_le_bytes());
            }
        }
    }
    Ok(out)
}

/// Parses an `EMB1` byte buffer. 32-bit values are widened exactly.
///
/// The declared sizes are checked against the buffer length before any
/// allocation proportional to them.
pub fn decode_embeddings(bytes: &[u8]) -> Result<(EmbeddingMatrix, Dtype)> {
    let header = EmbeddingFileHeader::decode(bytes)?;
    let expected = header.expected_len().ok_or(Error::Truncated {
        needed: u64::MAX,
        available: bytes.len() as u64,
    })?;
    let available = bytes.len() as u64;
    if available < expected {
        return Err(Error::Truncated {
            needed: expected,
            available,
        });
    }
    if available > expected {
        return Err(Error::TrailingData(available - expected));
    }

    let dims = header.dims as usize;
    let count = header.count as usize;
    let id_end = HEADER_LEN + header.id_block_len as usize;
    let ids = decode_ids(&bytes[HEADER_LEN..id_end], count)?;

    let payload = &bytes[id_end..];
    let width = header.dtype.width();
    let mut values = Vec::with_capacity(dims * count);
    for (i, chunk) in payload.chunks_exact(width).enumerate() {
        let v = match header.dtype {
            Dtype::F64 => f64::from_le_bytes(chunk.try_into().unwrap()),
            Dtype::F32 => f32::from_le_bytes(chunk.try_into().unwrap()) as f64,
        };
        if !v.is_finite() {
            return Err(Error::NonFinite {
                row: i % dims,
                column: i / dims,
            });
        }
        values.push(v);
    }
    let matrix = DMatrix::from_vec(dims, count, values);
    Ok((EmbeddingMatrix::new(matrix, ids)?, header.dtype))
}

fn decode_ids(block: &[u8], count: usize) -> Result<Vec<String>> {
    let text = std::str::from_utf8(block).map_err(|e| Error::IdBlock(format!("invalid UTF-8: {e}")))?;
    if count == 0 {
        if !text.is_empty() {
            return Err(Error::IdBlock("non-empty id block for zero items".into()));
        }
        return Ok(Vec::new());
    }
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::IdBlock("id block must end with a newline".into()))?;
    let ids: Vec<String> = body.split('\n').map(str::to_owned).collect();
    if ids.len() != count {
        return Err(Error::IdBlock(format!("expected {count} ids, found {}", ids.len())));
    }
    Ok(ids)
}

pub fn write_embeddings(m: &EmbeddingMatrix, path: &Path, dtype: Dtype) -> Result<()> {
    let bytes = encode_embeddings(m, dtype)?;
    write_atomic(path, &bytes)
}

pub fn read_embeddings(path: &Path) -> Result<EmbeddingMatrix> {
    read_embeddings_typed(path).map(|(m, _)| m)
}

/// Like [`read_embeddings`], also returning the on-disk dtype.
pub fn read_embeddings_typed(path: &Path) -> Result<(EmbeddingMatrix, Dtype)> {
    let bytes = fs::read(path)?;
    decode_embeddings(&bytes)
}
