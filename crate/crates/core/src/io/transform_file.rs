//! `QMT1` transform files: magic, `D` as u32 LE, then `D × D` f64 LE values
//! in row-major order.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::write_atomic;
use crate::align::{AnyTransform, Transform};
use crate::error::{Error, Result};

pub const TRANSFORM_MAGIC: [u8; 4] = *b"QMT1";

pub fn encode_transform<T: Transform + ?Sized>(t: &T) -> Result<Vec<u8>> {
    let m = t.matrix();
    let dims = u32::try_from(m.nrows())
        .map_err(|_| Error::InvalidArgument(format!("{} dimensions do not fit in u32", m.nrows())))?;
    let mut out = Vec::with_capacity(8 + 8 * m.len());
    out.extend_from_slice(&TRANSFORM_MAGIC);
    out.extend_from_slice(&dims.to_le_bytes());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            out.extend_from_slice(&m[(r, c)].to_le_bytes());
        }
    }
    Ok(out)
}

/// Parses a transform file. The matrix is classified as orthogonal when it
/// passes the orthogonality tolerance, otherwise as a general linear map.
pub fn decode_transform(bytes: &[u8]) -> Result<AnyTransform> {
    if bytes.len() < 4 || bytes[..4] != TRANSFORM_MAGIC {
        return Err(Error::BadMagic {
            expected: TRANSFORM_MAGIC,
            found: bytes[..bytes.len().min(4)].to_vec(),
        });
    }
    if bytes.len() < 8 {
        return Err(Error::Truncated {
            needed: 8,
            available: bytes.len() as u64,
        });
    }
    let dims = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as u64;
    if dims == 0 {
        return Err(Error::InvalidArgument("transform declares zero dimensions".into()));
    }
    // dims < 2³², so 8·dims² < 2⁶⁷ may overflow u64; saturate instead.
    let expected = dims.saturating_mul(dims).saturating_mul(8).saturating_add(8);
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
    let dims = dims as usize;
    let mut values = Vec::with_capacity(dims * dims);
    for (i, chunk) in bytes[8..].chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(Error::NonFinite {
                row: i / dims,
                column: i % dims,
            });
        }
        values.push(v);
    }
    AnyTransform::classify(DMatrix::from_row_slice(dims, dims, &values))
}

pub fn write_transform<T: Transform + ?Sized>(t: &T, path: &Path) -> Result<()> {
    write_atomic(path, &encode_transform(t)?)
}

pub fn read_transform(path: &Path) -> Result<AnyTransform> {
    decode_transform(&fs::read(path)?)
}
