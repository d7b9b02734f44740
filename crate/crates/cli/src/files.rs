use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use orthalign::align::zero_pad;
use orthalign::io::{encode_embeddings, format_tsv, load_embeddings, write_atomic, Dtype};
use orthalign::EmbeddingMatrix;
use serde::Serialize;

/// Why a command stopped; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    Library(orthalign::Error),
    Usage(String),
    /// Outputs were written but an inequality check failed.
    Violation(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Library(e) if e.is_io() => 3,
            Failure::Library(_) | Failure::Usage(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Library(e) => write!(f, "{} ({})", e, e.code()),
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Violation(msg) => write!(f, "bound check failed: {msg}"),
        }
    }
}

impl From<orthalign::Error> for Failure {
    fn from(e: orthalign::Error) -> Self {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Library(e.into())
    }
}

pub type Outcome = Result<(), Failure>;

/// Attaches `path` to a read error. I/O failures keep exit code 3;
/// anything else is invalid input.
pub fn reading<T>(path: &Path, r: orthalign::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| match e {
        orthalign::Error::Io(io) => Failure::Library(orthalign::Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        ))),
        other => Failure::Usage(format!("{}: {} ({})", path.display(), other, other.code())),
    })
}

pub fn load(path: &Path) -> Result<(EmbeddingMatrix, Option<Dtype>), Failure> {
    reading(path, load_embeddings(path))
}

/// Embedding bytes for `path`: TSV when it ends in `.tsv`, otherwise the
/// binary format at `dtype`, falling back to `inherited`, then to `f32`.
pub fn embedding_bytes(
    path: &Path,
    m: &EmbeddingMatrix,
    dtype: Option<Dtype>,
    inherited: Option<Dtype>,
) -> Result<Vec<u8>, Failure> {
    if path.extension().is_some_and(|e| e == "tsv") {
        Ok(format_tsv(m)?.into_bytes())
    } else {
        Ok(encode_embeddings(m, dtype.or(inherited).unwrap_or_default())?)
    }
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

pub fn csv_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Usage(e.to_string()))
}

/// `field,value` CSV for flat key/value summaries.
pub fn key_value_csv(pairs: &[(String, String)]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).map_err(|e| Failure::Usage(e.to_string()))?;
    for (k, v) in pairs {
        w.write_record([k, v]).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Usage(e.to_string()))
}

/// Writes every file only after all of them were produced, each one
/// atomically.
pub fn write_outputs(outputs: Vec<(PathBuf, Vec<u8>)>) -> Outcome {
    for (path, bytes) in outputs {
        write_atomic(&path, &bytes).map_err(|e| match e {
            orthalign::Error::Io(io) => Failure::Library(orthalign::Error::Io(std::io::Error::new(
                io.kind(),
                format!("{}: {io}", path.display()),
            ))),
            other => Failure::Library(other),
        })?;
    }
    Ok(())
}

/// `path` with `suffix` appended to its file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name: OsString = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

/// Zero-pads the lower-dimensional side so both share a dimension.
pub fn pad_to_common(a: &EmbeddingMatrix, b: &EmbeddingMatrix) -> Result<(EmbeddingMatrix, EmbeddingMatrix), Failure> {
    let dims = a.dims().max(b.dims());
    Ok((zero_pad(a, dims)?, zero_pad(b, dims)?))
}

pub fn normalize(m: EmbeddingMatrix, label: &str) -> EmbeddingMatrix {
    let (out, zeros) = m.normalized();
    if zeros > 0 {
        eprintln!("warning: {zeros} zero {label} embeddings left unnormalized");
    }
    out
}
