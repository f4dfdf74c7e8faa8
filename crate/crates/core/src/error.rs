use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: malformed record: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("document {doc_id:?}: invalid field `{field}`: {reason}")]
    InvalidDocument {
        doc_id: String,
        field: &'static str,
        reason: String,
    },

    #[error("sequence too short: need at least {min} values, got {len}")]
    TooShort { len: usize, min: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("frequency index {k} out of range 1..={max}")]
    FrequencyOutOfRange { k: usize, max: usize },

    #[error("design matrix is rank deficient; dependent columns: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    #[error("not enough observations: {rows} rows for {columns} columns")]
    Underdetermined { rows: usize, columns: usize },

    #[error("cannot resolve scaler `{scaler}` for document {doc_id:?}: {reason}")]
    Unresolvable {
        scaler: String,
        doc_id: String,
        reason: String,
    },

    #[error("{0}")]
    Empty(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
