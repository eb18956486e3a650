use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed arguments: out-of-range elements, overlapping sets, bad parameters.
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    /// A search or enumeration outgrew its configured limit.
    #[error("capacity error: {what} exceeded limit {limit} ({})", reached(*.count))]
    Capacity { what: String, limit: usize, count: usize },

    /// Structurally invalid matroid for the requested operation (loops, rank 0, infeasible point).
    #[error("domain error: {0}")]
    Domain(String),
}

fn reached(count: usize) -> String {
    if count == usize::MAX {
        "count overflows usize".to_string()
    } else {
        format!("reached {count}")
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn capacity(what: impl Into<String>, limit: usize, count: usize) -> Self {
        Error::Capacity { what: what.into(), limit, count }
    }
}
