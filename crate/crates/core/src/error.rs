use thiserror::Error;

use crate::model::{RequestId, Violation};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance too large for exact mode: {count} requests in {scope}, cap is {cap}")]
    CapExceeded {
        scope: String,
        count: usize,
        cap: usize,
    },

    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("window of request {id} starts on a period boundary at {start}")]
    BoundaryStart { id: RequestId, start: Rational },

    #[error(
        "request {id} fully contains {count} periods, which the trimming scheme does not handle"
    )]
    UnsupportedClass { id: RequestId, count: i128 },

    #[error("{what} = {value} is outside the supported range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: Rational,
        lo: Rational,
        hi: Rational,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown identifier `{0}`")]
    UnknownId(String),

    #[error("could not write report: {0}")]
    Report(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
