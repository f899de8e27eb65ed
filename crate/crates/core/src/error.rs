use thiserror::Error;

use crate::report::CheckReport;

pub type Result<T, E = GsiError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GsiError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("a point needs at least one coordinate")]
    EmptyPoint,

    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("index set must be nonempty")]
    EmptyIndexSet,

    #[error("dimension {0} is not supported (expected 1..={max})", max = crate::lattice::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("box lower corner {lo} is not below upper corner {hi}")]
    InvertedBox { lo: String, hi: String },

    #[error("box with {0} cells exceeds the materialization limit")]
    BoxTooLarge(u128),

    #[error("malformed representation: {0}")]
    Malformed(String),

    #[error("axiom check failed: {}", summarize(.0))]
    Axiom(Box<CheckReport>),

    #[error("not a good semigroup: {0}")]
    NotSemigroup(String),

    #[error("point set is not representable as a good semigroup ideal: {0}")]
    NotRepresentable(String),

    #[error("membership did not stabilize at the search box boundary: member {0} touches the lower face")]
    BoundaryInstability(String),

    #[error("internal soundness failure: {0}")]
    Soundness(String),

    #[error("numerical semigroup generators {0:?} have gcd {1}; no conductor exists")]
    Gcd(Vec<i64>, i64),

    #[error("random generation failed after {0} attempts")]
    RetryBudget(u32),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<GsiError>,
    },
}

fn summarize(report: &CheckReport) -> String {
    match report.counterexamples.first() {
        Some(ev) => format!("{} ({})", ev.label, ev.describe()),
        None => report.check_name.clone(),
    }
}
