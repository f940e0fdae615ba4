use thiserror::Error;

use crate::verdict::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is empty")]
    EmptyTable,

    #[error("table row {row} has length {len}, expected {expected}")]
    RaggedTable { row: usize, len: usize, expected: usize },

    #[error("table entry {value} at ({row}, {col}) is outside 0..{bound}")]
    EntryOutOfRange { row: usize, col: usize, value: usize, bound: usize },

    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },

    #[error("no element acts as a two-sided identity")]
    NoIdentity,

    #[error("element {a} has no two-sided inverse")]
    NoInverse { a: usize },

    #[error("size limit exceeded: {what} needs {requested}, limit is {limit}")]
    SizeLimitExceeded { what: String, requested: u128, limit: u128 },

    #[error("row {row} is not a bijection")]
    RowNotBijective { row: usize },

    #[error("self-distributivity fails at ({r}, {s}, {t}): r>(s>t) = {lhs}, (r>s)>(r>t) = {rhs}")]
    SelfDistributivityViolation { r: usize, s: usize, t: usize, lhs: usize, rhs: usize },

    #[error("alpha = {alpha} is not a unit modulo {n}")]
    AlphaNotUnit { alpha: usize, n: usize },

    #[error("action compatibility fails at ({r1}, {r2}, {x}): r1.(r2.x) = {lhs}, (r1>r2).(r1.x) = {rhs}")]
    CompatibilityViolation { r1: usize, r2: usize, x: usize, lhs: usize, rhs: usize },

    #[error("not a group action: {detail}")]
    NotAGroupAction { detail: String },

    #[error("index {index} is outside 0..{bound}")]
    IndexOutOfRange { index: u128, bound: u128 },

    #[error("subset {subset:?} is not a subrack")]
    NotASubrack { subset: Vec<usize> },

    #[error("memory element {element} is not contained in the subset")]
    MemoryNotContained { element: usize },

    #[error("map admits no memory set")]
    NotACellularAutomaton { witness: Box<Witness> },

    #[error("pattern position {position} is not covered by the composed memory set")]
    PatternNotCovered { position: usize },

    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),

    #[error("mismatched objects: {0}")]
    Mismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Variant name, printed by the command line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyTable => "EmptyTable",
            Error::RaggedTable { .. } => "RaggedTable",
            Error::EntryOutOfRange { .. } => "EntryOutOfRange",
            Error::NotAssociative { .. } => "NotAssociative",
            Error::NoIdentity => "NoIdentity",
            Error::NoInverse { .. } => "NoInverse",
            Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
            Error::RowNotBijective { .. } => "RowNotBijective",
            Error::SelfDistributivityViolation { .. } => "SelfDistributivityViolation",
            Error::AlphaNotUnit { .. } => "AlphaNotUnit",
            Error::CompatibilityViolation { .. } => "CompatibilityViolation",
            Error::NotAGroupAction { .. } => "NotAGroupAction",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotASubrack { .. } => "NotASubrack",
            Error::MemoryNotContained { .. } => "MemoryNotContained",
            Error::NotACellularAutomaton { .. } => "NotACellularAutomaton",
            Error::PatternNotCovered { .. } => "PatternNotCovered",
            Error::UnknownClaim(_) => "UnknownClaim",
            Error::Mismatch(_) => "Mismatch",
            Error::Invalid(_) => "Invalid",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::SizeLimitExceeded { .. })
    }
}

/// Square table checks shared by the group, rack and action loaders.
pub(crate) fn check_table(rows: &[Vec<usize>], width: usize, bound: usize) -> Result<()> {
    for (row, entries) in rows.iter().enumerate() {
        if entries.len() != width {
            return Err(Error::RaggedTable { row, len: entries.len(), expected: width });
        }
        if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= bound) {
            return Err(Error::EntryOutOfRange { row, col, value, bound });
        }
    }
    Ok(())
}
