// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty degree sequence")]
    EmptySequence,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A degree value spans a block boundary, so the partition cannot satisfy
    /// the equal-mass, disjoint-degree-set requirement of strict mode.
    #[error("strict partition impossible: degree {degree} straddles the boundary between blocks {left} and {right}")]
    Assumption1Violation { degree: u32, left: usize, right: usize },

    #[error("stub count {stubs} of community {community} is not divisible by b = {b}")]
    IndivisibleStubs { community: usize, stubs: usize, b: usize },

    #[error("stub pool `{0}` cannot be perfectly matched")]
    Unmatchable(String),

    #[error("zero variance: {0}")]
    ZeroVariance(&'static str),

    #[error("no regular edges in graph")]
    NoRegularEdges,

    #[error("negative variance {0} (formula misuse)")]
    NegativeVariance(f64),

    #[error("partitions cover different vertex sets ({left} vs {right} vertices)")]
    PartitionMismatch { left: usize, right: usize },

    #[error("power-law fit impossible: {0}")]
    DegenerateFit(&'static str),

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("parse error in {source_name} line {line}: {reason}")]
    Parse { source_name: String, line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { key: key.into(), reason: reason.into() }
    }
}
