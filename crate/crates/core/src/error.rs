use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parts sum to {actual}, expected {expected}")]
    PartitionSum { expected: usize, actual: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("cannot mix partitions of {left} and {right}")]
    MixedDegrees { left: usize, right: usize },

    #[error("resource guard exceeded: work {work} > limit {limit}")]
    ResourceGuard { work: u128, limit: u64 },

    #[error("argument out of supported range: {0}")]
    OutOfRange(String),

    #[error("edge not in tree")]
    EdgeNotInTree,

    #[error("cannot contract an unbounded edge")]
    ContractUnbounded,

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("chamber disagreement: {0}")]
    ChamberDisagreement(String),

    #[error("cell is not acceptable (some I(v) = 0)")]
    UnacceptableCell,

    #[error("invalid input: {0}")]
    Invalid(String),
}
