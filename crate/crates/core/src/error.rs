use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),
    #[error("scalars from different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid dg algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid dg module: {0}")]
    InvalidModule(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("operation requires a normalized positive (class P) algebra: {0}")]
    NotClassP(String),
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("Maurer-Cartan equation fails: {0}")]
    MaurerCartan(String),
    #[error("twisted differential is not strictly triangular in any cell order")]
    NotTriangular,
    #[error("morphism is not a cycle in the Hom complex")]
    NotACycle,
    #[error("cell budget must be at least 1")]
    ZeroBudget,
    #[error("empty degree range")]
    EmptyRange,
    #[error("homology is not concentrated in degree 0")]
    NotConcentrated,
    #[error("object is not in the heart")]
    NotInHeart,
    #[error("empty family")]
    EmptyFamily,
    #[error("number of stages must be at least 1")]
    NoStages,
    #[error("certificate failed: {0}")]
    Certificate(String),
}
