use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is not a unit (constant term is zero)")]
    NotAUnit,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(usize, usize),
    #[error("matrix is not invertible over the series ring (singular constant term)")]
    NotInvertible,
    #[error("morphism has the wrong codomain: {0}")]
    WrongCodomain(String),
    #[error(
        "pairing does not satisfy the compatibility identity (first failure at entry ({row},{col}), order {order})"
    )]
    NotCompatible { row: usize, col: usize, order: usize },
    #[error("submodule is not normal: the quotient has b-torsion")]
    NotNormal,
    #[error("morphism is not an endomorphism")]
    NotEndomorphism,
    #[error("exponent polynomial has roots outside Q(i): {0}")]
    NonRationalExponent(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("module is not self-adjoint: no nondegenerate sesquilinear form exists")]
    NotSelfAdjoint,
    #[error("morphism is not an isomorphism")]
    NotIsomorphism,
    #[error("symmetrized pairing is degenerate (det of the constant term vanishes)")]
    DegenerateSymmetrization,
    #[error("normalization must be a nonzero scalar")]
    ZeroNormalization,
    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared symbol `{symbol}` at line {line}, column {column}")]
    UndeclaredSymbol { symbol: String, line: usize, column: usize },
    #[error("non-rational coefficient `{symbol}` at line {line}, column {column}")]
    NonRationalCoefficient { symbol: String, line: usize, column: usize },
    #[error("invalid document: {0}")]
    Format(String),
}
