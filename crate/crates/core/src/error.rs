use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("shape mismatch")]
    ShapeMismatch,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("axis {axis} out of range for m = {m}")]
    AxisOutOfRange { axis: usize, m: usize },
    #[error("multi-index {0:?} exceeds the bound tau(n)")]
    IndexOutOfBounds(Vec<u32>),
    #[error("operation requires m = 2, got m = {0}")]
    RequiresTwoVariables(usize),
    #[error("the Melikyan bracket requires characteristic 5, got {0}")]
    RequiresCharacteristicFive(u32),
    #[error("requires n1 = n2, got n = ({0}, {1})")]
    UnequalShape(u32, u32),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group mismatch")]
    GroupMismatch,
    #[error("homomorphism is not well defined: {0}")]
    IllDefinedHom(String),
    #[error("group has free rank {0}; characters need a finite group")]
    InfiniteGroup(usize),
    #[error("malformed grading: {0}")]
    MalformedGrading(String),
    #[error("not a refinement: component {label} is not contained in a single component")]
    NotRefinement { label: String },
    #[error("label map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("torus parameters must be nonzero")]
    ZeroParameter,
    #[error("matrix is singular")]
    Singular,
    #[error("map does not preserve the bracket on basis pair ({0}, {1})")]
    NotAutomorphism(usize, usize),
    #[error("map does not preserve W")]
    NotWPreserving,
    #[error("endomorphism acts on the wrong algebra: expected {expected}, got {got}")]
    WrongAlgebra { expected: String, got: String },
    #[error("ad(y)^3 != 0; the truncated exponential is not an automorphism")]
    NilpotencyTooHigh,
    #[error("operators do not commute: {0} and {1}")]
    NonCommuting(usize, usize),
    #[error("operator {0} is not diagonalizable over the field")]
    NotDiagonalizable(usize),
    #[error("operator {0} has order divisible by the characteristic")]
    OrderDivisibleByCharacteristic(usize),
    #[error("operator {index} has eigenvalue outside the group of order {order}")]
    EigenvalueOutsideCharacterGroup { index: usize, order: u64 },
    #[error("no solution for the extension constants")]
    NoExtension,
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
