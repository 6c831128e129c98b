use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point lies on the singular line {line}")]
    SingularPoint { line: String },

    #[error("parameter {name} = {value} violates the bound {name} > {bound}")]
    BoundViolation { name: &'static str, value: f64, bound: f64 },

    #[error("parameter {name} must be finite")]
    NonFinite { name: &'static str },

    #[error("k must be nonzero")]
    ZeroK,

    #[error("{name} must be positive, got {value}")]
    NonPositiveMassOrFrequency { name: &'static str, value: f64 },

    #[error("mass {index} must be positive, got {value}")]
    NonPositiveMass { index: usize, value: f64 },

    #[error("pair distance {name} must be positive, got {value}")]
    NonPositiveDistance { name: &'static str, value: f64 },

    #[error("pair distances ({r12}, {r13}, {r23}) violate the triangle inequality")]
    TriangleInequality { r12: f64, r13: f64, r23: f64 },

    #[error("configuration ({r12}, {r13}, {r23}) is not ordered on a line")]
    NotOrderedLine { r12: f64, r13: f64, r23: f64 },

    #[error("fraction {m}/{n} needs positive integers")]
    InvalidFraction { m: u64, n: u64 },

    #[error("point chart does not match family {family}")]
    ChartMismatch { family: &'static str },

    #[error("custom potential {name} has no evaluation callback attached")]
    MissingCallback { name: String },

    #[error("potential family {family} is not a function of the two radii")]
    NotRadial { family: &'static str },

    #[error("potential family {family} does not depend on Jacobi distances only")]
    PotentialNotJacobiRadial { family: &'static str },

    #[error("angular momentum L = {l} is not admissible in dimension d = {d}")]
    InvalidAngularMomentum { d: u32, l: u32 },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("no parameter triple reproduces the target potential (deviation {deviation:e})")]
    FitFailure { deviation: f64 },

    #[error("grid needs at least 8 nodes per axis, got {n}")]
    GridTooCoarse { n: usize },

    #[error("box extent {name} must be positive, got {value}")]
    InvalidBox { name: &'static str, value: f64 },

    #[error("grid nodes hit the singular angle {angle} even after offsetting")]
    SingularNodeUnavoidable { angle: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Krylov breakdown: invariant subspace of dimension {available} is smaller than the {requested} requested levels")]
    Breakdown { available: usize, requested: usize },

    #[error("eigensolver did not converge: max residual {max_residual:e} after {iterations} iterations")]
    NotConverged { iterations: usize, max_residual: f64 },

    #[error("invalid solver request: {reason}")]
    InvalidRequest { reason: String },

    #[error("oracle accuracy not reached: achieved {achieved:e}, target {target:e}")]
    AccuracyNotReached { achieved: f64, target: f64 },

    #[error("potential family {family} is not separable")]
    NotSeparable { family: &'static str },

    #[error("k is irrational; no finite-order integral is claimed")]
    NotRational,

    #[error("coordinate bridge does not map {from} points")]
    BridgeMismatch { from: &'static str },

    #[error("unknown check id {0}")]
    UnknownCheckId(String),

    #[error("no separated-variable oracle for family {family}")]
    OracleUnavailable { family: &'static str },
}
