//! Reduction of few-body Schrödinger problems to planar ones, sparse
//! finite-difference spectra, separated-variable oracles and
//! superintegrability probes.
//!
//! Numerical types are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below name the two concrete instantiations. The one-dimensional
//! oracles and the superintegrability probes work in `f64` only.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discretize;
pub mod eigensolve;
pub mod error;
pub mod model;
pub mod oracles;
pub mod reduction;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod superintegrability;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PotentialSpecF64 = model::PotentialSpec<f64>;
pub type PotentialSpecF32 = model::PotentialSpec<f32>;
pub type ReducedProblemF64 = reduction::ReducedProblem2D<f64>;
pub type ReducedProblemF32 = reduction::ReducedProblem2D<f32>;
pub type JacobiFrameF64 = reduction::JacobiFrame<f64>;
pub type JacobiFrameF32 = reduction::JacobiFrame<f32>;
pub type GridF64 = discretize::Grid<f64>;
pub type GridF32 = discretize::Grid<f32>;
pub type OperatorF64 = discretize::SparseOperator<f64>;
pub type OperatorF32 = discretize::SparseOperator<f32>;
pub type EigenResultF64 = eigensolve::EigenResult<f64>;
pub type EigenResultF32 = eigensolve::EigenResult<f32>;
