//! Finite-difference discretization of planar problems on the truncated
//! quadrant.

mod grid;
mod operator;

pub use grid::{make_grid, Axis, Grid, OffsetRule, MIN_NODES};
pub use operator::{assemble, SparseOperator};

use crate::error::Result;
use crate::reduction::ReducedProblem2D;
use crate::scalar::Scalar;

/// Grid for a problem, offsetting nodes away from the potential's singular
/// rays when needed.
pub fn grid_for<T: Scalar>(problem: &ReducedProblem2D<T>, nx: usize, ny: usize) -> Result<Grid<T>> {
    make_grid(
        &problem.domain,
        nx,
        ny,
        &OffsetRule::Avoid(problem.base.singular_angles()),
    )
}
