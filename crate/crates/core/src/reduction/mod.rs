//! Symmetry reduction to planar problems and the three-body Jacobi route.

mod centrifugal;
mod jacobi;
mod problem;
mod wolfes;

pub use centrifugal::centrifugal_coefficient;
pub use jacobi::{
    build_jacobi, equal_mass_line_frame, jacobi_polar, kinetic_gram, ordered_line_config, polar_from_jacobi,
    JacobiFrame,
};
pub use problem::{default_box, jacobi_oscillator, map_threebody, reduce_to_2d, BoxDomain, ReducedProblem2D};
pub use wolfes::{
    ordered_line_samples, wolfes_to_ttw, wolfes_to_ttw_in_frame, TtwImage, IDENTITY_TOL, SINGULAR_EXCLUSION,
};
