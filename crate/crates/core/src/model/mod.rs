//! Potential catalog: families, parameter validation and pointwise evaluation.

mod potential;
mod rational;
mod three_body;
mod validate;

pub use potential::{eval_potential, Chart, CustomPotential, Point, PotentialFn, PotentialSpec, SINGULAR_TOL};
pub use rational::RationalOrReal;
pub use three_body::{permute_particles, Permutation, ThreeBodyConfig};
pub use validate::{ttw_strength_bound, validate, CheckedSpec};
