//! Independent reference spectra from separation of variables.

mod angular;
mod ode;
mod pregauge;
mod radial;
mod separated;
mod sturm;

pub use angular::{angular_levels, angular_levels_shooting, angular_pt_levels, AngularProblem, Weighting};
pub use pregauge::{pregauge_spectrum, PregaugeProblem};
pub use radial::{
    effective_cutoff, radial_spectrum, radial_spectrum_shooting, radial_spectrum_with_errors, RadialPotential,
    RadialProblem, DEFAULT_TARGET,
};
pub use separated::{lowest_separated, quadrant_levels, separated_spectrum, OracleLevel, OracleSpectrum};
