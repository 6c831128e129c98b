//! Spectra of separable two-dimensional problems assembled from
//! one-dimensional oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::angular::{angular_levels, AngularProblem, Weighting};
use super::radial::{radial_spectrum, RadialProblem};
use crate::error::{Error, Result};
use crate::model::{validate, PotentialSpec};
use crate::reduction::ReducedProblem2D;
use crate::report::sig17;

/// A level labelled by its separation quantum numbers. Cartesian families
/// use `(n_x, n_y)` in the `(n_r, j)` slots.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub n_r: usize,
    pub j: usize,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSpectrum {
    pub family: String,
    pub parameters: PotentialSpec,
    /// Sorted by energy.
    pub levels: Vec<OracleLevel>,
}

impl OracleSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_r,j,energy\n");
        for l in &self.levels {
            out.push_str(&format!("{},{},{}\n", l.n_r, l.j, sig17(l.energy)));
        }
        out
    }
}

/// Separation data of a family.
enum Separation {
    /// Independent one-dimensional problems in `x` and `y`.
    Cartesian(RadialProblem, RadialProblem),
    /// Angular problem on the fundamental sector; the radial problem takes
    /// `c = Λ − 1/4` from each angular level.
    Polar(AngularProblem, RadialProblem),
}

fn separation(spec: &PotentialSpec, cx: f64, cy: f64) -> Result<Separation> {
    let family = spec.family();
    Ok(match spec {
        PotentialSpec::HydrogenPair => {
            Separation::Cartesian(RadialProblem::coulomb(1.0, cx), RadialProblem::coulomb(1.0, cy))
        }
        PotentialSpec::CagedOscillator {
            a,
            b,
            omega,
            coupling_x,
            coupling_y,
        } => Separation::Cartesian(
            RadialProblem::oscillator(a.sqrt() * omega, coupling_x + cx),
            RadialProblem::oscillator(b.sqrt() * omega, coupling_y + cy),
        ),
        PotentialSpec::Ttw { omega, k, alpha, beta } => Separation::Polar(
            AngularProblem::new(k.value(), *alpha, *beta, Weighting::Plain),
            RadialProblem::oscillator(*omega, 0.0),
        ),
        PotentialSpec::ThreeBodyTtw { omega, k, alpha, beta } => Separation::Polar(
            AngularProblem::new(k.value(), *alpha, *beta, Weighting::KSquared),
            RadialProblem::oscillator(*omega, 0.0),
        ),
        PotentialSpec::Pw { a, k, mu, nu } => Separation::Polar(
            AngularProblem::new(0.5 * k.value(), *mu, *nu, Weighting::Plain),
            RadialProblem::coulomb(*a, 0.0),
        ),
        PotentialSpec::Calogero { .. } | PotentialSpec::Wolfes { .. } | PotentialSpec::Custom2D(_) => {
            return Err(Error::NotSeparable { family })
        }
    })
}

fn sorted(mut levels: Vec<OracleLevel>) -> Vec<OracleLevel> {
    levels.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then(a.j.cmp(&b.j))
            .then(a.n_r.cmp(&b.n_r))
    });
    levels
}

/// All levels with `n_r ≤ n_r_max` and `j ≤ j_max`. For polar families the
/// spectrum is that of the fundamental sector `(0, π/(2k))` (`(0, π/k)` for
/// PW).
pub fn separated_spectrum(spec: &PotentialSpec, n_r_max: usize, j_max: usize) -> Result<OracleSpectrum> {
    let checked = validate(spec)?;
    let levels = match separation(&checked, 0.0, 0.0)? {
        Separation::Cartesian(px, py) => {
            let ex = radial_spectrum(&px, n_r_max + 1)?;
            let ey = radial_spectrum(&py, j_max + 1)?;
            grid_levels(&ex, &ey)
        }
        Separation::Polar(angular, radial) => {
            let lambdas = angular_levels(&angular, j_max + 1)?;
            let rows: Vec<Vec<f64>> = lambdas
                .par_iter()
                .map(|&l| radial_spectrum(&RadialProblem { c: l - 0.25, ..radial }, n_r_max + 1))
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            for (j, row) in rows.iter().enumerate() {
                for (n_r, &energy) in row.iter().enumerate() {
                    out.push(OracleLevel { n_r, j, energy });
                }
            }
            out
        }
    };
    Ok(OracleSpectrum {
        family: spec.family().to_string(),
        parameters: spec.clone(),
        levels: sorted(levels),
    })
}

fn grid_levels(ex: &[f64], ey: &[f64]) -> Vec<OracleLevel> {
    let mut out = Vec::with_capacity(ex.len() * ey.len());
    for (n_r, &x) in ex.iter().enumerate() {
        for (j, &y) in ey.iter().enumerate() {
            out.push(OracleLevel { n_r, j, energy: x + y });
        }
    }
    out
}

fn lowest_of(sep: Separation, count: usize) -> Result<Vec<OracleLevel>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let levels = match sep {
        Separation::Cartesian(px, py) => {
            let ex = radial_spectrum(&px, count)?;
            let ey = radial_spectrum(&py, count)?;
            grid_levels(&ex, &ey)
        }
        Separation::Polar(angular, radial) => {
            // a level (n_r, j) has (n_r + 1)(j + 1) − 1 levels below it
            let lambdas = angular_levels(&angular, count)?;
            let rows: Vec<Vec<f64>> = lambdas
                .par_iter()
                .enumerate()
                .map(|(j, &l)| radial_spectrum(&RadialProblem { c: l - 0.25, ..radial }, count / (j + 1)))
                .collect::<Result<_>>()?;
            let mut out = Vec::new();
            for (j, row) in rows.iter().enumerate() {
                for (n_r, &energy) in row.iter().enumerate() {
                    out.push(OracleLevel { n_r, j, energy });
                }
            }
            out
        }
    };
    let mut levels = sorted(levels);
    levels.truncate(count);
    Ok(levels)
}

/// The `count` lowest levels of a separable family, labelled.
pub fn lowest_separated(spec: &PotentialSpec, count: usize) -> Result<OracleSpectrum> {
    let checked = validate(spec)?;
    let levels = lowest_of(separation(&checked, 0.0, 0.0)?, count)?;
    Ok(OracleSpectrum {
        family: spec.family().to_string(),
        parameters: spec.clone(),
        levels,
    })
}

/// The `count` lowest levels of a reduced problem on its quadrant
/// `x, y > 0`, without the box walls.
///
/// Radial-chart families separate directly with the centrifugal terms.
/// Polar families need the centrifugal terms absorbed into the family and
/// an integer number of singular sectors in the quadrant; every sector
/// contributes the same spectrum.
pub fn quadrant_levels(problem: &ReducedProblem2D, count: usize) -> Result<Vec<f64>> {
    let base = &problem.base;
    let family = base.family();
    match base {
        PotentialSpec::HydrogenPair | PotentialSpec::CagedOscillator { .. } => {
            let sep = separation(&*validate(base)?, problem.cx, problem.cy)?;
            Ok(lowest_of(sep, count)?.iter().map(|l| l.energy).collect())
        }
        PotentialSpec::Ttw { .. } | PotentialSpec::ThreeBodyTtw { .. } | PotentialSpec::Pw { .. } => {
            let spec = problem.effective_spec().ok_or(Error::OracleUnavailable { family })?;
            let k = spec.angular_k().expect("polar family").value().abs();
            let sectors = k.round();
            if (k - sectors).abs() > 1e-12 || sectors < 1.0 {
                return Err(Error::OracleUnavailable { family });
            }
            let sectors = sectors as usize;
            let per_sector = count.div_ceil(sectors);
            let sep = separation(&*validate(&spec)?, 0.0, 0.0)?;
            let mut out: Vec<f64> = lowest_of(sep, per_sector)?
                .iter()
                .flat_map(|l| std::iter::repeat_n(l.energy, sectors))
                .collect();
            out.truncate(count);
            Ok(out)
        }
        _ => Err(Error::OracleUnavailable { family }),
    }
}
