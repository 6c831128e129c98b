use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::jacobi::{equal_mass_line_frame, jacobi_polar, ordered_line_config, JacobiFrame};
use super::problem::k_three;
use crate::error::{Error, Result};
use crate::model::{eval_potential, Point, PotentialSpec, ThreeBodyConfig};
use crate::sampling::QuasiRandom;
use crate::scalar::Scalar;

/// Relative deviation accepted when verifying a fitted image.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Half-width of the excluded neighbourhood around singular rays.
pub const SINGULAR_EXCLUSION: f64 = 1e-3;

const FIT_SEED: u64 = 0x5eed_0003;
const FIT_CANDIDATES: usize = 12;
const VERIFY_SEED: u64 = 0x5eed_1000;
const VERIFY_SAMPLES: usize = 1000;

/// Parameters `(ω', α, β)` of the three-body TTW potential at `k = 3` that
/// reproduce a Calogero or Wolfes potential on the ordered line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct TtwImage<T: Scalar = f64> {
    pub omega: T,
    pub alpha: T,
    pub beta: T,
    /// Largest relative deviation seen while verifying.
    pub deviation: f64,
    pub samples: usize,
}

impl<T: Scalar> TtwImage<T> {
    pub fn to_spec(&self) -> PotentialSpec<T> {
        PotentialSpec::ThreeBodyTtw {
            omega: self.omega,
            k: k_three(),
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}

/// Ordered collinear configurations drawn from a fixed-seed quasi-random
/// sequence over `(r12, r23) ∈ [0.2, 3]²`, keeping only points whose Jacobi
/// polar angle lies at least [`SINGULAR_EXCLUSION`] away from every ray
/// `θ = jπ/6`.
pub fn ordered_line_samples(frame: &JacobiFrame<f64>, count: usize, seed: u64) -> Result<Vec<ThreeBodyConfig<f64>>> {
    let mut seq = QuasiRandom::new(2, seed);
    let step = std::f64::consts::PI / 6.0;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = seq.next_in_box(&[0.2, 0.2], &[3.0, 3.0]);
        let cfg = ordered_line_config(p[0], p[1])?;
        let (_, theta) = jacobi_polar(&cfg, frame)?;
        let offset = theta / step;
        if (offset - offset.round()).abs() * step < SINGULAR_EXCLUSION {
            continue;
        }
        out.push(cfg);
    }
    Ok(out)
}

fn wolfes_parameters<T: Scalar>(spec: &PotentialSpec<T>) -> Result<PotentialSpec<f64>> {
    match spec {
        PotentialSpec::Calogero { omega, pair } => Ok(PotentialSpec::Wolfes {
            omega: omega.as_f64(),
            pair: pair.as_f64(),
            triple: 0.0,
        }),
        PotentialSpec::Wolfes { omega, pair, triple } => Ok(PotentialSpec::Wolfes {
            omega: omega.as_f64(),
            pair: pair.as_f64(),
            triple: triple.as_f64(),
        }),
        other => Err(Error::InvalidRequest {
            reason: format!("expected a calogero or wolfes potential, got {}", other.family()),
        }),
    }
}

/// Basis functions of the three-body TTW potential at `k = 3`, linear in
/// `(ω'², α, β)`.
fn ttw3_basis(rho: f64, theta: f64) -> [f64; 3] {
    let r2 = rho * rho;
    let c = (3.0 * theta).cos();
    let s = (3.0 * theta).sin();
    [r2, 9.0 / (r2 * c * c), 9.0 / (r2 * s * s)]
}

/// Fits the three-body TTW image of a Calogero or Wolfes potential in the
/// given `d = 1` frame: an exact solve at three sample points, then a check
/// at 1000 fresh ordered configurations. Fails with
/// [`Error::FitFailure`] when the check exceeds [`IDENTITY_TOL`], which is
/// the case for frames without equal masses.
pub fn wolfes_to_ttw_in_frame<T: Scalar>(spec: &PotentialSpec<T>, frame: &JacobiFrame<T>) -> Result<TtwImage<T>> {
    let wolfes = wolfes_parameters(spec)?;
    let frame64 = JacobiFrame::<f64> {
        masses: frame.masses.map(Scalar::as_f64),
        total_mass: frame.total_mass.as_f64(),
        cms_row: frame.cms_row.map(Scalar::as_f64),
        jacobi_rows: frame.jacobi_rows.map(|r| r.map(Scalar::as_f64)),
        d: frame.d,
    };
    if frame64.d != 1 {
        return Err(Error::PotentialNotJacobiRadial { family: spec.family() });
    }

    // the fit uses the best-conditioned triple among a few candidates
    let mut rows = Vec::with_capacity(FIT_CANDIDATES);
    for cfg in ordered_line_samples(&frame64, FIT_CANDIDATES, FIT_SEED)? {
        let (rho, theta) = jacobi_polar(&cfg, &frame64)?;
        let basis = ttw3_basis(rho, theta);
        let value = eval_potential(&wolfes, &Point::Triple(cfg))?;
        let norm = basis.iter().map(|b| b * b).sum::<f64>().sqrt();
        rows.push((basis.map(|b| b / norm), value / norm));
    }
    let mut best = (0.0, [0, 1, 2]);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let m = Matrix3::from_rows(&[rows[i].0, rows[j].0, rows[k].0].map(|r| r.into()));
                let det = m.determinant().abs();
                if det > best.0 {
                    best = (det, [i, j, k]);
                }
            }
        }
    }
    let picked = best.1.map(|i| rows[i]);
    let m = Matrix3::from_rows(&picked.map(|(b, _)| b.into()));
    let rhs = Vector3::from(picked.map(|(_, v)| v));
    let coeffs = m.lu().solve(&rhs).ok_or(Error::FitFailure {
        deviation: f64::INFINITY,
    })?;
    let (omega_sq, alpha, beta) = (coeffs[0], coeffs[1], coeffs[2]);

    let mut deviation = 0.0f64;
    for cfg in ordered_line_samples(&frame64, VERIFY_SAMPLES, VERIFY_SEED)? {
        let (rho, theta) = jacobi_polar(&cfg, &frame64)?;
        let basis = ttw3_basis(rho, theta);
        let image = omega_sq * basis[0] + alpha * basis[1] + beta * basis[2];
        let direct = eval_potential(&wolfes, &Point::Triple(cfg))?;
        let rel = (image - direct).abs() / direct.abs().max(f64::MIN_POSITIVE);
        deviation = deviation.max(rel);
    }
    if !(deviation <= IDENTITY_TOL) || omega_sq < 0.0 {
        return Err(Error::FitFailure { deviation });
    }
    Ok(TtwImage {
        omega: T::lit(omega_sq.sqrt()),
        alpha: T::lit(alpha),
        beta: T::lit(beta),
        deviation,
        samples: VERIFY_SAMPLES,
    })
}

/// [`wolfes_to_ttw_in_frame`] for a Wolfes potential `(ω, A, B)` in the
/// equal-mass line frame `m₁ = m₂ = m₃ = 2`.
pub fn wolfes_to_ttw<T: Scalar>(omega: T, pair: T, triple: T) -> Result<TtwImage<T>> {
    let spec = PotentialSpec::Wolfes { omega, pair, triple };
    wolfes_to_ttw_in_frame(&spec, &equal_mass_line_frame())
}
