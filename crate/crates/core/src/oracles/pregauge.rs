//! Radial problem before the gauge transformation:
//! `−x^{1−d} (x^{d−1} R')' + [ℓ/x² + ω̂² x²] R = E R` with weight `x^{d−1}`.
//!
//! A finite-volume scheme keeps the operator symmetric in the weighted inner
//! product, so its spectrum can be compared directly with the gauged
//! half-line problem.

use serde::{Deserialize, Serialize};

use super::radial::DEFAULT_TARGET;
use super::sturm::{richardson, Tridiag};
use crate::error::{Error, Result};
use crate::reduction::centrifugal_coefficient;

const MAX_DOUBLINGS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PregaugeProblem {
    /// Dimension of the radial variable.
    pub d: u32,
    /// Angular eigenvalue `ℓ` (`L(L + d − 2)` for hyperspherical harmonics).
    pub ell: f64,
    /// Whether `R` stays finite and free at `x = 0` (the `L = 0` sector)
    /// instead of vanishing there.
    pub natural_origin: bool,
    pub omega: f64,
    pub cutoff: Option<f64>,
    pub target: f64,
}

impl PregaugeProblem {
    pub fn oscillator(d: u32, l: u32, omega: f64) -> Result<Self> {
        // admissibility of (d, L)
        centrifugal_coefficient::<f64>(d, l)?;
        Ok(Self {
            d,
            ell: (l as f64) * (l as f64 + d as f64 - 2.0),
            natural_origin: l == 0,
            omega,
            cutoff: None,
            target: DEFAULT_TARGET,
        })
    }

    fn check(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::NonPositiveMassOrFrequency {
                name: "omega",
                value: self.omega,
            });
        }
        if !self.ell.is_finite() {
            return Err(Error::NonFinite { name: "ell" });
        }
        if self.natural_origin && self.ell != 0.0 {
            return Err(Error::InvalidRequest {
                reason: "a free origin needs a vanishing angular eigenvalue".into(),
            });
        }
        Ok(())
    }

    fn discretize(&self, cutoff: f64, n: usize) -> Tridiag {
        let h = cutoff / n as f64;
        let d = self.d as i32;
        let w2 = self.omega * self.omega;
        let flux = |x: f64| x.powi(d - 1) / h;
        let first = if self.natural_origin { 0 } else { 1 };
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        for i in first..n {
            let x = i as f64 * h;
            let left = if i == 0 { 0.0 } else { x - 0.5 * h };
            let right = x + 0.5 * h;
            let volume = (right.powi(d) - left.powi(d)) / d as f64;
            let p_left = if i == 0 { 0.0 } else { flux(left) };
            let p_right = flux(right);
            let centrifugal = if i == 0 { 0.0 } else { self.ell / (x * x) };
            diag.push(p_left + p_right + volume * (centrifugal + w2 * x * x));
            weight.push(volume);
            if i + 1 < n {
                off.push(-p_right);
            }
        }
        Tridiag { diag, off, weight }
    }
}

/// Lowest `m` levels of the pre-gauge radial oscillator.
pub fn pregauge_spectrum(problem: &PregaugeProblem, m: usize) -> Result<Vec<f64>> {
    problem.check()?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let scale = 1.0 / problem.omega.sqrt();
    let cutoff = problem.cutoff.unwrap_or_else(|| {
        // levels stay below 4(m + ℓ) ω̂ + 2dω̂ well inside this wall
        let e = problem.omega * (4.0 * m as f64 + 2.0 * problem.ell.max(0.0).sqrt() + 2.0 * problem.d as f64);
        (e / (problem.omega * problem.omega) + 70.0 * scale * scale).sqrt()
    });
    let n0 = ((cutoff / scale) * 40.0).ceil() as usize + 8 * m;
    richardson(|n| problem.discretize(cutoff, n), m, n0, problem.target, MAX_DOUBLINGS).map(|r| r.values)
}
