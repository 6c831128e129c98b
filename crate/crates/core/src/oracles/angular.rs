//! Pöschl–Teller angular problem
//! `−f'' + [A/cos²(kφ) + B/sin²(kφ)] f = Λ f` on `φ ∈ (0, π/(2k))`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::ode::{integrate, Tolerance};
use super::radial::{bracketed_root, prufer, DEFAULT_TARGET};
use super::sturm::{richardson, Tridiag};
use crate::error::{Error, Result};

const HALF_RANGE: f64 = 18.5;
const COARSE_INTERVALS: usize = 2000;
const MAX_DOUBLINGS: usize = 7;

/// How the family parameters enter the angular strengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// `A = α`, `B = β`.
    Plain,
    /// `A = k² α`, `B = k² β`.
    KSquared,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularProblem {
    pub k: f64,
    /// Strength of `1/cos²(kφ)`.
    pub a: f64,
    /// Strength of `1/sin²(kφ)`.
    pub b: f64,
    pub target: f64,
}

impl AngularProblem {
    pub fn new(k: f64, alpha: f64, beta: f64, weighting: Weighting) -> Self {
        let w = match weighting {
            Weighting::Plain => 1.0,
            Weighting::KSquared => k * k,
        };
        Self {
            k: k.abs(),
            a: w * alpha,
            b: w * beta,
            target: DEFAULT_TARGET,
        }
    }

    fn check(&self) -> Result<()> {
        if self.k == 0.0 {
            return Err(Error::ZeroK);
        }
        for (name, v) in [("k", self.k), ("A", self.a), ("B", self.b)] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name });
            }
        }
        let bound = -0.25 * self.k * self.k;
        for (name, v) in [("A", self.a), ("B", self.b)] {
            if v < bound {
                return Err(Error::BoundViolation { name, value: v, bound });
            }
        }
        Ok(())
    }

    /// Exponents of the regular solutions, `f ≈ φ^{λ_B}` at the left end
    /// and `f ≈ (π/(2k) − φ)^{λ_A}` at the right end.
    fn exponents(&self) -> (f64, f64) {
        let k2 = self.k * self.k;
        let la = 0.5 + (0.25 + self.a / k2).max(0.0).sqrt();
        let lb = 0.5 + (0.25 + self.b / k2).max(0.0).sqrt();
        (la, lb)
    }

    pub fn width(&self) -> f64 {
        FRAC_PI_2 / self.k
    }
}

fn logistic(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

/// Mapping `kφ = (π/2) σ(u)` with `f = (dφ/du)^{1/2} ψ`; the Schwarzian
/// term of the logistic map is the constant `1/4`.
fn coefficients(p: &AngularProblem, u: f64) -> (f64, f64) {
    let s = logistic(u);
    let sm = logistic(-u);
    let dphi = FRAC_PI_2 / p.k * s * sm;
    let sin_k = (FRAC_PI_2 * s).sin();
    let cos_k = (FRAC_PI_2 * sm).sin();
    let q = 0.25 + dphi * dphi * (p.a / (cos_k * cos_k) + p.b / (sin_k * sin_k));
    (q, dphi * dphi)
}

fn discretize(p: &AngularProblem, n: usize) -> Tridiag {
    let (la, lb) = p.exponents();
    let u0 = -HALF_RANGE;
    let h = 2.0 * HALF_RANGE / n as f64;
    let inv = 1.0 / (h * h);
    let s_left = logistic(u0);
    let s_right = logistic(HALF_RANGE);
    let kappa_left = -0.5 * (1.0 - 2.0 * s_left) + lb * (1.0 - s_left);
    let kappa_right = -0.5 * (1.0 - 2.0 * s_right) - la * s_right;
    let mut diag = Vec::with_capacity(n + 1);
    let mut weight = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let (q, w) = coefficients(p, u0 + i as f64 * h);
        if i == 0 {
            diag.push((1.0 + h * kappa_left) * inv + 0.5 * q);
            weight.push(0.5 * w);
        } else if i == n {
            diag.push((1.0 - h * kappa_right) * inv + 0.5 * q);
            weight.push(0.5 * w);
        } else {
            diag.push(2.0 * inv + q);
            weight.push(w);
        }
    }
    Tridiag {
        diag,
        off: vec![-inv; n],
        weight,
    }
}

fn resolving_intervals(p: &AngularProblem, e: f64) -> usize {
    let samples = 4000;
    let h = 2.0 * HALF_RANGE / samples as f64;
    let kmax = (0..=samples)
        .map(|i| {
            let (q, w) = coefficients(p, -HALF_RANGE + i as f64 * h);
            (e * w - q).max(0.0).sqrt()
        })
        .fold(0.5, f64::max);
    ((2.0 * HALF_RANGE * kmax / 0.3).ceil() as usize).max(400)
}

/// Lowest `m` eigenvalues of the angular problem from the mapped
/// finite-difference scheme with Richardson extrapolation.
pub fn angular_levels(p: &AngularProblem, m: usize) -> Result<Vec<f64>> {
    p.check()?;
    if m == 0 {
        return Ok(Vec::new());
    }
    let coarse = discretize(p, COARSE_INTERVALS).lowest(m, None);
    let n0 = resolving_intervals(p, *coarse.last().expect("m ≥ 1"));
    richardson(|n| discretize(p, n), m, n0, p.target, MAX_DOUBLINGS).map(|r| r.values)
}

/// Lowest `m` angular eigenvalues for family parameters `(k, α, β)`.
pub fn angular_pt_levels(k: f64, alpha: f64, beta: f64, weighting: Weighting, m: usize) -> Result<Vec<f64>> {
    angular_levels(&AngularProblem::new(k, alpha, beta, weighting), m)
}

const SHOOT_TOL: Tolerance = Tolerance { rel: 1e-12, abs: 1e-13 };

/// Prüfer angle at distance `x` from a wall with exponent `lambda`, using
/// `f ≈ x^λ (1 + b₂ x²)`.
fn wall_angle(lambda: f64, b2: f64, x: f64, root_s: f64) -> f64 {
    let p = 1.0 + b2 * x * x;
    let d = lambda * p + 2.0 * b2 * x * x;
    (root_s * x * p).atan2(d)
}

/// Lowest `m` eigenvalues by shooting from both walls; the right half is
/// integrated in the mirrored variable `π/(2k) − φ`.
pub fn angular_levels_shooting(p: &AngularProblem, m: usize) -> Result<Vec<f64>> {
    p.check()?;
    let (la, lb) = p.exponents();
    let width = p.width();
    let k = p.k;
    let q_left = move |x: f64| {
        let (s, c) = (k * x).sin_cos();
        p.a / (c * c) + p.b / (s * s)
    };
    let q_right = move |x: f64| {
        let (s, c) = (k * x).sin_cos();
        p.b / (c * c) + p.a / (s * s)
    };
    // matching point at the potential minimum
    let samples = 400;
    let x_m = (1..samples)
        .map(|i| width * i as f64 / samples as f64)
        .min_by(|x, y| q_left(*x).total_cmp(&q_left(*y)))
        .expect("nonempty");
    let x_a = 1e-6 * width;
    let mismatch = |e: f64| -> f64 {
        let root_s = e.abs().max(1.0).sqrt();
        let b2_left = (p.a + p.b / 3.0 - e) / (2.0 * (2.0 * lb + 1.0));
        let b2_right = (p.a / 3.0 + p.b - e) / (2.0 * (2.0 * la + 1.0));
        let left = integrate(
            prufer(&q_left, e, root_s),
            x_a,
            wall_angle(lb, b2_left, x_a, root_s),
            x_m,
            SHOOT_TOL,
            1e-4,
        );
        let right = integrate(
            prufer(&q_right, e, root_s),
            x_a,
            wall_angle(la, b2_right, x_a, root_s),
            width - x_m,
            SHOOT_TOL,
            1e-4,
        );
        left + right - PI
    };
    let mut levels: Vec<f64> = Vec::with_capacity(m);
    for n in 0..m {
        let start = levels.last().copied().unwrap_or(0.0);
        let e = bracketed_root(|e| mismatch(e) - n as f64 * PI, start, start + k * k);
        levels.push(e);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_wedge() {
        // A = B = 0 gives Dirichlet walls at 0 and π/(2k): Λ = (2k(j+1))²
        let p = AngularProblem::new(2.0, 0.0, 0.0, Weighting::Plain);
        let fd = angular_levels(&p, 3).unwrap();
        let sh = angular_levels_shooting(&p, 3).unwrap();
        for j in 0..3 {
            let exact = (4.0 * (j + 1) as f64).powi(2);
            assert!((fd[j] - exact).abs() < 1e-8 * exact, "{} {exact}", fd[j]);
            assert!((sh[j] - exact).abs() < 1e-9 * exact, "{} {exact}", sh[j]);
        }
    }

    #[test]
    fn bound_enforced() {
        let p = AngularProblem::new(1.0, -0.3, 0.0, Weighting::Plain);
        assert!(matches!(angular_levels(&p, 1), Err(Error::BoundViolation { .. })));
    }
}
