//! Half-line problems `−u'' + [c/r² + V(r)] u = E u` with the Friedrichs
//! condition at `r = 0` and a Dirichlet wall at the cutoff.

use serde::{Deserialize, Serialize};

use super::ode::{integrate, Tolerance};
use super::sturm::{richardson, Extrapolated, Tridiag};
use crate::error::{Error, Result};

/// Default relative accuracy requested from the extrapolated solvers.
pub const DEFAULT_TARGET: f64 = 1e-10;

const COARSE_INTERVALS: usize = 1000;
const MAX_DOUBLINGS: usize = 7;
/// `r_min / ρ₀` at the left end of the mapped grid.
const INNER_RATIO: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialPotential {
    /// `ω̂² r²`
    Oscillator { omega: f64 },
    /// `−Z/r`
    Coulomb { charge: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadialProblem {
    pub potential: RadialPotential,
    /// Inverse-square coefficient; must satisfy `c ≥ −1/4`.
    pub c: f64,
    /// Dirichlet wall; chosen from the computed levels when absent.
    pub cutoff: Option<f64>,
    /// Relative accuracy target.
    pub target: f64,
}

impl RadialProblem {
    pub fn oscillator(omega: f64, c: f64) -> Self {
        Self {
            potential: RadialPotential::Oscillator { omega },
            c,
            cutoff: None,
            target: DEFAULT_TARGET,
        }
    }

    pub fn coulomb(charge: f64, c: f64) -> Self {
        Self {
            potential: RadialPotential::Coulomb { charge },
            c,
            cutoff: None,
            target: DEFAULT_TARGET,
        }
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(cutoff);
        self
    }

    fn check(&self) -> Result<()> {
        if !self.c.is_finite() {
            return Err(Error::NonFinite { name: "c" });
        }
        if self.c < -0.25 {
            return Err(Error::BoundViolation {
                name: "c",
                value: self.c,
                bound: -0.25,
            });
        }
        let (name, value) = match self.potential {
            RadialPotential::Oscillator { omega } => ("omega", omega),
            RadialPotential::Coulomb { charge } => ("charge", charge),
        };
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositiveMassOrFrequency { name, value });
        }
        if let Some(r) = self.cutoff {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidBox {
                    name: "cutoff",
                    value: r,
                });
            }
        }
        if !(self.target > 0.0) {
            return Err(Error::InvalidRequest {
                reason: format!("accuracy target {} must be positive", self.target),
            });
        }
        Ok(())
    }

    fn s(&self) -> f64 {
        (0.25 + self.c).max(0.0).sqrt()
    }

    fn omega_sq(&self) -> f64 {
        match self.potential {
            RadialPotential::Oscillator { omega } => omega * omega,
            RadialPotential::Coulomb { .. } => 0.0,
        }
    }

    fn charge(&self) -> f64 {
        match self.potential {
            RadialPotential::Coulomb { charge } => charge,
            RadialPotential::Oscillator { .. } => 0.0,
        }
    }

    /// `c/r² + V(r)`.
    pub fn q(&self, r: f64) -> f64 {
        self.c / (r * r) + self.omega_sq() * r * r - self.charge() / r
    }

    fn length_scale(&self) -> f64 {
        match self.potential {
            RadialPotential::Oscillator { omega } => 1.0 / omega.sqrt(),
            RadialPotential::Coulomb { charge } => 1.0 / charge,
        }
    }

    /// Largest classical turning point at energy `e`, if any.
    fn outer_turning_point(&self, e: f64) -> Option<f64> {
        match self.potential {
            RadialPotential::Oscillator { omega } => {
                let w2 = omega * omega;
                let disc = e * e - 4.0 * w2 * self.c;
                if e <= 0.0 || disc < 0.0 {
                    return None;
                }
                Some(((e + disc.sqrt()) / (2.0 * w2)).sqrt())
            }
            RadialPotential::Coulomb { charge } => {
                if e >= 0.0 {
                    return None;
                }
                let k2 = -e;
                let disc = charge * charge - 4.0 * k2 * self.c;
                if disc < 0.0 {
                    return None;
                }
                Some((charge + disc.sqrt()) / (2.0 * k2))
            }
        }
    }

    /// Wall position that leaves the level at `e` decayed by `e^{-35}`.
    fn required_cutoff(&self, e: f64) -> Option<f64> {
        match self.potential {
            RadialPotential::Oscillator { omega } => {
                let rt = self.outer_turning_point(e).unwrap_or(0.0);
                Some((rt * rt + 70.0 / omega).sqrt())
            }
            RadialPotential::Coulomb { .. } => {
                let rt = self.outer_turning_point(e)?;
                Some(rt + 40.0 / (-e).sqrt())
            }
        }
    }
}

fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn softplus(t: f64) -> f64 {
    if t > 30.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Grid of the mapped problem: `r = ρ₀ ln(1 + eᵗ)`, `u = (dr/dt)^{1/2} φ`,
/// giving `−φ'' + [r'² (c/r² + V) + (1 − σ²)/4] φ = E r'² φ` with
/// `σ = r'/ρ₀`. The left end carries the Robin condition of the regular
/// solution `u ≈ r^{s+1/2} (1 + b₁ r)`.
struct Mapped<'a> {
    problem: &'a RadialProblem,
    rho0: f64,
    t_min: f64,
    t_max: f64,
}

impl<'a> Mapped<'a> {
    fn new(problem: &'a RadialProblem, cutoff: f64) -> Self {
        let rho0 = cutoff / 40.0;
        let t_min = INNER_RATIO.exp_m1().ln();
        let t_max = (cutoff / rho0).exp_m1().ln();
        Self {
            problem,
            rho0,
            t_min,
            t_max,
        }
    }

    fn coefficients(&self, t: f64) -> (f64, f64) {
        let sigma = logistic(t);
        let r = self.rho0 * softplus(t);
        let dr = self.rho0 * sigma;
        let p = self.problem;
        let ratio = dr / r;
        let q = p.c * ratio * ratio + dr * dr * (p.omega_sq() * r * r - p.charge() / r) + 0.25 * (1.0 - sigma * sigma);
        (q, dr * dr)
    }

    fn robin(&self) -> f64 {
        let t = self.t_min;
        let sigma = logistic(t);
        let r = self.rho0 * softplus(t);
        let dr = self.rho0 * sigma;
        let lambda = 0.5 + self.problem.s();
        let b1 = -self.problem.charge() / (2.0 * lambda);
        -0.5 * (1.0 - sigma) + dr * (lambda / r + b1 / (1.0 + b1 * r))
    }

    fn discretize(&self, n: usize) -> Tridiag {
        let h = (self.t_max - self.t_min) / n as f64;
        let inv = 1.0 / (h * h);
        let kappa = self.robin();
        let mut diag = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        for i in 0..n {
            let (q, w) = self.coefficients(self.t_min + i as f64 * h);
            if i == 0 {
                diag.push((1.0 + h * kappa) * inv + 0.5 * q);
                weight.push(0.5 * w);
            } else {
                diag.push(2.0 * inv + q);
                weight.push(w);
            }
        }
        Tridiag {
            diag,
            off: vec![-inv; n - 1],
            weight,
        }
    }

    /// Initial interval count resolving the local wavelength at energy `e`.
    fn resolving_intervals(&self, e: f64) -> usize {
        let samples = 4000;
        let h = (self.t_max - self.t_min) / samples as f64;
        let kmax = (0..=samples)
            .map(|i| {
                let (q, w) = self.coefficients(self.t_min + i as f64 * h);
                (e * w - q).max(0.0).sqrt()
            })
            .fold(0.5, f64::max);
        let range = self.t_max - self.t_min;
        ((range * kmax / 0.3).ceil() as usize).max(400)
    }
}

fn solve_fd(problem: &RadialProblem, m: usize, cutoff: f64) -> Result<Extrapolated> {
    let mapped = Mapped::new(problem, cutoff);
    let coarse = mapped.discretize(COARSE_INTERVALS).lowest(m, None);
    let n0 = mapped.resolving_intervals(*coarse.last().expect("m ≥ 1"));
    richardson(|n| mapped.discretize(n), m, n0, problem.target, MAX_DOUBLINGS)
}

/// Finds a wall far enough out for the lowest `m` levels.
fn auto_cutoff(problem: &RadialProblem, m: usize) -> f64 {
    let mut cutoff = match problem.potential {
        RadialPotential::Oscillator { .. } => 10.0 * problem.length_scale(),
        RadialPotential::Coulomb { .. } => 40.0 * problem.length_scale(),
    };
    for _ in 0..40 {
        let mapped = Mapped::new(problem, cutoff);
        let top = *mapped
            .discretize(COARSE_INTERVALS)
            .lowest(m, None)
            .last()
            .expect("m ≥ 1");
        match problem.required_cutoff(top) {
            Some(req) if req <= cutoff => return cutoff,
            Some(req) => cutoff = req.max(1.2 * cutoff),
            None => cutoff *= 2.0,
        }
    }
    cutoff
}

/// Lowest `m` levels from the mapped finite-difference scheme with
/// Richardson extrapolation, plus their error estimates.
pub fn radial_spectrum_with_errors(problem: &RadialProblem, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    problem.check()?;
    if m == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut cutoff = problem.cutoff.unwrap_or_else(|| auto_cutoff(problem, m));
    loop {
        let res = solve_fd(problem, m, cutoff)?;
        if problem.cutoff.is_none() {
            let top = *res.values.last().expect("m ≥ 1");
            match problem.required_cutoff(top) {
                Some(req) if req > cutoff * 1.0001 => {
                    cutoff = req.max(1.2 * cutoff);
                    continue;
                }
                None => {
                    cutoff *= 2.0;
                    continue;
                }
                _ => {}
            }
        }
        return Ok((res.values, res.errors));
    }
}

/// Lowest `m` levels of a radial problem (finite-difference backend).
pub fn radial_spectrum(problem: &RadialProblem, m: usize) -> Result<Vec<f64>> {
    radial_spectrum_with_errors(problem, m).map(|(v, _)| v)
}

/// The cutoff the finite-difference backend settles on.
pub fn effective_cutoff(problem: &RadialProblem, m: usize) -> Result<f64> {
    problem.check()?;
    Ok(problem.cutoff.unwrap_or_else(|| auto_cutoff(problem, m)))
}

// ---------------------------------------------------------------------------
// shooting backend

const SHOOT_TOL: Tolerance = Tolerance { rel: 1e-12, abs: 1e-13 };

/// Prüfer angle `tan ϑ = √S u/u'`: `ϑ' = √S cos²ϑ + (E − Q)/√S sin²ϑ`.
pub(crate) fn prufer<'a>(q: &'a dyn Fn(f64) -> f64, e: f64, root_s: f64) -> impl Fn(f64, f64) -> f64 + 'a {
    move |x, th| {
        let (s, c) = th.sin_cos();
        root_s * c * c + (e - q(x)) / root_s * s * s
    }
}

/// Root of a monotone increasing `g` by the Illinois variant of regula
/// falsi, starting from `(lo, hi)` and expanding until bracketed.
pub(crate) fn bracketed_root<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    let mut step = (hi - lo).abs().max(1e-3);
    while glo > 0.0 {
        hi = lo;
        lo -= step;
        step *= 2.0;
        glo = g(lo);
    }
    let mut ghi = g(hi);
    let mut step = (hi - lo).abs().max(1e-3);
    while ghi < 0.0 {
        lo = hi;
        glo = ghi;
        hi += step;
        step *= 2.0;
        ghi = g(hi);
    }
    let mut side = 0i8;
    for _ in 0..300 {
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1e-300) {
            break;
        }
        let mut x = (lo * ghi - hi * glo) / (ghi - glo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx < 0.0 {
            lo = x;
            glo = gx;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            ghi = gx;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    0.5 * (lo + hi)
}

/// `(u/r^λ, r u'/r^λ)` at `r` from the Frobenius series of the regular
/// solution, `λ = s + 1/2`.
fn frobenius(problem: &RadialProblem, e: f64, r: f64) -> (f64, f64) {
    let lambda = 0.5 + problem.s();
    let (z, w2) = (problem.charge(), problem.omega_sq());
    let mut a = vec![1.0f64];
    let mut value = 1.0;
    let mut deriv = lambda;
    let mut power = 1.0;
    let mut prev_term = 1.0f64;
    for k in 1..400usize {
        let at = |i: isize| if i >= 0 { a[i as usize] } else { 0.0 };
        let ki = k as isize;
        let next = (-z * at(ki - 1) - e * at(ki - 2) + w2 * at(ki - 4)) / (k as f64 * (2.0 * lambda + k as f64 - 1.0));
        a.push(next);
        power *= r;
        let term = next * power;
        value += term;
        deriv += (lambda + k as f64) * term;
        if k > 8 && term.abs().max(prev_term.abs()) < 1e-18 * value.abs() {
            break;
        }
        prev_term = term;
    }
    (value, deriv)
}

/// Lowest `m` levels by shooting: Prüfer angles integrated from a
/// Frobenius start near the origin and from the wall, matched at the outer
/// turning point, with the level index read off the accumulated angle.
/// The cutoff must be given explicitly so that both backends solve the
/// same problem.
pub fn radial_spectrum_shooting(problem: &RadialProblem, m: usize, cutoff: f64) -> Result<Vec<f64>> {
    problem.check()?;
    let cutoff_problem = problem.with_cutoff(cutoff);
    cutoff_problem.check()?;
    let r_a = (1e-3 * problem.length_scale()).min(1e-3 * cutoff);
    let q = |r: f64| problem.q(r);
    let mismatch = |e: f64| -> f64 {
        let root_s = e.abs().max(1.0).sqrt();
        let (p, d) = frobenius(problem, e, r_a);
        let theta_a = (root_s * r_a * p).atan2(d);
        let x_m = problem
            .outer_turning_point(e)
            .filter(|&r| r > 10.0 * r_a && r < cutoff)
            .unwrap_or(0.5 * cutoff);
        let f = prufer(&q, e, root_s);
        let left = integrate(&f, r_a, theta_a, x_m, SHOOT_TOL, 1e-4);
        let right = integrate(&f, cutoff, std::f64::consts::PI, x_m, SHOOT_TOL, 1e-4);
        left - right
    };
    let mut levels = Vec::with_capacity(m);
    let mut lo = -1.0;
    for n in 0..m {
        let target = n as f64 * std::f64::consts::PI;
        let start = levels.last().copied().unwrap_or(lo);
        let e = bracketed_root(|e| mismatch(e) - target, start, start + 1.0);
        lo = e;
        levels.push(e);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid() {
        assert!(matches!(
            radial_spectrum(&RadialProblem::oscillator(1.0, -0.3), 1),
            Err(Error::BoundViolation { .. })
        ));
        assert!(radial_spectrum(&RadialProblem::coulomb(0.0, 0.0), 1).is_err());
    }

    #[test]
    fn frobenius_series_solves_the_equation() {
        // residual of the truncated series in the differential equation
        let p = RadialProblem::coulomb(1.0, 2.0);
        let e = -0.1;
        let lambda = 0.5 + p.s();
        let u = |r: f64| frobenius(&p, e, r).0 * r.powf(lambda);
        let r = 0.3;
        let h = 1e-4;
        let second = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
        let residual = -second + (p.q(r) - e) * u(r);
        assert!(residual.abs() < 1e-6 * u(r).abs() / (r * r));
    }

    #[test]
    fn oscillator_closed_form() {
        // c = L(L+1) in d = 3: E = 4n + 2L + 3
        for (c, l) in [(0.0, 0.0), (2.0, 1.0), (-0.25, -0.5)] {
            let p = RadialProblem::oscillator(1.0, c);
            let (fd, err) = radial_spectrum_with_errors(&p, 5).unwrap();
            for (n, v) in fd.iter().enumerate() {
                let exact = 4.0 * n as f64 + 2.0 * l + 3.0;
                assert!(
                    (v - exact).abs() < 1e-9 * exact,
                    "c={c} n={n}: {v} vs {exact}, est {}",
                    err[n]
                );
            }
        }
    }

    #[test]
    fn coulomb_closed_form() {
        // c = L(L+1): E = −Z²/(4(n + L + 1)²)
        for (c, l) in [(0.0, 0.0), (2.0, 1.0)] {
            let p = RadialProblem::coulomb(1.0, c);
            let fd = radial_spectrum(&p, 4).unwrap();
            for (n, v) in fd.iter().enumerate() {
                let exact = -0.25 / (n as f64 + l + 1.0).powi(2);
                assert!((v - exact).abs() < 1e-9 * exact.abs(), "c={c} n={n}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn shooting_matches_closed_form() {
        // c = 3/4 is L = 1/2 in d = 3
        let p = RadialProblem::oscillator(1.0, 0.75);
        let sh = radial_spectrum_shooting(&p, 4, 12.0).unwrap();
        for (n, v) in sh.iter().enumerate() {
            let exact = 4.0 * n as f64 + 4.0;
            assert!((v - exact).abs() < 1e-9 * exact, "n={n}: {v}");
        }
        let p = RadialProblem::coulomb(1.0, 0.0);
        let sh = radial_spectrum_shooting(&p, 3, 150.0).unwrap();
        for (n, v) in sh.iter().enumerate() {
            let exact = -0.25 / ((n + 1) as f64).powi(2);
            assert!((v - exact).abs() < 1e-9 * exact.abs(), "n={n}: {v}");
        }
    }
}
