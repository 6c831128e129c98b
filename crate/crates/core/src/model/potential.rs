use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::rational::RationalOrReal;
use super::three_body::ThreeBodyConfig;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Points closer than this (in the coordinate or the angle) to a singular
/// line are rejected.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Callback evaluating a custom planar potential `W(x, y)`.
pub type PotentialFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// Extension point for potentials outside the built-in catalog.
#[derive(Clone, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", deny_unknown_fields)]
pub struct CustomPotential<T: Scalar = f64> {
    pub name: String,
    /// Marks a potential that depends on more than the two radii (or Jacobi
    /// distances); such potentials cannot be reduced.
    #[serde(default)]
    pub angular: bool,
    /// Source text a frontend compiled the callback from, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(skip)]
    pub func: Option<PotentialFn<T>>,
}

impl<T: Scalar> CustomPotential<T> {
    pub fn new(name: impl Into<String>, func: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            angular: false,
            expression: None,
            func: Some(Arc::new(func)),
        }
    }

    pub fn with_angular(mut self, angular: bool) -> Self {
        self.angular = angular;
        self
    }
}

impl<T: Scalar> fmt::Debug for CustomPotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("name", &self.name)
            .field("angular", &self.angular)
            .field("expression", &self.expression)
            .field("func", &self.func.as_ref().map(|_| "<callback>"))
            .finish()
    }
}

impl<T: Scalar> PartialEq for CustomPotential<T> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.angular == other.angular && self.expression == other.expression
    }
}

/// One potential family with its parameters. Units are `ħ = 2m = 1`, so the
/// kinetic operator is `−Δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields, bound = "T: Scalar")]
pub enum PotentialSpec<T: Scalar = f64> {
    /// `−1/x − 1/y`: two Coulomb centres, one per radius.
    #[serde(rename = "hydrogen_pair")]
    HydrogenPair,

    /// `a ω² x² + b ω² y² + A/x² + B/y²`.
    #[serde(rename = "caged_oscillator")]
    CagedOscillator {
        a: T,
        b: T,
        omega: T,
        #[serde(rename = "A")]
        coupling_x: T,
        #[serde(rename = "B")]
        coupling_y: T,
    },

    /// `ω² ρ² + [α / cos²(kθ) + β / sin²(kθ)] / ρ²`.
    #[serde(rename = "ttw")]
    Ttw {
        omega: T,
        k: RationalOrReal<T>,
        alpha: T,
        beta: T,
    },

    /// Three-body form in Jacobi polar coordinates, with the angular
    /// strengths weighted by `k²`: `ω² ρ² + k² [α / cos²(kθ) + β / sin²(kθ)] / ρ²`.
    #[serde(rename = "three_body_ttw")]
    ThreeBodyTtw {
        omega: T,
        k: RationalOrReal<T>,
        alpha: T,
        beta: T,
    },

    /// `−a/ρ + [μ / cos²(kθ/2) + ν / sin²(kθ/2)] / ρ²`.
    #[serde(rename = "pw")]
    Pw { a: T, k: RationalOrReal<T>, mu: T, nu: T },

    /// `ω² (r12² + r13² + r23²) + A (1/r12² + 1/r13² + 1/r23²)`.
    #[serde(rename = "calogero")]
    Calogero {
        omega: T,
        #[serde(rename = "A")]
        pair: T,
    },

    /// Calogero plus the three-body term `B Σ_k 1/(r_i + r_j − 2 r_k)²`.
    #[serde(rename = "wolfes")]
    Wolfes {
        omega: T,
        #[serde(rename = "A")]
        pair: T,
        #[serde(rename = "B")]
        triple: T,
    },

    #[serde(rename = "custom2d")]
    Custom2D(CustomPotential<T>),
}

/// Coordinates in a family's natural chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point<T: Scalar = f64> {
    /// Cartesian point of the plane; for radial families, the two radii.
    Planar {
        x: T,
        y: T,
    },
    Polar {
        rho: T,
        theta: T,
    },
    /// Three particles, described by their pair distances.
    Triple(ThreeBodyConfig<T>),
}

impl<T: Scalar> Point<T> {
    pub fn planar(x: T, y: T) -> Self {
        Self::Planar { x, y }
    }

    pub fn polar(rho: T, theta: T) -> Self {
        Self::Polar { rho, theta }
    }

    pub fn chart_name(&self) -> &'static str {
        match self {
            Self::Planar { .. } => "planar",
            Self::Polar { .. } => "polar",
            Self::Triple(_) => "three-body",
        }
    }

    pub fn to_cartesian(&self) -> Option<(T, T)> {
        match *self {
            Self::Planar { x, y } => Some((x, y)),
            Self::Polar { rho, theta } => Some((rho * theta.cos(), rho * theta.sin())),
            Self::Triple(_) => None,
        }
    }

    pub fn to_polar(&self) -> Option<(T, T)> {
        match *self {
            Self::Planar { x, y } => Some((x.hypot(y), y.atan2(x))),
            Self::Polar { rho, theta } => Some((rho, theta)),
            Self::Triple(_) => None,
        }
    }
}

/// Which chart a family is natively written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Radii,
    Polar,
    ThreeBody,
}

impl<T: Scalar> PotentialSpec<T> {
    pub fn family(&self) -> &'static str {
        match self {
            Self::HydrogenPair => "hydrogen_pair",
            Self::CagedOscillator { .. } => "caged_oscillator",
            Self::Ttw { .. } => "ttw",
            Self::ThreeBodyTtw { .. } => "three_body_ttw",
            Self::Pw { .. } => "pw",
            Self::Calogero { .. } => "calogero",
            Self::Wolfes { .. } => "wolfes",
            Self::Custom2D(_) => "custom2d",
        }
    }

    pub fn chart(&self) -> Chart {
        match self {
            Self::HydrogenPair | Self::CagedOscillator { .. } | Self::Custom2D(_) => Chart::Radii,
            Self::Ttw { .. } | Self::ThreeBodyTtw { .. } | Self::Pw { .. } => Chart::Polar,
            Self::Calogero { .. } | Self::Wolfes { .. } => Chart::ThreeBody,
        }
    }

    /// The `k` entering the angular arguments (`k/2` for PW).
    pub fn angular_k(&self) -> Option<RationalOrReal<T>> {
        match self {
            Self::Ttw { k, .. } | Self::ThreeBodyTtw { k, .. } => Some(*k),
            Self::Pw { k, .. } => Some(k.halved()),
            _ => None,
        }
    }

    /// Polar angles in the open quadrant `(0, π/2)` along which the
    /// potential is singular.
    pub fn singular_angles(&self) -> Vec<T> {
        let Some(k) = self.angular_k() else {
            return Vec::new();
        };
        let kv = num_traits::Float::abs(k.value());
        let step = T::FRAC_PI_2() / kv;
        let mut out = Vec::new();
        let mut j = 1usize;
        loop {
            let angle = step * T::lit(j as f64);
            if angle >= T::FRAC_PI_2() - T::lit(SINGULAR_TOL) {
                break;
            }
            out.push(angle);
            j += 1;
        }
        out
    }
}

fn radii<T: Scalar>(point: &Point<T>, family: &'static str) -> Result<(T, T)> {
    let (x, y) = point.to_cartesian().ok_or(Error::ChartMismatch { family })?;
    let tol = T::lit(SINGULAR_TOL);
    if !(x > tol) {
        return Err(Error::SingularPoint { line: "x = 0".into() });
    }
    if !(y > tol) {
        return Err(Error::SingularPoint { line: "y = 0".into() });
    }
    Ok((x, y))
}

/// Returns `(ρ, sin²(kθ), cos²(kθ))` after rejecting points on a singular ray.
fn polar_angular<T: Scalar>(point: &Point<T>, k: T, family: &'static str) -> Result<(T, T, T)> {
    let (rho, theta) = point.to_polar().ok_or(Error::ChartMismatch { family })?;
    let tol = T::lit(SINGULAR_TOL);
    if !(rho > tol) {
        return Err(Error::SingularPoint { line: "rho = 0".into() });
    }
    // singular rays sit at θ = jπ/(2k); even j zero the sine, odd j the cosine
    let kabs = num_traits::Float::abs(k);
    let scaled = theta * kabs / T::FRAC_PI_2();
    let nearest = scaled.round();
    if num_traits::Float::abs(scaled - nearest) * T::FRAC_PI_2() / kabs < tol {
        let j = nearest.as_f64() as i64;
        let line = if j % 2 == 0 {
            "sin(k theta) = 0"
        } else {
            "cos(k theta) = 0"
        };
        return Err(Error::SingularPoint { line: line.into() });
    }
    let s = (k * theta).sin();
    let c = (k * theta).cos();
    Ok((rho, s * s, c * c))
}

fn pair_terms<T: Scalar>(cfg: &ThreeBodyConfig<T>) -> Result<(T, T)> {
    let tol = T::lit(SINGULAR_TOL);
    let (r12, r13, r23) = cfg.as_tuple();
    for (name, r) in [("r12 = 0", r12), ("r13 = 0", r13), ("r23 = 0", r23)] {
        if !(r > tol) {
            return Err(Error::SingularPoint { line: name.into() });
        }
    }
    let squares = r12 * r12 + r13 * r13 + r23 * r23;
    let inverse = T::one() / (r12 * r12) + T::one() / (r13 * r13) + T::one() / (r23 * r23);
    Ok((squares, inverse))
}

/// `Σ_k 1/(r_i + r_j − 2 r_k)²` through pair distances. With `a = r_ik`,
/// `b = r_jk`, `c = r_ij`, the squared length is `2a² + 2b² − c²`, evaluated
/// as `(a − b)² + (a + b − c)(a + b + c)`; both terms are nonnegative for a
/// triangle, so the collinear case does not cancel.
fn three_body_term<T: Scalar>(cfg: &ThreeBodyConfig<T>) -> Result<T> {
    let (r12, r13, r23) = cfg.as_tuple();
    let tol = T::lit(SINGULAR_TOL);
    let median_sq = |a: T, b: T, c: T| (a - b) * (a - b) + (a + b - c) * (a + b + c);
    let medians = [
        ("particle 3 at the midpoint of 1 and 2", median_sq(r13, r23, r12)),
        ("particle 2 at the midpoint of 1 and 3", median_sq(r12, r23, r13)),
        ("particle 1 at the midpoint of 2 and 3", median_sq(r12, r13, r23)),
    ];
    let mut sum = T::zero();
    for (line, sq) in medians {
        if !(sq > tol * tol) {
            return Err(Error::SingularPoint { line: line.into() });
        }
        sum = sum + T::one() / sq;
    }
    Ok(sum)
}

/// Evaluates a potential at a point of its natural chart.
///
/// Radial families (hydrogen pair, caged oscillator, custom) read a planar
/// point as the two radii; polar families accept planar or polar points;
/// Calogero and Wolfes need a three-body configuration.
pub fn eval_potential<T: Scalar>(spec: &PotentialSpec<T>, point: &Point<T>) -> Result<T> {
    let family = spec.family();
    match spec {
        PotentialSpec::HydrogenPair => {
            let (x, y) = radii(point, family)?;
            Ok(-T::one() / x - T::one() / y)
        }
        PotentialSpec::CagedOscillator {
            a,
            b,
            omega,
            coupling_x,
            coupling_y,
        } => {
            let (x, y) = radii(point, family)?;
            let w2 = *omega * *omega;
            Ok(*a * w2 * x * x + *b * w2 * y * y + *coupling_x / (x * x) + *coupling_y / (y * y))
        }
        PotentialSpec::Ttw { omega, k, alpha, beta } => {
            let (rho, s2, c2) = polar_angular(point, k.value(), family)?;
            let r2 = rho * rho;
            Ok(*omega * *omega * r2 + (*alpha / c2 + *beta / s2) / r2)
        }
        PotentialSpec::ThreeBodyTtw { omega, k, alpha, beta } => {
            let kv = k.value();
            let (rho, s2, c2) = polar_angular(point, kv, family)?;
            let r2 = rho * rho;
            Ok(*omega * *omega * r2 + kv * kv * (*alpha / c2 + *beta / s2) / r2)
        }
        PotentialSpec::Pw { a, k, mu, nu } => {
            let half = k.value() / T::lit(2.0);
            let (rho, s2, c2) = polar_angular(point, half, family)?;
            Ok(-*a / rho + (*mu / c2 + *nu / s2) / (rho * rho))
        }
        PotentialSpec::Calogero { omega, pair } => {
            let Point::Triple(cfg) = point else {
                return Err(Error::ChartMismatch { family });
            };
            let (squares, inverse) = pair_terms(cfg)?;
            Ok(*omega * *omega * squares + *pair * inverse)
        }
        PotentialSpec::Wolfes { omega, pair, triple } => {
            let Point::Triple(cfg) = point else {
                return Err(Error::ChartMismatch { family });
            };
            let (squares, inverse) = pair_terms(cfg)?;
            let calogero = *omega * *omega * squares + *pair * inverse;
            if *triple == T::zero() {
                return Ok(calogero);
            }
            Ok(calogero + *triple * three_body_term(cfg)?)
        }
        PotentialSpec::Custom2D(custom) => {
            let (x, y) = point.to_cartesian().ok_or(Error::ChartMismatch { family })?;
            let f = custom.func.as_ref().ok_or_else(|| Error::MissingCallback {
                name: custom.name.clone(),
            })?;
            Ok(f(x, y))
        }
    }
}
