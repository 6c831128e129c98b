use std::collections::BTreeMap;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{eval_potential, Chart, Point, PotentialSpec, RationalOrReal, ThreeBodyConfig};
use crate::reduction::{
    equal_mass_line_frame, jacobi_polar, ordered_line_samples, JacobiFrame, IDENTITY_TOL, SINGULAR_EXCLUSION,
};
use crate::sampling::QuasiRandom;

/// Sample count used by the built-in identity checks.
pub const DEFAULT_SAMPLES: usize = 1000;

const SAMPLE_SEED: u64 = 0x1d_0001;
const FIT_SEED: u64 = 0x1d_0002;

/// Map from points of one potential's chart to points of another's.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bridge {
    /// Both potentials share a chart.
    Identity,
    /// `(x, y) ↦ (ρ, θ)`.
    CartesianToPolar,
    /// `(ρ, θ) ↦ (x, y)`.
    PolarToCartesian,
    /// Ordered collinear three-body configuration to Jacobi polar
    /// coordinates in the given frame.
    OrderedLineToJacobiPolar { frame: JacobiFrame },
    /// Jacobi polar coordinates back to a collinear configuration.
    JacobiPolarToOrderedLine { frame: JacobiFrame },
}

impl Bridge {
    pub fn inverse(&self) -> Bridge {
        match self {
            Self::Identity => Self::Identity,
            Self::CartesianToPolar => Self::PolarToCartesian,
            Self::PolarToCartesian => Self::CartesianToPolar,
            Self::OrderedLineToJacobiPolar { frame } => Self::JacobiPolarToOrderedLine { frame: frame.clone() },
            Self::JacobiPolarToOrderedLine { frame } => Self::OrderedLineToJacobiPolar { frame: frame.clone() },
        }
    }

    /// Charts `(source, target)` the bridge connects, or `None` for the
    /// identity.
    fn charts(&self) -> Option<(Chart, Chart)> {
        match self {
            Self::Identity => None,
            Self::CartesianToPolar => Some((Chart::Radii, Chart::Polar)),
            Self::PolarToCartesian => Some((Chart::Polar, Chart::Radii)),
            Self::OrderedLineToJacobiPolar { .. } => Some((Chart::ThreeBody, Chart::Polar)),
            Self::JacobiPolarToOrderedLine { .. } => Some((Chart::Polar, Chart::ThreeBody)),
        }
    }

    pub fn apply(&self, point: &Point) -> Result<Point> {
        match (self, point) {
            (Self::Identity, p) => Ok(*p),
            (Self::CartesianToPolar, Point::Planar { x, y }) => Ok(Point::polar(x.hypot(*y), y.atan2(*x))),
            (Self::PolarToCartesian, Point::Polar { rho, theta }) => {
                Ok(Point::planar(rho * theta.cos(), rho * theta.sin()))
            }
            (Self::OrderedLineToJacobiPolar { frame }, Point::Triple(cfg)) => {
                let (rho, theta) = jacobi_polar(cfg, frame)?;
                Ok(Point::polar(rho, theta))
            }
            (Self::JacobiPolarToOrderedLine { frame }, Point::Polar { rho, theta }) => {
                let rows = frame.rows();
                let m = Matrix3::from_fn(|i, j| rows[i][j]);
                let rhs = Vector3::new(0.0, rho * theta.cos(), rho * theta.sin());
                let pos = m.lu().solve(&rhs).ok_or(Error::BridgeMismatch { from: "polar" })?;
                Ok(Point::Triple(ThreeBodyConfig::from_positions(
                    &[pos[0]],
                    &[pos[1]],
                    &[pos[2]],
                )?))
            }
            (_, p) => Err(Error::BridgeMismatch { from: p.chart_name() }),
        }
    }
}

/// Outcome of comparing two potentials at bridged sample points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheckResult {
    /// Largest `|V_A − V_B| / max(|V_A|, |V_B|)`.
    pub max_deviation: f64,
    pub samples: usize,
    /// Parameters of the second potential.
    pub dictionary: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub passed: bool,
}

fn parameters(spec: &PotentialSpec) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let mut put = |name: &str, v: f64| {
        out.insert(name.to_string(), v);
    };
    let k_value = |k: &RationalOrReal| k.value();
    match spec {
        PotentialSpec::HydrogenPair | PotentialSpec::Custom2D(_) => {}
        PotentialSpec::CagedOscillator {
            a,
            b,
            omega,
            coupling_x,
            coupling_y,
        } => {
            put("a", *a);
            put("b", *b);
            put("omega", *omega);
            put("A", *coupling_x);
            put("B", *coupling_y);
        }
        PotentialSpec::Ttw { omega, k, alpha, beta } | PotentialSpec::ThreeBodyTtw { omega, k, alpha, beta } => {
            put("omega", *omega);
            put("k", k_value(k));
            put("alpha", *alpha);
            put("beta", *beta);
        }
        PotentialSpec::Pw { a, k, mu, nu } => {
            put("a", *a);
            put("k", k_value(k));
            put("mu", *mu);
            put("nu", *nu);
        }
        PotentialSpec::Calogero { omega, pair } => {
            put("omega", *omega);
            put("A", *pair);
        }
        PotentialSpec::Wolfes { omega, pair, triple } => {
            put("omega", *omega);
            put("A", *pair);
            put("B", *triple);
        }
    }
    out
}

/// Planar points in `[0.2, 3]²` whose polar angle keeps
/// [`SINGULAR_EXCLUSION`] away from every singular ray of either potential.
fn planar_samples(specs: [&PotentialSpec; 2], count: usize, seed: u64) -> Vec<Point> {
    let rays: Vec<f64> = specs.iter().flat_map(|s| s.singular_angles()).collect();
    let mut seq = QuasiRandom::new(2, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = seq.next_in_box(&[0.2, 0.2], &[3.0, 3.0]);
        let theta = p[1].atan2(p[0]);
        if rays.iter().any(|r| (theta - r).abs() < SINGULAR_EXCLUSION) {
            continue;
        }
        out.push(Point::planar(p[0], p[1]));
    }
    out
}

/// Pairs of sample points `(p_A, p_B)` with `p_B` the bridged image of
/// `p_A`. Both orientations of a bridge are built from the same underlying
/// configurations, so a check and its inverse compare the same pairs.
fn sample_pairs(
    spec_a: &PotentialSpec,
    spec_b: &PotentialSpec,
    bridge: &Bridge,
    count: usize,
) -> Result<Vec<(Point, Point)>> {
    let line = |frame: &JacobiFrame| -> Result<Vec<Point>> {
        Ok(ordered_line_samples(frame, count, SAMPLE_SEED)?
            .into_iter()
            .map(Point::Triple)
            .collect())
    };
    let forward = |points: Vec<Point>| -> Result<Vec<(Point, Point)>> {
        points.into_iter().map(|p| Ok((p, bridge.apply(&p)?))).collect()
    };
    let backward = |points: Vec<Point>| -> Result<Vec<(Point, Point)>> {
        let inverse = bridge.inverse();
        points.into_iter().map(|p| Ok((inverse.apply(&p)?, p))).collect()
    };
    let planar = || planar_samples([spec_a, spec_b], count, SAMPLE_SEED);
    match bridge {
        Bridge::Identity => match spec_a.chart() {
            Chart::ThreeBody => forward(line(&equal_mass_line_frame())?),
            _ => forward(planar()),
        },
        Bridge::CartesianToPolar => forward(planar()),
        Bridge::PolarToCartesian => backward(planar()),
        Bridge::OrderedLineToJacobiPolar { frame } => forward(line(frame)?),
        Bridge::JacobiPolarToOrderedLine { frame } => backward(line(frame)?),
    }
}

fn relative_deviation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Evaluates both potentials at `samples` bridged points and reports the
/// largest relative deviation.
pub fn identity_check(
    spec_a: &PotentialSpec,
    spec_b: &PotentialSpec,
    bridge: &Bridge,
    samples_count: usize,
    tol: f64,
) -> Result<IdentityCheckResult> {
    match bridge.charts() {
        None if spec_a.chart() != spec_b.chart() => return Err(Error::BridgeMismatch { from: spec_a.family() }),
        Some((from, to)) if spec_a.chart() != from || spec_b.chart() != to => {
            return Err(Error::BridgeMismatch { from: spec_a.family() })
        }
        _ => {}
    }
    let pairs = sample_pairs(spec_a, spec_b, bridge, samples_count)?;
    let mut max_deviation: f64 = 0.0;
    for (pa, pb) in &pairs {
        let va = eval_potential(spec_a, pa)?;
        let vb = eval_potential(spec_b, pb)?;
        max_deviation = max_deviation.max(relative_deviation(va, vb));
    }
    Ok(IdentityCheckResult {
        max_deviation,
        samples: pairs.len(),
        dictionary: parameters(spec_b),
        tolerance: tol,
        passed: max_deviation <= tol,
    })
}

/// Caged-oscillator form of a `k = 1` TTW potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CagedImage {
    pub spec: PotentialSpec,
    /// Verification of the fitted dictionary at fresh points.
    pub check: IdentityCheckResult,
}

/// Fits `(Â, B̂)` in `ω² (x² + y²) + Â/x² + B̂/y²` to a TTW potential with
/// `k = 1` by least squares at a handful of points, then verifies the
/// dictionary at [`DEFAULT_SAMPLES`] fresh points.
pub fn ttw_to_caged(spec: &PotentialSpec) -> Result<CagedImage> {
    let (omega, k) = match spec {
        PotentialSpec::Ttw { omega, k, .. } | PotentialSpec::ThreeBodyTtw { omega, k, .. } => (*omega, *k),
        other => {
            return Err(Error::InvalidRequest {
                reason: format!("expected a ttw potential, got {}", other.family()),
            })
        }
    };
    if k.normalized()?.as_fraction() != Some((1, 1)) {
        return Err(Error::InvalidRequest {
            reason: format!("the caged form needs k = 1, got k = {k}"),
        });
    }
    let mut normal = Matrix2::zeros();
    let mut rhs = Vector2::zeros();
    for p in planar_samples([spec, spec], 12, FIT_SEED) {
        let (x, y) = p.to_cartesian().expect("planar sample");
        let v = eval_potential(spec, &Bridge::CartesianToPolar.apply(&p)?)? - omega * omega * (x * x + y * y);
        let basis = Vector2::new(1.0 / (x * x), 1.0 / (y * y));
        normal += basis * basis.transpose();
        rhs += basis * v;
    }
    let coeffs = normal.lu().solve(&rhs).ok_or(Error::FitFailure {
        deviation: f64::INFINITY,
    })?;
    let caged = PotentialSpec::CagedOscillator {
        a: 1.0,
        b: 1.0,
        omega,
        coupling_x: coeffs[0],
        coupling_y: coeffs[1],
    };
    let check = identity_check(spec, &caged, &Bridge::PolarToCartesian, DEFAULT_SAMPLES, IDENTITY_TOL)?;
    if !check.passed {
        return Err(Error::FitFailure {
            deviation: check.max_deviation,
        });
    }
    Ok(CagedImage { spec: caged, check })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calogero_is_wolfes_without_triple_term() {
        let a = PotentialSpec::Calogero { omega: 1.3, pair: 0.7 };
        let b = PotentialSpec::Wolfes {
            omega: 1.3,
            pair: 0.7,
            triple: 0.0,
        };
        let r = identity_check(&a, &b, &Bridge::Identity, 200, 0.0).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.passed);
        assert_eq!(r.dictionary["B"], 0.0);
    }

    #[test]
    fn mismatched_bridge() {
        let a = PotentialSpec::Calogero { omega: 1.0, pair: 0.5 };
        let b = PotentialSpec::HydrogenPair;
        assert!(matches!(
            identity_check(&a, &b, &Bridge::CartesianToPolar, 10, 1e-12),
            Err(Error::BridgeMismatch { .. })
        ));
    }

    #[test]
    fn caged_dictionary_is_identity() {
        let ttw = PotentialSpec::Ttw {
            omega: 0.8,
            k: RationalOrReal::integer(1).unwrap(),
            alpha: 0.3,
            beta: 1.1,
        };
        let img = ttw_to_caged(&ttw).unwrap();
        let PotentialSpec::CagedOscillator {
            coupling_x, coupling_y, ..
        } = img.spec
        else {
            panic!("caged image expected");
        };
        assert!((coupling_x - 0.3).abs() < 1e-12);
        assert!((coupling_y - 1.1).abs() < 1e-12);
        assert!(img.check.max_deviation <= 1e-12);
    }

    #[test]
    fn polar_bridge_round_trip() {
        let frame = equal_mass_line_frame::<f64>();
        let bridge = Bridge::OrderedLineToJacobiPolar { frame };
        let cfg = crate::reduction::ordered_line_config(0.7, 1.9).unwrap();
        let polar = bridge.apply(&Point::Triple(cfg)).unwrap();
        let Point::Triple(back) = bridge.inverse().apply(&polar).unwrap() else {
            panic!("three-body point expected");
        };
        let (a, b, c) = back.as_tuple();
        assert!((a - 0.7).abs() < 1e-13 && (b - 2.6).abs() < 1e-13 && (c - 1.9).abs() < 1e-13);
    }
}
