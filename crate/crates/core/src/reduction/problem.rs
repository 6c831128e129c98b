use serde::{Deserialize, Serialize};

use super::centrifugal::centrifugal_coefficient;
use super::jacobi::JacobiFrame;
use super::wolfes::wolfes_to_ttw_in_frame;
use crate::error::{Error, Result};
use crate::model::{eval_potential, validate, Chart, Point, PotentialSpec, RationalOrReal};
use crate::scalar::Scalar;

/// Truncation `[0, x_max] × [0, y_max]` of the open quadrant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct BoxDomain<T: Scalar = f64> {
    pub x_max: T,
    pub y_max: T,
}

impl<T: Scalar> BoxDomain<T> {
    pub fn new(x_max: T, y_max: T) -> Result<Self> {
        for (name, value) in [("x_max", x_max), ("y_max", y_max)] {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::InvalidBox {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        Ok(Self { x_max, y_max })
    }

    pub fn square(side: T) -> Result<Self> {
        Self::new(side, side)
    }
}

/// Default truncation box for a potential: `12/√ω` for oscillators (per
/// axis for the caged oscillator, with the axis frequency `√a ω`), `60` for
/// Coulomb problems (scaled up for weak coupling) and `10` otherwise.
pub fn default_box<T: Scalar>(spec: &PotentialSpec<T>) -> BoxDomain<T> {
    let twelve = T::lit(12.0);
    let coulomb = T::lit(60.0);
    match spec {
        PotentialSpec::CagedOscillator { a, b, omega, .. } => BoxDomain {
            x_max: twelve / (a.sqrt() * *omega).sqrt(),
            y_max: twelve / (b.sqrt() * *omega).sqrt(),
        },
        PotentialSpec::Ttw { omega, .. }
        | PotentialSpec::ThreeBodyTtw { omega, .. }
        | PotentialSpec::Calogero { omega, .. }
        | PotentialSpec::Wolfes { omega, .. } => {
            let side = twelve / omega.sqrt();
            BoxDomain {
                x_max: side,
                y_max: side,
            }
        }
        PotentialSpec::HydrogenPair => BoxDomain {
            x_max: coulomb,
            y_max: coulomb,
        },
        PotentialSpec::Pw { a, .. } => {
            let side = coulomb * T::one().max(T::one() / *a);
            BoxDomain {
                x_max: side,
                y_max: side,
            }
        }
        PotentialSpec::Custom2D(_) => BoxDomain {
            x_max: T::lit(10.0),
            y_max: T::lit(10.0),
        },
    }
}

/// Effective planar problem `−∂²_x − ∂²_y + W(x, y)` on the quadrant with
/// `W = V + c_x/x² + c_y/y²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct ReducedProblem2D<T: Scalar = f64> {
    pub base: PotentialSpec<T>,
    pub d1: u32,
    pub d2: u32,
    pub lx: u32,
    pub ly: u32,
    pub cx: T,
    pub cy: T,
    pub domain: BoxDomain<T>,
}

impl<T: Scalar> ReducedProblem2D<T> {
    /// `W(x, y)`; the centrifugal terms are added only when nonzero.
    pub fn effective_potential(&self, x: T, y: T) -> Result<T> {
        let mut w = eval_potential(&self.base, &Point::planar(x, y))?;
        if self.cx != T::zero() {
            w = w + self.cx / (x * x);
        }
        if self.cy != T::zero() {
            w = w + self.cy / (y * y);
        }
        Ok(w)
    }

    /// A single catalog potential equal to `W`, when the centrifugal terms
    /// can be absorbed into the base family's parameters.
    pub fn effective_spec(&self) -> Option<PotentialSpec<T>> {
        let absorbed = self.cx == T::zero() && self.cy == T::zero();
        match &self.base {
            PotentialSpec::CagedOscillator {
                a,
                b,
                omega,
                coupling_x,
                coupling_y,
            } => Some(PotentialSpec::CagedOscillator {
                a: *a,
                b: *b,
                omega: *omega,
                coupling_x: *coupling_x + self.cx,
                coupling_y: *coupling_y + self.cy,
            }),
            // c_x/x² + c_y/y² = (c_x/cos²θ + c_y/sin²θ)/ρ², a TTW term at k = 1
            PotentialSpec::Ttw { omega, k, alpha, beta } if k.as_fraction() == Some((1, 1)) => {
                Some(PotentialSpec::Ttw {
                    omega: *omega,
                    k: *k,
                    alpha: *alpha + self.cx,
                    beta: *beta + self.cy,
                })
            }
            PotentialSpec::ThreeBodyTtw { omega, k, alpha, beta } if k.as_fraction() == Some((1, 1)) => {
                Some(PotentialSpec::ThreeBodyTtw {
                    omega: *omega,
                    k: *k,
                    alpha: *alpha + self.cx,
                    beta: *beta + self.cy,
                })
            }
            _ if absorbed => Some(self.base.clone()),
            _ => None,
        }
    }

    pub fn dimension_label(&self) -> String {
        if self.d1 == self.d2 {
            format!("d={}", self.d1)
        } else {
            format!("d1={},d2={}", self.d1, self.d2)
        }
    }
}

fn check_radial<T: Scalar>(spec: &PotentialSpec<T>, err: fn(&'static str) -> Error) -> Result<()> {
    match spec {
        PotentialSpec::Custom2D(custom) if custom.angular => Err(err(spec.family())),
        _ if spec.chart() == Chart::ThreeBody => Err(err(spec.family())),
        _ => Ok(()),
    }
}

/// Reduces an `O(d₁) × O(d₂)`-symmetric Hamiltonian with potential `V(x, y)`
/// over the two radii to the planar problem on the quadrant. Without a box the
/// [`default_box`] of the potential is used.
pub fn reduce_to_2d<T: Scalar>(
    v2: &PotentialSpec<T>,
    d1: u32,
    d2: u32,
    lx: u32,
    ly: u32,
    domain: Option<BoxDomain<T>>,
) -> Result<ReducedProblem2D<T>> {
    check_radial(v2, |family| Error::NotRadial { family })?;
    let base = validate(v2)?.into_inner();
    let cx = centrifugal_coefficient(d1, lx)?;
    let cy = centrifugal_coefficient(d2, ly)?;
    let domain = match domain {
        Some(b) => BoxDomain::new(b.x_max, b.y_max)?,
        None => default_box(&base),
    };
    Ok(ReducedProblem2D {
        base,
        d1,
        d2,
        lx,
        ly,
        cx,
        cy,
        domain,
    })
}

/// Relative three-body motion with a potential over the Jacobi distances,
/// identified with the planar problem through `(x, y) ↔ (r₁ᴶ, r₂ᴶ)`.
///
/// Calogero and Wolfes potentials are accepted for `d = 1`, where they are
/// replaced by their fitted three-body TTW image at `k = 3`.
pub fn map_threebody<T: Scalar>(
    v_r: &PotentialSpec<T>,
    frame: &JacobiFrame<T>,
    l1: u32,
    l2: u32,
    domain: Option<BoxDomain<T>>,
) -> Result<ReducedProblem2D<T>> {
    let d = frame.d;
    let base = match v_r {
        PotentialSpec::Calogero { .. } | PotentialSpec::Wolfes { .. } if d == 1 => {
            validate(v_r)?;
            wolfes_to_ttw_in_frame(v_r, frame)?.to_spec()
        }
        _ => {
            check_radial(v_r, |family| Error::PotentialNotJacobiRadial { family })?;
            v_r.clone()
        }
    };
    let domain = domain.or_else(|| Some(default_box(v_r)));
    reduce_to_2d(&base, d, d, l1, l2, domain)
}

/// Jacobi-distance oscillator `a ω² (r₁ᴶ)² + b ω² (r₂ᴶ)²`.
pub fn jacobi_oscillator<T: Scalar>(a: T, b: T, omega: T) -> PotentialSpec<T> {
    PotentialSpec::CagedOscillator {
        a,
        b,
        omega,
        coupling_x: T::zero(),
        coupling_y: T::zero(),
    }
}

/// `k = 3` as stored by the three-body TTW image.
pub(crate) fn k_three<T: Scalar>() -> RationalOrReal<T> {
    RationalOrReal::integer(3).expect("nonzero")
}
