use std::ops::Deref;

use super::potential::PotentialSpec;
use super::rational::RationalOrReal;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A potential whose parameters passed [`validate`]; fractions are in
/// lowest terms.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckedSpec<T: Scalar = f64>(PotentialSpec<T>);

impl<T: Scalar> CheckedSpec<T> {
    pub fn into_inner(self) -> PotentialSpec<T> {
        self.0
    }
}

impl<T: Scalar> Deref for CheckedSpec<T> {
    type Target = PotentialSpec<T>;

    fn deref(&self) -> &PotentialSpec<T> {
        &self.0
    }
}

fn finite<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    if num_traits::Float::is_finite(v) {
        Ok(())
    } else {
        Err(Error::NonFinite { name })
    }
}

fn positive<T: Scalar>(name: &'static str, v: T) -> Result<()> {
    finite(name, v)?;
    if v > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveMassOrFrequency {
            name,
            value: v.as_f64(),
        })
    }
}

fn above<T: Scalar>(name: &'static str, v: T, bound: T) -> Result<()> {
    finite(name, v)?;
    if v > bound {
        Ok(())
    } else {
        Err(Error::BoundViolation {
            name,
            value: v.as_f64(),
            bound: bound.as_f64(),
        })
    }
}

/// Lower bound `−1/(4k²)` on the TTW angular strengths.
pub fn ttw_strength_bound<T: Scalar>(k: &RationalOrReal<T>) -> T {
    let kv = k.value();
    -T::one() / (T::lit(4.0) * kv * kv)
}

/// Certifies the invariants of a potential family.
///
/// * TTW, three-body TTW: `k ≠ 0`, `ω > 0`, `α, β > −1/(4k²)` (strict).
/// * Caged oscillator: `a, b, ω > 0` and `A, B > −1/8`, applied uniformly.
/// * PW: `k ≠ 0`, `a > 0`, `μ, ν > −k²/16` (the inverse-square bound for
///   angular arguments `kθ/2`).
/// * Calogero, Wolfes: `ω > 0`.
pub fn validate<T: Scalar>(spec: &PotentialSpec<T>) -> Result<CheckedSpec<T>> {
    let checked = match spec {
        PotentialSpec::HydrogenPair => PotentialSpec::HydrogenPair,
        PotentialSpec::CagedOscillator {
            a,
            b,
            omega,
            coupling_x,
            coupling_y,
        } => {
            positive("a", *a)?;
            positive("b", *b)?;
            positive("omega", *omega)?;
            let bound = T::lit(-0.125);
            above("A", *coupling_x, bound)?;
            above("B", *coupling_y, bound)?;
            spec.clone()
        }
        PotentialSpec::Ttw { omega, k, alpha, beta } | PotentialSpec::ThreeBodyTtw { omega, k, alpha, beta } => {
            let k = k.normalized()?;
            positive("omega", *omega)?;
            let bound = ttw_strength_bound(&k);
            above("alpha", *alpha, bound)?;
            above("beta", *beta, bound)?;
            match spec {
                PotentialSpec::Ttw { .. } => PotentialSpec::Ttw {
                    omega: *omega,
                    k,
                    alpha: *alpha,
                    beta: *beta,
                },
                _ => PotentialSpec::ThreeBodyTtw {
                    omega: *omega,
                    k,
                    alpha: *alpha,
                    beta: *beta,
                },
            }
        }
        PotentialSpec::Pw { a, k, mu, nu } => {
            let k = k.normalized()?;
            positive("a", *a)?;
            let kv = k.value();
            let bound = -kv * kv / T::lit(16.0);
            above("mu", *mu, bound)?;
            above("nu", *nu, bound)?;
            PotentialSpec::Pw {
                a: *a,
                k,
                mu: *mu,
                nu: *nu,
            }
        }
        PotentialSpec::Calogero { omega, pair } => {
            positive("omega", *omega)?;
            finite("A", *pair)?;
            spec.clone()
        }
        PotentialSpec::Wolfes { omega, pair, triple } => {
            positive("omega", *omega)?;
            finite("A", *pair)?;
            finite("B", *triple)?;
            spec.clone()
        }
        PotentialSpec::Custom2D(_) => spec.clone(),
    };
    Ok(CheckedSpec(checked))
}
