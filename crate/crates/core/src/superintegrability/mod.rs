//! Integral orders, exact potential identities and degeneracy scans.

mod identity;
mod scan;

pub use identity::{identity_check, ttw_to_caged, Bridge, CagedImage, IdentityCheckResult, DEFAULT_SAMPLES};
pub use scan::{degeneracy_scan, with_k, DegeneracyScan, ScanEntry};

use crate::error::{Error, Result};
use crate::model::RationalOrReal;
use crate::scalar::Scalar;

/// Order `N = 2(m + n − 1)` of the additional integral for `k = m/n`.
pub fn integral_order<T: Scalar>(k: &RationalOrReal<T>) -> Result<u64> {
    match k.normalized()?.as_fraction() {
        Some((m, n)) => Ok(2 * (m + n - 1)),
        None => Err(Error::NotRational),
    }
}
