//! Lowest eigenpairs of assembled operators and degeneracy clustering.

mod block;
mod degeneracy;
mod lanczos;

pub use degeneracy::{detect_degeneracies, Cluster, DegeneracyReport};
pub use lanczos::{lowest_eigs, lowest_eigs_with, EigenOptions, EigenResult};

use crate::report::sig17;
use crate::scalar::Scalar;

impl<T: Scalar> EigenResult<T> {
    /// One row per level: `index,energy,residual,cluster`.
    pub fn to_csv(&self, clusters: &DegeneracyReport) -> String {
        let ids = clusters.cluster_ids();
        let mut out = String::from("index,energy,residual,cluster\n");
        for (i, (e, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            let id = ids.get(i).map_or_else(String::new, usize::to_string);
            out.push_str(&format!("{i},{},{},{id}\n", sig17(e.as_f64()), sig17(r.as_f64())));
        }
        out
    }

    pub fn levels_f64(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.as_f64()).collect()
    }
}
