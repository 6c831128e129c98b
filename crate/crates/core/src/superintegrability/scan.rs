use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integral_order;
use crate::eigensolve::{detect_degeneracies, DegeneracyReport};
use crate::error::{Error, Result};
use crate::model::{PotentialSpec, RationalOrReal};
use crate::oracles::{lowest_separated, OracleLevel};
use crate::report::sig17;

/// Copy of a TTW-like template with its `k` replaced.
pub fn with_k(template: &PotentialSpec, k: RationalOrReal) -> Result<PotentialSpec> {
    let mut spec = template.clone();
    match &mut spec {
        PotentialSpec::Ttw { k: slot, .. }
        | PotentialSpec::ThreeBodyTtw { k: slot, .. }
        | PotentialSpec::Pw { k: slot, .. } => {
            *slot = k.normalized()?;
            Ok(spec)
        }
        other => Err(Error::InvalidRequest {
            reason: format!("degeneracy scans need a ttw-like template, got {}", other.family()),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub k: RationalOrReal,
    /// `N = 2(m + n − 1)` for rational `k`.
    pub integral_order: Option<u64>,
    pub levels: Vec<OracleLevel>,
    pub report: DegeneracyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyScan {
    pub template: PotentialSpec,
    pub tol: f64,
    pub entries: Vec<ScanEntry>,
}

impl DegeneracyScan {
    /// One row per level: `k,level,energy,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,level,energy,multiplicity\n");
        for e in &self.entries {
            let ids = e.report.cluster_ids();
            for (i, level) in e.levels.iter().enumerate() {
                let mult = e.report.clusters[ids[i]].multiplicity;
                out.push_str(&format!("{},{},{},{}\n", e.k, i, sig17(level.energy), mult));
            }
        }
        out
    }

    /// Per-`k` multiplicity histograms with integral-order annotations.
    pub fn summary(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "k": e.k.to_string(),
                    "k_value": e.k.value(),
                    "integral_order": e.integral_order,
                    "levels": e.levels.len(),
                    "max_multiplicity": e.report.max_multiplicity(),
                    "histogram": e.report.histogram(),
                })
            })
            .collect();
        serde_json::json!({
            "family": self.template.family(),
            "tol": self.tol,
            "entries": entries,
        })
    }
}

/// Clusters the lowest `levels_per_k` oracle levels of the template at
/// each `k`.
pub fn degeneracy_scan(
    template: &PotentialSpec,
    k_list: &[RationalOrReal],
    levels_per_k: usize,
    tol: f64,
) -> Result<DegeneracyScan> {
    let entries = k_list
        .par_iter()
        .map(|k| {
            let spec = with_k(template, *k)?;
            let levels = lowest_separated(&spec, levels_per_k)?.levels;
            let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
            Ok(ScanEntry {
                k: k.normalized()?,
                integral_order: integral_order(k).ok(),
                report: detect_degeneracies(&energies, tol),
                levels,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegeneracyScan {
        template: template.clone(),
        tol,
        entries,
    })
}
