use serde::{Deserialize, Serialize};

/// One multiplet of numerically coincident levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Arithmetic mean of the member levels.
    pub energy: f64,
    pub multiplicity: usize,
    /// Index of the first member in the examined list.
    pub first: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub clusters: Vec<Cluster>,
    pub tol_rel: f64,
    pub total_levels: usize,
}

impl DegeneracyReport {
    /// Cluster id of every examined level.
    pub fn cluster_ids(&self) -> Vec<usize> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(id, c)| std::iter::repeat_n(id, c.multiplicity))
            .collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).max().unwrap_or(0)
    }

    /// `(multiplicity, number of clusters)` in increasing multiplicity.
    pub fn histogram(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for c in &self.clusters {
            *counts.entry(c.multiplicity).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

/// Greedy clustering of sorted levels: `λ_{i+1}` joins the current cluster
/// when `|λ_{i+1} − λ_i| ≤ tol_rel · max(1, |λ_i|)`.
pub fn detect_degeneracies(levels: &[f64], tol_rel: f64) -> DegeneracyReport {
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut sum = 0.0;
    for (i, &level) in levels.iter().enumerate() {
        let joins = i > 0 && {
            let prev = levels[i - 1];
            (level - prev).abs() <= tol_rel * prev.abs().max(1.0)
        };
        if joins {
            let c = clusters.last_mut().expect("cluster started");
            c.multiplicity += 1;
            sum += level;
            c.energy = sum / c.multiplicity as f64;
        } else {
            sum = level;
            clusters.push(Cluster {
                energy: level,
                multiplicity: 1,
                first: i,
            });
        }
    }
    DegeneracyReport {
        clusters,
        tol_rel,
        total_levels: levels.len(),
    }
}
