//! Generalized symmetric tridiagonal eigenproblems `A φ = E W φ` solved by
//! inertia counting, and Richardson extrapolation over grid doublings.

use crate::error::{Error, Result};

/// `A` with diagonal `diag` and constant off-diagonal `off`; `W` diagonal
/// with positive `weight`.
#[derive(Clone, Debug)]
pub(crate) struct Tridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub weight: Vec<f64>,
}

impl Tridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `e` (negative pivots of the
    /// `LDLᵀ` factorization of `A − e W`).
    pub fn count_below(&self, e: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / d
            };
            d = self.diag[i] - e * self.weight[i] - coupling;
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + e.abs() * self.weight[i]).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalue with zero-based index `k`, optionally starting from a
    /// guess of its location and width.
    pub fn eigenvalue(&self, k: usize, guess: Option<(f64, f64)>) -> f64 {
        let (centre, width) = guess.unwrap_or((0.0, 1.0));
        let mut width = width.abs().max(1e-12 * centre.abs()).max(1e-300);
        let mut lo = centre - width;
        while self.count_below(lo) > k {
            width *= 4.0;
            lo = centre - width;
        }
        let mut hi = centre + width;
        while self.count_below(hi) <= k {
            width *= 4.0;
            hi = centre + width;
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn lowest(&self, m: usize, guesses: Option<&[(f64, f64)]>) -> Vec<f64> {
        (0..m).map(|k| self.eigenvalue(k, guesses.map(|g| g[k]))).collect()
    }
}

/// Converged levels with their Richardson error estimates.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Extrapolated {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

/// Lowest `m` eigenvalues of a family of discretizations with `n0 · 2^j`
/// intervals, extrapolated assuming an error expansion in even powers of
/// the spacing. Stops once every level's estimate is below
/// `target · |E|`; returns [`Error::AccuracyNotReached`] after
/// `max_doublings`.
pub(crate) fn richardson<F>(build: F, m: usize, n0: usize, target: f64, max_doublings: usize) -> Result<Extrapolated>
where
    F: Fn(usize) -> Tridiag,
{
    let mut table: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut guesses: Option<Vec<(f64, f64)>> = None;
    let mut last_err = vec![f64::INFINITY; m];
    for j in 0..=max_doublings {
        let problem = build(n0 << j);
        if problem.len() < m {
            return Err(Error::InvalidRequest {
                reason: format!("discretization with {} unknowns cannot hold {m} levels", problem.len()),
            });
        }
        let base = problem.lowest(m, guesses.as_deref());
        let mut row = vec![base];
        for i in 1..=j {
            let factor = 4f64.powi(i as i32) - 1.0;
            let prev_row = &table[j - 1];
            let next: Vec<f64> = row[i - 1]
                .iter()
                .zip(&prev_row[i - 1])
                .map(|(&fine, &coarse)| fine + (fine - coarse) / factor)
                .collect();
            row.push(next);
        }
        let best = row[j].clone();
        if j >= 1 {
            let prev_best = &table[j - 1][j - 1];
            last_err = best.iter().zip(prev_best).map(|(a, b)| (a - b).abs()).collect();
            guesses = Some(
                row[0]
                    .iter()
                    .zip(&best)
                    .map(|(&raw, &ext)| (ext, 4.0 * (raw - ext).abs().max(1e-14 * ext.abs())))
                    .collect(),
            );
            let done = j >= 2 && best.iter().zip(&last_err).all(|(v, e)| *e <= target * v.abs());
            table.push(row);
            if done {
                return Ok(Extrapolated {
                    values: best,
                    errors: last_err,
                });
            }
        } else {
            guesses = Some(best.iter().map(|&v| (v, 0.05 * v.abs().max(1e-3))).collect());
            table.push(row);
        }
    }
    let best = table.last().and_then(|r| r.last()).cloned().unwrap_or_default();
    let achieved = best
        .iter()
        .zip(&last_err)
        .map(|(v, e)| e / v.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Err(Error::AccuracyNotReached { achieved, target })
}
