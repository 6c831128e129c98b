use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::block::{combine, extend_basis, norm, random_vector};
use crate::discretize::SparseOperator;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Operators up to this size are diagonalized densely.
const DENSE_LIMIT: usize = 400;
/// Columns whose norm shrinks below this fraction during
/// orthogonalization are treated as lying in the span.
const DROP_TOL: f64 = 1e-10;
/// Bound on how much the filter may amplify the lowest wanted level
/// relative to the highest wanted one.
const MAX_AMPLIFICATION: f64 = 1e6;

/// Tuning knobs for [`lowest_eigs_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EigenOptions {
    /// Extra block columns beyond the requested count.
    pub guard: usize,
    /// Block Krylov steps taken from each filtered block.
    pub krylov_steps: usize,
    /// Upper limit on the Chebyshev filter degree.
    pub max_degree: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            guard: 6,
            krylov_steps: 2,
            max_degree: 400,
            seed: 0x7a11_0c05,
        }
    }
}

/// Lowest eigenpairs of a symmetric operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EigenResult<T: Scalar = f64> {
    pub eigenvalues: Vec<T>,
    /// `‖H v − λ v‖` for unit `v`.
    pub residuals: Vec<T>,
    /// Restart cycles performed.
    pub iterations: usize,
    pub matvecs: usize,
    pub converged: bool,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<T>>,
}

impl<T: Scalar> EigenResult<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                max_residual: self.max_residual().as_f64(),
            })
        }
    }
}

struct Ritz<T: Scalar> {
    values: Vec<f64>,
    vectors: Vec<Vec<T>>,
}

/// Rayleigh–Ritz on the span of `basis` given `images = H basis`.
fn rayleigh_ritz<T: Scalar>(basis: &[Vec<T>], images: &[Vec<T>], keep: usize) -> Ritz<T> {
    let k = basis.len();
    let mut h = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        for j in 0..=i {
            let a = super::block::dot(&basis[i], &images[j]).as_f64();
            let b = super::block::dot(&basis[j], &images[i]).as_f64();
            let v = 0.5 * (a + b);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let keep = keep.min(k);
    let values = order[..keep].iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order[..keep]
        .iter()
        .map(|&i| combine(basis, eig.eigenvectors.column(i).as_slice()))
        .collect();
    Ritz { values, vectors }
}

fn dense_solve<T: Scalar>(op: &SparseOperator<T>, m: usize) -> Result<EigenResult<T>> {
    let n = op.dim();
    let mut h = DMatrix::<f64>::zeros(n, n);
    for r in 0..n {
        for (c, v) in op.row(r) {
            h[(r, c)] = v.as_f64();
        }
    }
    let h = (&h + h.transpose()) * 0.5;
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vectors: Vec<Vec<T>> = order[..m]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().map(|&x| T::lit(x)).collect())
        .collect();
    let values: Vec<f64> = order[..m].iter().map(|&i| eig.eigenvalues[i]).collect();
    finish(op, values, vectors, 1, n, T::infinity())
}

/// Packs Ritz pairs with explicit residuals; `converged` compares them to `tol`.
fn finish<T: Scalar>(
    op: &SparseOperator<T>,
    values: Vec<f64>,
    vectors: Vec<Vec<T>>,
    iterations: usize,
    matvecs: usize,
    tol: T,
) -> Result<EigenResult<T>> {
    let mut residuals = Vec::with_capacity(values.len());
    for (&lambda, v) in values.iter().zip(&vectors) {
        let hv = op.matvec(v)?;
        let l = T::lit(lambda);
        let r: Vec<T> = hv.iter().zip(v).map(|(&a, &b)| a - l * b).collect();
        residuals.push(norm(&r));
    }
    let converged = tol.is_infinite() || residuals.iter().all(|&r| r <= tol);
    Ok(EigenResult {
        eigenvalues: values.into_iter().map(T::lit).collect(),
        residuals,
        iterations,
        matvecs: matvecs + vectors.len(),
        converged,
        eigenvectors: vectors,
    })
}

/// Scaled Chebyshev filter damping `[a, b]` and normalized near `low`.
fn chebyshev_filter<T: Scalar>(
    op: &SparseOperator<T>,
    x: &[Vec<T>],
    degree: usize,
    (low, a, b): (f64, f64, f64),
) -> Result<Vec<Vec<T>>> {
    let e = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    let sigma1 = e / (low - c);
    let tau = 2.0 / sigma1;
    let mut out = Vec::with_capacity(x.len());
    let mut hv = vec![T::zero(); op.dim()];
    for col in x {
        let mut prev = col.clone();
        op.apply_into(&prev, &mut hv)?;
        let s = T::lit(sigma1 / e);
        let ct = T::lit(c);
        let mut cur: Vec<T> = hv.iter().zip(&prev).map(|(&h, &p)| (h - ct * p) * s).collect();
        let mut sigma = sigma1;
        for _ in 1..degree {
            let sigma_new = 1.0 / (tau - sigma);
            op.apply_into(&cur, &mut hv)?;
            let f = T::lit(2.0 * sigma_new / e);
            let g = T::lit(sigma * sigma_new);
            let next: Vec<T> = hv
                .iter()
                .zip(&cur)
                .zip(&prev)
                .map(|((&h, &y), &p)| f * (h - ct * y) - g * p)
                .collect();
            prev = std::mem::replace(&mut cur, next);
            sigma = sigma_new;
        }
        out.push(cur);
    }
    Ok(out)
}

/// Filter degree keeping the amplification of `θ_0` over `θ_{m−1}` below
/// [`MAX_AMPLIFICATION`].
fn filter_degree(theta0: f64, theta_m: f64, a: f64, b: f64, max_degree: usize) -> usize {
    let e = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    let growth = |t: f64| ((c - t) / e).max(1.0).acosh();
    let spread = growth(theta0) - growth(theta_m);
    let degree = if spread > 0.0 {
        (MAX_AMPLIFICATION.ln() / spread) as usize
    } else {
        max_degree
    };
    let degree = degree.clamp(4, max_degree.max(4));
    degree + degree % 2
}

/// Lowest `m` eigenpairs with the default [`EigenOptions`].
pub fn lowest_eigs<T: Scalar>(op: &SparseOperator<T>, m: usize, tol: T, max_iter: usize) -> Result<EigenResult<T>> {
    lowest_eigs_with(op, m, tol, max_iter, &EigenOptions::default())
}

/// Chebyshev-filtered block Lanczos with full reorthogonalization and
/// explicit restarts.
///
/// Each cycle filters the current Ritz block with a Chebyshev polynomial
/// that damps the interval between the largest kept Ritz value and a
/// Gershgorin upper bound, grows a block Krylov basis from it with every
/// new vector orthogonalized against all previous ones, and restarts from
/// the lowest Ritz vectors of that basis. Blocks wider than any degenerate
/// cluster among the wanted levels resolve the cluster exactly.
///
/// Small operators are diagonalized densely. Exhausting `max_iter` cycles
/// returns `converged = false` with the current pairs and residuals.
pub fn lowest_eigs_with<T: Scalar>(
    op: &SparseOperator<T>,
    m: usize,
    tol: T,
    max_iter: usize,
    options: &EigenOptions,
) -> Result<EigenResult<T>> {
    let n = op.dim();
    if m == 0 {
        return Err(Error::InvalidRequest {
            reason: "at least one eigenpair must be requested".into(),
        });
    }
    if m > n {
        return Err(Error::Breakdown {
            available: n,
            requested: m,
        });
    }
    let width = (m + options.guard.max(1)).min(n);
    let steps = options.krylov_steps.max(1);
    if n <= DENSE_LIMIT || width * (steps + 1) * 2 > n {
        return dense_solve(op, m);
    }

    let (_, upper) = op.gershgorin();
    let upper = upper.as_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut block: Vec<Vec<T>> = (0..width).map(|_| random_vector(n, &mut rng)).collect();
    let mut ritz_values: Vec<f64> = Vec::new();
    let mut matvecs = 0usize;
    let mut iterations = 0usize;

    while iterations < max_iter.max(1) {
        iterations += 1;
        if ritz_values.len() == width {
            let a = ritz_values[width - 1];
            let theta0 = ritz_values[0];
            if a < upper {
                let low = if theta0 < a - 1e-12 * (upper - a) {
                    theta0
                } else {
                    a - 1e-3 * (upper - a)
                };
                let degree = filter_degree(theta0, ritz_values[m - 1], a, upper, options.max_degree);
                block = chebyshev_filter(op, &block, degree, (low, a, upper))?;
                matvecs += degree * width;
            }
        }

        let mut basis: Vec<Vec<T>> = Vec::with_capacity(width * (steps + 1));
        let mut images: Vec<Vec<T>> = Vec::with_capacity(width * (steps + 1));
        let mut range = extend_basis(&mut basis, block, &mut rng, DROP_TOL);
        for step in 0..=steps {
            let mut next = Vec::with_capacity(range.len());
            for i in range.clone() {
                let hv = op.matvec(&basis[i])?;
                matvecs += 1;
                if step < steps {
                    next.push(hv.clone());
                }
                images.push(hv);
            }
            if step < steps {
                range = extend_basis(&mut basis, next, &mut rng, DROP_TOL);
                if range.is_empty() {
                    break;
                }
            }
        }
        // blocks cut short by an invariant subspace leave trailing images
        while images.len() < basis.len() {
            let i = images.len();
            images.push(op.matvec(&basis[i])?);
            matvecs += 1;
        }

        let ritz = rayleigh_ritz(&basis, &images, width);
        ritz_values = ritz.values;
        block = ritz.vectors;
        if block.len() < m {
            return Err(Error::Breakdown {
                available: block.len(),
                requested: m,
            });
        }

        let wanted = finish(
            op,
            ritz_values[..m].to_vec(),
            block[..m].to_vec(),
            iterations,
            matvecs,
            tol,
        )?;
        matvecs = wanted.matvecs;
        if wanted.converged || iterations >= max_iter.max(1) {
            return Ok(wanted);
        }
    }
    unreachable!("loop returns on its last iteration")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian_2d(n: usize, h: f64) -> SparseOperator {
        let inv = 1.0 / (h * h);
        let mut entries = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let r = i + n * j;
                entries.push((r, r, 4.0 * inv));
                if i + 1 < n {
                    entries.push((r, r + 1, -inv));
                    entries.push((r + 1, r, -inv));
                }
                if j + 1 < n {
                    entries.push((r, r + n, -inv));
                    entries.push((r + n, r, -inv));
                }
            }
        }
        SparseOperator::from_triplets(n * n, &entries).unwrap()
    }

    #[test]
    fn discrete_dirichlet_laplacian() {
        let op = SparseOperator::laplacian_1d(100, 1.0f64);
        let res = lowest_eigs(&op, 3, 1e-10, 50).unwrap();
        for (j, &l) in res.eigenvalues.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * PI / 101.0).cos();
            assert!((l - exact).abs() < 1e-12, "{l} {exact}");
        }
        let big = SparseOperator::laplacian_1d(2000, 1.0f64);
        let res = lowest_eigs(&big, 2, 1e-9, 200).unwrap();
        assert!(res.converged, "{res:?}");
        let exact = 2.0 - 2.0 * (PI / 2001.0).cos();
        assert!((res.eigenvalues[0] - exact).abs() < 1e-12);
    }

    #[test]
    fn diagonal_operator() {
        let op = SparseOperator::diagonal_matrix(&[3.0, -2.0, 7.0, 0.5]);
        let res = lowest_eigs(&op, 1, 1e-12, 10).unwrap();
        assert_eq!(res.eigenvalues, vec![-2.0]);
    }

    #[test]
    fn degenerate_square_modes() {
        // (1,2) and (2,1) modes of the square share an eigenvalue
        let n = 60;
        let h = PI / (n as f64 + 1.0);
        let op = laplacian_2d(n, h);
        let res = lowest_eigs(&op, 4, 1e-8, 100).unwrap().require_converged().unwrap();
        let mode = |p: f64| (2.0 - 2.0 * (p * h).cos()) / (h * h);
        let expected = [
            2.0 * mode(1.0),
            mode(1.0) + mode(2.0),
            mode(1.0) + mode(2.0),
            2.0 * mode(2.0),
        ];
        for (l, e) in res.eigenvalues.iter().zip(expected) {
            assert!((l - e).abs() < 1e-9 * e, "{l} {e}");
        }
        for i in 0..4 {
            for j in 0..4 {
                let d = super::super::block::dot(&res.eigenvectors[i], &res.eigenvectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((d - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn deterministic_with_seed() {
        let op = laplacian_2d(40, 0.1);
        let a = lowest_eigs(&op, 3, 1e-8, 100).unwrap();
        let b = lowest_eigs(&op, 3, 1e-8, 100).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reports_non_convergence() {
        let op = laplacian_2d(60, 0.1);
        let res = lowest_eigs(&op, 3, 1e-14, 1).unwrap();
        assert!(!res.converged);
        assert_eq!(res.eigenvalues.len(), 3);
        assert!(matches!(
            res.require_converged(),
            Err(Error::NotConverged { iterations: 1, .. })
        ));
    }

    #[test]
    fn invalid_requests() {
        let op = SparseOperator::laplacian_1d(10, 1.0f64);
        assert!(matches!(lowest_eigs(&op, 11, 1e-8, 5), Err(Error::Breakdown { .. })));
        assert!(matches!(
            lowest_eigs(&op, 0, 1e-8, 5),
            Err(Error::InvalidRequest { .. })
        ));
    }

    #[test]
    fn single_precision() {
        let op = SparseOperator::<f32>::laplacian_1d(600, 1.0);
        let res = lowest_eigs(&op, 2, 1e-4, 100).unwrap();
        let exact = 2.0 - 2.0 * (PI / 601.0).cos();
        assert!(((res.eigenvalues[0] as f64) - exact).abs() < 1e-5);
    }
}
