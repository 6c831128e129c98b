//! Column-block helpers. Every reduction runs sequentially inside a column
//! and parallel across columns or row chunks, so results do not depend on
//! the thread count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scalar::Scalar;

const CHUNK: usize = 4096;

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub(crate) fn scale<T: Scalar>(a: &mut [T], s: T) {
    a.par_iter_mut().with_min_len(CHUNK).for_each(|x| *x = *x * s);
}

pub(crate) fn random_vector<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect()
}

/// `w ← w − Σ_j ⟨v_j, w⟩ v_j`.
fn project_out<T: Scalar>(basis: &[Vec<T>], w: &mut [T]) {
    if basis.is_empty() {
        return;
    }
    let coeffs: Vec<T> = basis.par_iter().map(|v| dot(v, w)).collect();
    w.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, part)| {
        let start = chunk * CHUNK;
        for (offset, x) in part.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (v, &c) in basis.iter().zip(&coeffs) {
                acc = acc + c * v[start + offset];
            }
            *x = *x - acc;
        }
    });
}

/// Orthonormalizes `w` against an orthonormal `basis` with two passes of
/// classical Gram–Schmidt. Returns `false` when `w` is numerically inside
/// the span, in which case `w` is left unnormalized.
pub(crate) fn orthonormalize_into<T: Scalar>(basis: &[Vec<T>], w: &mut [T], drop_tol: f64) -> bool {
    let before = norm(w);
    if before == T::zero() {
        return false;
    }
    project_out(basis, w);
    project_out(basis, w);
    let after = norm(w);
    if !(after.as_f64() > drop_tol * before.as_f64()) {
        return false;
    }
    scale(w, T::one() / after);
    true
}

/// Appends the columns of `block` to `basis` as orthonormal vectors,
/// substituting random directions for columns that fall inside the span.
/// Returns the appended columns.
pub(crate) fn extend_basis<T: Scalar>(
    basis: &mut Vec<Vec<T>>,
    block: Vec<Vec<T>>,
    rng: &mut ChaCha8Rng,
    drop_tol: f64,
) -> std::ops::Range<usize> {
    let start = basis.len();
    let n = block.first().map_or(0, Vec::len);
    for mut w in block {
        let mut attempts = 0;
        while !orthonormalize_into(basis, &mut w, drop_tol) {
            attempts += 1;
            if attempts > 8 || basis.len() >= n {
                break;
            }
            w = random_vector(n, rng);
        }
        if attempts <= 8 && basis.len() < n {
            basis.push(w);
        }
    }
    start..basis.len()
}

/// `Σ_j coeffs[j] · vectors[j]`, summed in `j` order for each entry.
pub(crate) fn combine<T: Scalar>(vectors: &[Vec<T>], coeffs: &[f64]) -> Vec<T> {
    let n = vectors.first().map_or(0, Vec::len);
    let c: Vec<T> = coeffs.iter().map(|&x| T::lit(x)).collect();
    let mut out = vec![T::zero(); n];
    out.par_chunks_mut(CHUNK).enumerate().for_each(|(chunk, part)| {
        let start = chunk * CHUNK;
        for (offset, x) in part.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (v, &cj) in vectors.iter().zip(&c) {
                acc = acc + cj * v[start + offset];
            }
            *x = acc;
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn gram_schmidt_produces_orthonormal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let block: Vec<Vec<f64>> = (0..6).map(|_| random_vector(50, &mut rng)).collect();
        let mut dup = block.clone();
        dup.push(block[2].clone());
        let mut basis = Vec::new();
        let range = extend_basis(&mut basis, dup, &mut rng, 1e-10);
        assert_eq!(range, 0..7);
        for i in 0..7 {
            for j in 0..7 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&basis[i], &basis[j]) - target).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn span_is_capped_by_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let block: Vec<Vec<f64>> = (0..5).map(|_| random_vector(3, &mut rng)).collect();
        let mut basis = Vec::new();
        extend_basis(&mut basis, block, &mut rng, 1e-10);
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn combination() {
        let v = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(combine(&v, &[2.0, -3.0]), vec![2.0, -3.0]);
    }
}
