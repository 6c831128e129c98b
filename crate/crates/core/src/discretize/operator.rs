use std::io::{self, Read, Write};

use rayon::prelude::*;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::reduction::ReducedProblem2D;
use crate::scalar::Scalar;

const PAR_MIN_ROWS: usize = 2048;

/// Symmetric sparse matrix in compressed sparse row layout. Both triangles
/// are stored; columns are sorted within each row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator<T: Scalar = f64> {
    dim: usize,
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<T>,
}

impl<T: Scalar> SparseOperator<T> {
    /// Builds from `(row, col, value)` entries; duplicates are summed.
    pub fn from_triplets(dim: usize, entries: &[(usize, usize, T)]) -> Result<Self> {
        let mut sorted = entries.to_vec();
        for &(r, c, _) in &sorted {
            if r >= dim || c >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.max(c) + 1,
                });
            }
        }
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col = Vec::with_capacity(sorted.len());
        let mut val: Vec<T> = Vec::with_capacity(sorted.len());
        let mut last = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                let top = val.len() - 1;
                val[top] = val[top] + v;
                continue;
            }
            last = Some((r, c));
            row_ptr[r + 1] += 1;
            col.push(c);
            val.push(v);
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Ok(Self { dim, row_ptr, col, val })
    }

    pub fn diagonal_matrix(diag: &[T]) -> Self {
        Self {
            dim: diag.len(),
            row_ptr: (0..=diag.len()).collect(),
            col: (0..diag.len()).collect(),
            val: diag.to_vec(),
        }
    }

    /// `−∂²` on `n` Dirichlet nodes with spacing `h`: `(2, −1)/h²`.
    pub fn laplacian_1d(n: usize, h: T) -> Self {
        let inv = T::one() / (h * h);
        let mut entries = Vec::with_capacity(3 * n);
        for i in 0..n {
            entries.push((i, i, T::lit(2.0) * inv));
            if i + 1 < n {
                entries.push((i, i + 1, -inv));
                entries.push((i + 1, i, -inv));
            }
        }
        Self::from_triplets(n, &entries).expect("indices in range")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col[span.clone()]
            .iter()
            .copied()
            .zip(self.val[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col[span.clone()].binary_search(&c) {
            Ok(k) => self.val[span.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }

    /// Largest `|H_rc − H_cr|` over stored entries.
    pub fn max_asymmetry(&self) -> T {
        (0..self.dim)
            .flat_map(|r| self.row(r).map(move |(c, v)| (r, c, v)))
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(T::zero(), T::max)
    }

    /// Gershgorin enclosure `(lower, upper)` of the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for r in 0..self.dim {
            let mut centre = T::zero();
            let mut radius = T::zero();
            for (c, v) in self.row(r) {
                if c == r {
                    centre = v;
                } else {
                    radius = radius + v.abs();
                }
            }
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    fn row_dot(&self, r: usize, v: &[T]) -> T {
        let mut acc = T::zero();
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            acc = acc + self.val[k] * v[self.col[k]];
        }
        acc
    }

    /// `out = H v`. Each row is summed in storage order, so the result does
    /// not depend on the thread count.
    pub fn apply_into(&self, v: &[T], out: &mut [T]) -> Result<()> {
        for len in [v.len(), out.len()] {
            if len != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: len,
                });
            }
        }
        if self.dim >= PAR_MIN_ROWS {
            out.par_iter_mut()
                .with_min_len(PAR_MIN_ROWS / 2)
                .enumerate()
                .for_each(|(r, o)| *o = self.row_dot(r, v));
        } else {
            for (r, o) in out.iter_mut().enumerate() {
                *o = self.row_dot(r, v);
            }
        }
        Ok(())
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.dim];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Little-endian dump: `u64` row count, `u64` entry count, `u64` row
    /// pointers (`rows + 1`), `u64` column indices, `f64` values.
    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(&(self.dim as u64).to_le_bytes())?;
        w.write_all(&(self.nnz() as u64).to_le_bytes())?;
        for &p in &self.row_ptr {
            w.write_all(&(p as u64).to_le_bytes())?;
        }
        for &c in &self.col {
            w.write_all(&(c as u64).to_le_bytes())?;
        }
        for &v in &self.val {
            w.write_all(&v.as_f64().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> io::Result<Self> {
        let mut word = [0u8; 8];
        let mut next = |r: &mut R| -> io::Result<u64> {
            r.read_exact(&mut word)?;
            Ok(u64::from_le_bytes(word))
        };
        let dim = next(&mut r)? as usize;
        let nnz = next(&mut r)? as usize;
        let row_ptr = (0..=dim)
            .map(|_| next(&mut r).map(|x| x as usize))
            .collect::<io::Result<Vec<_>>>()?;
        let col = (0..nnz)
            .map(|_| next(&mut r).map(|x| x as usize))
            .collect::<io::Result<Vec<_>>>()?;
        let val = (0..nnz)
            .map(|_| next(&mut r).map(|x| T::lit(f64::from_bits(x))))
            .collect::<io::Result<Vec<_>>>()?;
        let consistent = row_ptr.first() == Some(&0)
            && row_ptr.last() == Some(&nnz)
            && row_ptr.windows(2).all(|w| w[0] <= w[1])
            && col.iter().all(|&c| c < dim);
        if !consistent {
            return Err(io::Error::new(io::ErrorKind::InvalidData, "inconsistent sparse layout"));
        }
        Ok(Self { dim, row_ptr, col, val })
    }
}

/// Five-point discretization of `−∂²_x − ∂²_y + W` with Dirichlet walls:
/// diagonal `2/h_x² + 2/h_y² + W(x_i, y_j)`, neighbours `−1/h²`.
pub fn assemble<T: Scalar>(problem: &ReducedProblem2D<T>, grid: &Grid<T>) -> Result<SparseOperator<T>> {
    let (nx, ny) = (grid.x.n, grid.y.n);
    let dim = grid.len();
    let off_x = -T::one() / (grid.x.h * grid.x.h);
    let off_y = -T::one() / (grid.y.h * grid.y.h);

    let potential: Vec<T> = (0..dim)
        .into_par_iter()
        .with_min_len(PAR_MIN_ROWS)
        .map(|r| {
            let (x, y) = grid.point(r);
            problem.effective_potential(x, y)
        })
        .collect::<Result<_>>()?;

    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut col = Vec::with_capacity(5 * dim);
    let mut val = Vec::with_capacity(5 * dim);
    row_ptr.push(0);
    for j in 0..ny {
        for i in 0..nx {
            let r = grid.index(i, j);
            if j > 0 {
                col.push(r - nx);
                val.push(off_y);
            }
            if i > 0 {
                col.push(r - 1);
                val.push(off_x);
            }
            col.push(r);
            val.push(grid.x.kinetic_diagonal(i) + grid.y.kinetic_diagonal(j) + potential[r]);
            if i + 1 < nx {
                col.push(r + 1);
                val.push(off_x);
            }
            if j + 1 < ny {
                col.push(r + nx);
                val.push(off_y);
            }
            row_ptr.push(col.len());
        }
    }
    Ok(SparseOperator { dim, row_ptr, col, val })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::grid::{make_grid, OffsetRule};
    use crate::model::PotentialSpec;
    use crate::reduction::{reduce_to_2d, BoxDomain};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn caged_problem(side: f64) -> ReducedProblem2D {
        let spec = PotentialSpec::CagedOscillator {
            a: 1.0,
            b: 2.0,
            omega: 1.0,
            coupling_x: 0.5,
            coupling_y: 0.25,
        };
        reduce_to_2d(&spec, 3, 3, 0, 0, Some(BoxDomain::square(side).unwrap())).unwrap()
    }

    #[test]
    fn tridiagonal_pattern() {
        let op = SparseOperator::laplacian_1d(3, 1.0f64);
        assert_eq!(op.get(0, 0), 2.0);
        assert_eq!(op.get(0, 1), -1.0);
        assert_eq!(op.get(0, 2), 0.0);
        assert_eq!(op.nnz(), 7);
    }

    #[test]
    fn caged_diagonal_entries() {
        let p = caged_problem(3.0);
        let grid = make_grid(&p.domain, 10, 12, &OffsetRule::None).unwrap();
        let op = assemble(&p, &grid).unwrap();
        let (i, j) = (3, 7);
        let (x, y) = (grid.x.node(i), grid.y.node(j));
        let kinetic = 2.0 / grid.x.h.powi(2) + 2.0 / grid.y.h.powi(2);
        let expected = kinetic + x * x + 2.0 * y * y + 0.5 / (x * x) + 0.25 / (y * y);
        let r = grid.index(i, j);
        assert!((op.get(r, r) - expected).abs() < 1e-12 * expected);
        assert_eq!(op.get(r, r + 1), -1.0 / grid.x.h.powi(2));
        assert_eq!(op.get(r, r + grid.x.n), -1.0 / grid.y.h.powi(2));
        assert_eq!(op.max_asymmetry(), 0.0);
    }

    #[test]
    fn free_particle_mode_is_exact() {
        let free = PotentialSpec::Custom2D(crate::model::CustomPotential::new("free", |_: f64, _: f64| 0.0));
        let p = reduce_to_2d(&free, 3, 3, 0, 0, Some(BoxDomain::square(PI).unwrap())).unwrap();
        let grid = make_grid(&p.domain, 63, 63, &OffsetRule::None).unwrap();
        let op = assemble(&p, &grid).unwrap();
        let h = grid.x.h;
        let lambda = 2.0 * (2.0 - 2.0 * h.cos()) / (h * h);
        let v: Vec<f64> = (0..grid.len())
            .map(|r| {
                let (x, y) = grid.point(r);
                x.sin() * y.sin()
            })
            .collect();
        let hv = op.matvec(&v).unwrap();
        for (a, b) in hv.iter().zip(&v) {
            assert!((a - lambda * b).abs() < 1e-12);
        }
    }

    #[test]
    fn matvec_properties() {
        let p = caged_problem(4.0);
        let grid = make_grid(&p.domain, 60, 50, &OffsetRule::ShiftY).unwrap();
        let op = assemble(&p, &grid).unwrap();
        let n = op.dim();
        let mut e = vec![0.0; n];
        e[77] = 1.0;
        let col = op.matvec(&e).unwrap();
        for (r, v) in col.iter().enumerate() {
            assert_eq!(*v, op.get(r, 77));
        }
        assert!(op.matvec(&vec![0.0; n]).unwrap().iter().all(|&x| x == 0.0));
        assert!(matches!(op.matvec(&[1.0]), Err(Error::DimensionMismatch { .. })));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let lhs = dot(&u, &op.matvec(&v).unwrap());
        let rhs = dot(&op.matvec(&u).unwrap(), &v);
        assert!((lhs - rhs).abs() / lhs.abs() < 1e-13);
    }

    #[test]
    fn triplets_and_binary_round_trip() {
        let op = SparseOperator::from_triplets(3, &[(0, 0, 1.0), (2, 1, -0.5), (1, 2, -0.5), (0, 0, 1.0)]).unwrap();
        assert_eq!(op.get(0, 0), 2.0);
        assert_eq!(op.nnz(), 3);
        let mut buf = Vec::new();
        op.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 * (2 + 4 + 3 + 3));
        let back = SparseOperator::<f64>::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back, op);
        assert!(SparseOperator::<f64>::read_binary(&buf[..20]).is_err());
    }

    #[test]
    fn singular_node_reported() {
        let spec = PotentialSpec::Ttw {
            omega: 1.0,
            k: crate::model::RationalOrReal::integer(2).unwrap(),
            alpha: 0.5,
            beta: 0.5,
        };
        let p = reduce_to_2d(&spec, 1, 1, 0, 0, Some(BoxDomain::square(5.0).unwrap())).unwrap();
        let grid = make_grid(&p.domain, 20, 20, &OffsetRule::None).unwrap();
        assert!(matches!(assemble(&p, &grid), Err(Error::SingularPoint { .. })));
        let angles = p.base.singular_angles();
        let grid = make_grid(&p.domain, 20, 20, &OffsetRule::Avoid(angles)).unwrap();
        assert!(assemble(&p, &grid).is_ok());
    }

    #[test]
    fn gershgorin_encloses_diagonal() {
        let op = SparseOperator::diagonal_matrix(&[3.0, -1.0, 2.0]);
        assert_eq!(op.gershgorin(), (-1.0, 3.0));
    }
}
