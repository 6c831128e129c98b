use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SINGULAR_TOL;
use crate::reduction::BoxDomain;
use crate::scalar::Scalar;

pub const MIN_NODES: usize = 8;

/// Uniform interior nodes along one axis of `[0, length]`.
///
/// A regular axis has `h = length/(n+1)` and nodes `i h`, `i = 1..n`. An
/// offset axis is shifted by `h/2`: `h = length/(n + 1/2)`, nodes
/// `(i − 1/2) h`, and the wall at `0` is imposed through the antisymmetric
/// ghost value `u_0 = −u_1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Axis<T: Scalar = f64> {
    pub n: usize,
    pub h: T,
    pub length: T,
    pub offset: bool,
}

impl<T: Scalar> Axis<T> {
    pub fn new(length: T, n: usize, offset: bool) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::GridTooCoarse { n });
        }
        let cells = if offset {
            T::lit(n as f64 + 0.5)
        } else {
            T::lit(n as f64 + 1.0)
        };
        Ok(Self {
            n,
            h: length / cells,
            length,
            offset,
        })
    }

    /// Position of node `i` (zero-based).
    pub fn node(&self, i: usize) -> T {
        let shift = if self.offset { 0.5 } else { 1.0 };
        T::lit(i as f64 + shift) * self.h
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Diagonal of `−∂²` at node `i`.
    pub fn kinetic_diagonal(&self, i: usize) -> T {
        let inv = T::one() / (self.h * self.h);
        if self.offset && i == 0 {
            T::lit(3.0) * inv
        } else {
            T::lit(2.0) * inv
        }
    }
}

/// How the nodes are placed relative to singular rays `θ = const` through
/// the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", bound = "T: Scalar")]
pub enum OffsetRule<T: Scalar = f64> {
    /// Regular nodes on both axes.
    None,
    /// Offset `y` nodes.
    ShiftY,
    /// Regular nodes unless one falls on a listed ray; then offset `y`, then
    /// `x`, then both.
    Avoid(Vec<T>),
}

/// Tensor grid on the truncated quadrant; flat index `i + n_x j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Grid<T: Scalar = f64> {
    pub x: Axis<T>,
    pub y: Axis<T>,
}

impl<T: Scalar> Grid<T> {
    pub fn len(&self) -> usize {
        self.x.n * self.y.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + self.x.n * j
    }

    pub fn point(&self, index: usize) -> (T, T) {
        (self.x.node(index % self.x.n), self.y.node(index / self.x.n))
    }

    /// First singular ray hit by a node, if any.
    fn collision(&self, angles: &[T]) -> Option<T> {
        if angles.is_empty() {
            return None;
        }
        let tol = T::lit(SINGULAR_TOL);
        let xs = self.x.nodes();
        for j in 0..self.y.n {
            let y = self.y.node(j);
            for &x in &xs {
                let theta = y.atan2(x);
                if let Some(&a) = angles.iter().find(|&&a| (theta - a).abs() < tol) {
                    return Some(a);
                }
            }
        }
        None
    }
}

pub fn make_grid<T: Scalar>(domain: &BoxDomain<T>, nx: usize, ny: usize, rule: &OffsetRule<T>) -> Result<Grid<T>> {
    let build = |ox: bool, oy: bool| -> Result<Grid<T>> {
        Ok(Grid {
            x: Axis::new(domain.x_max, nx, ox)?,
            y: Axis::new(domain.y_max, ny, oy)?,
        })
    };
    match rule {
        OffsetRule::None => build(false, false),
        OffsetRule::ShiftY => build(false, true),
        OffsetRule::Avoid(angles) => {
            let mut last = T::zero();
            for (ox, oy) in [(false, false), (false, true), (true, false), (true, true)] {
                let grid = build(ox, oy)?;
                match grid.collision(angles) {
                    None => return Ok(grid),
                    Some(a) => last = a,
                }
            }
            Err(Error::SingularNodeUnavoidable { angle: last.as_f64() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn unit() -> BoxDomain {
        BoxDomain::square(1.0).unwrap()
    }

    #[test]
    fn regular_nodes() {
        let g = make_grid(&unit(), 9, 9, &OffsetRule::None).unwrap();
        assert!((g.x.h - 0.1).abs() < 1e-15);
        let nodes = g.x.nodes();
        assert!((nodes[0] - 0.1).abs() < 1e-15 && (nodes[8] - 0.9).abs() < 1e-15);
        assert_eq!(g.len(), 81);
        assert_eq!(g.point(g.index(2, 3)), (g.x.node(2), g.y.node(3)));
    }

    #[test]
    fn too_coarse() {
        assert!(matches!(
            make_grid(&unit(), 4, 9, &OffsetRule::None),
            Err(Error::GridTooCoarse { n: 4 })
        ));
    }

    #[test]
    fn diagonal_not_singular_at_k_one() {
        // k = 1 has no interior singular rays, so the diagonal is harmless
        let g = make_grid(&unit(), 9, 9, &OffsetRule::Avoid(vec![])).unwrap();
        assert!(!g.y.offset);
    }

    #[test]
    fn diagonal_ray_forces_offset() {
        let g = make_grid(&unit(), 20, 20, &OffsetRule::Avoid(vec![FRAC_PI_4])).unwrap();
        assert!(g.y.offset && !g.x.offset);
        assert!(g.collision(&[FRAC_PI_4]).is_none());
        let last = g.y.node(19);
        assert!((last + g.y.h - 1.0).abs() < 1e-14);
        assert!((g.y.node(0) - g.y.h / 2.0).abs() < 1e-15);
    }

    #[test]
    fn offset_kinetic_row() {
        let axis = Axis::new(1.0f64, 10, true).unwrap();
        assert!((axis.kinetic_diagonal(0) * axis.h * axis.h - 3.0).abs() < 1e-12);
        assert!((axis.kinetic_diagonal(1) * axis.h * axis.h - 2.0).abs() < 1e-12);
    }
}
