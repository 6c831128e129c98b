use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shape of a three-particle configuration, stored as its pair distances.
///
/// Any triangle is admissible; the collinear limit (one distance equal to the
/// sum of the other two) is the one-dimensional case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ThreeBodyConfig<T: Scalar = f64> {
    r12: T,
    r13: T,
    r23: T,
}

impl<T: Scalar> ThreeBodyConfig<T> {
    pub fn new(r12: T, r13: T, r23: T) -> Result<Self> {
        for (name, value) in [("r12", r12), ("r13", r13), ("r23", r23)] {
            if !(value > T::zero()) || !num_traits::Float::is_finite(value) {
                return Err(Error::NonPositiveDistance {
                    name,
                    value: value.as_f64(),
                });
            }
        }
        // collinear configurations sit exactly on the boundary of the inequality
        let slack = T::lit(1e-12) * (r12 + r13 + r23);
        let ok = r12 <= r13 + r23 + slack && r13 <= r12 + r23 + slack && r23 <= r12 + r13 + slack;
        if !ok {
            return Err(Error::TriangleInequality {
                r12: r12.as_f64(),
                r13: r13.as_f64(),
                r23: r23.as_f64(),
            });
        }
        Ok(Self { r12, r13, r23 })
    }

    /// Pair distances of three points in any dimension.
    pub fn from_positions(p1: &[T], p2: &[T], p3: &[T]) -> Result<Self> {
        let dist = |a: &[T], b: &[T]| -> T { a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt() };
        Self::new(dist(p1, p2), dist(p1, p3), dist(p2, p3))
    }

    pub fn r12(&self) -> T {
        self.r12
    }

    pub fn r13(&self) -> T {
        self.r13
    }

    pub fn r23(&self) -> T {
        self.r23
    }

    /// Distance between particles `i` and `j` (1-based labels).
    pub fn distance(&self, i: usize, j: usize) -> T {
        match (i.min(j), i.max(j)) {
            (1, 2) => self.r12,
            (1, 3) => self.r13,
            (2, 3) => self.r23,
            (a, b) if a == b => T::zero(),
            _ => panic!("particle labels are 1, 2, 3"),
        }
    }

    /// `(r12, r13, r23)`.
    pub fn as_tuple(&self) -> (T, T, T) {
        (self.r12, self.r13, self.r23)
    }
}

/// Relabeling of the three particles, stored as the images `σ(1), σ(2), σ(3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Permutation([usize; 3]);

impl Permutation {
    pub fn identity() -> Self {
        Self([1, 2, 3])
    }

    /// Transposition of particles `i` and `j`.
    pub fn swap(i: usize, j: usize) -> Option<Self> {
        let mut images = [1, 2, 3];
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return None;
        }
        images.swap(i - 1, j - 1);
        Some(Self(images))
    }

    /// The cycle `1 → 2 → 3 → 1`.
    pub fn cycle() -> Self {
        Self([2, 3, 1])
    }

    pub fn from_images(images: [usize; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if !(1..=3).contains(&i) || seen[i - 1] {
                return None;
            }
            seen[i - 1] = true;
        }
        Some(Self(images))
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// All six elements of the symmetric group on three labels.
    pub fn all() -> [Self; 6] {
        [
            Self([1, 2, 3]),
            Self([2, 1, 3]),
            Self([1, 3, 2]),
            Self([3, 2, 1]),
            Self([2, 3, 1]),
            Self([3, 1, 2]),
        ]
    }
}

/// Relabels the pair distances: the new `r_ij` is the old `r_σ(i)σ(j)`.
pub fn permute_particles<T: Scalar>(config: &ThreeBodyConfig<T>, sigma: Permutation) -> ThreeBodyConfig<T> {
    let d = |i: usize, j: usize| config.distance(sigma.image(i), sigma.image(j));
    ThreeBodyConfig {
        r12: d(1, 2),
        r13: d(1, 3),
        r23: d(2, 3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_relabels_distances() {
        let c = ThreeBodyConfig::<f64>::new(1.0, 3.0, 2.0).unwrap();
        let p = permute_particles(&c, Permutation::swap(1, 2).unwrap());
        assert_eq!(p.as_tuple(), (1.0, 2.0, 3.0));
    }

    #[test]
    fn identity_and_cycle_order() {
        let c = ThreeBodyConfig::<f64>::new(1.0, 3.0, 2.0).unwrap();
        assert_eq!(permute_particles(&c, Permutation::identity()), c);
        let once = permute_particles(&c, Permutation::cycle());
        assert_ne!(once, c);
        let thrice = permute_particles(&permute_particles(&once, Permutation::cycle()), Permutation::cycle());
        assert_eq!(thrice, c);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            ThreeBodyConfig::<f64>::new(0.0, 1.0, 1.0),
            Err(Error::NonPositiveDistance { name: "r12", .. })
        ));
        assert!(matches!(
            ThreeBodyConfig::<f64>::new(1.0, 5.0, 1.0),
            Err(Error::TriangleInequality { .. })
        ));
        // collinear is fine
        assert!(ThreeBodyConfig::<f64>::new(1.0, 3.0, 2.0).is_ok());
    }

    #[test]
    fn positions_give_distances() {
        let c = ThreeBodyConfig::<f64>::from_positions(&[0.0], &[1.0], &[3.0]).unwrap();
        assert_eq!(c.as_tuple(), (1.0, 3.0, 2.0));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_images([1, 1, 3]).is_none());
        assert!(Permutation::swap(0, 2).is_none());
        assert_eq!(Permutation::all().len(), 6);
    }
}
