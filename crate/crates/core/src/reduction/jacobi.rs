use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ThreeBodyConfig;
use crate::scalar::Scalar;

/// Centre-of-mass and Jacobi coordinates of three particles.
///
/// Each row holds the coefficients of one new coordinate in terms of the
/// particle positions `r_1, r_2, r_3` (applied componentwise in `d`
/// dimensions):
///
/// * `R_0 = (m_1 r_1 + m_2 r_2 + m_3 r_3) / √M`
/// * `r_1^J = √(m_1 m_2 / (m_1 + m_2)) (r_2 − r_1)`
/// * `r_2^J = √(m_3 (m_1 + m_2) / M) (r_3 − (m_1 r_1 + m_2 r_2) / (m_1 + m_2))`
///
/// With kinetic energy `−Σ_k Δ_k / m_k` the three rows are orthonormal in the
/// inverse-mass metric, which is what makes the kinetic energy diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct JacobiFrame<T: Scalar = f64> {
    pub masses: [T; 3],
    pub total_mass: T,
    pub cms_row: [T; 3],
    pub jacobi_rows: [[T; 3]; 2],
    pub d: u32,
}

pub fn build_jacobi<T: Scalar>(masses: [T; 3], d: u32) -> Result<JacobiFrame<T>> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    for (index, &m) in masses.iter().enumerate() {
        if !(m > T::zero()) || !m.is_finite() {
            return Err(Error::NonPositiveMass {
                index: index + 1,
                value: m.as_f64(),
            });
        }
    }
    let [m1, m2, m3] = masses;
    let m12 = m1 + m2;
    let total = m12 + m3;
    let sqrt_total = total.sqrt();
    let cms_row = [m1 / sqrt_total, m2 / sqrt_total, m3 / sqrt_total];
    let s1 = (m1 * m2 / m12).sqrt();
    let s2 = (m3 * m12 / total).sqrt();
    let jacobi_rows = [[-s1, s1, T::zero()], [-s2 * m1 / m12, -s2 * m2 / m12, s2]];
    Ok(JacobiFrame {
        masses,
        total_mass: total,
        cms_row,
        jacobi_rows,
        d,
    })
}

/// The frame used for the one-dimensional examples: `m_1 = m_2 = m_3 = 2`,
/// for which `r_1^J = r_12` on the ordered line.
pub fn equal_mass_line_frame<T: Scalar>() -> JacobiFrame<T> {
    build_jacobi([T::lit(2.0); 3], 1).expect("positive masses")
}

impl<T: Scalar> JacobiFrame<T> {
    /// `[cms_row, jacobi_row_1, jacobi_row_2]`.
    pub fn rows(&self) -> [[T; 3]; 3] {
        [self.cms_row, self.jacobi_rows[0], self.jacobi_rows[1]]
    }

    fn combine(row: &[T; 3], positions: [&[T]; 3]) -> Vec<T> {
        let dim = positions[0].len();
        (0..dim)
            .map(|c| row[0] * positions[0][c] + row[1] * positions[1][c] + row[2] * positions[2][c])
            .collect()
    }

    /// Vector Jacobi coordinates `(r_1^J, r_2^J)` of three positions.
    pub fn jacobi_vectors(&self, positions: [&[T]; 3]) -> Result<(Vec<T>, Vec<T>)> {
        let dim = self.d as usize;
        for p in positions {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        Ok((
            Self::combine(&self.jacobi_rows[0], positions),
            Self::combine(&self.jacobi_rows[1], positions),
        ))
    }

    /// Jacobi distances `(|r_1^J|, |r_2^J|)`.
    pub fn jacobi_distances(&self, positions: [&[T]; 3]) -> Result<(T, T)> {
        let (a, b) = self.jacobi_vectors(positions)?;
        let norm = |v: &[T]| v.iter().map(|&x| x * x).sum::<T>().sqrt();
        Ok((norm(&a), norm(&b)))
    }

    pub fn centre_of_mass(&self, positions: [&[T]; 3]) -> Vec<T> {
        Self::combine(&self.cms_row, positions)
    }

    /// Jacobi coordinates of an ordered configuration on the line
    /// (`r_1 ≤ r_2 ≤ r_3`), placing particle 1 at the origin.
    pub fn line_jacobi(&self, config: &ThreeBodyConfig<T>) -> (T, T) {
        let pos = [T::zero(), config.r12(), config.r13()];
        let dot = |row: &[T; 3]| row[0] * pos[0] + row[1] * pos[1] + row[2] * pos[2];
        (dot(&self.jacobi_rows[0]), dot(&self.jacobi_rows[1]))
    }
}

/// Inverse-mass Gram matrix `G_ab = Σ_k row_a(k) row_b(k) / m_k` of the
/// centre-of-mass and Jacobi rows; the kinetic energy reads
/// `−Σ_ab G_ab ∂_a ∂_b`. For a consistent frame `G` is the identity.
pub fn kinetic_gram<T: Scalar>(frame: &JacobiFrame<T>) -> [[T; 3]; 3] {
    let rows = frame.rows();
    let mut g = [[T::zero(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            g[a][b] = (0..3).map(|k| rows[a][k] * rows[b][k] / frame.masses[k]).sum();
        }
    }
    g
}

/// Ordered collinear configuration with `r13 = r12 + r23`.
pub fn ordered_line_config<T: Scalar>(r12: T, r23: T) -> Result<ThreeBodyConfig<T>> {
    for (name, value) in [("r12", r12), ("r23", r23)] {
        if !(value > T::zero()) {
            return Err(Error::NonPositiveDistance {
                name,
                value: value.as_f64(),
            });
        }
    }
    ThreeBodyConfig::new(r12, r12 + r23, r23)
}

/// Polar form `(ρ, θ)` of a pair of Jacobi distances.
pub fn polar_from_jacobi<T: Scalar>(r1: T, r2: T) -> (T, T) {
    (r1.hypot(r2), r2.atan2(r1))
}

/// Jacobi polar coordinates `(ρ_r, θ_r)` of an ordered collinear
/// configuration; `ρ_r² = (r_1^J)² + (r_2^J)²` and `θ_r ∈ (0, π/2)`.
pub fn jacobi_polar<T: Scalar>(config: &ThreeBodyConfig<T>, frame: &JacobiFrame<T>) -> Result<(T, T)> {
    let (r12, r13, r23) = config.as_tuple();
    let slack = T::lit(1e-12) * r13;
    if (r13 - (r12 + r23)).abs() > slack {
        return Err(Error::NotOrderedLine {
            r12: r12.as_f64(),
            r13: r13.as_f64(),
            r23: r23.as_f64(),
        });
    }
    let (x, y) = frame.line_jacobi(config);
    Ok(polar_from_jacobi(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_identity(g: &[[f64; 3]; 3], tol: f64) {
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((v - target).abs() <= tol, "G[{a}][{b}] = {v}");
            }
        }
    }

    #[test]
    fn equal_mass_two_gives_r12() {
        let frame = equal_mass_line_frame::<f64>();
        let cfg = ordered_line_config(1.3, 0.4).unwrap();
        let (r1, r2) = frame.line_jacobi(&cfg);
        assert!((r1 - 1.3).abs() < 1e-15);
        // direct substitution of m = 2 gives sqrt(1/3) (r13 + r23)
        let expected = (1.0f64 / 3.0).sqrt() * (cfg.r13() + cfg.r23());
        assert!((r2 - expected).abs() < 1e-15);
    }

    #[test]
    fn unit_masses_on_the_line() {
        let frame = build_jacobi([1.0, 1.0, 1.0], 1).unwrap();
        let (a, _) = frame.jacobi_vectors([&[0.5], &[2.0], &[3.0]]).unwrap();
        assert!((a[0] - 1.5 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gram_is_identity() {
        assert_identity(&kinetic_gram(&build_jacobi([1.0, 1.0, 1.0], 3).unwrap()), 1e-15);
        assert_identity(&kinetic_gram(&build_jacobi([1.0, 2.0, 3.0], 3).unwrap()), 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = [
                rng.gen_range(0.05..20.0),
                rng.gen_range(0.05..20.0),
                rng.gen_range(0.05..20.0),
            ];
            assert_identity(&kinetic_gram(&build_jacobi(m, 2).unwrap()), 1e-14);
        }
    }

    #[test]
    fn corrupted_row_detected() {
        let mut frame = build_jacobi([1.0f64, 2.0, 3.0], 1).unwrap();
        frame.jacobi_rows[1][2] *= 1.01;
        let g = kinetic_gram(&frame);
        assert!(g[0][2].abs() > 1e-3 || g[1][2].abs() > 1e-3 || (g[2][2] - 1.0).abs() > 1e-3);
    }

    #[test]
    fn rows_annihilate_translations() {
        let frame = build_jacobi([0.3, 1.7, 5.0], 1).unwrap();
        for row in frame.jacobi_rows {
            assert!(row.iter().sum::<f64>().abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_masses() {
        assert!(matches!(
            build_jacobi([1.0, 0.0, 1.0], 3),
            Err(Error::NonPositiveMass { index: 2, .. })
        ));
        assert!(matches!(build_jacobi([1.0, 1.0, 1.0], 0), Err(Error::ZeroDimension)));
    }

    #[test]
    fn ordered_line_configs() {
        assert_eq!(ordered_line_config(1.0, 2.0).unwrap().as_tuple(), (1.0, 3.0, 2.0));
        assert_eq!(ordered_line_config(0.5, 0.5).unwrap().r13(), 1.0);
        assert!(matches!(
            ordered_line_config(1.0, 0.0),
            Err(Error::NonPositiveDistance { name: "r23", .. })
        ));
    }

    #[test]
    fn polar_conversion() {
        let (rho, theta) = polar_from_jacobi(1.0f64, 1.0);
        assert!((rho - 2f64.sqrt()).abs() < 1e-15);
        assert!((theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        let (_, theta) = polar_from_jacobi(1.0f64, 1e-300);
        assert!(theta < 1e-299);
        let frame = equal_mass_line_frame::<f64>();
        let cfg = ordered_line_config(0.8, 1.9).unwrap();
        let (rho, theta) = jacobi_polar(&cfg, &frame).unwrap();
        let (r1, r2) = frame.line_jacobi(&cfg);
        assert!((rho * rho - (r1 * r1 + r2 * r2)).abs() < 1e-14);
        assert!(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2);
        let not_line = ThreeBodyConfig::new(1.0, 1.5, 1.0).unwrap();
        assert!(jacobi_polar(&not_line, &frame).is_err());
    }
}
