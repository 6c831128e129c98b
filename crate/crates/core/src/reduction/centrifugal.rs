use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Inverse-square coefficient left behind by the radial reduction.
///
/// Gauging `−∂² − ((d−1)/x)∂ + L(L+d−2)/x²` by `x^((d−1)/2)` gives
/// `−∂² + c/x²` with `c = L(L+d−2) + (d−1)(d−3)/4`. The numerator is formed in
/// integers, so `c(1, 0) = c(3, 0) = 0` exactly.
///
/// For `d = 1` only `L ∈ {0, 1}` (even and odd sectors) are meaningful.
pub fn centrifugal_coefficient<T: Scalar>(d: u32, l: u32) -> Result<T> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if d == 1 && l > 1 {
        return Err(Error::InvalidAngularMomentum { d, l });
    }
    let (d, l) = (i64::from(d), i64::from(l));
    let quadruple = 4 * l * (l + d - 2) + (d - 1) * (d - 3);
    Ok(T::lit(quadruple as f64) / T::lit(4.0))
}
