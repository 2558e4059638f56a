//! Exact rational coefficients.
//!
//! Every coefficient in the crate is a [`Scalar`], an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. There is no
//! floating point anywhere.

use num::BigRational;

pub type Scalar = BigRational;

/// Rational `n/d`. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Scalar {
    BigRational::new(n.into(), d.into())
}

/// Integer `n` as a scalar.
pub fn qi(n: i64) -> Scalar {
    BigRational::from_integer(n.into())
}

/// `(-1)^k` as a scalar.
pub fn sign(k: u32) -> Scalar {
    if k % 2 == 0 {
        qi(1)
    } else {
        qi(-1)
    }
}
