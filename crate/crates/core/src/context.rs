//! Ambient coefficient rings: jet-truncated polynomials and Laurent windows.

use crate::error::AlgError;
use serde::Serialize;

/// Maximum number of anticommuting indeterminates (the xi mask is a `u32`).
pub const MAX_XI: usize = 32;

/// The ring a value lives in. Cross-context arithmetic is rejected; there
/// are no implicit coercions.
///
/// `Jet` is the polynomial ring in `m` commuting and `n` anticommuting
/// indeterminates truncated at total x-degree `degree`. `Laurent` is the
/// ring of Laurent polynomials in one commuting indeterminate with `n`
/// anticommuting ones; the window `[lo, hi]` bounds basis enumeration and
/// input validation, while arithmetic on finite Laurent polynomials stays
/// exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Context {
    Jet { m: usize, n: usize, degree: u32 },
    Laurent { n: usize, lo: i32, hi: i32 },
}

impl Context {
    pub fn jet(m: usize, n: usize, degree: u32) -> Self {
        assert!(n <= MAX_XI, "at most {MAX_XI} anticommuting indeterminates");
        Context::Jet { m, n, degree }
    }

    pub fn try_jet(m: usize, n: usize, degree: u32) -> Result<Self, AlgError> {
        if n > MAX_XI {
            return Err(AlgError::InvalidContext(format!(
                "n = {n} exceeds the limit of {MAX_XI} anticommuting indeterminates"
            )));
        }
        Ok(Context::Jet { m, n, degree })
    }

    pub fn laurent(n: usize, lo: i32, hi: i32) -> Self {
        Context::try_laurent(n, lo, hi).expect("valid Laurent window")
    }

    pub fn try_laurent(n: usize, lo: i32, hi: i32) -> Result<Self, AlgError> {
        if n > MAX_XI {
            return Err(AlgError::InvalidContext(format!(
                "n = {n} exceeds the limit of {MAX_XI} anticommuting indeterminates"
            )));
        }
        if !(lo <= 0 && 0 <= hi) {
            return Err(AlgError::InvalidContext(format!(
                "Laurent window [{lo}, {hi}] must contain 0"
            )));
        }
        Ok(Context::Laurent { n, lo, hi })
    }

    /// Number of commuting indeterminates.
    pub fn num_x(&self) -> usize {
        match self {
            Context::Jet { m, .. } => *m,
            Context::Laurent { .. } => 1,
        }
    }

    /// Number of anticommuting indeterminates.
    pub fn num_xi(&self) -> usize {
        match self {
            Context::Jet { n, .. } | Context::Laurent { n, .. } => *n,
        }
    }

    /// Jet truncation bound, if this is a jet context.
    pub fn jet_degree(&self) -> Option<u32> {
        match self {
            Context::Jet { degree, .. } => Some(*degree),
            Context::Laurent { .. } => None,
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, Context::Laurent { .. })
    }

    /// Whether an x-exponent vector is storable: within the truncation
    /// degree for jets, always for Laurent (window applies to enumeration
    /// and input validation, not to arithmetic).
    pub fn admits(&self, xexp: &[i32]) -> bool {
        match self {
            Context::Jet { degree, .. } => {
                xexp.iter().all(|&e| e >= 0)
                    && xexp.iter().map(|&e| e as i64).sum::<i64>() <= *degree as i64
            }
            Context::Laurent { .. } => true,
        }
    }

    /// Whether an x-exponent vector lies inside the declared window
    /// (nonnegative and within degree for jets, `[lo, hi]` for Laurent).
    pub fn in_window(&self, xexp: &[i32]) -> bool {
        match self {
            Context::Jet { .. } => self.admits(xexp),
            Context::Laurent { lo, hi, .. } => {
                xexp.len() == 1 && *lo <= xexp[0] && xexp[0] <= *hi
            }
        }
    }

    pub fn same_as(&self, other: &Context) -> Result<(), AlgError> {
        if self == other {
            Ok(())
        } else {
            Err(AlgError::ContextMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

impl std::fmt::Display for Context {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Context::Jet { m, n, degree } => write!(f, "O_{m}<{n}> jets of order {degree}"),
            Context::Laurent { n, lo, hi } => write!(f, "C((x))<{n}> window [{lo}, {hi}]"),
        }
    }
}
