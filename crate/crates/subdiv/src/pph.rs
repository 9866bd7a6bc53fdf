//! The harmonic-mean limiter and undivided difference operators.
//!
//! `pph(x, y)` is the gated harmonic mean `(xy/(x+y))(sgn(xy) + 1)`:
//! twice the harmonic mean when `x` and `y` share a sign, zero otherwise.
//! The zero gate is what blocks discontinuity-scale second differences
//! from leaking into a refinement stencil, since `|pph(x, y)| <= 2 min(|x|, |y|)`.

use crate::error::{Error, Result};

/// Gated harmonic mean of two finite reals.
///
/// Returns exactly 0 whenever `x * y <= 0`, including the 0/0 case.
/// `sgn(0)` counts as +1, but the gate short-circuits before that choice
/// can affect a returned value.
pub fn pph(x: f64, y: f64) -> f64 {
    debug_assert!(x.is_finite() && y.is_finite());
    if x * y <= 0.0 {
        return 0.0;
    }
    // sgn(xy) + 1 == 2 on this branch.
    2.0 * x * y / (x + y)
}

/// Undivided first difference: `out[k] = f[k+1] - f[k]`.
///
/// Output is one shorter than the input; the index origin shifts by +1
/// is the caller's concern (the grid module tracks origins).
pub fn first_difference(f: &[f64]) -> Result<Vec<f64>> {
    if f.len() < 2 {
        return Err(Error::TooShort {
            what: "first difference",
            needed: 2,
            got: f.len(),
        });
    }
    Ok(f.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Undivided second difference: `out[k] = f[k+2] - 2 f[k+1] + f[k]`.
///
/// Entry `k` of the output is `d2f` centred at input position `k + 1`,
/// so the output index origin shifts by +1 relative to the input.
pub fn second_difference(f: &[f64]) -> Result<Vec<f64>> {
    if f.len() < 3 {
        return Err(Error::TooShort {
            what: "second difference",
            needed: 3,
            got: f.len(),
        });
    }
    Ok(f.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect())
}

/// Sup norm of a sequence. Zero for an empty slice.
pub fn sup_norm(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}
