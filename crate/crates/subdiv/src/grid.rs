//! Finite sampled curves with refinement-level bookkeeping.
//!
//! A [`SampledCurve`] stores a finite window of values together with the
//! refinement level `j`, the level-0 spacing `h` and the integer index
//! `origin` of the first stored value. The abscissa of stored entry `k` is
//!
//! ```text
//! x = (origin + k - 1/2) * h * 2^(-j)
//! ```
//!
//! The midpoint offset makes every refinement child land exactly on the
//! quarter or three-quarter point of its parent interval, so multi-level
//! error measurement needs no per-level re-alignment. The origin is kept
//! as an integer and abscissae are recomputed on demand; nothing drifts.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// How stencils near the ends of a finite window are fed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Refine only where the full stencil exists. No synthetic values.
    #[default]
    Shrink,
    /// Replicate the end values.
    Constant,
    /// Continue the end slopes.
    LinearExtrapolate,
    /// Wrap indices around.
    Periodic,
}

impl std::str::FromStr for BoundaryPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shrink" => Ok(Self::Shrink),
            "constant" => Ok(Self::Constant),
            "linext" | "linear-extrapolate" => Ok(Self::LinearExtrapolate),
            "periodic" => Ok(Self::Periodic),
            other => Err(Error::Config(format!("unknown boundary policy `{other}`"))),
        }
    }
}

/// A finite sequence of samples at dyadic level `level`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    values: Vec<f64>,
    level: u32,
    base_spacing: f64,
    origin: i64,
}

impl SampledCurve {
    /// Level-0 curve. Values must be nonempty and finite, spacing positive.
    pub fn new(values: Vec<f64>, base_spacing: f64, origin: i64) -> Result<Self> {
        Self::with_level(values, 0, base_spacing, origin)
    }

    pub fn with_level(values: Vec<f64>, level: u32, base_spacing: f64, origin: i64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort {
                what: "sampled curve",
                needed: 1,
                got: 0,
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("curve value {v}")));
        }
        if !(base_spacing > 0.0 && base_spacing.is_finite()) {
            return Err(Error::Config(format!("base spacing must be positive, got {base_spacing}")));
        }
        Ok(Self {
            values,
            level,
            base_spacing,
            origin,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn base_spacing(&self) -> f64 {
        self.base_spacing
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Spacing at the current level, `h * 2^(-level)`.
    pub fn spacing(&self) -> f64 {
        self.base_spacing * (-(self.level as f64)).exp2()
    }

    /// Abscissa of stored entry `k`.
    pub fn abscissa(&self, k: usize) -> f64 {
        ((self.origin + k as i64) as f64 - 0.5) * self.spacing()
    }

    /// All abscissae, strictly increasing with constant gap `spacing()`.
    pub fn abscissae(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| self.abscissa(k)).collect()
    }

    /// Extend the window by `left` and `right` synthetic values per the
    /// policy. Shrink returns the curve unchanged. The origin is shifted
    /// so abscissae of the original entries are bit-identical.
    pub fn extend(&self, policy: BoundaryPolicy, left: usize, right: usize) -> Result<Self> {
        if policy == BoundaryPolicy::Shrink {
            return Ok(self.clone());
        }
        let n = self.values.len();
        if policy == BoundaryPolicy::Periodic && n < 2 {
            return Err(Error::Policy(
                "periodic extension needs at least 2 values".into(),
            ));
        }
        let mut out = Vec::with_capacity(n + left + right);
        for i in (1..=left).rev() {
            out.push(self.synthetic(policy, -(i as i64)));
        }
        out.extend_from_slice(&self.values);
        for i in 0..right {
            out.push(self.synthetic(policy, (n + i) as i64));
        }
        Ok(Self {
            values: out,
            level: self.level,
            base_spacing: self.base_spacing,
            origin: self.origin - left as i64,
        })
    }

    /// Synthetic value at (possibly out-of-range) local position `i`.
    fn synthetic(&self, policy: BoundaryPolicy, i: i64) -> f64 {
        let n = self.values.len() as i64;
        match policy {
            BoundaryPolicy::Shrink => unreachable!("shrink produces no synthetic values"),
            BoundaryPolicy::Constant => {
                if i < 0 {
                    self.values[0]
                } else {
                    self.values[(n - 1) as usize]
                }
            }
            BoundaryPolicy::LinearExtrapolate => {
                if self.values.len() == 1 {
                    return self.values[0];
                }
                if i < 0 {
                    let slope = self.values[1] - self.values[0];
                    self.values[0] + i as f64 * slope
                } else {
                    let slope = self.values[(n - 1) as usize] - self.values[(n - 2) as usize];
                    self.values[(n - 1) as usize] + (i - (n - 1)) as f64 * slope
                }
            }
            BoundaryPolicy::Periodic => self.values[i.rem_euclid(n) as usize],
        }
    }

    /// Successor curve holding `values` produced by one refinement step,
    /// with the origin already remapped by the caller.
    pub(crate) fn refined(&self, values: Vec<f64>, new_origin: i64) -> Self {
        Self {
            values,
            level: self.level + 1,
            base_spacing: self.base_spacing,
            origin: new_origin,
        }
    }
}
