//! One refinement step for each scheme, plus multi-level driving.
//!
//! Three stencil families live here:
//!
//! * the linear shifted four-point scheme (cubic interpolation evaluated
//!   at the 1/4 and 3/4 points of the refined interval),
//! * Chaikin's corner-cutting scheme,
//! * the nonlinear scheme obtained from the four-point rule by replacing
//!   the arithmetic mean of neighbouring second differences with the
//!   gated harmonic mean [`pph`].
//!
//! The nonlinear scheme also factors as Chaikin plus a perturbation of
//! the second differences, `S f = S_C f + F(d2 f)`; both routes are
//! implemented and tested against each other.

use crate::error::{Error, Result};
use crate::grid::{BoundaryPolicy, SampledCurve};
use crate::pph::pph;
use serde::{Deserialize, Serialize};

/// Scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// The linear four-point scheme with quarter shift.
    LinearShifted4pt,
    /// Chaikin corner cutting.
    Chaikin,
    /// Harmonic-mean nonlinear scheme.
    Ppha,
    /// The nonlinear case rules with the arithmetic mean substituted
    /// back in; extensionally equal to `LinearShifted4pt`.
    PphaArithmetic,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::LinearShifted4pt,
        SchemeKind::Chaikin,
        SchemeKind::Ppha,
        SchemeKind::PphaArithmetic,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::LinearShifted4pt => "linear4",
            SchemeKind::Chaikin => "chaikin",
            SchemeKind::Ppha => "ppha",
            SchemeKind::PphaArithmetic => "ppha-arith",
        }
    }

    /// Stencil reach (values needed left of the first parent, right of
    /// the last) for one step.
    pub fn reach(&self) -> (usize, usize) {
        match self {
            SchemeKind::Chaikin => (0, 1),
            _ => (1, 2),
        }
    }

    /// Minimum input length for one step.
    pub fn min_len(&self) -> usize {
        match self {
            SchemeKind::Chaikin => 2,
            _ => 4,
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear4" => Ok(SchemeKind::LinearShifted4pt),
            "chaikin" => Ok(SchemeKind::Chaikin),
            "ppha" => Ok(SchemeKind::Ppha),
            "ppha-arith" => Ok(SchemeKind::PphaArithmetic),
            other => Err(Error::Config(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Which case rule a parent stencil selects. Ties go to `FirstForm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilCase {
    FirstForm,
    SecondForm,
}

impl StencilCase {
    pub fn select(d2n: f64, d2n1: f64) -> Self {
        if d2n.abs() >= d2n1.abs() {
            StencilCase::FirstForm
        } else {
            StencilCase::SecondForm
        }
    }
}

fn check_len(f: &[f64], needed: usize, what: &'static str) -> Result<()> {
    if f.len() < needed {
        return Err(Error::TooShort {
            what,
            needed,
            got: f.len(),
        });
    }
    Ok(())
}

/// One step of the linear shifted four-point scheme. Children are emitted
/// for every parent with a full `n-1..n+2` stencil, so a length-N input
/// yields `2(N-3)` values.
pub fn refine_linear_shifted(f: &[f64]) -> Result<Vec<f64>> {
    check_len(f, 4, "linear four-point step")?;
    let mut out = Vec::with_capacity(2 * (f.len() - 3));
    for w in f.windows(4) {
        let (a, b, c, d) = (w[0], w[1], w[2], w[3]);
        out.push((-7.0 * a + 105.0 * b + 35.0 * c - 5.0 * d) / 128.0);
        out.push((-5.0 * a + 35.0 * b + 105.0 * c - 7.0 * d) / 128.0);
    }
    Ok(out)
}

/// One Chaikin step: children at the 1/4 and 3/4 points of each interval.
pub fn refine_chaikin(f: &[f64]) -> Result<Vec<f64>> {
    check_len(f, 2, "chaikin step")?;
    let mut out = Vec::with_capacity(2 * (f.len() - 1));
    for w in f.windows(2) {
        out.push((3.0 * w[0] + w[1]) / 4.0);
        out.push((w[0] + 3.0 * w[1]) / 4.0);
    }
    Ok(out)
}

/// One step of the nonlinear case rules with a pluggable mean.
///
/// The second-form point coefficients are the expansion of the
/// Chaikin-plus-perturbation form `3/4 f_n + 1/4 f_{n+1} - d2f_n/64 -
/// 5 m/64` (and its mirror); with the arithmetic mean both forms
/// collapse to the linear four-point rule.
fn refine_cases(f: &[f64], mean: impl Fn(f64, f64) -> f64) -> Result<Vec<f64>> {
    check_len(f, 4, "four-point case-rule step")?;
    let mut out = Vec::with_capacity(2 * (f.len() - 3));
    for w in f.windows(4) {
        let (fm1, fn0, fp1, fp2) = (w[0], w[1], w[2], w[3]);
        let d2n = fp1 - 2.0 * fn0 + fm1;
        let d2n1 = fp2 - 2.0 * fp1 + fn0;
        let m = mean(d2n, d2n1);
        match StencilCase::select(d2n, d2n1) {
            StencilCase::FirstForm => {
                out.push((49.0 * fn0 + 14.0 * fp1 + fp2 - 7.0 * m) / 64.0);
                out.push((15.0 * fn0 + 50.0 * fp1 - fp2 - 5.0 * m) / 64.0);
            }
            StencilCase::SecondForm => {
                out.push((-fm1 + 50.0 * fn0 + 15.0 * fp1 - 5.0 * m) / 64.0);
                out.push((fm1 + 14.0 * fn0 + 49.0 * fp1 - 7.0 * m) / 64.0);
            }
        }
    }
    Ok(out)
}

/// One step of the harmonic-mean nonlinear scheme.
pub fn refine_ppha(f: &[f64]) -> Result<Vec<f64>> {
    refine_cases(f, pph)
}

/// The case rules with the arithmetic mean; equals [`refine_linear_shifted`].
pub fn refine_ppha_arithmetic(f: &[f64]) -> Result<Vec<f64>> {
    refine_cases(f, |x, y| (x + y) / 2.0)
}

/// The perturbation `F` such that `S f = S_C f + F(d2 f)`.
///
/// Input is the second-difference sequence; pair `(d2[k], d2[k+1])`
/// feeds the children of parent interval `k`, so a length-M input yields
/// `2(M-1)` values.
pub fn ppha_perturbation(d2: &[f64]) -> Result<Vec<f64>> {
    check_len(d2, 2, "perturbation of second differences")?;
    let mut out = Vec::with_capacity(2 * (d2.len() - 1));
    for w in d2.windows(2) {
        let (a, b) = (w[0], w[1]);
        let p = pph(a, b);
        match StencilCase::select(a, b) {
            StencilCase::FirstForm => {
                out.push((b - 7.0 * p) / 64.0);
                out.push((-b - 5.0 * p) / 64.0);
            }
            StencilCase::SecondForm => {
                out.push((-a - 5.0 * p) / 64.0);
                out.push((a - 7.0 * p) / 64.0);
            }
        }
    }
    Ok(out)
}

/// One raw refinement step for any scheme.
pub fn refine_values(f: &[f64], scheme: SchemeKind) -> Result<Vec<f64>> {
    match scheme {
        SchemeKind::LinearShifted4pt => refine_linear_shifted(f),
        SchemeKind::Chaikin => refine_chaikin(f),
        SchemeKind::Ppha => refine_ppha(f),
        SchemeKind::PphaArithmetic => refine_ppha_arithmetic(f),
    }
}

/// One refinement step with level and origin bookkeeping.
///
/// Non-Shrink policies first extend the window by the scheme's stencil
/// reach, so every original interval gets children. Under Shrink a
/// four-point scheme maps origin to `2(origin + 1)`; Chaikin to
/// `2 * origin`.
pub fn refine(curve: &SampledCurve, scheme: SchemeKind, policy: BoundaryPolicy) -> Result<SampledCurve> {
    let (left, right) = scheme.reach();
    let extended = curve.extend(policy, left, right)?;
    if extended.len() < scheme.min_len() {
        return Err(Error::Exhausted {
            level: curve.level(),
            needed: scheme.min_len(),
            got: extended.len(),
        });
    }
    let values = refine_values(extended.values(), scheme)?;
    let new_origin = 2 * (extended.origin() + left as i64);
    Ok(curve.refined(values, new_origin))
}

/// Apply [`refine`] `levels` times.
pub fn refine_to_level(
    curve: &SampledCurve,
    scheme: SchemeKind,
    policy: BoundaryPolicy,
    levels: u32,
) -> Result<SampledCurve> {
    let mut cur = curve.clone();
    for _ in 0..levels {
        cur = refine(&cur, scheme, policy)?;
    }
    Ok(cur)
}
