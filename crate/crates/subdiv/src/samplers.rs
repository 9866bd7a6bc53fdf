//! Built-in test functions and their sampling onto the midpoint grid.

use crate::error::{Error, Result};
use crate::grid::SampledCurve;

/// Extra samples kept on each side of the requested domain so that
/// Shrink refinement never eats into it. Each step trims one value on
/// the left and two on the right at the current spacing; the geometric
/// sums are bounded by 2h and 4h in level-0 units.
pub const DOMAIN_MARGIN: i64 = 6;

/// A named test function, evaluated on the `(n - 1/2) h` grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    /// Heaviside step, jump at 0.
    Step,
    /// `sin(pi x)` on `x <= 0.5`, `-sin(pi x)` beyond: one jump of size 2
    /// at `x = 0.5`.
    SinJump,
    /// `exp(x)`; second differences of its samples never change sign.
    Exp,
    /// `sin(pi x)`; curvature changes sign at the integers.
    SinPi,
    /// `a x^2 + b x + c`.
    Quadratic(f64, f64, f64),
    /// The unit impulse sequence on `width` entries (spacing 1); not a
    /// function of `x`, used by the regularity protocol.
    Delta { width: usize },
}

impl Builtin {
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        if let Some(args) = name.strip_prefix("quadratic(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!(
                    "quadratic sampler needs three coefficients, got `{name}`"
                )));
            }
            let mut c = [0.0; 3];
            for (i, p) in parts.iter().enumerate() {
                c[i] = p.trim().parse::<f64>().map_err(|_| {
                    Error::Config(format!("bad quadratic coefficient `{p}`"))
                })?;
            }
            return Ok(Builtin::Quadratic(c[0], c[1], c[2]));
        }
        if let Some(args) = name.strip_prefix("delta(").and_then(|r| r.strip_suffix(')')) {
            let width = args.trim().parse::<usize>().map_err(|_| {
                Error::Config(format!("bad delta width `{args}`"))
            })?;
            return Ok(Builtin::Delta { width });
        }
        match name {
            "step" => Ok(Builtin::Step),
            "sinjump" => Ok(Builtin::SinJump),
            "exp" => Ok(Builtin::Exp),
            "sinpi" => Ok(Builtin::SinPi),
            "delta" => Ok(Builtin::Delta { width: 0 }),
            other => Err(Error::Config(format!("unknown builtin sampler `{other}`"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Builtin::Step => "step".into(),
            Builtin::SinJump => "sinjump".into(),
            Builtin::Exp => "exp".into(),
            Builtin::SinPi => "sinpi".into(),
            Builtin::Quadratic(a, b, c) => format!("quadratic({a},{b},{c})"),
            Builtin::Delta { width } => format!("delta({width})"),
        }
    }

    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            Builtin::Step => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Point evaluation. Panics for `Delta`, which is index-based.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Builtin::Step => {
                if x >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::SinJump => {
                let s = (std::f64::consts::PI * x).sin();
                if x <= 0.5 {
                    s
                } else {
                    -s
                }
            }
            Builtin::Exp => x.exp(),
            Builtin::SinPi => (std::f64::consts::PI * x).sin(),
            Builtin::Quadratic(a, b, c) => (a * x + b) * x + c,
            Builtin::Delta { .. } => panic!("delta sampler has no point evaluation"),
        }
    }

    /// Sample onto the midpoint grid with spacing `h`, covering `domain`
    /// plus [`DOMAIN_MARGIN`] spacings on each side.
    pub fn sample(&self, h: f64, domain: (f64, f64)) -> Result<SampledCurve> {
        if let Builtin::Delta { width } = self {
            let w = if *width == 0 { 64 } else { *width };
            return delta_curve(w);
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Config(format!("spacing must be positive, got {h}")));
        }
        if domain.1 <= domain.0 || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::Config(format!(
                "domain must be an increasing interval, got ({}, {})",
                domain.0, domain.1
            )));
        }
        let n_min = (domain.0 / h).floor() as i64 - DOMAIN_MARGIN;
        let n_max = (domain.1 / h).ceil() as i64 + DOMAIN_MARGIN + 1;
        let values: Vec<f64> = (n_min..=n_max)
            .map(|n| self.eval((n as f64 - 0.5) * h))
            .collect();
        SampledCurve::new(values, h, n_min)
    }
}

/// Unit impulse on `width` entries, centred, spacing 1.
pub fn delta_curve(width: usize) -> Result<SampledCurve> {
    if width < 5 {
        return Err(Error::Config(format!(
            "delta window needs at least 5 entries, got {width}"
        )));
    }
    let mut values = vec![0.0; width];
    values[width / 2] = 1.0;
    SampledCurve::new(values, 1.0, -((width / 2) as i64))
}
