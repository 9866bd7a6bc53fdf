//! Experiment harnesses: regularity estimation, contraction and
//! perturbation measurements, approximation order, Gibbs metrics and a
//! stability probe.
//!
//! Every harness works on Shrink-refined data only, so no synthetic
//! boundary value ever enters an error metric. Reports carry a
//! `protocol` block (initial data, window, seed, norm convention) so the
//! numbers are auditable and bit-reproducible.

use crate::error::{Error, Result};
use crate::grid::{BoundaryPolicy, SampledCurve};
use crate::pph::{first_difference, second_difference, sup_norm};
use crate::samplers::Builtin;
use crate::schemes::{refine, refine_linear_shifted, refine_to_level, refine_values, SchemeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Audit trail attached to every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct Protocol {
    pub scheme: String,
    pub initial_data: String,
    pub window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub boundary: String,
    pub norm: String,
}

impl Protocol {
    fn new(scheme: SchemeKind, initial_data: String, window: usize) -> Self {
        Protocol {
            scheme: scheme.name().to_string(),
            initial_data,
            window,
            seed: None,
            boundary: "shrink".into(),
            norm: "sup over shrink-valid indices".into(),
        }
    }
}

/// Per-level Hoelder-exponent estimates.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub levels: Vec<u32>,
    /// `beta1[i]` estimates the exponent above 1 at `levels[i]`; absent
    /// when the difference norm vanished.
    pub beta1: Vec<Option<f64>>,
    /// `beta2[i]` estimates the exponent above 2.
    pub beta2: Vec<Option<f64>>,
    pub protocol: Protocol,
}

/// Grid-refinement error study for one sampler.
#[derive(Debug, Clone, Serialize)]
pub struct OrderReport {
    pub sampler: String,
    pub spacings: Vec<f64>,
    /// Sup error of one refinement step against the resampled function,
    /// one entry per spacing. Absent with fewer than one spacing.
    pub errors: Vec<f64>,
    /// `log2(E(h) / E(h/2))` for consecutive spacings.
    pub orders: Vec<f64>,
    /// The last consecutive-pair order; absent with fewer than 2 spacings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_order: Option<f64>,
    pub protocol: Protocol,
}

/// Overshoot and far-field error for one scheme on discontinuous data.
#[derive(Debug, Clone, Serialize)]
pub struct GibbsMetrics {
    pub scheme: String,
    /// Max excursion of refined values beyond the sampled data range.
    pub overshoot: f64,
    /// Sup error against the sampler at abscissae with `|x - xi| >= 4.5 h`.
    pub far_error: f64,
    pub monotone_across_jump: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GibbsReport {
    pub h: f64,
    pub levels: u32,
    pub jump_free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jump_location: Option<f64>,
    /// Abscissa interval flagged as the discontinuity zone.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_band: Option<(f64, f64)>,
    pub primary: GibbsMetrics,
    /// The linear shifted four-point scheme on the same data, for
    /// side-by-side comparison.
    pub linear_reference: GibbsMetrics,
    pub protocol: Protocol,
}

/// Perturbation amplification across levels.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub eps: f64,
    pub trials: u32,
    pub levels: u32,
    pub seed: u64,
    /// `per_level_max_ratio[j-1]` is the max over trials of
    /// `||S^j f - S^j g|| / ||f - g||`.
    pub per_level_max_ratio: Vec<f64>,
    pub c_emp: f64,
    /// Set when `||f - g||` was exactly zero (ratios reported as 0).
    pub zero_perturbation: bool,
    pub protocol: Protocol,
}

/// One Hoelder-exponent estimate,
/// `beta_k(j) = -log2(2^k ||D^{k+1} S^{j+1} f|| / ||D^{k+1} S^j f||)`,
/// with `D` the undivided forward difference. The first difference of
/// the scaled k-th-difference sequence used in the textbook formulation
/// differs from `D^{k+1}` of the raw data by `2^{kj}`, which cancels in
/// the ratio up to the explicit `2^k` factor.
///
/// Returns `None` when the denominator vanishes.
pub fn estimate_regularity(
    f0: &SampledCurve,
    scheme: SchemeKind,
    k: u8,
    j: u32,
) -> Result<Option<f64>> {
    if !(k == 1 || k == 2) {
        return Err(Error::Config(format!("difference order k must be 1 or 2, got {k}")));
    }
    let fj = refine_to_level(f0, scheme, BoundaryPolicy::Shrink, j)?;
    let fj1 = refine(&fj, scheme, BoundaryPolicy::Shrink)?;
    let num = diff_norm(fj1.values(), k + 1)?;
    let den = diff_norm(fj.values(), k + 1)?;
    Ok(beta_from_norms(k, num, den))
}

fn diff_norm(values: &[f64], order: u8) -> Result<f64> {
    let mut cur = first_difference(values)?;
    for _ in 1..order {
        cur = first_difference(&cur)?;
    }
    Ok(sup_norm(&cur))
}

fn beta_from_norms(k: u8, num: f64, den: f64) -> Option<f64> {
    if den == 0.0 || num == 0.0 {
        return None;
    }
    Some(-((1u32 << k) as f64 * num / den).log2())
}

/// Regularity sweep over `jmin..=jmax`, refining incrementally so each
/// level is computed once.
pub fn regularity_report(
    f0: &SampledCurve,
    scheme: SchemeKind,
    jmin: u32,
    jmax: u32,
    initial_data: &str,
) -> Result<RegularityReport> {
    if jmin > jmax {
        return Err(Error::Config(format!("jmin {jmin} exceeds jmax {jmax}")));
    }
    // Norms of D^2 and D^3 at each level jmin..=jmax+1.
    let mut norms2 = Vec::new();
    let mut norms3 = Vec::new();
    let mut cur = refine_to_level(f0, scheme, BoundaryPolicy::Shrink, jmin)?;
    for _ in jmin..=jmax + 1 {
        norms2.push(diff_norm(cur.values(), 2)?);
        norms3.push(diff_norm(cur.values(), 3)?);
        cur = refine(&cur, scheme, BoundaryPolicy::Shrink)?;
    }
    let levels: Vec<u32> = (jmin..=jmax).collect();
    let beta1 = levels
        .iter()
        .map(|j| {
            let i = (j - jmin) as usize;
            beta_from_norms(1, norms2[i + 1], norms2[i])
        })
        .collect();
    let beta2 = levels
        .iter()
        .map(|j| {
            let i = (j - jmin) as usize;
            beta_from_norms(2, norms3[i + 1], norms3[i])
        })
        .collect();
    Ok(RegularityReport {
        levels,
        beta1,
        beta2,
        protocol: Protocol::new(scheme, initial_data.to_string(), f0.len()),
    })
}

/// One-step contraction ratio `||d2 (S f)|| / ||d2 f||`.
pub fn measure_contraction(f: &[f64], scheme: SchemeKind) -> Result<f64> {
    if f.len() < 5 {
        return Err(Error::TooShort {
            what: "contraction measurement",
            needed: 5,
            got: f.len(),
        });
    }
    let den = sup_norm(&second_difference(f)?);
    if den == 0.0 {
        return Err(Error::UndefinedRatio("input second differences vanish"));
    }
    let out = refine_values(f, scheme)?;
    Ok(sup_norm(&second_difference(&out)?) / den)
}

/// One-step sup error against the resampled function, per spacing, with
/// consecutive-pair order fits.
pub fn approximation_order(
    sampler: &Builtin,
    domain: (f64, f64),
    scheme: SchemeKind,
    spacings: &[f64],
) -> Result<OrderReport> {
    let mut errors = Vec::with_capacity(spacings.len());
    let mut window = 0;
    for &h in spacings {
        let curve = sampler.sample(h, domain)?;
        window = window.max(curve.len());
        let refined = refine(&curve, scheme, BoundaryPolicy::Shrink)?;
        let mut err = 0.0f64;
        for (k, v) in refined.values().iter().enumerate() {
            let x = refined.abscissa(k);
            if x >= domain.0 && x <= domain.1 {
                err = err.max((v - sampler.eval(x)).abs());
            }
        }
        errors.push(err);
    }
    let orders: Vec<f64> = errors
        .windows(2)
        .filter(|w| w[0] > 0.0 && w[1] > 0.0)
        .map(|w| (w[0] / w[1]).log2())
        .collect();
    Ok(OrderReport {
        sampler: sampler.name(),
        spacings: spacings.to_vec(),
        fitted_order: orders.last().copied(),
        errors,
        orders,
        protocol: Protocol::new(scheme, sampler.name(), window),
    })
}

/// Locate a jump in sampled data: the largest first-difference gap,
/// provided it stands out from the rest (an isolated discontinuity, not
/// smooth variation). Returns the index of the left sample.
fn detect_jump(values: &[f64]) -> Option<usize> {
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let (k, max) = diffs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, v)| (i, *v))?;
    if max == 0.0 {
        return None;
    }
    let mut sorted = diffs.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    if max > 4.0 * median {
        Some(k)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn gibbs_metrics(
    refined: &SampledCurve,
    sampler: &Builtin,
    domain: (f64, f64),
    data_min: f64,
    data_max: f64,
    xi: f64,
    h: f64,
    scheme: SchemeKind,
) -> GibbsMetrics {
    let mut vmin = f64::INFINITY;
    let mut vmax = f64::NEG_INFINITY;
    let mut far_error = 0.0f64;
    let mut monotone = true;
    let mut prev_in_domain: Option<f64> = None;
    for (k, v) in refined.values().iter().enumerate() {
        let x = refined.abscissa(k);
        if x < domain.0 || x > domain.1 {
            continue;
        }
        vmin = vmin.min(*v);
        vmax = vmax.max(*v);
        if (x - xi).abs() >= 4.5 * h {
            far_error = far_error.max((v - sampler.eval(x)).abs());
        }
        if let Some(p) = prev_in_domain {
            if (v - p) * (data_max - data_min) < 0.0 && (x - xi).abs() < 4.5 * h {
                monotone = false;
            }
        }
        prev_in_domain = Some(*v);
    }
    let overshoot = (vmax - data_max).max(data_min - vmin).max(0.0);
    GibbsMetrics {
        scheme: scheme.name().to_string(),
        overshoot,
        far_error,
        monotone_across_jump: monotone,
    }
}

/// Refine discontinuous data and measure overshoot and far-field error,
/// for the chosen scheme and for the linear four-point reference.
///
/// Returns the report together with both refined curves so callers can
/// write them out for side-by-side plots.
pub fn gibbs_report(
    sampler: &Builtin,
    domain: (f64, f64),
    h: f64,
    scheme: SchemeKind,
    levels: u32,
) -> Result<(GibbsReport, Vec<(SchemeKind, SampledCurve)>)> {
    let data = sampler.sample(h, domain)?;
    let jump = detect_jump(data.values());
    let (data_min, data_max) = data
        .values()
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let x = data.abscissa(*k);
            x >= domain.0 && x <= domain.1
        })
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| {
            (lo.min(*v), hi.max(*v))
        });

    let primary_curve = refine_to_level(&data, scheme, BoundaryPolicy::Shrink, levels)?;
    let linear_curve =
        refine_to_level(&data, SchemeKind::LinearShifted4pt, BoundaryPolicy::Shrink, levels)?;

    let (jump_free, xi, near_band) = match jump {
        Some(k) => {
            let xi = (data.abscissa(k) + data.abscissa(k + 1)) / 2.0;
            (false, Some(xi), Some((xi - 4.5 * h, xi + 4.5 * h)))
        }
        None => (true, None, None),
    };

    // With no jump the far field is everything; metrics stay meaningful.
    let xi_eff = xi.unwrap_or(f64::NEG_INFINITY);
    let primary = gibbs_metrics(
        &primary_curve, sampler, domain, data_min, data_max, xi_eff, h, scheme,
    );
    let linear_reference = gibbs_metrics(
        &linear_curve, sampler, domain, data_min, data_max, xi_eff, h,
        SchemeKind::LinearShifted4pt,
    );

    let report = GibbsReport {
        h,
        levels,
        jump_free,
        jump_location: xi,
        near_band,
        primary,
        linear_reference,
        protocol: Protocol::new(scheme, sampler.name(), data.len()),
    };
    Ok((
        report,
        vec![(scheme, primary_curve), (SchemeKind::LinearShifted4pt, linear_curve)],
    ))
}

/// Seeded perturbation experiment: for each trial, add uniform noise in
/// `[-eps, eps]` and track `||S^j f - S^j g|| / ||f - g||` per level.
pub fn stability_probe(
    f: &[f64],
    eps: f64,
    scheme: SchemeKind,
    levels: u32,
    trials: u32,
    seed: u64,
) -> Result<StabilityReport> {
    if trials == 0 {
        return Err(Error::Config("stability probe needs at least one trial".into()));
    }
    if eps < 0.0 {
        return Err(Error::Config(format!("perturbation scale must be >= 0, got {eps}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_level = vec![0.0f64; levels as usize];
    let mut zero_perturbation = eps == 0.0;
    for _ in 0..trials {
        let g: Vec<f64> = if eps == 0.0 {
            f.to_vec()
        } else {
            f.iter().map(|v| v + rng.gen_range(-eps..=eps)).collect()
        };
        let d0: f64 = f.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if d0 == 0.0 {
            zero_perturbation = true;
            continue;
        }
        let mut vf = f.to_vec();
        let mut vg = g;
        for slot in per_level.iter_mut() {
            vf = refine_values(&vf, scheme)?;
            vg = refine_values(&vg, scheme)?;
            let gap: f64 = vf.iter().zip(&vg).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            *slot = slot.max(gap / d0);
        }
    }
    let c_emp = per_level.iter().fold(0.0f64, |m, v| m.max(*v));
    Ok(StabilityReport {
        eps,
        trials,
        levels,
        seed,
        per_level_max_ratio: per_level,
        c_emp,
        zero_perturbation,
        protocol: {
            let mut p = Protocol::new(scheme, format!("user data ({} values)", f.len()), f.len());
            p.seed = Some(seed);
            p
        },
    })
}

/// Sample a quadratic at the integers of `window`, refine once with the
/// nonlinear scheme and with the linear reference, and report the max
/// elementwise deviation. True iff the deviation is below
/// `1e-12 * (1 + ||samples||)`.
pub fn check_polynomial_reproduction(
    coeffs: [f64; 3],
    window: (i64, i64),
) -> Result<(bool, f64)> {
    if window.1 - window.0 < 3 {
        return Err(Error::TooShort {
            what: "polynomial reproduction window",
            needed: 4,
            got: (window.1 - window.0).max(0) as usize + 1,
        });
    }
    let samples: Vec<f64> = (window.0..=window.1)
        .map(|n| {
            let x = n as f64;
            (coeffs[0] * x + coeffs[1]) * x + coeffs[2]
        })
        .collect();
    let nl = refine_values(&samples, SchemeKind::Ppha)?;
    let lin = refine_linear_shifted(&samples)?;
    let dev = nl
        .iter()
        .zip(&lin)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((dev <= 1e-12 * (1.0 + sup_norm(&samples)), dev))
}
