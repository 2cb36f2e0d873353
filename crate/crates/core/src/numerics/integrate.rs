//! Adaptive reference integrator for nonnegative integrands given in log form.
//!
//! Each panel is evaluated with the 15-point Gauss–Kronrod rule and its embedded
//! 7-point Gauss rule. The panel's largest log value is subtracted before
//! exponentiating, so panel contents are always stored as `(scale, mantissa)`
//! pairs and integrands far below the smallest normal double still accumulate
//! correctly in relative terms. Panels are refined globally: the panel with the
//! largest error estimate is bisected until the total error falls below
//! `rel_tol` times the total.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::logsum::log_sum_exp_iter;
use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], positive half, outermost first; the last is the center.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5] and the center.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub const DEFAULT_MAX_PANELS: usize = 20_000;

/// Result of [`integrate_reference`] in linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
}

/// Result of [`integrate_log`]; both fields are natural logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    pub log_value: f64,
    pub log_abs_error: f64,
    pub panels_used: usize,
}

impl LogIntegral {
    pub fn to_linear(&self) -> IntegrationResult {
        IntegrationResult {
            value: self.log_value.exp(),
            abs_error_estimate: self.log_abs_error.exp(),
            panels_used: self.panels_used,
        }
    }

    /// Relative error estimate `error / value`, or 0 for an empty integral.
    pub fn rel_error(&self) -> f64 {
        if self.log_abs_error == f64::NEG_INFINITY {
            0.0
        } else {
            (self.log_abs_error - self.log_value).exp()
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rel_tol: 1e-10,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

impl IntegratorOptions {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        IntegratorOptions {
            rel_tol,
            ..Default::default()
        }
    }
}

/// `∫_a^b exp(log_f(x)) dx` to relative tolerance `rel_tol`.
pub fn integrate_reference<F>(log_f: F, a: f64, b: f64, rel_tol: f64) -> Result<IntegrationResult>
where
    F: Fn(f64) -> f64,
{
    integrate_log(log_f, &[a, b], &IntegratorOptions::with_rel_tol(rel_tol)).map(|r| r.to_linear())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    log_value: f64,
    log_error: f64,
}

impl Panel {
    fn evaluate<F: Fn(f64) -> f64>(log_f: &F, a: f64, b: f64) -> Result<Panel> {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);

        let mut samples = [(f64::NEG_INFINITY, f64::NEG_INFINITY); 7];
        for (j, s) in samples.iter_mut().enumerate() {
            let dx = half * XGK[j];
            *s = (log_f(center - dx), log_f(center + dx));
        }
        let at_center = log_f(center);

        let mut max = at_center;
        for &(l, r) in &samples {
            max = max.max(l).max(r);
        }
        if samples.iter().any(|&(l, r)| l.is_nan() || r.is_nan()) || at_center.is_nan() {
            return Err(Error::invalid("log_f", f64::NAN, "integrand evaluated to NaN"));
        }
        if max == f64::NEG_INFINITY {
            return Ok(Panel {
                a,
                b,
                log_value: f64::NEG_INFINITY,
                log_error: f64::NEG_INFINITY,
            });
        }
        if max == f64::INFINITY {
            return Err(Error::invalid("log_f", max, "integrand is infinite"));
        }

        let fc = (at_center - max).exp();
        let mut kronrod = WGK[7] * fc;
        let mut gauss = WG[3] * fc;
        for (j, &(l, r)) in samples.iter().enumerate() {
            let pair = (l - max).exp() + (r - max).exp();
            kronrod += WGK[j] * pair;
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        let value = kronrod * half;
        let error = (kronrod - gauss).abs() * half;
        Ok(Panel {
            a,
            b,
            log_value: max + value.ln(),
            log_error: max + error.ln(),
        })
    }

    fn splittable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        mid > self.a && mid < self.b
    }
}

#[derive(Debug, Clone, Copy)]
struct Queued {
    log_error: f64,
    index: usize,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.log_error
            .total_cmp(&other.log_error)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Running totals kept in linear units of `exp(scale)`.
struct Totals {
    scale: f64,
    value: f64,
    error: f64,
}

impl Totals {
    fn rescale_to(&mut self, scale: f64) {
        if scale > self.scale {
            let factor = if self.scale == f64::NEG_INFINITY {
                0.0
            } else {
                (self.scale - scale).exp()
            };
            self.value *= factor;
            self.error *= factor;
            self.scale = scale;
        }
    }

    fn add(&mut self, p: &Panel, sign: f64) {
        self.rescale_to(p.log_value.max(p.log_error));
        if self.scale == f64::NEG_INFINITY {
            return;
        }
        self.value += sign * (p.log_value - self.scale).exp();
        self.error += sign * (p.log_error - self.scale).exp();
    }

    fn converged(&self, rel_tol: f64) -> bool {
        self.error <= rel_tol * self.value || self.scale == f64::NEG_INFINITY
    }
}

fn exact_totals(panels: &[Panel]) -> (f64, f64) {
    let v = log_sum_exp_iter(panels.iter().map(|p| p.log_value));
    let e = log_sum_exp_iter(panels.iter().map(|p| p.log_error));
    (v, e)
}

/// Integrates `exp(log_f)` over `[breaks[0], breaks[last]]`, starting from one
/// panel per consecutive pair of break points.
pub fn integrate_log<F>(log_f: F, breaks: &[f64], opts: &IntegratorOptions) -> Result<LogIntegral>
where
    F: Fn(f64) -> f64,
{
    if !(opts.rel_tol > 1e-15 && opts.rel_tol < 1e-2) {
        return Err(Error::invalid(
            "rel_tol",
            opts.rel_tol,
            "must lie in (1e-15, 1e-2)",
        ));
    }
    if breaks.len() < 2 {
        return Err(Error::InvalidInterval {
            a: breaks.first().copied().unwrap_or(f64::NAN),
            b: f64::NAN,
        });
    }
    for w in breaks.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
            return Err(Error::InvalidInterval { a: w[0], b: w[1] });
        }
    }

    let mut panels = Vec::with_capacity(breaks.len().max(64));
    let mut heap = BinaryHeap::new();
    let mut totals = Totals {
        scale: f64::NEG_INFINITY,
        value: 0.0,
        error: 0.0,
    };
    for w in breaks.windows(2) {
        let p = Panel::evaluate(&log_f, w[0], w[1])?;
        totals.add(&p, 1.0);
        heap.push(Queued {
            log_error: p.log_error,
            index: panels.len(),
        });
        panels.push(p);
    }

    let log_tol = opts.rel_tol.ln();
    let mut splits_since_sync = 0usize;
    loop {
        if totals.converged(opts.rel_tol) || splits_since_sync >= 1000 {
            let (v, e) = exact_totals(&panels);
            if e == f64::NEG_INFINITY || e <= log_tol + v {
                return Ok(LogIntegral {
                    log_value: v,
                    log_abs_error: e,
                    panels_used: panels.len(),
                });
            }
            totals = Totals {
                scale: v.max(e),
                value: (v - v.max(e)).exp(),
                error: (e - v.max(e)).exp(),
            };
            splits_since_sync = 0;
        }

        let Some(top) = heap.pop() else {
            break;
        };
        let worst = panels[top.index];
        if !worst.splittable() {
            // Floating-point resolution reached on the worst panel; nothing left to refine.
            break;
        }
        if panels.len() >= opts.max_panels {
            let (v, e) = exact_totals(&panels);
            return Err(Error::PanelLimitExceeded {
                panels: panels.len(),
                log_error: e,
                log_target: log_tol + v,
            });
        }

        let mid = 0.5 * (worst.a + worst.b);
        let left = Panel::evaluate(&log_f, worst.a, mid)?;
        let right = Panel::evaluate(&log_f, mid, worst.b)?;
        totals.add(&worst, -1.0);
        totals.add(&left, 1.0);
        totals.add(&right, 1.0);
        panels[top.index] = left;
        heap.push(Queued {
            log_error: left.log_error,
            index: top.index,
        });
        heap.push(Queued {
            log_error: right.log_error,
            index: panels.len(),
        });
        panels.push(right);
        splits_since_sync += 1;
    }

    let (v, e) = exact_totals(&panels);
    Ok(LogIntegral {
        log_value: v,
        log_abs_error: e,
        panels_used: panels.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kronrod_weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_degree_22_monomial() {
        // x^22 on [0, 1]; Kronrod-15 is exact to degree 22.
        let p = Panel::evaluate(&|x: f64| 22.0 * x.ln(), 0.0, 1.0).unwrap();
        assert!((p.log_value.exp() - 1.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn constant_one() {
        let r = integrate_reference(|_| 0.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.abs_error_estimate >= 0.0);
        assert!(r.panels_used >= 1);
    }

    #[test]
    fn decaying_exponential() {
        let r = integrate_reference(|x| -x, 0.0, 40.0, 1e-13).unwrap();
        assert!((r.value - (1.0 - (-40.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_secant_full_line() {
        let log_sech = |x: f64| {
            let a = x.abs();
            std::f64::consts::LN_2 - a - (-2.0 * a).exp().ln_1p()
        };
        let r = integrate_reference(log_sech, -40.0, 40.0, 1e-12).unwrap();
        // exact: 4 atan(e^40) - pi
        let exact = 4.0 * 40f64.exp().atan() - std::f64::consts::PI;
        assert!((r.value - exact).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn tiny_integrands_keep_relative_accuracy() {
        // e^{-800} * (1 + x) on [0, 1] = 1.5 e^{-800}, well below the smallest double.
        let r = integrate_log(
            |x: f64| -800.0 + x.ln_1p(),
            &[0.0, 1.0],
            &IntegratorOptions::with_rel_tol(1e-12),
        )
        .unwrap();
        assert!((r.log_value - (-800.0 + 1.5f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_log(|_| f64::NEG_INFINITY, &[0.0, 1.0], &IntegratorOptions::default())
            .unwrap();
        assert_eq!(r.log_value, f64::NEG_INFINITY);
        assert_eq!(r.rel_error(), 0.0);
    }

    #[test]
    fn invalid_intervals() {
        assert!(matches!(
            integrate_reference(|_| 0.0, 1.0, 1.0, 1e-8),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(matches!(
            integrate_reference(|_| 0.0, 0.0, f64::INFINITY, 1e-8),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn panel_budget_is_enforced() {
        // sqrt-type endpoint singularity with a tiny panel budget
        let opts = IntegratorOptions {
            rel_tol: 1e-14,
            max_panels: 8,
        };
        let r = integrate_log(|x: f64| -0.5 * x.ln(), &[0.0, 1.0], &opts);
        assert!(matches!(r, Err(Error::PanelLimitExceeded { .. })));
    }

    fn gaussian_bump(c: f64) -> impl Fn(f64) -> f64 {
        move |x: f64| -(x - c) * (x - c) + (3.0 * x).sin()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn splitting_invariance(a in -6.0..0.0f64, t in 0.05..0.95f64, w in 0.5..8.0f64, c in -2.0..2.0f64) {
            let b = a + w;
            let m = a + t * w;
            let f = gaussian_bump(c);
            let whole = integrate_reference(&f, a, b, 1e-12).unwrap();
            let l = integrate_reference(&f, a, m, 1e-12).unwrap();
            let r = integrate_reference(&f, m, b, 1e-12).unwrap();
            let slack = whole.abs_error_estimate + l.abs_error_estimate + r.abs_error_estimate
                + 4.0 * f64::EPSILON * whole.value;
            prop_assert!((whole.value - l.value - r.value).abs() <= slack);
        }

        #[test]
        fn monotone_under_domination(a in -4.0..0.0f64, w in 0.5..6.0f64, shift in 0.0..2.0f64) {
            let f = |x: f64| -x * x;
            let g = |x: f64| -x * x + shift * (1.0 + x.cos()) / 2.0;
            let fi = integrate_reference(f, a, a + w, 1e-11).unwrap();
            let gi = integrate_reference(g, a, a + w, 1e-11).unwrap();
            prop_assert!(fi.value <= gi.value + fi.abs_error_estimate + gi.abs_error_estimate);
            prop_assert!(fi.value >= -fi.abs_error_estimate);
        }
    }
}
