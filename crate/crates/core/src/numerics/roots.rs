//! Zeros of orthogonal polynomials defined by a three-term recurrence.
//!
//! `p_{-1} = 0`, `p_0 = const`, `p_{k+1}(x) = (a_k x + b_k) p_k(x) - c_k p_{k-1}(x)`.
//! Evaluation carries a running log scale so that degrees in the hundreds can be
//! evaluated far outside the range where `p_n` fits in a double.

use crate::error::{Error, Result};

const RESCALE_THRESHOLD: f64 = 1e250;
const MAX_ITERATIONS: usize = 200;
const REL_TOL: f64 = 1e-14;

pub trait ThreeTermRecurrence {
    fn p0(&self) -> f64 {
        1.0
    }

    /// `(a_k, b_k, c_k)` for the step producing `p_{k+1}`.
    fn coefficients(&self, k: usize) -> (f64, f64, f64);
}

/// Legendre polynomials `P_n`, orthogonal on [-1, 1].
#[derive(Debug, Clone, Copy, Default)]
pub struct Legendre;

impl ThreeTermRecurrence for Legendre {
    fn coefficients(&self, k: usize) -> (f64, f64, f64) {
        let k = k as f64;
        ((2.0 * k + 1.0) / (k + 1.0), 0.0, k / (k + 1.0))
    }
}

/// Physicists' Hermite polynomials `H_n`: `H_{k+1} = 2x H_k - 2k H_{k-1}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hermite;

impl ThreeTermRecurrence for Hermite {
    fn coefficients(&self, k: usize) -> (f64, f64, f64) {
        (2.0, 0.0, 2.0 * k as f64)
    }
}

/// Hermite functions normalized against `e^{-x^2}`:
/// `ψ_k = H_k / sqrt(2^k k! sqrt(pi))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OrthonormalHermite;

impl ThreeTermRecurrence for OrthonormalHermite {
    fn p0(&self) -> f64 {
        std::f64::consts::PI.powf(-0.25)
    }

    fn coefficients(&self, k: usize) -> (f64, f64, f64) {
        let k = k as f64;
        ((2.0 / (k + 1.0)).sqrt(), 0.0, (k / (k + 1.0)).sqrt())
    }
}

/// Chebyshev polynomials of the second kind `U_n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChebyshevSecondKind;

impl ThreeTermRecurrence for ChebyshevSecondKind {
    fn coefficients(&self, _k: usize) -> (f64, f64, f64) {
        (2.0, 0.0, 1.0)
    }
}

/// `p_n(x)`, `p_{n-1}(x)` and `p_n'(x)`, each to be multiplied by `exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceValue {
    pub value: f64,
    pub previous: f64,
    pub derivative: f64,
    pub log_scale: f64,
}

impl RecurrenceValue {
    /// `ln |p_{n-1}(x)|`.
    pub fn log_abs_previous(&self) -> f64 {
        self.previous.abs().ln() + self.log_scale
    }

    /// `ln |p_n'(x)|`.
    pub fn log_abs_derivative(&self) -> f64 {
        self.derivative.abs().ln() + self.log_scale
    }
}

/// Runs the recurrence up to degree `n`, carrying derivatives alongside values.
pub fn evaluate<R: ThreeTermRecurrence + ?Sized>(rec: &R, n: usize, x: f64) -> RecurrenceValue {
    let mut p_prev = 0.0;
    let mut p = rec.p0();
    let mut d_prev = 0.0;
    let mut d = 0.0;
    let mut log_scale = 0.0;
    for k in 0..n {
        let (a, b, c) = rec.coefficients(k);
        let p_next = (a * x + b) * p - c * p_prev;
        let d_next = a * p + (a * x + b) * d - c * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        let big = p.abs().max(d.abs());
        if big > RESCALE_THRESHOLD {
            let s = 1.0 / big;
            p *= s;
            p_prev *= s;
            d *= s;
            d_prev *= s;
            log_scale += big.ln();
        }
    }
    RecurrenceValue {
        value: p,
        previous: p_prev,
        derivative: d,
        log_scale,
    }
}

fn sign_of(v: f64) -> i8 {
    // zeros count as positive so that a zero on a shared bracket edge is claimed once
    if v < 0.0 {
        -1
    } else {
        1
    }
}

/// Refines a single sign-changing bracket by Newton iteration with bisection fallback.
fn refine<R: ThreeTermRecurrence + ?Sized>(
    rec: &R,
    n: usize,
    index: usize,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    let violation = |reason| Error::BracketViolation {
        index,
        lo,
        hi,
        reason,
    };
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(violation("bracket is not a finite ordered interval"));
    }
    let f_lo = evaluate(rec, n, lo).value;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = evaluate(rec, n, hi).value;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let s_lo = sign_of(f_lo);
    if s_lo == sign_of(f_hi) {
        return Err(violation("no sign change across bracket"));
    }

    let (mut a, mut b) = (lo, hi);
    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_ITERATIONS {
        let ev = evaluate(rec, n, x);
        if ev.value == 0.0 {
            return Ok(x);
        }
        if sign_of(ev.value) == s_lo {
            a = x;
        } else {
            b = x;
        }
        let newton = x - ev.value / ev.derivative;
        let next = if newton.is_finite() && newton >= a && newton <= b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step <= REL_TOL * x.abs() || step <= f64::MIN_POSITIVE || b - a <= REL_TOL * x.abs() * 0.5
        {
            return Ok(x);
        }
    }
    Err(violation("tolerance not reached within 200 iterations"))
}

/// Returns the `n` zeros of `p_n`, one from each of the given disjoint, ascending brackets.
pub fn poly_roots_by_newton<R: ThreeTermRecurrence + ?Sized>(
    rec: &R,
    n: usize,
    brackets: &[(f64, f64)],
) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("n", 0.0, "degree must be at least 1"));
    }
    if brackets.len() != n {
        return Err(Error::invalid(
            "brackets",
            brackets.len() as f64,
            "need exactly one bracket per root",
        ));
    }
    for (i, w) in brackets.windows(2).enumerate() {
        if !(w[0].1 < w[1].0) {
            return Err(Error::BracketViolation {
                index: i + 1,
                lo: w[1].0,
                hi: w[1].1,
                reason: "brackets overlap or are out of order",
            });
        }
    }
    brackets
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| refine(rec, n, i, lo, hi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_degree_two() {
        let r = poly_roots_by_newton(&Legendre, 2, &[(-0.7, -0.5), (0.5, 0.7)]).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r[0] + s).abs() < 1e-15);
        assert!((r[1] - s).abs() < 1e-15);
    }

    #[test]
    fn hermite_degree_two() {
        let r = poly_roots_by_newton(&Hermite, 2, &[(-1.0, -0.5), (0.5, 1.0)]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] + s).abs() < 1e-15);
        assert!((r[1] - s).abs() < 1e-15);
    }

    #[test]
    fn degree_one_symmetric_bracket() {
        for rec in [&Legendre as &dyn ThreeTermRecurrence, &Hermite, &ChebyshevSecondKind] {
            let r = poly_roots_by_newton(rec, 1, &[(-0.3, 0.3)]).unwrap();
            assert_eq!(r, vec![0.0]);
        }
    }

    #[test]
    fn missing_sign_change_is_reported() {
        let r = poly_roots_by_newton(&Legendre, 2, &[(-0.5, -0.4), (0.5, 0.7)]);
        assert!(matches!(r, Err(Error::BracketViolation { index: 0, .. })));
    }

    #[test]
    fn overlapping_brackets_are_rejected() {
        let r = poly_roots_by_newton(&Legendre, 2, &[(-0.7, 0.1), (0.0, 0.7)]);
        assert!(matches!(r, Err(Error::BracketViolation { .. })));
    }

    #[test]
    fn rescaling_matches_unscaled_evaluation() {
        // H_30(3) ~ 1e22 evaluated directly versus with the orthonormal family.
        let direct = evaluate(&Hermite, 30, 3.0);
        assert_eq!(direct.log_scale, 0.0);
        let norm = evaluate(&OrthonormalHermite, 30, 3.0);
        // ψ_30 = H_30 / sqrt(2^30 30! sqrt(pi))
        let log_norm = 0.5 * (30.0 * 2f64.ln() + (1..=30).map(|k| (k as f64).ln()).sum::<f64>()
            + 0.5 * std::f64::consts::PI.ln());
        let lhs = norm.value.abs().ln() + norm.log_scale;
        let rhs = direct.value.abs().ln() - log_norm;
        assert!((lhs - rhs).abs() < 1e-12);

        // Degree 400 at x = 40 overflows without rescaling.
        let big = evaluate(&Hermite, 400, 40.0);
        assert!(big.log_scale > 0.0);
        assert!(big.value.is_finite() && big.derivative.is_finite());
    }

    #[test]
    fn chebyshev_u_roots() {
        // U_4 zeros: cos(k pi / 5)
        let exact: Vec<f64> = (1..=4)
            .rev()
            .map(|k| (k as f64 * std::f64::consts::PI / 5.0).cos())
            .collect();
        let brackets: Vec<(f64, f64)> = exact.iter().map(|&x| (x - 0.05, x + 0.05)).collect();
        let r = poly_roots_by_newton(&ChebyshevSecondKind, 4, &brackets).unwrap();
        for (a, b) in r.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
