//! Log-domain accumulation helpers.

use std::ops::Mul;

/// `ln Σ exp(t_i)` by max-subtraction. Empty input and all `-inf` input give `-inf`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    log_sum_exp_iter(terms.iter().copied())
}

/// Iterator form of [`log_sum_exp`]; walks the input twice.
pub fn log_sum_exp_iter<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = terms.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = iter.map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// `ln(e^a + e^b)` without forming either exponential.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if hi == f64::INFINITY {
        return f64::INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln |tanh t|`, accurate both near zero and in the saturated regime.
pub fn log_abs_tanh(t: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return f64::NEG_INFINITY;
    }
    if t < 0.5 {
        t.tanh().ln()
    } else {
        // tanh t = 1 - 2 e^{-2t} / (1 + e^{-2t})
        let q = (-2.0 * t).exp();
        (-2.0 * q / (1.0 + q)).ln_1p()
    }
}

/// A signed product carried as `sign * exp(log_magnitude)`.
///
/// `sign == 0` exactly when `log_magnitude == -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProduct {
    pub log_magnitude: f64,
    pub sign: i8,
}

impl LogProduct {
    pub const ONE: LogProduct = LogProduct {
        log_magnitude: 0.0,
        sign: 1,
    };

    pub const ZERO: LogProduct = LogProduct {
        log_magnitude: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogProduct {
                log_magnitude: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    /// Positive factor given directly by its logarithm.
    pub fn from_log(log_magnitude: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogProduct {
                log_magnitude,
                sign: 1,
            }
        }
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.log_magnitude.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }
}

impl Mul for LogProduct {
    type Output = LogProduct;

    fn mul(self, rhs: LogProduct) -> LogProduct {
        if self.is_zero() || rhs.is_zero() {
            return LogProduct::ZERO;
        }
        LogProduct {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}

impl std::iter::Product for LogProduct {
    fn product<I: Iterator<Item = LogProduct>>(iter: I) -> LogProduct {
        iter.fold(LogProduct::ONE, Mul::mul)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_equal_terms() {
        assert!((log_sum_exp(&[0.0, 0.0]) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn empty_mass() {
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn deep_negative_terms() {
        // mpmath: -1000 + ln(1 + e^{-0.5})
        let expected = -999.525_923_015_819_9;
        let got = log_sum_exp(&[-1000.0, -1000.5]);
        assert!((got - expected).abs() < 1e-12, "{got}");
    }

    #[test]
    fn log_tanh_matches_direct_evaluation() {
        for &t in &[1e-8f64, 0.1, 0.49, 0.5, 1.0, 3.0, -2.0] {
            let direct = t.tanh().abs().ln();
            assert!((log_abs_tanh(t) - direct).abs() <= 1e-14 * direct.abs().max(1e-300));
        }
        // saturated: ln tanh(20) = ln(1 - 2e^{-40}/(1+e^{-40})) ~ -2e^{-40}
        let expected = -2.0 * (-40.0f64).exp();
        assert!((log_abs_tanh(20.0) / expected - 1.0).abs() < 1e-12);
        assert_eq!(log_abs_tanh(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn log_product_sign_convention() {
        let p: LogProduct = [2.0, -3.0, 0.5]
            .iter()
            .map(|&x| LogProduct::from_value(x))
            .product();
        assert_eq!(p.sign, -1);
        assert!((p.value() + 3.0).abs() < 1e-14);
        let z = p * LogProduct::from_value(0.0);
        assert!(z.is_zero());
        assert_eq!(z.log_magnitude, f64::NEG_INFINITY);
    }

    proptest! {
        #[test]
        fn never_nan(terms in prop::collection::vec(
            prop_oneof![Just(f64::NEG_INFINITY), -1e6..1e6f64], 0..20)) {
            prop_assert!(!log_sum_exp(&terms).is_nan());
        }

        #[test]
        fn pairwise_add_agrees(a in -800.0..50.0f64, b in -800.0..50.0f64) {
            let lhs = log_add_exp(a, b);
            let rhs = log_sum_exp(&[a, b]);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
    }
}
