//! Single-exponential (SE) and double-exponential (DE) weight functions.
//!
//! A weight is specified by a two-sided envelope. Numerical work always uses
//! the canonical representative inside that envelope:
//!
//! * SE: `ω(x) = exp(-(β|x|)^ρ)`
//! * DE: `ω(x) = exp(-β₁ exp(γ|x|))`
//!
//! Both are even, take values in (0, 1] and decrease away from the origin.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Half-width `d` of the strip `{z : |Im z| < d}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripDomain {
    d: f64,
}

impl StripDomain {
    pub fn new(d: f64) -> Result<Self> {
        if d > 0.0 && d.is_finite() {
            Ok(StripDomain { d })
        } else {
            Err(Error::invalid("d", d, "strip half-width must be positive and finite"))
        }
    }

    pub fn d(&self) -> f64 {
        self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// `α₁ exp(-(β|x|)^ρ) ≤ ω(x) ≤ α₂ exp(-(β|x|)^ρ)`
    SingleExp {
        alpha1: f64,
        alpha2: f64,
        beta: f64,
        rho: f64,
    },
    /// `α₁ exp(-β₁ e^{γ|x|}) ≤ ω(x) ≤ α₂ exp(-β₂ e^{γ|x|})`
    DoubleExp {
        alpha1: f64,
        alpha2: f64,
        beta1: f64,
        beta2: f64,
        gamma: f64,
    },
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be positive and finite"))
    }
}

impl WeightSpec {
    pub fn se(beta: f64, rho: f64) -> Self {
        WeightSpec::SingleExp {
            alpha1: 1.0,
            alpha2: 1.0,
            beta,
            rho,
        }
    }

    pub fn de(beta1: f64, beta2: f64, gamma: f64) -> Self {
        WeightSpec::DoubleExp {
            alpha1: 1.0,
            alpha2: 1.0,
            beta1,
            beta2,
            gamma,
        }
    }

    pub fn is_single_exp(&self) -> bool {
        matches!(self, WeightSpec::SingleExp { .. })
    }

    pub fn alpha1(&self) -> f64 {
        match *self {
            WeightSpec::SingleExp { alpha1, .. } | WeightSpec::DoubleExp { alpha1, .. } => alpha1,
        }
    }

    pub fn alpha2(&self) -> f64 {
        match *self {
            WeightSpec::SingleExp { alpha2, .. } | WeightSpec::DoubleExp { alpha2, .. } => alpha2,
        }
    }

    /// Checks the envelope constraints and, for DE weights, that such a weight
    /// can exist on the strip at all (`γ ≤ π/(2d)`).
    pub fn validate(&self, domain: &StripDomain) -> Result<()> {
        let (a1, a2) = (self.alpha1(), self.alpha2());
        positive("alpha1", a1)?;
        positive("alpha2", a2)?;
        if a1 > a2 {
            return Err(Error::invalid("alpha1", a1, "must not exceed alpha2"));
        }
        // The canonical representative has unit envelope constants; it must sit
        // inside the declared envelope for bounds using alpha1/alpha2 to hold.
        if a1 > 1.0 {
            return Err(Error::invalid("alpha1", a1, "must be at most 1"));
        }
        if a2 < 1.0 {
            return Err(Error::invalid("alpha2", a2, "must be at least 1"));
        }
        match *self {
            WeightSpec::SingleExp { beta, rho, .. } => {
                positive("beta", beta)?;
                if !(rho >= 1.0 && rho.is_finite()) {
                    return Err(Error::invalid("rho", rho, "must be finite and at least 1"));
                }
            }
            WeightSpec::DoubleExp {
                beta1,
                beta2,
                gamma,
                ..
            } => {
                positive("beta1", beta1)?;
                positive("beta2", beta2)?;
                positive("gamma", gamma)?;
                if beta1 < beta2 {
                    return Err(Error::invalid("beta1", beta1, "must be at least beta2"));
                }
                let limit = FRAC_PI_2 / domain.d();
                if gamma > limit {
                    return Err(Error::NonexistentWeight { gamma, limit });
                }
            }
        }
        Ok(())
    }

    /// `ln ω(x)` of the canonical representative. Never `-inf` for finite `x`.
    pub fn log_weight(&self, x: f64) -> f64 {
        let ax = x.abs();
        let v = match *self {
            WeightSpec::SingleExp { beta, rho, .. } => -(beta * ax).powf(rho),
            WeightSpec::DoubleExp { beta1, gamma, .. } => -beta1 * (gamma * ax).exp(),
        };
        if v.is_finite() {
            v
        } else {
            -f64::MAX
        }
    }

    pub fn weight(&self, x: f64) -> f64 {
        self.log_weight(x).exp()
    }

    /// Natural log of the closed-form bound on `∫_{|x|>T} ω(x) dx` from the upper envelope.
    pub fn log_tail_mass_upper(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::invalid("T", t, "truncation point must be positive"));
        }
        let v = match *self {
            WeightSpec::SingleExp {
                alpha2, beta, rho, ..
            } => {
                // 2α₂ / (ρ β^ρ T^{ρ-1}) · exp(-(βT)^ρ)
                (2.0 * alpha2).ln() - rho.ln() - rho * beta.ln() - (rho - 1.0) * t.ln()
                    - (beta * t).powf(rho)
            }
            WeightSpec::DoubleExp {
                alpha2,
                beta2,
                gamma,
                ..
            } => {
                // 2α₂ / (β₂ γ e^{γT}) · exp(-β₂ e^{γT})
                (2.0 * alpha2).ln() - beta2.ln() - gamma.ln() - gamma * t - beta2 * (gamma * t).exp()
            }
        };
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }

    pub fn tail_mass_upper(&self, t: f64) -> Result<f64> {
        self.log_tail_mass_upper(t).map(f64::exp)
    }

    /// Smallest `X` with `ln tail_mass_upper(X) ≤ log_eps`, located on a doubling
    /// grid and then bisected to an absolute width of `1e-9`.
    pub fn integration_cutoff_log(&self, log_eps: f64) -> f64 {
        const START: f64 = 1.0 / (1u64 << 30) as f64;
        let tail = |x: f64| self.log_tail_mass_upper(x).unwrap_or(f64::INFINITY);
        if tail(START) <= log_eps {
            return START;
        }
        let mut hi = START;
        while tail(hi) > log_eps {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::MAX;
            }
        }
        let mut lo = hi * 0.5;
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if tail(mid) <= log_eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    pub fn integration_cutoff(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::invalid("eps", eps, "must lie in (0, 1)"));
        }
        Ok(self.integration_cutoff_log(eps.ln()))
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alphas = |f: &mut fmt::Formatter<'_>, a1: f64, a2: f64| {
            if a1 != 1.0 || a2 != 1.0 {
                write!(f, ",alpha1={a1},alpha2={a2}")
            } else {
                Ok(())
            }
        };
        match *self {
            WeightSpec::SingleExp {
                alpha1,
                alpha2,
                beta,
                rho,
            } => {
                write!(f, "se:beta={beta},rho={rho}")?;
                alphas(f, alpha1, alpha2)
            }
            WeightSpec::DoubleExp {
                alpha1,
                alpha2,
                beta1,
                beta2,
                gamma,
            } => {
                write!(f, "de:beta1={beta1},beta2={beta2},gamma={gamma}")?;
                alphas(f, alpha1, alpha2)
            }
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    /// `se:beta=<f>,rho=<f>[,alpha1=<f>,alpha2=<f>]` or
    /// `de:beta1=<f>,beta2=<f>,gamma=<f>[,alpha1=<f>,alpha2=<f>]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse(format!("weight spec '{s}': {msg}"));
        let (family, rest) = s
            .split_once(':')
            .ok_or_else(|| bad("expected '<se|de>:key=value,...'".into()))?;

        let mut fields: Vec<(&str, f64)> = Vec::new();
        for item in rest.split(',').filter(|t| !t.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("'{item}' is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| bad(format!("'{v}' is not a number")))?;
            fields.push((k.trim(), v));
        }
        let allowed: &[&str] = match family {
            "se" => &["beta", "rho", "alpha1", "alpha2"],
            "de" => &["beta1", "beta2", "gamma", "alpha1", "alpha2"],
            other => return Err(bad(format!("unknown family '{other}'"))),
        };
        for (k, _) in &fields {
            if !allowed.contains(k) {
                return Err(bad(format!("unknown key '{k}'")));
            }
        }
        let get = |key: &str| fields.iter().rev().find(|(k, _)| *k == key).map(|&(_, v)| v);
        let need = |key: &str| get(key).ok_or_else(|| bad(format!("missing '{key}'")));
        let alpha1 = get("alpha1").unwrap_or(1.0);
        let alpha2 = get("alpha2").unwrap_or(1.0);
        Ok(match family {
            "se" => WeightSpec::SingleExp {
                alpha1,
                alpha2,
                beta: need("beta")?,
                rho: need("rho")?,
            },
            _ => WeightSpec::DoubleExp {
                alpha1,
                alpha2,
                beta1: need("beta1")?,
                beta2: need("beta2")?,
                gamma: need("gamma")?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_reference;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn unit() -> StripDomain {
        StripDomain::new(1.0).unwrap()
    }

    #[test]
    fn nonexistence_boundary() {
        assert!(WeightSpec::de(1.0, 1.0, FRAC_PI_2).validate(&unit()).is_ok());
        let err = WeightSpec::de(1.0, 1.0, 1.6).validate(&unit()).unwrap_err();
        assert!(matches!(err, Error::NonexistentWeight { gamma, .. } if gamma == 1.6));
        assert_eq!(err.to_string(), "NonexistentWeight gamma=1.6 > pi/(2d)=1.5708");
    }

    #[test]
    fn parameter_region() {
        assert!(matches!(
            WeightSpec::se(1.0, 0.5).validate(&unit()),
            Err(Error::InvalidParameter { name: "rho", .. })
        ));
        assert!(matches!(
            WeightSpec::de(0.5, 1.0, 1.0).validate(&unit()),
            Err(Error::InvalidParameter { name: "beta1", .. })
        ));
        assert!(matches!(
            WeightSpec::se(-1.0, 2.0).validate(&unit()),
            Err(Error::InvalidParameter { name: "beta", .. })
        ));
        let bad_alpha = WeightSpec::SingleExp {
            alpha1: 0.9,
            alpha2: 0.5,
            beta: 1.0,
            rho: 1.0,
        };
        assert!(bad_alpha.validate(&unit()).is_err());
        assert!(StripDomain::new(0.0).is_err());
        assert!(StripDomain::new(f64::INFINITY).is_err());
    }

    #[test]
    fn log_weight_values() {
        assert_eq!(WeightSpec::se(1.0, 2.0).log_weight(2.0), -4.0);
        assert_eq!(WeightSpec::de(1.0, 1.0, 1.0).log_weight(0.0), -1.0);
        assert_eq!(WeightSpec::se(2.0, 1.0).log_weight(-3.0), -6.0);
        assert_eq!(WeightSpec::se(1.0, 1.0).log_weight(0.0), 0.0);
        assert_eq!(WeightSpec::de(1.0, 1.0, 1.0).log_weight(1e6), -f64::MAX);
    }

    #[test]
    fn tail_closed_forms() {
        let se = WeightSpec::se(1.0, 1.0);
        let t = se.tail_mass_upper(5.0).unwrap();
        assert!((t - 2.0 * (-5.0f64).exp()).abs() < 1e-16);
        assert!((t - 1.3476e-2).abs() < 1e-6);
        assert!(se.tail_mass_upper(40.0).unwrap() < 1e-16);

        let de = WeightSpec::de(1.0, 1.0, 1.0);
        let t = de.tail_mass_upper(2.0).unwrap();
        // mpmath: 2 e^{-2} e^{-e^2}
        assert!((t / 1.672_687_231_107_984e-4 - 1.0).abs() < 1e-13);

        assert!(matches!(se.tail_mass_upper(0.0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn cutoff_inverts_tail() {
        let se = WeightSpec::se(1.0, 1.0);
        let x = se.integration_cutoff(2.0 * (-5.0f64).exp()).unwrap();
        assert!((x - 5.0).abs() < 1e-8, "{x}");

        let de = WeightSpec::de(1.0, 1.0, 1.0);
        let x = de.integration_cutoff(1.67e-4).unwrap();
        assert!((x - 2.0).abs() < 1e-3, "{x}");

        let x = se.integration_cutoff(0.999).unwrap();
        assert!(x > 0.0 && x < 1.0);
        assert!(se.integration_cutoff(1.0).is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        let w: WeightSpec = "se:beta=1,rho=2".parse().unwrap();
        assert_eq!(w, WeightSpec::se(1.0, 2.0));
        let w: WeightSpec = "de:beta1=2,beta2=1,gamma=0.5,alpha1=0.5,alpha2=3".parse().unwrap();
        assert_eq!(w.alpha1(), 0.5);
        assert_eq!(w.to_string().parse::<WeightSpec>().unwrap(), w);
        assert!("xe:beta=1".parse::<WeightSpec>().is_err());
        assert!("se:beta=1".parse::<WeightSpec>().is_err());
        assert!("se:beta=1,rho=2,gamma=3".parse::<WeightSpec>().is_err());
    }

    fn arb_weight() -> impl Strategy<Value = WeightSpec> {
        prop_oneof![
            (0.2..3.0f64, 1.0..4.0f64, 0.1..1.0f64, 1.0..4.0f64).prop_map(|(beta, rho, a1, a2)| {
                WeightSpec::SingleExp {
                    alpha1: a1,
                    alpha2: a2,
                    beta,
                    rho,
                }
            }),
            (0.2..3.0f64, 0.2..1.0f64, 0.1..1.5f64, 1.0..4.0f64).prop_map(
                |(beta1, frac, gamma, a2)| WeightSpec::DoubleExp {
                    alpha1: 1.0,
                    alpha2: a2,
                    beta1,
                    beta2: beta1 * frac,
                    gamma,
                }
            ),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn tail_bound_dominates_numerical_tail(w in arb_weight()) {
            prop_assert!(w.validate(&unit()).is_ok());
            for &t in &[0.5, 1.0, 2.0, 4.0] {
                let bound = w.tail_mass_upper(t).unwrap();
                let x_big = w.integration_cutoff_log(w.log_tail_mass_upper(t).unwrap() - 40.0);
                if x_big <= t {
                    continue;
                }
                let r = integrate_reference(|x| w.log_weight(x), t, x_big, 1e-10).unwrap();
                let numeric = 2.0 * r.value;
                prop_assert!(bound >= numeric - 2.0 * r.abs_error_estimate,
                    "T={t}: bound {bound} < numeric {numeric}");
            }
        }

        #[test]
        fn even_and_monotone(w in arb_weight()) {
            let mut last = f64::INFINITY;
            for k in 0..=500 {
                let x = k as f64 * 0.1;
                let v = w.log_weight(x);
                prop_assert_eq!(v, w.log_weight(-x));
                prop_assert!(v <= last);
                prop_assert!(v <= 0.0);
                last = v;
            }
        }

        #[test]
        fn validate_matches_region(gamma in 0.01..3.0f64, d in 0.2..3.0f64) {
            let dom = StripDomain::new(d).unwrap();
            let ok = WeightSpec::de(1.0, 1.0, gamma).validate(&dom).is_ok();
            prop_assert_eq!(ok, gamma <= PI / (2.0 * d));
        }
    }
}
