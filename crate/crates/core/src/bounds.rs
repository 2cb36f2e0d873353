//! Lower and upper bounds on the worst-case error of a quadrature rule over
//! the unit ball of a weighted Hardy space on the strip `|Im z| < d`.
//!
//! Every value is a natural logarithm. The lower-bound evaluators depend only
//! on the node positions, so they take a node slice and accept any strictly
//! increasing node set, not just the rules built in [`crate::rules`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_log, integrate_reference, log_abs_tanh, log_add_exp, log_sum_exp, IntegratorOptions};
use crate::rules::{check_strictly_increasing, scaled_clenshaw_curtis, scaled_gauss_legendre, scaling_factor, gauss_hermite_rule, trapezoidal_rule, RuleKind};
use crate::weights::{StripDomain, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    Prop22,
    Thm31,
    Thm32,
    Cor41,
    Cor42,
    Cor43,
    SugiharaUniversal,
    UpperTail,
    UpperBernsteinRate,
    UpperTrapRate,
}

impl BoundKind {
    /// Whether the bound carries an unspecified multiplicative constant (set to 1).
    pub fn up_to_constant(&self) -> bool {
        matches!(
            self,
            BoundKind::SugiharaUniversal | BoundKind::UpperBernsteinRate | BoundKind::UpperTrapRate
        )
    }

    pub fn is_lower(&self) -> bool {
        !matches!(
            self,
            BoundKind::UpperTail | BoundKind::UpperBernsteinRate | BoundKind::UpperTrapRate
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "prop22" => BoundKind::Prop22,
            "thm31" => BoundKind::Thm31,
            "thm32" => BoundKind::Thm32,
            "cor41" => BoundKind::Cor41,
            "cor42" => BoundKind::Cor42,
            "cor43" => BoundKind::Cor43,
            "sugiharauniversal" | "sugihara" => BoundKind::SugiharaUniversal,
            "uppertail" | "tail" => BoundKind::UpperTail,
            "upperbernsteinrate" | "bernstein" => BoundKind::UpperBernsteinRate,
            "uppertraprate" | "traprate" => BoundKind::UpperTrapRate,
            other => return Err(Error::Parse(format!("unknown bound kind '{other}'"))),
        })
    }
}

/// One bound in natural-log scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    #[serde(with = "log_value_serde")]
    pub log_value: f64,
    pub up_to_constant: bool,
    pub meta: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(kind: BoundKind, log_value: f64) -> Self {
        BoundReport {
            kind,
            log_value,
            up_to_constant: kind.up_to_constant(),
            meta: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.meta.insert(key.to_string(), value);
        self
    }

    /// Relative error estimate of the underlying integral, 0 for closed forms.
    pub fn rel_error(&self) -> f64 {
        self.meta.get("rel_error").copied().unwrap_or(0.0)
    }
}

/// `-inf` travels as the string `"-inf"`, since JSON has no infinities.
mod log_value_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad log value '{s}'"))),
        }
    }
}

/// `ln((tanh 1)^4 / 30)`
fn log_prefactor_30() -> f64 {
    4.0 * 1f64.tanh().ln() - 30f64.ln()
}

/// `ln min{1, x^4}` for `x > 0`.
fn log_min1_pow4(log_x: f64) -> f64 {
    4.0 * log_x.min(0.0)
}

fn tanh_arg(domain: &StripDomain, u: f64) -> f64 {
    PI * u / (4.0 * domain.d())
}

/// `ln tanh²(π u/(4d))` summed over a set of offsets; saturated factors are skipped.
fn log_tanh_sq_sum<I: Iterator<Item = f64>>(domain: &StripDomain, offsets: I) -> f64 {
    let mut s = 0.0;
    for u in offsets {
        let t = tanh_arg(domain, u).abs();
        // beyond 20 the factor differs from 1 by under 1e-17
        if t < 20.0 {
            s += log_abs_tanh(t);
        }
    }
    2.0 * s
}

/// Logarithm of the fooling function `ω(x)∏tanh²(π(x−ξ_i)/(4d))`, which lies in
/// the unit ball and vanishes at every node.
pub fn fooling_log_integrand(nodes: &[f64], domain: &StripDomain, w: &WeightSpec, x: f64) -> f64 {
    w.log_weight(x) + log_tanh_sq_sum(domain, nodes.iter().map(|&xi| x - xi))
}

fn check_nodes(nodes: &[f64], min_len: usize) -> Result<()> {
    if nodes.len() < min_len {
        return Err(Error::invalid(
            "n",
            nodes.len() as f64,
            if min_len == 1 { "need at least one node" } else { "need at least two nodes" },
        ));
    }
    check_strictly_increasing(nodes)
}

/// Integral of the fooling function over the real line.
///
/// The core interval covers all nodes and the bulk of the weight, with panel
/// breaks at every node and every gap midpoint. The tails are then extended
/// until the weight's remaining mass is below `rel_tol/10` of the core value.
pub fn lower_bound_prop22(
    nodes: &[f64],
    domain: &StripDomain,
    w: &WeightSpec,
    rel_tol: f64,
) -> Result<BoundReport> {
    w.validate(domain)?;
    check_nodes(nodes, 1)?;
    let opts = IntegratorOptions::with_rel_tol(rel_tol);
    let f = |x: f64| fooling_log_integrand(nodes, domain, w, x);

    let reach = nodes.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let x0 = reach.max(w.integration_cutoff_log(1e-3f64.ln()));
    let mut breaks = Vec::with_capacity(2 * nodes.len() + 2);
    breaks.push(-x0);
    for (i, &xi) in nodes.iter().enumerate() {
        if i > 0 {
            breaks.push(0.5 * (nodes[i - 1] + xi));
        }
        breaks.push(xi);
    }
    breaks.push(x0);
    breaks.retain(|&b| b >= -x0 && b <= x0);
    breaks.dedup();

    let core = integrate_log(f, &breaks, &opts)?;
    let mut log_value = core.log_value;
    let mut log_err = core.log_abs_error;
    let mut panels = core.panels_used;

    let x1 = w.integration_cutoff_log(rel_tol.ln() + core.log_value - 10f64.ln());
    if x1 > x0 {
        for br in [[-x1, -x0], [x0, x1]] {
            let tail = integrate_log(f, &br, &opts)?;
            log_value = log_add_exp(log_value, tail.log_value);
            log_err = log_add_exp(log_err, tail.log_abs_error);
            panels += tail.panels_used;
        }
    }
    let cutoff = x1.max(x0);
    let log_rel_error = log_add_exp(log_err - log_value, (rel_tol / 10.0).ln());
    Ok(BoundReport::new(BoundKind::Prop22, log_value)
        .with("cutoff", cutoff)
        .with("panels", panels as f64)
        .with("rel_error", log_rel_error.exp()))
}

/// Sum over adjacent node pairs of the local fooling-function mass estimate.
pub fn lower_bound_thm31(nodes: &[f64], domain: &StripDomain, w: &WeightSpec) -> Result<BoundReport> {
    w.validate(domain)?;
    check_nodes(nodes, 2)?;
    let n = nodes.len();
    // left[i] = Σ_{j<i} ln tanh²(·(ξ_i − ξ_j)), right[k] = Σ_{j>k} ln tanh²(·(ξ_k − ξ_j))
    let left: Vec<f64> = (0..n)
        .map(|i| log_tanh_sq_sum(domain, nodes[..i].iter().map(|&xj| nodes[i] - xj)))
        .collect();
    let right: Vec<f64> = (0..n)
        .map(|k| log_tanh_sq_sum(domain, nodes[k + 1..].iter().map(|&xj| nodes[k] - xj)))
        .collect();
    let terms: Vec<f64> = (0..n - 1)
        .map(|i| {
            let (a, b) = (nodes[i], nodes[i + 1]);
            let gap = b - a;
            // the neighbour itself is excluded from each product
            let left_i = left[i];
            let right_k = right[i + 1];
            w.log_weight(a.abs().max(b.abs()))
                + gap.ln()
                + log_min1_pow4(tanh_arg(domain, gap).ln())
                + left_i
                + right_k
        })
        .collect();
    Ok(BoundReport::new(BoundKind::Thm31, log_prefactor_30() + log_sum_exp(&terms)))
}

/// Node-sum over `ω(max(|ξ_i|, |ξ_{i+1}|))`, in log scale.
fn log_weight_pair_sum(nodes: &[f64], w: &WeightSpec) -> f64 {
    let terms: Vec<f64> = nodes
        .windows(2)
        .map(|p| w.log_weight(p[0].abs().max(p[1].abs())))
        .collect();
    log_sum_exp(&terms)
}

/// Bound in terms of the minimum separation distance only.
pub fn lower_bound_thm32(nodes: &[f64], domain: &StripDomain, w: &WeightSpec) -> Result<BoundReport> {
    w.validate(domain)?;
    check_nodes(nodes, 2)?;
    let xi_min = nodes.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    let d = domain.d();
    let v = log_prefactor_30()
        + xi_min.ln()
        + log_min1_pow4(tanh_arg(domain, xi_min).ln())
        - 2.0 * PI * d / xi_min
        + log_weight_pair_sum(nodes, w);
    Ok(BoundReport::new(BoundKind::Thm32, v).with("xi_min", xi_min))
}

/// `ln((tanh 1)^4 / 15)`
fn log_prefactor_15() -> f64 {
    4.0 * 1f64.tanh().ln() - 15f64.ln()
}

/// Explicit lower bound for the tuned trapezoidal rule with `n = 2m + 1` nodes.
pub fn lower_bound_cor41(domain: &StripDomain, w: &WeightSpec, m: usize) -> Result<BoundReport> {
    let rule = trapezoidal_rule(domain, w, m)?;
    let d = domain.d();
    let n = (2 * m + 1) as f64;
    match *w {
        WeightSpec::SingleExp {
            alpha1, beta, rho, ..
        } => {
            if (m as f64) < rho {
                return Err(Error::PreconditionNotMet(format!(
                    "trapezoidal lower bound needs m >= rho, got m={m} rho={rho}"
                )));
            }
            let a = (2.0 * PI * d / beta.powf(rho)).powf(1.0 / (rho + 1.0));
            let b = a * (rho + 1.0) / rho.powf(rho / (rho + 1.0));
            let c = integrate_reference(|x| w.log_weight(x), a, b, 1e-12)?.value;
            let e = rho / (rho + 1.0);
            let log_x = (PI / (4.0 * d)).ln() + (2.0 * PI * d).ln() / (rho + 1.0) - e * (beta * n).ln();
            let v = alpha1.ln() + c.ln() + log_prefactor_15() + log_min1_pow4(log_x)
                - (PI * d * beta * n).powf(e);
            Ok(BoundReport::new(BoundKind::Cor41, v)
                .with("c_beta_rho", c)
                .with("xi_min", rule.meta().xi_min))
        }
        WeightSpec::DoubleExp {
            alpha1,
            beta2,
            gamma,
            ..
        } => {
            let h = rule.meta().xi_min;
            let lo = 2.0 * PI * d / (beta2 * std::f64::consts::E);
            if h > lo {
                return Err(Error::PreconditionNotMet(format!(
                    "containment fails at the lower end: xi_min={h} > 2*pi*d/(beta2*e)={lo}"
                )));
            }
            if (m as f64 + 1.0) * h < lo + 1.0 {
                return Err(Error::PreconditionNotMet(format!(
                    "containment fails at the upper end: (m+1)*xi_min={} < 2*pi*d/(beta2*e)+1={}",
                    (m as f64 + 1.0) * h,
                    lo + 1.0
                )));
            }
            let q = PI * d * gamma * n / beta2;
            if !(q > 1.0) {
                return Err(Error::PreconditionNotMet(format!(
                    "pi*d*gamma*n/beta2={q} must exceed 1"
                )));
            }
            let c = integrate_reference(|x| w.log_weight(x), lo, lo + 1.0, 1e-12)?.value;
            let log_x = (PI / (4.0 * d)).ln() + q.ln().ln() - (gamma * n).ln();
            let v = alpha1.ln() + c.ln() + log_prefactor_15() + log_min1_pow4(log_x)
                - PI * d * gamma * n / q.ln();
            Ok(BoundReport::new(BoundKind::Cor41, v)
                .with("c_beta1_beta2_gamma", c)
                .with("xi_min", h))
        }
    }
}

/// Mid-gap bound for scaled Gauss–Legendre or Clenshaw–Curtis on `[-T, T]`,
/// `T = scaling_factor(w, n, L)`.
///
/// For Clenshaw–Curtis the interior nodes are the `n − 2` zeros of a Chebyshev
/// polynomial of the second kind; the formula is applied to them and the two
/// endpoint factors `tanh²` are multiplied in exactly.
pub fn lower_bound_cor42(
    domain: &StripDomain,
    w: &WeightSpec,
    n: usize,
    l: f64,
    kind: RuleKind,
) -> Result<BoundReport> {
    w.validate(domain)?;
    let min_n = match kind {
        RuleKind::GaussLegendreScaled => 4,
        RuleKind::ClenshawCurtisScaled => 6,
        other => {
            return Err(Error::Parse(format!(
                "mid-gap bound applies to gl or cc rules, not {other}"
            )))
        }
    };
    if n < min_n {
        return Err(Error::PreconditionNotMet(format!(
            "mid-gap bound for {kind} needs n >= {min_n}, got n={n}"
        )));
    }
    let t = scaling_factor(w, n, l)?;
    let rule = match kind {
        RuleKind::GaussLegendreScaled => scaled_gauss_legendre(n, t)?,
        _ => scaled_clenshaw_curtis(n, t)?,
    };
    let x = rule.nodes();
    let i = n / 2 - 1; // zero-based index of ξ_{⌊n/2⌋}
    let (m, endpoint) = match kind {
        RuleKind::GaussLegendreScaled => (n as f64, 0.0),
        _ => {
            let e = log_tanh_sq_sum(domain, [x[i] - x[0], x[i + 1] - x[n - 1]].into_iter());
            ((n - 2) as f64, e)
        }
    };
    let d = domain.d();
    let v = log_prefactor_30()
        + w.log_weight(x[i])
        + (2.0 * t / (m + 1.0)).ln()
        + log_min1_pow4((PI * t / (2.0 * d * (m + 1.0))).ln())
        - 3.0 * m * PI * d / (t * (2.0 - 2f64.sqrt()).sqrt())
        + endpoint;
    Ok(BoundReport::new(BoundKind::Cor42, v).with("T", t))
}

/// Bound for the Gauss–Hermite rule with the node sum evaluated exactly.
pub fn lower_bound_cor43(domain: &StripDomain, w: &WeightSpec, n: usize) -> Result<BoundReport> {
    w.validate(domain)?;
    if n < 2 {
        return Err(Error::invalid("n", n as f64, "need n >= 2"));
    }
    let rule = gauss_hermite_rule(n)?;
    let d = domain.d();
    let s = (2.0 * n as f64 + 1.0).sqrt();
    let v = log_prefactor_30() + (PI / s).ln() + log_min1_pow4((PI * PI / (4.0 * d * s)).ln())
        - 2.0 * d * s
        + log_weight_pair_sum(rule.nodes(), w);
    Ok(BoundReport::new(BoundKind::Cor43, v))
}

/// Universal lower bound valid for every `n`-point rule, constant omitted.
pub fn universal_lower_sugihara(domain: &StripDomain, w: &WeightSpec, n: usize) -> Result<BoundReport> {
    w.validate(domain)?;
    if n < 2 {
        return Err(Error::invalid("n", n as f64, "need n >= 2"));
    }
    let d = domain.d();
    let nf = n as f64;
    let v = match *w {
        WeightSpec::SingleExp { beta, rho, .. } => {
            let e = rho / (rho + 1.0);
            nf.ln() / (rho + 1.0)
                - ((2.0 / (rho + 1.0)).powf(1.0 / rho) * 2.0 * PI * d * beta * nf).powf(e)
        }
        WeightSpec::DoubleExp { beta1, gamma, .. } => {
            let q = PI * d * gamma * nf / beta1;
            if !(q > 1.0) {
                return Err(Error::PreconditionNotMet(format!(
                    "pi*d*gamma*n/beta1={q} must exceed 1"
                )));
            }
            nf.ln().ln() - 2.0 * PI * d * gamma * nf / q.ln()
        }
    };
    Ok(BoundReport::new(BoundKind::SugiharaUniversal, v))
}

/// Truncation error from dropping `|x| > T`.
pub fn upper_bound_tail(domain: &StripDomain, w: &WeightSpec, t: f64) -> Result<BoundReport> {
    w.validate(domain)?;
    Ok(BoundReport::new(BoundKind::UpperTail, w.log_tail_mass_upper(t)?).with("T", t))
}

/// Interior convergence rate `r^{-2n}` (GL) or `r^{-n}` (CC) with `r = 1 + d/T`.
pub fn upper_bound_bernstein_rate(domain: &StripDomain, t: f64, n: usize, kind: RuleKind) -> Result<BoundReport> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("T", t, "must be positive and finite"));
    }
    let log_r = (domain.d() / t).ln_1p();
    let power = match kind {
        RuleKind::GaussLegendreScaled => 2.0 * n as f64,
        RuleKind::ClenshawCurtisScaled => n as f64,
        other => {
            return Err(Error::Parse(format!(
                "Bernstein rate applies to gl or cc rules, not {other}"
            )))
        }
    };
    Ok(BoundReport::new(BoundKind::UpperBernsteinRate, -power * log_r).with("r", log_r.exp()))
}

/// Trapezoidal upper rate, constant omitted.
pub fn upper_bound_trap_rate(domain: &StripDomain, w: &WeightSpec, n: usize) -> Result<BoundReport> {
    w.validate(domain)?;
    let d = domain.d();
    let nf = n as f64;
    let v = match *w {
        WeightSpec::SingleExp { beta, rho, .. } => -(PI * d * beta * nf).powf(rho / (rho + 1.0)),
        WeightSpec::DoubleExp { beta2, gamma, .. } => {
            let q = PI * d * gamma * nf / beta2;
            if !(q > 1.0) {
                return Err(Error::PreconditionNotMet(format!(
                    "pi*d*gamma*n/beta2={q} must exceed 1"
                )));
            }
            -PI * d * gamma * nf / q.ln()
        }
    };
    Ok(BoundReport::new(BoundKind::UpperTrapRate, v))
}
