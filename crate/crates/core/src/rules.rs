//! Quadrature rules `A_n(f) = Σ w_i f(ξ_i)` on the real line.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::roots::{evaluate, Legendre, OrthonormalHermite};
use crate::numerics::{log_sum_exp, poly_roots_by_newton};
use crate::weights::{StripDomain, WeightSpec};

/// Largest Gauss–Hermite rule we build; beyond it the tail weights leave double range.
pub const GAUSS_HERMITE_MAX_N: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Trapezoidal,
    GaussLegendreScaled,
    ClenshawCurtisScaled,
    GaussHermite,
}

impl RuleKind {
    pub fn tag(&self) -> &'static str {
        match self {
            RuleKind::Trapezoidal => "trap",
            RuleKind::GaussLegendreScaled => "gl",
            RuleKind::ClenshawCurtisScaled => "cc",
            RuleKind::GaussHermite => "gh",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trap" => Ok(RuleKind::Trapezoidal),
            "gl" => Ok(RuleKind::GaussLegendreScaled),
            "cc" => Ok(RuleKind::ClenshawCurtisScaled),
            "gh" => Ok(RuleKind::GaussHermite),
            other => Err(Error::Parse(format!("unknown rule kind '{other}'"))),
        }
    }
}

/// Construction metadata.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RuleMeta {
    /// Half node count of the trapezoidal rule (`n = 2m + 1`).
    pub m: Option<usize>,
    /// Minimum gap between adjacent nodes (0 for a single node).
    pub xi_min: f64,
    /// Half-width of the interval for the scaled rules.
    pub t: Option<f64>,
    /// Scaling constant used to derive `t`, when known.
    pub l: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
    meta: RuleMeta,
}

fn min_gap(nodes: &[f64]) -> f64 {
    nodes
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Makes `nodes[i] == -nodes[n-1-i]` and `weights[i] == weights[n-1-i]` exactly.
fn symmetrize(nodes: &mut [f64], log_weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let lw = 0.5 * (log_weights[i] + log_weights[j]);
        log_weights[i] = lw;
        log_weights[j] = lw;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

impl QuadratureRule {
    fn build(kind: RuleKind, nodes: Vec<f64>, log_weights: Vec<f64>, mut meta: RuleMeta) -> Self {
        let weights = log_weights.iter().map(|lw| lw.exp()).collect();
        meta.xi_min = if nodes.len() > 1 { min_gap(&nodes) } else { 0.0 };
        QuadratureRule {
            kind,
            nodes,
            weights,
            log_weights,
            meta,
        }
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `ln |w_i|`; for Gauss–Hermite these are computed directly and never underflow.
    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn meta(&self) -> &RuleMeta {
        &self.meta
    }

    /// `Σ w_i f(ξ_i)`, compensated.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        neumaier_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)))
    }

    /// `Σ w_i exp(log_f(ξ_i))` with each term formed in log space; requires positive weights.
    pub fn apply_log<F: Fn(f64) -> f64>(&self, log_f: F) -> f64 {
        neumaier_sum(
            self.nodes
                .iter()
                .zip(&self.log_weights)
                .map(|(&x, &lw)| (lw + log_f(x)).exp()),
        )
    }

    /// `ln Σ w_i exp(log_f(ξ_i))`, requires positive weights.
    pub fn log_apply_log<F: Fn(f64) -> f64>(&self, log_f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.log_weights)
            .map(|(&x, &lw)| lw + log_f(x))
            .collect();
        log_sum_exp(&terms)
    }

    /// CSV with header `index,node,weight`, 1-based index, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "node", "weight"])?;
        for (i, (x, wt)) in self.nodes.iter().zip(&self.weights).enumerate() {
            w.write_record([
                (i + 1).to_string(),
                format_sig17(*x),
                format_sig17(*wt),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn neumaier_sum<I: Iterator<Item = f64>>(terms: I) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for t in terms {
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    sum + comp
}

/// Seventeen significant digits, enough to round-trip any double; `-inf`/`inf` spelled out.
pub fn format_sig17(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub(crate) fn check_strictly_increasing(nodes: &[f64]) -> Result<()> {
    if let Some(&bad) = nodes.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid("node", bad, "nodes must be finite"));
    }
    for w in nodes.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::invalid(
                "node",
                w[1],
                "nodes must be strictly increasing",
            ));
        }
    }
    Ok(())
}

/// Equispaced rule `ξ_i = i·ξ_min`, `i = -m..=m`, all weights `ξ_min`, with the
/// spacing tuned to the decay of `w`.
pub fn trapezoidal_rule(domain: &StripDomain, w: &WeightSpec, m: usize) -> Result<QuadratureRule> {
    w.validate(domain)?;
    if m == 0 {
        return Err(Error::invalid("m", 0.0, "need m >= 1"));
    }
    let d = domain.d();
    let mf = m as f64;
    let h = match *w {
        WeightSpec::SingleExp { beta, rho, .. } => {
            (2.0 * PI * d).powf(1.0 / (rho + 1.0)) * (beta * mf).powf(-rho / (rho + 1.0))
        }
        WeightSpec::DoubleExp { beta2, gamma, .. } => {
            let arg = 2.0 * PI * d * gamma * mf / beta2;
            if !(arg > 1.0) {
                return Err(Error::invalid(
                    "m",
                    mf,
                    "2*pi*d*gamma*m/beta2 must exceed 1 for a positive spacing",
                ));
            }
            arg.ln() / (gamma * mf)
        }
    };
    let nodes: Vec<f64> = (-(m as i64)..=m as i64).map(|i| i as f64 * h).collect();
    let log_weights = vec![h.ln(); nodes.len()];
    let mut rule = QuadratureRule::build(
        RuleKind::Trapezoidal,
        nodes,
        log_weights,
        RuleMeta {
            m: Some(m),
            ..Default::default()
        },
    );
    rule.meta.xi_min = h;
    Ok(rule)
}

/// Half-width `T` of the truncation interval for the scaled finite-interval rules:
/// `L n^{1/(ρ+1)}` for SE weights and `L ln n` for DE weights.
pub fn scaling_factor(w: &WeightSpec, n: usize, l: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("n", n as f64, "need n >= 2"));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::invalid("L", l, "must be positive and finite"));
    }
    let nf = n as f64;
    match *w {
        WeightSpec::SingleExp { rho, .. } => Ok(l * nf.powf(1.0 / (rho + 1.0))),
        WeightSpec::DoubleExp { gamma, .. } => {
            if gamma * l < 1.0 {
                return Err(Error::invalid("L", l, "DE scaling requires gamma*L >= 1"));
            }
            Ok(l * nf.ln())
        }
    }
}

/// Brackets for the Legendre zeros from the classical bounds on `θ_i`, `ξ_i = cos θ_i`.
pub fn legendre_brackets(n: usize) -> Vec<(f64, f64)> {
    let nf = n as f64;
    let half = n / 2;
    let mut left = Vec::with_capacity(half);
    for i in 1..=half {
        let i = i as f64;
        let theta_lo = (1.0 - i / (nf + 1.0)) * PI;
        let theta_hi = (1.0 - (i - 0.5) / nf) * PI;
        left.push((theta_hi.cos(), theta_lo.cos()));
    }
    let mut brackets = left.clone();
    if n % 2 == 1 {
        let gap = left.last().map(|b| 0.5 * b.1.abs()).unwrap_or(0.5);
        brackets.push((-gap, gap));
    }
    for i in (1..=half).rev() {
        let i = i as f64;
        let theta_lo = (i - 0.5) / nf * PI;
        let theta_hi = i / (nf + 1.0) * PI;
        brackets.push((theta_hi.cos(), theta_lo.cos()));
    }
    brackets
}

/// Gauss–Legendre on `[-T, T]`.
pub fn scaled_gauss_legendre(n: usize, t: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::invalid("n", 0.0, "need n >= 1"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("T", t, "must be positive and finite"));
    }
    let mut x = poly_roots_by_newton(&Legendre, n, &legendre_brackets(n))?;
    let mut log_w: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let ev = evaluate(&Legendre, n, xi);
            // 2 / ((1 - x^2) P_n'(x)^2)
            std::f64::consts::LN_2 - (-xi * xi).ln_1p() - 2.0 * ev.log_abs_derivative()
        })
        .collect();
    symmetrize(&mut x, &mut log_w);
    let nodes = x.iter().map(|xi| t * xi).collect();
    let log_weights = log_w.iter().map(|lw| lw + t.ln()).collect();
    Ok(QuadratureRule::build(
        RuleKind::GaussLegendreScaled,
        nodes,
        log_weights,
        RuleMeta {
            t: Some(t),
            ..Default::default()
        },
    ))
}

/// Clenshaw–Curtis on `[-T, T]`: nodes `T cos(kπ/(n-1))`, endpoints included.
pub fn scaled_clenshaw_curtis(n: usize, t: f64) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::invalid("n", n as f64, "Clenshaw-Curtis needs n >= 2"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("T", t, "must be positive and finite"));
    }
    let big_n = n - 1;
    let nf = big_n as f64;
    // sin form gives exact antisymmetry and an exact zero in the middle
    let mut x: Vec<f64> = (0..=big_n)
        .map(|k| (PI * (2.0 * k as f64 - nf) / (2.0 * nf)).sin())
        .collect();
    let mut w: Vec<f64> = (0..=big_n)
        .map(|k| {
            let theta = k as f64 * PI / nf;
            let c = if k == 0 || k == big_n { 1.0 } else { 2.0 };
            let mut s = 1.0;
            for j in 1..=big_n / 2 {
                let b = if 2 * j == big_n { 1.0 } else { 2.0 };
                let jf = j as f64;
                s -= b / (4.0 * jf * jf - 1.0) * (2.0 * jf * theta).cos();
            }
            c / nf * s
        })
        .collect();
    if let Some((k, &bad)) = w.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::invalid(
            "weight",
            bad,
            if k == 0 { "nonpositive endpoint weight" } else { "nonpositive weight" },
        ));
    }
    let mut log_w: Vec<f64> = w.iter_mut().map(|v| v.ln()).collect();
    symmetrize(&mut x, &mut log_w);
    let nodes = x.iter().map(|xi| t * xi).collect();
    let log_weights = log_w.iter().map(|lw| lw + t.ln()).collect();
    Ok(QuadratureRule::build(
        RuleKind::ClenshawCurtisScaled,
        nodes,
        log_weights,
        RuleMeta {
            t: Some(t),
            ..Default::default()
        },
    ))
}

/// Disjoint brackets for the Hermite zeros.
///
/// The classical interval bounds for the positive zeros overlap each other, so
/// they cannot be used one per root. Instead the span they cover,
/// from the lower bound of the first positive zero to the upper bound of the
/// last, is scanned on a grid of step `π/(2√(2n+1))`. That step is half the
/// lower bound on the minimum zero spacing, so every grid cell contains at most
/// one zero and each sign change isolates exactly one.
pub fn hermite_brackets(n: usize) -> Result<Vec<(f64, f64)>> {
    let s = (2.0 * n as f64 + 1.0).sqrt();
    let k = n / 2;
    let (first_lo, last_hi) = if n % 2 == 1 {
        (PI / s, (4.0 * k as f64 + 3.0) / s)
    } else {
        (0.5 * PI / s, (4.0 * k as f64 + 1.0) / s)
    };
    let step = 0.5 * PI / s;

    let mut positive = Vec::with_capacity(k);
    if k > 0 {
        let sign = |x: f64| evaluate(&OrthonormalHermite, n, x).value >= 0.0;
        let mut x0 = first_lo;
        let mut s0 = sign(x0);
        while x0 < last_hi {
            let x1 = (x0 + step).min(last_hi);
            let s1 = sign(x1);
            if s1 != s0 {
                positive.push((x0, x1));
            }
            x0 = x1;
            s0 = s1;
        }
    }
    if positive.len() != k {
        return Err(Error::BracketViolation {
            index: positive.len(),
            lo: first_lo,
            hi: last_hi,
            reason: "sign scan did not isolate every positive Hermite zero",
        });
    }
    let mut brackets: Vec<(f64, f64)> = positive.iter().rev().map(|&(a, b)| (-b, -a)).collect();
    if n % 2 == 1 {
        brackets.push((-step, step));
    }
    brackets.extend(positive);
    Ok(brackets)
}

/// Gauss–Hermite rule targeting `∫ f(x) dx`: stored weights are `w_i e^{ξ_i²}`.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > GAUSS_HERMITE_MAX_N {
        return Err(Error::invalid(
            "n",
            n as f64,
            "Gauss-Hermite supports 1 <= n <= 500",
        ));
    }
    let mut x = poly_roots_by_newton(&OrthonormalHermite, n, &hermite_brackets(n)?)?;
    // Christoffel numbers for orthonormal Hermite: λ_i = 1 / (n ψ_{n-1}(ξ_i)^2)
    let log_n = (n as f64).ln();
    let mut log_w: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let ev = evaluate(&OrthonormalHermite, n, xi);
            -log_n - 2.0 * ev.log_abs_previous()
        })
        .collect();
    symmetrize(&mut x, &mut log_w);
    let log_modified: Vec<f64> = x.iter().zip(&log_w).map(|(xi, lw)| lw + xi * xi).collect();
    if let Some(i) = log_modified.iter().position(|lw| !lw.exp().is_finite()) {
        return Err(Error::Overflow {
            what: "modified Gauss-Hermite weight",
            index: i,
        });
    }
    Ok(QuadratureRule::build(
        RuleKind::GaussHermite,
        x,
        log_modified,
        RuleMeta::default(),
    ))
}

/// Smallest gap between adjacent nodes.
pub fn min_separation(rule: &QuadratureRule) -> Result<f64> {
    if rule.n() < 2 {
        return Err(Error::invalid("n", rule.n() as f64, "need at least two nodes"));
    }
    Ok(min_gap(rule.nodes()))
}
