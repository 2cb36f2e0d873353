//! Sweeps over rule sizes, empirical integration errors and decay-rate fits.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    lower_bound_cor41, lower_bound_cor42, lower_bound_cor43, lower_bound_prop22, lower_bound_thm31,
    lower_bound_thm32, upper_bound_bernstein_rate, upper_bound_tail, upper_bound_trap_rate,
};
use crate::error::{Error, Result};
use crate::rules::{
    format_sig17, gauss_hermite_rule, scaled_clenshaw_curtis, scaled_gauss_legendre, scaling_factor,
    trapezoidal_rule, QuadratureRule, RuleKind,
};
use crate::weights::{StripDomain, WeightSpec};

/// A reference integrand with a known integral over the real line.
#[derive(Debug, Clone, Copy)]
pub struct TestIntegrand {
    pub tag: &'static str,
    pub log_f: fn(f64) -> f64,
    pub reference_integral: f64,
    pub provenance: &'static str,
}

fn log_gauss(x: f64) -> f64 {
    -x * x
}

fn log_sech(x: f64) -> f64 {
    let a = x.abs();
    std::f64::consts::LN_2 - a - (-2.0 * a).exp().ln_1p()
}

fn log_de_gauss(x: f64) -> f64 {
    -2.0 * x.cosh()
}

/// `∫ e^{-2 cosh x} dx = 2 K_0(2)`.
pub const TWO_K0_OF_2: f64 = 0.227_787_745_499_066_87;

pub const GAUSSIAN: TestIntegrand = TestIntegrand {
    tag: "gauss",
    log_f: log_gauss,
    reference_integral: 1.772_453_850_905_516,
    provenance: "sqrt(pi)",
};

pub const SECH: TestIntegrand = TestIntegrand {
    tag: "sech",
    log_f: log_sech,
    reference_integral: std::f64::consts::PI,
    provenance: "pi",
};

pub const DE_GAUSS: TestIntegrand = TestIntegrand {
    tag: "degauss",
    log_f: log_de_gauss,
    reference_integral: TWO_K0_OF_2,
    provenance: "2*K_0(2), modified Bessel function of the second kind",
};

pub fn catalog() -> [TestIntegrand; 3] {
    [GAUSSIAN, SECH, DE_GAUSS]
}

/// `ln |A_n(f) − I(f)|`, `-inf` when the two agree exactly.
pub fn empirical_error(rule: &QuadratureRule, f: &TestIntegrand) -> f64 {
    let approx = rule.apply_log(f.log_f);
    (approx - f.reference_integral).abs().ln()
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub rule: RuleKind,
    pub weight: WeightSpec,
    pub domain: StripDomain,
    /// Half sizes `m` for the trapezoidal rule, node counts `n` otherwise.
    pub sizes: Vec<usize>,
    /// Scaling constant for Gauss–Legendre and Clenshaw–Curtis.
    pub l: Option<f64>,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    pub rule: RuleKind,
    pub weight_tag: String,
    pub log_prop22: f64,
    pub log_thm31: f64,
    pub log_thm32: f64,
    pub log_specialized: Option<f64>,
    pub log_upper_rate: Option<f64>,
    pub empirical_log_errors: BTreeMap<String, f64>,
}

/// Maps a failed precondition to "absent", keeping every other error.
fn optional<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::PreconditionNotMet(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn require_l(l: Option<f64>) -> Result<f64> {
    l.ok_or_else(|| Error::PreconditionNotMet("scaled rules need a scaling constant L".into()))
}

/// Builds the rule of the given kind; `size` is `m` for the trapezoidal rule.
pub fn build_rule(
    kind: RuleKind,
    domain: &StripDomain,
    w: &WeightSpec,
    size: usize,
    l: Option<f64>,
) -> Result<QuadratureRule> {
    match kind {
        RuleKind::Trapezoidal => trapezoidal_rule(domain, w, size),
        RuleKind::GaussLegendreScaled => scaled_gauss_legendre(size, scaling_factor(w, size, require_l(l)?)?),
        RuleKind::ClenshawCurtisScaled => scaled_clenshaw_curtis(size, scaling_factor(w, size, require_l(l)?)?),
        RuleKind::GaussHermite => gauss_hermite_rule(size),
    }
}

fn sweep_one(cfg: &SweepConfig, size: usize) -> Result<SweepRecord> {
    let (d, w) = (&cfg.domain, &cfg.weight);
    let rule = build_rule(cfg.rule, d, w, size, cfg.l)?;
    let n = rule.n();
    if n < 2 {
        return Err(Error::invalid("n", n as f64, "sweeps need at least two nodes"));
    }
    let nodes = rule.nodes();
    let log_prop22 = lower_bound_prop22(nodes, d, w, cfg.rel_tol)?.log_value;
    let log_thm31 = lower_bound_thm31(nodes, d, w)?.log_value;
    let log_thm32 = lower_bound_thm32(nodes, d, w)?.log_value;
    let (special, upper) = match cfg.rule {
        RuleKind::Trapezoidal => (
            optional(lower_bound_cor41(d, w, size))?,
            optional(upper_bound_trap_rate(d, w, n))?.map(|b| b.log_value),
        ),
        RuleKind::GaussLegendreScaled | RuleKind::ClenshawCurtisScaled => {
            let l = require_l(cfg.l)?;
            let t = scaling_factor(w, n, l)?;
            let bern = upper_bound_bernstein_rate(d, t, n, cfg.rule)?.log_value;
            let tail = upper_bound_tail(d, w, t)?.log_value;
            (
                optional(lower_bound_cor42(d, w, n, l, cfg.rule))?,
                Some(bern.max(tail)),
            )
        }
        RuleKind::GaussHermite => (optional(lower_bound_cor43(d, w, n))?, None),
    };
    let empirical_log_errors = catalog()
        .iter()
        .map(|f| (f.tag.to_string(), empirical_error(&rule, f)))
        .collect();
    Ok(SweepRecord {
        n,
        rule: cfg.rule,
        weight_tag: w.to_string(),
        log_prop22,
        log_thm31,
        log_thm32,
        log_specialized: special.map(|b| b.log_value),
        log_upper_rate: upper,
        empirical_log_errors,
    })
}

/// One record per size, evaluated in parallel and returned in ascending `n`.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    cfg.weight.validate(&cfg.domain)?;
    if cfg.sizes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::PreconditionNotMet(
            "sweep sizes must be strictly increasing".into(),
        ));
    }
    let mut records = cfg
        .sizes
        .par_iter()
        .map(|&s| sweep_one(cfg, s))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.n);
    Ok(records)
}

/// A column of [`SweepRecord`] that can be fitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Field {
    Prop22,
    Thm31,
    Thm32,
    Specialized,
    UpperRate,
    Error(String),
}

impl Field {
    pub fn value(&self, r: &SweepRecord) -> Option<f64> {
        match self {
            Field::Prop22 => Some(r.log_prop22),
            Field::Thm31 => Some(r.log_thm31),
            Field::Thm32 => Some(r.log_thm32),
            Field::Specialized => r.log_specialized,
            Field::UpperRate => r.log_upper_rate,
            Field::Error(tag) => r.empirical_log_errors.get(tag).copied(),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "log_prop22" | "prop22" => Field::Prop22,
            "log_thm31" | "thm31" => Field::Thm31,
            "log_thm32" | "thm32" => Field::Thm32,
            "log_special" | "special" => Field::Specialized,
            "log_upper" | "upper" => Field::UpperRate,
            other => match other.strip_prefix("err_") {
                Some(tag) if catalog().iter().any(|f| f.tag == tag) => Field::Error(tag.to_string()),
                _ => return Err(Error::Parse(format!("unknown field '{other}'"))),
            },
        })
    }
}

/// Abscissa `a(n)` against which `−log value` is regressed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateModel {
    /// `n^{ρ/(ρ+1)}`
    PowSe { rho: f64 },
    /// `n^p`
    Power { exponent: f64 },
    /// `n / ln n`
    NOverLogN,
    /// `√n`
    SqrtN,
    /// `√(2n+1)`
    SqrtTwoNPlusOne,
}

impl RateModel {
    pub fn abscissa(&self, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            RateModel::PowSe { rho } => n.powf(rho / (rho + 1.0)),
            RateModel::Power { exponent } => n.powf(exponent),
            RateModel::NOverLogN => n / n.ln(),
            RateModel::SqrtN => n.sqrt(),
            RateModel::SqrtTwoNPlusOne => (2.0 * n + 1.0).sqrt(),
        }
    }
}

impl fmt::Display for RateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateModel::PowSe { rho } => write!(f, "pow_se:rho={rho}"),
            RateModel::Power { exponent } => write!(f, "power:p={exponent}"),
            RateModel::NOverLogN => f.write_str("n_over_log_n"),
            RateModel::SqrtN => f.write_str("sqrt_n"),
            RateModel::SqrtTwoNPlusOne => f.write_str("sqrt_2n_plus_1"),
        }
    }
}

impl FromStr for RateModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{v}' in model '{s}'")))
        };
        match s {
            "n_over_log_n" => Ok(RateModel::NOverLogN),
            "sqrt_n" => Ok(RateModel::SqrtN),
            "sqrt_2n_plus_1" => Ok(RateModel::SqrtTwoNPlusOne),
            _ => {
                if let Some(v) = s.strip_prefix("pow_se:rho=") {
                    Ok(RateModel::PowSe { rho: num(v)? })
                } else if let Some(v) = s.strip_prefix("power:p=") {
                    Ok(RateModel::Power { exponent: num(v)? })
                } else {
                    Err(Error::Parse(format!("unknown model '{s}'")))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(with = "model_string")]
    pub model: RateModel,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_lo: usize,
    pub n_hi: usize,
}

mod model_string {
    use super::RateModel;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &RateModel, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(m)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RateModel, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Number of smallest sizes dropped before fitting asymptotic rates.
pub const PREASYMPTOTIC_DISCARD: usize = 2;

/// The records left after dropping the [`PREASYMPTOTIC_DISCARD`] smallest `n`.
pub fn asymptotic_range(records: &[SweepRecord]) -> &[SweepRecord] {
    &records[PREASYMPTOTIC_DISCARD.min(records.len())..]
}

/// Least squares of `−log_value` against `model.abscissa(n)`.
pub fn fit_rate(records: &[SweepRecord], field: &Field, model: RateModel) -> Result<FitResult> {
    if records.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            got: records.len(),
        });
    }
    let mut xs = Vec::with_capacity(records.len());
    let mut ys = Vec::with_capacity(records.len());
    for r in records {
        match field.value(r) {
            Some(v) if v.is_finite() => {
                xs.push(model.abscissa(r.n));
                ys.push(-v);
            }
            other => {
                return Err(Error::PreconditionNotMet(format!(
                    "field {field:?} is not finite at n={}: {other:?}",
                    r.n
                )))
            }
        }
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-12 * mx * mx) {
        return Err(Error::DegenerateAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(FitResult {
        model,
        slope,
        intercept,
        r2,
        n_lo: records.iter().map(|r| r.n).min().unwrap_or(0),
        n_hi: records.iter().map(|r| r.n).max().unwrap_or(0),
    })
}

/// `0.40, 0.45, …, 0.80`
pub fn default_exponent_grid() -> Vec<f64> {
    (0..=8).map(|k| 0.40 + 0.05 * k as f64).collect()
}

/// Fits `n^p` for every `p` in the grid and keeps the best `r²` (first wins ties).
pub fn select_exponent(records: &[SweepRecord], field: &Field, grid: &[f64]) -> Result<FitResult> {
    let mut best: Option<FitResult> = None;
    for &p in grid {
        let fit = fit_rate(records, field, RateModel::Power { exponent: p })?;
        if best.map_or(true, |b| fit.r2 > b.r2) {
            best = Some(fit);
        }
    }
    best.ok_or(Error::InsufficientData { needed: 1, got: 0 })
}

pub const SWEEP_CSV_HEADER: [&str; 11] = [
    "n",
    "rule",
    "weight",
    "log_prop22",
    "log_thm31",
    "log_thm32",
    "log_special",
    "log_upper",
    "err_gauss",
    "err_sech",
    "err_degauss",
];

const ERROR_TAGS: [&str; 3] = ["gauss", "sech", "degauss"];

fn opt_field(v: Option<f64>) -> String {
    v.map(format_sig17).unwrap_or_default()
}

/// Writes records in the given order (sweeps are already sorted by `n`).
pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_HEADER)?;
    for r in records {
        let mut row = vec![
            r.n.to_string(),
            r.rule.tag().to_string(),
            r.weight_tag.clone(),
            format_sig17(r.log_prop22),
            format_sig17(r.log_thm31),
            format_sig17(r.log_thm32),
            opt_field(r.log_specialized),
            opt_field(r.log_upper_rate),
        ];
        row.extend(ERROR_TAGS.iter().map(|t| opt_field(r.empirical_log_errors.get(*t).copied())));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(s: &str, column: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("column {column}: bad number '{s}'")))
}

fn parse_opt(s: &str, column: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_f64(s, column).map(Some)
    }
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != SWEEP_CSV_HEADER {
        return Err(Error::Parse(format!("unexpected sweep header {header:?}")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let get = |i: usize| row.get(i).unwrap_or("");
        let mut errors = BTreeMap::new();
        for (k, tag) in ERROR_TAGS.iter().enumerate() {
            if let Some(v) = parse_opt(get(8 + k), SWEEP_CSV_HEADER[8 + k])? {
                errors.insert(tag.to_string(), v);
            }
        }
        out.push(SweepRecord {
            n: get(0)
                .parse()
                .map_err(|_| Error::Parse(format!("column n: bad integer '{}'", get(0))))?,
            rule: get(1).parse()?,
            weight_tag: get(2).to_string(),
            log_prop22: parse_f64(get(3), "log_prop22")?,
            log_thm31: parse_f64(get(4), "log_thm31")?,
            log_thm32: parse_f64(get(5), "log_thm32")?,
            log_specialized: parse_opt(get(6), "log_special")?,
            log_upper_rate: parse_opt(get(7), "log_upper")?,
            empirical_log_errors: errors,
        });
    }
    Ok(out)
}

pub fn write_fits_csv<W: Write>(fits: &[FitResult], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["model", "slope", "intercept", "r2", "n_lo", "n_hi"])?;
    for f in fits {
        w.write_record([
            f.model.to_string(),
            format_sig17(f.slope),
            format_sig17(f.intercept),
            format_sig17(f.r2),
            f.n_lo.to_string(),
            f.n_hi.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(n: usize, log_prop22: f64) -> SweepRecord {
        SweepRecord {
            n,
            rule: RuleKind::GaussHermite,
            weight_tag: "se:beta=1,rho=2".into(),
            log_prop22,
            log_thm31: log_prop22 - 1.0,
            log_thm32: log_prop22 - 2.0,
            log_specialized: None,
            log_upper_rate: None,
            empirical_log_errors: BTreeMap::new(),
        }
    }

    #[test]
    fn reference_values() {
        assert!((GAUSSIAN.reference_integral - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((log_sech(0.7) - (1.0 / 0.7f64.cosh()).ln()).abs() < 1e-15);
        assert!((log_sech(-900.0) + 900.0 - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn gauss_hermite_is_exact_on_the_gaussian() {
        for n in [1, 2, 5, 10, 40] {
            let rule = gauss_hermite_rule(n).unwrap();
            let e = empirical_error(&rule, &GAUSSIAN);
            assert!(e == f64::NEG_INFINITY || e.exp() < 1e-15 * GAUSSIAN.reference_integral, "n={n}");
        }
    }

    #[test]
    fn trapezoidal_sech_error_decreases() {
        let d = StripDomain::new(1.0).unwrap();
        let w = WeightSpec::se(1.0, 1.0);
        let errs: Vec<f64> = [4, 8, 16, 32]
            .iter()
            .map(|&m| empirical_error(&trapezoidal_rule(&d, &w, m).unwrap(), &SECH))
            .collect();
        assert!(errs.windows(2).all(|p| p[1] < p[0]), "{errs:?}");
    }

    #[test]
    fn exact_linear_fit() {
        let recs: Vec<SweepRecord> = [4, 9, 16, 25, 36]
            .iter()
            .map(|&n| record(n, -3.0 * (n as f64).sqrt()))
            .collect();
        let f = fit_rate(&recs, &Field::Prop22, RateModel::SqrtN).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!(f.intercept.abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert_eq!((f.n_lo, f.n_hi), (4, 36));
    }

    #[test]
    fn fit_errors() {
        let recs: Vec<SweepRecord> = (1..4).map(|n| record(n, -(n as f64))).collect();
        assert!(matches!(
            fit_rate(&recs, &Field::Prop22, RateModel::SqrtN),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        ));
        let same: Vec<SweepRecord> = (0..5).map(|_| record(7, -1.0)).collect();
        assert!(matches!(
            fit_rate(&same, &Field::Prop22, RateModel::SqrtN),
            Err(Error::DegenerateAbscissa)
        ));
        let recs: Vec<SweepRecord> = (2..7).map(|n| record(n, -(n as f64))).collect();
        assert!(fit_rate(&recs, &Field::Specialized, RateModel::SqrtN).is_err());
    }

    #[test]
    fn exponent_selection_recovers_power() {
        let recs: Vec<SweepRecord> = [10, 20, 40, 80, 160, 320]
            .iter()
            .map(|&n| record(n, -2.0 * (n as f64).powf(0.6) - 1.0))
            .collect();
        let f = select_exponent(&recs, &Field::Prop22, &default_exponent_grid()).unwrap();
        assert_eq!(f.model, RateModel::Power { exponent: 0.40 + 0.05 * 4.0 });
        assert!((f.slope - 2.0).abs() < 1e-9);
    }

    #[test]
    fn discard_policy() {
        let recs: Vec<SweepRecord> = (2..9).map(|n| record(n, -(n as f64))).collect();
        let tail = asymptotic_range(&recs);
        assert_eq!(tail.len(), 5);
        assert_eq!(tail[0].n, 4);
        assert!(asymptotic_range(&recs[..1]).is_empty());
    }

    #[test]
    fn model_strings_round_trip() {
        for m in [
            RateModel::PowSe { rho: 2.0 },
            RateModel::Power { exponent: 0.55 },
            RateModel::NOverLogN,
            RateModel::SqrtN,
            RateModel::SqrtTwoNPlusOne,
        ] {
            assert_eq!(m.to_string().parse::<RateModel>().unwrap(), m);
        }
        assert!("cubic".parse::<RateModel>().is_err());
    }

    #[test]
    fn fit_json_schema() {
        let f = FitResult {
            model: RateModel::SqrtN,
            slope: 1.5,
            intercept: 0.25,
            r2: 0.999,
            n_lo: 17,
            n_hi: 1025,
        };
        let v: serde_json::Value = serde_json::to_value(f).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 6);
        for k in ["model", "slope", "intercept", "r2", "n_lo", "n_hi"] {
            assert!(keys.contains(&k));
        }
        assert_eq!(v["model"], "sqrt_n");
    }

    #[test]
    fn empty_csv_is_header_only() {
        let mut buf = Vec::new();
        write_sweep_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn degenerate_sweep_of_one_size() {
        let cfg = SweepConfig {
            rule: RuleKind::GaussHermite,
            weight: WeightSpec::se(1.0, 2.0),
            domain: StripDomain::new(1.0).unwrap(),
            sizes: vec![2],
            l: None,
            rel_tol: 1e-8,
        };
        let recs = sweep(&cfg).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(fit_rate(&recs, &Field::Prop22, RateModel::SqrtN).is_err());
    }

    fn finite_or_neg_inf() -> impl Strategy<Value = f64> {
        prop_oneof![Just(f64::NEG_INFINITY), -1e3..10.0f64]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn csv_round_trip_is_bit_exact(
            rows in prop::collection::vec(
                (2usize..5000, -1e3..0.0f64, finite_or_neg_inf(),
                 prop::option::of(-1e3..0.0f64), prop::option::of(finite_or_neg_inf())),
                0..6)
        ) {
            let records: Vec<SweepRecord> = rows
                .into_iter()
                .map(|(n, p, e, s, u)| {
                    let mut r = record(n, p);
                    r.weight_tag = "de:beta1=1,beta2=1,gamma=1".into();
                    r.log_specialized = s;
                    r.log_upper_rate = u;
                    r.empirical_log_errors.insert("gauss".into(), e);
                    r.empirical_log_errors.insert("degauss".into(), p * 0.5);
                    r
                })
                .collect();
            let mut buf = Vec::new();
            write_sweep_csv(&records, &mut buf).unwrap();
            prop_assert_eq!(String::from_utf8_lossy(&buf).lines().count(), records.len() + 1);
            let back = read_sweep_csv(&buf[..]).unwrap();
            prop_assert_eq!(back, records);
        }
    }
}
