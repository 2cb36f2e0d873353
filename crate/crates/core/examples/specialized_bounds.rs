//! Closed-form bounds for particular rules, plus universal and upper rates.
//!
//! `cargo run --example specialized_bounds`

use hardy_quad::bounds::{
    lower_bound_cor41, lower_bound_cor42, lower_bound_cor43, universal_lower_sugihara,
    upper_bound_bernstein_rate, upper_bound_tail, upper_bound_trap_rate,
};
use hardy_quad::rules::{scaling_factor, RuleKind};
use hardy_quad::weights::{StripDomain, WeightSpec};

pub fn main() -> hardy_quad::Result<()> {
    let d = StripDomain::new(1.0)?;
    let se = WeightSpec::se(1.0, 1.0);
    let de = WeightSpec::de(1.0, 1.0, 1.0);

    let m = 32;
    let n = 2 * m + 1;
    for w in [se, de] {
        let lower = lower_bound_cor41(&d, &w, m)?;
        let upper = upper_bound_trap_rate(&d, &w, n)?;
        let universal = universal_lower_sugihara(&d, &w, n)?;
        println!(
            "{w} trapezoidal n={n}: lower {:.3}  upper rate {:.3}  any rule >= {:.3} (+const)",
            lower.log_value, upper.log_value, universal.log_value
        );
    }

    let t = scaling_factor(&se, 16, 1.0)?;
    for kind in [RuleKind::GaussLegendreScaled, RuleKind::ClenshawCurtisScaled] {
        let lower = lower_bound_cor42(&d, &se, 16, 1.0, kind)?;
        let interior = upper_bound_bernstein_rate(&d, t, 16, kind)?;
        let tail = upper_bound_tail(&d, &se, t)?;
        println!(
            "{kind} n=16 T={t}: lower {:.3}  upper max({:.3}, {:.3})",
            lower.log_value, interior.log_value, tail.log_value
        );
    }

    let gauss = WeightSpec::se(1.0, 2.0);
    for n in [10, 40, 160] {
        println!("gh n={n}: lower {:.3}", lower_bound_cor43(&d, &gauss, n)?.log_value);
    }
    Ok(())
}
