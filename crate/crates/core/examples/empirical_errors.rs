//! Integrates the reference catalog with each rule and reports the raw errors.
//!
//! `cargo run --example empirical_errors`

use hardy_quad::harness::{build_rule, catalog, empirical_error};
use hardy_quad::rules::RuleKind;
use hardy_quad::weights::{StripDomain, WeightSpec};

pub fn main() -> hardy_quad::Result<()> {
    let d = StripDomain::new(1.0)?;
    let w = WeightSpec::se(1.0, 1.0);
    let cases = [
        (RuleKind::Trapezoidal, 32),
        (RuleKind::GaussLegendreScaled, 65),
        (RuleKind::ClenshawCurtisScaled, 65),
        (RuleKind::GaussHermite, 65),
    ];
    for f in catalog() {
        print!("{:>8} (I = {:.12}):", f.tag, f.reference_integral);
        for (kind, size) in cases {
            let rule = build_rule(kind, &d, &w, size, Some(1.0))?;
            print!("  {kind} {:9.2e}", empirical_error(&rule, &f).exp());
        }
        println!();
    }
    Ok(())
}
