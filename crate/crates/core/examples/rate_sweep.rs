//! Sweeps Gauss-Hermite and the trapezoidal rule for the Gaussian weight and
//! fits the decay exponent of the fooling-function lower bound.
//!
//! `cargo run --release --example rate_sweep`

use hardy_quad::harness::{
    asymptotic_range, default_exponent_grid, select_exponent, sweep, write_sweep_csv, Field, RateModel,
    SweepConfig,
};
use hardy_quad::rules::RuleKind;
use hardy_quad::weights::{StripDomain, WeightSpec};

pub fn main() -> hardy_quad::Result<()> {
    let base = SweepConfig {
        rule: RuleKind::GaussHermite,
        weight: WeightSpec::se(1.0, 2.0),
        domain: StripDomain::new(1.0)?,
        sizes: vec![5, 10, 20, 40, 80, 160],
        l: None,
        rel_tol: 1e-8,
    };
    let trap = SweepConfig {
        rule: RuleKind::Trapezoidal,
        sizes: vec![4, 8, 16, 32, 64, 128],
        ..base.clone()
    };

    for cfg in [base, trap] {
        let records = sweep(&cfg)?;
        let fit = select_exponent(asymptotic_range(&records), &Field::Prop22, &default_exponent_grid())?;
        if let RateModel::Power { exponent } = fit.model {
            println!(
                "{}: -ln e ~ {:.3} n^{exponent:.2}  (r2 {:.6}, n {}..{})",
                cfg.rule, fit.slope, fit.r2, fit.n_lo, fit.n_hi
            );
        }
        write_sweep_csv(&records, std::io::stdout())?;
    }
    Ok(())
}
