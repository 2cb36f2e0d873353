//! Builds each of the four rules and prints its nodes, weights and spacing.
//!
//! `cargo run --example quadrature_rules`

use hardy_quad::rules::{
    gauss_hermite_rule, min_separation, scaled_clenshaw_curtis, scaled_gauss_legendre, scaling_factor,
    trapezoidal_rule,
};
use hardy_quad::weights::{StripDomain, WeightSpec};

pub fn main() -> hardy_quad::Result<()> {
    let d = StripDomain::new(1.0)?;
    let w = WeightSpec::se(1.0, 1.0);

    let trap = trapezoidal_rule(&d, &w, 4)?;
    let t = scaling_factor(&w, 9, 1.0)?;
    let gl = scaled_gauss_legendre(9, t)?;
    let cc = scaled_clenshaw_curtis(9, t)?;
    let gh = gauss_hermite_rule(9)?;

    for rule in [&trap, &gl, &cc, &gh] {
        println!(
            "{:>5}  n={}  xi_min={:.6}  sum(w)={:.6}",
            rule.kind(),
            rule.n(),
            min_separation(rule)?,
            rule.weights().iter().sum::<f64>()
        );
    }

    println!("\nGauss-Hermite, 9 nodes, weights already carry e^(x^2):");
    gh.write_csv(std::io::stdout())?;
    Ok(())
}
