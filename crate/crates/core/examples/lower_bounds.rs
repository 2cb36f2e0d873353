//! Worst-case error lower bounds that depend only on the node positions.
//!
//! `cargo run --example lower_bounds`

use hardy_quad::bounds::{fooling_log_integrand, lower_bound_prop22, lower_bound_thm31, lower_bound_thm32};
use hardy_quad::rules::{scaled_gauss_legendre, scaling_factor};
use hardy_quad::weights::{StripDomain, WeightSpec};

pub fn main() -> hardy_quad::Result<()> {
    let d = StripDomain::new(1.0)?;
    let w = WeightSpec::se(1.0, 1.0);

    let gl = scaled_gauss_legendre(16, scaling_factor(&w, 16, 1.0)?)?;
    // any strictly increasing node set works, not only the built-in rules
    let ad_hoc = [-3.0, -1.2, -0.1, 0.4, 2.5];

    for (name, nodes) in [("scaled GL, n=16", gl.nodes()), ("ad hoc, n=5", &ad_hoc[..])] {
        let p22 = lower_bound_prop22(nodes, &d, &w, 1e-10)?;
        let t31 = lower_bound_thm31(nodes, &d, &w)?;
        let t32 = lower_bound_thm32(nodes, &d, &w)?;
        println!("{name}");
        println!("  fooling integral  ln e >= {:.6}  (rel. err {:.1e})", p22.log_value, p22.rel_error());
        println!("  pairwise gaps     ln e >= {:.6}", t31.log_value);
        println!("  min separation    ln e >= {:.6}", t32.log_value);
    }

    let g = fooling_log_integrand(&ad_hoc, &d, &w, 0.4);
    println!("fooling function at a node: ln g = {g}");
    Ok(())
}
