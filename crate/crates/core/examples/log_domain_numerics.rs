//! The numerical building blocks: log-domain integration, log-sum-exp and
//! bracketed root finding for three-term recurrences.
//!
//! `cargo run --example log_domain_numerics`

use hardy_quad::numerics::roots::{Hermite, Legendre};
use hardy_quad::numerics::{integrate_log, log_sum_exp, poly_roots_by_newton, IntegratorOptions};

pub fn main() -> hardy_quad::Result<()> {
    // ∫ e^{-800} dx over [0, 1], far below the smallest positive double
    let r = integrate_log(|_| -800.0, &[0.0, 1.0], &IntegratorOptions::default())?;
    println!("ln ∫ e^-800 = {:.12} using {} panels", r.log_value, r.panels_used);

    let sech = integrate_log(|x: f64| -x.cosh().ln(), &[-40.0, 0.0, 40.0], &IntegratorOptions::with_rel_tol(1e-12))?;
    println!("∫ sech over [-40, 40] = {:.15}", sech.to_linear().value);

    println!("ln(e^-1000 + e^-1000.5) = {:.12}", log_sum_exp(&[-1000.0, -1000.5]));

    let p3 = poly_roots_by_newton(&Legendre, 3, &[(-0.9, -0.5), (-0.1, 0.1), (0.5, 0.9)])?;
    let h2 = poly_roots_by_newton(&Hermite, 2, &[(-1.0, -0.5), (0.5, 1.0)])?;
    println!("P_3 zeros {p3:?}");
    println!("H_2 zeros {h2:?}");
    Ok(())
}
