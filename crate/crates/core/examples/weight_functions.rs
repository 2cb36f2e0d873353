//! Weight functions: validation against the strip, tail mass and truncation points.
//!
//! `cargo run --example weight_functions`

use hardy_quad::weights::{StripDomain, WeightSpec};

pub fn main() -> hardy_quad::Result<()> {
    let d = StripDomain::new(1.0)?;

    let se: WeightSpec = "se:beta=1,rho=2".parse()?;
    let de: WeightSpec = "de:beta1=1,beta2=1,gamma=1".parse()?;
    for w in [se, de] {
        w.validate(&d)?;
        let cut = w.integration_cutoff(1e-12)?;
        println!(
            "{w}: omega(1)={:.6}  tail(|x|>2)<={:.3e}  cutoff(1e-12)={cut:.4}",
            w.weight(1.0),
            w.tail_mass_upper(2.0)?
        );
    }

    // a double-exponential weight cannot decay faster than gamma = pi/(2d)
    let too_fast: WeightSpec = "de:beta1=1,beta2=1,gamma=1.6".parse()?;
    match too_fast.validate(&d) {
        Ok(()) => println!("{too_fast}: accepted"),
        Err(e) => println!("{too_fast}: {e}"),
    }
    Ok(())
}
