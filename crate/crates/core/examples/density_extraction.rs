//! Recovers the density of an operator `L¹(Ω) → ℓ²` and integrates it back.

use kernel_repr::kernels::extract_density;
use kernel_repr::operators::{apply, operator_norm, random_operator};
use kernel_repr::{sample, Endpoint, Exponent, MeasureSpace, SpaceSpec};
use nalgebra::DVector;

fn main() -> kernel_repr::Result<()> {
    let omega = MeasureSpace::from_weights(&[0.1, 0.3, 0.6])?;
    let target = SpaceSpec::new(2, Exponent::P2, true)?;
    let mut rng = sample::rng(3);
    let t = random_operator(
        &mut rng,
        Endpoint::new(omega.clone(), SpaceSpec::scalar(), Exponent::P1),
        Endpoint::new(MeasureSpace::counting(1)?, target, Exponent::Pinf),
    );

    let k = extract_density(&t)?;
    for a in 0..omega.len() {
        println!("k({}) = {:?}", omega.atoms()[a], k.block(a, 0).as_slice());
    }
    println!("sup norm {:.12}, operator norm {:.12}", k.sup_norm().value, operator_norm(&t).value);

    let f = sample::function(&mut rng, &omega, SpaceSpec::scalar(), Exponent::P1);
    let mut integral = DVector::zeros(2);
    for a in 0..omega.len() {
        integral += k.block(a, 0).column(0) * (omega.weight(a) * f.value(a)[0]);
    }
    println!("Tf           {:?}", apply(&t, &f)?.value(0).as_slice());
    println!("sum mu f k   {:?}", integral.as_slice());
    Ok(())
}
