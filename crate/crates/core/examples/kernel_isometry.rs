//! A kernel on two small spaces, its operator `L¹(Ω₁;ℓ¹) → L^∞(Ω₂;ℓ^∞)`,
//! and the equality of the two norms.

use kernel_repr::kernels::{check_isometry, kernel_to_operator, random_kernel};
use kernel_repr::operators::norm_witness;
use kernel_repr::{sample, Exponent, MeasureSpace, SpaceSpec};

fn main() -> kernel_repr::Result<()> {
    let s1 = MeasureSpace::from_weights(&[0.5, 1.0, 2.0])?;
    let s2 = MeasureSpace::from_weights(&[1.0, 0.25])?;
    let e = SpaceSpec::new(3, Exponent::P1, true)?;
    let f = SpaceSpec::new(2, Exponent::Pinf, true)?;

    let mut rng = sample::rng(7);
    let k = random_kernel(&mut rng, &s1, &s2, e, f);
    let report = check_isometry(&k, 10_000, 7);
    println!("sup norm of k      {:.15}", report.sup_norm.value);
    println!("operator norm      {:.15}", report.operator_norm.value);
    println!("best random probe  {:.15}", report.sampled_max);

    let t = kernel_to_operator(&k);
    let w = norm_witness(&t)?;
    println!("norm attained at   {:?}", w.values().iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>());
    assert!(report.passes(1e-12, 1e-9));
    Ok(())
}
