//! Projective tensor norms: exact where a closed form exists, certified
//! bounds elsewhere, and the extremal operator that attains the duality.

use kernel_repr::tensor::{
    decomposition_search, duality_pairing, extremal_operator, pi_norm, pi_norm_bounds, random_element, Factor,
    DEFAULT_RESTARTS,
};
use kernel_repr::{sample, Exponent, MeasureSpace, SpaceSpec};

fn main() -> kernel_repr::Result<()> {
    let mut rng = sample::rng(11);
    let omega = MeasureSpace::from_weights(&[0.5, 1.5, 1.0])?;
    let l2 = Factor::Space(SpaceSpec::new(3, Exponent::P2, true)?);

    let z = random_element(&mut rng, Factor::lp(omega, Exponent::P1), l2.clone());
    let exact = pi_norm(&z)?;
    let found = decomposition_search(&z, DEFAULT_RESTARTS, 1)?;
    println!("L1 (x) l2      exact {:.12}  search {:.12} ({} terms)", exact.value, found.cost, found.terms.len());

    let h = random_element(&mut rng, l2.clone(), l2);
    println!("l2 (x) l2      nuclear norm {:.12}", pi_norm(&h)?.value);

    let linf = Factor::Space(SpaceSpec::new(3, Exponent::Pinf, true)?);
    let w = random_element(&mut rng, linf.clone(), linf);
    let b = pi_norm_bounds(&w, DEFAULT_RESTARTS, 1)?;
    println!("linf (x) linf  in [{:.6}, {:.6}]", b.lower, b.upper);

    let l1 = Factor::Space(SpaceSpec::new(3, Exponent::P1, true)?);
    let u = random_element(&mut rng, l1.clone(), l1);
    let t = extremal_operator(&u)?;
    println!("l1 (x) l1      pi {:.12}  <T,z> {:.12}", pi_norm(&u)?.value, duality_pairing(&t, &u)?);
    Ok(())
}
