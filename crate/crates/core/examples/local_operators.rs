//! Local operators are multiplication operators. A single off-diagonal
//! entry breaks locality and the check returns a separating witness.

use kernel_repr::multiplication::{extract_multiplier, is_local, random_multiplier};
use kernel_repr::operators::{operator_norm, BlockOperator};
use kernel_repr::{sample, Exponent, MeasureSpace, SpaceSpec};

fn main() -> kernel_repr::Result<()> {
    let omega = MeasureSpace::from_weights(&[1.0, 2.0, 0.5, 0.25])?;
    let spec = SpaceSpec::new(2, Exponent::P2, true)?;
    let mut rng = sample::rng(5);
    let t = random_multiplier(&mut rng, &omega, spec, 0.0).to_operator(Exponent::P2);

    let m = extract_multiplier(&t)?;
    println!("sup |M| = {:.12}, |T| = {:.12}", m.sup_norm().value, operator_norm(&t).value);

    let leaky = BlockOperator::from_fn(t.domain().clone(), t.codomain().clone(), |r, c| {
        let mut b = t.block(r, c).clone();
        if (r, c) == (2, 0) {
            b[(1, 0)] = 1e-6;
        }
        b
    })?;
    let (local, witness) = is_local(&leaky)?;
    println!("perturbed operator local: {local}");
    if let Some(w) = witness {
        println!("witness set {:?}, gap {:.3e}", w.set, w.gap());
    }
    Ok(())
}
