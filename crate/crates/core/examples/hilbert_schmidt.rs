//! Hilbert–Schmidt norms of kernel operators on `L²`. The identity kernel
//! is bounded for every weight choice, yet its Hilbert–Schmidt norm is
//! `√(d·Σμ₁·Σμ₂)`.

use kernel_repr::hilbert_schmidt::check_hs_isometry;
use kernel_repr::kernels::random_kernel;
use kernel_repr::{sample, Exponent, Kernel, MeasureSpace, SpaceSpec};
use nalgebra::DMatrix;

fn main() -> kernel_repr::Result<()> {
    let s1 = MeasureSpace::from_weights(&[0.5, 0.5, 1.0])?;
    let s2 = MeasureSpace::from_weights(&[2.0, 1.0])?;
    let e = SpaceSpec::new(3, Exponent::P2, true)?;

    let id = Kernel::from_fn(s1.clone(), s2.clone(), e, e, |_, _| DMatrix::identity(3, 3))?;
    let r = check_hs_isometry(&id)?;
    let expected = (3.0 * s1.total_mass() * s2.total_mass()).sqrt();
    println!("identity kernel: operator norm {:.12}", r.operator_norm.value);
    println!("  HS via basis {:.12}, via kernel {:.12}, closed form {expected:.12}", r.hs_norm_operator, r.hs_norm_kernel);

    let mut rng = sample::rng(2);
    let k = random_kernel(&mut rng, &s1, &s2, e, SpaceSpec::new(2, Exponent::P2, true)?);
    let r = check_hs_isometry(&k)?;
    println!("random kernel:   HS {:.12} vs {:.12} (difference {:.1e})", r.hs_norm_operator, r.hs_norm_kernel, r.difference);
    Ok(())
}
