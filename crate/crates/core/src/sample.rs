//! Seeded random instances for probes, property checks and demos.
//!
//! Every generator draws from a caller-supplied RNG; [`rng`] builds the
//! deterministic ChaCha stream used throughout the toolkit.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::spaces::{Exponent, LpFunction, MeasureSpace, SpaceSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn exponent<R: Rng + ?Sized>(rng: &mut R) -> Exponent {
    [Exponent::P1, Exponent::P2, Exponent::Pinf][rng.gen_range(0..3)]
}

/// Between 1 and `max_atoms` atoms with weights in `[0.1, 3)`.
pub fn measure_space<R: Rng + ?Sized>(rng: &mut R, max_atoms: usize) -> MeasureSpace {
    let n = rng.gen_range(1..=max_atoms.max(1));
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
    MeasureSpace::from_weights(&weights).expect("weights are positive")
}

pub fn space_spec<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, norm: Exponent, ordered: bool) -> SpaceSpec {
    SpaceSpec::new(rng.gen_range(1..=max_dim.max(1)), norm, ordered).expect("dim >= 1")
}

/// Entries uniform in `[-1, 1)`.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

/// Like [`matrix`], but each entry is exactly zero with probability `zero_prob`.
pub fn sparse_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, zero_prob: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| if rng.gen_bool(zero_prob) { 0.0 } else { rng.gen_range(-1.0..1.0) })
}

/// Entries uniform in `[0, 1)`, exactly zero with probability `zero_prob`.
pub fn nonnegative_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, zero_prob: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| if rng.gen_bool(zero_prob) { 0.0 } else { rng.gen_range(0.0..1.0) })
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn function<R: Rng + ?Sized>(rng: &mut R, space: &MeasureSpace, spec: SpaceSpec, exponent: Exponent) -> LpFunction {
    let values = (0..space.len()).map(|_| vector(rng, spec.dim)).collect();
    LpFunction::new(space.clone(), spec, exponent, values).expect("shapes match")
}

/// Nonnegative values, with exact zeros mixed in.
pub fn positive_function<R: Rng + ?Sized>(
    rng: &mut R,
    space: &MeasureSpace,
    spec: SpaceSpec,
    exponent: Exponent,
) -> LpFunction {
    let values = (0..space.len())
        .map(|_| DVector::from_fn(spec.dim, |_, _| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1.0) }))
        .collect();
    LpFunction::new(space.clone(), spec, exponent, values).expect("shapes match")
}

/// A random function normalized to unit `L^p` norm. Draws alternate between
/// dense values, single-atom support and sign patterns so that the probes
/// reach near the extreme points of the unit ball as well as its interior.
pub fn unit_function<R: Rng + ?Sized>(
    rng: &mut R,
    space: &MeasureSpace,
    spec: SpaceSpec,
    exponent: Exponent,
) -> LpFunction {
    loop {
        let kind = rng.gen_range(0..4);
        let atom = rng.gen_range(0..space.len());
        let values: Vec<DVector<f64>> = (0..space.len())
            .map(|j| match kind {
                1 if j != atom => DVector::zeros(spec.dim),
                2 => DVector::from_fn(spec.dim, |_, _| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }),
                _ => vector(rng, spec.dim),
            })
            .collect();
        let f = LpFunction::new(space.clone(), spec, exponent, values).expect("shapes match");
        let n = f.norm();
        if n > 0.0 {
            return f.scaled(1.0 / n);
        }
    }
}
