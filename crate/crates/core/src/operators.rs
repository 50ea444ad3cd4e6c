//! Block operators between vector-valued `L^p` spaces on finite measure spaces.
//!
//! A [`BlockOperator`] acts on raw function values:
//! `(Tf)(ω₂) = Σ_{ω₁} B(ω₂,ω₁) f(ω₁)`. All measure weighting lives in the
//! kernel correspondence (see [`crate::kernels`]), so locality is literally
//! block-diagonality.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, block_norm, block_norm_attainer, dual_attainer, NormEstimate};
use crate::sample;
use crate::spaces::{lp_vec_norm, Exponent, LpFunction, MeasureSpace, SpaceSpec};

/// One side of an operator: `L^exponent(space; spec)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Endpoint {
    pub space: MeasureSpace,
    pub spec: SpaceSpec,
    pub exponent: Exponent,
}

impl Endpoint {
    pub fn new(space: MeasureSpace, spec: SpaceSpec, exponent: Exponent) -> Self {
        Self { space, spec, exponent }
    }

    pub fn zero_function(&self) -> LpFunction {
        LpFunction::zeros(self.space.clone(), self.spec, self.exponent)
    }

    fn atomic(&self, atom: usize, v: DVector<f64>) -> LpFunction {
        LpFunction::atomic(self.space.clone(), self.spec, self.exponent, atom, v)
            .expect("atom and dimension are in range")
    }
}

/// A linear map `L^p(Ω₁;E) → L^q(Ω₂;G)` stored as `dim G × dim E` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    domain: Endpoint,
    codomain: Endpoint,
    // row-major over (ω₂, ω₁)
    blocks: Vec<DMatrix<f64>>,
}

impl BlockOperator {
    /// `blocks[ω₂][ω₁]` is the block `B(ω₂,ω₁)`.
    pub fn new(domain: Endpoint, codomain: Endpoint, blocks: Vec<Vec<DMatrix<f64>>>) -> Result<Self> {
        let (n1, n2) = (domain.space.len(), codomain.space.len());
        if blocks.len() != n2 {
            return Err(Error::ShapeMismatch(format!("expected {n2} block rows, found {}", blocks.len())));
        }
        let mut flat = Vec::with_capacity(n1 * n2);
        for (i, row) in blocks.into_iter().enumerate() {
            if row.len() != n1 {
                return Err(Error::ShapeMismatch(format!(
                    "block row {i}: expected {n1} blocks, found {}",
                    row.len()
                )));
            }
            for (j, b) in row.into_iter().enumerate() {
                if b.shape() != (codomain.spec.dim, domain.spec.dim) {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.nrows(),
                        b.ncols(),
                        codomain.spec.dim,
                        domain.spec.dim
                    )));
                }
                flat.push(b);
            }
        }
        Ok(Self { domain, codomain, blocks: flat })
    }

    pub fn from_fn(domain: Endpoint, codomain: Endpoint, mut f: impl FnMut(usize, usize) -> DMatrix<f64>) -> Result<Self> {
        let blocks = (0..codomain.space.len())
            .map(|i| (0..domain.space.len()).map(|j| f(i, j)).collect())
            .collect();
        Self::new(domain, codomain, blocks)
    }

    pub fn zeros(domain: Endpoint, codomain: Endpoint) -> Self {
        let (r, c) = (codomain.spec.dim, domain.spec.dim);
        let blocks = vec![DMatrix::zeros(r, c); domain.space.len() * codomain.space.len()];
        Self { domain, codomain, blocks }
    }

    pub fn domain(&self) -> &Endpoint {
        &self.domain
    }

    pub fn codomain(&self) -> &Endpoint {
        &self.codomain
    }

    /// The block `B(ω₂,ω₁)`.
    pub fn block(&self, row_atom: usize, col_atom: usize) -> &DMatrix<f64> {
        &self.blocks[row_atom * self.domain.space.len() + col_atom]
    }

    /// Blocks in row-major `(ω₂, ω₁)` order.
    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn map_blocks(&self, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        Self { blocks: self.blocks.iter().map(f).collect(), ..self.clone() }
    }

    /// Same blocks, measured between different exponents.
    pub fn with_exponents(&self, p: Exponent, q: Exponent) -> Self {
        let mut t = self.clone();
        t.domain.exponent = p;
        t.codomain.exponent = q;
        t
    }

    /// `alpha·self + beta·other`.
    pub fn linear_combination(&self, alpha: f64, other: &BlockOperator, beta: f64) -> Result<Self> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::SpaceMismatch("operators act between different spaces".into()));
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * alpha + b * beta).collect();
        Ok(Self { blocks, ..self.clone() })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &BlockOperator) -> Result<Self> {
        let mid = &other.codomain;
        if mid.space != self.domain.space || mid.spec.dim != self.domain.spec.dim {
            return Err(Error::SpaceMismatch("inner codomain differs from outer domain".into()));
        }
        let n_mid = mid.space.len();
        Self::from_fn(other.domain.clone(), self.codomain.clone(), |i, j| {
            (0..n_mid).fold(DMatrix::zeros(self.codomain.spec.dim, other.domain.spec.dim), |acc, k| {
                acc + self.block(i, k) * other.block(k, j)
            })
        })
    }

    /// Same measure space on both sides and every off-diagonal block is zero.
    pub fn is_block_diagonal(&self) -> bool {
        if self.domain.space != self.codomain.space {
            return false;
        }
        let n = self.domain.space.len();
        (0..n).all(|i| (0..n).all(|j| i == j || self.block(i, j).iter().all(|&x| x == 0.0)))
    }

    pub fn max_abs_diff(&self, other: &BlockOperator) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise relative difference.
    pub fn max_rel_diff(&self, other: &BlockOperator) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| crate::kernels::rel_diff(*x, *y)))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.iter()).fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `(Tf)(ω₂) = Σ_{ω₁} B(ω₂,ω₁) f(ω₁)`.
pub fn apply(t: &BlockOperator, f: &LpFunction) -> Result<LpFunction> {
    let d = &t.domain;
    if f.space() != &d.space || f.spec() != &d.spec || f.exponent() != d.exponent {
        return Err(Error::SpaceMismatch("function does not live in the operator's domain".into()));
    }
    let n1 = d.space.len();
    let values = (0..t.codomain.space.len())
        .map(|i| {
            let mut acc = DVector::zeros(t.codomain.spec.dim);
            for j in 0..n1 {
                acc.gemv(1.0, t.block(i, j), f.value(j), 1.0);
            }
            acc
        })
        .collect();
    LpFunction::new(t.codomain.space.clone(), t.codomain.spec, t.codomain.exponent, values)
}

/// Sampling parameters for non-exact norm regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self { samples: 2000, seed: 42 }
    }
}

/// Operator norm with default sampling options for the non-exact regimes.
pub fn operator_norm(t: &BlockOperator) -> NormEstimate {
    operator_norm_with(t, &NormOptions::default())
}

pub fn operator_norm_with(t: &BlockOperator, opts: &NormOptions) -> NormEstimate {
    match exact_norm(t) {
        Some((value, _)) => NormEstimate::exact(value),
        None => norm_bounds(t, opts.samples, opts.seed),
    }
}

/// A unit-norm input at which `T` attains its norm.
pub fn norm_witness(t: &BlockOperator) -> Result<LpFunction> {
    exact_norm(t).map(|(_, f)| f).ok_or(Error::NonExactRegime {
        p: t.domain.exponent.as_str(),
        q: t.codomain.exponent.as_str(),
    })
}

/// Sampling lower bound and Hölder relaxation upper bound, computed
/// independently of the closed-form rules.
pub fn norm_bounds(t: &BlockOperator, samples: usize, seed: u64) -> NormEstimate {
    let (lower, _) = sampled_lower_bound(t, samples, seed);
    NormEstimate::bounds(lower, relaxation_upper_bound(t))
}

/// Largest `‖Tf‖` over atomic extreme candidates and `samples` seeded random
/// unit-norm inputs, together with the best input found.
pub fn sampled_lower_bound(t: &BlockOperator, samples: usize, seed: u64) -> (f64, LpFunction) {
    let d = &t.domain;
    let mut best = (f64::NEG_INFINITY, d.zero_function());
    let mut consider = |f: LpFunction| {
        let v = apply(t, &f).expect("sample lives in the domain").norm();
        if v > best.0 {
            best = (v, f);
        }
    };
    for atom in 0..d.space.len() {
        let scale = atom_scale(d.space.weight(atom), d.exponent);
        for i in 0..d.spec.dim {
            consider(d.atomic(atom, linalg::unit(d.spec.dim, i) * scale));
        }
    }
    let mut rng = sample::rng(seed);
    for _ in 0..samples {
        consider(sample::unit_function(&mut rng, &d.space, d.spec, d.exponent));
    }
    best
}

/// `‖T‖ ≤ ‖(c(ω₁)/μ₁(ω₁))‖_{L^{p'}(μ₁)}` with `c(ω₁)` the `L^q(μ₂)` combination
/// of upper bounds for the blockwise norms.
pub fn relaxation_upper_bound(t: &BlockOperator) -> f64 {
    let (d, c) = (&t.domain, &t.codomain);
    let q = c.exponent;
    let ratios: Vec<f64> = (0..d.space.len())
        .map(|j| {
            let acc = (0..c.space.len()).fold(0.0, |acc, i| {
                let beta = block_norm(t.block(i, j), d.spec.norm, c.spec.norm).upper;
                weighted_combine(q, acc, c.space.weight(i), beta)
            });
            q.finish(acc) / d.space.weight(j)
        })
        .collect();
    weighted_lp(&ratios, d.space.weights(), d.exponent.conjugate())
}

fn weighted_combine(p: Exponent, acc: f64, w: f64, x: f64) -> f64 {
    match p {
        Exponent::P1 => acc + w * x.abs(),
        Exponent::P2 => acc + w * x * x,
        Exponent::Pinf => acc.max(x.abs()),
    }
}

fn weighted_lp(values: &[f64], weights: &[f64], p: Exponent) -> f64 {
    p.finish(values.iter().zip(weights).fold(0.0, |acc, (&x, &w)| weighted_combine(p, acc, w, x)))
}

// ‖1_ω‖_{L^p} = μ^{1/p}; returns its reciprocal.
fn atom_scale(weight: f64, p: Exponent) -> f64 {
    match p {
        Exponent::P1 => 1.0 / weight,
        Exponent::P2 => 1.0 / weight.sqrt(),
        Exponent::Pinf => 1.0,
    }
}

// ℝ carries the same norm under every tag.
fn acts_as(spec: &SpaceSpec, p: Exponent) -> bool {
    spec.norm == p || spec.dim == 1
}

fn exact_norm(t: &BlockOperator) -> Option<(f64, LpFunction)> {
    let (d, c) = (&t.domain, &t.codomain);
    if d.exponent == Exponent::P1 {
        if let Some(r) = l1_column_rule(t) {
            return Some(r);
        }
    }
    if c.exponent == Exponent::Pinf && acts_as(&c.spec, Exponent::Pinf) {
        return Some(row_functional_rule(t));
    }
    if d.exponent == Exponent::P2
        && c.exponent == Exponent::P2
        && acts_as(&d.spec, Exponent::P2)
        && acts_as(&c.spec, Exponent::P2)
    {
        return Some(hilbert_rule(t));
    }
    if d.exponent == c.exponent && d.spec.dim == c.spec.dim && t.is_block_diagonal() {
        return block_diagonal_rule(t);
    }
    None
}

// p = 1: the unit ball's extreme points are atoms scaled by 1/μ₁, so
// ‖T‖ = max_{ω₁} ‖u ↦ B(·,ω₁)u‖_{E→L^q(Ω₂;G)} / μ₁(ω₁).
fn l1_column_rule(t: &BlockOperator) -> Option<(f64, LpFunction)> {
    let (d, c) = (&t.domain, &t.codomain);
    let (e, g, q) = (d.spec.norm, c.spec.norm, c.exponent);
    let n2 = c.space.len();
    let mut best = (f64::NEG_INFINITY, 0usize, DVector::zeros(0));
    for j in 0..d.space.len() {
        let (value, u) = if q == Exponent::Pinf {
            let norms: Vec<NormEstimate> = (0..n2).map(|i| block_norm(t.block(i, j), e, g)).collect();
            if norms.iter().any(|n| !n.exact) {
                return None;
            }
            let i = linalg::argmax(norms.iter().map(|n| n.value));
            (norms[i].value, block_norm_attainer(t.block(i, j), e, g)?)
        } else if acts_as(&d.spec, Exponent::P1) {
            let col_norm = |k: usize| {
                let acc = (0..n2).fold(0.0, |acc, i| {
                    let v = lp_vec_norm(t.block(i, j).column(k).clone_owned().as_slice(), g);
                    weighted_combine(q, acc, c.space.weight(i), v)
                });
                q.finish(acc)
            };
            let k = linalg::argmax((0..d.spec.dim).map(col_norm));
            (col_norm(k), linalg::unit(d.spec.dim, k))
        } else if acts_as(&d.spec, Exponent::P2) && q == Exponent::P2 && acts_as(&c.spec, Exponent::P2) {
            let stacked = DMatrix::from_fn(n2 * c.spec.dim, d.spec.dim, |r, k| {
                let (i, ri) = (r / c.spec.dim, r % c.spec.dim);
                c.space.weight(i).sqrt() * t.block(i, j)[(ri, k)]
            });
            let u = linalg::top_right_singular_vector(&stacked)?;
            (linalg::spectral_norm(&stacked), u)
        } else {
            return None;
        };
        let ratio = value / d.space.weight(j);
        if ratio > best.0 {
            best = (ratio, j, u);
        }
    }
    let (value, j, u) = best;
    let f = d.atomic(j, u / d.space.weight(j));
    Some((value, f))
}

// q = ∞ and G = ℓ^∞: the norm is the largest dual norm of a row functional
// f ↦ Σ_{ω₁} ⟨b(ω₁), f(ω₁)⟩ on L^p(Ω₁;E).
fn row_functional_rule(t: &BlockOperator) -> (f64, LpFunction) {
    let (d, c) = (&t.domain, &t.codomain);
    let (e, p) = (d.spec.norm, d.exponent);
    let n1 = d.space.len();
    let mut best: (f64, usize, usize) = (f64::NEG_INFINITY, 0, 0);
    for i in 0..c.space.len() {
        for r in 0..c.spec.dim {
            let ratios: Vec<f64> = (0..n1)
                .map(|j| {
                    lp_vec_norm(t.block(i, j).row(r).transpose().as_slice(), e.conjugate()) / d.space.weight(j)
                })
                .collect();
            let v = weighted_lp(&ratios, d.space.weights(), p.conjugate());
            if v > best.0 {
                best = (v, i, r);
            }
        }
    }
    let (value, i, r) = best;
    let attain = |j: usize| dual_attainer(t.block(i, j).row(r).transpose().as_slice(), e);
    let f = match p {
        Exponent::P1 => {
            let j = linalg::argmax((0..n1).map(|j| {
                lp_vec_norm(t.block(i, j).row(r).transpose().as_slice(), e.conjugate()) / d.space.weight(j)
            }));
            d.atomic(j, attain(j) / d.space.weight(j))
        }
        Exponent::P2 if value > 0.0 => {
            let values = (0..n1)
                .map(|j| {
                    let ratio = lp_vec_norm(t.block(i, j).row(r).transpose().as_slice(), e.conjugate())
                        / d.space.weight(j);
                    attain(j) * (ratio / value)
                })
                .collect();
            LpFunction::new(d.space.clone(), d.spec, p, values).expect("shapes match")
        }
        Exponent::P2 => d.atomic(0, linalg::unit(d.spec.dim, 0) / d.space.weight(0).sqrt()),
        Exponent::Pinf => {
            let values = (0..n1).map(attain).collect();
            LpFunction::new(d.space.clone(), d.spec, p, values).expect("shapes match")
        }
    };
    (value, f)
}

// L²(Ω₁;ℓ²) → L²(Ω₂;ℓ²): spectral norm of D₂^{1/2} B D₁^{-1/2}.
fn hilbert_rule(t: &BlockOperator) -> (f64, LpFunction) {
    let w = weighted_dense(t);
    let d = &t.domain;
    let dim = d.spec.dim;
    let x = linalg::top_right_singular_vector(&w).unwrap_or_else(|| linalg::unit(w.ncols(), 0));
    let values = (0..d.space.len())
        .map(|j| DVector::from_fn(dim, |k, _| x[j * dim + k] / d.space.weight(j).sqrt()))
        .collect();
    let f = LpFunction::new(d.space.clone(), d.spec, d.exponent, values).expect("shapes match");
    (linalg::spectral_norm(&w), f)
}

/// The matrix of `T` in orthonormal coordinates of `L²(Ω₁;ℝ^m) → L²(Ω₂;ℝ^n)`.
pub(crate) fn weighted_dense(t: &BlockOperator) -> DMatrix<f64> {
    let (d, c) = (&t.domain, &t.codomain);
    let (dm, cm) = (d.spec.dim, c.spec.dim);
    DMatrix::from_fn(c.space.len() * cm, d.space.len() * dm, |r, s| {
        let (i, ri) = (r / cm, r % cm);
        let (j, sj) = (s / dm, s % dm);
        t.block(i, j)[(ri, sj)] * (c.space.weight(i) / d.space.weight(j)).sqrt()
    })
}

// Local operators with p = q: ‖T‖ = max_ω ‖B(ω,ω)‖_{E→G}.
fn block_diagonal_rule(t: &BlockOperator) -> Option<(f64, LpFunction)> {
    let d = &t.domain;
    let (e, g) = (d.spec.norm, t.codomain.spec.norm);
    let norms: Vec<NormEstimate> = (0..d.space.len()).map(|j| block_norm(t.block(j, j), e, g)).collect();
    if norms.iter().any(|n| !n.exact) {
        return None;
    }
    let j = linalg::argmax(norms.iter().map(|n| n.value));
    let u = block_norm_attainer(t.block(j, j), e, g)?;
    let f = d.atomic(j, u * atom_scale(d.space.weight(j), d.exponent));
    Some((norms[j].value, f))
}

/// Random operator between two endpoints with entries uniform in `[-1, 1]`.
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, domain: Endpoint, codomain: Endpoint) -> BlockOperator {
    let (r, c) = (codomain.spec.dim, domain.spec.dim);
    BlockOperator::from_fn(domain, codomain, |_, _| sample::matrix(rng, r, c)).expect("shapes match")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(norm: Exponent) -> SpaceSpec {
        SpaceSpec::new(1, norm, true).unwrap()
    }

    fn scalar_op(w1: &[f64], w2: &[f64], entries: &[&[f64]], p: Exponent, q: Exponent) -> BlockOperator {
        let d = Endpoint::new(MeasureSpace::from_weights(w1).unwrap(), real(Exponent::P1), p);
        let c = Endpoint::new(MeasureSpace::from_weights(w2).unwrap(), real(Exponent::P1), q);
        BlockOperator::from_fn(d, c, |i, j| DMatrix::from_element(1, 1, entries[i][j])).unwrap()
    }

    #[test]
    fn apply_examples() {
        let t = scalar_op(&[1.0], &[1.0], &[&[2.5]], Exponent::P1, Exponent::Pinf);
        let f = LpFunction::from_rows(t.domain().space.clone(), real(Exponent::P1), Exponent::P1, &[vec![-2.0]])
            .unwrap();
        assert_eq!(apply(&t, &f).unwrap().value(0)[0], -5.0);

        let t = scalar_op(&[1.0, 1.0], &[1.0], &[&[3.0, -2.0]], Exponent::P1, Exponent::Pinf);
        let f = LpFunction::from_rows(t.domain().space.clone(), real(Exponent::P1), Exponent::P1, &[vec![1.0], vec![1.0]])
            .unwrap();
        let g = apply(&t, &f).unwrap();
        assert_eq!(g.value(0)[0], 1.0);
        assert_eq!(g.exponent(), Exponent::Pinf);

        let z = BlockOperator::zeros(t.domain().clone(), t.codomain().clone());
        assert_eq!(apply(&z, &f).unwrap().norm(), 0.0);
    }

    #[test]
    fn apply_rejects_foreign_functions() {
        let t = scalar_op(&[1.0, 1.0], &[1.0], &[&[3.0, -2.0]], Exponent::P1, Exponent::Pinf);
        let other = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        let f = LpFunction::zeros(other, real(Exponent::P1), Exponent::P1);
        assert!(matches!(apply(&t, &f), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn l1_to_linf_norm_and_witness() {
        let t = scalar_op(&[1.0, 2.0], &[1.0], &[&[3.0, -4.0]], Exponent::P1, Exponent::Pinf);
        let n = operator_norm(&t);
        assert!(n.exact);
        assert_eq!(n.value, 3.0);
        let w = norm_witness(&t).unwrap();
        assert_eq!(w.value(0)[0], 1.0);
        assert_eq!(w.value(1)[0], 0.0);
        assert_eq!(apply(&t, &w).unwrap().norm(), 3.0);

        let t = scalar_op(&[1.0], &[1.0], &[&[-5.0]], Exponent::P1, Exponent::Pinf);
        assert_eq!(operator_norm(&t), NormEstimate::exact(5.0));
        let w = norm_witness(&t).unwrap();
        assert_eq!(w.norm(), 1.0);
        assert_eq!(apply(&t, &w).unwrap().norm(), 5.0);
    }

    #[test]
    fn zero_operator_has_zero_norm_and_a_unit_witness() {
        for (p, q) in [(Exponent::P1, Exponent::Pinf), (Exponent::P2, Exponent::P2), (Exponent::Pinf, Exponent::Pinf)] {
            let t = scalar_op(&[1.0, 2.0], &[3.0], &[&[0.0, 0.0]], p, q);
            let n = operator_norm(&t);
            assert!(n.exact);
            assert_eq!(n.value, 0.0);
            let w = norm_witness(&t).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn non_exact_regime_gives_interval_and_no_witness() {
        let spec = SpaceSpec::new(2, Exponent::Pinf, false).unwrap();
        let out = SpaceSpec::new(2, Exponent::P1, false).unwrap();
        let s1 = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        let s2 = MeasureSpace::from_weights(&[0.5]).unwrap();
        let mut rng = sample::rng(3);
        let t = random_operator(&mut rng, Endpoint::new(s1, spec, Exponent::P2), Endpoint::new(s2, out, Exponent::P1));
        let n = operator_norm(&t);
        assert!(!n.exact);
        assert!(n.lower <= n.upper);
        assert!(norm_witness(&t).is_err());
    }

    #[test]
    fn hilbert_rule_matches_spectral_norm_of_weighted_matrix() {
        let spec = SpaceSpec::new(2, Exponent::P2, false).unwrap();
        let s1 = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        let s2 = MeasureSpace::from_weights(&[3.0]).unwrap();
        let mut rng = sample::rng(11);
        let t = random_operator(&mut rng, Endpoint::new(s1, spec, Exponent::P2), Endpoint::new(s2, spec, Exponent::P2));
        let n = operator_norm(&t);
        assert!(n.exact);
        let w = norm_witness(&t).unwrap();
        assert!((w.norm() - 1.0).abs() < 1e-12);
        assert!((apply(&t, &w).unwrap().norm() - n.value).abs() < 1e-12);
        let b = norm_bounds(&t, 500, 1);
        assert!(b.lower <= n.value * (1.0 + 1e-12) && n.value <= b.upper * (1.0 + 1e-12));
    }

    #[test]
    fn compose_and_combine() {
        let t = scalar_op(&[1.0, 2.0], &[1.0, 2.0], &[&[1.0, 2.0], &[3.0, 4.0]], Exponent::P1, Exponent::P1);
        let tt = t.compose(&t).unwrap();
        assert_eq!(tt.block(0, 0)[(0, 0)], 7.0);
        assert_eq!(tt.block(1, 1)[(0, 0)], 22.0);
        let z = t.linear_combination(1.0, &t, -1.0).unwrap();
        assert_eq!(z.max_abs_entry(), 0.0);
    }
}
