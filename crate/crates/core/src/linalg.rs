//! Dense matrix norms between `ℓ^p` spaces.
//!
//! Exact formulas are used for `ℓ¹ → ·` (max column norm), `· → ℓ^∞` (max row
//! dual norm) and `ℓ² → ℓ²` (largest singular value). Every other pair gets a
//! certified interval.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::spaces::{lp_vec_norm, Exponent};

/// A norm value, either exact or bracketed by certified bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    /// Exact value, or the interval midpoint when `exact` is false.
    pub value: f64,
    pub exact: bool,
    pub lower: f64,
    pub upper: f64,
}

impl NormEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, exact: true, lower: value, upper: value }
    }

    pub fn bounds(lower: f64, upper: f64) -> Self {
        let upper = upper.max(lower);
        Self { value: 0.5 * (lower + upper), exact: false, lower, upper }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Componentwise map of a monotone nonnegative function.
    pub(crate) fn map(self, f: impl Fn(f64) -> f64) -> Self {
        if self.exact {
            Self::exact(f(self.value))
        } else {
            Self::bounds(f(self.lower), f(self.upper))
        }
    }

    pub(crate) fn max(self, other: Self) -> Self {
        if self.exact && other.exact {
            Self::exact(self.value.max(other.value))
        } else {
            Self::bounds(self.lower.max(other.lower), self.upper.max(other.upper))
        }
    }

    pub(crate) fn add(self, other: Self) -> Self {
        if self.exact && other.exact {
            Self::exact(self.value + other.value)
        } else {
            Self::bounds(self.lower + other.lower, self.upper + other.upper)
        }
    }

    pub(crate) fn zero() -> Self {
        Self::exact(0.0)
    }
}

/// Norm of the identity map `ℓ^from_n → ℓ^to_n`.
pub fn inclusion_norm(n: usize, from: Exponent, to: Exponent) -> f64 {
    let e = to.reciprocal() - from.reciprocal();
    if e > 0.0 {
        (n as f64).powf(e)
    } else {
        1.0
    }
}

/// Whether `block_norm` has a closed form for this pair.
pub fn block_norm_is_exact(from: Exponent, to: Exponent) -> bool {
    // Callers with one-dimensional sides get exact values regardless.
    from == Exponent::P1 || to == Exponent::Pinf || (from == Exponent::P2 && to == Exponent::P2)
}

/// Operator norm of `b : ℓ^from → ℓ^to`.
pub fn block_norm(b: &DMatrix<f64>, from: Exponent, to: Exponent) -> NormEstimate {
    if b.nrows() == 0 || b.ncols() == 0 {
        return NormEstimate::zero();
    }
    let (from, to) = effective_pair(b, from, to);
    match (from, to) {
        (Exponent::P1, _) => NormEstimate::exact(max_column_norm(b, to)),
        (_, Exponent::Pinf) => NormEstimate::exact(max_row_norm(b, from.conjugate())),
        (Exponent::P2, Exponent::P2) => NormEstimate::exact(spectral_norm(b)),
        _ => {
            let lower = block_norm_lower(b, from, to);
            let upper = block_norm_upper(b, from, to);
            NormEstimate::bounds(lower, upper)
        }
    }
}

// On a one-dimensional side every ℓ^p norm is |·|.
fn effective_pair(b: &DMatrix<f64>, from: Exponent, to: Exponent) -> (Exponent, Exponent) {
    let from = if b.ncols() == 1 { Exponent::P1 } else { from };
    let to = if b.nrows() == 1 { Exponent::Pinf } else { to };
    (from, to)
}

pub(crate) fn max_column_norm(b: &DMatrix<f64>, p: Exponent) -> f64 {
    b.column_iter()
        .map(|c| lp_vec_norm(c.clone_owned().as_slice(), p))
        .fold(0.0, f64::max)
}

pub(crate) fn max_row_norm(b: &DMatrix<f64>, p: Exponent) -> f64 {
    b.row_iter()
        .map(|r| lp_vec_norm(r.transpose().as_slice(), p))
        .fold(0.0, f64::max)
}

// Largest ‖b x‖ over candidate unit vectors: basis vectors, sign vectors for
// small dimension, and the top right singular vector.
fn block_norm_lower(b: &DMatrix<f64>, from: Exponent, to: Exponent) -> f64 {
    let n = b.ncols();
    let mut best = 0.0f64;
    let mut try_vec = |x: &DVector<f64>| {
        let nx = lp_vec_norm(x.as_slice(), from);
        if nx > 0.0 {
            let y = b * x;
            best = best.max(lp_vec_norm(y.as_slice(), to) / nx);
        }
    };
    for j in 0..n {
        try_vec(&unit(n, j));
    }
    if n <= 12 {
        for mask in 0u32..(1 << n) {
            let x = DVector::from_fn(n, |i, _| if mask >> i & 1 == 1 { -1.0 } else { 1.0 });
            try_vec(&x);
        }
    }
    if let Some(v) = top_right_singular_vector(b) {
        try_vec(&v);
    }
    best
}

// min over three factorizations through exactly computable norms.
fn block_norm_upper(b: &DMatrix<f64>, from: Exponent, to: Exponent) -> f64 {
    let (m, n) = (b.nrows(), b.ncols());
    let via_l2 = inclusion_norm(n, from, Exponent::P2) * spectral_norm(b) * inclusion_norm(m, Exponent::P2, to);
    let via_l1 = inclusion_norm(n, from, Exponent::P1) * max_column_norm(b, to);
    let via_linf = max_row_norm(b, from.conjugate()) * inclusion_norm(m, Exponent::Pinf, to);
    via_l2.min(via_l1).min(via_linf)
}

pub(crate) fn unit(n: usize, j: usize) -> DVector<f64> {
    let mut e = DVector::zeros(n);
    e[j] = 1.0;
    e
}

/// A unit vector `a` of `ℓ^p` with `⟨a, x⟩ = ‖x‖_{p'}`.
pub fn dual_attainer(x: &[f64], p: Exponent) -> DVector<f64> {
    let n = x.len();
    match p {
        Exponent::P1 => {
            let (i, v) = x
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |(bi, bv), (i, &v)| if v.abs() > bv.abs() { (i, v) } else { (bi, bv) });
            let mut a = unit(n, i);
            if v < 0.0 {
                a[i] = -1.0;
            }
            a
        }
        Exponent::P2 => {
            let norm = lp_vec_norm(x, Exponent::P2);
            if norm == 0.0 {
                unit(n, 0)
            } else {
                DVector::from_iterator(n, x.iter().map(|v| v / norm))
            }
        }
        Exponent::Pinf => DVector::from_iterator(n, x.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 })),
    }
}

/// A unit vector of `ℓ^from` at which `b : ℓ^from → ℓ^to` attains its norm,
/// for the exactly computable pairs.
pub fn block_norm_attainer(b: &DMatrix<f64>, from: Exponent, to: Exponent) -> Option<DVector<f64>> {
    let n = b.ncols();
    let (from, to) = effective_pair(b, from, to);
    match (from, to) {
        (Exponent::P1, _) => {
            let j = argmax((0..n).map(|j| lp_vec_norm(b.column(j).clone_owned().as_slice(), to)));
            Some(unit(n, j))
        }
        (_, Exponent::Pinf) => {
            let q = from.conjugate();
            let i = argmax(b.row_iter().map(|r| lp_vec_norm(r.transpose().as_slice(), q)));
            Some(dual_attainer(b.row(i).transpose().as_slice(), from))
        }
        (Exponent::P2, Exponent::P2) => Some(top_right_singular_vector(b).unwrap_or_else(|| unit(n, 0))),
        _ => None,
    }
}

pub(crate) fn argmax(it: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in it.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Largest singular value.
pub fn spectral_norm(b: &DMatrix<f64>) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    b.clone().svd(false, false).singular_values.iter().cloned().fold(0.0, f64::max)
}

/// Sum of singular values.
pub fn nuclear_norm(b: &DMatrix<f64>) -> f64 {
    if b.is_empty() {
        return 0.0;
    }
    b.clone().svd(false, false).singular_values.iter().sum()
}

/// Unit right singular vector for the largest singular value.
pub fn top_right_singular_vector(b: &DMatrix<f64>) -> Option<DVector<f64>> {
    if b.is_empty() {
        return None;
    }
    let svd = b.clone().svd(false, true);
    let v_t = svd.v_t?;
    let i = argmax(svd.singular_values.iter().cloned());
    Some(v_t.row(i).transpose())
}
