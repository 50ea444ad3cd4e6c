//! Finite measure spaces, finite-dimensional normed lattices and vector-valued
//! `L^p` functions over them.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm or integrability exponent. Only `1`, `2` and `∞` are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exponent {
    P1,
    P2,
    Pinf,
}

impl Exponent {
    /// Hölder conjugate: `1 <-> ∞`, `2 <-> 2`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::P1 => Exponent::Pinf,
            Exponent::P2 => Exponent::P2,
            Exponent::Pinf => Exponent::P1,
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::P1 => 1.0,
            Exponent::P2 => 0.5,
            Exponent::Pinf => 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Exponent::P1 => "p1",
            Exponent::P2 => "p2",
            Exponent::Pinf => "pinf",
        }
    }

    pub(crate) fn combine(self, acc: f64, x: f64) -> f64 {
        match self {
            Exponent::P1 => acc + x.abs(),
            Exponent::P2 => acc + x * x,
            Exponent::Pinf => acc.max(x.abs()),
        }
    }

    pub(crate) fn finish(self, acc: f64) -> f64 {
        match self {
            Exponent::P2 => acc.sqrt(),
            _ => acc,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unweighted `ℓ^p` norm of a coordinate slice.
pub fn lp_vec_norm(v: &[f64], p: Exponent) -> f64 {
    p.finish(v.iter().fold(0.0, |acc, &x| p.combine(acc, x)))
}

/// A finite measure space: distinct atoms carrying strictly positive mass.
/// Cloning shares the storage.
#[derive(Debug, Clone)]
pub struct MeasureSpace {
    atoms: Arc<[String]>,
    weights: Arc<[f64]>,
}

impl PartialEq for MeasureSpace {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.atoms, &other.atoms) && Arc::ptr_eq(&self.weights, &other.weights))
            || (self.atoms == other.atoms && self.weights == other.weights)
    }
}

impl MeasureSpace {
    pub fn new(atoms: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasureSpace("no atoms".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasureSpace(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasureSpace(format!(
                    "weight {w} of atom {i} is not strictly positive and finite"
                )));
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(atoms.len());
        for a in &atoms {
            if !seen.insert(a.as_str()) {
                return Err(Error::InvalidMeasureSpace(format!("duplicate atom {a:?}")));
            }
        }
        Ok(Self { atoms: atoms.into(), weights: weights.into() })
    }

    /// Atoms named `"0"`, `"1"`, ... with the given weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let atoms = (0..weights.len()).map(|i| i.to_string()).collect();
        Self::new(atoms, weights.to_vec())
    }

    /// `n` atoms of unit mass (counting measure).
    pub fn counting(n: usize) -> Result<Self> {
        Self::from_weights(&vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> f64 {
        self.weights[atom]
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Product measure. Atoms are pairs in row-major order over `(self, other)`.
    pub fn product(&self, other: &MeasureSpace) -> MeasureSpace {
        let mut atoms = Vec::with_capacity(self.len() * other.len());
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for (a, wa) in self.atoms.iter().zip(self.weights.iter()) {
            for (b, wb) in other.atoms.iter().zip(other.weights.iter()) {
                atoms.push(format!("({},{})", escape_atom(a), escape_atom(b)));
                weights.push(wa * wb);
            }
        }
        MeasureSpace { atoms: atoms.into(), weights: weights.into() }
    }
}

/// Product of two measure spaces.
pub fn product_space(s1: &MeasureSpace, s2: &MeasureSpace) -> MeasureSpace {
    s1.product(s2)
}

// Keeps pair identifiers injective when atom names contain delimiters.
fn escape_atom(a: &str) -> String {
    let mut out = String::with_capacity(a.len());
    for c in a.chars() {
        if matches!(c, '(' | ')' | ',' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// A finite-dimensional normed space `(ℝ^dim, ‖·‖_p)`, optionally carrying the
/// coordinatewise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub dim: usize,
    pub norm: Exponent,
    pub ordered: bool,
}

impl SpaceSpec {
    pub fn new(dim: usize, norm: Exponent, ordered: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSpaceSpec("dimension must be at least 1".into()));
        }
        Ok(Self { dim, norm, ordered })
    }

    /// The real line as an ordered space.
    pub fn scalar() -> Self {
        Self { dim: 1, norm: Exponent::P1, ordered: true }
    }

    /// Dual space: same dimension, conjugate norm, same order.
    pub fn dual(self) -> Self {
        Self { norm: self.norm.conjugate(), ..self }
    }

    pub fn norm_of(&self, v: &[f64]) -> Result<f64> {
        vector_norm(v, self)
    }
}

/// `ℓ^p` norm of `v` in the given space.
pub fn vector_norm(v: &[f64], spec: &SpaceSpec) -> Result<f64> {
    if v.len() != spec.dim {
        return Err(Error::DimensionMismatch { expected: spec.dim, found: v.len() });
    }
    Ok(lp_vec_norm(v, spec.norm))
}

/// A function `Ω → E` stored as one vector per atom, measured in `L^p(Ω;E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpFunction {
    space: MeasureSpace,
    spec: SpaceSpec,
    exponent: Exponent,
    values: Vec<DVector<f64>>,
}

impl LpFunction {
    pub fn new(
        space: MeasureSpace,
        spec: SpaceSpec,
        exponent: Exponent,
        values: Vec<DVector<f64>>,
    ) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::DimensionMismatch { expected: space.len(), found: values.len() });
        }
        if let Some(v) = values.iter().find(|v| v.len() != spec.dim) {
            return Err(Error::DimensionMismatch { expected: spec.dim, found: v.len() });
        }
        Ok(Self { space, spec, exponent, values })
    }

    pub fn from_rows(
        space: MeasureSpace,
        spec: SpaceSpec,
        exponent: Exponent,
        rows: &[Vec<f64>],
    ) -> Result<Self> {
        let values = rows.iter().map(|r| DVector::from_column_slice(r)).collect();
        Self::new(space, spec, exponent, values)
    }

    pub fn zeros(space: MeasureSpace, spec: SpaceSpec, exponent: Exponent) -> Self {
        let values = vec![DVector::zeros(spec.dim); space.len()];
        Self { space, spec, exponent, values }
    }

    /// `1_{atom} · v`.
    pub fn atomic(
        space: MeasureSpace,
        spec: SpaceSpec,
        exponent: Exponent,
        atom: usize,
        v: DVector<f64>,
    ) -> Result<Self> {
        if atom >= space.len() {
            return Err(Error::InvalidArgument(format!("atom index {atom} out of range")));
        }
        if v.len() != spec.dim {
            return Err(Error::DimensionMismatch { expected: spec.dim, found: v.len() });
        }
        let mut f = Self::zeros(space, spec, exponent);
        f.values[atom] = v;
        Ok(f)
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    pub fn values(&self) -> &[DVector<f64>] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &DVector<f64> {
        &self.values[atom]
    }

    pub fn with_exponent(mut self, exponent: Exponent) -> Self {
        self.exponent = exponent;
        self
    }

    /// Weighted `L^p` norm of the function.
    pub fn norm(&self) -> f64 {
        lp_norm(self)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let values = self.values.iter().map(|v| v * alpha).collect();
        Self { values, ..self.clone() }
    }

    /// `self + alpha * other`; both must live in the same space.
    pub fn axpy(&self, alpha: f64, other: &LpFunction) -> Result<Self> {
        if self.space != other.space || self.spec != other.spec {
            return Err(Error::SpaceMismatch("functions live on different spaces".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b * alpha).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn max_abs_diff(&self, other: &LpFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// `(Σ μ(ω) ‖f(ω)‖^p)^{1/p}`, or `max ‖f(ω)‖` for `p = ∞`.
pub fn lp_norm(f: &LpFunction) -> f64 {
    let pointwise = f.values.iter().map(|v| lp_vec_norm(v.as_slice(), f.spec.norm));
    match f.exponent {
        Exponent::P1 => pointwise.zip(f.space.weights()).map(|(n, w)| w * n).sum(),
        Exponent::P2 => pointwise.zip(f.space.weights()).map(|(n, w)| w * n * n).sum::<f64>().sqrt(),
        Exponent::Pinf => pointwise.fold(0.0, f64::max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real() -> SpaceSpec {
        SpaceSpec::new(1, Exponent::P2, true).unwrap()
    }

    #[test]
    fn product_of_singletons() {
        let a = MeasureSpace::new(vec!["a".into()], vec![1.0]).unwrap();
        let x = MeasureSpace::new(vec!["x".into()], vec![1.0]).unwrap();
        let p = product_space(&a, &x);
        assert_eq!(p.atoms(), &["(a,x)".to_string()]);
        assert_eq!(p.weights(), &[1.0]);
    }

    #[test]
    fn product_weights_multiply_row_major() {
        let s1 = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        let s2 = MeasureSpace::from_weights(&[3.0]).unwrap();
        assert_eq!(product_space(&s1, &s2).weights(), &[3.0, 6.0]);

        let h = MeasureSpace::from_weights(&[0.5, 0.5]).unwrap();
        let p = product_space(&h, &h);
        assert_eq!(p.weights(), &[0.25; 4]);
        assert_eq!(p.total_mass(), 1.0);
        assert_eq!(p.atoms()[1], "(0,1)");
    }

    #[test]
    fn product_ids_stay_unique_with_delimiters() {
        let s1 = MeasureSpace::new(vec!["a,b".into(), "a".into()], vec![1.0, 1.0]).unwrap();
        let s2 = MeasureSpace::new(vec!["c".into(), "b,c".into()], vec![1.0, 1.0]).unwrap();
        let p = product_space(&s1, &s2);
        assert!(MeasureSpace::new(p.atoms().to_vec(), p.weights().to_vec()).is_ok());
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(MeasureSpace::from_weights(&[]).is_err());
        assert!(MeasureSpace::from_weights(&[1.0, 0.0]).is_err());
        assert!(MeasureSpace::from_weights(&[-1.0]).is_err());
        assert!(MeasureSpace::from_weights(&[f64::INFINITY]).is_err());
        assert!(MeasureSpace::from_weights(&[f64::NAN]).is_err());
        assert!(MeasureSpace::new(vec!["a".into(), "a".into()], vec![1.0, 1.0]).is_err());
        assert!(SpaceSpec::new(0, Exponent::P1, false).is_err());
    }

    #[test]
    fn vector_norms() {
        let s = |p| SpaceSpec::new(2, p, false).unwrap();
        assert_eq!(vector_norm(&[3.0, 4.0], &s(Exponent::P2)).unwrap(), 5.0);
        assert_eq!(vector_norm(&[3.0, -4.0], &s(Exponent::P1)).unwrap(), 7.0);
        assert_eq!(vector_norm(&[3.0, -4.0], &s(Exponent::Pinf)).unwrap(), 4.0);
        assert_eq!(
            vector_norm(&[1.0], &s(Exponent::P1)),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn weighted_lp_norms() {
        let mu = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        let ones = vec![vec![1.0], vec![1.0]];
        let f = LpFunction::from_rows(mu.clone(), real(), Exponent::P1, &ones).unwrap();
        assert_eq!(lp_norm(&f), 3.0);
        assert_eq!(lp_norm(&f.clone().with_exponent(Exponent::Pinf)), 1.0);

        let mu = MeasureSpace::from_weights(&[1.0, 4.0]).unwrap();
        let f = LpFunction::from_rows(mu, real(), Exponent::P2, &[vec![1.0], vec![2.0]]).unwrap();
        // 1·1² + 4·2² = 17
        assert!((lp_norm(&f) - 17f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn function_shape_is_checked() {
        let mu = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        assert!(LpFunction::from_rows(mu.clone(), real(), Exponent::P1, &[vec![1.0]]).is_err());
        assert!(LpFunction::from_rows(mu, real(), Exponent::P1, &[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
