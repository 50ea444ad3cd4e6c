//! Projective tensor norms on `E ⊗ F` for finite-dimensional factors.
//!
//! Closed forms are used when one factor is `L¹`/`ℓ¹` (slice sums) or both are
//! Hilbert (nuclear norm). Other pairs get a certified interval: the upper
//! bound is the cost of an explicit decomposition found by search, the lower
//! bound comes from pairing with operators of norm at most one.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, block_norm, dual_attainer, NormEstimate};
use crate::sample;
use crate::spaces::{lp_vec_norm, Exponent, MeasureSpace, SpaceSpec};

/// A tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// `(ℝ^n, ‖·‖_p)`.
    Space(SpaceSpec),
    /// `L^p(Ω)`, one axis entry per atom holding the function value there.
    Lp { space: MeasureSpace, exponent: Exponent },
    /// A completed projective product of two factors, normed by `π`.
    Product(Box<Factor>, Box<Factor>),
}

impl Factor {
    pub fn lp(space: MeasureSpace, exponent: Exponent) -> Self {
        Factor::Lp { space, exponent }
    }

    pub fn dim(&self) -> usize {
        match self {
            Factor::Space(s) => s.dim,
            Factor::Lp { space, .. } => space.len(),
            Factor::Product(a, b) => a.dim() * b.dim(),
        }
    }

    /// Weights of an `L¹`-type factor: ones for `ℓ¹`, the measure for `L¹(Ω)`,
    /// the product measure for a product of two such factors.
    pub fn l1_weights(&self) -> Option<Vec<f64>> {
        match self {
            Factor::Space(s) if s.norm == Exponent::P1 => Some(vec![1.0; s.dim]),
            Factor::Lp { space, exponent: Exponent::P1 } => Some(space.weights().to_vec()),
            Factor::Product(a, b) => {
                let (wa, wb) = (a.l1_weights()?, b.l1_weights()?);
                Some(wa.iter().flat_map(|x| wb.iter().map(move |y| x * y)).collect())
            }
            _ => None,
        }
    }

    /// Isometric identification with `ℓ^p_n`: coefficients are multiplied by
    /// the returned scales.
    fn lp_form(&self) -> Option<(Exponent, Vec<f64>)> {
        match self {
            Factor::Space(s) => Some((s.norm, vec![1.0; s.dim])),
            Factor::Lp { space, exponent } => {
                let scales = space
                    .weights()
                    .iter()
                    .map(|w| match exponent {
                        Exponent::P1 => *w,
                        Exponent::P2 => w.sqrt(),
                        Exponent::Pinf => 1.0,
                    })
                    .collect();
                Some((*exponent, scales))
            }
            Factor::Product(..) => None,
        }
    }

    /// Norm of a vector of this factor.
    pub fn norm(&self, v: &[f64]) -> Result<NormEstimate> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        match self {
            Factor::Product(a, b) => {
                let z = TensorElement::new(vec![(**a).clone(), (**b).clone()], v.to_vec())?;
                pi_norm(&z)
            }
            _ => {
                let (p, scales) = self.lp_form().expect("non-product factor");
                let scaled: Vec<f64> = v.iter().zip(&scales).map(|(x, s)| x * s).collect();
                Ok(NormEstimate::exact(lp_vec_norm(&scaled, p)))
            }
        }
    }
}

/// A dense element of a tensor product, coefficients in row-major order over
/// the factor axes.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorElement {
    factors: Vec<Factor>,
    coefficients: Vec<f64>,
}

impl TensorElement {
    pub fn new(factors: Vec<Factor>, coefficients: Vec<f64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::FactorCount { expected: 2, found: 0 });
        }
        let len: usize = factors.iter().map(Factor::dim).product();
        if coefficients.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} coefficients for shape {:?}",
                coefficients.len(),
                factors.iter().map(Factor::dim).collect::<Vec<_>>()
            )));
        }
        Ok(Self { factors, coefficients })
    }

    /// `u ⊗ v`.
    pub fn simple(f0: Factor, u: &[f64], f1: Factor, v: &[f64]) -> Result<Self> {
        let coefficients = u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        Self::new(vec![f0, f1], coefficients)
    }

    pub fn from_matrix(f0: Factor, f1: Factor, m: &DMatrix<f64>) -> Result<Self> {
        let coefficients = m.transpose().as_slice().to_vec();
        Self::new(vec![f0, f1], coefficients)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn shape(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::dim).collect()
    }

    /// Coefficient matrix of a two-factor element (rows index the first factor).
    pub fn matrix(&self) -> Result<DMatrix<f64>> {
        self.require_factors(2)?;
        let (m, n) = (self.factors[0].dim(), self.factors[1].dim());
        Ok(DMatrix::from_row_slice(m, n, &self.coefficients))
    }

    /// Swap the two factors.
    pub fn transpose(&self) -> Result<Self> {
        let m = self.matrix()?;
        Self::from_matrix(self.factors[1].clone(), self.factors[0].clone(), &m.transpose())
    }

    /// `(A ⊗ B) ⊗ C` from `A ⊗ B ⊗ C`.
    pub fn group_left(&self) -> Result<Self> {
        self.require_factors(3)?;
        let [a, b, c] = [&self.factors[0], &self.factors[1], &self.factors[2]].map(Clone::clone);
        Self::new(vec![Factor::Product(Box::new(a), Box::new(b)), c], self.coefficients.clone())
    }

    /// `A ⊗ (B ⊗ C)` from `A ⊗ B ⊗ C`.
    pub fn group_right(&self) -> Result<Self> {
        self.require_factors(3)?;
        let [a, b, c] = [&self.factors[0], &self.factors[1], &self.factors[2]].map(Clone::clone);
        Self::new(vec![a, Factor::Product(Box::new(b), Box::new(c))], self.coefficients.clone())
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self { coefficients: self.coefficients.iter().map(|c| c * alpha).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &TensorElement) -> Result<Self> {
        if self.factors != other.factors {
            return Err(Error::SpaceMismatch("tensor elements have different factors".into()));
        }
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        Ok(Self { coefficients, ..self.clone() })
    }

    fn require_factors(&self, n: usize) -> Result<()> {
        if self.factors.len() != n {
            return Err(Error::FactorCount { expected: n, found: self.factors.len() });
        }
        Ok(())
    }
}

/// Default number of restarts of the decomposition search.
pub const DEFAULT_RESTARTS: usize = 200;
const DEFAULT_SEED: u64 = 42;

/// Projective norm of a two-factor element.
pub fn pi_norm(z: &TensorElement) -> Result<NormEstimate> {
    z.require_factors(2)?;
    if let Some(v) = exact_pi_norm(z)? {
        return Ok(v);
    }
    pi_norm_bounds(z, DEFAULT_RESTARTS, DEFAULT_SEED)
}

/// Closed forms; `None` when neither applies.
pub fn exact_pi_norm(z: &TensorElement) -> Result<Option<NormEstimate>> {
    let (f0, f1) = (&z.factors[0], &z.factors[1]);
    let m = z.matrix()?;
    if let Some(w) = f0.l1_weights() {
        let mut acc = NormEstimate::zero();
        for (i, wi) in w.iter().enumerate() {
            let row: Vec<f64> = m.row(i).iter().cloned().collect();
            acc = acc.add(f1.norm(&row)?.map(|x| wi * x));
        }
        return Ok(Some(acc));
    }
    if let Some(w) = f1.l1_weights() {
        let mut acc = NormEstimate::zero();
        for (j, wj) in w.iter().enumerate() {
            let col: Vec<f64> = m.column(j).iter().cloned().collect();
            acc = acc.add(f0.norm(&col)?.map(|x| wj * x));
        }
        return Ok(Some(acc));
    }
    if let (Some((Exponent::P2, s0)), Some((Exponent::P2, s1))) = (f0.lp_form(), f1.lp_form()) {
        let scaled = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| s0[i] * m[(i, j)] * s1[j]);
        return Ok(Some(NormEstimate::exact(linalg::nuclear_norm(&scaled))));
    }
    Ok(None)
}

/// Certified interval from the decomposition search and the duality lower
/// bound, regardless of whether a closed form exists.
pub fn pi_norm_bounds(z: &TensorElement, restarts: usize, seed: u64) -> Result<NormEstimate> {
    let upper = decomposition_search(z, restarts, seed)?.cost;
    let lower = duality_lower_bound(z, restarts, seed)?;
    Ok(NormEstimate::bounds(lower, upper))
}

/// A finite representation `z = Σ uᵢ ⊗ vᵢ` with cost `Σ ‖uᵢ‖‖vᵢ‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub cost: f64,
    pub terms: Vec<(DVector<f64>, DVector<f64>)>,
}

impl Decomposition {
    pub fn reconstruct(&self, rows: usize, cols: usize) -> DMatrix<f64> {
        self.terms.iter().fold(DMatrix::zeros(rows, cols), |acc, (u, v)| acc + u * v.transpose())
    }
}

// The problem transported to ℓ^a ⊗ ℓ^b.
struct Transported {
    a: Exponent,
    b: Exponent,
    s0: Vec<f64>,
    s1: Vec<f64>,
    m: DMatrix<f64>,
}

fn transport(z: &TensorElement) -> Result<Transported> {
    z.require_factors(2)?;
    let unsupported = || Error::UnsupportedRegime("bounds need space or L^p factors, not nested products".into());
    let (a, s0) = z.factors[0].lp_form().ok_or_else(unsupported)?;
    let (b, s1) = z.factors[1].lp_form().ok_or_else(unsupported)?;
    let raw = z.matrix()?;
    let m = DMatrix::from_fn(raw.nrows(), raw.ncols(), |i, j| s0[i] * raw[(i, j)] * s1[j]);
    Ok(Transported { a, b, s0, s1, m })
}

/// Upper bound for `π(z)`: greedy rank-one peeling refined by alternating
/// local search, best of `restarts` seeded runs plus the slice and SVD
/// decompositions. Rank is capped at `dim E · dim F`.
pub fn decomposition_search(z: &TensorElement, restarts: usize, seed: u64) -> Result<Decomposition> {
    let tp = transport(z)?;
    let (rows, cols) = tp.m.shape();
    // Canonical scale and sign keep the search homogeneous.
    let pivot = tp.m.iter().cloned().fold(0.0f64, |p, x| if x.abs() > p.abs() { x } else { p });
    if pivot == 0.0 {
        return Ok(Decomposition { cost: 0.0, terms: Vec::new() });
    }
    let zc = &tp.m / pivot;
    let problem = SearchProblem { a: tp.a, b: tp.b, z: zc };

    let mut best = problem.finish(Vec::new());
    let svd = problem.z.clone().svd(true, true);
    if let (Some(u), Some(v_t)) = (&svd.u, &svd.v_t) {
        let terms: Vec<_> = (0..svd.singular_values.len())
            .map(|k| (u.column(k) * svd.singular_values[k], v_t.row(k).transpose()))
            .collect();
        let cand = problem.finish(terms);
        if cand.cost < best.cost {
            best = cand;
        }
    }
    let rank_cap = rows * cols;
    for r in 0..restarts {
        let mut rng = sample::rng(seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let terms = problem.peel(&mut rng, rank_cap);
        let cand = problem.refine(&mut rng, terms);
        if cand.cost < best.cost {
            best = cand;
        }
    }

    let terms = best
        .terms
        .into_iter()
        .map(|(u, v)| {
            let u = DVector::from_fn(rows, |i, _| u[i] * pivot / tp.s0[i]);
            let v = DVector::from_fn(cols, |j, _| v[j] / tp.s1[j]);
            (u, v)
        })
        .collect::<Vec<_>>();
    let cost = terms
        .iter()
        .map(|(u, v)| {
            let nu = z.factors[0].norm(u.as_slice()).map(|n| n.value).unwrap_or(f64::INFINITY);
            let nv = z.factors[1].norm(v.as_slice()).map(|n| n.value).unwrap_or(f64::INFINITY);
            nu * nv
        })
        .sum();
    Ok(Decomposition { cost, terms })
}

struct SearchProblem {
    a: Exponent,
    b: Exponent,
    z: DMatrix<f64>,
}

struct Candidate {
    cost: f64,
    terms: Vec<(DVector<f64>, DVector<f64>)>,
}

impl SearchProblem {
    fn term_cost(&self, terms: &[(DVector<f64>, DVector<f64>)]) -> f64 {
        terms.iter().map(|(u, v)| lp_vec_norm(u.as_slice(), self.a) * lp_vec_norm(v.as_slice(), self.b)).sum()
    }

    fn residual(&self, terms: &[(DVector<f64>, DVector<f64>)]) -> DMatrix<f64> {
        terms.iter().fold(self.z.clone(), |acc, (u, v)| acc - u * v.transpose())
    }

    // Cost of the cheaper slice decomposition of r.
    fn slice_cost(&self, r: &DMatrix<f64>) -> (f64, bool) {
        let by_rows: f64 = r.row_iter().map(|row| lp_vec_norm(row.transpose().as_slice(), self.b)).sum();
        let by_cols: f64 = r.column_iter().map(|c| lp_vec_norm(c.clone_owned().as_slice(), self.a)).sum();
        if by_rows <= by_cols {
            (by_rows, true)
        } else {
            (by_cols, false)
        }
    }

    fn objective(&self, terms: &[(DVector<f64>, DVector<f64>)]) -> f64 {
        self.term_cost(terms) + self.slice_cost(&self.residual(terms)).0
    }

    // Terms plus the slices of the residual: an exact representation of z.
    fn finish(&self, mut terms: Vec<(DVector<f64>, DVector<f64>)>) -> Candidate {
        let r = self.residual(&terms);
        let (m, n) = r.shape();
        let (_, by_rows) = self.slice_cost(&r);
        if by_rows {
            for i in 0..m {
                if r.row(i).iter().any(|&x| x != 0.0) {
                    terms.push((linalg::unit(m, i), r.row(i).transpose()));
                }
            }
        } else {
            for j in 0..n {
                if r.column(j).iter().any(|&x| x != 0.0) {
                    terms.push((r.column(j).clone_owned(), linalg::unit(n, j)));
                }
            }
        }
        terms.retain(|(u, v)| u.iter().any(|&x| x != 0.0) && v.iter().any(|&x| x != 0.0));
        Candidate { cost: self.term_cost(&terms), terms }
    }

    fn peel<R: Rng + ?Sized>(&self, rng: &mut R, rank_cap: usize) -> Vec<(DVector<f64>, DVector<f64>)> {
        let (m, n) = self.z.shape();
        let mut r = self.z.clone();
        let mut terms = Vec::new();
        let rank = rng.gen_range(1..=rank_cap);
        for _ in 0..rank {
            if r.amax() < 1e-14 {
                break;
            }
            let mut v = sample::vector(rng, n);
            let mut u = DVector::zeros(m);
            for _ in 0..6 {
                u = dual_attainer((&r * &v).as_slice(), self.a);
                v = dual_attainer((r.transpose() * &u).as_slice(), self.b);
            }
            let denom = u.norm_squared() * v.norm_squared();
            if denom == 0.0 {
                break;
            }
            let s = (u.transpose() * &r * &v)[(0, 0)] / denom;
            r -= &u * v.transpose() * s;
            terms.push((u * s, v));
        }
        terms
    }

    fn refine<R: Rng + ?Sized>(&self, rng: &mut R, mut terms: Vec<(DVector<f64>, DVector<f64>)>) -> Candidate {
        if terms.is_empty() {
            return self.finish(terms);
        }
        let mut current = self.objective(&terms);
        let mut step = 0.25;
        for _sweep in 0..80 {
            let before = current;
            // Alternate: first the E-side vectors, then the F-side vectors.
            for side in 0..2 {
                for k in 0..terms.len() {
                    let residual = self.residual(&terms);
                    let (u, v) = &terms[k];
                    let toward = if side == 0 {
                        let vv = v.norm_squared();
                        if vv > 0.0 { &residual * v / vv } else { DVector::zeros(u.len()) }
                    } else {
                        let uu = u.norm_squared();
                        if uu > 0.0 { residual.transpose() * u / uu } else { DVector::zeros(v.len()) }
                    };
                    let len = if side == 0 { u.len() } else { v.len() };
                    let noise = sample::vector(rng, len);
                    let scale = if side == 0 { u.amax() } else { v.amax() }.max(1e-3);
                    for dir in [toward.clone(), noise * scale, -toward] {
                        for t in [step, step * 0.1] {
                            let mut trial = terms.clone();
                            if side == 0 {
                                trial[k].0 += &dir * t;
                            } else {
                                trial[k].1 += &dir * t;
                            }
                            let c = self.objective(&trial);
                            if c < current {
                                current = c;
                                terms = trial;
                            }
                        }
                    }
                }
            }
            if before - current <= 1e-10 * before.abs() {
                step *= 0.5;
                if step < 1e-6 {
                    break;
                }
            }
        }
        self.finish(terms)
    }
}

/// Lower bound `sup |⟨T, z⟩| / ‖T‖` over a seeded family of operators
/// `T : E → F′`, normalized by certified upper bounds of their norms.
pub fn duality_lower_bound(z: &TensorElement, samples: usize, seed: u64) -> Result<f64> {
    let tp = transport(z)?;
    let (m, n) = tp.m.shape();
    let dual_b = tp.b.conjugate();
    let value = |t: &DMatrix<f64>| {
        let norm = block_norm(t, tp.a, dual_b).upper;
        if norm > 0.0 {
            pairing_matrix(t, &tp.m).abs() / norm
        } else {
            0.0
        }
    };
    let mut best = 0.0f64;
    let mut candidates = vec![
        tp.m.transpose(),
        tp.m.map(|x| if x < 0.0 { -1.0 } else { 1.0 }).transpose(),
        row_extremal(&tp.m, tp.b),
        column_extremal(&tp.m, tp.a),
    ];
    let svd = tp.m.clone().svd(true, true);
    if let (Some(u), Some(v_t)) = (svd.u, svd.v_t) {
        candidates.push(v_t.transpose() * u.transpose());
    }
    let mut rng = sample::rng(seed);
    candidates.extend((0..samples).map(|_| sample::matrix(&mut rng, n, m)));
    for t in &candidates {
        best = best.max(value(t));
    }
    Ok(best)
}

// ⟨T, z⟩ = Σ_{ij} z_ij (T e_i)_j for T of shape dim F × dim E.
fn pairing_matrix(t: &DMatrix<f64>, z: &DMatrix<f64>) -> f64 {
    let mut s = 0.0;
    for i in 0..z.nrows() {
        for j in 0..z.ncols() {
            s += z[(i, j)] * t[(j, i)];
        }
    }
    s
}

// T e_i attains the F-norm of row i.
fn row_extremal(z: &DMatrix<f64>, b: Exponent) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> =
        z.row_iter().map(|r| dual_attainer(r.transpose().as_slice(), b.conjugate())).collect();
    DMatrix::from_columns(&cols)
}

// Row j of T attains the E-norm of column j.
fn column_extremal(z: &DMatrix<f64>, a: Exponent) -> DMatrix<f64> {
    let rows: Vec<_> =
        z.column_iter().map(|c| dual_attainer(c.clone_owned().as_slice(), a.conjugate()).transpose()).collect();
    DMatrix::from_rows(&rows)
}

/// `⟨T, z⟩ = Σ_{ij} z_ij (T e_i)_j` for `T : E → F′` and `z ∈ E ⊗ F`.
pub fn duality_pairing(t: &DMatrix<f64>, z: &TensorElement) -> Result<f64> {
    let m = z.matrix()?;
    if t.shape() != (m.ncols(), m.nrows()) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, tensor is {}x{}",
            t.nrows(),
            t.ncols(),
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(pairing_matrix(t, &m))
}

/// Norm of `T : E → F′` for two space factors.
pub fn pairing_operator_norm(t: &DMatrix<f64>, z: &TensorElement) -> Result<NormEstimate> {
    match (&z.factors[..], z.factors.len()) {
        ([Factor::Space(e), Factor::Space(f)], 2) => Ok(block_norm(t, e.norm, f.norm.conjugate())),
        _ => Err(Error::UnsupportedRegime("operator norms need two space factors".into())),
    }
}

/// An operator of norm one attaining `⟨T, z⟩ = π(z)`, for two space factors
/// in a closed-form regime.
pub fn extremal_operator(z: &TensorElement) -> Result<DMatrix<f64>> {
    let m = z.matrix()?;
    match (&z.factors[0], &z.factors[1]) {
        (Factor::Space(e), Factor::Space(f)) => {
            if e.norm == Exponent::P1 {
                Ok(row_extremal(&m, f.norm))
            } else if f.norm == Exponent::P1 {
                Ok(column_extremal(&m, e.norm))
            } else if e.norm == Exponent::P2 && f.norm == Exponent::P2 {
                let svd = m.svd(true, true);
                let (u, v_t) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
                let keep: Vec<usize> =
                    (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > 0.0).collect();
                let mut t = DMatrix::zeros(v_t.ncols(), u.nrows());
                for k in keep {
                    t += v_t.row(k).transpose() * u.column(k).transpose();
                }
                Ok(t)
            } else {
                Err(Error::UnsupportedRegime("no closed-form extremal operator".into()))
            }
        }
        _ => Err(Error::UnsupportedRegime("extremal operators need two space factors".into())),
    }
}

/// Outcome of [`check_l1_product_identity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductIdentityReport {
    pub pi_norm: f64,
    pub flattened_norm: f64,
    pub difference: f64,
}

/// `π(z)` on `L¹(Ω₁) ⊗ L¹(Ω₂)` against the `L¹(Ω₁×Ω₂)` norm of the flattened
/// coefficients.
pub fn check_l1_product_identity(
    s1: &MeasureSpace,
    s2: &MeasureSpace,
    z: &TensorElement,
) -> Result<ProductIdentityReport> {
    let expected = [Factor::lp(s1.clone(), Exponent::P1), Factor::lp(s2.clone(), Exponent::P1)];
    if z.factors() != expected {
        return Err(Error::SpaceMismatch("element is not in L1(s1) ⊗ L1(s2)".into()));
    }
    let pi = pi_norm(z)?;
    let product = s1.product(s2);
    let flattened: f64 = z.coefficients.iter().zip(product.weights()).map(|(c, w)| w * c.abs()).sum();
    Ok(ProductIdentityReport { pi_norm: pi.value, flattened_norm: flattened, difference: (pi.value - flattened).abs() })
}

/// Outcome of [`check_commutativity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutativityReport {
    pub forward: NormEstimate,
    pub transposed: NormEstimate,
    /// `|forward − transposed|` of the reported values.
    pub difference: f64,
    /// Exact values agree within the tolerance, or the intervals overlap.
    pub consistent: bool,
}

pub fn check_commutativity(z: &TensorElement, seed: u64, tolerance: f64) -> Result<CommutativityReport> {
    let zt = z.transpose()?;
    let norm = |x: &TensorElement| -> Result<NormEstimate> {
        match exact_pi_norm(x)? {
            Some(v) => Ok(v),
            None => pi_norm_bounds(x, DEFAULT_RESTARTS, seed),
        }
    };
    let (forward, transposed) = (norm(z)?, norm(&zt)?);
    let difference = (forward.value - transposed.value).abs();
    let scale = forward.value.abs().max(1.0);
    let consistent = if forward.exact && transposed.exact {
        difference <= tolerance * scale
    } else {
        forward.lower <= transposed.upper * (1.0 + 1e-12) && transposed.lower <= forward.upper * (1.0 + 1e-12)
    };
    Ok(CommutativityReport { forward, transposed, difference, consistent })
}

/// Outcome of [`check_associativity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociativityReport {
    pub left: NormEstimate,
    pub right: NormEstimate,
    pub difference: f64,
}

/// `π` of `(A ⊗ B) ⊗ C` against `A ⊗ (B ⊗ C)` for a three-factor element.
pub fn check_associativity(z: &TensorElement) -> Result<AssociativityReport> {
    let left = pi_norm(&z.group_left()?)?;
    let right = pi_norm(&z.group_right()?)?;
    Ok(AssociativityReport { left, right, difference: (left.value - right.value).abs() })
}

/// Random two-factor element with coefficients uniform in `[-1, 1)`.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, f0: Factor, f1: Factor) -> TensorElement {
    let m = sample::matrix(rng, f0.dim(), f1.dim());
    TensorElement::from_matrix(f0, f1, &m).expect("shapes match")
}
