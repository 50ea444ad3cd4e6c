//! Order structure: positivity of functions, kernels and operators, the
//! modulus and the regular norm.
//!
//! Between coordinatewise-ordered `ℝⁿ` spaces the modulus `|T| = sup{T, −T}`
//! of a matrix is its entrywise absolute value, and a block operator is
//! positive exactly when every block is entrywise nonnegative.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels::{kernel_to_operator, operator_to_kernel, Kernel};
use crate::linalg::{block_norm, NormEstimate};
use crate::operators::{apply, operator_norm, BlockOperator, Endpoint};
use crate::sample;
use crate::spaces::{Exponent, LpFunction, MeasureSpace, SpaceSpec};
use crate::tensor::{pi_norm, Factor, TensorElement};

/// Cone boundary for positivity of computed quantities.
pub const COMPUTED_CONE_TOLERANCE: f64 = -1e-12;

/// Operator norm, regular norm and modulus of a block operator.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularNormReport {
    pub operator_norm: f64,
    pub regular_norm: f64,
    pub modulus: BlockOperator,
    /// `regular_norm / operator_norm`; 1 for the zero operator.
    pub ratio: f64,
}

fn require_ordered(spec: &SpaceSpec, what: &'static str) -> Result<()> {
    if spec.ordered {
        Ok(())
    } else {
        Err(Error::Unordered(what))
    }
}

fn require_ordered_operator(t: &BlockOperator, what: &'static str) -> Result<()> {
    require_ordered(&t.domain().spec, what)?;
    require_ordered(&t.codomain().spec, what)
}

fn nonnegative(m: &DMatrix<f64>) -> bool {
    m.iter().all(|&x| x >= 0.0)
}

/// Exact sign test on every coordinate of every value.
pub fn is_positive_function(f: &LpFunction) -> Result<bool> {
    require_ordered(f.spec(), "function positivity")?;
    Ok(f.values().iter().all(|v| v.iter().all(|&x| x >= 0.0)))
}

pub fn is_positive_kernel(k: &Kernel) -> Result<bool> {
    require_ordered(k.domain_spec(), "kernel positivity")?;
    require_ordered(k.codomain_spec(), "kernel positivity")?;
    Ok(k.blocks().iter().all(nonnegative))
}

/// How [`is_positive_operator`] decides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityMode {
    /// Entrywise sign test on the blocks.
    Exact,
    /// Apply the operator to the positive atomic inputs `e_i·1_ω` and to
    /// `samples` seeded random positive functions.
    Sampled { seed: u64, samples: usize },
}

pub fn is_positive_operator(t: &BlockOperator, mode: PositivityMode) -> Result<bool> {
    Ok(positivity_witness(t, mode)?.is_none())
}

/// A positive input whose image leaves the cone, if one exists.
///
/// In sampled mode the atomic inputs `f = u·1_A` with `A` a single atom and
/// `u` a basis vector are tried first; they expose every negative entry.
pub fn positivity_witness(t: &BlockOperator, mode: PositivityMode) -> Result<Option<LpFunction>> {
    require_ordered_operator(t, "operator positivity")?;
    let d = t.domain();
    match mode {
        PositivityMode::Exact => {
            let n1 = d.space.len();
            for (idx, b) in t.blocks().iter().enumerate() {
                if let Some((_, c)) = first_negative(b) {
                    return Ok(Some(atomic_probe(d, idx % n1, c)));
                }
            }
            Ok(None)
        }
        PositivityMode::Sampled { seed, samples } => {
            let out_of_cone = |f: &LpFunction| -> Result<bool> {
                let g = apply(t, f)?;
                Ok(g.values().iter().any(|v| v.iter().any(|&x| x < 0.0)))
            };
            for a in 0..d.space.len() {
                for i in 0..d.spec.dim {
                    let f = atomic_probe(d, a, i);
                    if out_of_cone(&f)? {
                        return Ok(Some(f));
                    }
                }
            }
            let mut rng = sample::rng(seed);
            for _ in 0..samples {
                let f = sample::positive_function(&mut rng, &d.space, d.spec, d.exponent);
                if out_of_cone(&f)? {
                    return Ok(Some(f));
                }
            }
            Ok(None)
        }
    }
}

fn first_negative(b: &DMatrix<f64>) -> Option<(usize, usize)> {
    for c in 0..b.ncols() {
        for r in 0..b.nrows() {
            if b[(r, c)] < 0.0 {
                return Some((r, c));
            }
        }
    }
    None
}

// u·1_A with A = {atom}, u = e_i, scaled to unit norm.
fn atomic_probe(d: &Endpoint, atom: usize, i: usize) -> LpFunction {
    let scale = match d.exponent {
        Exponent::P1 => 1.0 / d.space.weight(atom),
        Exponent::P2 => 1.0 / d.space.weight(atom).sqrt(),
        Exponent::Pinf => 1.0,
    };
    let mut u = DVector::zeros(d.spec.dim);
    u[i] = scale;
    LpFunction::atomic(d.space.clone(), d.spec, d.exponent, atom, u).expect("in range")
}

/// Entrywise absolute value of every block.
pub fn modulus(t: &BlockOperator) -> Result<BlockOperator> {
    require_ordered_operator(t, "modulus")?;
    Ok(t.map_blocks(|b| b.abs()))
}

/// `‖T‖_r = ‖|T|‖`, in the regimes where the operator norm is exact.
pub fn regular_norm(t: &BlockOperator) -> Result<RegularNormReport> {
    let m = modulus(t)?;
    let op = operator_norm(t);
    let reg = operator_norm(&m);
    if !op.exact || !reg.exact {
        return Err(Error::NonExactRegime {
            p: t.domain().exponent.as_str(),
            q: t.codomain().exponent.as_str(),
        });
    }
    let ratio = if op.value > 0.0 { reg.value / op.value } else { 1.0 };
    Ok(RegularNormReport { operator_norm: op.value, regular_norm: reg.value, modulus: m, ratio })
}

/// Regular norm of a single matrix `E → F′`.
pub fn block_regular_norm(b: &DMatrix<f64>, from: Exponent, to: Exponent) -> NormEstimate {
    block_norm(&b.abs(), from, to)
}

/// Outcome of [`check_regular_kernel_correspondence`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegularKernelReport {
    /// `‖T_k‖_r` computed on the operator side.
    pub operator_regular_norm: f64,
    /// `max ‖k(ω₁,ω₂)‖_r` computed blockwise.
    pub kernel_regular_norm: f64,
    pub difference: f64,
    pub kernel_positive: bool,
    pub operator_positive: bool,
    /// `max |T_{|k|} − |T_k||` over all entries.
    pub modulus_mismatch: f64,
}

impl RegularKernelReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.difference <= tolerance && self.kernel_positive == self.operator_positive && self.modulus_mismatch == 0.0
    }
}

pub fn check_regular_kernel_correspondence(k: &Kernel) -> Result<RegularKernelReport> {
    let t = kernel_to_operator(k);
    let reg = regular_norm(&t)?;
    let (e, f) = (k.domain_spec().norm, k.codomain_spec().norm);
    let blockwise = k
        .blocks()
        .iter()
        .map(|b| block_regular_norm(b, e, f))
        .fold(NormEstimate::zero(), NormEstimate::max);
    let abs_kernel = k.map_blocks(|b| b.abs());
    let modulus_mismatch = kernel_to_operator(&abs_kernel).max_abs_diff(&reg.modulus);
    Ok(RegularKernelReport {
        operator_regular_norm: reg.regular_norm,
        kernel_regular_norm: blockwise.value,
        difference: (reg.regular_norm - blockwise.value).abs(),
        kernel_positive: is_positive_kernel(k)?,
        operator_positive: is_positive_operator(&t, PositivityMode::Exact)?,
        modulus_mismatch,
    })
}

/// `|T_k|` read back as a kernel.
pub fn modulus_kernel(k: &Kernel) -> Result<Kernel> {
    operator_to_kernel(&modulus(&kernel_to_operator(k))?)
}

/// Largest size accepted by [`counterexample_sequence`].
pub const MAX_COUNTEREXAMPLE_SIZE: usize = 1024;

/// Sylvester–Hadamard matrix of order `n` (a power of two).
pub fn hadamard(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("{n} is not a power of two")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| if (i & j).count_ones() % 2 == 0 { 1.0 } else { -1.0 }))
}

/// `S_n = H_n / n^{3/4}` on `ℓ²_n`, as a single-atom block operator.
pub fn scaled_hadamard_operator(n: usize) -> Result<BlockOperator> {
    let h = hadamard(n)? / (n as f64).powf(0.75);
    let spec = SpaceSpec::new(n, Exponent::P2, true)?;
    let point = MeasureSpace::counting(1)?;
    let end = Endpoint::new(point, spec, Exponent::P2);
    BlockOperator::new(end.clone(), end, vec![vec![h]])
}

/// Regular operators with `‖S_n‖ = n^{-1/4} → 0` and `‖S_n‖_r = n^{1/4} → ∞`,
/// for `n = 2, 4, …, max_n`.
pub fn counterexample_sequence(max_n: usize) -> Result<Vec<(usize, RegularNormReport)>> {
    if max_n < 2 || !max_n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("max_n = {max_n} must be a power of two >= 2")));
    }
    if max_n > MAX_COUNTEREXAMPLE_SIZE {
        return Err(Error::InvalidArgument(format!("max_n = {max_n} exceeds {MAX_COUNTEREXAMPLE_SIZE}")));
    }
    let mut out = Vec::new();
    let mut n = 2;
    while n <= max_n {
        out.push((n, regular_norm(&scaled_hadamard_operator(n)?)?));
        n *= 2;
    }
    Ok(out)
}

/// Outcome of [`p_tensor_norm_l1_factor`].
#[derive(Debug, Clone, PartialEq)]
pub struct PTensorReport {
    /// `L¹(Ω;F)` norm of the slice function.
    pub norm: f64,
    /// Every coefficient is nonnegative.
    pub tensor_positive: bool,
    /// The identified function takes values in `F₊`.
    pub function_positive: bool,
    /// The identified function in `L¹(Ω;F)`.
    pub function: LpFunction,
}

/// Norm and order check for `L¹(Ω) ⊗_p F ≅ L¹(Ω;F)`.
pub fn p_tensor_norm_l1_factor(z: &TensorElement) -> Result<PTensorReport> {
    if z.factors().len() != 2 {
        return Err(Error::FactorCount { expected: 2, found: z.factors().len() });
    }
    let m = z.matrix()?;
    let (l1_axis, other) = match (&z.factors()[0], &z.factors()[1]) {
        (f0, f1) if is_ordered_l1(f0) => (0, f1),
        (f0, f1) if is_ordered_l1(f1) => (1, f0),
        _ => return Err(Error::NoL1Factor),
    };
    let space = match &z.factors()[l1_axis] {
        Factor::Lp { space, .. } => space.clone(),
        Factor::Space(s) => MeasureSpace::counting(s.dim)?,
        Factor::Product(..) => unreachable!("is_ordered_l1 excludes products"),
    };
    let spec = match other {
        Factor::Space(s) => {
            require_ordered(s, "p-tensor product")?;
            *s
        }
        Factor::Lp { space, exponent } => SpaceSpec::new(space.len(), *exponent, true)?,
        Factor::Product(..) => return Err(Error::UnsupportedRegime("nested product as lattice factor".into())),
    };
    let slices: Vec<DVector<f64>> = if l1_axis == 0 {
        m.row_iter().map(|r| r.transpose()).collect()
    } else {
        m.column_iter().map(|c| c.clone_owned()).collect()
    };
    // An L^p lattice factor is measured through its weights.
    let weighted: Vec<DVector<f64>> = match other {
        Factor::Lp { space: inner, exponent } => slices
            .iter()
            .map(|v| {
                DVector::from_fn(v.len(), |i, _| {
                    let w = inner.weight(i);
                    v[i] * match exponent {
                        Exponent::P1 => w,
                        Exponent::P2 => w.sqrt(),
                        Exponent::Pinf => 1.0,
                    }
                })
            })
            .collect(),
        _ => slices.clone(),
    };
    let measured = LpFunction::new(space.clone(), spec, Exponent::P1, weighted)?;
    let function = LpFunction::new(space, spec, Exponent::P1, slices)?;
    Ok(PTensorReport {
        norm: measured.norm(),
        tensor_positive: z.coefficients().iter().all(|&c| c >= 0.0),
        function_positive: is_positive_function(&function)?,
        function,
    })
}

fn is_ordered_l1(f: &Factor) -> bool {
    match f {
        Factor::Lp { exponent: Exponent::P1, .. } => true,
        Factor::Space(s) => s.norm == Exponent::P1 && s.ordered,
        _ => false,
    }
}

/// `π`-norm in the same regime, for comparison with the `p`-tensor norm.
pub fn p_tensor_matches_pi(z: &TensorElement) -> Result<f64> {
    let p = p_tensor_norm_l1_factor(z)?.norm;
    Ok((p - pi_norm(z)?.value).abs())
}

/// Outcome of [`regular_duality_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RegularDualityReport {
    /// `‖|S|‖_{E→F′}`.
    pub regular_norm: f64,
    /// `sup |ψ_S(e_i ⊗ v)|` over the extreme points of the unit ball of `ℓ¹(F)`.
    pub functional_norm: f64,
    pub difference: f64,
    pub operator_positive: bool,
    pub functional_positive: bool,
    pub probes: usize,
}

impl RegularDualityReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.difference <= tolerance && self.operator_positive == self.functional_positive
    }
}

/// Checks that `S ↦ ψ_S`, `ψ_S(u ⊗ v) = ⟨Su, v⟩`, is an isometric lattice
/// isomorphism from the regular operators `E → F′` onto `(E ⊗_p F)′` where
/// `E = ℓ¹` makes `E ⊗_p F = ℓ¹(F)`.
///
/// `s` has shape `dim F × dim E`; `f` is the predual lattice `F`.
pub fn regular_duality_check(
    s: &DMatrix<f64>,
    e: &SpaceSpec,
    f: &SpaceSpec,
    seed: u64,
    probes: usize,
) -> Result<RegularDualityReport> {
    if e.norm != Exponent::P1 || !e.ordered {
        return Err(Error::UnsupportedRegime("domain lattice must be ordered l1".into()));
    }
    require_ordered(f, "regular duality")?;
    if s.shape() != (f.dim, e.dim) {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{}, expected {}x{}",
            s.nrows(),
            s.ncols(),
            f.dim,
            e.dim
        )));
    }
    let regular_norm = block_norm(&s.abs(), Exponent::P1, f.norm.conjugate()).value;
    // sup over ‖v‖_F ≤ 1 of ⟨S e_i, v⟩ is the dual norm of the column.
    let functional_norm = s
        .column_iter()
        .map(|c| crate::spaces::lp_vec_norm(c.clone_owned().as_slice(), f.norm.conjugate()))
        .fold(0.0, f64::max);

    let operator_positive = s.iter().all(|&x| x >= 0.0);
    let mut rng = sample::rng(seed);
    let mut functional_positive = true;
    'outer: for i in 0..e.dim {
        let mut candidates: Vec<DVector<f64>> = (0..f.dim).map(|j| crate::linalg::unit(f.dim, j)).collect();
        candidates.extend((0..probes).map(|_| DVector::from_fn(f.dim, |_, _| rng.gen_range(0.0..1.0))));
        for v in candidates {
            if s.column(i).dot(&v) < COMPUTED_CONE_TOLERANCE {
                functional_positive = false;
                break 'outer;
            }
        }
    }
    Ok(RegularDualityReport {
        regular_norm,
        functional_norm,
        difference: (regular_norm - functional_norm).abs(),
        operator_positive,
        functional_positive,
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ordered(dim: usize, norm: Exponent) -> SpaceSpec {
        SpaceSpec::new(dim, norm, true).unwrap()
    }

    fn endpoint(w: &[f64], spec: SpaceSpec, p: Exponent) -> Endpoint {
        Endpoint::new(MeasureSpace::from_weights(w).unwrap(), spec, p)
    }

    #[test]
    fn function_positivity_is_a_strict_sign_test() {
        let s = MeasureSpace::from_weights(&[1.0, 1.0]).unwrap();
        let spec = ordered(2, Exponent::P1);
        let f = LpFunction::from_rows(s.clone(), spec, Exponent::P1, &[vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        assert!(is_positive_function(&f).unwrap());
        assert!(is_positive_function(&LpFunction::zeros(s.clone(), spec, Exponent::P1)).unwrap());
        let g = LpFunction::from_rows(s.clone(), spec, Exponent::P1, &[vec![1.0, -1e-300], vec![0.0, 0.0]]).unwrap();
        assert!(!is_positive_function(&g).unwrap());
        let unordered = SpaceSpec::new(2, Exponent::P1, false).unwrap();
        assert!(is_positive_function(&LpFunction::zeros(s, unordered, Exponent::P1)).is_err());
    }

    #[test]
    fn negative_entry_witness_replays_atomic_indicator() {
        let d = endpoint(&[1.0, 2.0], ordered(2, Exponent::P1), Exponent::P1);
        let c = endpoint(&[1.0], ordered(2, Exponent::Pinf), Exponent::Pinf);
        let t = BlockOperator::from_fn(d, c, |_, _| DMatrix::identity(2, 2)).unwrap();
        assert!(is_positive_operator(&t, PositivityMode::Exact).unwrap());
        assert!(is_positive_operator(&t, PositivityMode::Sampled { seed: 1, samples: 50 }).unwrap());

        let mut blocks: Vec<Vec<DMatrix<f64>>> = vec![vec![DMatrix::identity(2, 2), DMatrix::identity(2, 2)]];
        blocks[0][1][(0, 1)] = -0.5;
        let t = BlockOperator::new(t.domain().clone(), t.codomain().clone(), blocks).unwrap();
        let exact = positivity_witness(&t, PositivityMode::Exact).unwrap().unwrap();
        let sampled = positivity_witness(&t, PositivityMode::Sampled { seed: 1, samples: 0 }).unwrap().unwrap();
        assert_eq!(exact, sampled);
        assert_eq!(exact.value(1)[1], 0.5);
        assert!(apply(&t, &exact).unwrap().value(0)[0] < 0.0);
    }

    #[test]
    fn modulus_and_regular_norm_of_scalars() {
        let d = endpoint(&[1.0], ordered(1, Exponent::P1), Exponent::P1);
        let c = endpoint(&[1.0], ordered(1, Exponent::Pinf), Exponent::Pinf);
        let t = BlockOperator::new(d, c, vec![vec![DMatrix::from_element(1, 1, -3.0)]]).unwrap();
        assert_eq!(modulus(&t).unwrap().block(0, 0)[(0, 0)], 3.0);
        let r = regular_norm(&t).unwrap();
        assert_eq!((r.operator_norm, r.regular_norm, r.ratio), (3.0, 3.0, 1.0));
    }

    #[test]
    fn hadamard_four() {
        let h = hadamard(4).unwrap();
        assert_eq!(&h * h.transpose(), DMatrix::identity(4, 4) * 4.0);
        let spec = ordered(4, Exponent::P2);
        let end = endpoint(&[1.0], spec, Exponent::P2);
        let t = BlockOperator::new(end.clone(), end, vec![vec![h]]).unwrap();
        let r = regular_norm(&t).unwrap();
        assert!((r.operator_norm - 2.0).abs() < 1e-12);
        assert!((r.regular_norm - 4.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_small_sizes() {
        let seq = counterexample_sequence(4).unwrap();
        assert_eq!(seq.len(), 2);
        assert!((seq[0].1.operator_norm - 0.840_896_415_253_714_5).abs() < 1e-9);
        assert!((seq[0].1.regular_norm - 1.189_207_115_002_721).abs() < 1e-9);
        assert!((seq[1].1.operator_norm - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert!((seq[1].1.regular_norm - std::f64::consts::SQRT_2).abs() < 1e-9);
        assert!(counterexample_sequence(6).is_err());
        assert!(counterexample_sequence(2048).is_err());
        assert!(counterexample_sequence(1).is_err());
    }

    #[test]
    fn p_tensor_examples() {
        let s = MeasureSpace::from_weights(&[1.0, 2.0]).unwrap();
        let f = Factor::Space(ordered(2, Exponent::P2));
        let z = TensorElement::new(vec![Factor::lp(s.clone(), Exponent::P1), f.clone()], vec![3.0, 4.0, 0.0, 1.0])
            .unwrap();
        let r = p_tensor_norm_l1_factor(&z).unwrap();
        assert_eq!(r.norm, 7.0);
        assert!(r.tensor_positive && r.function_positive);

        let v = [0.5, -1.5];
        let z = TensorElement::simple(Factor::lp(s.clone(), Exponent::P1), &[1.0, 1.0], f.clone(), &v).unwrap();
        let r = p_tensor_norm_l1_factor(&z).unwrap();
        assert!((r.norm - 3.0 * (2.5f64).sqrt()).abs() < 1e-14);
        assert!(!r.tensor_positive && !r.function_positive);

        let no_l1 = TensorElement::new(vec![f.clone(), f], vec![0.0; 4]).unwrap();
        assert_eq!(p_tensor_norm_l1_factor(&no_l1), Err(Error::NoL1Factor));
    }

    #[test]
    fn regular_duality_rank_one() {
        let e = ordered(3, Exponent::P1);
        let f = ordered(2, Exponent::P1);
        let mut s = DMatrix::zeros(2, 3);
        s[(0, 0)] = 0.5;
        s[(1, 0)] = 2.0;
        let r = regular_duality_check(&s, &e, &f, 0, 10).unwrap();
        assert_eq!(r.regular_norm, 2.0);
        assert_eq!(r.functional_norm, 2.0);
        assert!(r.operator_positive && r.functional_positive);
        let zero = regular_duality_check(&DMatrix::zeros(2, 3), &e, &f, 0, 10).unwrap();
        assert_eq!(zero.regular_norm, 0.0);
        assert!(regular_duality_check(&s, &ordered(3, Exponent::P2), &f, 0, 10).is_err());
    }
}
