//! Kernels `k : Ω₁ × Ω₂ → L(E, F′)` and their integral operators.
//!
//! Weight convention: kernels are unweighted, operator blocks carry the
//! domain measure, `B(ω₂,ω₁) = μ₁(ω₁)·k(ω₁,ω₂)`. This discretizes
//! `⟨(T_k f)(ω₂), v⟩ = ∫ ⟨k(ω₁,ω₂) f(ω₁), v⟩ dμ₁(ω₁)`.
//!
//! On a finite atomic space every equivalence class has exactly one
//! representative, so weak*-measurability and liftings play no role and the
//! weak*-essential sup norm is the plain maximum of blockwise operator norms.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{block_norm, NormEstimate};
use crate::operators::{apply, norm_witness, operator_norm, BlockOperator, Endpoint};
use crate::sample;
use crate::spaces::{Exponent, LpFunction, MeasureSpace, SpaceSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    space1: MeasureSpace,
    space2: MeasureSpace,
    domain_spec: SpaceSpec,
    codomain_spec: SpaceSpec,
    // row-major over (ω₁, ω₂); each block is dim F′ × dim E
    blocks: Vec<DMatrix<f64>>,
}

impl Kernel {
    /// `blocks[ω₁][ω₂]` is `k(ω₁,ω₂)`.
    pub fn new(
        space1: MeasureSpace,
        space2: MeasureSpace,
        domain_spec: SpaceSpec,
        codomain_spec: SpaceSpec,
        blocks: Vec<Vec<DMatrix<f64>>>,
    ) -> Result<Self> {
        let (n1, n2) = (space1.len(), space2.len());
        if blocks.len() != n1 {
            return Err(Error::ShapeMismatch(format!("expected {n1} block rows, found {}", blocks.len())));
        }
        let mut flat = Vec::with_capacity(n1 * n2);
        for (i, row) in blocks.into_iter().enumerate() {
            if row.len() != n2 {
                return Err(Error::ShapeMismatch(format!(
                    "block row {i}: expected {n2} blocks, found {}",
                    row.len()
                )));
            }
            for (j, b) in row.into_iter().enumerate() {
                if b.shape() != (codomain_spec.dim, domain_spec.dim) {
                    return Err(Error::ShapeMismatch(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.nrows(),
                        b.ncols(),
                        codomain_spec.dim,
                        domain_spec.dim
                    )));
                }
                flat.push(b);
            }
        }
        Ok(Self { space1, space2, domain_spec, codomain_spec, blocks: flat })
    }

    pub fn from_fn(
        space1: MeasureSpace,
        space2: MeasureSpace,
        domain_spec: SpaceSpec,
        codomain_spec: SpaceSpec,
        mut f: impl FnMut(usize, usize) -> DMatrix<f64>,
    ) -> Result<Self> {
        let blocks = (0..space1.len()).map(|i| (0..space2.len()).map(|j| f(i, j)).collect()).collect();
        Self::new(space1, space2, domain_spec, codomain_spec, blocks)
    }

    pub fn space1(&self) -> &MeasureSpace {
        &self.space1
    }

    pub fn space2(&self) -> &MeasureSpace {
        &self.space2
    }

    pub fn domain_spec(&self) -> &SpaceSpec {
        &self.domain_spec
    }

    pub fn codomain_spec(&self) -> &SpaceSpec {
        &self.codomain_spec
    }

    /// `k(ω₁,ω₂)`.
    pub fn block(&self, a1: usize, a2: usize) -> &DMatrix<f64> {
        &self.blocks[a1 * self.space2.len() + a2]
    }

    /// Blocks in row-major `(ω₁, ω₂)` order.
    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn map_blocks(&self, f: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> Self {
        Self { blocks: self.blocks.iter().map(f).collect(), ..self.clone() }
    }

    pub fn linear_combination(&self, alpha: f64, other: &Kernel, beta: f64) -> Result<Self> {
        if self.space1 != other.space1
            || self.space2 != other.space2
            || self.domain_spec != other.domain_spec
            || self.codomain_spec != other.codomain_spec
        {
            return Err(Error::SpaceMismatch("kernels live on different spaces".into()));
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * alpha + b * beta).collect();
        Ok(Self { blocks, ..self.clone() })
    }

    /// `max_{(ω₁,ω₂)} ‖k(ω₁,ω₂)‖_{E→F′}`.
    pub fn sup_norm(&self) -> NormEstimate {
        self.blocks
            .iter()
            .map(|b| block_norm(b, self.domain_spec.norm, self.codomain_spec.norm))
            .fold(NormEstimate::zero(), NormEstimate::max)
    }

    /// Largest relative entrywise deviation from `other`.
    pub fn max_rel_diff(&self, other: &Kernel) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| rel_diff(*x, *y)))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// `T_k : L¹(Ω₁;E) → L^∞(Ω₂;F′)`.
pub fn kernel_to_operator(k: &Kernel) -> BlockOperator {
    integral_operator(k, Exponent::P1, Exponent::Pinf)
}

/// The integral operator of `k` measured as `L^p(Ω₁;E) → L^q(Ω₂;F′)`.
pub fn integral_operator(k: &Kernel, p: Exponent, q: Exponent) -> BlockOperator {
    let domain = Endpoint::new(k.space1.clone(), k.domain_spec, p);
    let codomain = Endpoint::new(k.space2.clone(), k.codomain_spec, q);
    BlockOperator::from_fn(domain, codomain, |a2, a1| k.block(a1, a2) * k.space1.weight(a1))
        .expect("kernel blocks have operator block shapes")
}

/// Inverse of [`kernel_to_operator`]: `k(ω₁,ω₂) = B(ω₂,ω₁)/μ₁(ω₁)`.
pub fn operator_to_kernel(t: &BlockOperator) -> Result<Kernel> {
    let (d, c) = (t.domain(), t.codomain());
    if d.exponent != Exponent::P1 || c.exponent != Exponent::Pinf {
        return Err(Error::WrongExponents(format!(
            "kernel representation needs L1 -> Linf, found {} -> {}",
            d.exponent, c.exponent
        )));
    }
    Kernel::from_fn(d.space.clone(), c.space.clone(), d.spec, c.spec, |a1, a2| {
        t.block(a2, a1) / d.space.weight(a1)
    })
}

/// Density of `T ∈ L(L¹(Ω), F′)`, encoded with a one-atom codomain space.
///
/// The density is read off by applying `T` to the atomic indicators:
/// `k(ω) = T(1_ω)/μ(ω)`, so that `Tf = Σ_ω μ(ω) f(ω) k(ω)`.
pub fn extract_density(t: &BlockOperator) -> Result<Kernel> {
    let (d, c) = (t.domain(), t.codomain());
    if d.spec.dim != 1 {
        return Err(Error::SpaceMismatch(format!("domain must be scalar, found dimension {}", d.spec.dim)));
    }
    if c.space.len() != 1 {
        return Err(Error::SpaceMismatch(format!(
            "codomain must be a single atom, found {} atoms",
            c.space.len()
        )));
    }
    if d.exponent != Exponent::P1 {
        return Err(Error::WrongExponents(format!("domain must be L1, found {}", d.exponent)));
    }
    let mut columns = Vec::with_capacity(d.space.len());
    for a in 0..d.space.len() {
        let indicator = LpFunction::atomic(d.space.clone(), d.spec, d.exponent, a, DVector::from_element(1, 1.0))?;
        let image = apply(t, &indicator)?;
        columns.push(image.value(0) / d.space.weight(a));
    }
    Kernel::from_fn(d.space.clone(), c.space.clone(), d.spec, c.spec, |a1, _| {
        DMatrix::from_column_slice(c.spec.dim, 1, columns[a1].as_slice())
    })
}

/// Outcome of [`check_isometry`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryReport {
    pub sup_norm: NormEstimate,
    pub operator_norm: NormEstimate,
    pub difference: f64,
    /// Scaled atomic input attaining the operator norm (exact regimes only).
    pub witness: Option<LpFunction>,
    pub witness_value: Option<f64>,
    /// Largest `‖T_k f‖_∞` over the random unit-norm probes.
    pub sampled_max: f64,
    pub samples: usize,
}

impl IsometryReport {
    pub fn probe_excess(&self) -> f64 {
        self.sampled_max - self.sup_norm.upper
    }

    pub fn passes(&self, tolerance: f64, probe_tolerance: f64) -> bool {
        self.sup_norm.exact
            && self.operator_norm.exact
            && self.difference <= tolerance
            && self.probe_excess() <= probe_tolerance
    }
}

/// Compares the kernel sup norm with the norm of `T_k` and probes `T_k` on
/// seeded random unit-norm inputs.
pub fn check_isometry(k: &Kernel, samples: usize, seed: u64) -> IsometryReport {
    let t = kernel_to_operator(k);
    let sup_norm = k.sup_norm();
    let op = operator_norm(&t);
    let witness = norm_witness(&t).ok();
    let witness_value = witness.as_ref().map(|f| apply(&t, f).expect("witness in domain").norm());
    let sampled_max = probe_max(&t, samples, seed);
    IsometryReport {
        difference: (sup_norm.value - op.value).abs(),
        sup_norm,
        operator_norm: op,
        witness,
        witness_value,
        sampled_max,
        samples,
    }
}

fn probe_max(t: &BlockOperator, samples: usize, seed: u64) -> f64 {
    let d = t.domain();
    let mut rng = sample::rng(seed);
    (0..samples)
        .map(|_| {
            let f = sample::unit_function(&mut rng, &d.space, d.spec, d.exponent);
            apply(t, &f).expect("probe in domain").norm()
        })
        .fold(0.0, f64::max)
}

/// Random kernel on the given spaces with entries uniform in `[-1, 1)`.
pub fn random_kernel<R: Rng + ?Sized>(
    rng: &mut R,
    space1: &MeasureSpace,
    space2: &MeasureSpace,
    domain_spec: SpaceSpec,
    codomain_spec: SpaceSpec,
) -> Kernel {
    Kernel::from_fn(space1.clone(), space2.clone(), domain_spec, codomain_spec, |_, _| {
        sample::matrix(rng, codomain_spec.dim, domain_spec.dim)
    })
    .expect("shapes match")
}
