//! Local operators on `L^p(Ω;F′)` and their multipliers.
//!
//! An operator is local when `T(1_A f) = 1_A Tf` for every set of atoms `A`;
//! on a finite atomic space this is block-diagonality. The atom partition
//! plays the role of the strictly localizable decomposition, so the
//! multiplier is read off atom by atom: `M(ω)v′ = T(1_ω v′)(ω)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, block_norm, NormEstimate};
use crate::operators::{apply, operator_norm, BlockOperator, Endpoint};
use crate::order::{is_positive_operator, positivity_witness, PositivityMode};
use crate::sample;
use crate::spaces::{Exponent, LpFunction, MeasureSpace, SpaceSpec};

/// `M : Ω → L(F′)`, one matrix per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    space: MeasureSpace,
    spec: SpaceSpec,
    blocks: Vec<DMatrix<f64>>,
}

impl Multiplier {
    pub fn new(space: MeasureSpace, spec: SpaceSpec, blocks: Vec<DMatrix<f64>>) -> Result<Self> {
        if blocks.len() != space.len() {
            return Err(Error::ShapeMismatch(format!("expected {} blocks, found {}", space.len(), blocks.len())));
        }
        if let Some((i, b)) = blocks.iter().enumerate().find(|(_, b)| b.shape() != (spec.dim, spec.dim)) {
            return Err(Error::ShapeMismatch(format!(
                "block {i} is {}x{}, expected {}x{}",
                b.nrows(),
                b.ncols(),
                spec.dim,
                spec.dim
            )));
        }
        Ok(Self { space, spec, blocks })
    }

    pub fn space(&self) -> &MeasureSpace {
        &self.space
    }

    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    pub fn block(&self, atom: usize) -> &DMatrix<f64> {
        &self.blocks[atom]
    }

    /// `max_ω ‖M(ω)‖_{F′→F′}`.
    pub fn sup_norm(&self) -> NormEstimate {
        self.blocks
            .iter()
            .map(|b| block_norm(b, self.spec.norm, self.spec.norm))
            .fold(NormEstimate::zero(), NormEstimate::max)
    }

    /// The multiplication operator on `L^p(Ω;F′)` as a block-diagonal operator.
    pub fn to_operator(&self, exponent: Exponent) -> BlockOperator {
        let end = Endpoint::new(self.space.clone(), self.spec, exponent);
        let dim = self.spec.dim;
        BlockOperator::from_fn(end.clone(), end, |i, j| {
            if i == j {
                self.blocks[i].clone()
            } else {
                DMatrix::zeros(dim, dim)
            }
        })
        .expect("square blocks")
    }
}

/// `(𝓜_M f)(ω) = M(ω) f(ω)`.
pub fn multiplier_apply(m: &Multiplier, f: &LpFunction) -> Result<LpFunction> {
    if f.space() != &m.space || f.spec().dim != m.spec.dim {
        return Err(Error::SpaceMismatch("function and multiplier live on different spaces".into()));
    }
    let values = m.blocks.iter().zip(f.values()).map(|(b, v)| b * v).collect();
    LpFunction::new(f.space().clone(), *f.spec(), f.exponent(), values)
}

/// A violation of `T(1_A f) = 1_A Tf`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityWitness {
    /// The set `A`, as atom indices.
    pub set: Vec<usize>,
    pub input: LpFunction,
    /// `T(1_A f)`.
    pub restricted_image: LpFunction,
    /// `1_A Tf`.
    pub image_restricted: LpFunction,
}

impl LocalityWitness {
    pub fn gap(&self) -> f64 {
        self.restricted_image.max_abs_diff(&self.image_restricted)
    }
}

fn require_same_sides(t: &BlockOperator) -> Result<()> {
    let (d, c) = (t.domain(), t.codomain());
    if d.space != c.space || d.spec != c.spec || d.exponent != c.exponent {
        return Err(Error::SpaceMismatch("locality needs identical domain and codomain".into()));
    }
    Ok(())
}

fn restrict(f: &LpFunction, set: &[usize]) -> LpFunction {
    let values = (0..f.space().len())
        .map(|a| if set.contains(&a) { f.value(a).clone() } else { DVector::zeros(f.spec().dim) })
        .collect();
    LpFunction::new(f.space().clone(), *f.spec(), f.exponent(), values).expect("same shape")
}

/// Exact locality test. When a block `B(ω₂,ω₁)` with `ω₁ ≠ ω₂` is nonzero the
/// witness is `A = {ω₁}` with `f = 1_{ω₁} e_c` for a nonzero column `c`.
pub fn is_local(t: &BlockOperator) -> Result<(bool, Option<LocalityWitness>)> {
    require_same_sides(t)?;
    let d = t.domain();
    let n = d.space.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let b = t.block(i, j);
            if let Some(c) = (0..b.ncols()).find(|&c| b.column(c).iter().any(|&x| x != 0.0)) {
                let input = LpFunction::atomic(d.space.clone(), d.spec, d.exponent, j, linalg::unit(d.spec.dim, c))?;
                let set = vec![j];
                let restricted_image = apply(t, &restrict(&input, &set))?;
                let image_restricted = restrict(&apply(t, &input)?, &set);
                return Ok((false, Some(LocalityWitness { set, input, restricted_image, image_restricted })));
            }
        }
    }
    Ok((true, None))
}

/// Reconstructs the multiplier of a local operator by applying it to
/// `1_ω e_c` for every atom and basis vector.
pub fn extract_multiplier(t: &BlockOperator) -> Result<Multiplier> {
    let (local, witness) = is_local(t)?;
    if !local {
        let w = witness.expect("non-local operators carry a witness");
        let row_atom = (0..w.restricted_image.space().len())
            .find(|&a| w.restricted_image.value(a) != w.image_restricted.value(a))
            .unwrap_or(0);
        return Err(Error::NonLocal { row_atom, col_atom: w.set[0], witness: Box::new(w) });
    }
    let d = t.domain();
    let dim = d.spec.dim;
    let blocks = (0..d.space.len())
        .map(|a| {
            let cols: Vec<DVector<f64>> = (0..dim)
                .map(|c| {
                    let probe = LpFunction::atomic(d.space.clone(), d.spec, d.exponent, a, linalg::unit(dim, c))?;
                    Ok(apply(t, &probe)?.value(a).clone())
                })
                .collect::<Result<_>>()?;
            Ok(DMatrix::from_columns(&cols))
        })
        .collect::<Result<Vec<_>>>()?;
    Multiplier::new(d.space.clone(), d.spec, blocks)
}

/// Outcome of [`check_multiplier_positivity`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierPositivityReport {
    pub operator_positive: bool,
    pub multiplier_positive: bool,
    /// First atom whose multiplier block has a negative entry.
    pub multiplier_witness_atom: Option<usize>,
    /// Atom carrying the positive input mapped outside the cone.
    pub operator_witness_atom: Option<usize>,
}

impl MultiplierPositivityReport {
    pub fn consistent(&self) -> bool {
        self.operator_positive == self.multiplier_positive && self.multiplier_witness_atom == self.operator_witness_atom
    }
}

pub fn check_multiplier_positivity(t: &BlockOperator) -> Result<MultiplierPositivityReport> {
    let m = extract_multiplier(t)?;
    if !m.spec.ordered {
        return Err(Error::Unordered("multiplier positivity"));
    }
    let multiplier_witness_atom = m.blocks.iter().position(|b| b.iter().any(|&x| x < 0.0));
    let witness = positivity_witness(t, PositivityMode::Sampled { seed: 0, samples: 0 })?;
    let operator_witness_atom =
        witness.as_ref().and_then(|f| (0..f.space().len()).find(|&a| f.value(a).iter().any(|&x| x != 0.0)));
    Ok(MultiplierPositivityReport {
        operator_positive: is_positive_operator(t, PositivityMode::Exact)?,
        multiplier_positive: multiplier_witness_atom.is_none(),
        multiplier_witness_atom,
        operator_witness_atom,
    })
}

/// `‖M‖_∞` against `‖T‖` for a local operator.
pub fn multiplier_norm_gap(t: &BlockOperator) -> Result<(NormEstimate, NormEstimate)> {
    let m = extract_multiplier(t)?;
    Ok((m.sup_norm(), operator_norm(t)))
}

/// Random multiplier with entries uniform in `[-1, 1)`; exact zeros appear
/// with probability `zero_prob`.
pub fn random_multiplier<R: Rng + ?Sized>(
    rng: &mut R,
    space: &MeasureSpace,
    spec: SpaceSpec,
    zero_prob: f64,
) -> Multiplier {
    let blocks = (0..space.len()).map(|_| sample::sparse_matrix(rng, spec.dim, spec.dim, zero_prob)).collect();
    Multiplier::new(space.clone(), spec, blocks).expect("square blocks")
}
