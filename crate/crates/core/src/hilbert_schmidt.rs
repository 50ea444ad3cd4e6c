//! Hilbert–Schmidt operators `L²(Ω₁;E) → L²(Ω₂;F)` for Hilbert `E`, `F` and
//! their square-integrable kernels.
//!
//! A bounded kernel need not give a Hilbert–Schmidt operator of comparable
//! size: the constant identity kernel on `ℓ²_d` has sup norm 1 while its
//! Hilbert–Schmidt norm is `√(d·|Ω₁|·|Ω₂|)`. See the `hilbert_schmidt`
//! example for the worked numbers.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::kernels::{integral_operator, Kernel};
use crate::linalg::NormEstimate;
use crate::operators::{apply, operator_norm, BlockOperator};
use crate::spaces::{Exponent, LpFunction};

/// Outcome of [`check_hs_isometry`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsReport {
    /// `√(Σ_e ‖T_k e‖²)` over an orthonormal basis.
    pub hs_norm_operator: f64,
    /// `√(∫∫ ‖k‖²_{HS})`.
    pub hs_norm_kernel: f64,
    pub difference: f64,
    /// `‖T_k‖_{L²→L²}`.
    pub operator_norm: NormEstimate,
}

impl HsReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.difference <= tolerance && self.operator_norm.value <= self.hs_norm_operator * (1.0 + 1e-12) + 1e-15
    }
}

fn hilbert_operator(t: &BlockOperator) -> Result<()> {
    let (d, c) = (t.domain(), t.codomain());
    let hilbert = [d.spec.norm, c.spec.norm, d.exponent, c.exponent].iter().all(|&p| p == Exponent::P2);
    if hilbert {
        Ok(())
    } else {
        Err(Error::WrongExponents("Hilbert-Schmidt norms need L2 of l2 on both sides".into()))
    }
}

fn hilbert_kernel(k: &Kernel) -> Result<()> {
    if k.domain_spec().norm == Exponent::P2 && k.codomain_spec().norm == Exponent::P2 {
        Ok(())
    } else {
        Err(Error::WrongExponents("Hilbert-Schmidt norms need l2 factors".into()))
    }
}

/// Direct summation over the basis `1_ω/√μ₁(ω) ⊗ e_i` of `L²(Ω₁;E)`.
pub fn hs_norm_operator(t: &BlockOperator) -> Result<f64> {
    hilbert_operator(t)?;
    let d = t.domain();
    let mut total = 0.0;
    for a in 0..d.space.len() {
        let scale = 1.0 / d.space.weight(a).sqrt();
        for i in 0..d.spec.dim {
            let mut u = DVector::zeros(d.spec.dim);
            u[i] = scale;
            let e = LpFunction::atomic(d.space.clone(), d.spec, d.exponent, a, u)?;
            let image = apply(t, &e)?.norm();
            total += image * image;
        }
    }
    Ok(total.sqrt())
}

/// `√(Σ μ₁(ω₁) μ₂(ω₂) ‖k(ω₁,ω₂)‖²_F)`.
pub fn hs_norm_kernel(k: &Kernel) -> Result<f64> {
    hilbert_kernel(k)?;
    let (s1, s2) = (k.space1(), k.space2());
    let mut total = 0.0;
    for a in 0..s1.len() {
        for b in 0..s2.len() {
            total += s1.weight(a) * s2.weight(b) * k.block(a, b).norm_squared();
        }
    }
    Ok(total.sqrt())
}

pub fn check_hs_isometry(k: &Kernel) -> Result<HsReport> {
    hilbert_kernel(k)?;
    let t = integral_operator(k, Exponent::P2, Exponent::P2);
    let hs_norm_operator = hs_norm_operator(&t)?;
    let hs_norm_kernel = hs_norm_kernel(k)?;
    Ok(HsReport {
        hs_norm_operator,
        hs_norm_kernel,
        difference: (hs_norm_operator - hs_norm_kernel).abs(),
        operator_norm: operator_norm(&t),
    })
}
