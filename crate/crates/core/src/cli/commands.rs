use std::borrow::Cow;

use serde_json::Value;

use super::document::Document;
use super::report::{Report, Status};
use super::{Failure, Options};
use crate::hilbert_schmidt::{check_hs_isometry, hs_norm_kernel, hs_norm_operator};
use crate::kernels::{check_isometry, extract_density, kernel_to_operator, operator_to_kernel, Kernel};
use crate::multiplication::{check_multiplier_positivity, extract_multiplier, is_local, LocalityWitness};
use crate::operators::{apply, norm_witness, operator_norm_with, sampled_lower_bound, BlockOperator, NormOptions};
use crate::order::{
    check_regular_kernel_correspondence, counterexample_sequence, is_positive_kernel, is_positive_operator,
    positivity_witness, regular_norm, PositivityMode,
};
use crate::spaces::{Exponent, LpFunction};
use crate::tensor::{check_commutativity, check_l1_product_identity, exact_pi_norm, pi_norm_bounds, Factor};
use crate::tensor::{TensorElement, DEFAULT_RESTARTS};
use crate::Error;

pub(super) const DEFAULT_MAX_N: usize = 64;

const PROBE_TOLERANCE: f64 = 1e-9;

pub(super) fn default_tolerance(command: &str) -> Option<f64> {
    match command {
        "represent" | "derepresent" => Some(1e-15),
        "apply" => Some(1e-9),
        "norm" | "check-isometry" | "extract-density" | "pi-norm" | "check-l1-product" | "regular-norm"
        | "check-regular-kernel" | "extract-multiplier" => Some(1e-12),
        "check-commutativity" | "check-hs" | "hs-norm" => Some(1e-10),
        "counterexample" => Some(1e-9),
        _ => None,
    }
}

pub(super) fn dispatch(command: &str, opts: &Options, docs: &[Document], report: &mut Report) -> Result<(), Failure> {
    let tol = opts.tolerance.or_else(|| default_tolerance(command)).unwrap_or(0.0);
    match command {
        "represent" => represent(&*kernel(single(docs)?)?, tol, report),
        "derepresent" => derepresent(&*operator(single(docs)?)?, tol, report),
        "apply" => apply_cmd(docs, tol, report),
        "norm" => norm(&*operator(single(docs)?)?, opts, tol, report),
        "check-isometry" => isometry(&*kernel(single(docs)?)?, opts, tol, report),
        "extract-density" => density(&*operator(single(docs)?)?, tol, report),
        "pi-norm" => pi_norm_cmd(tensor(single(docs)?)?, opts, tol, report),
        "check-l1-product" => l1_product(tensor(single(docs)?)?, tol, report),
        "check-commutativity" => commutativity(tensor(single(docs)?)?, opts, tol, report),
        "check-positive" => positive(single(docs)?, opts, report),
        "regular-norm" => regular(&*operator(single(docs)?)?, tol, report),
        "check-regular-kernel" => regular_kernel(&*kernel(single(docs)?)?, tol, report),
        "counterexample" => counterexample(docs, opts, tol, report),
        "check-local" => local(&*operator(single(docs)?)?, report),
        "extract-multiplier" => multiplier(&*operator(single(docs)?)?, tol, report),
        "check-multiplier-positive" => multiplier_positive(&*operator(single(docs)?)?, report),
        "hs-norm" => hs_norm(single(docs)?, tol, report),
        "check-hs" => hs_check(&*kernel(single(docs)?)?, tol, report),
        _ => Err(Failure::new("E_UNKNOWN_COMMAND", format!("unknown command {command:?}"))),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::new("E_USAGE", message)
}

fn single(docs: &[Document]) -> Result<&Document, Failure> {
    match docs {
        [d] => Ok(d),
        _ => Err(usage(format!("expected one input document, found {}", docs.len()))),
    }
}

fn wrong_kind(expected: &str, found: &Document) -> Failure {
    usage(format!("expected a {expected} document, found {}", found.kind()))
}

// An L¹ → L^∞ operator stands for its kernel.
fn kernel(d: &Document) -> Result<Cow<'_, Kernel>, Failure> {
    match d {
        Document::Kernel(k) => Ok(Cow::Borrowed(k)),
        Document::Operator(t) => Ok(Cow::Owned(operator_to_kernel(t)?)),
        other => Err(wrong_kind("kernel", other)),
    }
}

// A kernel stands for its L¹ → L^∞ operator.
fn operator(d: &Document) -> Result<Cow<'_, BlockOperator>, Failure> {
    match d {
        Document::Operator(t) => Ok(Cow::Borrowed(t)),
        Document::Kernel(k) => Ok(Cow::Owned(kernel_to_operator(k))),
        other => Err(wrong_kind("operator", other)),
    }
}

fn tensor(d: &Document) -> Result<&TensorElement, Failure> {
    match d {
        Document::TensorElement(z) => Ok(z),
        other => Err(wrong_kind("tensor_element", other)),
    }
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

// |a − b| within `tol`, relative to the larger magnitude once it exceeds 1.
fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn represent(k: &Kernel, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let t = kernel_to_operator(k);
    let back = operator_to_kernel(&t)?;
    let err = k.max_rel_diff(&back);
    report.number("round_trip_error", err, tol);
    report.status = verdict(err <= tol);
    report.witness("output", &t.into());
    Ok(())
}

fn derepresent(t: &BlockOperator, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let k = operator_to_kernel(t)?;
    let err = t.max_rel_diff(&kernel_to_operator(&k));
    report.number("round_trip_error", err, tol);
    report.status = verdict(err <= tol);
    report.witness("output", &k.into());
    Ok(())
}

fn apply_cmd(docs: &[Document], tol: f64, report: &mut Report) -> Result<(), Failure> {
    let [op, f] = docs else {
        return Err(usage(format!("expected an operator and an lp_function, found {} inputs", docs.len())));
    };
    let t = &*operator(op)?;
    let Document::LpFunction(f) = f else { return Err(wrong_kind("lp_function", f)) };
    let g = apply(t, f)?;
    report.number("input_norm", f.norm(), tol);
    report.number("output_norm", g.norm(), tol);
    if let Ok(w) = norm_witness(t) {
        // exact regime: ‖Tf‖ ≤ ‖T‖·‖f‖
        let bound = apply(t, &w)?.norm() * f.norm();
        report.number("norm_bound", bound, tol);
        report.status = verdict(g.norm() <= bound * (1.0 + tol) + tol);
    }
    report.witness("output", &g.into());
    Ok(())
}

fn norm(t: &BlockOperator, opts: &Options, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let est = operator_norm_with(t, &NormOptions { samples: opts.samples, seed: opts.seed });
    report.estimate("operator_norm", est, tol);
    if est.exact {
        let w = norm_witness(t)?;
        let attained = apply(t, &w)?.norm();
        report.number("witness_norm", w.norm(), tol);
        report.number("witness_value", attained, tol);
        report.status = verdict(close(attained, est.value, tol) && close(w.norm(), 1.0, tol));
        report.witness("witness", &w.into());
    } else {
        let (_, best) = sampled_lower_bound(t, opts.samples, opts.seed);
        report.number("interval_width", est.width(), tol);
        report.status = Status::Approx { lower: est.lower, upper: est.upper };
        report.witness("best_input", &best.into());
    }
    Ok(())
}

fn isometry(k: &Kernel, opts: &Options, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let r = check_isometry(k, opts.samples, opts.seed);
    report.estimate("sup_norm", r.sup_norm, tol);
    report.estimate("operator_norm", r.operator_norm, tol);
    report.number("difference", r.difference, tol);
    report.number("sampled_max", r.sampled_max, PROBE_TOLERANCE);
    report.number("probe_excess", r.probe_excess(), PROBE_TOLERANCE);
    report.integer("samples", r.samples);
    if let Some(v) = r.witness_value {
        report.number("witness_value", v, tol);
    }
    report.status = if r.sup_norm.exact && r.operator_norm.exact {
        verdict(r.passes(tol, PROBE_TOLERANCE))
    } else {
        let (s, o) = (r.sup_norm, r.operator_norm);
        let overlap = s.lower <= o.upper * (1.0 + tol) + tol && o.lower <= s.upper * (1.0 + tol) + tol;
        if overlap && r.sampled_max <= s.upper + PROBE_TOLERANCE {
            Status::Approx { lower: o.lower, upper: o.upper }
        } else {
            Status::Fail
        }
    };
    if let Some(w) = r.witness {
        report.witness("witness", &w.into());
    }
    Ok(())
}

fn density(t: &BlockOperator, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let k = extract_density(t)?;
    let sup = k.sup_norm();
    let op = operator_norm_with(t, &NormOptions::default());
    report.estimate("sup_norm", sup, tol);
    report.estimate("operator_norm", op, tol);
    let difference = (sup.value - op.value).abs();
    report.number("difference", difference, tol);
    report.status = verdict(sup.exact && op.exact && close(sup.value, op.value, tol));
    report.witness("output", &k.into());
    Ok(())
}

fn pi_norm_cmd(z: &TensorElement, opts: &Options, tol: f64, report: &mut Report) -> Result<(), Failure> {
    if z.factors().len() != 2 {
        return Err(Error::FactorCount { expected: 2, found: z.factors().len() }.into());
    }
    match exact_pi_norm(z)? {
        Some(est) => {
            report.estimate("pi_norm", est, tol);
            report.status = if est.exact { Status::Pass } else { Status::Approx { lower: est.lower, upper: est.upper } };
        }
        None => {
            let est = pi_norm_bounds(z, DEFAULT_RESTARTS, opts.seed)?;
            report.estimate("pi_norm", est, tol);
            report.number("interval_width", est.width(), tol);
            report.status = Status::Approx { lower: est.lower, upper: est.upper };
        }
    }
    Ok(())
}

fn l1_product(z: &TensorElement, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let (s1, s2) = match z.factors() {
        [Factor::Lp { space: s1, exponent: Exponent::P1 }, Factor::Lp { space: s2, exponent: Exponent::P1 }] => (s1, s2),
        _ => return Err(Error::UnsupportedRegime("expected two L1 factors over measure spaces".into()).into()),
    };
    let r = check_l1_product_identity(s1, s2, z)?;
    report.number("pi_norm", r.pi_norm, tol);
    report.number("flattened_norm", r.flattened_norm, tol);
    report.number("difference", r.difference, tol);
    report.status = verdict(close(r.pi_norm, r.flattened_norm, tol));
    Ok(())
}

fn commutativity(z: &TensorElement, opts: &Options, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let r = check_commutativity(z, opts.seed, tol)?;
    report.estimate("pi_norm", r.forward, tol);
    report.estimate("pi_norm_transposed", r.transposed, tol);
    report.number("difference", r.difference, tol);
    report.flag("consistent", r.consistent);
    report.status = verdict(r.consistent);
    Ok(())
}

fn positivity_witnesses(report: &mut Report, t: &BlockOperator, w: Option<LpFunction>) -> Result<(), Failure> {
    if let Some(f) = w {
        let image = apply(t, &f)?;
        report.witness("input", &f.into());
        report.witness("image", &image.into());
    }
    Ok(())
}

fn positive(doc: &Document, opts: &Options, report: &mut Report) -> Result<(), Failure> {
    let mode = PositivityMode::Sampled { seed: opts.seed, samples: opts.samples };
    let (t, kernel_positive) = match doc {
        Document::Kernel(k) => (kernel_to_operator(k), Some(is_positive_kernel(k)?)),
        Document::Operator(t) => (t.clone(), None),
        other => return Err(wrong_kind("kernel or operator", other)),
    };
    let exact = is_positive_operator(&t, PositivityMode::Exact)?;
    let witness = positivity_witness(&t, mode)?;
    let sampled = witness.is_none();
    if let Some(kp) = kernel_positive {
        report.flag("kernel_positive", kp);
    }
    report.flag("operator_positive", exact);
    report.flag("operator_positive_sampled", sampled);
    report.flag("positive", exact);
    let agree = exact == sampled && kernel_positive.is_none_or(|kp| kp == exact);
    report.status = verdict(agree);
    positivity_witnesses(report, &t, witness)
}

fn regular(t: &BlockOperator, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let r = regular_norm(t)?;
    let positive = is_positive_operator(t, PositivityMode::Exact)?;
    report.number("operator_norm", r.operator_norm, tol);
    report.number("regular_norm", r.regular_norm, tol);
    report.number("ratio", r.ratio, tol);
    report.flag("positive", positive);
    let dominated = r.operator_norm <= r.regular_norm * (1.0 + tol) + tol;
    let unit_ratio = !positive || close(r.ratio, 1.0, tol);
    report.status = verdict(dominated && unit_ratio);
    report.witness("modulus", &r.modulus.into());
    Ok(())
}

fn regular_kernel(k: &Kernel, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let r = check_regular_kernel_correspondence(k)?;
    report.number("operator_regular_norm", r.operator_regular_norm, tol);
    report.number("kernel_regular_norm", r.kernel_regular_norm, tol);
    report.number("difference", r.difference, tol);
    report.flag("kernel_positive", r.kernel_positive);
    report.flag("operator_positive", r.operator_positive);
    report.number("modulus_mismatch", r.modulus_mismatch, 0.0);
    let ok = close(r.operator_regular_norm, r.kernel_regular_norm, tol)
        && r.kernel_positive == r.operator_positive
        && r.modulus_mismatch == 0.0;
    report.status = verdict(ok);
    Ok(())
}

fn counterexample(docs: &[Document], opts: &Options, tol: f64, report: &mut Report) -> Result<(), Failure> {
    if !docs.is_empty() {
        return Err(usage("counterexample takes no input documents"));
    }
    let seq = counterexample_sequence(opts.max_n.unwrap_or(DEFAULT_MAX_N))?;
    let mut ok = true;
    let mut prev: Option<(f64, f64)> = None;
    for (n, r) in &seq {
        let nf = *n as f64;
        report.number(&format!("operator_norm[n={n}]"), r.operator_norm, tol);
        report.number(&format!("regular_norm[n={n}]"), r.regular_norm, tol);
        ok &= (r.operator_norm - nf.powf(-0.25)).abs() <= tol;
        ok &= (r.regular_norm - nf.powf(0.25)).abs() <= tol;
        if let Some((op, reg)) = prev {
            ok &= r.operator_norm < op && r.regular_norm > reg;
        }
        prev = Some((r.operator_norm, r.regular_norm));
    }
    report.integer("entries", seq.len());
    report.status = verdict(ok);
    Ok(())
}

fn locality_witnesses(report: &mut Report, w: LocalityWitness) {
    let atoms: Vec<Value> = w.set.iter().map(|&a| Value::from(w.input.space().atoms()[a].clone())).collect();
    report.label("set", Value::Array(atoms));
    report.number("gap", w.gap(), 0.0);
    report.witness("input", &w.input.into());
    report.witness("restricted_image", &w.restricted_image.into());
    report.witness("image_restricted", &w.image_restricted.into());
}

fn local(t: &BlockOperator, report: &mut Report) -> Result<(), Failure> {
    let (is, witness) = is_local(t)?;
    report.flag("local", is);
    report.status = verdict(is);
    if let Some(w) = witness {
        locality_witnesses(report, w);
    }
    Ok(())
}

fn multiplier(t: &BlockOperator, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let m = match extract_multiplier(t) {
        Ok(m) => m,
        Err(e @ Error::NonLocal { .. }) => {
            let failure = Failure::from(e.clone());
            if let Error::NonLocal { witness, .. } = e {
                locality_witnesses(report, *witness);
            }
            return Err(failure);
        }
        Err(e) => return Err(e.into()),
    };
    let reconstruction = m.to_operator(t.domain().exponent).max_abs_diff(t);
    let sup = m.sup_norm();
    let op = operator_norm_with(t, &NormOptions::default());
    report.estimate("multiplier_norm", sup, tol);
    report.estimate("operator_norm", op, tol);
    report.number("reconstruction_error", reconstruction, tol);
    let bounded = sup.lower <= op.upper * (1.0 + tol) + tol;
    let equal = !(sup.exact && op.exact) || close(sup.value, op.value, tol);
    report.status = verdict(reconstruction <= tol && bounded && equal);
    report.witness("output", &m.into());
    Ok(())
}

fn multiplier_positive(t: &BlockOperator, report: &mut Report) -> Result<(), Failure> {
    let r = match check_multiplier_positivity(t) {
        Err(e @ Error::NonLocal { .. }) => {
            let failure = Failure::from(e.clone());
            if let Error::NonLocal { witness, .. } = e {
                locality_witnesses(report, *witness);
            }
            return Err(failure);
        }
        other => other?,
    };
    report.flag("operator_positive", r.operator_positive);
    report.flag("multiplier_positive", r.multiplier_positive);
    let atom = |a: Option<usize>| a.map_or(Value::Null, |a| Value::from(t.domain().space.atoms()[a].clone()));
    report.label("operator_witness_atom", atom(r.operator_witness_atom));
    report.label("multiplier_witness_atom", atom(r.multiplier_witness_atom));
    report.status = verdict(r.consistent());
    let witness = positivity_witness(t, PositivityMode::Exact)?;
    positivity_witnesses(report, t, witness)
}

fn hs_norm(doc: &Document, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let value = match doc {
        Document::Operator(t) => hs_norm_operator(t)?,
        Document::Kernel(k) => hs_norm_kernel(k)?,
        other => return Err(wrong_kind("kernel or operator", other)),
    };
    report.number("hs_norm", value, tol);
    Ok(())
}

fn hs_check(k: &Kernel, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let r = check_hs_isometry(k)?;
    report.number("hs_norm_operator", r.hs_norm_operator, tol);
    report.number("hs_norm_kernel", r.hs_norm_kernel, tol);
    report.number("difference", r.difference, tol);
    report.estimate("operator_norm", r.operator_norm, tol);
    report.status = verdict(close(r.hs_norm_operator, r.hs_norm_kernel, tol) && r.passes(f64::INFINITY));
    Ok(())
}
