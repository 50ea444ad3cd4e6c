//! Builds a kernel document, runs `represent` and feeds the resulting report
//! into `check-regular-kernel`, the same way the command line chains them.

use kernel_repr::cli::{load_text, run_documents, Document, Options};
use kernel_repr::kernels::random_kernel;
use kernel_repr::{sample, Exponent, MeasureSpace, SpaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = sample::rng(9);
    let s = MeasureSpace::from_weights(&[1.0, 0.5])?;
    let e = SpaceSpec::new(2, Exponent::P1, true)?;
    let k = random_kernel(&mut rng, &s, &s, e, SpaceSpec::new(2, Exponent::Pinf, true)?);
    let doc = Document::from(k);
    print!("{}", doc.to_json());

    let options = Options::default();
    let represented = run_documents("represent", &options, &[doc]);
    let operator = load_text("represent", &represented.to_json()).map_err(|f| f.message)?;
    let check = run_documents("check-regular-kernel", &options, &[operator]);
    print!("{}", check.to_json());
    std::process::exit(check.exit_code());
}
