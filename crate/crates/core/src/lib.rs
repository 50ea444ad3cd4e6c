//! Kernel representations of operators between vector-valued function spaces
//! over finite measure spaces.
//!
//! The crate converts between block operators, kernels and multipliers,
//! computes the norms these correspondences preserve (`L¹ → L^∞` operator
//! norms, kernel sup norms, regular norms, projective tensor norms,
//! Hilbert–Schmidt norms) and checks each identity against an independent
//! computation.
//!
//! Modules:
//! - [`spaces`]: measure spaces, `ℓ^p` descriptors and `L^p(Ω;E)` functions
//! - [`operators`]: block operators, application and operator norms
//! - [`kernels`]: kernel ↔ operator correspondence and density extraction
//! - [`tensor`]: projective tensor norms and their identities
//! - [`order`]: positivity, modulus, regular norms
//! - [`multiplication`]: local operators and multipliers
//! - [`hilbert_schmidt`]: Hilbert–Schmidt kernels
//! - [`cli`]: JSON documents, command dispatch and reports

pub mod cli;
pub mod error;
pub mod hilbert_schmidt;
pub mod kernels;
pub mod linalg;
pub mod multiplication;
pub mod operators;
pub mod order;
pub mod sample;
pub mod spaces;
pub mod tensor;

pub use error::{Error, Result};
pub use kernels::Kernel;
pub use linalg::NormEstimate;
pub use multiplication::Multiplier;
pub use operators::{BlockOperator, Endpoint};
pub use spaces::{Exponent, LpFunction, MeasureSpace, SpaceSpec};
pub use tensor::{Factor, TensorElement};
