//! First-order formulas over finite structures, finite ultrapowers and the
//! transfer principle.
//!
//! On a finite index set every ultrafilter is principal, so a finite
//! ultrapower is isomorphic to the structure it starts from. The checks in
//! this module therefore test the construction itself (quotients, lifted
//! relations, `ν`) rather than produce nonstandard elements; those live in
//! [`crate::hyper`].

pub mod battery;
pub mod formula;
pub mod functor;
pub mod model;
pub mod transfer;
pub mod ultrapower;

use crate::sexpr::SyntaxError;

pub use battery::{transfer_suite, TransferSuiteConfig, TransferSuiteReport};
pub use formula::{parse_formula, Formula, Term};
pub use functor::{check_functor_laws, functor_law_suite, FunctorReport};
pub use model::{eval_standard, parse_model, Assignment, FiniteModel};
pub use transfer::{check_exists_commutation, check_transfer, ExistsReport, TransferReport};
pub use ultrapower::{build_finite_ultrapower, FiniteUltrapower, PowerQuotient, PrincipalUf};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FolError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("sort error: {0}")]
    SortError(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("invalid index set: {0}")]
    InvalidIndex(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
