//! Local relators: ultrafilters on the cylinder algebra of `B^E`.
//!
//! `B` and every table-backed support universe are finite, so membership is
//! decidable by enumeration.

mod cylinder;
mod exact;
mod parse;
pub mod random;
mod relator;
mod roundtrip;
mod uf;

pub use cylinder::{Cylinder, Space};
pub use exact::{exactness_step_check, extend_ultrafilter_step, Exactness, Extension};
pub use parse::{lr_from_sexp, parse_lr, parse_uf};
pub use relator::{
    cyl_ultrapower, cyl_ultrapower_star, gamma_b, separation_quotient, transfer_relation,
    CylUltraElem, LocalRelator,
};
pub use roundtrip::{alpha_gamma_roundtrip_check, RoundtripReport};
pub use uf::{push_forward, pushes_to, uf_agree, uf_member, CylUF, MAX_TABLE_POINTS};

use crate::sexpr::SyntaxError;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LrError {
    #[error("cylinder support {0:?} is outside the declared universe")]
    SupportOutOfUniverse(Vec<usize>),
    #[error("not an ultrafilter: {0}")]
    InvalidUltrafilter(String),
    #[error("the ultrafilter on B^(I+i) does not project to the pushforward of L")]
    IncompatibleUltrafilters,
    #[error("extension infeasible: {0}")]
    ExtensionInfeasible(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid local relator: {0}")]
    Invalid(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
