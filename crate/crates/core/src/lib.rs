//! Exact engine for definable-sequence ultrapowers, iterated embeddings,
//! finite transfer checking, local relators and their finite analogues.

pub mod folcheck;
pub mod hyper;
pub mod lr;
pub mod normal;
pub mod poly;
pub mod regress;
pub mod seq;
pub mod sexpr;
pub mod stone;
