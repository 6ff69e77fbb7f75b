//! Binary sequences from generalized cyclotomic classes modulo an odd
//! prime power N = p^n, with exact verification machinery: the class
//! decomposition of Z_N and its counting identities, Gauss periods in
//! the cyclotomic ring Z[w], the 2-adic complexity lower bound, the
//! circulant determinant by three routes, and an FCSR rational
//! approximation oracle. All verdicts use integer arithmetic only.

pub mod adic;
pub mod cyclofield;
pub mod cyclotomy;
pub mod error;
pub mod fcsr;
pub mod numtheory;
pub mod report;
pub mod sequence;
mod serde_util;

pub use error::{Error, Result};
