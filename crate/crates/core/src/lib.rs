//! Exact small quantum cohomology of generalized flag varieties `G/P` (`P`
//! maximal), the Gromov-Witten invariants read off from it, and the
//! inequality description of the polytope of conjugacy-class tuples
//! `(C_{μ_1}, …, C_{μ_b})` whose product contains the identity.
//!
//! Everything algebraic is done over arbitrary-precision rationals. The only
//! floating point lives in [`oracle`], a numeric search for unitaries whose
//! product is the identity, used to cross-validate the exact inequalities for
//! `SU(n)`.

pub mod campaign;
pub mod error;
pub mod exec;
pub mod grassmann;
pub mod gw_ineq;
pub mod oracle;
pub mod polytope;
pub mod qh;
pub mod rational;
pub mod ring;
pub mod rootsys;
pub mod weyl;

pub use error::{Error, Result};
pub use rational::Q;
