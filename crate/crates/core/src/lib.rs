//! Higher-order total derivatives of multivariate, vector-valued composites
//! `f ∘ g`, written with Kronecker-product partial Bell polynomials.
//!
//! The n-th order derivative array of `f ∘ g` at `x` is
//!
//! ```text
//! ∂ⁿ(f∘g)/∂(x')^{⊗n} = Σ_{k=1..n} f_{g^k}(g(x)) · B_{n,k}(g_x, g_{x²}, …)
//! ```
//!
//! where `B_{n,k}` is the partial Bell polynomial with scalar products replaced
//! by Kronecker products. The representation is not unique as a matrix, but
//! its differential `· (dx)^{⊗n}` is; the symmetrizer selects the unique
//! symmetric array of mixed partials.
//!
//! Module map:
//!
//! - [`partitions`]: Bell index sequences, exact coefficients, set-partition counts.
//! - [`kron_ops`]: dense matrices, Kronecker powers, commutation/shuffle
//!   permutations and the symmetrizer.
//! - [`bell_poly`]: univariate and Kronecker-valued partial Bell polynomials and
//!   their sandwiched recurrences.
//! - [`matrix_calculus`]: jets of polynomials, `exp`, and black-box functions;
//!   the Kronecker chain derivative rule.
//! - [`faa_di_bruno`]: composition of jets.
//! - [`normal_moments`]: moment vectors of the multivariate normal.
//! - [`verification`]: oracles that share no code with the Bell/Kronecker path.
//! - [`suites`] and [`cli`]: property suites and the command-line front end.

pub mod bell_poly;
pub mod cli;
pub mod error;
pub mod faa_di_bruno;
pub mod jet;
pub mod kron_ops;
pub mod limits;
pub mod matrix;
pub mod matrix_calculus;
pub mod normal_moments;
pub mod partitions;
pub mod suites;
pub mod verification;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use jet::{Jet, JetMatrix};
pub use matrix::DenseMatrix;
