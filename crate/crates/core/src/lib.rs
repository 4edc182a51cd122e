//! Voigt functions `K(x, y)` and `L(x, y)`, defined by
//! `K - iL = e^{w^2} erfc w` with `w = y + ix`, evaluated either to a
//! requested precision or through optimally truncated asymptotic
//! expansions whose exponentially small remainders are themselves expanded,
//! including the error-function smoothing across the Stokes line
//! `arg w = pi/2`.
//!
//! * [`numerics`]: precision contexts, erfc, incomplete gamma, quadrature.
//! * [`oracle`]: reference values of `K`, `L` and of the remainders.
//! * [`coefficients`]: `A_2k`, `B_2k`, `c(phi)`, `E(phi)`, series reversion.
//! * [`expansions`]: the asymptotic evaluators.
//! * [`cli`]: the `voigt` command.

pub mod cli;
pub mod coefficients;
pub mod error;
pub mod expansions;
pub mod numerics;
pub mod oracle;

pub use error::{Result, VoigtError};
