//! Exact symbolic calculus for Fourier-Mukai transforms on Weierstrass
//! elliptic threefolds `p: X → S`.
//!
//! * [`ring`]: numerical cohomology of `S` and `X` with `Θ² = Θ·p*K_S`.
//! * [`fm`]: `(ch0, ch1)` of transforms and duals of line bundles, slopes,
//!   and the character-level duality check.
//! * [`duality`]: the two duality spectral sequences as a vanishing solver,
//!   cross-checked against a closed-form table.
//! * [`stability`]: slope certificates and an exhaustive falsifier for
//!   destabilizing subsheaves of transforms of line bundles.
//! * [`cli`]: the `weierfm` command-line front end.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod cli;
pub mod duality;
pub mod error;
pub mod fm;
pub mod presets;
pub mod rational;
pub mod ring;
pub mod stability;

pub use error::{Error, Result};
pub use rational::Rational;
