//! Exact and numerical analysis of the anomalous dimension of the massless
//! Wess-Zumino model.
//!
//! The crate solves the model's Schwinger-Dyson equation coupled to its
//! renormalization-group recursion as an exact formal series over the ring of
//! odd zeta values, maps series to the Borel plane where products become
//! convolutions, analyses the location / exponent / transcendental content of
//! the Borel singularities, and numerically integrates the truncated
//! Borel-plane system along complex rays to probe boundedness at infinity.
//!
//! Module map:
//! - [`scalars`]: exact rationals and the odd-zeta polynomial ring with its
//!   two weight gradings.
//! - [`series`]: truncated formal power series and triangular bivariate
//!   series over a generic coefficient ring.
//! - [`mellin`]: the one-loop Mellin kernel `H(x,y)` - exact Taylor data,
//!   pole residues, subtracted kernels and complex evaluation.
//! - [`physical`]: physical-plane solvers - the RG tower, the Schwinger-Dyson
//!   fixed point, the approximate three-equation system, pole towers and the
//!   reference nonlinear ODE.
//! - [`borel`]: the Borel dictionary - transform, convolution, primitive and
//!   Euler rules, singular forms and the alien operator at the first
//!   singularity.
//! - [`singular`]: singularity analytics - closed-form exponents, trans-series
//!   symbol algebra, Domb-Sykes estimation and weight audits.
//! - [`rayquad`]: the marching solver for the truncated Borel-plane system on
//!   complex rays, with a Chen-iterated-integral oracle.

pub mod borel;
pub mod mellin;
pub mod physical;
pub mod rayquad;
pub mod scalars;
pub mod singular;
pub mod series;

pub use scalars::{Rational, Weight, ZetaMonomial, ZetaPoly};
pub use series::{BiSeries, Coeff, FormalSeries};

// The guide's code blocks run as documentation tests, so the book cannot
// drift from the library. `cargo test --doc` covers them.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/zeta-algebra.md")]
    mod zeta_algebra {}
    #[doc = include_str!("../../../book/src/formal-series.md")]
    mod formal_series {}
    #[doc = include_str!("../../../book/src/mellin-kernel.md")]
    mod mellin_kernel {}
    #[doc = include_str!("../../../book/src/physical-plane.md")]
    mod physical_plane {}
    #[doc = include_str!("../../../book/src/borel-plane.md")]
    mod borel_plane {}
    #[doc = include_str!("../../../book/src/singularities.md")]
    mod singularities {}
    #[doc = include_str!("../../../book/src/ray-solver.md")]
    mod ray_solver {}
}
