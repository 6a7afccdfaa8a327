//! Verblunsky coefficients, CMV matrices and their DVZ transforms.
//!
//! A real Verblunsky sequence `alpha` defines the CMV factors `L` and `M`.
//! For every `lambda0, lambda1 != 0` the pencil `K = lambda0 L + lambda1 M` is
//! conjugate by a diagonal sign matrix to a Jacobi matrix `J_{lambda0, lambda1}`,
//! whose orthonormal polynomials `q_n` are orthogonal with respect to the
//! pushforward `nu_lambda` of the circle measure `mu`.
//!
//! ```
//! use cmvdvz::{dvz, seqcore::VerblunskySequence};
//!
//! let alpha = VerblunskySequence::mass_point(0.5, 6)?;
//! let j = dvz::forward(&alpha, 1.0, 2.0, 6)?;
//! let back = dvz::invert(&j, dvz::DEFAULT_TOL)?;
//! assert_eq!(back.lambda1(), 2.0);
//! # Ok::<(), cmvdvz::Error>(())
//! ```

pub mod diagram;
pub mod dvz;
pub mod error;
pub mod families;
pub mod format;
pub mod io;
pub mod matrices;
pub mod measures;
pub mod oprl;
pub mod poly;
pub mod quadrature;
pub mod seqcore;

pub use error::{Error, Result};
pub use families::Family;
pub use matrices::Tridiagonal;
pub use measures::{CircleMeasure, LineMeasure};
pub use quadrature::QuadratureSpec;
pub use seqcore::VerblunskySequence;

// The guide's code blocks run as doc-tests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/verblunsky.md")]
    mod verblunsky {}
    #[doc = include_str!("../../../book/src/cmv.md")]
    mod cmv {}
    #[doc = include_str!("../../../book/src/dvz.md")]
    mod dvz {}
    #[doc = include_str!("../../../book/src/chebyshev.md")]
    mod chebyshev {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/diagram.md")]
    mod diagram {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
