//! Radially symmetric, self-similar admissible subsolutions of the 2D
//! incompressible Euler equations.
//!
//! The crate builds velocity profiles `H(ξ)`, checks the two admissibility
//! conditions, evaluates the subsolution fields `(v, σ, q)`, and computes the
//! energy dissipation rate along with its optimal growth constant.
//!
//! ```
//! use subsol::profiles::{make_ansatz_profile, Alpha};
//! use subsol::subsolution::SubsolutionFields;
//!
//! let p = make_ansatz_profile(Alpha::new(1.0).unwrap(), 0.0).unwrap();
//! let report = SubsolutionFields::new(p).unwrap().report().unwrap();
//! assert!(report.is_admissible());
//! assert!((report.c_opt.unwrap() - 4.0 / 9.0).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod energy;
pub mod error;
pub mod fields;
pub mod profiles;
pub mod quadrature;
pub mod search;
pub mod series;
pub mod subsolution;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/subsolution.md")]
    mod subsolution {}
    #[doc = include_str!("../../../book/src/energy.md")]
    mod energy {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
