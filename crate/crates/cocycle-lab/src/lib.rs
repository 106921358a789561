//! cocycle-lab: a numerical laboratory for cocycles, Fourier multiplier
//! symbols and semigroup norms on finite group algebras.
//!
//! The crate makes the objects of noncommutative Fourier multiplier theory
//! concrete at finite scale: length functions are certified by
//! eigendecomposition, cocycles are built from their Gromov forms,
//! noncommutative `L_p` and semigroup-BMO norms are computed exactly
//! through the left regular representation, and the gradient form is
//! cross-checked against a gaussian derivation by Monte Carlo.
//!
//! ```
//! use cocycle_lab::catalog::zn_roots;
//! use cocycle_lab::cocycle::separation_report;
//!
//! let (_, cocycle) = zn_roots(4)?;
//! // the 2-dimensional roots cocycle stores psi(k) = 2 - 2 cos(2 pi k / 4)
//! assert_eq!(cocycle.dim(), 2);
//! assert!((cocycle.psi()[2] - 4.0).abs() < 1e-12);
//! let sep = separation_report(&cocycle);
//! assert!(sep.standard);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod cocycle;
pub mod config;
pub mod error;
pub mod euclid;
pub mod expr;
pub mod gradient;
pub mod group;
pub mod length;
pub mod linalg;
pub mod littlewood;
pub mod mihlin;
pub mod multiplier;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
