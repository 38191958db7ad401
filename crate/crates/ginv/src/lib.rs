//! Dense complex-matrix toolkit for generalized inverses and the
//! orthogonality relations built on them.
//!
//! The crate is organized in layers:
//!
//! * [`numkit`] — the [`ComplexMatrix`] carrier, SVD, numerical rank,
//!   and range predicates;
//! * [`geninv`] — Moore-Penrose inverses (SVD route and block-formula
//!   routes), orthogonal projectors, and g-inverse sampling;
//! * [`coreinv`] — matrix index, core-EP decomposition, and the core
//!   inverse of group matrices;
//! * [`ortho`] — one-sided star- and core-orthogonality predicates and
//!   the simultaneous canonical factorizations of orthogonal pairs;
//! * [`psum`] — parallel summability, the parallel sum, and its
//!   invariance oracle;
//! * [`addorder`] — star/core partial orders and additivity criteria
//!   for the Moore-Penrose and core inverses;
//! * [`harness`] — seeded generators for structured matrix families,
//!   theorem-verification campaigns, matrix file I/O, and JSON reports.
//!
//! Everything is plain `f64`-complex arithmetic on small dense matrices;
//! all operations are pure functions and safe to call concurrently.
//!
//! ```
//! use ginv::{ComplexMatrix, Tolerance};
//!
//! let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
//! let tol = Tolerance::default();
//! let pinv = ginv::geninv::pinv(&a, &tol).unwrap();
//! let back = &(&a * &pinv) * &a;
//! assert!(back.approx_eq(&a, 1e-12));
//! ```

pub mod addorder;
pub mod coreinv;
mod error;
pub mod geninv;
pub mod harness;
pub mod numkit;
pub mod ortho;
pub mod psum;

pub use error::{Error, Result};
pub use numkit::{ComplexMatrix, SvdFactors, Tolerance};

#[cfg(test)]
pub(crate) mod testutil;

#[cfg(doctest)]
mod book;
