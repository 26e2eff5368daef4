//! Computable C*-correspondences over finite-dimensional C*-algebras.
//!
//! The crate models a correspondence `X` over `A = ⊕_j M_{n_j}(ℂ)` exactly as
//! far as its ideal structure goes and numerically (double precision) for
//! everything else:
//!
//! - [`fdalg`]: the algebra and its ideal lattice;
//! - [`hmod`]: Hilbert modules and rank-one operators;
//! - [`corr`]: left actions, the ideal `J_X`, tensor products and
//!   bimodules;
//! - [`rep`]: representations `(π, t)`, `ψ_t` and covariance checks;
//! - [`fock`]: truncated Fock representations and their defect profiles;
//! - [`graph`]: directed graphs and Cuntz–Krieger relations.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod corr;
pub mod error;
pub mod fdalg;
pub mod fock;
pub mod graph;
pub mod hmod;
pub mod linalg;
#[cfg(any(test, feature = "random"))]
pub mod random;
pub mod rep;

pub use corr::{Correspondence, CorrespondenceFlags, StarHom};
pub use error::{Error, Result};
pub use fdalg::{AlgElement, FdAlgebra, Ideal, MatrixUnit};
pub use hmod::{HilbertModule, ModuleElement, ModuleOperator};
pub use rep::{CovarianceReport, Representation};
