//! Numerical tensor calculus for 3-dimensional contact metric geometry.
//!
//! The crate builds a contact metric structure `(phi, xi, eta, g)` from a
//! user-supplied metric and contact form (closed-form expressions in the
//! chart coordinates `x, y, z`), differentiates everything exactly through
//! third-order jets, and certifies the structure against the defining
//! axioms.  On certified structures it extracts the nullity functions
//! `(kappa, mu)` from the Jacobi-type operator, reconstructs the curvature
//! and Ricci tensors from their `(kappa, mu)` closed forms, and verifies the
//! pointwise and covariant identities that constrain such geometries.
//!
//! On top of the curvature engine sits a three-parameter family of
//! generalized curvature operators `W(alpha, beta, gamma)` covering nine
//! classical members (conformal, concircular, projective, conharmonic, and
//! friends), an algebraic-derivation engine that applies curvature operators
//! to curvature and Ricci tensors, and a classifier that decides whether a
//! manifold satisfies a derivation condition and, when it does, which
//! structural branch explains the outcome.
//!
//! A small gallery of built-in manifolds (Sasakian, flat, constant and
//! nonconstant nullity functions) exercises every code path; the
//! [`runner`] module turns each entry into a deterministic [`report::Report`].
//!
//! With the default `parallel` feature the per-point work is distributed
//! with rayon; disabling it yields a dependency-free sequential core with
//! identical results.

// Dense tensor kernels index several fixed-size arrays per loop; explicit
// index loops keep the contraction formulas recognizable.
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod contact;
pub mod curvature;
pub mod error;
pub mod expr;
pub mod gallery;
pub mod geometry;
pub mod jet;
pub mod manifest;
pub mod model;
pub mod par;
pub mod report;
pub mod runner;
pub mod sample;
pub mod tensor;
pub mod tol;

pub use error::{Error, Result};

/// Engine version, mirrored into report headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
