//! Analysis and simulation of first-order multi-agent systems coupled over
//! signed digraphs with one or several leader groups.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`graph`]: the signed digraph model, strongly connected components,
//!   leader-group detection, structural balance and a seeded fixture
//!   generator.
//! * [`incidence`]: signed incidence / in-incidence matrices, the signed
//!   Laplacian, the signed edge Laplacian and gauge transformations.
//! * [`linalg`] and [`spectral`]: numerical rank and null spaces, the zero
//!   eigenvalue structure of the edge Laplacian (Jordan chains of length at
//!   most two, biorthogonal eigenvectors, spectral projector and limit
//!   operator) and the structural predictions it is checked against.
//! * [`lyapunov`]: the shifted Lyapunov equation certifying exponential
//!   stability of the synchronization errors.
//! * [`dynamics`]: node/edge/synchronization-error trajectories, closed-form
//!   edge limits and a matrix-exponential oracle.
//! * [`behavior`]: emergent-behavior classification and the objective checks.

#![no_std]

extern crate alloc;

pub mod behavior;
pub mod dynamics;
mod error;
pub mod graph;
pub mod incidence;
pub mod linalg;
pub mod lyapunov;
pub mod spectral;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::TolerancePolicy;

pub use nalgebra::{DMatrix, DVector};
