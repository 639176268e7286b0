//! Local and global Lindblad (GKSL) dynamics of a qubit coupled to a
//! dissipative two-level impurity.
//!
//! The crate builds the joint qubit-impurity Hamiltonian, derives jump
//! operators in the local (uncoupled-spectrum) and global (full-spectrum)
//! full-secular constructions, propagates the resulting master equations,
//! and compares both against closed-form coherence solutions.
//!
//! Start from the `examples/` directory for runnable walkthroughs of each
//! capability, or from [`model::SystemParams`] for the physics inputs.

pub mod analytic;
pub mod cli;
pub mod densemath;
pub mod dissipators;
pub mod evolution;
pub mod model;
pub mod regimes;
