//! Design and simulation of a Rydberg-blockade controlled phase gate between
//! two trapped Ca⁺ ions.
//!
//! The crate is organised bottom-up:
//!
//! * [`trap`] turns Paul-trap gradients into secular frequencies, the
//!   two-ion equilibrium geometry and Lamb-Dicke parameters.
//! * [`phonons`] builds the state-dependent 2×2 Hessians and their normal modes.
//! * [`franck_condon`] computes vibrational overlap matrices between two
//!   phonon bases.
//! * [`dressing`] constructs microwave-dressed Rydberg states and nulls their
//!   polarizability.
//! * [`interactions`] evaluates van der Waals and dipole-dipole pair shifts,
//!   including the full two-ion microwave + exchange diagonalisation.
//! * [`gate`] designs the adiabatic pulse and the resulting phase gate.
//! * [`dynamics`] integrates the Schrödinger equation on the electronic ⊗
//!   centre-of-mass phonon space.
//! * [`config`] loads the sectioned TOML run configuration.
//!
//! Internally all angular frequencies are in rad/μs, times in μs, lengths in
//! μm and ħ = 1, so energies are angular frequencies and `∫E dt` is a phase
//! in radians. The trap module works in SI and offers conversions.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod dressing;
pub mod dynamics;
pub mod error;
pub mod franck_condon;
pub mod gate;
pub mod interactions;
pub mod numerics;
pub mod phonons;
pub mod trap;

pub use error::{Error, Result};
