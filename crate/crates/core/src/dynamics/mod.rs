//! Time-dependent Schrödinger evolution of the two-ion gate Hamiltonian on
//! {|E⟩, |D⟩, |−⟩}⊗{|E⟩, |D⟩, |−⟩}⊗Fock(n_max) of the axial centre-of-mass mode.

mod hamiltonian;
mod integrator;
mod observables;

pub use hamiltonian::{build_hamiltonian, DriveProfile, GateHamiltonian, Level, PiecewiseConstantDrive};
pub use integrator::{propagate, Tolerances};
pub use observables::{
    dynamic_gate_phases, evolve, evolve_batch, evolve_with, loss_probability, phonon_excitation, DynamicPhases,
    EvolutionTrace, PhononExcitation, Populations,
};

use crate::gate::PulseShape;
use crate::{Error, Result};

pub const DEFAULT_N_PHONON_MAX: usize = 5;
pub const DEFAULT_OUTPUT_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// B = C₃(−)/R₀³ (rad/μs).
    pub blockade: f64,
    /// Axial centre-of-mass frequency ω_z (rad/μs).
    pub omega_z: f64,
    /// Lamb-Dicke parameter η.
    pub eta: f64,
    pub n_phonon_max: usize,
    pub pulse: PulseShape,
    pub tolerances: Tolerances,
    /// Uniform output grid size over [0, τ], endpoints included.
    pub output_points: usize,
}

impl SimConfig {
    pub fn new(blockade: f64, omega_z: f64, eta: f64, pulse: PulseShape) -> Self {
        Self {
            blockade,
            omega_z,
            eta,
            n_phonon_max: DEFAULT_N_PHONON_MAX,
            pulse,
            tolerances: Tolerances::default(),
            output_points: DEFAULT_OUTPUT_POINTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_phonon_max < 1 {
            return Err(Error::InvalidArgument("n_phonon_max must be at least 1".into()));
        }
        self.tolerances.validate()?;
        if self.output_points < 2 {
            return Err(Error::InvalidArgument("output grid needs at least two points".into()));
        }
        Ok(())
    }

    /// Number of Fock states kept, n_max + 1.
    pub fn fock_dim(&self) -> usize {
        self.n_phonon_max + 1
    }

    pub fn dim(&self) -> usize {
        9 * self.fock_dim()
    }
}
