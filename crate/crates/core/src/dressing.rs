//! Microwave-dressed Rydberg states |±⟩ = N±(C±|P⟩ + |S⟩) of a single ion.
//!
//! The rotating-frame Hamiltonian on (|P⟩, |S⟩) is
//! `[[Δ_P, Ω_MW/2], [Ω_MW/2, Δ_S]]`; all energies are in rad/μs.

use serde::{Deserialize, Serialize};

use crate::numerics::roots::bisect;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwDrive {
    /// Ω_MW (rad/μs).
    pub omega_mw_rabi: f64,
    /// Δ_S (rad/μs).
    pub delta_s: f64,
    /// Δ_P (rad/μs).
    pub delta_p: f64,
    /// |S⟩↔|P⟩ transition dipole d₁ (C·m).
    pub d1: f64,
}

impl MwDrive {
    pub fn new(omega_mw_rabi: f64, delta_s: f64, delta_p: f64, d1: f64) -> Result<Self> {
        if !(omega_mw_rabi > 0.0) {
            return Err(Error::InvalidArgument(format!("Ω_MW must be positive, got {omega_mw_rabi}")));
        }
        Ok(Self { omega_mw_rabi, delta_s, delta_p, d1 })
    }

    /// Δ₋ = Δ_P − Δ_S.
    pub fn delta_minus(&self) -> f64 {
        self.delta_p - self.delta_s
    }

    /// Δ₊ = Δ_P + Δ_S.
    pub fn delta_plus(&self) -> f64 {
        self.delta_p + self.delta_s
    }

    /// Autler–Townes splitting √(Ω_MW² + Δ₋²).
    pub fn splitting(&self) -> f64 {
        self.omega_mw_rabi.hypot(self.delta_minus())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedPair {
    pub c_plus: f64,
    pub c_minus: f64,
    pub n_plus: f64,
    pub n_minus: f64,
    /// E₊ (rad/μs).
    pub e_plus: f64,
    /// E₋ (rad/μs).
    pub e_minus: f64,
    pub pol_plus: f64,
    pub pol_minus: f64,
}

impl DressedPair {
    pub fn coefficient(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.c_plus,
            Branch::Minus => self.c_minus,
        }
    }

    pub fn normalization(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.n_plus,
            Branch::Minus => self.n_minus,
        }
    }

    pub fn polarizability(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Plus => self.pol_plus,
            Branch::Minus => self.pol_minus,
        }
    }

    /// Amplitudes (⟨P|±⟩, ⟨S|±⟩).
    pub fn amplitudes(&self, branch: Branch) -> (f64, f64) {
        let n = self.normalization(branch);
        (n * self.coefficient(branch), n)
    }
}

/// C± = (Δ₋ ± √(Ω² + Δ₋²))/Ω, written so neither branch cancels catastrophically.
fn coefficients(omega: f64, delta_minus: f64) -> (f64, f64) {
    let root = omega.hypot(delta_minus);
    if delta_minus >= 0.0 {
        let c_plus = (delta_minus + root) / omega;
        (c_plus, -1.0 / c_plus)
    } else {
        let c_minus = (delta_minus - root) / omega;
        (-1.0 / c_minus, c_minus)
    }
}

fn dressed_polarizability(c: f64, pol_p: f64, pol_s: f64) -> f64 {
    (c * c * pol_p + pol_s) / (1.0 + c * c)
}

pub fn dress(drive: &MwDrive, pol_p: f64, pol_s: f64) -> DressedPair {
    let omega = drive.omega_mw_rabi;
    let (c_plus, c_minus) = coefficients(omega, drive.delta_minus());
    let half_split = 0.5 * drive.splitting();
    let centre = 0.5 * drive.delta_plus();
    DressedPair {
        c_plus,
        c_minus,
        n_plus: 1.0 / (1.0 + c_plus * c_plus).sqrt(),
        n_minus: 1.0 / (1.0 + c_minus * c_minus).sqrt(),
        e_plus: centre + half_split,
        e_minus: centre - half_split,
        pol_plus: dressed_polarizability(c_plus, pol_p, pol_s),
        pol_minus: dressed_polarizability(c_minus, pol_p, pol_s),
    }
}

/// Default bisection bracket for Δ₋, in units of Ω_MW.
pub const DEFAULT_BRACKET: f64 = 100.0;

/// Finds Δ₋ (rad/μs) in `[−bracket·Ω, bracket·Ω]` at which the chosen dressed
/// branch has zero polarizability.
pub fn solve_zero_polarizability(
    pol_p: f64,
    pol_s: f64,
    omega_mw_rabi: f64,
    branch: Branch,
    bracket: f64,
) -> Result<f64> {
    if !(omega_mw_rabi > 0.0) {
        return Err(Error::InvalidArgument(format!("Ω_MW must be positive, got {omega_mw_rabi}")));
    }
    if pol_p * pol_s >= 0.0 {
        return Err(Error::NoRoot(format!(
            "polarizabilities P_P = {pol_p:e} and P_S = {pol_s:e} do not have opposite signs"
        )));
    }
    let p = |dm: f64| {
        let (cp, cm) = coefficients(omega_mw_rabi, dm);
        let c = if branch == Branch::Plus { cp } else { cm };
        dressed_polarizability(c, pol_p, pol_s)
    };
    let lim = bracket * omega_mw_rabi;
    bisect(p, -lim, lim)
}

/// Ω₋ = Ω_MW·Ω/√(4N₋²(Ω_MW² + Δ₋²)).
pub fn effective_rabi(drive: &MwDrive, omega_laser_rabi: f64) -> f64 {
    let pair = dress(drive, 0.0, 0.0);
    let omega = drive.omega_mw_rabi;
    let dm = drive.delta_minus();
    omega * omega_laser_rabi / (4.0 * pair.n_minus * pair.n_minus * (omega * omega + dm * dm)).sqrt()
}
