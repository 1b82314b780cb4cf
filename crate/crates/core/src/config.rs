//! TOML run configuration. Frequencies are ordinary MHz, times μs, lengths μm;
//! the accessors convert into the internal rad/μs system.
//!
//! Every key is optional. Defaults:
//!
//! | key | default | origin |
//! |---|---|---|
//! | `trap.alpha` | 1.069e9 V/m² | gives ω_ρ ≈ 2π×3 MHz |
//! | `trap.beta` | 4.088e6 V/m² | gives ω_Z ≈ 2π×1 MHz |
//! | `trap.omega_rf_mhz` | 30 | typical linear trap |
//! | `trap.mass_amu` | 39.962590863 | ⁴⁰Ca |
//! | `trap.laser_wavelength_nm` | 122 | two-photon excitation to the Rydberg manifold |
//! | `dressing.omega_mw_mhz` | 400 | |
//! | `dressing.delta_s_mhz` | 136.074 | |
//! | `dressing.delta_p_mhz` | 293.957 | |
//! | `dressing.pol_p`, `pol_s` | −1.0e8, 4.62905e7 m²/J | polarizability over e²; the lower branch is unpolarizable at the drive above |
//! | `dressing.d1` | 1.02625849884e-26 C·m | about 1210 e·a₀ |
//! | `interactions.c6_ghz_um6` | 0.3 | n = 65 |
//! | `interactions.r0_um` | 5.0 | |
//! | `pulse.*` | Ω₀ = 0.5 MHz, Δ₀ = 0.639 MHz, τ = 60 μs | π entangling phase at B = 2.5 MHz |
//! | `simulation.n_phonon_max` | 5 | |
//! | `simulation.rtol`, `atol` | 1e-9, 1e-11 | |
//! | `simulation.output_points` | 200 | |
//! | `simulation.tau0_us` | 132 | dressed-state lifetime |
//!
//! `simulation.blockade_mhz`, `trap.omega_z_mhz_override` and
//! `trap.eta_override` are unset by default and then derived.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants::{mhz_to_rad_per_us, AMU, CA40_MASS_AMU};
use crate::dressing::{dress, DressedPair, MwDrive};
use crate::dynamics::{SimConfig, Tolerances};
use crate::gate::PulseShape;
use crate::interactions::{dd_coefficients, dd_shift, InteractionModel};
use crate::trap::{lamb_dicke, secular_frequencies, TrapConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrapSection {
    pub alpha: f64,
    pub beta: f64,
    pub omega_rf_mhz: f64,
    pub mass_amu: f64,
    pub omega_z_mhz_override: Option<f64>,
    pub eta_override: Option<f64>,
    pub laser_wavelength_nm: f64,
}

impl Default for TrapSection {
    fn default() -> Self {
        let t = TrapConfig::default();
        Self {
            alpha: t.alpha,
            beta: t.beta,
            omega_rf_mhz: 30.0,
            mass_amu: CA40_MASS_AMU,
            omega_z_mhz_override: None,
            eta_override: None,
            laser_wavelength_nm: 122.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DressingSection {
    pub omega_mw_mhz: f64,
    pub delta_s_mhz: f64,
    pub delta_p_mhz: f64,
    pub pol_p: f64,
    pub pol_s: f64,
    pub d1: f64,
}

impl Default for DressingSection {
    fn default() -> Self {
        Self {
            omega_mw_mhz: 400.0,
            delta_s_mhz: 136.074,
            delta_p_mhz: 293.957,
            pol_p: -1.0e8,
            pol_s: 4.62905e7,
            d1: 1.026_258_498_84e-26,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InteractionsSection {
    pub c6_ghz_um6: f64,
    pub r0_um: f64,
}

impl Default for InteractionsSection {
    fn default() -> Self {
        Self { c6_ghz_um6: 0.3, r0_um: 5.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseSection {
    pub omega0_mhz: f64,
    pub delta0_mhz: f64,
    pub tau_us: f64,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self { omega0_mhz: 0.5, delta0_mhz: 0.639, tau_us: 60.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub blockade_mhz: Option<f64>,
    pub n_phonon_max: usize,
    pub rtol: f64,
    pub atol: f64,
    pub output_points: usize,
    pub tau0_us: f64,
}

impl Default for SimulationSection {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self {
            blockade_mhz: None,
            n_phonon_max: crate::dynamics::DEFAULT_N_PHONON_MAX,
            rtol: tol.rtol,
            atol: tol.atol,
            output_points: crate::dynamics::DEFAULT_OUTPUT_POINTS,
            tau0_us: 132.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Standard output when unset.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub trap: TrapSection,
    pub dressing: DressingSection,
    pub interactions: InteractionsSection,
    pub pulse: PulseSection,
    pub simulation: SimulationSection,
    pub output: OutputSection,
}

fn invalid(key: &str, reason: impl Into<String>) -> Error {
    Error::Validation { key: key.to_string(), reason: reason.into() }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, format!("must be a positive finite number, got {v}")))
    }
}

fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, format!("must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.trap;
        positive("trap.alpha", t.alpha)?;
        positive("trap.beta", t.beta)?;
        positive("trap.omega_rf_mhz", t.omega_rf_mhz)?;
        positive("trap.mass_amu", t.mass_amu)?;
        positive("trap.laser_wavelength_nm", t.laser_wavelength_nm)?;
        if let Some(w) = t.omega_z_mhz_override {
            positive("trap.omega_z_mhz_override", w)?;
        }
        if let Some(eta) = t.eta_override {
            if !(eta.is_finite() && eta >= 0.0) {
                return Err(invalid("trap.eta_override", format!("must be non-negative, got {eta}")));
            }
        }
        let d = &self.dressing;
        positive("dressing.omega_mw_mhz", d.omega_mw_mhz)?;
        finite("dressing.delta_s_mhz", d.delta_s_mhz)?;
        finite("dressing.delta_p_mhz", d.delta_p_mhz)?;
        finite("dressing.pol_p", d.pol_p)?;
        finite("dressing.pol_s", d.pol_s)?;
        positive("dressing.d1", d.d1)?;
        let i = &self.interactions;
        if !(i.c6_ghz_um6.is_finite() && i.c6_ghz_um6 >= 0.0) {
            return Err(invalid("interactions.c6_ghz_um6", format!("must be non-negative, got {}", i.c6_ghz_um6)));
        }
        positive("interactions.r0_um", i.r0_um)?;
        let p = &self.pulse;
        finite("pulse.omega0_mhz", p.omega0_mhz)?;
        finite("pulse.delta0_mhz", p.delta0_mhz)?;
        positive("pulse.tau_us", p.tau_us)?;
        let s = &self.simulation;
        if let Some(b) = s.blockade_mhz {
            finite("simulation.blockade_mhz", b)?;
        }
        if s.n_phonon_max < 1 {
            return Err(invalid("simulation.n_phonon_max", "must be at least 1"));
        }
        for (key, v) in [("simulation.rtol", s.rtol), ("simulation.atol", s.atol)] {
            if !(v > 0.0 && v <= 1e-3) {
                return Err(invalid(key, format!("must lie in (0, 1e-3], got {v}")));
            }
        }
        if s.output_points < 2 {
            return Err(invalid("simulation.output_points", "must be at least 2"));
        }
        positive("simulation.tau0_us", s.tau0_us)?;
        Ok(())
    }

    pub fn trap_config(&self) -> TrapConfig {
        TrapConfig::new(self.trap.alpha, self.trap.beta, TAU * self.trap.omega_rf_mhz * 1e6, self.trap.mass_amu * AMU)
    }

    /// Axial centre-of-mass frequency (rad/μs), override first.
    pub fn omega_z(&self) -> Result<f64> {
        match self.trap.omega_z_mhz_override {
            Some(f) => Ok(mhz_to_rad_per_us(f)),
            None => Ok(secular_frequencies(&self.trap_config())?.omega_z_rad_per_us()),
        }
    }

    /// η, override first; otherwise from the laser wavelength and ω_z.
    pub fn eta(&self) -> Result<f64> {
        if let Some(eta) = self.trap.eta_override {
            return Ok(eta);
        }
        let omega_z = self.omega_z()? * 1e6;
        let k = TAU / (self.trap.laser_wavelength_nm * 1e-9);
        Ok(lamb_dicke(k, omega_z, self.trap.mass_amu * AMU))
    }

    pub fn mw_drive(&self) -> Result<MwDrive> {
        let d = &self.dressing;
        MwDrive::new(
            mhz_to_rad_per_us(d.omega_mw_mhz),
            mhz_to_rad_per_us(d.delta_s_mhz),
            mhz_to_rad_per_us(d.delta_p_mhz),
            d.d1,
        )
    }

    pub fn dressed_pair(&self) -> Result<DressedPair> {
        Ok(dress(&self.mw_drive()?, self.dressing.pol_p, self.dressing.pol_s))
    }

    pub fn interaction_model(&self) -> Result<InteractionModel> {
        let c6 = mhz_to_rad_per_us(self.interactions.c6_ghz_um6 * 1e3);
        Ok(dd_coefficients(&self.dressed_pair()?, self.dressing.d1).with_c6(c6))
    }

    /// B (rad/μs): the configured value, else C₃(−)/R₀³ from the dressing.
    pub fn blockade(&self) -> Result<f64> {
        match self.simulation.blockade_mhz {
            Some(b) => Ok(mhz_to_rad_per_us(b)),
            None => Ok(dd_shift(self.interaction_model()?.c3_minus, self.interactions.r0_um)),
        }
    }

    pub fn pulse(&self) -> Result<PulseShape> {
        let p = &self.pulse;
        PulseShape::new(mhz_to_rad_per_us(p.omega0_mhz), mhz_to_rad_per_us(p.delta0_mhz), p.tau_us)
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let s = &self.simulation;
        let mut cfg = SimConfig::new(self.blockade()?, self.omega_z()?, self.eta()?, self.pulse()?);
        cfg.n_phonon_max = s.n_phonon_max;
        cfg.tolerances = Tolerances { rtol: s.rtol, atol: s.atol };
        cfg.output_points = s.output_points;
        Ok(cfg)
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    RunConfig::from_toml_str(&text)
}
