//! Linear Paul trap: secular frequencies, two-ion equilibrium and Lamb-Dicke
//! parameters. Everything here is SI; use the `*_rad_per_us` / `*_um`
//! accessors to cross into the internal unit system.

use std::f64::consts::PI;

use crate::constants::{m_to_um, rad_per_s_to_rad_per_us, AMU, CA40_MASS_AMU, EPSILON_0, E_CHARGE, HBAR};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapConfig {
    /// rf field gradient (V/m²).
    pub alpha: f64,
    /// Static field gradient (V/m²).
    pub beta: f64,
    /// rf drive angular frequency (rad/s).
    pub omega_rf: f64,
    /// Ion mass (kg).
    pub mass: f64,
    /// Net ion charge (C).
    pub charge: f64,
}

impl TrapConfig {
    /// A trap for singly charged ions with the default elementary charge.
    pub fn new(alpha: f64, beta: f64, omega_rf: f64, mass: f64) -> Self {
        Self { alpha, beta, omega_rf, mass, charge: E_CHARGE }
    }

    /// Inverts the secular-frequency formulas: returns the gradients that give
    /// the requested radial and axial angular frequencies (rad/s).
    pub fn from_secular(mass: f64, omega_rf: f64, omega_rho: f64, omega_z: f64) -> Self {
        let q = E_CHARGE;
        let beta = mass * omega_z * omega_z / (4.0 * q);
        // (qα/MΩ)² = ω_ρ²/2 + qβ/M
        let a_term = omega_rho * omega_rho / 2.0 + q * beta / mass;
        let alpha = a_term.sqrt() * mass * omega_rf / q;
        Self { alpha, beta, omega_rf, mass, charge: q }
    }

    /// Same trap with β re-solved so that the axial frequency is `omega_z` (rad/s).
    pub fn with_axial_frequency(mut self, omega_z: f64) -> Self {
        self.beta = self.mass * omega_z * omega_z / (4.0 * self.charge);
        self
    }

    /// Ion-ion Coulomb constant q²/4πε₀ (J·m).
    pub fn coulomb_constant(&self) -> f64 {
        self.charge * self.charge / (4.0 * PI * EPSILON_0)
    }
}

impl Default for TrapConfig {
    /// ⁴⁰Ca⁺ with ω_Z ≈ 2π×1 MHz, ω_ρ ≈ 2π×3 MHz and a 2π×30 MHz rf drive.
    fn default() -> Self {
        Self::new(1.069e9, 4.088e6, 2.0 * PI * 30e6, CA40_MASS_AMU * AMU)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularFrequencies {
    /// Radial angular frequency (rad/s).
    pub omega_rho: f64,
    /// Axial angular frequency (rad/s).
    pub omega_z: f64,
}

impl SecularFrequencies {
    pub fn omega_rho_rad_per_us(&self) -> f64 {
        rad_per_s_to_rad_per_us(self.omega_rho)
    }

    pub fn omega_z_rad_per_us(&self) -> f64 {
        rad_per_s_to_rad_per_us(self.omega_z)
    }
}

/// ω_ρ = √(2[(eα/MΩ)² − eβ/M]), ω_Z = 2√(eβ/M).
pub fn secular_frequencies(cfg: &TrapConfig) -> Result<SecularFrequencies> {
    let q_over_m = cfg.charge / cfg.mass;
    let axial = q_over_m * cfg.beta;
    if !(axial > 0.0) {
        return Err(Error::Unconfined(format!("axial radicand eβ/M = {axial:.3e} must be positive")));
    }
    let rf = q_over_m * cfg.alpha / cfg.omega_rf;
    let radial = 2.0 * (rf * rf - axial);
    if !(radial > 0.0) {
        return Err(Error::Unconfined(format!("radial radicand 2[(eα/MΩ)² − eβ/M] = {radial:.3e} must be positive")));
    }
    Ok(SecularFrequencies { omega_rho: radial.sqrt(), omega_z: 2.0 * axial.sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalGeometry {
    /// Equilibrium axial position of ion 1 (m), negative.
    pub z1_bar: f64,
    /// Equilibrium axial position of ion 2 (m), positive.
    pub z2_bar: f64,
    /// Ion separation (m).
    pub r0: f64,
    /// Unit vector from ion 2 to ion 1.
    pub n12: [f64; 3],
}

impl CrystalGeometry {
    pub fn r0_um(&self) -> f64 {
        m_to_um(self.r0)
    }
}

/// −Z̄₁ = Z̄₂ = (C₀/16eβ)^{1/3}.
pub fn equilibrium_geometry(cfg: &TrapConfig) -> Result<CrystalGeometry> {
    if !(cfg.beta > 0.0) {
        return Err(Error::Unconfined(format!("static gradient β = {} must be positive", cfg.beta)));
    }
    let z2 = (cfg.coulomb_constant() / (16.0 * cfg.charge * cfg.beta)).cbrt();
    Ok(CrystalGeometry { z1_bar: -z2, z2_bar: z2, r0: 2.0 * z2, n12: [0.0, 0.0, -1.0] })
}

/// η = k_L ξ_z/√2 with ξ_z = √(ħ/(2·2M·ω_Z)) the oscillator length of the
/// two-ion centre-of-mass mode. Inputs are SI (1/m, rad/s, kg).
pub fn lamb_dicke(k_laser: f64, omega_z: f64, mass: f64) -> f64 {
    let cm_mass = 2.0 * mass;
    let xi = (HBAR / (2.0 * cm_mass * omega_z)).sqrt();
    k_laser * xi / std::f64::consts::SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ca40() -> f64 {
        CA40_MASS_AMU * AMU
    }

    #[test]
    fn zero_beta_is_unconfined() {
        let cfg = TrapConfig::new(1e9, 0.0, 2.0 * PI * 30e6, ca40());
        assert!(matches!(secular_frequencies(&cfg), Err(Error::Unconfined(_))));
        assert!(matches!(equilibrium_geometry(&cfg), Err(Error::Unconfined(_))));
    }

    #[test]
    fn weak_rf_is_unconfined() {
        let cfg = TrapConfig::new(1e6, 4e6, 2.0 * PI * 30e6, ca40());
        assert!(matches!(secular_frequencies(&cfg), Err(Error::Unconfined(_))));
    }

    #[test]
    fn beta_inverts_axial_frequency() {
        let target = 2.0 * PI * 1e6;
        let beta = ca40() * target * target / (4.0 * E_CHARGE);
        let cfg = TrapConfig::new(1e9, beta, 2.0 * PI * 30e6, ca40());
        let f = secular_frequencies(&cfg).unwrap();
        assert_relative_eq!(f.omega_z, target, max_relative = 1e-12);
    }

    #[test]
    fn doubling_beta_scales_axial_by_sqrt2() {
        let cfg = TrapConfig::default();
        let twice = TrapConfig { beta: 2.0 * cfg.beta, ..cfg };
        let a = secular_frequencies(&cfg).unwrap().omega_z;
        let b = secular_frequencies(&twice).unwrap().omega_z;
        assert_relative_eq!(b / a, 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn default_trap_is_near_one_and_three_mhz() {
        let f = secular_frequencies(&TrapConfig::default()).unwrap();
        assert!((f.omega_z / (2.0 * PI * 1e6) - 1.0).abs() < 1e-3);
        assert!((f.omega_rho / (2.0 * PI * 3e6) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn separation_for_ca40_at_one_mhz() {
        let cfg = TrapConfig::new(1e9, 0.0, 2.0 * PI * 30e6, ca40()).with_axial_frequency(2.0 * PI * 1e6);
        let g = equilibrium_geometry(&cfg).unwrap();
        // Independent route: M ω² Z = C₀/(2Z)²  ⇒  Z³ = C₀/(4Mω²).
        let w = 2.0 * PI * 1e6;
        let z = (cfg.coulomb_constant() / (4.0 * ca40() * w * w)).cbrt();
        assert_relative_eq!(g.z2_bar, z, max_relative = 1e-12);
        assert!((g.r0_um() - 5.6).abs() < 0.05, "R0 = {} μm", g.r0_um());
        assert_eq!(g.z1_bar, -g.z2_bar);
    }

    #[test]
    fn eightfold_beta_halves_position() {
        let cfg = TrapConfig::default();
        let g1 = equilibrium_geometry(&cfg).unwrap();
        let g8 = equilibrium_geometry(&TrapConfig { beta: 8.0 * cfg.beta, ..cfg }).unwrap();
        assert_relative_eq!(g8.z2_bar, g1.z2_bar / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn force_balance() {
        let cfg = TrapConfig::default();
        let f = secular_frequencies(&cfg).unwrap();
        let g = equilibrium_geometry(&cfg).unwrap();
        let trap_force = cfg.mass * f.omega_z * f.omega_z * g.z2_bar;
        let coulomb = cfg.coulomb_constant() / (2.0 * g.z2_bar).powi(2);
        assert!(((trap_force - coulomb) / coulomb).abs() < 1e-12);
    }

    #[test]
    fn round_trip_from_secular() {
        let (rho, z) = (2.0 * PI * 3.7e6, 2.0 * PI * 0.83e6);
        let cfg = TrapConfig::from_secular(ca40(), 2.0 * PI * 25e6, rho, z);
        let f = secular_frequencies(&cfg).unwrap();
        assert_relative_eq!(f.omega_rho, rho, max_relative = 1e-12);
        assert_relative_eq!(f.omega_z, z, max_relative = 1e-12);
    }

    #[test]
    fn mass_and_beta_scale_together() {
        let cfg = TrapConfig::default();
        let s = 3.7;
        let scaled = TrapConfig { mass: s * cfg.mass, beta: s * cfg.beta, ..cfg };
        let a = secular_frequencies(&cfg).unwrap().omega_z;
        let b = secular_frequencies(&scaled).unwrap().omega_z;
        assert_relative_eq!(a, b, max_relative = 1e-12);
    }

    #[test]
    fn lamb_dicke_scaling() {
        let m = ca40();
        let w = 2.0 * PI * 1e6;
        assert_eq!(lamb_dicke(0.0, w, m), 0.0);
        let k = 2.0 * PI / 122e-9;
        let eta = lamb_dicke(k, w, m);
        assert_relative_eq!(lamb_dicke(k, 4.0 * w, m), eta / 2.0, max_relative = 1e-14);
        assert!(eta > 0.1 && eta < 1.0);
    }
}
