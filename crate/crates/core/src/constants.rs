//! Physical constants (CODATA 2018, SI) and unit conversions to the internal
//! rad/μs, μs, μm system.

use std::f64::consts::{PI, TAU};

/// Elementary charge (C).
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Atomic mass unit (kg).
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Bohr radius (m).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Mass of ⁴⁰Ca (u).
pub const CA40_MASS_AMU: f64 = 39.962_590_863;

/// C₀ = e²/4πε₀ in J·m.
pub fn coulomb_constant_si() -> f64 {
    E_CHARGE * E_CHARGE / (4.0 * PI * EPSILON_0)
}

/// C₀/ħ expressed in rad/μs · μm.
///
/// C₀/ħ has dimensions of velocity; 1 m/s is exactly 1 μm/μs.
pub fn coulomb_constant() -> f64 {
    coulomb_constant_si() / HBAR
}

/// Ordinary frequency in MHz to angular frequency in rad/μs.
pub fn mhz_to_rad_per_us(f_mhz: f64) -> f64 {
    TAU * f_mhz
}

/// Angular frequency in rad/μs to ordinary frequency in MHz.
pub fn rad_per_us_to_mhz(w: f64) -> f64 {
    w / TAU
}

/// Angular frequency in rad/s to rad/μs.
pub fn rad_per_s_to_rad_per_us(w: f64) -> f64 {
    w * 1e-6
}

pub fn rad_per_us_to_rad_per_s(w: f64) -> f64 {
    w * 1e6
}

pub fn m_to_um(x: f64) -> f64 {
    x * 1e6
}

pub fn um_to_m(x: f64) -> f64 {
    x * 1e-6
}
