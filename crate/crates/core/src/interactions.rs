//! Pair interactions between two Rydberg(-dressed) ions.
//!
//! Dispersion coefficients carry internal units: C₆ in rad/μs·μm⁶, C₃ in
//! rad/μs·μm³, separations in μm.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::constants::{coulomb_constant, m_to_um, E_CHARGE};
use crate::dressing::{dress, DressedPair, MwDrive};

/// Below this Ω_MW / (C₀d₁²/e²R₀³) the dressed branches are not well separated.
pub const WEAK_DRIVE_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionModel {
    /// C₆ (rad/μs·μm⁶).
    pub c6: f64,
    /// C₃(−) = C₀d₋² (rad/μs·μm³).
    pub c3_minus: f64,
    /// C₃(+) = C₀d₊² (rad/μs·μm³).
    pub c3_plus: f64,
    /// d₋ = N₋²C₋|d₁|/e (m).
    pub d_minus: f64,
    /// d₊ = N₊²C₊|d₁|/e (m).
    pub d_plus: f64,
}

impl InteractionModel {
    pub fn with_c6(mut self, c6: f64) -> Self {
        self.c6 = c6;
        self
    }
}

/// V_vdW = C₆/R₀⁶.
pub fn vdw_shift(c6: f64, r0: f64) -> f64 {
    c6 / r0.powi(6)
}

/// Effective dressed-state dipoles and C₃ coefficients; `d1` in C·m.
pub fn dd_coefficients(pair: &DressedPair, d1: f64) -> InteractionModel {
    let length = d1.abs() / E_CHARGE;
    let d_minus = pair.n_minus * pair.n_minus * pair.c_minus * length;
    let d_plus = pair.n_plus * pair.n_plus * pair.c_plus * length;
    let c0 = coulomb_constant();
    InteractionModel {
        c6: 0.0,
        c3_minus: c0 * m_to_um(d_minus).powi(2),
        c3_plus: c0 * m_to_um(d_plus).powi(2),
        d_minus,
        d_plus,
    }
}

/// V_dd = C₃/R₀³.
pub fn dd_shift(c3: f64, r0: f64) -> f64 {
    c3 / r0.powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakDriveWarning {
    /// Ω_MW / (C₀d₁²/e²R₀³).
    pub ratio: f64,
}

impl std::fmt::Display for WeakDriveWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "weak microwave drive: Ω_MW/(C₀d₁²/e²R₀³) = {:.3} < {}", self.ratio, WEAK_DRIVE_RATIO)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSpectrum {
    /// Eigenvalues of the two-ion Hamiltonian (rad/μs), ascending.
    pub energies: [f64; 4],
    /// Non-interacting dressed sums {2E₋, E₊+E₋, E₊+E₋, 2E₊}, ascending.
    pub asymptotes: [f64; 4],
    /// Exchange matrix element J (rad/μs) used in the Hamiltonian.
    pub exchange: f64,
    pub warning: Option<WeakDriveWarning>,
}

impl PairSpectrum {
    /// Interaction energy of the branch connected to |−−⟩.
    pub fn minus_minus_shift(&self) -> f64 {
        self.energies[0] - self.asymptotes[0]
    }

    pub fn shifts(&self) -> [f64; 4] {
        std::array::from_fn(|i| self.energies[i] - self.asymptotes[i])
    }
}

/// Two-ion Hamiltonian on {|PP⟩, |PS⟩, |SP⟩, |SS⟩}: the single-ion microwave
/// terms on each ion plus the resonant exchange J(|PS⟩⟨SP| + h.c.),
/// J = C₀d₁²/(2e²R₀³). Counter-rotating (2ω₁) terms are dropped.
pub fn pair_hamiltonian(drive: &MwDrive, d1: f64, r0: f64) -> Matrix4<f64> {
    let single = Matrix2::new(drive.delta_p, 0.5 * drive.omega_mw_rabi, 0.5 * drive.omega_mw_rabi, drive.delta_s);
    let mut h = single.kronecker(&Matrix2::identity()) + Matrix2::identity().kronecker(&single);
    let j = exchange_coupling(d1, r0);
    h[(1, 2)] += j;
    h[(2, 1)] += j;
    h
}

/// J(R₀) = C₀(d₁/e)²/(2R₀³) in rad/μs.
pub fn exchange_coupling(d1: f64, r0: f64) -> f64 {
    let length_um = m_to_um(d1 / E_CHARGE);
    0.5 * coulomb_constant() * length_um * length_um / r0.powi(3)
}

pub fn pair_potential_full(drive: &MwDrive, d1: f64, r0: f64) -> PairSpectrum {
    let h = pair_hamiltonian(drive, d1, r0);
    let mut energies: [f64; 4] = SymmetricEigen::new(h).eigenvalues.as_slice().try_into().expect("4 eigenvalues");
    energies.sort_by(f64::total_cmp);
    let pair = dress(drive, 0.0, 0.0);
    let (em, ep) = (pair.e_minus, pair.e_plus);
    let exchange = exchange_coupling(d1, r0);
    let scale = 2.0 * exchange;
    let warning = if scale > 0.0 && drive.omega_mw_rabi / scale < WEAK_DRIVE_RATIO {
        Some(WeakDriveWarning { ratio: drive.omega_mw_rabi / scale })
    } else {
        None
    };
    PairSpectrum { energies, asymptotes: [2.0 * em, em + ep, em + ep, 2.0 * ep], exchange, warning }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::mhz_to_rad_per_us;

    /// d₁ that reproduces C₃(−) = 2π×0.309 GHz·μm³ at the reference drive.
    const D1: f64 = 1.026_258_498_841_69e-26;

    fn drive() -> MwDrive {
        MwDrive::new(mhz_to_rad_per_us(400.0), mhz_to_rad_per_us(136.074), mhz_to_rad_per_us(293.957), D1).unwrap()
    }

    #[test]
    fn vdw_power_law() {
        let c6 = mhz_to_rad_per_us(300.0);
        let v = vdw_shift(c6, 5.0);
        assert!((v - c6 / 15625.0).abs() < 1e-15 * v);
        assert!((vdw_shift(c6, 10.0) - v / 64.0).abs() < 1e-15 * v);
        assert_eq!(vdw_shift(0.0, 5.0), 0.0);
    }

    #[test]
    fn reference_c3_minus() {
        let m = dd_coefficients(&dress(&drive(), 0.0, 0.0), D1);
        assert!((m.c3_minus / mhz_to_rad_per_us(309.0) - 1.0).abs() < 1e-9);
        let v = dd_shift(m.c3_minus, 5.0);
        assert!((v / mhz_to_rad_per_us(2.472) - 1.0).abs() < 1e-3);
        assert!((dd_shift(m.c3_minus, 10.0) - v / 8.0).abs() < 1e-14 * v);
        assert!(v > 100.0 * vdw_shift(mhz_to_rad_per_us(300.0), 5.0));
    }

    #[test]
    fn resonant_drive_gives_equal_dipoles() {
        let d = MwDrive::new(10.0, 1.0, 1.0, D1).unwrap();
        let m = dd_coefficients(&dress(&d, 0.0, 0.0), D1);
        assert!((m.d_plus.powi(2) - m.d_minus.powi(2)).abs() < 1e-15 * m.d_plus.powi(2));
        assert!((m.c3_plus - m.c3_minus).abs() < 1e-12 * m.c3_plus);
    }

    #[test]
    fn zero_dipole_gives_zero_c3() {
        let m = dd_coefficients(&dress(&drive(), 0.0, 0.0), 0.0);
        assert_eq!((m.c3_minus, m.c3_plus), (0.0, 0.0));
    }

    #[test]
    fn decoupled_limits() {
        let no_dipole = pair_potential_full(&drive(), 0.0, 3.0);
        for (e, a) in no_dipole.energies.iter().zip(no_dipole.asymptotes) {
            assert!((e - a).abs() < 1e-10 * a.abs().max(1.0));
        }
        assert!(no_dipole.warning.is_none());
        let far = pair_potential_full(&drive(), D1, 1e4);
        for s in far.shifts() {
            assert!(s.abs() < 1e-8);
        }
    }

    #[test]
    fn trace_and_exchange_symmetry() {
        let d = drive();
        for r in [2.0, 3.5, 7.0] {
            let s = pair_potential_full(&d, D1, r);
            let sum: f64 = s.energies.iter().sum();
            let trace = 4.0 * (d.delta_s + d.delta_p);
            assert!((sum - trace).abs() < 1e-12 * trace.abs(), "{sum} {trace}");
            // Swapping the ions permutes |PS⟩ ↔ |SP⟩; the spectrum is unchanged.
            let h = pair_hamiltonian(&d, D1, r);
            let mut swap = Matrix4::<f64>::zeros();
            for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
                swap[(i, j)] = 1.0;
            }
            assert!((swap * h * swap - h).abs().max() < 1e-12);
        }
    }

    #[test]
    fn weak_drive_is_flagged_at_short_range() {
        assert!(pair_potential_full(&drive(), D1, 2.0).warning.is_some());
        assert!(pair_potential_full(&drive(), D1, 5.0).warning.is_none());
    }

    #[test]
    fn full_and_approximate_converge_with_distance() {
        let d = drive();
        let c3 = dd_coefficients(&dress(&d, 0.0, 0.0), D1).c3_minus;
        let mut last = f64::INFINITY;
        for i in 0..40 {
            let r = 2.0 + 0.2 * i as f64;
            let full = pair_potential_full(&d, D1, r).minus_minus_shift();
            let dev = (full / dd_shift(c3, r) - 1.0).abs();
            assert!(dev < last, "deviation not decreasing at R0 = {r}");
            last = dev;
        }
        assert!(last < 0.002);
    }
}
