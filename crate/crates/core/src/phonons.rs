//! State-dependent phonon modes of the two-ion crystal.
//!
//! Hessian entries are second derivatives of the potential energy divided by
//! the ion mass, so every entry is in (rad/μs)² and the eigenvalues are squared
//! mode angular frequencies.

use nalgebra::{Matrix2, Vector2};

use crate::constants::rad_per_s_to_rad_per_us;
use crate::trap::{secular_frequencies, CrystalGeometry, TrapConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Coulomb curvature coefficient: transverse +1, axial −2.
    pub fn coulomb_coefficient(self) -> f64 {
        match self {
            Axis::X | Axis::Y => 1.0,
            Axis::Z => -2.0,
        }
    }

    pub fn is_transverse(self) -> bool {
        !matches!(self, Axis::Z)
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HessianSpec {
    pub axis: Axis,
    /// Bare single-ion trap angular frequency along `axis` (rad/μs).
    pub omega_chi: f64,
    /// κ = C₀/(M R₀³) in (rad/μs)²; enters as c_χ·κ.
    pub coulomb_coupling: f64,
    /// Per-ion 2e²α²P_j/M in (rad/μs)². Always zero along Z.
    pub polarizability_shift: [f64; 2],
}

impl HessianSpec {
    /// Ions in low-lying states: no polarizability shift.
    pub fn ground(axis: Axis, omega_chi: f64, coulomb_coupling: f64) -> Self {
        Self { axis, omega_chi, coulomb_coupling, polarizability_shift: [0.0; 2] }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        let c = self.axis.coulomb_coefficient() * self.coulomb_coupling;
        let w2 = self.omega_chi * self.omega_chi;
        let [s1, s2] = self.polarizability_shift;
        Matrix2::new(w2 - s1 - c, c, c, w2 - s2 - c)
    }
}

/// Builds the Hessian along `axis` for ions with polarizabilities
/// `pol_per_ion` (SI, such that the extra potential is −e²α²P(X² + Y²)).
pub fn build_hessian(
    axis: Axis,
    cfg: &TrapConfig,
    geom: &CrystalGeometry,
    pol_per_ion: [f64; 2],
) -> Result<HessianSpec> {
    let freqs = secular_frequencies(cfg)?;
    let omega_chi = match axis {
        Axis::X | Axis::Y => freqs.omega_rho_rad_per_us(),
        Axis::Z => freqs.omega_z_rad_per_us(),
    };
    let to_us2 = |x: f64| rad_per_s_to_rad_per_us(rad_per_s_to_rad_per_us(x));
    let kappa = to_us2(cfg.coulomb_constant() / (cfg.mass * geom.r0.powi(3)));
    let shift = |p: f64| {
        if axis.is_transverse() {
            to_us2(2.0 * (cfg.charge * cfg.alpha).powi(2) * p / cfg.mass)
        } else {
            0.0
        }
    };
    Ok(HessianSpec {
        axis,
        omega_chi,
        coulomb_coupling: kappa,
        polarizability_shift: [shift(pol_per_ion[0]), shift(pol_per_ion[1])],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononBasis {
    pub axis: Axis,
    /// Mode angular frequencies (rad/μs), ascending.
    pub frequencies: [f64; 2],
    /// Column `j` is the participation vector of mode `j`.
    pub eigenvectors: Matrix2<f64>,
}

impl PhononBasis {
    pub fn mode(&self, j: usize) -> Vector2<f64> {
        self.eigenvectors.column(j).into_owned()
    }

    /// Largest element-wise difference between the two eigenvector matrices.
    pub fn eigenvector_distance(&self, other: &PhononBasis) -> f64 {
        (self.eigenvectors - other.eigenvectors).abs().max()
    }
}

fn canonical_sign(mut v: Vector2<f64>) -> Vector2<f64> {
    let lead = if v[0] != 0.0 { v[0] } else { v[1] };
    if lead < 0.0 {
        v = -v;
    }
    v
}

fn eigenvector(h: &Matrix2<f64>, lambda: f64) -> Vector2<f64> {
    let (a, b, d) = (h[(0, 0)], h[(0, 1)], h[(1, 1)]);
    if b == 0.0 {
        return if (lambda - a).abs() <= (lambda - d).abs() { Vector2::new(1.0, 0.0) } else { Vector2::new(0.0, 1.0) };
    }
    let v1 = Vector2::new(b, lambda - a);
    let v2 = Vector2::new(lambda - d, b);
    let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
    canonical_sign(v / v.norm())
}

/// Solves H·A = ω²·A. Fails with [`Error::ModeInstability`] if any eigenvalue
/// is not positive.
pub fn diagonalize(h: &HessianSpec) -> Result<PhononBasis> {
    let m = h.matrix();
    let (a, b, d) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
    let mean = 0.5 * (a + d);
    let half_gap = (0.5 * (a - d)).hypot(b);
    let lo = mean - half_gap;
    let hi = mean + half_gap;
    if !(lo > 0.0) {
        return Err(Error::ModeInstability { eigenvalue: lo });
    }
    let (v_lo, v_hi) = if b == 0.0 && a == d {
        (Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0))
    } else {
        (eigenvector(&m, lo), eigenvector(&m, hi))
    };
    Ok(PhononBasis {
        axis: h.axis,
        frequencies: [lo.sqrt(), hi.sqrt()],
        eigenvectors: Matrix2::from_columns(&[v_lo, v_hi]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trap::equilibrium_geometry;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ground(axis: Axis) -> (HessianSpec, f64, f64) {
        let cfg = TrapConfig::default();
        let geom = equilibrium_geometry(&cfg).unwrap();
        let f = secular_frequencies(&cfg).unwrap();
        let h = build_hessian(axis, &cfg, &geom, [0.0, 0.0]).unwrap();
        (h, f.omega_rho_rad_per_us(), f.omega_z_rad_per_us())
    }

    fn residual(h: &HessianSpec, b: &PhononBasis) -> f64 {
        let m = h.matrix();
        (0..2).map(|j| (m * b.mode(j) - b.frequencies[j].powi(2) * b.mode(j)).norm()).fold(0.0, f64::max) / m.norm()
    }

    #[test]
    fn zero_polarizability_is_ground_hessian() {
        let (h, rho, _) = ground(Axis::X);
        assert_eq!(h.polarizability_shift, [0.0, 0.0]);
        let g = HessianSpec::ground(Axis::X, rho, h.coulomb_coupling);
        assert_eq!(h.matrix(), g.matrix());
    }

    #[test]
    fn axial_hessian_ignores_polarizability() {
        let cfg = TrapConfig::default();
        let geom = equilibrium_geometry(&cfg).unwrap();
        let a = build_hessian(Axis::Z, &cfg, &geom, [0.0, 0.0]).unwrap();
        let b = build_hessian(Axis::Z, &cfg, &geom, [-3e8, 1e8]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn axial_modes_are_cm_and_stretch() {
        let (h, _, wz) = ground(Axis::Z);
        let b = diagonalize(&h).unwrap();
        assert_relative_eq!(b.frequencies[0], wz, max_relative = 1e-12);
        assert_relative_eq!(b.frequencies[1], 3f64.sqrt() * wz, max_relative = 1e-12);
        assert_relative_eq!(b.eigenvectors[(0, 0)], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(b.eigenvectors[(1, 0)], FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(b.eigenvectors[(1, 1)], -FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn radial_modes_are_rocking_and_cm() {
        // Analytic 2×2 eigensolve of [[ω²−κ, κ], [κ, ω²−κ]]: ω² and ω² − 2κ.
        let (h, rho, wz) = ground(Axis::X);
        let kappa = h.coulomb_coupling;
        let b = diagonalize(&h).unwrap();
        assert_relative_eq!(b.frequencies[1], rho, max_relative = 1e-12);
        assert_relative_eq!(b.frequencies[0], (rho * rho - 2.0 * kappa).sqrt(), max_relative = 1e-12);
        // κ = ω_Z²/2 at equilibrium, so the rocking mode is √(ω_ρ² − ω_Z²).
        assert_relative_eq!(b.frequencies[0], (rho * rho - wz * wz).sqrt(), max_relative = 1e-9);
        assert!(b.eigenvectors[(1, 0)] < 0.0 && b.eigenvectors[(1, 1)] > 0.0);
    }

    #[test]
    fn symmetric_shift_keeps_eigenvectors() {
        let (h, _, _) = ground(Axis::Y);
        let g = diagonalize(&h).unwrap();
        for s in [-40.0, 5.0, 60.0] {
            let shifted = HessianSpec { polarizability_shift: [s, s], ..h };
            let b = diagonalize(&shifted).unwrap();
            assert!(b.eigenvector_distance(&g) < 1e-12);
            assert!(residual(&shifted, &b) < 1e-10);
        }
    }

    #[test]
    fn strong_antitrapping_is_unstable() {
        let (h, rho, _) = ground(Axis::X);
        let shifted = HessianSpec { polarizability_shift: [2.0 * rho * rho; 2], ..h };
        assert!(matches!(diagonalize(&shifted), Err(Error::ModeInstability { .. })));
    }

    #[test]
    fn eigen_residual_for_asymmetric_shifts() {
        let (h, rho, _) = ground(Axis::X);
        for (s1, s2) in [(0.3, 0.0), (0.0, -0.2), (0.1, -0.4), (0.25, 0.05)] {
            let shifted = HessianSpec { polarizability_shift: [s1 * rho * rho, s2 * rho * rho], ..h };
            let b = diagonalize(&shifted).unwrap();
            assert!(residual(&shifted, &b) < 1e-10);
            let gram = b.eigenvectors.transpose() * b.eigenvectors;
            assert!((gram - Matrix2::identity()).abs().max() < 1e-12);
            assert!(b.frequencies[0] <= b.frequencies[1]);
        }
    }

    #[test]
    fn frequencies_are_continuous_in_shift() {
        let (h, rho, _) = ground(Axis::X);
        for p in [0.05, 0.2, -0.3] {
            let at = |s: f64| diagonalize(&HessianSpec { polarizability_shift: [s * rho * rho, 0.0], ..h }).unwrap();
            let base = at(p);
            let mut last = f64::INFINITY;
            let mut delta = 1e-2;
            for _ in 0..6 {
                let d = (at(p + delta).frequencies[0] - base.frequencies[0]).abs();
                assert!(d < last);
                last = d;
                delta /= 2.0;
            }
            assert!(last < 1e-3 * rho);
        }
    }
}
