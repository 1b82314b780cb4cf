//! Adiabatic controlled-phase gate driven by a sin² Rabi pulse with a
//! cos²-shaped detuning.
//!
//! Phases follow φ = ∫E dt (no minus sign); the dynamics module extracts its
//! phases with the same convention so the two can be compared directly.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::numerics::quadrature::integrate;
use crate::numerics::roots::brent;
use crate::{Error, Result};

/// Absolute quadrature tolerance on each accumulated phase (rad).
pub const PHASE_TOL: f64 = 1e-8;
/// Default gap-to-slew ratio demanded by the adiabaticity diagnostic.
pub const DEFAULT_ADIABATIC_MULTIPLE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseShape {
    /// Peak Rabi frequency Ω₀ (rad/μs).
    pub omega0: f64,
    /// Detuning scale Δ₀ (rad/μs).
    pub delta0: f64,
    /// Duration τ (μs).
    pub tau: f64,
}

impl PulseShape {
    pub fn new(omega0: f64, delta0: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("pulse duration must be positive, got {tau}")));
        }
        if !(omega0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("peak Rabi frequency must be ≥ 0, got {omega0}")));
        }
        Ok(Self { omega0, delta0, tau })
    }

    /// (Ω₋(t), E₋(t)) without the domain check.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let (s, c) = (PI * t / self.tau).sin_cos();
        (self.omega0 * s * s, self.delta0 * (0.5 + c * c))
    }
}

/// Ω₋(t) = Ω₀ sin²(πt/τ), E₋(t) = Δ₀[½ + cos²(πt/τ)].
pub fn pulse_at(t: f64, p: &PulseShape) -> Result<(f64, f64)> {
    if !(0.0..=p.tau).contains(&t) {
        return Err(Error::Domain { name: "t", value: t, lo: 0.0, hi: p.tau });
    }
    Ok(p.eval(t))
}

/// Instantaneous light shifts (E_DD, E_DE) of the adiabatic |DD⟩ and |DE⟩
/// states for Rabi frequency magnitude `omega`, detuning `detuning` and
/// blockade `blockade`.
pub fn adiabatic_energies(omega: f64, detuning: f64, blockade: f64) -> Result<(f64, f64)> {
    let denom = 4.0 * detuning + 2.0 * blockade;
    let scale = (4.0 * detuning).abs().max((2.0 * blockade).abs());
    if denom.abs() <= 1e-12 * scale || denom == 0.0 {
        return Err(Error::SingularDenominator(denom));
    }
    let om2 = omega * omega;
    let delta_eff = detuning - om2 / denom;
    let e_dd = 0.5 * (delta_eff - (delta_eff * delta_eff + 2.0 * om2).sqrt());
    let e_de = 0.5 * (detuning - (detuning * detuning + om2).sqrt());
    Ok((e_dd, e_de))
}

/// Maps an angle into (−π, π].
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticityReport {
    /// Smallest instantaneous gap of either adiabatic state (rad/μs).
    pub min_gap: f64,
    /// √(max|dΩ₋/dt| + max|dE₋/dt|) (rad/μs).
    pub slew_scale: f64,
    pub ratio: f64,
    pub multiple: f64,
    pub satisfied: bool,
}

pub fn adiabaticity(p: &PulseShape, blockade: f64, multiple: f64) -> AdiabaticityReport {
    let n = 2001;
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        let t = p.tau * i as f64 / (n - 1) as f64;
        let (om, e) = p.eval(t);
        let denom = 4.0 * e + 2.0 * blockade;
        let delta_eff = e - om * om / denom;
        let gap_dd = (delta_eff * delta_eff + 2.0 * om * om).sqrt();
        let gap_de = (e * e + om * om).sqrt();
        min_gap = min_gap.min(gap_dd).min(gap_de);
    }
    let slew_scale = ((p.omega0.abs() + p.delta0.abs()) * PI / p.tau).sqrt();
    let ratio = min_gap / slew_scale;
    AdiabaticityReport { min_gap, slew_scale, ratio, multiple, satisfied: ratio >= multiple }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateDesign {
    pub pulse: PulseShape,
    /// B = C₃(−)/R₀³ (rad/μs).
    pub blockade: f64,
    pub phi_dd: f64,
    pub phi_de: f64,
    /// φ_DD − 2φ_DE, unwrapped.
    pub phi_ent_raw: f64,
    /// φ_ent in (−π, π].
    pub phi_ent: f64,
    pub unitary: Matrix4<Complex64>,
    pub adiabaticity: AdiabaticityReport,
}

fn accumulated_phases(p: &PulseShape, blockade: f64, t0: f64, t1: f64, tol: f64) -> Result<(f64, f64)> {
    let mut failure = None;
    let phi_dd = integrate(
        |t| match adiabatic_energies(p.eval(t).0, p.eval(t).1, blockade) {
            Ok((e_dd, _)) => e_dd,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        t0,
        t1,
        tol,
        0.0,
        10_000,
    )
    .value;
    if let Some(e) = failure {
        return Err(e);
    }
    let phi_de = integrate(
        |t| {
            let (om, e) = p.eval(t);
            0.5 * (e - (e * e + om * om).sqrt())
        },
        t0,
        t1,
        tol,
        0.0,
        10_000,
    )
    .value;
    Ok((phi_dd, phi_de))
}

/// Entangling phase with the default quadrature tolerance.
pub fn entangling_phase(p: &PulseShape, blockade: f64) -> Result<GateDesign> {
    entangling_phase_with_tol(p, blockade, PHASE_TOL)
}

pub fn entangling_phase_with_tol(p: &PulseShape, blockade: f64, tol: f64) -> Result<GateDesign> {
    let (phi_dd, phi_de) = accumulated_phases(p, blockade, 0.0, p.tau, tol)?;
    let phi_ent_raw = phi_dd - 2.0 * phi_de;
    let phi_ent = wrap_phase(phi_ent_raw);
    Ok(GateDesign {
        pulse: *p,
        blockade,
        phi_dd,
        phi_de,
        phi_ent_raw,
        phi_ent,
        unitary: gate_unitary(phi_ent, phi_de),
        adiabaticity: adiabaticity(p, blockade, DEFAULT_ADIABATIC_MULTIPLE),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSample {
    pub t: f64,
    pub phi_dd: f64,
    pub phi_de: f64,
    pub phi_ent: f64,
}

/// Accumulated phases on a uniform grid of `points` times over [0, τ].
pub fn phase_trace(p: &PulseShape, blockade: f64, points: usize) -> Result<Vec<PhaseSample>> {
    let points = points.max(2);
    let mut out = Vec::with_capacity(points);
    let (mut phi_dd, mut phi_de) = (0.0, 0.0);
    let tol = PHASE_TOL / points as f64;
    out.push(PhaseSample { t: 0.0, phi_dd, phi_de, phi_ent: 0.0 });
    for i in 1..points {
        let t0 = p.tau * (i - 1) as f64 / (points - 1) as f64;
        let t1 = p.tau * i as f64 / (points - 1) as f64;
        let (dd, de) = accumulated_phases(p, blockade, t0, t1, tol)?;
        phi_dd += dd;
        phi_de += de;
        out.push(PhaseSample { t: t1, phi_dd, phi_de, phi_ent: phi_dd - 2.0 * phi_de });
    }
    Ok(out)
}

/// Solves φ_ent(Δ₀) = `target` for Δ₀ in `bracket` (rad/μs) with Ω₀, τ and
/// B fixed. The unwrapped φ_ent is used so that a target of π is not split
/// by the reporting branch cut.
pub fn optimize_pulse(omega0: f64, tau: f64, blockade: f64, target: f64, bracket: (f64, f64)) -> Result<f64> {
    let phase = |delta0: f64| {
        PulseShape::new(omega0, delta0, tau)
            .and_then(|p| entangling_phase(&p, blockade))
            .map(|g| g.phi_ent_raw - target)
    };
    // A constant objective has either no root or every point as a root;
    // both are reported as NoRoot.
    let (fa, fm, fb) = (phase(bracket.0)?, phase(0.5 * (bracket.0 + bracket.1))?, phase(bracket.1)?);
    if fa == fm && fm == fb {
        return Err(Error::NoRoot(format!("φ_ent is flat ({:.3e} rad off target) over the bracket", fa)));
    }
    let mut failure = None;
    let root = brent(
        |delta0| {
            phase(delta0).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::NAN
            })
        },
        bracket.0,
        bracket.1,
        1e-13,
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let root = root?;
    let residual = phase(root)?;
    if !(residual.abs() < 1e-6) {
        return Err(Error::NoRoot(format!("optimizer stopped at Δ₀ = {root} with residual {residual:.3e} rad")));
    }
    Ok(root)
}

/// diag(1, e^{iφ_DE}, e^{iφ_DE}, e^{i(φ_ent + 2φ_DE)}) on {|EE⟩, |DE⟩, |ED⟩, |DD⟩}.
pub fn gate_unitary(phi_ent: f64, phi_de: f64) -> Matrix4<Complex64> {
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    Matrix4::from_diagonal(&nalgebra::Vector4::new(
        Complex64::new(1.0, 0.0),
        e(phi_de),
        e(phi_de),
        e(phi_ent + 2.0 * phi_de),
    ))
}

/// |tr(U′·CZ†)|/4 after removing single-qubit Z phases from a diagonal U.
pub fn cz_fidelity(u: &Matrix4<Complex64>) -> f64 {
    let d = u.diagonal();
    let local_a = d[1] / d[0];
    let local_b = d[2] / d[0];
    let stripped =
        [Complex64::new(1.0, 0.0), d[1] / d[0] / local_a, d[2] / d[0] / local_b, d[3] / d[0] / (local_a * local_b)];
    let cz = [1.0, 1.0, 1.0, -1.0];
    let tr: Complex64 = stripped.iter().zip(cz).map(|(s, c)| s * c).sum();
    tr.norm() / 4.0
}
