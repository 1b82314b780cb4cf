use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use super::hamiltonian::{DriveProfile, GateHamiltonian, Level};
use super::integrator::propagate;
use super::SimConfig;
use crate::gate::wrap_phase;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Populations {
    pub p_dd: f64,
    /// |D−⟩ and |−D⟩ together.
    pub p_dm: f64,
    pub p_mm: f64,
    /// |⟨ψ₀|ψ(t)⟩|².
    pub p_init: f64,
    pub mean_phonon: f64,
    pub norm: f64,
}

#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub states: Vec<DVector<Complex64>>,
    pub populations: Vec<Populations>,
    pub fock_dim: usize,
}

impl EvolutionTrace {
    pub fn max_norm_drift(&self) -> f64 {
        self.populations.iter().map(|p| (p.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn final_state(&self) -> &DVector<Complex64> {
        self.states.last().expect("trace has at least two points")
    }
}

fn populations(ham: &GateHamiltonian, psi0: &DVector<Complex64>, psi: &DVector<Complex64>) -> Populations {
    let nf = ham.fock_dim;
    let sector = |a: Level, b: Level| -> f64 { (0..nf).map(|n| psi[ham.index(a, b, n)].norm_sqr()).sum() };
    let mean_phonon = (0..psi.len()).map(|i| (i % nf) as f64 * psi[i].norm_sqr()).sum();
    Populations {
        p_dd: sector(Level::D, Level::D),
        p_dm: sector(Level::D, Level::Minus) + sector(Level::Minus, Level::D),
        p_mm: sector(Level::Minus, Level::Minus),
        p_init: psi0.dotc(psi).norm_sqr(),
        mean_phonon,
        norm: psi.norm(),
    }
}

fn output_grid(duration: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| duration * i as f64 / (points - 1) as f64).collect()
}

/// Evolves `psi0` under an arbitrary drive profile with the Hamiltonian
/// parameters of `cfg`.
pub fn evolve_with<P: DriveProfile + ?Sized>(
    cfg: &SimConfig,
    drive: &P,
    psi0: &DVector<Complex64>,
) -> Result<EvolutionTrace> {
    cfg.validate()?;
    if psi0.len() != cfg.dim() {
        return Err(Error::InvalidArgument(format!(
            "initial state has dimension {}, expected {}",
            psi0.len(),
            cfg.dim()
        )));
    }
    if ((psi0.norm() - 1.0).abs()) > 1e-12 {
        return Err(Error::InvalidArgument(format!("initial state norm {} is not 1", psi0.norm())));
    }
    let ham = GateHamiltonian::new(cfg);
    let times = output_grid(drive.duration(), cfg.output_points);
    let states = propagate(&ham, drive, psi0, &times, cfg.tolerances)?;
    let populations = states.iter().map(|s| populations(&ham, psi0, s)).collect();
    Ok(EvolutionTrace { times, states, populations, fock_dim: cfg.fock_dim() })
}

/// Evolves `psi0` under the sin² gate pulse of `cfg`.
pub fn evolve(cfg: &SimConfig, psi0: &DVector<Complex64>) -> Result<EvolutionTrace> {
    evolve_with(cfg, &cfg.pulse, psi0)
}

/// Runs independent trajectories on separate threads; results keep the input order.
pub fn evolve_batch(
    cfgs: &[SimConfig],
    psi0: impl Fn(&SimConfig) -> DVector<Complex64> + Sync,
) -> Vec<Result<EvolutionTrace>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = cfgs.iter().map(|c| s.spawn(|| evolve(c, &psi0(c)))).collect();
        handles.into_iter().map(|h| h.join().expect("trajectory thread panicked")).collect()
    })
}

/// Basis vector |a, b⟩⊗|n⟩ for the space of `cfg`.
pub fn basis_state(cfg: &SimConfig, a: Level, b: Level, n: usize) -> DVector<Complex64> {
    let mut v = DVector::from_element(cfg.dim(), Complex64::new(0.0, 0.0));
    v[(a as usize * 3 + b as usize) * cfg.fock_dim() + n] = Complex64::new(1.0, 0.0);
    v
}

impl SimConfig {
    pub fn basis_state(&self, a: Level, b: Level, n: usize) -> DVector<Complex64> {
        basis_state(self, a, b, n)
    }
}

/// P_loss ≈ (2/τ₀)∫p_{|D−⟩}dt, where p_{|D−⟩} is the single-state population
/// (half of the symmetrised `p_dm` column). Trapezoidal rule on the trace grid.
pub fn loss_probability(trace: &EvolutionTrace, tau0: f64) -> Result<f64> {
    if !(tau0 > 0.0) {
        return Err(Error::InvalidArgument(format!("lifetime τ₀ must be positive, got {tau0}")));
    }
    let integral: f64 = trace
        .times
        .windows(2)
        .zip(trace.populations.windows(2))
        .map(|(t, p)| 0.5 * (t[1] - t[0]) * 0.5 * (p[0].p_dm + p[1].p_dm))
        .sum();
    Ok(2.0 / tau0 * integral)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhononExcitation {
    /// ⟨a†a⟩ at each trace time.
    pub mean_phonon: Vec<f64>,
    /// max_t |p_DD − p_init|.
    pub max_deviation: f64,
}

pub fn phonon_excitation(trace: &EvolutionTrace) -> PhononExcitation {
    PhononExcitation {
        mean_phonon: trace.populations.iter().map(|p| p.mean_phonon).collect(),
        max_deviation: trace.populations.iter().map(|p| (p.p_dd - p.p_init).abs()).fold(0.0, f64::max),
    }
}

/// Gate phases read off the full dynamics, φ = −arg(a_X/a_EE) for the
/// phonon-vacuum amplitudes after the pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicPhases {
    pub phi_de: f64,
    pub phi_ed: f64,
    pub phi_dd: f64,
    /// φ_DD − φ_DE − φ_ED in (−π, π].
    pub phi_ent: f64,
    /// |a_X|/|a_EE| for X = DE, ED, DD: return probability amplitude into
    /// the qubit subspace with the phonon in vacuum.
    pub return_amplitudes: [f64; 3],
}

/// Evolves the equal superposition of the four qubit states with the phonon in
/// vacuum and extracts the accumulated phases.
pub fn dynamic_gate_phases(cfg: &SimConfig) -> Result<DynamicPhases> {
    let mut cfg = *cfg;
    cfg.output_points = 2;
    let qubits = [(Level::E, Level::E), (Level::D, Level::E), (Level::E, Level::D), (Level::D, Level::D)];
    let mut psi0 = DVector::from_element(cfg.dim(), Complex64::new(0.0, 0.0));
    for (a, b) in qubits {
        psi0 += basis_state(&cfg, a, b, 0) * Complex64::new(0.5, 0.0);
    }
    let trace = evolve(&cfg, &psi0)?;
    let psi = trace.final_state();
    let amp = |a: Level, b: Level| psi[(a as usize * 3 + b as usize) * cfg.fock_dim()];
    let reference = amp(Level::E, Level::E);
    let phase = |z: Complex64| -(z / reference).arg();
    let (de, ed, dd) = (amp(Level::D, Level::E), amp(Level::E, Level::D), amp(Level::D, Level::D));
    let (phi_de, phi_ed, phi_dd) = (phase(de), phase(ed), phase(dd));
    Ok(DynamicPhases {
        phi_de,
        phi_ed,
        phi_dd,
        phi_ent: wrap_phase(phi_dd - phi_de - phi_ed),
        return_amplitudes: [de.norm() / reference.norm(), ed.norm() / reference.norm(), dd.norm() / reference.norm()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::mhz_to_rad_per_us as mhz;
    use crate::dynamics::PiecewiseConstantDrive;
    use crate::gate::PulseShape;
    use nalgebra::DMatrix;

    fn reference(eta: f64, omega_z_mhz: f64, blockade_mhz: f64) -> SimConfig {
        let p = PulseShape::new(mhz(0.5), mhz(0.639), 60.0).unwrap();
        let mut c = SimConfig::new(mhz(blockade_mhz), mhz(omega_z_mhz), eta, p);
        c.output_points = 121;
        c
    }

    fn dd(c: &SimConfig) -> DVector<Complex64> {
        c.basis_state(Level::D, Level::D, 0)
    }

    #[test]
    fn norm_is_conserved() {
        let c = reference(0.5, 1.0, 2.5);
        let tr = evolve(&c, &dd(&c)).unwrap();
        assert!(tr.max_norm_drift() < 1e-10);
        assert_eq!(tr.times.len(), 121);
        assert_eq!(tr.times[120], 60.0);
    }

    #[test]
    fn ground_pair_is_stationary() {
        let c = reference(0.5, 1.0, 2.5);
        let psi0 = c.basis_state(Level::E, Level::E, 0);
        let tr = evolve(&c, &psi0).unwrap();
        for p in &tr.populations {
            assert!((p.p_init - 1.0).abs() < 1e-12);
            assert_eq!(p.mean_phonon, 0.0);
        }
    }

    #[test]
    fn blockade_suppresses_double_excitation() {
        let c = reference(0.5, 1.0, 2.5);
        let tr = evolve(&c, &dd(&c)).unwrap();
        let max_mm = tr.populations.iter().map(|p| p.p_mm).fold(0.0, f64::max);
        let max_dm = tr.populations.iter().map(|p| p.p_dm).fold(0.0, f64::max);
        assert!(max_mm < 0.05 * max_dm, "p_mm {max_mm}, p_dm {max_dm}");
        // The pulse is adiabatic: population returns.
        assert!(tr.populations.last().unwrap().p_dd > 0.99);
    }

    #[test]
    fn no_recoil_no_phonons() {
        let c = reference(0.0, 1.0, 2.5);
        let tr = evolve(&c, &dd(&c)).unwrap();
        let ex = phonon_excitation(&tr);
        assert!(ex.max_deviation < 1e-10);
        assert!(ex.mean_phonon.iter().all(|&n| n < 1e-20));
    }

    #[test]
    fn stiffer_trap_excites_less() {
        let soft = reference(0.5, 1.0, 2.5);
        let stiff = reference(0.5, 4.0, 2.5);
        let a = phonon_excitation(&evolve(&soft, &dd(&soft)).unwrap()).max_deviation;
        let b = phonon_excitation(&evolve(&stiff, &dd(&stiff)).unwrap()).max_deviation;
        assert!(b < a, "{b} !< {a}");
    }

    #[test]
    fn weaker_blockade_more_double_excitation() {
        let cfgs: Vec<SimConfig> = [2.5, 1.0, 0.25].iter().map(|&b| reference(0.5, 1.0, b)).collect();
        let traces = evolve_batch(&cfgs, dd);
        let maxima: Vec<f64> =
            traces.into_iter().map(|t| t.unwrap().populations.iter().map(|p| p.p_mm).fold(0.0, f64::max)).collect();
        assert!(maxima[0] < maxima[1] && maxima[1] < maxima[2], "{maxima:?}");
    }

    #[test]
    fn batch_matches_serial() {
        let cfgs = [reference(0.5, 1.0, 2.5), reference(0.3, 2.0, 1.5)];
        let batch = evolve_batch(&cfgs, dd);
        for (c, b) in cfgs.iter().zip(batch) {
            let s = evolve(c, &dd(c)).unwrap();
            assert_eq!(s.final_state(), b.unwrap().final_state());
        }
    }

    #[test]
    fn piecewise_constant_matches_exponential_products() {
        let mut c = reference(0.5, 1.0, 2.5);
        c.n_phonon_max = 1;
        c.output_points = 2;
        let drive = PiecewiseConstantDrive::sample(&c.pulse, 3);
        let psi0 = dd(&c);
        let tr = evolve_with(&c, &drive, &psi0).unwrap();
        let ham = GateHamiltonian::new(&c);
        let mut psi = psi0.clone();
        for (w, &(om, e)) in drive.edges.windows(2).zip(&drive.values) {
            let h: DMatrix<Complex64> = ham.at_drive(om, e) * Complex64::new(0.0, -(w[1] - w[0]));
            psi = h.exp() * psi;
        }
        assert!((tr.final_state() - psi).norm() < 1e-8);
    }

    #[test]
    fn fock_truncation_converged() {
        let c5 = reference(0.5, 1.0, 2.5);
        let mut c8 = c5;
        c8.n_phonon_max = 8;
        let a = evolve(&c5, &dd(&c5)).unwrap();
        let b = evolve(&c8, &dd(&c8)).unwrap();
        for (p, q) in a.populations.iter().zip(&b.populations) {
            assert!((p.p_dd - q.p_dd).abs() < 1e-3);
            assert!((p.p_dm - q.p_dm).abs() < 1e-3);
        }
    }

    #[test]
    fn loss_from_dressed_population() {
        let c = reference(0.5, 1.0, 2.5);
        let tr = evolve(&c, &dd(&c)).unwrap();
        let p = loss_probability(&tr, 132.0).unwrap();
        assert!(p > 0.03 && p < 0.08, "P_loss = {p}");
        assert!(loss_probability(&tr, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_initial_state() {
        let c = reference(0.5, 1.0, 2.5);
        let short = DVector::from_element(3, Complex64::new(1.0, 0.0));
        assert!(evolve(&c, &short).is_err());
        let unnormalized = dd(&c) * Complex64::new(2.0, 0.0);
        assert!(evolve(&c, &unnormalized).is_err());
    }

    #[test]
    fn dynamic_phases_symmetric_ions() {
        let c = reference(0.5, 1.0, 2.5);
        let ph = dynamic_gate_phases(&c).unwrap();
        assert!((ph.phi_de - ph.phi_ed).abs() < 1e-9);
        assert!(ph.return_amplitudes.iter().all(|&a| a > 0.98));
    }
}
