use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SimConfig;
use crate::gate::PulseShape;

/// Single-ion electronic level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// Uncoupled qubit state |E⟩.
    E = 0,
    /// Laser-coupled qubit state |D⟩.
    D = 1,
    /// Dressed Rydberg state |−⟩.
    Minus = 2,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::E, Level::D, Level::Minus];
}

/// Time-dependent (Ω₋(t), E₋(t)) seen by both ions.
pub trait DriveProfile {
    fn duration(&self) -> f64;
    /// (Ω₋, E₋) in rad/μs.
    fn at(&self, t: f64) -> (f64, f64);
    /// Interior times where the drive is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl DriveProfile for PulseShape {
    fn duration(&self) -> f64 {
        self.tau
    }

    fn at(&self, t: f64) -> (f64, f64) {
        self.eval(t)
    }
}

/// Drive held constant on each of `values.len()` segments delimited by `edges`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstantDrive {
    pub edges: Vec<f64>,
    pub values: Vec<(f64, f64)>,
}

impl PiecewiseConstantDrive {
    pub fn new(edges: Vec<f64>, values: Vec<(f64, f64)>) -> Self {
        assert_eq!(edges.len(), values.len() + 1, "need one more edge than segment");
        assert!(edges.windows(2).all(|w| w[1] > w[0]), "edges must increase");
        Self { edges, values }
    }

    /// Samples `pulse` at the midpoints of `segments` equal slices.
    pub fn sample(pulse: &PulseShape, segments: usize) -> Self {
        let edges: Vec<f64> = (0..=segments).map(|i| pulse.tau * i as f64 / segments as f64).collect();
        let values = edges.windows(2).map(|w| pulse.eval(0.5 * (w[0] + w[1]))).collect();
        Self::new(edges, values)
    }
}

impl DriveProfile for PiecewiseConstantDrive {
    fn duration(&self) -> f64 {
        self.edges[self.edges.len() - 1] - self.edges[0]
    }

    fn at(&self, t: f64) -> (f64, f64) {
        let i = self.edges[1..self.edges.len() - 1].partition_point(|&e| e <= t);
        self.values[i]
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.edges[1..self.edges.len() - 1].to_vec()
    }
}

/// H(t) = H₀ + E₋(t)·N₋ + Ω₋(t)·V with
/// H₀ = ω_z a†a + B|−−⟩⟨−−|, N₋ = Σ_j |−⟩_j⟨−|,
/// V = ½Σ_j [1 + iη(a† + a)]σ₊⁽ʲ⁾ + h.c.
#[derive(Debug, Clone)]
pub struct GateHamiltonian {
    pub fock_dim: usize,
    pub static_part: DMatrix<Complex64>,
    pub detuning_op: DMatrix<Complex64>,
    pub drive_op: DMatrix<Complex64>,
}

impl GateHamiltonian {
    pub fn new(cfg: &SimConfig) -> Self {
        let nf = cfg.fock_dim();
        let dim = 9 * nf;
        let idx = |a: usize, b: usize, n: usize| (a * 3 + b) * nf + n;
        let zero = Complex64::new(0.0, 0.0);
        let mut static_part = DMatrix::from_element(dim, dim, zero);
        let mut detuning_op = DMatrix::from_element(dim, dim, zero);
        let mut drive_op = DMatrix::from_element(dim, dim, zero);
        let m = Level::Minus as usize;
        let d = Level::D as usize;
        for a in 0..3 {
            for b in 0..3 {
                let excited = (a == m) as usize + (b == m) as usize;
                for n in 0..nf {
                    let i = idx(a, b, n);
                    let mut e = cfg.omega_z * n as f64;
                    if excited == 2 {
                        e += cfg.blockade;
                    }
                    static_part[(i, i)] = Complex64::new(e, 0.0);
                    detuning_op[(i, i)] = Complex64::new(excited as f64, 0.0);
                }
            }
        }
        // ⟨−, n'| ½[1 + iη(a† + a)] |D, n⟩ for each ion, the other ion a spectator.
        let coupling = |n_out: usize, n_in: usize| -> Complex64 {
            let mut c = Complex64::new(0.0, 0.0);
            if n_out == n_in {
                c += 0.5;
            }
            if n_out == n_in + 1 {
                c += Complex64::new(0.0, 0.5 * cfg.eta * (n_out as f64).sqrt());
            }
            if n_in == n_out + 1 {
                c += Complex64::new(0.0, 0.5 * cfg.eta * (n_in as f64).sqrt());
            }
            c
        };
        for spectator in 0..3 {
            for n_in in 0..nf {
                for n_out in 0..nf {
                    let c = coupling(n_out, n_in);
                    if c == zero {
                        continue;
                    }
                    for (to, from) in [
                        (idx(m, spectator, n_out), idx(d, spectator, n_in)),
                        (idx(spectator, m, n_out), idx(spectator, d, n_in)),
                    ] {
                        drive_op[(to, from)] += c;
                        drive_op[(from, to)] += c.conj();
                    }
                }
            }
        }
        Self { fock_dim: nf, static_part, detuning_op, drive_op }
    }

    pub fn dim(&self) -> usize {
        self.static_part.nrows()
    }

    /// Flat index of |a, b⟩⊗|n⟩.
    pub fn index(&self, a: Level, b: Level, n: usize) -> usize {
        (a as usize * 3 + b as usize) * self.fock_dim + n
    }

    pub fn at_drive(&self, omega: f64, detuning: f64) -> DMatrix<Complex64> {
        let mut h = self.static_part.clone();
        h += &self.detuning_op * Complex64::new(detuning, 0.0);
        h += &self.drive_op * Complex64::new(omega, 0.0);
        h
    }

    pub fn at<P: DriveProfile + ?Sized>(&self, drive: &P, t: f64) -> DMatrix<Complex64> {
        let (omega, detuning) = drive.at(t);
        self.at_drive(omega, detuning)
    }
}

/// H(t) for the sin² pulse in `cfg`.
pub fn build_hamiltonian(t: f64, cfg: &SimConfig) -> crate::Result<DMatrix<Complex64>> {
    let (omega, detuning) = crate::gate::pulse_at(t, &cfg.pulse)?;
    Ok(GateHamiltonian::new(cfg).at_drive(omega, detuning))
}
