//! Adaptive fourth-order Magnus propagator.
//!
//! Each step exponentiates the Hermitian Magnus generator exactly through its
//! eigendecomposition, so the propagator is unitary to rounding regardless of
//! the step size. Step size is controlled by step doubling.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::hamiltonian::{DriveProfile, GateHamiltonian};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-11 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rtol", self.rtol), ("atol", self.atol)] {
            if !(v > 0.0 && v <= 1e-3) {
                return Err(Error::Domain { name, value: v, lo: 0.0, hi: 1e-3 });
            }
        }
        Ok(())
    }
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // √3/6
const COMMUTATOR_WEIGHT: f64 = 0.144_337_567_297_406_44; // √3/12
const MAX_STEPS: usize = 5_000_000;

/// An invariant subspace of H(t) for every drive value, with the operators
/// restricted to it.
struct Block {
    indices: Vec<usize>,
    static_part: DMatrix<Complex64>,
    detuning_op: DMatrix<Complex64>,
    drive_op: DMatrix<Complex64>,
}

impl Block {
    fn at_drive(&self, omega: f64, detuning: f64) -> DMatrix<Complex64> {
        let mut h = self.static_part.clone();
        h += &self.detuning_op * Complex64::new(detuning, 0.0);
        h += &self.drive_op * Complex64::new(omega, 0.0);
        h
    }
}

/// Connected components of the coupling graph of all three operators.
fn split_blocks(ham: &GateHamiltonian) -> Vec<Block> {
    let n = ham.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for op in [&ham.static_part, &ham.detuning_op, &ham.drive_op] {
        for j in 0..n {
            for i in 0..n {
                if op[(i, j)] != Complex64::new(0.0, 0.0) {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    let restrict = |m: &DMatrix<Complex64>, idx: &[usize]| m.select_rows(idx).select_columns(idx);
    groups
        .into_iter()
        .map(|indices| Block {
            static_part: restrict(&ham.static_part, &indices),
            detuning_op: restrict(&ham.detuning_op, &indices),
            drive_op: restrict(&ham.drive_op, &indices),
            indices,
        })
        .collect()
}

fn magnus_step<P: DriveProfile + ?Sized>(
    blocks: &[Block],
    drive: &P,
    t: f64,
    h: f64,
    psi: &DVector<Complex64>,
) -> DVector<Complex64> {
    let (om1, e1) = drive.at(t + h * (0.5 - GAUSS_OFFSET));
    let (om2, e2) = drive.at(t + h * (0.5 + GAUSS_OFFSET));
    let mut out = psi.clone();
    for b in blocks {
        let h1 = b.at_drive(om1, e1);
        let h2 = b.at_drive(om2, e2);
        let commutator = &h1 * &h2 - &h2 * &h1;
        // M = h/2(H₁ + H₂) + i(√3/12)h²[H₁, H₂]; U = exp(−iM).
        let mut m = (&h1 + &h2) * Complex64::new(0.5 * h, 0.0);
        m += commutator * Complex64::new(0.0, COMMUTATOR_WEIGHT * h * h);
        let sub = apply_exp(m, &psi.select_rows(&b.indices));
        for (k, &i) in b.indices.iter().enumerate() {
            out[i] = sub[k];
        }
    }
    out
}

/// exp(−iM)ψ for Hermitian M.
fn apply_exp(m: DMatrix<Complex64>, psi: &DVector<Complex64>) -> DVector<Complex64> {
    let sym = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut coeffs = eig.eigenvectors.ad_mul(psi);
    for (c, lambda) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= Complex64::from_polar(1.0, -lambda);
    }
    &eig.eigenvectors * coeffs
}

/// Propagates `psi0` under H(t) from 0 to the drive duration, returning the
/// state at every time in `outputs` (ascending, within [0, duration]).
pub fn propagate<P: DriveProfile + ?Sized>(
    ham: &GateHamiltonian,
    drive: &P,
    psi0: &DVector<Complex64>,
    outputs: &[f64],
    tol: Tolerances,
) -> Result<Vec<DVector<Complex64>>> {
    tol.validate()?;
    let duration = drive.duration();
    let mut stops: Vec<f64> = outputs.iter().copied().chain(drive.breakpoints()).collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let blocks = split_blocks(ham);
    let mut psi = psi0.clone();
    let mut t = 0.0;
    let mut h = (duration / 1000.0).max(f64::MIN_POSITIVE);
    let h_min = 1e-12 * duration.max(1.0);
    let mut steps = 0usize;
    let mut out = Vec::with_capacity(outputs.len());
    let mut next_output = outputs.iter().peekable();

    for &stop in &stops {
        while t < stop {
            let remaining = stop - t;
            let (step, last) = if h >= remaining { (remaining, true) } else { (h, false) };
            let big = magnus_step(&blocks, drive, t, step, &psi);
            let half = magnus_step(&blocks, drive, t, 0.5 * step, &psi);
            let small = magnus_step(&blocks, drive, t + 0.5 * step, 0.5 * step, &half);
            let err = (&big - &small).norm() / 15.0;
            let bound = tol.atol + tol.rtol * small.norm();
            let factor = if err == 0.0 { 4.0 } else { (0.9 * (bound / err).powf(0.2)).clamp(0.2, 4.0) };
            if err <= bound {
                psi = small;
                t = if last { stop } else { t + step };
                if !last || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                h = step * factor;
                if h < h_min {
                    return Err(Error::ToleranceFailure { t, step: h });
                }
            }
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::ToleranceFailure { t, step: h });
            }
        }
        while next_output.peek().is_some_and(|&&o| o <= stop) {
            next_output.next();
            out.push(psi.clone());
        }
    }
    // Outputs at t = 0 when no stop precedes them.
    while next_output.next().is_some() {
        out.push(psi.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::mhz_to_rad_per_us as mhz;
    use crate::dynamics::{PiecewiseConstantDrive, SimConfig};
    use crate::gate::PulseShape;

    fn cfg() -> SimConfig {
        let p = PulseShape::new(mhz(0.5), mhz(0.639), 60.0).unwrap();
        let mut c = SimConfig::new(mhz(2.5), mhz(1.0), 0.5, p);
        c.n_phonon_max = 2;
        c
    }

    #[test]
    fn constant_hamiltonian_is_exact() {
        let c = cfg();
        let ham = GateHamiltonian::new(&c);
        let drive = PiecewiseConstantDrive::new(vec![0.0, 10.0], vec![(mhz(0.4), mhz(0.7))]);
        let mut psi0 = DVector::from_element(ham.dim(), Complex64::new(0.0, 0.0));
        psi0[ham.index(crate::dynamics::Level::D, crate::dynamics::Level::D, 0)] = Complex64::new(1.0, 0.0);
        let out = propagate(&ham, &drive, &psi0, &[0.0, 4.0, 10.0], Tolerances::default()).unwrap();
        for (t, psi) in [0.0, 4.0, 10.0].iter().zip(&out) {
            let exact = (ham.at_drive(mhz(0.4), mhz(0.7)) * Complex64::new(0.0, -t)).exp() * &psi0;
            assert!((psi - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn tighter_tolerance_converges() {
        let c = cfg();
        let ham = GateHamiltonian::new(&c);
        let mut psi0 = DVector::from_element(ham.dim(), Complex64::new(0.0, 0.0));
        psi0[ham.index(crate::dynamics::Level::D, crate::dynamics::Level::D, 0)] = Complex64::new(1.0, 0.0);
        let loose = Tolerances { rtol: 1e-6, atol: 1e-8 };
        let a = propagate(&ham, &c.pulse, &psi0, &[0.0, 60.0], loose).unwrap();
        let b = propagate(&ham, &c.pulse, &psi0, &[0.0, 60.0], Tolerances::default()).unwrap();
        assert!((&a[1] - &b[1]).norm() < 1e-5);
        assert!((b[1].norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn blocks_follow_the_uncoupled_ground_level() {
        let c = cfg();
        let nf = c.fock_dim();
        let mut sizes: Vec<usize> = split_blocks(&GateHamiltonian::new(&c)).iter().map(|b| b.indices.len()).collect();
        sizes.sort();
        // |EE⟩⊗|n⟩ each alone, one block per singly-excited ion, one for both.
        let mut expected = vec![1; nf];
        expected.extend([2 * nf, 2 * nf, 4 * nf]);
        assert_eq!(sizes, expected);
    }

    #[test]
    fn rejects_bad_tolerances() {
        assert!(Tolerances { rtol: 0.0, atol: 1e-9 }.validate().is_err());
        assert!(Tolerances { rtol: 1e-9, atol: 0.1 }.validate().is_err());
        assert!(Tolerances::default().validate().is_ok());
    }
}
