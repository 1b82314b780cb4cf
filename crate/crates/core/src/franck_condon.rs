//! Franck–Condon overlaps between the phonon eigenbases of two potential
//! surfaces sharing the same equilibrium positions.
//!
//! Wavefunctions are real with positive-leading Hermite polynomials, so all
//! overlaps are real. Mode coordinates are measured in units where the ion
//! mass and ħ are one; overlaps are invariant under a common rescaling of all
//! frequencies, so the internal rad/μs values are used directly.

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::numerics::quadrature::gauss_hermite;
use crate::phonons::PhononBasis;
use crate::{Error, Result};

/// Eigenvector matrices closer than this are treated as the same modes.
pub const ALIGNMENT_TOL: f64 = 1e-8;
/// Row norms below 1 − this raise a [`TruncationWarning`].
pub const TRUNCATION_TOL: f64 = 1e-4;
pub const DEFAULT_N_MAX: usize = 10;

/// Table of ⟨m_ν|n_ω⟩ for 0 ≤ m ≤ m_max, 0 ≤ n ≤ n_max.
///
/// With a_ω = μ a_ν + λ a_ν†, μ = (ω+ν)/2√(ων), λ = (ω−ν)/2√(ων):
/// ⟨0|n+1⟩ = (λ/μ)√(n/(n+1)) ⟨0|n−1⟩ and
/// ⟨m+1|n⟩ = [√n ⟨m|n−1⟩ − λ√m ⟨m−1|n⟩] / (μ√(m+1)).
pub fn overlap_table(nu: f64, omega: f64, m_max: usize, n_max: usize) -> DMatrix<f64> {
    let root = (nu * omega).sqrt();
    let mu = (omega + nu) / (2.0 * root);
    let lam = (omega - nu) / (2.0 * root);
    let mut k = DMatrix::<f64>::zeros(m_max + 1, n_max + 1);
    k[(0, 0)] = 1.0 / mu.sqrt();
    for n in 1..=n_max {
        if n >= 2 {
            k[(0, n)] = (lam / mu) * (((n - 1) as f64) / n as f64).sqrt() * k[(0, n - 2)];
        }
    }
    for m in 0..m_max {
        for n in 0..=n_max {
            let mut num = 0.0;
            if n >= 1 {
                num += (n as f64).sqrt() * k[(m, n - 1)];
            }
            if m >= 1 {
                num -= lam * (m as f64).sqrt() * k[(m - 1, n)];
            }
            k[(m + 1, n)] = num / (mu * ((m + 1) as f64).sqrt());
        }
    }
    k
}

/// ⟨m_ν|n_ω⟩ for two concentric harmonic oscillators.
pub fn fc_overlap_1d(nu: f64, omega: f64, m: usize, n: usize) -> f64 {
    if (m + n) % 2 == 1 {
        return 0.0;
    }
    overlap_table(nu, omega, m, n)[(m, n)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcMethod {
    /// Same mode vectors: tensor product of 1D overlaps.
    Aligned,
    /// Duschinsky-rotated modes: 2D Gauss–Hermite quadrature of the given order.
    Quadrature { order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    pub min_row_norm: f64,
    pub row: usize,
}

impl std::fmt::Display for TruncationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FC row {} has norm {:.6} (truncation too small)", self.row, self.min_row_norm)
    }
}

/// K[[k]][[j]] = ⟨[k]_excited | [j]_ground⟩ with per-mode Fock index
/// 0..=n_max; the flat index of (k₀, k₁) is k₀·(n_max+1) + k₁.
#[derive(Debug, Clone, PartialEq)]
pub struct FcMatrix {
    pub n_max: usize,
    pub entries: DMatrix<f64>,
    pub method: FcMethod,
    pub warning: Option<TruncationWarning>,
}

impl FcMatrix {
    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 1)
    }

    pub fn flat_index(&self, k0: usize, k1: usize) -> usize {
        k0 * (self.n_max + 1) + k1
    }

    pub fn multi_index(&self, flat: usize) -> (usize, usize) {
        (flat / (self.n_max + 1), flat % (self.n_max + 1))
    }

    pub fn row_norms(&self) -> Vec<f64> {
        self.entries.row_iter().map(|r| r.norm()).collect()
    }
}

fn truncation_check(k: &DMatrix<f64>) -> Option<TruncationWarning> {
    let (row, min) = k.row_iter().map(|r| r.norm()).enumerate().min_by(|a, b| a.1.total_cmp(&b.1))?;
    (min < 1.0 - TRUNCATION_TOL).then_some(TruncationWarning { min_row_norm: min, row })
}

fn check_bases(ground: &PhononBasis, excited: &PhononBasis) -> Result<()> {
    if ground.axis != excited.axis {
        return Err(Error::InvalidArgument(format!(
            "FC bases along different axes ({:?} vs {:?})",
            ground.axis, excited.axis
        )));
    }
    Ok(())
}

pub fn fc_matrix(ground: &PhononBasis, excited: &PhononBasis, n_max: usize) -> Result<FcMatrix> {
    check_bases(ground, excited)?;
    if excited.eigenvector_distance(ground) < ALIGNMENT_TOL {
        let t0 = overlap_table(excited.frequencies[0], ground.frequencies[0], n_max, n_max);
        let t1 = overlap_table(excited.frequencies[1], ground.frequencies[1], n_max, n_max);
        let entries = t0.kronecker(&t1);
        let warning = truncation_check(&entries);
        return Ok(FcMatrix { n_max, entries, method: FcMethod::Aligned, warning });
    }
    Ok(fc_matrix_quadrature(ground, excited, n_max, 2 * n_max + 2))
}

/// Normalised Hermite polynomials H_n(z)/√(2ⁿ n!) for n = 0..=n_max.
fn hermite_normalized(z: f64, n_max: usize, out: &mut [f64]) {
    out[0] = 1.0;
    if n_max >= 1 {
        out[1] = std::f64::consts::SQRT_2 * z;
    }
    for n in 1..n_max {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * z * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

/// Overlap matrix by 2D Gauss–Hermite quadrature over the ion displacement
/// plane. The joint Gaussian exp(−½xᵀGx), G = A·diag(ω)·Aᵀ + B·diag(ν)·Bᵀ,
/// is absorbed into the weight, leaving a polynomial integrand; `order`
/// nodes per dimension integrate it exactly once `order ≥ 2·n_max + 1`.
pub fn fc_matrix_quadrature(ground: &PhononBasis, excited: &PhononBasis, n_max: usize, order: usize) -> FcMatrix {
    let a = ground.eigenvectors;
    let b = excited.eigenvectors;
    let w = ground.frequencies;
    let nu = excited.frequencies;
    let g = a * Matrix2::new(w[0], 0.0, 0.0, w[1]) * a.transpose()
        + b * Matrix2::new(nu[0], 0.0, 0.0, nu[1]) * b.transpose();
    let eig = SymmetricEigen::new(g);
    let (l0, l1) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    // x = U·diag(√(2/λ))·y turns ½xᵀGx into |y|².
    let transform = eig.eigenvectors * Matrix2::new((2.0 / l0).sqrt(), 0.0, 0.0, (2.0 / l1).sqrt());
    let jacobian = 2.0 / (l0 * l1).sqrt();
    let pi = std::f64::consts::PI;
    let norm = (w[0] * w[1] * nu[0] * nu[1]).powf(0.25) / pi;

    let (nodes, weights) = gauss_hermite(order);
    let dim1 = n_max + 1;
    let mut entries = DMatrix::<f64>::zeros(dim1 * dim1, dim1 * dim1);
    let mut hk = [vec![0.0; dim1], vec![0.0; dim1]];
    let mut hj = [vec![0.0; dim1], vec![0.0; dim1]];
    let mut bra = vec![0.0; dim1 * dim1];
    let mut ket = vec![0.0; dim1 * dim1];
    for (y0, w0) in nodes.iter().zip(&weights) {
        for (y1, w1) in nodes.iter().zip(&weights) {
            let x = transform * nalgebra::Vector2::new(*y0, *y1);
            let q = a.transpose() * x;
            let qe = b.transpose() * x;
            for i in 0..2 {
                hermite_normalized(w[i].sqrt() * q[i], n_max, &mut hj[i]);
                hermite_normalized(nu[i].sqrt() * qe[i], n_max, &mut hk[i]);
            }
            for k0 in 0..dim1 {
                for k1 in 0..dim1 {
                    bra[k0 * dim1 + k1] = hk[0][k0] * hk[1][k1];
                    ket[k0 * dim1 + k1] = hj[0][k0] * hj[1][k1];
                }
            }
            let weight = w0 * w1 * jacobian * norm;
            for (r, br) in bra.iter().enumerate() {
                let s = weight * br;
                for (c, kt) in ket.iter().enumerate() {
                    entries[(r, c)] += s * kt;
                }
            }
        }
    }
    let warning = truncation_check(&entries);
    FcMatrix { n_max, entries, method: FcMethod::Quadrature { order }, warning }
}
