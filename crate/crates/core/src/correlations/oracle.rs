//! Independent routes to the same measures: dense W and M matrices, the
//! spectral-parameter sums for their diagonals, and direct evaluation of
//! skew information and QFI for explicit local observables.

use nalgebra::Matrix3;

use crate::aform::AState;
use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eigen, sqrt_psd, symmetric3_max_eigenvalue, trace_re, ComplexMatrix, C64};
use crate::spectral::SpectralForm;
use crate::spin::{local_pauli, pauli, Axis};

/// Eigenvalue pairs with `p_m + p_n` at or below this are left out of the
/// M-matrix and QFI sums.
const PAIR_FLOOR: f64 = 1e-14;

/// Hermitian square root of the density matrix.
pub fn sqrt_rho(rho: &AState) -> ComplexMatrix {
    sqrt_psd(&rho.to_matrix())
}

/// `W_{μν} = Tr{√ρ (σ_μ ⊗ I) √ρ (σ_ν ⊗ I)}` from a dense square root.
pub fn oracle_w(rho: &AState) -> Matrix3<f64> {
    let root = sqrt_rho(rho);
    let s = rho.spin();
    let sandwiched: Vec<ComplexMatrix> = Axis::ALL.iter().map(|&ax| &root * local_pauli(s, ax) * &root).collect();
    let paulis: Vec<ComplexMatrix> = Axis::ALL.iter().map(|&ax| local_pauli(s, ax)).collect();
    let mut w = Matrix3::zeros();
    for mu in 0..3 {
        for nu in 0..3 {
            w[(mu, nu)] = trace_re(&(&sandwiched[mu] * &paulis[nu]));
        }
    }
    w
}

/// `M_{μν} = Σ 2 p_m p_n / (p_m + p_n) ⟨m|σ_μ⊗I|n⟩⟨n|σ_ν⊗I|m⟩` over a dense
/// eigendecomposition.
pub fn oracle_m(rho: &AState) -> Matrix3<f64> {
    let eig = hermitian_eigen(&rho.to_matrix());
    let p: Vec<f64> = eig.values.iter().map(|x| x.max(0.0)).collect();
    let s = rho.spin();
    let rotated: Vec<ComplexMatrix> = Axis::ALL
        .iter()
        .map(|&ax| eig.vectors.adjoint() * local_pauli(s, ax) * &eig.vectors)
        .collect();
    let n = p.len();
    let mut m = Matrix3::zeros();
    for mu in 0..3 {
        for nu in mu..3 {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let sum = p[i] + p[j];
                    if sum <= PAIR_FLOOR {
                        continue;
                    }
                    acc += 2.0 * p[i] * p[j] / sum * (rotated[mu][(i, j)] * rotated[nu][(j, i)]).re;
                }
            }
            m[(mu, nu)] = acc;
            m[(nu, mu)] = acc;
        }
    }
    m
}

/// LQU as `1 − λ_max(W)`.
pub fn lqu_oracle(rho: &AState) -> f64 {
    1.0 - symmetric3_max_eigenvalue(&oracle_w(rho))
}

/// LQFI as `1 − λ_max(M)`.
pub fn lqfi_oracle(rho: &AState) -> f64 {
    1.0 - symmetric3_max_eigenvalue(&oracle_m(rho))
}

/// Sums over transition pairs `(m, n)` that `σ_x ⊗ I` connects in the
/// eigenbasis, each weighted by `|⟨m|σ_x⊗I|n⟩|²` and a kernel of the two
/// eigenvalues. Shared by the W and M diagonals.
fn transverse_sum(sf: &SpectralForm, kernel: impl Fn(f64, f64) -> f64) -> f64 {
    let two_s = sf.s.two_s();
    let p = |i: usize| sf.p[i];
    let tq2 = |k: usize| sf.tq[k - 1].powi(2);
    let tu2 = |k: usize| sf.tu[k - 1].norm_sqr();
    let last = 2 * two_s + 1;

    let mut sum = tq2(1) * kernel(p(0), p(two_s + 1))
        + tq2(two_s) * kernel(p(two_s), p(last))
        + tu2(1) * kernel(p(0), p(1))
        + tu2(two_s) * kernel(p(2 * two_s), p(last));
    for k in 1..two_s {
        sum += tq2(k) * tq2(k + 1) * kernel(p(k), p(two_s + 1 + k))
            + tq2(k) * tu2(k + 1) * kernel(p(k), p(k + 1))
            + tu2(k) * tq2(k + 1) * kernel(p(two_s + k), p(two_s + 1 + k))
            + tu2(k) * tu2(k + 1) * kernel(p(k + 1), p(two_s + k));
    }
    sum
}

fn longitudinal_sum(sf: &SpectralForm, coherence_weight: f64, kernel: impl Fn(f64, f64) -> f64) -> f64 {
    let two_s = sf.s.two_s();
    let mut sum = sf.p[0] + sf.p[2 * two_s + 1];
    for k in 0..two_s {
        let (hi, lo) = (sf.p[k + 1], sf.p[k + 1 + two_s]);
        let (tq2, tu2) = (sf.tq[k].powi(2), sf.tu[k].norm_sqr());
        sum += (hi + lo) * (tq2 - tu2).powi(2) + coherence_weight * tq2 * tu2 * kernel(hi, lo);
    }
    sum
}

fn harmonic_kernel(x: f64, y: f64) -> f64 {
    if x + y > 0.0 {
        x * y / (x + y)
    } else {
        0.0
    }
}

/// `(W_xx, W_zz)` from the eigenvalues and eigenvector parameters.
pub fn w_diagonal(sf: &SpectralForm) -> (f64, f64) {
    let geometric = |x: f64, y: f64| (x * y).sqrt();
    (
        2.0 * transverse_sum(sf, geometric),
        longitudinal_sum(sf, 8.0, geometric),
    )
}

/// `(M_xx, M_zz)` from the eigenvalues and eigenvector parameters.
pub fn m_diagonal(sf: &SpectralForm) -> (f64, f64) {
    (
        4.0 * transverse_sum(sf, harmonic_kernel),
        longitudinal_sum(sf, 16.0, harmonic_kernel),
    )
}

/// Local qubit observable `n·σ ⊗ I` for a unit Bloch vector `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalObservable {
    bloch: [f64; 3],
}

impl LocalObservable {
    pub const Z: LocalObservable = LocalObservable { bloch: [0.0, 0.0, 1.0] };
    pub const X: LocalObservable = LocalObservable { bloch: [1.0, 0.0, 0.0] };

    pub fn new(bloch: [f64; 3]) -> Result<Self> {
        let norm = bloch.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotAState(format!("Bloch vector has norm {norm}, expected 1")));
        }
        Ok(LocalObservable { bloch })
    }

    /// Normalizes any nonzero vector.
    pub fn along(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NonFinite("Bloch vector"));
        }
        Ok(LocalObservable {
            bloch: [v[0] / norm, v[1] / norm, v[2] / norm],
        })
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// `n·σ` on the qubit alone.
    pub fn qubit_matrix(&self) -> ComplexMatrix {
        Axis::ALL
            .iter()
            .zip(self.bloch)
            .fold(ComplexMatrix::zeros(2, 2), |acc, (&ax, n)| {
                acc + pauli(ax) * c64(n, 0.0)
            })
    }

    /// `n·σ ⊗ I` on the joint space.
    pub fn matrix(&self, rho: &AState) -> ComplexMatrix {
        let d = rho.spin().qudit_dim();
        self.qubit_matrix().kronecker(&ComplexMatrix::identity(d, d))
    }
}

/// Wigner–Yanase skew information `−½ Tr [√ρ, H]²`.
pub fn skew_information(rho: &AState, h: &LocalObservable) -> f64 {
    let root = sqrt_rho(rho);
    let hm = h.matrix(rho);
    let c = &root * &hm - &hm * &root;
    -0.5 * trace_re(&(&c * &c))
}

/// Quantum Fisher information `¼ Tr(ρ L²)` for the unitary family generated
/// by `H`, evaluated as `½ Σ (p_m − p_n)² / (p_m + p_n) |H_mn|²`.
pub fn qfi(rho: &AState, h: &LocalObservable) -> f64 {
    let eig = hermitian_eigen(&rho.to_matrix());
    let p: Vec<f64> = eig.values.iter().map(|x| x.max(0.0)).collect();
    let hm = eig.vectors.adjoint() * h.matrix(rho) * &eig.vectors;
    let n = p.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let sum = p[i] + p[j];
            if sum > PAIR_FLOOR {
                acc += (p[i] - p[j]).powi(2) / sum * hm[(i, j)].norm_sqr();
            }
        }
    }
    0.5 * acc
}

/// `⟨H²⟩ − ⟨H⟩²`.
pub fn variance(rho: &AState, h: &LocalObservable) -> f64 {
    let m = rho.to_matrix();
    let hm = h.matrix(rho);
    let mean = trace_re(&(&m * &hm));
    trace_re(&(&m * &hm * &hm)) - mean * mean
}

/// Quasi-uniform points on the unit sphere (golden-angle spiral).
pub fn fibonacci_sphere(count: usize) -> Vec<LocalObservable> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            LocalObservable::along([r * phi.cos(), r * phi.sin(), z]).expect("unit vector")
        })
        .collect()
}

/// Precomputed traces that make skew information and QFI cheap to evaluate
/// for many local observables `h ⊗ I` of the same state.
///
/// With `√ρ` split into qubit blocks `X_ab`, the skew information is
/// `Tr(ρ_A h²) − Σ h_bc h_ea Tr(X_ab X_ce)`. For the QFI, the matrix elements
/// `⟨m|h⊗I|n⟩ = Σ h_ab E^{ab}_{mn}` are expanded in the eigenbasis and the
/// kernel-weighted products of `E^{ab}` are summed once.
#[derive(Debug, Clone)]
pub struct LocalProbe {
    reduced: [[C64; 2]; 2],
    root_traces: [[[[C64; 2]; 2]; 2]; 2],
    fisher: [[C64; 4]; 4],
}

impl LocalProbe {
    pub fn new(rho: &AState) -> LocalProbe {
        let m = rho.to_matrix();
        let d = rho.spin().qudit_dim();
        let block = |mat: &ComplexMatrix, a: usize, b: usize| mat.view((a * d, b * d), (d, d)).into_owned();

        let mut reduced = [[C64::new(0.0, 0.0); 2]; 2];
        for (a, row) in reduced.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = block(&m, a, b).trace();
            }
        }

        let root = sqrt_psd(&m);
        let blocks: Vec<ComplexMatrix> = (0..4).map(|ab| block(&root, ab / 2, ab % 2)).collect();
        let mut root_traces = [[[[C64::new(0.0, 0.0); 2]; 2]; 2]; 2];
        for ab in 0..4 {
            for ce in 0..4 {
                root_traces[ab / 2][ab % 2][ce / 2][ce % 2] = (&blocks[ab] * &blocks[ce]).trace();
            }
        }

        let eig = hermitian_eigen(&m);
        let p: Vec<f64> = eig.values.iter().map(|x| x.max(0.0)).collect();
        let n = p.len();
        let v = &eig.vectors;
        // E^{ab}_{mn} = Σ_i conj(V[(a,i), m]) V[(b,i), n]
        let e: Vec<ComplexMatrix> = (0..4)
            .map(|ab| {
                let (a, b) = (ab / 2, ab % 2);
                let va = v.rows(a * d, d);
                let vb = v.rows(b * d, d);
                va.adjoint() * vb
            })
            .collect();
        let mut fisher = [[C64::new(0.0, 0.0); 4]; 4];
        for i in 0..n {
            for j in 0..n {
                let sum = p[i] + p[j];
                if sum <= PAIR_FLOOR {
                    continue;
                }
                let w = 0.5 * (p[i] - p[j]).powi(2) / sum;
                if w == 0.0 {
                    continue;
                }
                for (x, row) in fisher.iter_mut().enumerate() {
                    for (y, entry) in row.iter_mut().enumerate() {
                        *entry += e[x][(i, j)] * e[y][(i, j)].conj() * w;
                    }
                }
            }
        }
        LocalProbe {
            reduced,
            root_traces,
            fisher,
        }
    }

    fn qubit_entries(h: &LocalObservable) -> [[C64; 2]; 2] {
        let m = h.qubit_matrix();
        [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
    }

    pub fn skew(&self, obs: &LocalObservable) -> f64 {
        let h = Self::qubit_entries(obs);
        let mut h2 = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                h2[i][j] = h[i][0] * h[0][j] + h[i][1] * h[1][j];
            }
        }
        let mut mean_sq = C64::new(0.0, 0.0);
        for (a, row) in self.reduced.iter().enumerate() {
            for (b, rho_ab) in row.iter().enumerate() {
                mean_sq += h2[b][a] * rho_ab;
            }
        }
        let mut overlap = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for e in 0..2 {
                        overlap += h[b][c] * h[e][a] * self.root_traces[a][b][c][e];
                    }
                }
            }
        }
        (mean_sq - overlap).re
    }

    pub fn qfi(&self, obs: &LocalObservable) -> f64 {
        let h = Self::qubit_entries(obs);
        let flat = [h[0][0], h[0][1], h[1][0], h[1][1]];
        let mut acc = C64::new(0.0, 0.0);
        for x in 0..4 {
            for y in 0..4 {
                acc += flat[x] * flat[y].conj() * self.fisher[x][y];
            }
        }
        acc.re
    }
}

/// Smallest skew information and QFI over a set of observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinimum {
    pub skew: f64,
    pub qfi: f64,
}

/// Brute-force minimization over a Fibonacci grid of `points` directions.
pub fn grid_minimum(rho: &AState, points: usize) -> GridMinimum {
    let probe = LocalProbe::new(rho);
    fibonacci_sphere(points).iter().fold(
        GridMinimum {
            skew: f64::INFINITY,
            qfi: f64::INFINITY,
        },
        |acc, obs| GridMinimum {
            skew: acc.skew.min(probe.skew(obs)),
            qfi: acc.qfi.min(probe.qfi(obs)),
        },
    )
}
