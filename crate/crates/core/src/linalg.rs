//! Dense complex matrices and the small eigensolvers the oracles rely on.

use nalgebra::{DMatrix, Matrix3};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;

/// Dense square complex matrix. Matrices here never exceed a few dozen rows.
pub type ComplexMatrix = DMatrix<C64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry magnitude.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Multiplies every entry by a real factor.
pub fn scaled(m: &ComplexMatrix, factor: f64) -> ComplexMatrix {
    m.map(|z| z * factor)
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Real part of the trace.
pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Eigendecomposition of a Hermitian matrix: `a = V diag(values) V†`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Rebuilds `V f(Λ) V†` for a real function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled_v = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let fl = f(lambda);
            for i in 0..n {
                scaled_v[(i, j)] *= fl;
            }
        }
        scaled_v * self.vectors.adjoint()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_TOLERANCE: f64 = 1e-14;

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation acts in the `(p, q)` plane with
/// `J_pp = J_qq = c`, `J_pq = s e^{iφ}`, `J_qp = -s e^{-iφ}`, where `φ` is the
/// phase of `a_pq`; it annihilates `a_pq` exactly. Sweeps stop once the
/// off-diagonal Frobenius mass drops below `1e-14` (relative to the matrix
/// scale when that exceeds one).
///
/// Only the lower triangle is trusted to be consistent with the upper one;
/// callers should pass Hermitian input.
pub fn hermitian_eigen(a: &ComplexMatrix) -> HermitianEigen {
    assert!(a.is_square(), "eigensolver needs a square matrix");
    let n = a.nrows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n, n);
    let scale = max_abs(a).max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&m) < JACOBI_TOLERANCE * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r;
                let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let jpq = phase * s;
                let jqp = -phase.conj() * s;

                // m <- m J
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * jqp;
                    m[(k, q)] = mkp * jpq + mkq * c;
                }
                // m <- J† m
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * jqp.conj();
                    m[(q, k)] = mpk * jpq.conj() + mqk * c;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

fn off_diagonal_mass(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Positive semidefinite square root. Eigenvalues at or below the rounding
/// floor `n ε λ_max` are taken as zero, so rank-deficient inputs keep their
/// rank.
pub fn sqrt_psd(a: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eigen(a);
    let top = eig.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = a.nrows() as f64 * f64::EPSILON * top;
    eig.apply(|x| if x > floor { x.sqrt() } else { 0.0 })
}

/// Eigenvalues of a real symmetric 3x3 matrix in ascending order.
pub fn symmetric3_eigenvalues(a: &Matrix3<f64>) -> [f64; 3] {
    let m = ComplexMatrix::from_fn(3, 3, |i, j| c64(a[(i, j)], 0.0));
    let v = hermitian_eigen(&m).values;
    [v[0], v[1], v[2]]
}

pub fn symmetric3_max_eigenvalue(a: &Matrix3<f64>) -> f64 {
    // Diagonal input is the common case for A-states; skip the cubic there so
    // ties stay exact.
    if a[(0, 1)] == 0.0 && a[(0, 2)] == 0.0 && a[(1, 2)] == 0.0 {
        return a[(0, 0)].max(a[(1, 1)]).max(a[(2, 2)]);
    }
    symmetric3_eigenvalues(a)[2]
}
