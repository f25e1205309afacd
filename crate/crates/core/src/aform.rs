//! Compact storage for matrices that commute with the total `S_z`.
//!
//! Such a matrix is nonzero only on its main diagonal and on the two interior
//! sub-diagonals linking index `k` with `2S + k` for `k = 1..=2S`. Both the
//! density matrix and the Hamiltonian are stored through the same layout:
//! two corner entries, `4S` interior diagonal entries and `2S` couplings.
//!
//! Vectors are zero-based: `a[k - 1]` holds `a_k` and `u[k - 1]` holds `u_k`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{c64, is_finite, max_abs, ComplexMatrix, C64};
use crate::spin::SpinLength;

/// Absolute tolerance for structural zeros, scaled by `max(1, ‖m‖_max)`.
pub const STRUCTURAL_TOLERANCE: f64 = 1e-12;
/// Tolerance on trace normalization and block positivity of states.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Whether `(i, j)` may hold a nonzero entry of an A-matrix.
pub fn in_pattern(s: SpinLength, i: usize, j: usize) -> bool {
    let two_s = s.two_s();
    let interior = 1..=two_s;
    i == j || (interior.contains(&i) && j == i + two_s) || (interior.contains(&j) && i == j + two_s)
}

fn check_dim(m: &ComplexMatrix, s: SpinLength) -> Result<()> {
    let n = s.dim();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Checks that every entry outside the A-pattern vanishes. Hermiticity is not
/// required, so products of A-matrices can be checked too.
pub fn check_a_pattern(m: &ComplexMatrix, s: SpinLength) -> Result<()> {
    check_dim(m, s)?;
    let tol = STRUCTURAL_TOLERANCE * max_abs(m).max(1.0);
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if in_pattern(s, i, j) {
                continue;
            }
            let mag = m[(i, j)].norm();
            if mag > tol && worst.is_none_or(|(_, _, w)| mag > w) {
                worst = Some((i, j, mag));
            }
        }
    }
    match worst {
        Some((row, col, magnitude)) => Err(Error::NotAxiallySymmetric { row, col, magnitude }),
        None => Ok(()),
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    let tol = STRUCTURAL_TOLERANCE * max_abs(m).max(1.0);
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if dev > tol && worst.is_none_or(|(_, _, w)| dev > w) {
                worst = Some((i, j, dev));
            }
        }
    }
    match worst {
        Some((row, col, deviation)) => Err(Error::NotHermitian { row, col, deviation }),
        None => Ok(()),
    }
}

/// Shared layout of Hermitian A-matrices.
#[derive(Debug, Clone, PartialEq)]
struct Layout {
    first: f64,
    last: f64,
    diag: Vec<f64>,
    off: Vec<C64>,
}

impl Layout {
    fn from_matrix(m: &ComplexMatrix, s: SpinLength) -> Result<Layout> {
        check_dim(m, s)?;
        if !is_finite(m) {
            return Err(Error::NonFinite("matrix"));
        }
        check_hermitian(m)?;
        check_a_pattern(m, s)?;
        let two_s = s.two_s();
        Ok(Layout {
            first: m[(0, 0)].re,
            last: m[(s.last(), s.last())].re,
            diag: (1..=s.interior()).map(|i| m[(i, i)].re).collect(),
            off: (1..=two_s).map(|k| m[(k, k + two_s)]).collect(),
        })
    }

    fn to_matrix(&self, s: SpinLength) -> ComplexMatrix {
        let n = s.dim();
        let two_s = s.two_s();
        let mut m = ComplexMatrix::zeros(n, n);
        m[(0, 0)] = c64(self.first, 0.0);
        m[(n - 1, n - 1)] = c64(self.last, 0.0);
        for (i, &x) in self.diag.iter().enumerate() {
            m[(i + 1, i + 1)] = c64(x, 0.0);
        }
        for (k, &z) in self.off.iter().enumerate() {
            m[(k + 1, k + 1 + two_s)] = z;
            m[(k + 1 + two_s, k + 1)] = z.conj();
        }
        m
    }
}

fn check_lengths(s: SpinLength, diag: usize, off: usize) -> Result<()> {
    if diag != s.interior() {
        return Err(Error::LengthMismatch {
            what: "interior diagonal entries",
            expected: s.interior(),
            got: diag,
        });
    }
    if off != s.two_s() {
        return Err(Error::LengthMismatch {
            what: "couplings",
            expected: s.two_s(),
            got: off,
        });
    }
    Ok(())
}

/// Hermitian Hamiltonian in compact A form.
#[derive(Debug, Clone, PartialEq)]
pub struct AHamiltonian {
    pub(crate) s: SpinLength,
    pub(crate) e0: f64,
    pub(crate) e_last: f64,
    pub(crate) h: Vec<f64>,
    pub(crate) g: Vec<C64>,
}

impl AHamiltonian {
    pub fn new(s: SpinLength, e0: f64, e_last: f64, h: Vec<f64>, g: Vec<C64>) -> Result<Self> {
        check_lengths(s, h.len(), g.len())?;
        let finite = e0.is_finite()
            && e_last.is_finite()
            && h.iter().all(|x| x.is_finite())
            && g.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::NonFinite("Hamiltonian"));
        }
        Ok(AHamiltonian { s, e0, e_last, h, g })
    }

    pub fn spin(&self) -> SpinLength {
        self.s
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn e_last(&self) -> f64 {
        self.e_last
    }

    /// Interior diagonal `h_1..h_{4S}`.
    pub fn h(&self) -> &[f64] {
        &self.h
    }

    /// Couplings `g_1..g_{2S}`.
    pub fn g(&self) -> &[C64] {
        &self.g
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        Layout {
            first: self.e0,
            last: self.e_last,
            diag: self.h.clone(),
            off: self.g.clone(),
        }
        .to_matrix(self.s)
    }

    /// Scales every entry, e.g. to renormalize an exchange constant.
    pub fn scaled(&self, factor: f64) -> AHamiltonian {
        AHamiltonian {
            s: self.s,
            e0: self.e0 * factor,
            e_last: self.e_last * factor,
            h: self.h.iter().map(|x| x * factor).collect(),
            g: self.g.iter().map(|z| z * factor).collect(),
        }
    }

    /// Random Hermitian A-matrix with entries in `[-1, 1]`.
    pub fn random(s: SpinLength, rng: &mut impl Rng) -> AHamiltonian {
        let mut r = || rng.random_range(-1.0..1.0);
        let e0 = r();
        let e_last = r();
        let h = (0..s.interior()).map(|_| r()).collect();
        let g = (0..s.two_s()).map(|_| c64(r(), r())).collect();
        AHamiltonian { s, e0, e_last, h, g }
    }
}

/// Validates a Hermitian A-matrix and returns its compact form.
pub fn validate_a_form(m: &ComplexMatrix, s: SpinLength) -> Result<AHamiltonian> {
    let l = Layout::from_matrix(m, s)?;
    Ok(AHamiltonian {
        s,
        e0: l.first,
        e_last: l.last,
        h: l.diag,
        g: l.off,
    })
}

/// Validates an A-form density matrix.
pub fn validate_a_state(m: &ComplexMatrix, s: SpinLength) -> Result<AState> {
    let l = Layout::from_matrix(m, s)?;
    AState::new(s, l.first, l.last, l.diag, l.off)
}

/// Axially symmetric density matrix in compact form.
#[derive(Debug, Clone, PartialEq)]
pub struct AState {
    pub(crate) s: SpinLength,
    pub(crate) p0: f64,
    pub(crate) p_last: f64,
    pub(crate) a: Vec<f64>,
    pub(crate) u: Vec<C64>,
}

impl AState {
    /// Builds a state after checking normalization, non-negative populations
    /// and positivity of every 2x2 block.
    pub fn new(s: SpinLength, p0: f64, p_last: f64, a: Vec<f64>, u: Vec<C64>) -> Result<Self> {
        check_lengths(s, a.len(), u.len())?;
        let finite = p0.is_finite()
            && p_last.is_finite()
            && a.iter().all(|x| x.is_finite())
            && u.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::NonFinite("state"));
        }
        let trace = p0 + p_last + a.iter().sum::<f64>();
        if (trace - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::NotAState(format!("trace is {trace}, expected 1")));
        }
        if p0 < 0.0 || p_last < 0.0 {
            return Err(Error::NotAState("negative corner population".into()));
        }
        if let Some(i) = a.iter().position(|&x| x < 0.0) {
            return Err(Error::NotAState(format!("a_{} = {} is negative", i + 1, a[i])));
        }
        let two_s = s.two_s();
        for (k, z) in u.iter().enumerate() {
            let residual = a[k] * a[k + two_s] - z.norm_sqr();
            if residual < -STATE_TOLERANCE {
                return Err(Error::NotAState(format!(
                    "block {} is not positive semidefinite (a_k a_(2S+k) - |u_k|^2 = {residual:e})",
                    k + 1
                )));
            }
        }
        Ok(AState { s, p0, p_last, a, u })
    }

    /// Maximally mixed state `I / n`.
    pub fn maximally_mixed(s: SpinLength) -> AState {
        let w = 1.0 / s.dim() as f64;
        AState {
            s,
            p0: w,
            p_last: w,
            a: vec![w; s.interior()],
            u: vec![C64::new(0.0, 0.0); s.two_s()],
        }
    }

    pub fn spin(&self) -> SpinLength {
        self.s
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p_last(&self) -> f64 {
        self.p_last
    }

    /// Interior populations `a_1..a_{4S}`.
    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Coherences `u_1..u_{2S}`.
    pub fn u(&self) -> &[C64] {
        &self.u
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        Layout {
            first: self.p0,
            last: self.p_last,
            diag: self.a.clone(),
            off: self.u.clone(),
        }
        .to_matrix(self.s)
    }

    /// Same populations with every coherence multiplied by its own phase.
    pub fn with_phases(&self, phases: &[f64]) -> AState {
        let u = self
            .u
            .iter()
            .zip(phases)
            .map(|(z, &phi)| z * C64::from_polar(1.0, phi))
            .collect();
        AState { u, ..self.clone() }
    }

    /// Random full-rank state: each 2x2 block is `G G†` for a random complex
    /// `G`, corners are random, and the whole is normalized.
    pub fn random(s: SpinLength, rng: &mut impl Rng) -> AState {
        let two_s = s.two_s();
        let mut p0: f64 = rng.random_range(0.01..1.0);
        let mut p_last: f64 = rng.random_range(0.01..1.0);
        let mut a = vec![0.0; s.interior()];
        let mut u = vec![C64::new(0.0, 0.0); two_s];
        for k in 0..two_s {
            let mut z = || c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let (g11, g12, g21, g22) = (z(), z(), z(), z());
            a[k] = g11.norm_sqr() + g12.norm_sqr();
            a[k + two_s] = g21.norm_sqr() + g22.norm_sqr();
            u[k] = g11 * g21.conj() + g12 * g22.conj();
        }
        let total = p0 + p_last + a.iter().sum::<f64>();
        p0 /= total;
        p_last /= total;
        a.iter_mut().for_each(|x| *x /= total);
        u.iter_mut().for_each(|z| *z /= total);
        AState { s, p0, p_last, a, u }
    }

    /// Random pure state; pure A-states live inside a single `S_z` sector.
    pub fn random_pure(s: SpinLength, rng: &mut impl Rng) -> AState {
        let two_s = s.two_s();
        let mut state = AState {
            s,
            p0: 0.0,
            p_last: 0.0,
            a: vec![0.0; s.interior()],
            u: vec![C64::new(0.0, 0.0); two_s],
        };
        let sector = rng.random_range(0..two_s + 2);
        if sector == 0 {
            state.p0 = 1.0;
        } else if sector == two_s + 1 {
            state.p_last = 1.0;
        } else {
            let k = sector - 1;
            let alpha = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let beta = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let norm = alpha.norm_sqr() + beta.norm_sqr();
            state.a[k] = alpha.norm_sqr() / norm;
            state.a[k + two_s] = beta.norm_sqr() / norm;
            state.u[k] = alpha * beta.conj() / norm;
        }
        state
    }

    /// Product state `diag(x, 1 - x) ⊗ diag(w)` with `w` normalized.
    pub fn product_diagonal(s: SpinLength, x: f64, qudit: &[f64]) -> Result<AState> {
        if qudit.len() != s.qudit_dim() {
            return Err(Error::LengthMismatch {
                what: "qudit populations",
                expected: s.qudit_dim(),
                got: qudit.len(),
            });
        }
        let total: f64 = qudit.iter().sum();
        let w: Vec<f64> = qudit.iter().map(|v| v / total).collect();
        let diag: Vec<f64> = w.iter().map(|v| x * v).chain(w.iter().map(|v| (1.0 - x) * v)).collect();
        let n = diag.len();
        AState::new(
            s,
            diag[0],
            diag[n - 1],
            diag[1..n - 1].to_vec(),
            vec![C64::new(0.0, 0.0); s.two_s()],
        )
    }
}
