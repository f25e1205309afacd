//! Closed-form diagonalization of A-states.
//!
//! Every 2x2 block `[[a_k, u_k], [u_k*, a_{2S+k}]]` is diagonalized on its
//! own. The eigenvectors are
//!
//! ```text
//! |k⟩      = q̃_k e_k + ũ_k* e_{2S+k}
//! |2S+k⟩   = ũ_k e_k − q̃_k  e_{2S+k}
//! ```
//!
//! and collecting them column-wise gives a transform `R` that is Hermitian
//! and unitary, with `R ρ R = diag(p)`.

use crate::aform::AState;
use crate::linalg::{c64, ComplexMatrix, C64};
use crate::spin::{local_pauli, Axis, SpinLength};

/// Couplings at or below this magnitude are treated as exactly zero when
/// picking eigenvectors.
pub const DEGENERATE_COUPLING: f64 = 1e-14;

/// Eigenvalues and eigenvector parameters of an A-state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralForm {
    pub(crate) s: SpinLength,
    pub(crate) p: Vec<f64>,
    pub(crate) tq: Vec<f64>,
    pub(crate) tu: Vec<C64>,
}

impl SpectralForm {
    pub fn spin(&self) -> SpinLength {
        self.s
    }

    /// Eigenvalues `p_0..p_{4S+1}`, with `p_k ≥ p_{2S+k}` inside each block.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    /// `q̃_1..q̃_{2S}` (zero-based storage).
    pub fn tq(&self) -> &[f64] {
        &self.tq
    }

    /// `ũ_1..ũ_{2S}` (zero-based storage).
    pub fn tu(&self) -> &[C64] {
        &self.tu
    }

    /// Eigenvalues sorted ascending.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.p.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Diagonalizes an A-state block by block.
pub fn diagonalize(rho: &AState) -> SpectralForm {
    let s = rho.spin();
    let two_s = s.two_s();
    let mut p = vec![0.0; s.dim()];
    let mut tq = vec![0.0; two_s];
    let mut tu = vec![C64::new(0.0, 0.0); two_s];
    p[0] = rho.p0();
    p[s.last()] = rho.p_last();

    for k in 0..two_s {
        let (upper, lower) = (rho.a[k], rho.a[k + two_s]);
        let u = rho.u[k];
        let diff = upper - lower;
        let u_abs = u.norm();
        let disc = diff.hypot(2.0 * u_abs);
        let big = 0.5 * (upper + lower + disc);
        // det / big avoids the cancellation in (a + a' - disc) / 2 for
        // nearly pure blocks.
        // Determinants inside the rounding noise of the products are zero;
        // this keeps projector blocks exactly rank one.
        let det = upper * lower - u.norm_sqr();
        let noise = 4.0 * f64::EPSILON * (upper * lower + u.norm_sqr());
        let small = if big > 0.0 && det > noise { det / big } else { 0.0 };
        p[k + 1] = big;
        p[k + 1 + two_s] = small;

        if u_abs <= DEGENERATE_COUPLING {
            if diff >= 0.0 {
                tq[k] = 1.0;
            } else {
                tu[k] = c64(1.0, 0.0);
            }
            continue;
        }
        // q = big - lower, written without cancellation for diff < 0
        let q = if diff >= 0.0 {
            0.5 * (diff + disc)
        } else {
            2.0 * u.norm_sqr() / (disc - diff)
        };
        let norm = q.hypot(u_abs);
        tq[k] = q / norm;
        tu[k] = u / norm;
    }
    SpectralForm { s, p, tq, tu }
}

/// The diagonalizing transform `R`.
pub fn build_r(sf: &SpectralForm) -> ComplexMatrix {
    let s = sf.s;
    let two_s = s.two_s();
    let n = s.dim();
    let mut r = ComplexMatrix::zeros(n, n);
    r[(0, 0)] = c64(1.0, 0.0);
    r[(n - 1, n - 1)] = c64(1.0, 0.0);
    for k in 0..two_s {
        let (i, j) = (k + 1, k + 1 + two_s);
        r[(i, i)] = c64(sf.tq[k], 0.0);
        r[(j, j)] = c64(-sf.tq[k], 0.0);
        r[(i, j)] = sf.tu[k];
        r[(j, i)] = sf.tu[k].conj();
    }
    r
}

/// `R (σ_axis ⊗ I) R` as an explicit matrix product.
pub fn conjugated_pauli(sf: &SpectralForm, axis: Axis) -> ComplexMatrix {
    let r = build_r(sf);
    &r * local_pauli(sf.s, axis) * &r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aform::check_a_pattern;
    use crate::aform::validate_a_form;
    use crate::linalg::{hermitian_eigen, max_abs};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spins() -> impl Iterator<Item = SpinLength> {
        (1..=7).map(|t| SpinLength::from_two_s(t).unwrap())
    }

    fn diag_matrix(p: &[f64]) -> ComplexMatrix {
        let n = p.len();
        ComplexMatrix::from_fn(n, n, |i, j| if i == j { c64(p[i], 0.0) } else { c64(0.0, 0.0) })
    }

    #[test]
    fn already_diagonal_block() {
        let s = SpinLength::HALF;
        let z = C64::new(0.0, 0.0);
        let st = AState::new(s, 0.1, 0.2, vec![0.4, 0.3], vec![z]).unwrap();
        let sf = diagonalize(&st);
        assert_eq!(sf.p(), &[0.1, 0.4, 0.3, 0.2]);
        assert_eq!(sf.tq(), &[1.0]);
        assert_eq!(sf.tu(), &[z]);
        // all-zero couplings give the signature matrix
        let r = build_r(&sf);
        let expect = diag_matrix(&[1.0, 1.0, -1.0, 1.0]);
        assert_eq!(r, expect);
    }

    #[test]
    fn reversed_diagonal_block_picks_swapped_eigenvector() {
        let s = SpinLength::HALF;
        let z = C64::new(0.0, 0.0);
        let st = AState::new(s, 0.1, 0.2, vec![0.3, 0.4], vec![z]).unwrap();
        let sf = diagonalize(&st);
        assert_eq!(sf.p(), &[0.1, 0.4, 0.3, 0.2]);
        assert_eq!(sf.tq(), &[0.0]);
        assert_eq!(sf.tu(), &[c64(1.0, 0.0)]);
        let r = build_r(&sf);
        assert!(max_abs(&(&r * st.to_matrix() * &r - diag_matrix(sf.p()))) < 1e-16);
    }

    #[test]
    fn werner_state_spectrum() {
        let s = SpinLength::HALF;
        for w in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let st = AState::new(
                s,
                (1.0 - w) / 4.0,
                (1.0 - w) / 4.0,
                vec![0.25 + w / 4.0, 0.25 + w / 4.0],
                vec![c64(-w / 2.0, 0.0)],
            )
            .unwrap();
            let ours = diagonalize(&st).sorted_eigenvalues();
            let dense = hermitian_eigen(&st.to_matrix()).values;
            for (x, y) in ours.iter().zip(&dense) {
                assert!((x - y).abs() < 1e-14);
            }
            let mut expect = [(1.0 - w) / 4.0; 4];
            expect[3] = (1.0 + 3.0 * w) / 4.0;
            for (x, y) in ours.iter().zip(&expect) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn random_spectra_match_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for s in spins() {
            for _ in 0..20 {
                let st = AState::random(s, &mut rng);
                let ours = diagonalize(&st).sorted_eigenvalues();
                let dense = hermitian_eigen(&st.to_matrix()).values;
                for (x, y) in ours.iter().zip(&dense) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..1000 {
            let s = SpinLength::from_two_s(1 + (i % 7) as u32).unwrap();
            let st = if i % 5 == 0 {
                AState::random_pure(s, &mut rng)
            } else {
                AState::random(s, &mut rng)
            };
            let sf = diagonalize(&st);
            let r = build_r(&sf);
            let n = s.dim();
            assert!(max_abs(&(&r * &r - ComplexMatrix::identity(n, n))) < 1e-13);
            assert!(max_abs(&(&r - r.adjoint())) == 0.0);
            assert!(max_abs(&(&r * st.to_matrix() * &r - diag_matrix(sf.p()))) < 1e-12);
            check_a_pattern(&r, s).unwrap();
        }
    }

    #[test]
    fn eigenvalue_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for s in spins() {
            let two_s = s.two_s();
            for _ in 0..50 {
                let st = AState::random(s, &mut rng);
                let sf = diagonalize(&st);
                let total: f64 = sf.p().iter().sum();
                assert!((total - 1.0).abs() < 1e-13);
                for k in 0..two_s {
                    let (pk, pk2) = (sf.p[k + 1], sf.p[k + 1 + two_s]);
                    let (ak, ak2) = (st.a[k], st.a[k + two_s]);
                    assert!(pk >= pk2);
                    // q_k = p_k - a_{2S+k}, recovered from q̃ and |ũ|
                    let q = sf.tq[k] / sf.tu[k].norm() * st.u[k].norm();
                    assert!((q - (pk - ak2)).abs() < 1e-13);
                    assert!((sf.tq[k].powi(2) + sf.tu[k].norm_sqr() - 1.0).abs() < 1e-12);
                    if pk - pk2 > 1e-12 {
                        let tq2 = 0.5 * (1.0 + (ak - ak2) / (pk - pk2));
                        assert!((sf.tq[k].powi(2) - tq2).abs() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn phase_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for s in spins() {
            let st = AState::random(s, &mut rng);
            let phases: Vec<f64> = (0..s.two_s()).map(|_| rng.random_range(0.0..6.3)).collect();
            let a = diagonalize(&st);
            let b = diagonalize(&st.with_phases(&phases));
            for (x, y) in a.p.iter().zip(&b.p) {
                assert!((x - y).abs() < 1e-15);
            }
            for (k, &phi) in phases.iter().enumerate() {
                assert!((a.tq[k] - b.tq[k]).abs() < 1e-15);
                let rotated = a.tu[k] * C64::from_polar(1.0, phi);
                assert!((rotated - b.tu[k]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn conjugated_sigma_z_is_a_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for s in spins() {
            let st = AState::random(s, &mut rng);
            let sf = diagonalize(&st);
            let z = conjugated_pauli(&sf, Axis::Z);
            validate_a_form(&z, s).unwrap();
            let two_s = s.two_s();
            for k in 0..two_s {
                let (tq, tu) = (sf.tq[k], sf.tu[k]);
                let (i, j) = (k + 1, k + 1 + two_s);
                assert!((z[(i, i)].re - (tq * tq - tu.norm_sqr())).abs() < 1e-14);
                assert!((z[(i, j)] - tu * (2.0 * tq)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn conjugated_sigma_z_without_coherence_is_sigma_z() {
        let st = AState::product_diagonal(SpinLength::ONE, 0.7, &[0.5, 0.3, 0.2]).unwrap();
        let sf = diagonalize(&st);
        let z = conjugated_pauli(&sf, Axis::Z);
        assert!(max_abs(&(z - local_pauli(SpinLength::ONE, Axis::Z))) == 0.0);
    }

    #[test]
    fn conjugated_sigma_x_spin_half_pattern() {
        // n = 4 expansion: row 0 holds ũ_1* at column 1 and -q̃_1 at column 2;
        // row 3 holds q̃_1 at column 1 and ũ_1 at column 2.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let st = AState::random(SpinLength::HALF, &mut rng);
        let sf = diagonalize(&st);
        let x = conjugated_pauli(&sf, Axis::X);
        let (tq, tu) = (sf.tq[0], sf.tu[0]);
        let zero = C64::new(0.0, 0.0);
        let expect = ComplexMatrix::from_row_slice(
            4,
            4,
            &[
                zero,
                tu.conj(),
                c64(-tq, 0.0),
                zero,
                tu,
                zero,
                zero,
                c64(tq, 0.0),
                c64(-tq, 0.0),
                zero,
                zero,
                tu.conj(),
                zero,
                c64(tq, 0.0),
                tu,
                zero,
            ],
        );
        assert!(max_abs(&(x - expect)) < 1e-15);
    }

    #[test]
    fn conjugated_sigma_y_from_sigma_x_structure() {
        // σ_y ⊗ I = i (L - U) where U/L are the upper/lower halves of σ_x ⊗ I;
        // conjugating by R keeps the same relation.
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for s in spins() {
            let st = AState::random(s, &mut rng);
            let sf = diagonalize(&st);
            let r = build_r(&sf);
            let x = local_pauli(s, Axis::X);
            let n = s.dim();
            let d = s.qudit_dim();
            let upper = ComplexMatrix::from_fn(n, n, |i, j| if i < d && j >= d { x[(i, j)] } else { c64(0.0, 0.0) });
            let lower = upper.adjoint();
            let via_x = (&r * (lower - upper) * &r).map(|z| z * c64(0.0, 1.0));
            let direct = conjugated_pauli(&sf, Axis::Y);
            assert!(max_abs(&(via_x - direct)) < 1e-14);
        }
    }
}
