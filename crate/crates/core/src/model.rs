//! The seven-coupling axially symmetric spin-(1/2, S) Hamiltonian.

use serde::{Deserialize, Serialize};

use crate::aform::{validate_a_form, AHamiltonian};
use crate::error::{Error, Result};
use crate::linalg::{c64, scaled, ComplexMatrix};
use crate::spin::{pauli, spin_matrices, Axis, SpinLength};

/// Couplings of
/// `H = B1 s_z + B2 S_z + J(s_x S_x + s_y S_y) + Jz s_z S_z + Dz(s_x S_y - s_y S_x) + K1 S_z² + K2 s_z S_z²`
/// with `s = σ/2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub b1: f64,
    pub b2: f64,
    pub j: f64,
    pub jz: f64,
    pub k1: f64,
    pub k2: f64,
    pub dz: f64,
}

impl ModelParams {
    /// Isotropic Heisenberg coupling `J s·S`.
    pub fn xxx(j: f64) -> ModelParams {
        ModelParams {
            j,
            jz: j,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.b1, self.b2, self.j, self.jz, self.k1, self.k2, self.dz];
        if all.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("model parameters"))
        }
    }

    /// Divides the exchange constants by `S`.
    pub fn renormalized(&self, s: SpinLength) -> ModelParams {
        ModelParams {
            j: self.j / s.value(),
            jz: self.jz / s.value(),
            ..*self
        }
    }
}

/// Builds the full matrix and its compact A form.
pub fn build_model_hamiltonian(params: &ModelParams, s: SpinLength) -> (ComplexMatrix, AHamiltonian) {
    let d = s.qudit_dim();
    let id_q = ComplexMatrix::identity(d, d);
    let id_2 = ComplexMatrix::identity(2, 2);
    let (sx_q, sy_q, sz_q) = spin_matrices(s);
    let sx = scaled(&pauli(Axis::X), 0.5);
    let sy = scaled(&pauli(Axis::Y), 0.5);
    let sz = scaled(&pauli(Axis::Z), 0.5);
    let sz_q2 = &sz_q * &sz_q;

    let terms = [
        (params.b1, sz.kronecker(&id_q)),
        (params.b2, id_2.kronecker(&sz_q)),
        (params.j, sx.kronecker(&sx_q) + sy.kronecker(&sy_q)),
        (params.jz, sz.kronecker(&sz_q)),
        (params.dz, sx.kronecker(&sy_q) - sy.kronecker(&sx_q)),
        (params.k1, id_2.kronecker(&sz_q2)),
        (params.k2, sz.kronecker(&sz_q2)),
    ];
    let n = s.dim();
    let mut full = ComplexMatrix::zeros(n, n);
    for (coef, op) in terms {
        if coef != 0.0 {
            full += op * c64(coef, 0.0);
        }
    }
    let compact = validate_a_form(&full, s).expect("model Hamiltonian is axially symmetric");
    (full, compact)
}
