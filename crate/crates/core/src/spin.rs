//! Spin lengths and the angular-momentum matrices of the two subsystems.
//!
//! The two-spin basis is ordered with the spin-1/2 index outermost: indices
//! `0..=2S` carry `s_z = +1/2` with `m = S, S-1, ..., -S`, and indices
//! `2S+1..=4S+1` carry `s_z = -1/2` in the same `m` order.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, C64};

/// Length of the qudit spin, stored as the integer `2S` so half-integer
/// values stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SpinLength(u32);

impl SpinLength {
    pub const HALF: SpinLength = SpinLength(1);
    pub const ONE: SpinLength = SpinLength(2);
    pub const THREE_HALVES: SpinLength = SpinLength(3);
    pub const TWO: SpinLength = SpinLength(4);
    pub const FIVE_HALVES: SpinLength = SpinLength(5);

    pub fn from_two_s(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return Err(Error::InvalidSpin(two_s));
        }
        Ok(SpinLength(two_s))
    }

    #[inline]
    pub fn two_s(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Dimension `2S + 1` of the qudit.
    #[inline]
    pub fn qudit_dim(self) -> usize {
        self.two_s() + 1
    }

    /// Dimension `2(2S + 1)` of the joint space.
    #[inline]
    pub fn dim(self) -> usize {
        2 * self.qudit_dim()
    }

    /// Number of interior diagonal entries, `4S`.
    #[inline]
    pub fn interior(self) -> usize {
        2 * self.two_s()
    }

    /// Index of the last basis vector, `4S + 1`.
    #[inline]
    pub fn last(self) -> usize {
        self.dim() - 1
    }
}

impl fmt::Display for SpinLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Cartesian axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Pauli matrix along `axis`.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let (o, i, z) = (c64(1.0, 0.0), c64(0.0, 1.0), C64::new(0.0, 0.0));
    match axis {
        Axis::X => ComplexMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Axis::Y => ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Axis::Z => ComplexMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Spin-S matrices `(S_x, S_y, S_z)` in the `m = S, ..., -S` basis (units of hbar).
pub fn spin_matrices(s: SpinLength) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let d = s.qudit_dim();
    let spin = s.value();
    let mut sx = ComplexMatrix::zeros(d, d);
    let mut sy = ComplexMatrix::zeros(d, d);
    let mut sz = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        sz[(j, j)] = c64(spin - j as f64, 0.0);
    }
    for j in 1..d {
        // raising element between m = S - j and m + 1
        let m = spin - (j - 1) as f64;
        let b = ((spin + m) * (spin - m + 1.0)).sqrt() / 2.0;
        sx[(j - 1, j)] = c64(b, 0.0);
        sx[(j, j - 1)] = c64(b, 0.0);
        sy[(j - 1, j)] = c64(0.0, -b);
        sy[(j, j - 1)] = c64(0.0, b);
    }
    (sx, sy, sz)
}

/// `z`-component of the total spin, `s_z ⊗ I + I ⊗ S_z`.
pub fn total_sz(s: SpinLength) -> ComplexMatrix {
    let d = s.qudit_dim();
    let spin = s.value();
    let diag: Vec<C64> = (0..2)
        .flat_map(|half| {
            let sz_half = if half == 0 { 0.5 } else { -0.5 };
            (0..d).map(move |j| c64(sz_half + spin - j as f64, 0.0))
        })
        .collect();
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// `σ_axis ⊗ I_{2S+1}`.
pub fn local_pauli(s: SpinLength, axis: Axis) -> ComplexMatrix {
    pauli(axis).kronecker(&ComplexMatrix::identity(s.qudit_dim(), s.qudit_dim()))
}
