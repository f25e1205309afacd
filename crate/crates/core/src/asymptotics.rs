//! Tabulated limits: high-temperature amplitudes, closed forms for the
//! isotropic Heisenberg dimer, and negativity threshold temperatures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::spin::SpinLength;
use crate::thermal::Temperature;

/// Amplitudes of the `1/T²` tails of the four branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HighTCoefficients {
    pub f0: f64,
    pub f1: f64,
    pub u0: f64,
    pub u1: f64,
}

/// Leading `1/T²` coefficients of the branches, tabulated for
/// `S ∈ {1, 3/2, 2, 5/2}`. `B2` and `K1` do not enter.
pub fn high_t_coefficients(p: &ModelParams, s: SpinLength) -> Result<HighTCoefficients> {
    let transverse = p.j * p.j + p.dz * p.dz;
    let exchange = p.j * p.j + p.jz * p.jz + p.dz * p.dz + 2.0 * p.b1 * p.k2;
    let (b1sq, k2sq) = (p.b1 * p.b1, p.k2 * p.k2);
    let (f0, f1) = match s.two_s() {
        2 => (transverse / 3.0, (3.0 * b1sq + 2.0 * k2sq + 2.0 * exchange) / 12.0),
        3 => (
            5.0 * transverse / 8.0,
            (16.0 * b1sq + 41.0 * k2sq + 20.0 * exchange) / 64.0,
        ),
        4 => (transverse, (5.0 * b1sq + 34.0 * k2sq + 10.0 * exchange) / 20.0),
        5 => (
            35.0 * transverse / 24.0,
            (48.0 * b1sq + 707.0 * k2sq + 140.0 * exchange) / 192.0,
        ),
        other => return Err(Error::NotTabulated(other as u32)),
    };
    Ok(HighTCoefficients {
        f0,
        f1,
        u0: f0 / 2.0,
        u1: f1 / 2.0,
    })
}

/// Prefactor `A` in `F = A sinh²y / (B(1 + cosh 2y) − sinh 2y)`, with
/// `B = 2S + 1` and `y = (2S+1)J/4T`.
fn xxx_prefactor(s: SpinLength) -> Result<f64> {
    match s.two_s() {
        2 => Ok(32.0 / 9.0),
        3 => Ok(5.0),
        4 => Ok(32.0 / 5.0),
        5 => Ok(70.0 / 9.0),
        other => Err(Error::NotTabulated(other as u32)),
    }
}

/// LQFI of the Gibbs state of `J s·S` for `S ∈ {1, 3/2, 2, 5/2}`.
///
/// The tabulated expressions share one shape,
/// `A sinh²y / (B(1 + cosh 2y) − sinh 2y)`. It is evaluated here in terms of
/// `e^{−2|y|}` so that neither large `|y|` nor `T → 0` overflows.
pub fn xxx_closed_form_f(s: SpinLength, j: f64, t: Temperature) -> Result<f64> {
    let prefactor = xxx_prefactor(s)?;
    let b = (s.two_s() + 1) as f64;
    let sign = j.signum();
    let Temperature::Finite(t) = t else {
        return Ok(if j == 0.0 { 0.0 } else { prefactor / (2.0 * (b - sign)) });
    };
    let y = b * j / (4.0 * t);
    let decay = (-2.0 * y.abs()).exp();
    let gap = -(-2.0 * y.abs()).exp_m1();
    Ok(prefactor * gap * gap / (2.0 * (1.0 + decay) * (b * (1.0 + decay) - sign * gap)))
}

/// Temperature above which the negativity of the isotropic dimer vanishes.
/// `renormalized` selects the Hamiltonian with `J → J/S`.
pub fn threshold_temperature(s: SpinLength, renormalized: bool) -> f64 {
    let two_s = s.two_s() as f64;
    let plain = (two_s + 1.0) / (2.0 * (two_s + 2.0).ln());
    if renormalized {
        plain / s.value()
    } else {
        plain
    }
}
