//! Thermal states of A-form Hamiltonians.
//!
//! Each 2x2 block of the Hamiltonian is exponentiated on its own. All
//! Boltzmann factors are taken relative to the lowest level so that nothing
//! overflows at low temperature.

use serde::Serialize;

use crate::aform::{AHamiltonian, AState};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::spin::SpinLength;

/// Below this value of `R / 2T` the block weight difference is taken from
/// its Taylor series.
const SERIES_CUTOFF: f64 = 1e-6;

/// Relative width of the window that decides which levels are degenerate
/// with the ground level.
pub const GROUND_WINDOW: f64 = 1e-12;

/// Temperature in units with `k_B = 1`; `Ground` selects the `T → 0` limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Temperature {
    Ground,
    Finite(f64),
}

impl Temperature {
    /// Accepts `t ≥ 0`; zero maps to `Ground`.
    pub fn new(t: f64) -> Result<Temperature> {
        if !t.is_finite() || t < 0.0 {
            Err(Error::InvalidTemperature(t))
        } else if t == 0.0 {
            Ok(Temperature::Ground)
        } else {
            Ok(Temperature::Finite(t))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Temperature::Ground => 0.0,
            Temperature::Finite(t) => t,
        }
    }
}

/// Levels `E_k` and `E_{2S+k}` of one block together with the splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelPair {
    pub upper: f64,
    pub lower: f64,
    pub splitting: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    pub s: SpinLength,
    pub e0: f64,
    pub e_last: f64,
    pub pairs: Vec<LevelPair>,
}

impl EnergySpectrum {
    /// Levels in basis order: `E_0, E_1..E_{4S}, E_{4S+1}`, where `E_k` is
    /// the `+` root of block `k` and `E_{2S+k}` the `−` root.
    pub fn levels(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.s.dim());
        out.push(self.e0);
        out.extend(self.pairs.iter().map(|p| p.upper));
        out.extend(self.pairs.iter().map(|p| p.lower));
        out.push(self.e_last);
        out
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.levels();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min(&self) -> f64 {
        self.levels().into_iter().fold(f64::INFINITY, f64::min)
    }
}

pub fn energy_levels(h: &AHamiltonian) -> EnergySpectrum {
    let two_s = h.s.two_s();
    let pairs = (0..two_s)
        .map(|k| {
            let (hu, hl) = (h.h[k], h.h[k + two_s]);
            let splitting = ((hu - hl).powi(2) + 4.0 * h.g[k].norm_sqr()).sqrt();
            let centre = 0.5 * (hu + hl);
            LevelPair {
                upper: centre + 0.5 * splitting,
                lower: centre - 0.5 * splitting,
                splitting,
            }
        })
        .collect();
    EnergySpectrum {
        s: h.s,
        e0: h.e0,
        e_last: h.e_last,
        pairs,
    }
}

/// `Σ_n e^{−E_n/T}`; requires `T > 0`.
pub fn partition_function(spectrum: &EnergySpectrum, t: f64) -> f64 {
    let e_min = spectrum.min();
    let shifted: f64 = spectrum.levels().iter().map(|e| (-(e - e_min) / t).exp()).sum();
    shifted * (-e_min / t).exp()
}

/// `ln Z`, finite even where `Z` itself would overflow or underflow.
pub fn log_partition_function(spectrum: &EnergySpectrum, t: f64) -> f64 {
    let e_min = spectrum.min();
    let shifted: f64 = spectrum.levels().iter().map(|e| (-(e - e_min) / t).exp()).sum();
    shifted.ln() - e_min / t
}

/// Boltzmann weights `e^{−E_n/T} / Z` in basis order.
pub fn boltzmann_weights(spectrum: &EnergySpectrum, t: f64) -> Vec<f64> {
    let e_min = spectrum.min();
    let raw: Vec<f64> = spectrum.levels().iter().map(|e| (-(e - e_min) / t).exp()).collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / z).collect()
}

/// `exp(−H/T) / Z` for `T > 0`, or the ground-state mixture for `Ground`.
pub fn gibbs_state(h: &AHamiltonian, t: Temperature) -> AState {
    match t {
        Temperature::Ground => ground_state(h),
        Temperature::Finite(t) => finite_gibbs(h, t),
    }
}

fn finite_gibbs(h: &AHamiltonian, t: f64) -> AState {
    let spectrum = energy_levels(h);
    let e_min = spectrum.min();
    let boltz = |e: f64| (-(e - e_min) / t).exp();
    let two_s = h.s.two_s();

    let p0 = boltz(h.e0);
    let p_last = boltz(h.e_last);
    let mut a = vec![0.0; h.s.interior()];
    let mut u = vec![C64::new(0.0, 0.0); two_s];
    let mut z = p0 + p_last;
    for (k, pair) in spectrum.pairs.iter().enumerate() {
        let w_hi = boltz(pair.upper);
        let w_lo = boltz(pair.lower);
        // (w_lo − w_hi) / R without cancellation.
        let x = pair.splitting / (2.0 * t);
        let diff_over_r = if x < SERIES_CUTOFF {
            let centre = boltz(0.5 * (pair.upper + pair.lower));
            centre / t * (1.0 + x * x / 6.0)
        } else {
            w_lo * -(-pair.splitting / t).exp_m1() / pair.splitting
        };
        let detuning = h.h[k + two_s] - h.h[k];
        a[k] = 0.5 * (w_lo + w_hi + detuning * diff_over_r);
        a[k + two_s] = 0.5 * (w_lo + w_hi - detuning * diff_over_r);
        u[k] = -h.g[k] * diff_over_r;
        z += w_lo + w_hi;
    }
    a.iter_mut().for_each(|x| *x /= z);
    u.iter_mut().for_each(|x| *x /= z);
    AState {
        s: h.s,
        p0: p0 / z,
        p_last: p_last / z,
        a,
        u,
    }
}

/// Uniform mixture of every eigenstate whose energy lies within
/// `GROUND_WINDOW · max(1, |E_min|)` of the lowest level.
pub fn ground_state(h: &AHamiltonian) -> AState {
    let spectrum = energy_levels(h);
    let e_min = spectrum.min();
    let window = GROUND_WINDOW * e_min.abs().max(1.0);
    let is_ground = |e: f64| e - e_min <= window;
    let two_s = h.s.two_s();

    let mut state = AState {
        s: h.s,
        p0: if is_ground(h.e0) { 1.0 } else { 0.0 },
        p_last: if is_ground(h.e_last) { 1.0 } else { 0.0 },
        a: vec![0.0; h.s.interior()],
        u: vec![C64::new(0.0, 0.0); two_s],
    };
    let mut count = state.p0 + state.p_last;
    for (k, pair) in spectrum.pairs.iter().enumerate() {
        let (hi, lo) = (is_ground(pair.upper), is_ground(pair.lower));
        if hi && lo {
            state.a[k] = 1.0;
            state.a[k + two_s] = 1.0;
            count += 2.0;
        } else if hi || lo {
            // Projector onto one eigenvector of the block.
            let sign = if lo { 1.0 } else { -1.0 };
            let detuning = (h.h[k + two_s] - h.h[k]) / pair.splitting;
            state.a[k] = 0.5 * (1.0 + sign * detuning);
            state.a[k + two_s] = 0.5 * (1.0 - sign * detuning);
            state.u[k] = -h.g[k] * (sign / pair.splitting);
            count += 1.0;
        }
    }
    state.p0 /= count;
    state.p_last /= count;
    state.a.iter_mut().for_each(|x| *x /= count);
    state.u.iter_mut().for_each(|x| *x /= count);
    state
}
