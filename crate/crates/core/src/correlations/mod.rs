//! Local quantum uncertainty (LQU) and local quantum Fisher information
//! (LQFI) of A-states.
//!
//! Both measures are minima over local qubit observables. For A-states the
//! minimization collapses to two candidates per measure: the "0-branch",
//! reached by an observable along `z`, and the "1-branch", reached by any
//! observable in the `xy` plane. The closed forms below are written only in
//! terms of the populations `a_k` and the eigenvalues `p_i`.

mod oracle;

pub use oracle::{
    fibonacci_sphere, grid_minimum, lqfi_oracle, lqu_oracle, m_diagonal, oracle_m, oracle_w, qfi, skew_information,
    sqrt_rho, variance, w_diagonal, GridMinimum, LocalObservable, LocalProbe,
};

use serde::Serialize;

use crate::aform::AState;
use crate::spectral::{diagonalize, SpectralForm};

/// Branch differences below this are reported as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Denominator factors below this make the four-factor term of the
/// `F_1` formula unreliable; the measure is then taken from the M-matrix.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Which candidate realizes the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ActiveBranch {
    Zero,
    One,
    Tie,
}

impl ActiveBranch {
    pub fn of(zero: f64, one: f64) -> ActiveBranch {
        if (zero - one).abs() < TIE_TOLERANCE {
            ActiveBranch::Tie
        } else if zero < one {
            ActiveBranch::Zero
        } else {
            ActiveBranch::One
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ActiveBranch::Zero => "0",
            ActiveBranch::One => "1",
            ActiveBranch::Tie => "tie",
        }
    }
}

/// How a measure was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    ClosedForm,
    OracleFallback,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::OracleFallback => "oracle-fallback",
        }
    }

    fn combine(self, other: Method) -> Method {
        if self == Method::ClosedForm && other == Method::ClosedForm {
            Method::ClosedForm
        } else {
            Method::OracleFallback
        }
    }
}

/// One measure with both of its branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Measure {
    pub zero: f64,
    pub one: f64,
    pub value: f64,
    pub active: ActiveBranch,
    pub method: Method,
}

impl Measure {
    fn from_branches(zero: f64, one: f64, method: Method) -> Measure {
        let (zero, one) = (zero.max(0.0), one.max(0.0));
        Measure {
            zero,
            one,
            value: zero.min(one),
            active: ActiveBranch::of(zero, one),
            method,
        }
    }

    /// `branch0 − branch1`, the quantity whose sign changes mark transitions.
    pub fn gap(&self) -> f64 {
        self.zero - self.one
    }
}

/// LQU and LQFI of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub u0: f64,
    pub u1: f64,
    pub u: f64,
    pub f0: f64,
    pub f1: f64,
    pub f: f64,
    pub active_u: ActiveBranch,
    pub active_f: ActiveBranch,
    pub method: Method,
}

impl CorrelationResult {
    pub fn from_measures(lqu: Measure, lqfi: Measure) -> CorrelationResult {
        CorrelationResult {
            u0: lqu.zero,
            u1: lqu.one,
            u: lqu.value,
            f0: lqfi.zero,
            f1: lqfi.one,
            f: lqfi.value,
            active_u: lqu.active,
            active_f: lqfi.active,
            method: lqu.method.combine(lqfi.method),
        }
    }

    pub fn lqu(&self) -> Measure {
        Measure {
            zero: self.u0,
            one: self.u1,
            value: self.u,
            active: self.active_u,
            method: self.method,
        }
    }

    pub fn lqfi(&self) -> Measure {
        Measure {
            zero: self.f0,
            one: self.f1,
            value: self.f,
            active: self.active_f,
            method: self.method,
        }
    }
}

/// A closed form hit a denominator it cannot resolve on its own.
#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("zero denominator in the closed form for block {block}")]
pub struct ZeroDenominator {
    pub block: usize,
}

/// `x / y`, or zero when `y` vanishes. Used only where the numerator is
/// bounded by a multiple of the denominator, so the zero limit is exact.
#[inline]
fn bounded_ratio(x: f64, y: f64) -> f64 {
    if y > 0.0 {
        x / y
    } else {
        0.0
    }
}

/// LQU branches `(U_0, U_1)`.
pub fn lqu_branches(rho: &AState, sf: &SpectralForm) -> (f64, f64) {
    let two_s = rho.spin().two_s();
    let a = |k: usize| rho.a[k - 1];
    let sp: Vec<f64> = sf.p.iter().map(|x| x.sqrt()).collect();

    let mut u0 = 0.0;
    for k in 1..=two_s {
        let (hi, lo) = (sp[k], sp[two_s + k]);
        let diff = a(k) - a(two_s + k);
        u0 += (hi - lo).powi(2) - bounded_ratio(diff * diff, (hi + lo).powi(2));
    }

    // Diagonal entries of √ρ inside block k.
    let root_upper = |k: usize| {
        let (hi, lo) = (sp[k], sp[two_s + k]);
        bounded_ratio(a(k) + hi * lo, hi + lo)
    };
    let root_lower = |k: usize| {
        let (hi, lo) = (sp[k], sp[two_s + k]);
        bounded_ratio(a(two_s + k) + hi * lo, hi + lo)
    };
    let mut bracket = root_lower(1) * sp[0] + root_upper(two_s) * sp[2 * two_s + 1];
    for k in 1..two_s {
        bracket += root_upper(k) * root_lower(k + 1);
    }
    (u0, 1.0 - 2.0 * bracket)
}

/// `F_0`, which needs only the populations and coherences.
pub fn lqfi_zero_branch(rho: &AState) -> f64 {
    let two_s = rho.spin().two_s();
    4.0 * (0..two_s)
        .map(|k| bounded_ratio(rho.u[k].norm_sqr(), rho.a[k] + rho.a[k + two_s]))
        .sum::<f64>()
}

/// LQFI branches `(F_0, F_1)`.
pub fn lqfi_branches(rho: &AState, sf: &SpectralForm) -> Result<(f64, f64), ZeroDenominator> {
    let two_s = rho.spin().two_s();
    let a = |k: usize| rho.a[k - 1];
    let p = |i: usize| sf.p[i];
    let last = 2 * two_s + 1;

    let edge_first = bounded_ratio(
        p(0) * (a(two_s + 1) * p(0) + p(1) * p(two_s + 1)),
        (p(0) + p(1)) * (p(0) + p(two_s + 1)),
    );
    let edge_last = bounded_ratio(
        p(last) * (a(two_s) * p(last) + p(two_s) * p(2 * two_s)),
        (p(two_s) + p(last)) * (p(2 * two_s) + p(last)),
    );

    let mut inner = 0.0;
    for k in 1..two_s {
        let (pk, pk1, pl, pl1) = (p(k), p(k + 1), p(two_s + k), p(two_s + k + 1));
        let ak = a(k);
        let first = bounded_ratio((ak * pk1 + pk * pl) * pk1, (pk + pk1) * (pk1 + pl));
        let third = bounded_ratio((ak * pl1 + pk * pl) * pl1, (pk + pl1) * (pl + pl1));

        let factors = [pk + pk1, pk1 + pl, pl + pl1, pl1 + pk];
        if factors.iter().any(|&f| f < DENOMINATOR_FLOOR) {
            return Err(ZeroDenominator { block: k });
        }
        let numerator = ak * (pl1 * (pl * (pk + pk1) + pk * pk1) + pk * pk1 * pl) + pk * pl * (pk * pl - pk1 * pl1);
        let middle = numerator / factors.iter().product::<f64>() * (a(two_s + k + 1) - a(k + 1));
        inner += first + middle + third;
    }
    let f1 = 1.0 - 4.0 * (edge_first + edge_last + 0.5 * inner);
    Ok((lqfi_zero_branch(rho), f1))
}

/// LQU of a state, from its closed-form branches.
pub fn lqu(rho: &AState) -> Measure {
    lqu_with(rho, &diagonalize(rho))
}

pub fn lqu_with(rho: &AState, sf: &SpectralForm) -> Measure {
    let (u0, u1) = lqu_branches(rho, sf);
    Measure::from_branches(u0, u1, Method::ClosedForm)
}

/// LQFI of a state; falls back to the M-matrix when the `F_1` formula
/// meets a vanishing denominator.
pub fn lqfi(rho: &AState) -> Measure {
    lqfi_with(rho, &diagonalize(rho))
}

pub fn lqfi_with(rho: &AState, sf: &SpectralForm) -> Measure {
    match lqfi_branches(rho, sf) {
        Ok((f0, f1)) => Measure::from_branches(f0, f1, Method::ClosedForm),
        Err(_) => {
            let m = oracle_m(rho);
            Measure::from_branches(1.0 - m[(2, 2)], 1.0 - m[(0, 0)], Method::OracleFallback)
        }
    }
}

/// Both measures of one state.
pub fn correlations(rho: &AState) -> CorrelationResult {
    let sf = diagonalize(rho);
    CorrelationResult::from_measures(lqu_with(rho, &sf), lqfi_with(rho, &sf))
}

#[cfg(test)]
mod tests;
