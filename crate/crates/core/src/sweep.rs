//! Temperature sweeps, branch-crossing detection and CSV output.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::aform::AHamiltonian;
use crate::correlations::{correlations, ActiveBranch, CorrelationResult};
use crate::model::{build_model_hamiltonian, ModelParams};
use crate::spin::SpinLength;
use crate::thermal::{gibbs_state, Temperature};

/// Keys accepted in a sweep configuration, all required.
pub const CONFIG_KEYS: [&str; 13] = [
    "s2",
    "b1",
    "b2",
    "j",
    "jz",
    "k1",
    "k2",
    "dz",
    "t_min",
    "t_max",
    "n_points",
    "grid",
    "renormalize",
];

/// Crossings are refined until the bracket is at most this wide...
pub const CROSSING_WIDTH: f64 = 1e-6;
/// ...and the branch gap at the reported point is at most this.
pub const CROSSING_GAP: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;
/// Grid points whose branch gap is below this are not trusted to carry a
/// sign. Low-temperature LQU values pick up rounding noise of order 1e-8
/// from square roots of near-zero eigenvalues, far above the tie tolerance.
pub const GAP_RESOLUTION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grid {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub s: SpinLength,
    pub params: ModelParams,
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub grid: Grid,
    pub renormalize: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    s2: u32,
    b1: f64,
    b2: f64,
    j: f64,
    jz: f64,
    k1: f64,
    k2: f64,
    dz: f64,
    t_min: f64,
    t_max: f64,
    n_points: usize,
    grid: Grid,
    renormalize: bool,
}

/// Parses and validates a JSON sweep configuration.
pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let Value::Object(map) = &value else {
        return Err(ConfigError::Parse("expected a JSON object".into()));
    };
    if let Some(key) = map.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
        return Err(ConfigError::UnknownKey(key.clone()));
    }
    if let Some(key) = CONFIG_KEYS.iter().find(|k| !map.contains_key(**k)) {
        return Err(ConfigError::Parse(format!("missing key `{key}`")));
    }
    let raw: RawConfig = serde_json::from_value(value).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let s = SpinLength::from_two_s(raw.s2).map_err(|e| ConfigError::Validation(e.to_string()))?;
    let config = SweepConfig {
        s,
        params: ModelParams {
            b1: raw.b1,
            b2: raw.b2,
            j: raw.j,
            jz: raw.jz,
            k1: raw.k1,
            k2: raw.k2,
            dz: raw.dz,
        },
        t_min: raw.t_min,
        t_max: raw.t_max,
        n_points: raw.n_points,
        grid: raw.grid,
        renormalize: raw.renormalize,
    };
    config.validate()?;
    Ok(config)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params
            .validate()
            .map_err(|e| ConfigError::Validation(e.to_string()))?;
        if !(self.t_min.is_finite() && self.t_max.is_finite()) {
            return Err(ConfigError::Validation("temperatures must be finite".into()));
        }
        if self.t_min <= 0.0 {
            return Err(ConfigError::Validation(format!(
                "t_min must be positive, got {}; use the ground-state mode for T = 0",
                self.t_min
            )));
        }
        if self.t_min >= self.t_max {
            return Err(ConfigError::Validation(format!(
                "t_min ({}) must be below t_max ({})",
                self.t_min, self.t_max
            )));
        }
        if self.n_points < 2 {
            return Err(ConfigError::Validation(format!(
                "n_points must be at least 2, got {}",
                self.n_points
            )));
        }
        Ok(())
    }

    /// Couplings after the optional `J, Jz → J/S, Jz/S` rescaling.
    pub fn effective_params(&self) -> ModelParams {
        if self.renormalize {
            self.params.renormalized(self.s)
        } else {
            self.params
        }
    }

    pub fn hamiltonian(&self) -> AHamiltonian {
        build_model_hamiltonian(&self.effective_params(), self.s).1
    }

    /// Grid temperatures in ascending order, endpoints included exactly.
    pub fn temperatures(&self) -> Vec<f64> {
        let n = self.n_points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.t_min;
                }
                if i == n - 1 {
                    return self.t_max;
                }
                let x = i as f64 / last;
                match self.grid {
                    Grid::Linear => self.t_min + (self.t_max - self.t_min) * x,
                    Grid::Log => (self.t_min.ln() + (self.t_max.ln() - self.t_min.ln()) * x).exp(),
                }
            })
            .collect()
    }
}

/// One grid point; `result` is `None` when the evaluation produced
/// non-finite numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub result: Option<CorrelationResult>,
}

/// Correlations of the Gibbs state at one temperature.
pub fn evaluate(h: &AHamiltonian, t: f64) -> Option<CorrelationResult> {
    let c = correlations(&gibbs_state(h, Temperature::Finite(t)));
    let all = [c.u0, c.u1, c.u, c.f0, c.f1, c.f];
    all.iter().all(|x| x.is_finite()).then_some(c)
}

/// Evaluates every grid point; rows come back in temperature order.
pub fn run_sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let h = config.hamiltonian();
    config
        .temperatures()
        .into_par_iter()
        .map(|t| SweepRow {
            t,
            result: evaluate(&h, t),
        })
        .collect()
}

pub const CSV_HEADER: &str = "T,U0,U1,U,F0,F1,F,active_U,active_F,method";

/// CSV with 17 significant digits per float and `\n` line endings.
pub fn emit_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{:.16e}", row.t);
        match &row.result {
            Some(c) => {
                for x in [c.u0, c.u1, c.u, c.f0, c.f1, c.f] {
                    let _ = write!(out, ",{x:.16e}");
                }
                let _ = writeln!(
                    out,
                    ",{},{},{}",
                    c.active_u.as_str(),
                    c.active_f.as_str(),
                    c.method.as_str()
                );
            }
            None => out.push_str(",NaN,NaN,NaN,NaN,NaN,NaN,error,error,error\n"),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Lqu,
    Lqfi,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Lqu => "LQU",
            MeasureKind::Lqfi => "LQFI",
        }
    }

    /// `branch0 − branch1`.
    pub fn gap(self, c: &CorrelationResult) -> f64 {
        match self {
            MeasureKind::Lqu => c.u0 - c.u1,
            MeasureKind::Lqfi => c.f0 - c.f1,
        }
    }
}

/// A temperature where the minimizing branch switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub t: f64,
    /// `branch0 − branch1` at `t`.
    pub gap: f64,
    /// Width of the final bisection bracket.
    pub width: f64,
    pub left: ActiveBranch,
    pub right: ActiveBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransitionReport {
    pub measure: MeasureKind,
    pub crossings: Vec<Crossing>,
    /// Runs of grid points where the branches coincide to within
    /// [`GAP_RESOLUTION`], as `(first, last)`.
    pub plateaus: Vec<(f64, f64)>,
}

fn resolved_sign(gap: f64) -> i8 {
    if gap.abs() < GAP_RESOLUTION {
        0
    } else if gap > 0.0 {
        1
    } else {
        -1
    }
}

/// Finds sign changes of `branch0 − branch1` on the grid and refines each
/// by bisection.
pub fn detect_transitions(config: &SweepConfig, measure: MeasureKind) -> TransitionReport {
    let rows = run_sweep(config);
    transitions_from_rows(config, &rows, measure)
}

/// Same as [`detect_transitions`] but reuses an existing sweep.
pub fn transitions_from_rows(config: &SweepConfig, rows: &[SweepRow], measure: MeasureKind) -> TransitionReport {
    let h = config.hamiltonian();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.result.as_ref().map(|c| (r.t, measure.gap(c))))
        .collect();

    let mut brackets = Vec::new();
    let mut plateaus = Vec::new();
    // Last grid point with a definite sign.
    let mut anchor: Option<(f64, f64)> = None;
    let mut tie_run: Option<(f64, f64, usize)> = None;
    for &(t, gap) in &points {
        let sign = resolved_sign(gap);
        if sign == 0 {
            tie_run = Some(match tie_run {
                Some((first, _, n)) => (first, t, n + 1),
                None => (t, t, 1),
            });
            continue;
        }
        let run = tie_run.take();
        if let Some((first, last, n)) = run {
            if n > 1 {
                plateaus.push((first, last));
            }
        }
        if let Some((ta, ga)) = anchor {
            // A single tied grid point between opposite signs is a crossing
            // that happens to sit on the grid; longer runs are plateaus.
            let isolated = run.is_none_or(|(_, _, n)| n == 1);
            if resolved_sign(ga) != sign && isolated {
                brackets.push((ta, ga, t, gap));
            }
        }
        anchor = Some((t, gap));
    }
    if let Some((first, last, n)) = tie_run {
        if n > 1 {
            plateaus.push((first, last));
        }
    }

    let crossings = brackets
        .into_iter()
        .map(|(a, ga, b, gb)| refine(&h, measure, a, ga, b, gb))
        .collect();
    TransitionReport {
        measure,
        crossings,
        plateaus,
    }
}

fn refine(h: &AHamiltonian, measure: MeasureKind, mut a: f64, mut ga: f64, mut b: f64, gb: f64) -> Crossing {
    let gap_at = |t: f64| evaluate(h, t).map(|c| measure.gap(&c)).unwrap_or(f64::NAN);
    // With the gap as branch 0 and zero as branch 1, `of` reads off which
    // branch is smaller on each side.
    let (left, right) = (ActiveBranch::of(ga, 0.0), ActiveBranch::of(gb, 0.0));
    let mut mid = 0.5 * (a + b);
    let mut gm = gap_at(mid);
    for _ in 0..MAX_BISECTIONS {
        if (b - a) <= CROSSING_WIDTH && gm.abs() <= CROSSING_GAP {
            break;
        }
        if gm == 0.0 || !gm.is_finite() {
            break;
        }
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
        mid = 0.5 * (a + b);
        gm = gap_at(mid);
    }
    Crossing {
        t: mid,
        gap: gm,
        width: b - a,
        left,
        right,
    }
}
