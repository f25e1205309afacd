use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use axicorr::asymptotics::{high_t_coefficients, threshold_temperature};
use axicorr::correlations::{correlations, lqfi_oracle, lqu_oracle, oracle_m, oracle_w};
use axicorr::sweep::{emit_csv, parse_config, run_sweep, transitions_from_rows, MeasureKind, SweepRow};
use axicorr::{build_model_hamiltonian, gibbs_state, AState, ModelParams, SpinLength, Temperature};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VALIDATION_TOLERANCE: f64 = 1e-10;
const TABLE_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "axicorr",
    version,
    about = "LQU and LQFI of axially symmetric spin-(1/2, S) dimers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correlations of one Gibbs state (or the ground state).
    Correlations(CorrelationsArgs),
    /// Temperature sweep written as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Temperatures where the minimizing branch switches.
    Transitions {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureArg::Both)]
        measure: MeasureArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check closed forms against dense matrices on random states.
    Validate {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// High-temperature amplitudes and negativity threshold temperatures.
    Asymptotics {
        #[arg(long)]
        s2: u32,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Ground-state values of the isotropic dimer against exact fractions.
    Table1,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Lqu,
    Lqfi,
    Both,
}

#[derive(Args)]
struct CorrelationsArgs {
    /// Sweep configuration supplying s2, couplings and renormalization.
    #[arg(long, conflicts_with_all = ["s2", "b1", "b2", "j", "jz", "k1", "k2", "dz"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    s2: Option<u32>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(
        short = 'T',
        long = "temperature",
        allow_negative_numbers = true,
        required_unless_present = "ground"
    )]
    t: Option<f64>,
    #[arg(long, conflicts_with = "t")]
    ground: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    j: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    jz: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    k2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    dz: f64,
}

impl ParamArgs {
    fn model(&self) -> ModelParams {
        ModelParams {
            b1: self.b1,
            b2: self.b2,
            j: self.j,
            jz: self.jz,
            k1: self.k1,
            k2: self.k2,
            dz: self.dz,
        }
    }
}

/// Failure of a command, carrying the exit code it maps to.
enum Failure {
    Usage(String),
    Check(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Correlations(args) => correlations_cmd(&args),
        Command::Sweep { config, out } => sweep_cmd(&config, out.as_deref()),
        Command::Transitions { config, measure, out } => transitions_cmd(&config, measure, out.as_deref()),
        Command::Validate { samples, seed } => validate_cmd(samples, seed),
        Command::Asymptotics { s2, params } => asymptotics_cmd(s2, &params.model()),
        Command::Table1 => table1_cmd(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("axicorr: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("axicorr: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_config(path: &Path) -> Result<axicorr::SweepConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn correlations_cmd(args: &CorrelationsArgs) -> Outcome {
    let (s, params) = match &args.config {
        Some(path) => {
            let config = load_config(path)?;
            (config.s, config.effective_params())
        }
        None => {
            let s2 = args.s2.expect("clap enforces --s2 without --config");
            (SpinLength::from_two_s(s2).map_err(usage)?, args.params.model())
        }
    };
    params.validate().map_err(usage)?;
    let t = match args.t {
        Some(t) if t > 0.0 && t.is_finite() => Temperature::Finite(t),
        Some(t) => {
            return Err(usage(format!(
                "temperature must be positive, got {t}; use --ground for T = 0"
            )))
        }
        None => Temperature::Ground,
    };
    let (_, h) = build_model_hamiltonian(&params, s);
    let row = SweepRow {
        t: t.value(),
        result: Some(correlations(&gibbs_state(&h, t))),
    };
    write_output(args.out.as_deref(), &emit_csv(&[row]))
}

fn sweep_cmd(config: &Path, out: Option<&Path>) -> Outcome {
    let config = load_config(config)?;
    write_output(out, &emit_csv(&run_sweep(&config)))
}

fn transitions_cmd(config: &Path, measure: MeasureArg, out: Option<&Path>) -> Outcome {
    let config = load_config(config)?;
    let measures = match measure {
        MeasureArg::Lqu => vec![MeasureKind::Lqu],
        MeasureArg::Lqfi => vec![MeasureKind::Lqfi],
        MeasureArg::Both => vec![MeasureKind::Lqu, MeasureKind::Lqfi],
    };
    let rows = run_sweep(&config);
    let mut text = String::from("measure,kind,T,gap,left,right\n");
    for m in measures {
        let report = transitions_from_rows(&config, &rows, m);
        for c in &report.crossings {
            text.push_str(&format!(
                "{},crossing,{:.16e},{:.3e},{},{}\n",
                m.as_str(),
                c.t,
                c.gap,
                c.left.as_str(),
                c.right.as_str()
            ));
        }
        for (first, last) in &report.plateaus {
            text.push_str(&format!("{},plateau,{first:.16e},,,\n", m.as_str()));
            text.push_str(&format!("{},plateau-end,{last:.16e},,,\n", m.as_str()));
        }
    }
    write_output(out, &text)
}

/// Largest deviation of each closed-form branch from its dense counterpart.
fn validate_cmd(samples: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 6];
    let mut fallbacks = 0;
    for _ in 0..samples {
        let s = SpinLength::from_two_s(rng.random_range(1..=6)).expect("valid spin");
        let rho = AState::random(s, &mut rng);
        let c = correlations(&rho);
        let w = oracle_w(&rho);
        let m = oracle_m(&rho);
        if c.method == axicorr::Method::OracleFallback {
            fallbacks += 1;
        }
        let deviations = [
            c.u0 - (1.0 - w[(2, 2)]).max(0.0),
            c.u1 - (1.0 - w[(0, 0)]).max(0.0),
            c.f0 - (1.0 - m[(2, 2)]).max(0.0),
            c.f1 - (1.0 - m[(0, 0)]).max(0.0),
            c.u - lqu_oracle(&rho).max(0.0),
            c.f - lqfi_oracle(&rho).max(0.0),
        ];
        for (w, d) in worst.iter_mut().zip(deviations) {
            *w = w.max(d.abs());
        }
    }
    let names = ["U0", "U1", "F0", "F1", "U", "F"];
    println!("samples {samples}, seed {seed}, spins 1/2..3, fallbacks {fallbacks}");
    for (name, dev) in names.iter().zip(worst) {
        let verdict = if dev <= VALIDATION_TOLERANCE { "ok" } else { "FAIL" };
        println!("{name:<3} max deviation {dev:.3e} {verdict}");
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    if max <= VALIDATION_TOLERANCE {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "closed forms deviate from dense matrices by {max:.3e} (> {VALIDATION_TOLERANCE:e})"
        )))
    }
}

fn asymptotics_cmd(s2: u32, params: &ModelParams) -> Outcome {
    let s = SpinLength::from_two_s(s2).map_err(usage)?;
    params.validate().map_err(usage)?;
    let coefficients = high_t_coefficients(params, s).map_err(usage)?;
    let (_, h) = build_model_hamiltonian(params, s);
    let t: f64 = 1e3;
    let c = correlations(&gibbs_state(&h, Temperature::Finite(t)));
    println!("S = {s}");
    println!("branch  T^2 coefficient  T^2 * value at T = 1e3");
    for (name, coef, value) in [
        ("F0", coefficients.f0, c.f0),
        ("F1", coefficients.f1, c.f1),
        ("U0", coefficients.u0, c.u0),
        ("U1", coefficients.u1, c.u1),
    ] {
        println!("{name:<7} {coef:<16.10} {:.10}", value * t * t);
    }
    println!("threshold temperature        {:.10}", threshold_temperature(s, false));
    println!("threshold temperature (J/S)  {:.10}", threshold_temperature(s, true));
    Ok(())
}

/// `2S` with the exact antiferromagnetic and ferromagnetic fractions.
type TableRow = (u32, (u32, u32), (u32, u32));

fn table1_cmd() -> Outcome {
    let rows: [TableRow; 5] = [
        (1, (1, 1), (1, 3)),
        (2, (8, 9), (4, 9)),
        (3, (5, 6), (1, 2)),
        (4, (4, 5), (8, 15)),
        (5, (7, 9), (5, 9)),
    ];
    let mut failures = 0;
    println!("S    J    exact    U                   F                   result");
    for (s2, af, fm) in rows {
        let s = SpinLength::from_two_s(s2).expect("valid spin");
        for (j, (num, den)) in [(1.0, af), (-1.0, fm)] {
            let (_, h) = build_model_hamiltonian(&ModelParams::xxx(j), s);
            let c = correlations(&gibbs_state(&h, Temperature::Ground));
            let exact = num as f64 / den as f64;
            let pass = (c.u - exact).abs() <= TABLE_TOLERANCE && (c.f - exact).abs() <= TABLE_TOLERANCE;
            if !pass {
                failures += 1;
            }
            let sign = if j > 0.0 { "J>0" } else { "J<0" };
            let fraction = format!("{num}/{den}");
            println!(
                "{:<4} {sign} {fraction:<8} {:<19.16} {:<19.16} {}",
                s.to_string(),
                c.u,
                c.f,
                if pass { "pass" } else { "FAIL" }
            );
        }
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{failures} of 10 ground-state values differ from the table"
        )))
    }
}
