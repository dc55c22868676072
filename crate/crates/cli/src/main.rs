//! `conestab`: command-line front end.
//!
//! Exit codes: 0 success, 1 failed assertion or catalog mismatch, 2 usage or
//! schema error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use conestab::flow::{run_flow, FlowConfig, Tier, DEFAULT_SEED};
use conestab::format::fmt17;
use conestab::radial::{mode_eigenvalues, model_cone_spectrum, radial_tsv, ModeEigenvalue};
use conestab::spectrum::{exceptional_weights, WeightKind};
use conestab::tangential::{block_spectrum, v1_form, v3_form, v4_form, A33Variant, BlockForm};
use conestab::{
    build_radial_model, heat_decay_check, reproduce_table, run_checks, tangential_verdict,
    CheckOptions, CrossSectionSpectrum, Error,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "conestab",
    version,
    about = "Stability of Ricci-flat cones: spectra, catalogs, radial models and flow surrogates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide tangential stability of a link from its spectrum document.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the labels of a stability table.
    Catalog {
        #[arg(long)]
        table: u8,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block spectra of the tangential operator.
    Blocks {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Friedrichs eigenvalues of the radial model.
    Radial {
        #[command(flatten)]
        mesh: MeshArgs,
        /// Comma-separated indicial roots; ignored when `--input` is given.
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        nu: Vec<f64>,
        /// Spectrum document; the lowest tangential modes are used.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[arg(long = "per-mode", default_value_t = 3)]
        per_mode: usize,
        /// Maximum relative error against the Bessel oracle.
        #[arg(long, default_value_t = 5e-3)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Semigroup decay on the complement of the kernel.
    Heat {
        #[command(flatten)]
        mesh: MeshArgs,
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        /// Spectrum document; the mode carrying the model `λ₁` is used.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[arg(long = "per-mode", default_value_t = 1)]
        per_mode: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.5,1")]
        t: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restarted flow on the finite-dimensional surrogate.
    Flow {
        #[arg(long = "N", default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        ctilde: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long = "R")]
        r: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TierArg::A)]
        tier: TierArg,
        /// Keep restarting for at least this many legs.
        #[arg(long, default_value_t = 11)]
        legs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Check {
        /// Replace every numeric tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long = "M", default_value_t = 4000)]
        m: usize,
        #[arg(long = "flip-a33", hide = true)]
        flip_a33: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct MeshArgs {
    #[arg(long = "M", default_value_t = 4000)]
    m: usize,
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

enum Failure {
    /// Exit 1.
    Assertion(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Schema(_) | Error::Config(_) => Failure::Usage(e.to_string()),
            Error::Numerical(_) | Error::BoundViolation(_) | Error::Internal(_) => {
                Failure::Assertion(e.to_string())
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_spectrum(path: &PathBuf) -> Result<CrossSectionSpectrum, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    CrossSectionSpectrum::from_json_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn classify(input: &PathBuf, out: &Option<PathBuf>) -> Outcome {
    let spectrum = read_spectrum(input)?;
    let verdict = tangential_verdict(&spectrum)?;
    let weights = exceptional_weights(&spectrum, WeightKind::Lichnerowicz).ok();
    let doc = json!({
        "label": spectrum.label,
        "n": spectrum.n,
        "tangentially_stable": verdict.tangentially_stable,
        "strictly_tangentially_stable": verdict.strictly_tangentially_stable,
        "offending_eigenvalues": verdict.offending_closed,
        "offending_open_interval": verdict.offending_open,
        "einstein_condition": verdict.einstein_condition,
        "strict_einstein_condition": verdict.strict_einstein_condition,
        "min_tangential_eigenvalue": verdict.min_tangential_eigenvalue,
        "exceptional_weights": weights,
        "diagnostics": verdict.diagnostics,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("verdict serializes");
    text.push('\n');
    emit(out, &text)
}

fn catalog(table: u8, samples: usize, out: &Option<PathBuf>) -> Outcome {
    if !(1..=2).contains(&table) {
        return Err(Failure::Usage(format!(
            "--table must be 1 or 2, got {table}"
        )));
    }
    if samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let report = reproduce_table(table, samples)?;
    emit(out, &report.to_csv())?;
    match report.mismatches().first() {
        None => Ok(()),
        Some(row) => Err(Failure::Assertion(format!(
            "{} of {} rows do not match; first: {} {:?} expected {} recomputed {}",
            report.mismatches().len(),
            report.rows.len(),
            row.family,
            row.evaluation.params,
            row.expected_tangential,
            row.recomputed()
        ))),
    }
}

fn blocks(input: &PathBuf, out: &Option<PathBuf>) -> Outcome {
    let s = read_spectrum(input)?;
    let n = s.n;
    let mut forms: Vec<BlockForm> = Vec::new();
    forms.extend(s.tt_einstein_eigenvalues.iter().map(|&k| v1_form(k, n)));
    for &mu in &s.coclosed_oneform_eigenvalues {
        forms.push(v3_form(mu, n)?);
    }
    for &l in &s.laplace_eigenvalues {
        // Obata-violating eigenvalues have no V4 block.
        if l.abs() > 1e-9 && l < n as f64 - 1e-9 {
            continue;
        }
        forms.push(v4_form(l, n, 0.0)?);
    }
    let mut text = String::from("block\tparameter\tindex\ttheta\n");
    for f in &forms {
        for (i, th) in block_spectrum(f)?.iter().enumerate() {
            text.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                f.kind,
                fmt17(f.parameter),
                i + 1,
                fmt17(*th)
            ));
        }
    }
    emit(out, &text)
}

fn check_oracles(rows: &[ModeEigenvalue], tolerance: f64) -> Outcome {
    for r in rows {
        if let Some(e) = r.rel_error() {
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(e <= tolerance) {
                return Err(Failure::Assertion(format!(
                    "radial eigenvalue {} of nu = {} is off the Bessel oracle by {e:e} > {tolerance:e}",
                    r.index, r.nu
                )));
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn radial(
    mesh: &MeshArgs,
    nu: &[f64],
    input: &Option<PathBuf>,
    modes: usize,
    per_mode: usize,
    tolerance: f64,
    out: &Option<PathBuf>,
) -> Outcome {
    let rows = match input {
        Some(path) => {
            model_cone_spectrum(&read_spectrum(path)?, modes, per_mode, mesh.m, mesh.gamma)?
        }
        None => {
            let mut rows = Vec::new();
            for &v in nu {
                // No link dimension is given, so the tangential eigenvalue is unknown.
                rows.extend(mode_eigenvalues(f64::NAN, v, per_mode, mesh.m, mesh.gamma)?);
            }
            rows
        }
    };
    emit(out, &radial_tsv(&rows))?;
    check_oracles(&rows, tolerance)
}

#[allow(clippy::too_many_arguments)]
fn heat(
    mesh: &MeshArgs,
    nu: f64,
    input: &Option<PathBuf>,
    modes: usize,
    per_mode: usize,
    t: &[f64],
    out: &Option<PathBuf>,
) -> Outcome {
    let nu = match input {
        Some(path) => {
            let rows =
                model_cone_spectrum(&read_spectrum(path)?, modes, per_mode, mesh.m, mesh.gamma)?;
            rows.first()
                .map(|r| r.nu)
                .ok_or_else(|| Failure::Usage("empty model spectrum".into()))?
        }
        None => nu,
    };
    let model = build_radial_model(nu, 0.0, mesh.m, mesh.gamma)?;
    let report = heat_decay_check(&model.pencil(), 0, t)?;
    emit(out, &report.to_tsv())?;
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Failure::Assertion(v.clone())),
    }
}

fn flow(config: &FlowConfig, out: &Option<PathBuf>) -> Outcome {
    let trace = run_flow(config)?;
    emit(out, &trace.to_tsv())?;
    eprintln!(
        "tier {} seed {:#x}: mu={} eps={} T={} R={} legs={} converged={}",
        trace.tier,
        trace.seed,
        fmt17(trace.constants.mu),
        fmt17(trace.constants.epsilon),
        fmt17(trace.constants.t),
        fmt17(trace.r),
        trace.records.len(),
        trace.converged
    );
    match trace.violations.first() {
        None => Ok(()),
        Some(v) => Err(Failure::Assertion(v.clone())),
    }
}

fn check(opts: &CheckOptions, out: &Option<PathBuf>) -> Outcome {
    let report = run_checks(opts);
    emit(out, &report.to_text())?;
    let first = report.failures().next().map(|f| match f.tolerance {
        Some(t) => format!("{} failed at tolerance {}", f.name, fmt17(t)),
        None => format!("{} failed: {}", f.name, f.detail),
    });
    first.map_or(Ok(()), |msg| Err(Failure::Assertion(msg)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { input, out } => classify(input, out),
        Command::Catalog {
            table,
            samples,
            out,
        } => catalog(*table, *samples, out),
        Command::Blocks { input, out } => blocks(input, out),
        Command::Radial {
            mesh,
            nu,
            input,
            modes,
            per_mode,
            tolerance,
            out,
        } => radial(mesh, nu, input, *modes, *per_mode, *tolerance, out),
        Command::Heat {
            mesh,
            nu,
            input,
            modes,
            per_mode,
            t,
            out,
        } => heat(mesh, *nu, input, *modes, *per_mode, t, out),
        Command::Flow {
            n,
            c,
            ctilde,
            alpha,
            r,
            seed,
            tier,
            legs,
            out,
        } => {
            let config = FlowConfig {
                tier: match tier {
                    TierArg::A => Tier::A,
                    TierArg::B => Tier::B,
                },
                n: *n,
                c: *c,
                c_tilde: *ctilde,
                alpha: *alpha,
                r: *r,
                seed: *seed,
                min_legs: *legs,
                max_legs: (*legs).max(64),
                ..FlowConfig::default()
            };
            flow(&config, out)
        }
        Command::Check {
            tolerance,
            seed,
            m,
            flip_a33,
            out,
        } => {
            let opts = CheckOptions {
                tolerance: *tolerance,
                a33: if *flip_a33 {
                    A33Variant::SignFlipped
                } else {
                    A33Variant::MatrixEntry
                },
                seed: *seed,
                mesh: *m,
            };
            check(&opts, out)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("conestab: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("conestab: {msg}");
            ExitCode::from(2)
        }
    }
}
