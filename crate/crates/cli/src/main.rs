use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use quadric_clutch::clutch::{build_cocycle, generator_bundle, line_cocycle, verify_cocycle, Cocycle, CocycleJson};
use quadric_clutch::linalg::RingMatrix;
use quadric_clutch::par::Execution;
use quadric_clutch::poly::{MatrixJson, PolyJson};
use quadric_clutch::quadric::{make_quadric, Parity};
use quadric_clutch::sphere::{
    classify_smooth_model, derive_contractible, derive_even, DerivationTrace, RuleSet, SmoothModelVerdict, TraceJson,
};
use quadric_clutch::suite::{run_suite_with, Suite};
use quadric_clutch::suslin::{
    check_beta, suslin_alpha, suslin_beta, verify_suslin, CertificateJson, ElementaryCertificate,
};

#[derive(Parser)]
#[command(name = "qclutch", version, about = "Exact computations on split quadrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Qeven,
    X,
}

#[derive(Subcommand)]
enum Command {
    /// Build and check alpha_n, or extract beta_n with its certificate.
    Suslin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        beta: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Emit the clutching cocycle of a map on Q_{2n-1}.
    Cocycle {
        #[arg(long)]
        n: usize,
        /// `beta`, `line:D` or `file PATH` (a matrix JSON over O(Q_{2n-1})).
        #[arg(long, num_args = 1..=2, required = true)]
        map: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Re-certify an emitted artifact.
    Verify {
        #[arg(long, group = "artifact")]
        cocycle: Option<PathBuf>,
        #[arg(long, group = "artifact")]
        trace: Option<PathBuf>,
        /// A `suslin --beta --format json` artifact.
        #[arg(long, group = "artifact")]
        suslin: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Derive Qeven(n) ~ P1^n or X(n) ~ pt as a replayable trace.
    Derive {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        n: u32,
        /// Print every rewrite step in text output.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Smooth-model status of S^i /\ Gm^j.
    Classify {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the invariant suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Report elapsed times in JSON output (they are zeroed otherwise).
        #[arg(long)]
        timings: bool,
        /// Run checks one at a time.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Failure {
    fn verification(e: impl std::fmt::Display) -> Self {
        Failure::Verification(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qclutch: {e}");
            match e {
                Failure::Usage(_) => ExitCode::from(2),
                Failure::Verification(_) => ExitCode::from(1),
            }
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Suslin { n, beta, format } if beta => suslin_beta_cmd(n, format),
        Command::Suslin { n, format, .. } => suslin_alpha_cmd(n, format),
        Command::Cocycle { n, map, format } => cocycle_cmd(n, &map, format),
        Command::Verify {
            cocycle,
            trace,
            suslin,
            format,
        } => match (cocycle, trace, suslin) {
            (Some(p), _, _) => verify_cocycle_cmd(&p, format),
            (_, Some(p), _) => verify_trace_cmd(&p, format),
            (_, _, Some(p)) => verify_suslin_cmd(&p, format),
            _ => Err(Failure::Usage("verify needs --cocycle, --trace or --suslin".into())),
        },
        Command::Derive {
            target,
            n,
            trace,
            format,
        } => derive_cmd(target, n, trace, format),
        Command::Classify { i, j, format } => classify_cmd(i, j, format),
        Command::Check {
            suite,
            seed,
            format,
            timings,
            sequential,
        } => check_cmd(suite, seed, format, timings, sequential),
    }
}

fn emit_json<T: Serialize>(value: &T) -> Outcome {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Verification(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct AlphaReport {
    n: usize,
    alpha: MatrixJson,
    identity_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    det: Option<PolyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_det: Option<PolyJson>,
}

fn suslin_alpha_cmd(n: usize, format: Format) -> Outcome {
    let alpha = suslin_alpha(n).map_err(|e| Failure::Usage(e.to_string()))?;
    let cert = verify_suslin(n).map_err(Failure::verification)?;
    match format {
        Format::Json => emit_json(&AlphaReport {
            n,
            alpha: alpha.to_json(),
            identity_holds: cert.identity_holds,
            det: cert.det.as_ref().map(|d| d.to_json()),
            expected_det: cert.expected_det.as_ref().map(|d| d.to_json()),
        }),
        Format::Text => {
            print!("alpha_{n} =\n{alpha}");
            println!("alpha(x,y) alpha(y,x)^T = ({}) I: ok", cert.pairing);
            if let Some(d) = &cert.det {
                println!("det alpha_{n} = {d}: ok");
            }
            Ok(())
        }
    }
}

/// The `suslin --beta` artifact.
#[derive(Serialize, serde::Deserialize)]
struct BetaArtifact {
    n: usize,
    beta: MatrixJson,
    det: PolyJson,
    certificate: CertificateJson,
}

fn suslin_beta_cmd(n: usize, format: Format) -> Outcome {
    let (beta, cert) = suslin_beta(n).map_err(Failure::verification)?;
    let det = beta.det().map_err(Failure::verification)?;
    match format {
        Format::Json => emit_json(&BetaArtifact {
            n,
            beta: beta.to_json(),
            det: det.to_json(),
            certificate: cert.to_json(),
        }),
        Format::Text => {
            print!("beta_{n} =\n{beta}");
            println!("det = {det}");
            println!("{} elementary steps reduce alpha_{n} to beta_{n} (+) I", cert.len());
            Ok(())
        }
    }
}

fn odd_ring(n: usize) -> Result<std::sync::Arc<quadric_clutch::RingContext>, Failure> {
    make_quadric(Parity::Odd, n)
        .map(|q| q.context().clone())
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn cocycle_from_file(n: usize, path: &str) -> Result<Cocycle, Failure> {
    let j: MatrixJson = read_json(Path::new(path))?;
    let f = RingMatrix::from_json(&odd_ring(n)?, &j).map_err(Failure::verification)?;
    build_cocycle(&f, n, &format!("file {path}")).map_err(Failure::verification)
}

fn cocycle_cmd(n: usize, map: &[String], format: Format) -> Outcome {
    let cocycle: Cocycle = match map {
        [m] if m == "beta" => generator_bundle(n).map_err(Failure::verification)?,
        [m] if m.starts_with("line:") => {
            let d: i64 = m["line:".len()..]
                .parse()
                .map_err(|_| Failure::Usage(format!("bad line degree in '{m}'")))?;
            line_cocycle(d, n).map_err(|e| Failure::Usage(e.to_string()))?
        }
        [kw, path] if kw == "file" => cocycle_from_file(n, path)?,
        [m] if m.starts_with("file:") => cocycle_from_file(n, &m["file:".len()..])?,
        _ => {
            return Err(Failure::Usage(format!(
                "--map expects beta, line:D or file PATH, got {}",
                map.join(" ")
            )))
        }
    };
    match format {
        Format::Json => emit_json(&cocycle.to_json()),
        Format::Text => {
            print!("{cocycle}");
            Ok(())
        }
    }
}

fn verify_cocycle_cmd(path: &Path, format: Format) -> Outcome {
    let j: CocycleJson = read_json(path)?;
    let c = Cocycle::from_json(&j).map_err(Failure::verification)?;
    let cert = verify_cocycle(&c).map_err(Failure::verification)?;
    match format {
        Format::Json => emit_json(&cert),
        Format::Text => {
            println!(
                "cocycle on Q_{} of rank {} verified: det = {} = {}",
                2 * cert.n,
                cert.rank,
                cert.det,
                cert.unit
            );
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Verified {
    artifact: &'static str,
    verified: bool,
    steps: usize,
}

fn verify_trace_cmd(path: &Path, format: Format) -> Outcome {
    let j: TraceJson = read_json(path)?;
    let t = DerivationTrace::from_json(&j).map_err(Failure::verification)?;
    t.replay(&RuleSet::standard()).map_err(Failure::verification)?;
    match format {
        Format::Json => emit_json(&Verified {
            artifact: "trace",
            verified: true,
            steps: t.steps.len(),
        }),
        Format::Text => {
            println!("trace {} ~ {} verified ({} steps)", t.goal.0, t.goal.1, t.steps.len());
            Ok(())
        }
    }
}

fn verify_suslin_cmd(path: &Path, format: Format) -> Outcome {
    let a: BetaArtifact = read_json(path)?;
    let ctx = odd_ring(a.n)?;
    let beta = RingMatrix::from_json(&ctx, &a.beta).map_err(Failure::verification)?;
    let cert = ElementaryCertificate::from_json(&ctx, &a.certificate).map_err(Failure::verification)?;
    check_beta(a.n, &beta, &cert).map_err(Failure::verification)?;
    let det = beta.det().map_err(Failure::verification)?;
    if det.to_json() != a.det {
        return Err(Failure::Verification(format!(
            "recorded determinant differs from {det}"
        )));
    }
    match format {
        Format::Json => emit_json(&Verified {
            artifact: "suslin",
            verified: true,
            steps: cert.len(),
        }),
        Format::Text => {
            println!("beta_{} verified: {} steps, det = {det}", a.n, cert.len());
            Ok(())
        }
    }
}

fn derive_cmd(target: Target, n: u32, show_steps: bool, format: Format) -> Outcome {
    let trace = match target {
        Target::Qeven => derive_even(n),
        Target::X => derive_contractible(n),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    trace.replay(&RuleSet::standard()).map_err(Failure::verification)?;
    match format {
        Format::Json => emit_json(&trace.to_json()),
        Format::Text if show_steps => {
            print!("{trace}");
            Ok(())
        }
        Format::Text => {
            println!(
                "{} ~ {} ({} steps, replayed)",
                trace.goal.0,
                trace.goal.1,
                trace.steps.len()
            );
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Classification {
    i: u32,
    j: u32,
    #[serde(flatten)]
    verdict: SmoothModelVerdict,
    reason: String,
}

fn classify_cmd(i: u32, j: u32, format: Format) -> Outcome {
    let verdict = classify_smooth_model(i, j);
    let reason = verdict.reason(i, j);
    match format {
        Format::Json => emit_json(&Classification { i, j, verdict, reason }),
        Format::Text => {
            println!("{verdict} ({reason})");
            Ok(())
        }
    }
}

fn check_cmd(suite: Suite, seed: u64, format: Format, timings: bool, sequential: bool) -> Outcome {
    let exec = if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report = run_suite_with(suite, seed, exec);
    match format {
        Format::Json if timings => emit_json(&report)?,
        Format::Json => emit_json(&report.clone().without_timings())?,
        Format::Text => print!("{report}"),
    }
    if report.success() {
        Ok(())
    } else {
        let failing: Vec<_> = report
            .checks
            .iter()
            .filter(|c| c.status == quadric_clutch::suite::CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect();
        Err(Failure::Verification(failing.join(", ")))
    }
}
