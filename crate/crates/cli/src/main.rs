use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cqgalg_cli::{run, Command, JobConfig, MatrixList, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

/// Compact quantum group presentations and checks, driven by job files.
///
/// Matrices go in job files (`key = value` lines); flags cover names,
/// scalars and paths and override the job file. CQG_WORD_BUDGET caps the
/// word basis of membership searches.
#[derive(Parser, Debug)]
#[command(name = "cqgalg", version)]
struct Cli {
    /// One of qunitary, qunitary-real, qgauge, qaut, qaut-real, abelianize,
    /// projective, hom-check, woro-check, commutative-check, trace-check,
    /// qiso, classical-check. May instead come from the job file.
    command: Option<String>,
    /// Job file with `key = value` lines.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Real algebra, e.g. "C(1) + H(1) + C(3)".
    #[arg(long)]
    algebra: Option<String>,
    /// Twist F; only `identity` on the command line.
    #[arg(long = "F")]
    f: Option<String>,
    /// State R; only `identity` on the command line.
    #[arg(long = "R")]
    r: Option<String>,
    /// Group expression such as `ao(2)` or `file(p.cqg)`.
    #[arg(long)]
    group: Option<String>,
    /// Group mapped from, for hom-check.
    #[arg(long)]
    source: Option<String>,
    /// Group mapped into, for hom-check.
    #[arg(long)]
    target: Option<String>,
    /// Named group, e.g. aaut-real-R2.
    #[arg(long)]
    preset: Option<String>,
    /// Builtin triple name or path to a triple file.
    #[arg(long)]
    triple: Option<String>,
    /// Ideal for woro-check: commutators or real-form.
    #[arg(long)]
    ideal: Option<String>,
    /// Matrix size for qaut and qiso.
    #[arg(short = 'n', long)]
    n: Option<usize>,
    /// Cofactor depth.
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Seed for classical-check sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of classical points to sample.
    #[arg(long)]
    samples: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the presentation here.
    #[arg(long)]
    presentation: Option<PathBuf>,
}

fn identity_only(flag: &str, v: &Option<String>) -> Result<Option<MatrixList>, String> {
    match v.as_deref() {
        None => Ok(None),
        Some("identity") => Ok(Some(MatrixList::Identity)),
        Some(_) => Err(format!("--{} accepts only 'identity'; put matrices in a job file", flag)),
    }
}

fn config(cli: Cli) -> Result<JobConfig, String> {
    let base = match &cli.job {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
            JobConfig::parse(&text).map_err(|e| format!("{}:{}", path.display(), e))?
        }
        None => JobConfig::default(),
    };
    let command = cli.command.as_deref().map(str::parse::<Command>).transpose()?;
    if let (Some(a), Some(b)) = (command, base.command) {
        if a != b {
            return Err(format!("command '{}' conflicts with '{}' in the job file", a, b));
        }
    }
    let flags = JobConfig {
        command,
        algebra: cli.algebra,
        f: identity_only("F", &cli.f)?,
        r: identity_only("R", &cli.r)?,
        group: cli.group,
        source: cli.source,
        target: cli.target,
        preset: cli.preset,
        triple: cli.triple,
        ideal: cli.ideal,
        n: cli.n,
        k: cli.k,
        seed: cli.seed,
        samples: cli.samples,
        out: cli.out,
        presentation_out: cli.presentation,
        ..JobConfig::default()
    };
    Ok(base.merge(flags))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let write = |path: &PathBuf, text: &str| {
        std::fs::write(path, text).map_err(|e| format!("{}: {}", path.display(), e))
    };
    let mut written = Ok(());
    if let (Some(path), Some(p)) = (&cfg.presentation_out, &outcome.presentation) {
        written = write(path, p);
    }
    match &cfg.out {
        Some(path) => written = written.and(write(path, &outcome.report)),
        None => print!("{}", outcome.report),
    }
    if let Err(e) = written {
        eprintln!("error: {}", e);
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(if outcome.passed { EXIT_PASS } else { EXIT_FAIL } as u8)
}
