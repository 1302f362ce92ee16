use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tamagawa::commands::{cmd_audit, cmd_ek, cmd_ideal_count, cmd_scan, AuditOptions};
use tamagawa::{CliError, CliResult, RunConfig};

/// Selmer data across quadratic twists, and Erdős–Kac checks for the
/// additive functions behind it.
#[derive(Parser)]
#[command(name = "tamagawa", version)]
struct Cli {
    /// Flat `key = value` config file, applied before command-line flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    threads: Option<String>,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every command. Values are kept as strings so that they
/// go through the same parser as the config file.
#[derive(Args, Default)]
struct Common {
    #[arg(long = "X", allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Descent data for every squarefree twist 0 < |d| < X.
    Scan {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
        /// Tail thresholds, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<String>,
    },
    /// Moments and CDF of a normalized additive function over characters.
    Ek {
        /// `omega` or `curve-g`.
        #[arg(long)]
        f: Option<String>,
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
        /// Moment orders, comma separated.
        #[arg(long)]
        k: Option<String>,
        /// Base field: `Q` or a squarefree m.
        #[arg(long, allow_hyphen_values = true)]
        field: Option<String>,
        /// Skip `cdf.svg`.
        #[arg(long)]
        no_svg: bool,
    },
    /// Squarefree ideal counts in ray classes against their main term.
    IdealCount {
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[command(flatten)]
        common: Common,
        /// Modulus, as comma separated `p:idx` tokens or `1`.
        #[arg(long)]
        q: Option<String>,
        /// Divisor of q; every squarefree divisor when omitted.
        #[arg(long)]
        d: Option<String>,
    },
    /// Checks every exact descent identity; exit 1 on the first violation.
    Audit {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt_legendre_table: bool,
    },
}

fn apply(config: &mut RunConfig, pairs: &[(&str, Option<&String>)]) -> CliResult<()> {
    for (key, value) in pairs {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    Ok(())
}

fn apply_common(config: &mut RunConfig, c: &Common) -> CliResult<()> {
    apply(config, &[("X", c.x.as_ref()), ("seed", c.seed.as_ref())])?;
    if let Some(out) = &c.out {
        config.output = out.clone();
    }
    Ok(())
}

fn apply_curve(config: &mut RunConfig, c: &CurveArgs) -> CliResult<()> {
    apply(config, &[("a", c.a.as_ref()), ("b", c.b.as_ref())])
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("{}", f.display());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    apply(&mut config, &[("threads", cli.threads.as_ref())])?;
    let command = cli.command;
    match &command {
        Command::Scan { curve, common, r } => {
            apply_curve(&mut config, curve)?;
            apply_common(&mut config, common)?;
            apply(&mut config, &[("r", r.as_ref())])?;
        }
        Command::Ek { f, curve, common, k, field, no_svg } => {
            apply_curve(&mut config, curve)?;
            apply_common(&mut config, common)?;
            apply(&mut config, &[("f", f.as_ref()), ("k", k.as_ref()), ("field", field.as_ref())])?;
            config.svg &= !no_svg;
        }
        Command::IdealCount { m, common, q, d } => {
            apply_common(&mut config, common)?;
            apply(&mut config, &[("field", m.as_ref()), ("q", q.as_ref()), ("d", d.as_ref())])?;
        }
        Command::Audit { curve, common, .. } => {
            apply_curve(&mut config, curve)?;
            apply_common(&mut config, common)?;
        }
    }
    config.validate()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match command {
        Command::Scan { .. } => cmd_scan(&config).map(|o| print_files(&o.files)),
        Command::Ek { .. } => cmd_ek(&config).map(|o| print_files(&o.files)),
        Command::IdealCount { .. } => cmd_ideal_count(&config).map(|(_, p)| print_files(&[p])),
        Command::Audit { corrupt_legendre_table, .. } => {
            let report = cmd_audit(&config, AuditOptions { corrupt_legendre_table })?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_audit = matches!(cli.command, Command::Audit { .. });
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            if is_audit {
                let record = serde_json::json!({ "status": "fail", "exit_code": code, "error": e.to_string() });
                println!("{record}");
            }
            eprintln!("error: {e}");
            ExitCode::from(code as u8)
        }
    }
}
