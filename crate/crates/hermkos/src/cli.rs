//! Command-line parsing for the `verify` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hermkos_core::FieldSpec;

use crate::report::{emit, Format};
use crate::run::{run, Command, RunConfig};

/// Exit code for invalid invocations.
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "verify", version, about = "Exact and probabilistic checks for symmetric forms on twisted complexes over P^r")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sign identities of the duality functor on random complexes.
    Signs(Opts),
    /// The Koszul complex, the wedge form and its truncations.
    Koszul(Opts),
    /// The half-Koszul symmetric pair and acyclicity of its cone.
    Pair(Opts),
    /// Lagrangians, split sequences and Witt indices.
    Witt(Opts),
    /// Twist bookkeeping for the semi-orthogonal decomposition.
    Semiorth(Opts),
    /// Every battery.
    All(Opts),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

#[derive(Args, Debug)]
struct Opts {
    /// Projective dimension: a single value `r` or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_r_range)]
    r: Option<(usize, usize)>,
    /// Coefficient field: `q` or `fp:P` with P an odd prime.
    #[arg(long, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Truncation level for even r.
    #[arg(long, allow_negative_numbers = true)]
    ell: Option<i64>,
    /// Use the truncation level -s-2 for even r (negative control: the cone
    /// misses two Koszul terms).
    #[arg(long)]
    short_ell: bool,
    /// Twist datum for the dual-class sweep.
    #[arg(long, allow_negative_numbers = true)]
    m: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random points per chart in the probabilistic acyclicity check.
    #[arg(long, default_value_t = hermkos_core::verify::DEFAULT_TRIALS)]
    trials: usize,
    /// Prime for reduction of rational complexes.
    #[arg(long)]
    prime: Option<u64>,
    /// Permit primes below the default minimum.
    #[arg(long)]
    allow_small_prime: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Number of random complexes in the sign battery.
    #[arg(long)]
    count: Option<usize>,
    /// JSON file describing a middle split for odd r.
    #[arg(long)]
    split: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_r_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("invalid r `{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok((parse(a)?, parse(b.trim_start_matches('='))?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    FieldSpec::parse(s).map_err(|e| e.to_string())
}

fn config(cmd: Cmd) -> (RunConfig, Option<PathBuf>) {
    let (command, o) = match cmd {
        Cmd::Signs(o) => (Command::Signs, o),
        Cmd::Koszul(o) => (Command::Koszul, o),
        Cmd::Pair(o) => (Command::Pair, o),
        Cmd::Witt(o) => (Command::Witt, o),
        Cmd::Semiorth(o) => (Command::Semiorth, o),
        Cmd::All(o) => (Command::All, o),
    };
    let cfg = RunConfig {
        command,
        r: o.r,
        field: o.field,
        ell: o.ell,
        short_ell: o.short_ell,
        m: o.m,
        seed: o.seed,
        trials: o.trials,
        prime: o.prime,
        allow_small_prime: o.allow_small_prime,
        count: o.count,
        split: o.split,
        format: match o.format {
            FormatArg::Json => Format::Json,
            FormatArg::Md => Format::Md,
        },
    };
    (cfg, o.output)
}

/// Parses `args` (including the program name), runs the battery and writes
/// the report; returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let (cfg, output) = config(cli.command);
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "verify: {e}");
            return e.exit_code();
        }
    };
    let bytes = emit(&report, cfg.format);
    let written = match output {
        Some(path) => std::fs::write(&path, &bytes).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "verify: cannot write report: {e}");
        return 1;
    }
    report.exit_code()
}
