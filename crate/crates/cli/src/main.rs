use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use affine_km::cli::{
    remediation, run, CharKind, CharMethod, Command, ConfigLayer, IndexChoice, OutputFormat,
    RunConfig, Threads, CACHE_ENV, EXIT_ERROR,
};
use affine_km::error::KmError;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact computations for untwisted affine Kac–Moody algebras.
#[derive(Parser)]
#[command(name = "akm", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Algebra, e.g. A1~ or A2~.
    #[arg(short, long, global = true)]
    algebra: Option<String>,
    /// Highest weight as Dynkin labels m0,m1,...,ml.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    hw: Option<Vec<i64>>,
    /// Truncation depth in powers of δ.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Maximal Weyl group word length.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Write the payload here instead of stdout; a timing log goes to FILE.log.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads, or `auto`.
    #[arg(long, global = true)]
    threads: Option<String>,
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// JSON file with defaults for the options above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cartan data, marks, ρ̃ and simple roots.
    Describe,
    /// Weyl group enumeration.
    #[command(subcommand)]
    Weyl(WeylCmd),
    /// Characters of Verma and irreducible modules.
    Char {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, value_enum, default_value = "freudenthal")]
        method: Method,
        /// Cross-check against the independent oracles; exit 1 on disagreement.
        #[arg(long)]
        verify: bool,
        /// Realize the module and report its weight-space dimensions.
        #[arg(long)]
        realize: bool,
    },
    #[command(subcommand)]
    Check(CheckCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Structure constants of g and of ñ₊ up to the given depth.
    BracketTable,
}

#[derive(Subcommand)]
enum WeylCmd {
    /// All elements up to --max-len.
    Enum,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// The affine denominator identity up to --depth.
    Denominator,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Nilpotent cohomology at the dot orbit of --hw and at control weights.
    Kostant {
        /// Extra weight "(m1,...,ml; k; n)"; repeatable.
        #[arg(long = "extra")]
        extra: Vec<String>,
        /// Number of automatically chosen off-orbit control weights.
        #[arg(long, default_value_t = 0)]
        controls: usize,
        #[arg(long, value_enum, default_value = "both")]
        index: Index,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Verma,
    Irrep,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Freudenthal,
    WeylKac,
}

#[derive(Clone, Copy, ValueEnum)]
enum Index {
    L,
    S,
    Both,
}

fn command(cmd: Cmd) -> Command {
    match cmd {
        Cmd::Describe => Command::Describe,
        Cmd::Weyl(WeylCmd::Enum) => Command::WeylEnum,
        Cmd::Char {
            kind,
            method,
            verify,
            realize,
        } => Command::Char {
            kind: match kind {
                Kind::Verma => CharKind::Verma,
                Kind::Irrep => CharKind::Irrep,
            },
            method: match method {
                Method::Freudenthal => CharMethod::Freudenthal,
                Method::WeylKac => CharMethod::WeylKac,
            },
            verify,
            realize,
        },
        Cmd::Check(CheckCmd::Denominator) => Command::CheckDenominator,
        Cmd::Verify(VerifyCmd::Kostant {
            extra,
            controls,
            index,
        }) => Command::VerifyKostant {
            extra,
            controls,
            index: match index {
                Index::L => IndexChoice::L,
                Index::S => IndexChoice::S,
                Index::Both => IndexChoice::Both,
            },
        },
        Cmd::BracketTable => Command::BracketTable,
    }
}

fn config(c: &Common) -> Result<RunConfig, KmError> {
    let file = c
        .config
        .as_deref()
        .map(ConfigLayer::from_file)
        .transpose()?;
    let flags = ConfigLayer {
        algebra: c.algebra.clone(),
        hw: c.hw.clone(),
        depth: c.depth,
        max_len: c.max_len,
        cache_dir: None,
        output_format: c.format.map(|f| match f {
            Format::Json => OutputFormat::Json,
            Format::Tsv => OutputFormat::Tsv,
            Format::Pretty => OutputFormat::Pretty,
        }),
        threads: c
            .threads
            .as_deref()
            .map(str::parse::<Threads>)
            .transpose()?,
    };
    // clap already folded the environment variable into the flag.
    RunConfig::resolve(flags, file, c.cache_dir.clone())
}

fn fail(err: &KmError) -> ExitCode {
    eprintln!("error: {err}");
    if let Some(hint) = remediation(err) {
        eprintln!("hint: {hint}");
    }
    ExitCode::from(EXIT_ERROR as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli.common) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let cmd = command(cli.cmd);
    let start = Instant::now();
    let outcome = match run(&cfg, &cmd) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    if outcome.cached {
        eprintln!("cached");
    }
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_ERROR as u8);
            }
            let stamp = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs());
            let log = format!(
                "finished_unix={stamp}\nelapsed_ms={}\ncommand={}\ncached={}\nexit={}\n",
                start.elapsed().as_millis(),
                cmd.name(),
                outcome.cached,
                outcome.exit_code
            );
            let mut log_path = path.clone().into_os_string();
            log_path.push(".log");
            let _ = std::fs::write(PathBuf::from(log_path), log);
        }
        None => print!("{}", outcome.text),
    }
    ExitCode::from(outcome.exit_code as u8)
}
