use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use piecewise::Error;
use piecewise_cli::commands::{self, CacheItem, Output};
use piecewise_cli::suites::SuiteOptions;
use piecewise_cli::{exit_code, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};

#[derive(Parser, Debug)]
#[command(name = "piecewise", version, about = "Groups acting by piecewise translations: gluings, walks and profiles")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed; required by randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a named group's graph and validate it around the root.
    Build {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Glue Cayley graphs of base groups (z, z<b>, lattice<d>).
    Glue {
        /// rooted | pocket | star | beta | houghton
        #[arg(long)]
        kind: String,
        #[arg(long, value_delimiter = ',')]
        components: Vec<String>,
        /// Order of beta, or number of rays for houghton.
        #[arg(long, default_value_t = 2)]
        order: u32,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Return probabilities of the default walk on a group.
    Walk {
        #[arg(long)]
        group: String,
        /// Largest (even) step count; for Monte Carlo, the step count.
        #[arg(long)]
        steps: usize,
        /// Estimate by simulation with this many trials instead of exact convolution.
        #[arg(long)]
        trials: Option<u64>,
        /// Exact rational arithmetic.
        #[arg(long)]
        rational: bool,
    },
    /// Isoperimetric (p = 1) or spectral (p = 2) profile table.
    Profile {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 2)]
        p: u8,
        #[arg(long)]
        vmax: usize,
        /// Ball radius searched (default vmax - 1).
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Run a verification suite and print a JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        /// Bubble sequence for bubble-energy.
        #[arg(long, value_delimiter = ',')]
        a: Vec<u64>,
        /// Random cases for the commutator suite.
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Evaluate a reference curve, or fit a computed profile against it.
    Curves(CurveArgs),
    /// Write or check cache files under PIECEWISE_CACHE_DIR.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// power | rho | bubble-profile | bubble-return | ball-volume | window | half-bubble
    #[arg(long)]
    curve: String,
    /// Exponent, alpha (number, s or t) or kappa.
    #[arg(long, allow_hyphen_values = true)]
    param: Option<String>,
    /// Bubble sequence for volume curves.
    #[arg(long, value_delimiter = ',')]
    a: Vec<u64>,
    /// Compose with log(1+v)/log(1+log(1+v)).
    #[arg(long)]
    composite: bool,
    /// Evaluation points.
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// Fit the profile of this group instead of evaluating.
    #[arg(long)]
    fit: Option<String>,
    #[arg(long, default_value_t = 1)]
    p: u8,
    #[arg(long, default_value_t = 6)]
    vmax: usize,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Compute and store a ball, walk distribution or profile table.
    Write {
        /// ball | walk | profile
        #[arg(long)]
        kind: String,
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value_t = 2)]
        p: u8,
        #[arg(long, default_value_t = 6)]
        vmax: usize,
    },
    /// Verify a cache file's header, checksum and round trip.
    Check {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        file: PathBuf,
    },
}

fn run(cli: &Cli) -> piecewise::Result<Output> {
    match &cli.command {
        Command::Build { group, radius } => commands::build(group, *radius),
        Command::Glue { kind, components, order, radius } => commands::glue(kind, components, *order, *radius),
        Command::Walk { group, steps, trials, rational } => commands::walk(group, *steps, *trials, cli.seed, *rational),
        Command::Profile { group, p, vmax, radius } => commands::profile(group, *p, *vmax, *radius),
        Command::Verify { suite, a, cases } => {
            let mut opts = SuiteOptions { seed: cli.seed, cases: *cases, ..SuiteOptions::default() };
            if !a.is_empty() {
                opts.bubble = a.clone();
            }
            commands::verify(suite, &opts)
        }
        Command::Curves(c) => {
            let curve = commands::parse_curve(&c.curve, c.param.as_deref(), &c.a, c.composite)?;
            match &c.fit {
                Some(group) => commands::fit(&curve, group, c.p, c.vmax, None),
                None if c.x.is_empty() => Err(Error::InvalidParameter("curves needs --x or --fit".into())),
                None => commands::curves(&curve, &c.x),
            }
        }
        Command::Cache { action } => match action {
            CacheAction::Write { kind, group, radius, steps, p, vmax } => {
                let item = match kind.as_str() {
                    "ball" => CacheItem::Ball { radius: *radius },
                    "walk" => CacheItem::Walk { steps: *steps },
                    "profile" => CacheItem::Profile { p: *p, v_max: *vmax, radius: None },
                    other => return Err(Error::InvalidParameter(format!("unknown cache kind `{other}`"))),
                };
                commands::cache_write(group, &item)
            }
            CacheAction::Check { kind, file } => commands::cache_check(kind, file),
        },
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = cli.workers {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: invalid worker count {n}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    }
    let code = match run(&cli) {
        Ok(output) => match emit(&cli.out, &output.text) {
            Ok(()) if output.failed => EXIT_VALIDATION,
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_IO
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
