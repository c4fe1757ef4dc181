use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fair_noma_cli::commands::{self, Users};
use fair_noma_cli::config::{load_config, DbGrid, FileConfig, KGrid};
use fair_noma_cli::manifest::load_manifest;
use fair_noma_cli::parse::{db_to_linear, parse_db_grid, parse_gains, parse_k_grid};
use fair_noma_cli::{CliError, FigureOptions, FigureRun, Result, OUT_DIR_ENV};

/// Fair power allocation for two-user and K-user downlink NOMA.
#[derive(Debug, Parser)]
#[command(name = "fair-noma", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fair region [a_inf, a_sup] and capacities for one channel pair.
    Region(RegionArgs),
    /// Reproduce a figure as CSV, with a manifest and optional plot script.
    Figure(FigureArgs),
    /// Minimum-power (b) and full-power (a) allocation vectors for K users.
    Multiuser(MultiuserArgs),
}

#[derive(Debug, Args)]
#[group(id = "snr", required = true, multiple = false)]
struct Snr {
    /// Transmit SNR, linear.
    #[arg(long, group = "snr", allow_negative_numbers = true)]
    xi: Option<f64>,
    /// Transmit SNR in dB.
    #[arg(long, group = "snr", allow_negative_numbers = true)]
    xi_db: Option<f64>,
}

impl Snr {
    fn linear(&self) -> f64 {
        match (self.xi, self.xi_db) {
            (Some(x), _) => x,
            (_, Some(d)) => db_to_linear(d),
            _ => unreachable!("clap requires one of --xi, --xi-db"),
        }
    }
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    snr: Snr,
    /// Channel gain of the weaker user.
    #[arg(long, allow_negative_numbers = true)]
    g1: f64,
    /// Channel gain of the stronger user.
    #[arg(long, allow_negative_numbers = true)]
    g2: f64,
    /// Print one CSV row instead of text.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct MultiuserArgs {
    #[command(flatten)]
    snr: Snr,
    /// Number of users; required with --random.
    #[arg(long)]
    k: Option<usize>,
    /// Comma-separated channel gains.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    gains: Option<String>,
    /// Draw i.i.d. exponential gains instead.
    #[arg(long, requires = "k")]
    random: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Mean channel gain for --random.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Figure number, 1 to 6.
    #[arg(required_unless_present = "from_manifest")]
    id: Option<u8>,
    /// Regenerate the CSV recorded in a manifest.
    #[arg(long, conflicts_with_all = ["id", "config"])]
    from_manifest: Option<PathBuf>,
    /// JSON file with defaults for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// SNR grid in dB: start:stop:step, a comma list, or one value.
    #[arg(long, allow_hyphen_values = true)]
    xi_db: Option<String>,
    /// Population sizes for figures 3 and 5: lo:hi[:step] or a comma list.
    #[arg(long)]
    k_grid: Option<String>,
    /// Population size for figures 4 and 6.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Target rate for figure 2, b/s/Hz.
    #[arg(long)]
    r0: Option<f64>,
    /// Constant power fraction compared in figures 4 and 5.
    #[arg(long)]
    fixed_a: Option<f64>,
    /// Output directory; defaults to $FAIR_NOMA_OUT_DIR, then the current
    /// directory (or the manifest's directory with --from-manifest).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Monte Carlo worker threads. Results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
    /// Also write a matplotlib script for the CSV.
    #[arg(long)]
    plot: bool,
}

fn figure(args: FigureArgs) -> Result<commands::Output> {
    let env_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let (run, file, default_dir) = match &args.from_manifest {
        Some(path) => {
            let m = load_manifest(path)?;
            let dir = path.parent().map(PathBuf::from).unwrap_or_default();
            (m.run()?, FileConfig::default(), Some(dir))
        }
        None => {
            let file = match &args.config {
                Some(p) => load_config(p)?,
                None => FileConfig::default(),
            };
            let xi_db = match (&args.xi_db, &file.xi_db) {
                (Some(s), _) => Some(parse_db_grid(s)?),
                (None, Some(g)) => Some(DbGrid::resolve(g)?),
                _ => None,
            };
            let k_grid = match (&args.k_grid, &file.k_grid) {
                (Some(s), _) => Some(parse_k_grid(s)?),
                (None, Some(g)) => Some(KGrid::resolve(g)?),
                _ => None,
            };
            let opts = FigureOptions {
                trials: args.trials.or(file.trials),
                seed: args.seed.or(file.seed),
                xi_db,
                k_grid,
                k: args.k.or(file.k),
                beta: args.beta.or(file.beta),
                r0: args.r0.or(file.r0),
                fixed_a: args.fixed_a.or(file.fixed_a),
            };
            let id = args.id.expect("clap requires the figure id");
            (FigureRun::new(id, &opts)?, file, None)
        }
    };
    let out_dir = args
        .out_dir
        .or(file.out_dir)
        .or(env_dir)
        .or(default_dir)
        .unwrap_or_else(|| PathBuf::from("."));
    let plot = args.plot || file.plot.unwrap_or(false);
    let workers = args.workers.or(file.workers);
    let paths = commands::write_figure(&run, &out_dir, plot, workers)?;
    let stdout = paths.iter().map(|p| format!("wrote {}\n", p.display())).collect();
    Ok(commands::Output {
        stdout,
        warnings: Vec::new(),
    })
}

fn dispatch(cli: Cli) -> Result<commands::Output> {
    match cli.command {
        Command::Region(a) => commands::region(a.snr.linear(), a.g1, a.g2, a.csv),
        Command::Multiuser(a) => {
            let users = if a.random {
                Users::Random {
                    k: a.k.expect("clap requires --k with --random"),
                    seed: a.seed,
                    beta: a.beta,
                }
            } else {
                let gains = parse_gains(a.gains.as_deref().expect("clap requires --gains"))?;
                if let Some(k) = a.k {
                    if k != gains.len() {
                        return Err(CliError::Usage(format!("--k {k} but {} gains given", gains.len())));
                    }
                }
                Users::Gains(gains)
            };
            commands::multiuser(a.snr.linear(), users)
        }
        Command::Figure(a) => figure(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            print!("{}", out.stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
