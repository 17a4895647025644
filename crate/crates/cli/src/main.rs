use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mdim_cli::commands::{self, ApproxArgs, DensityArgs, DensityMode, Quantity, ThermoArgs};
use mdim_cli::selftest::{report, run_selftest};
use mdim_cli::sources::MomentArgs;
use mdim_cli::table::{run_table, strict_status, to_tsv, TableSources};
use mdim_cli::{CliResult, Failure, Globals, JobSpec};
use mdim_core::approx::Target;
use mdim_core::interval::parse_rational;
use mdim_core::moments::support_radius_sq;
use mdim_core::LatticeSpec;
use rug::Rational;

/// Matching measures of graphs and lattices, and certified monomer-dimer free energies.
#[derive(Parser, Debug)]
#[command(name = "mdim", version)]
struct Cli {
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Working precision of the certified arithmetic, in bits.
    #[arg(long, global = true, default_value_t = mdim_core::interval::DEFAULT_PRECISION)]
    precision_bits: u32,
    /// Maximum number of expanded self-avoiding-walk tree nodes.
    #[arg(long, global = true)]
    node_budget: Option<u64>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct MomentSource {
    /// Moments JSON file (as written by `mdim moments`).
    #[arg(long, conflicts_with = "mayer")]
    moments: Option<PathBuf>,
    /// Mayer-series CSV (`n,value` rows of a_n); needs --lattice for the support.
    #[arg(long)]
    mayer: Option<PathBuf>,
    /// The Mayer file holds d_n = a_n / 2.
    #[arg(long, requires = "mayer")]
    halved: bool,
    /// Lattice: z<d>, hex or bethe:<d>.
    #[arg(long)]
    lattice: Option<LatticeSpec>,
    /// Enumerate (or truncate) moments to this order.
    #[arg(long)]
    max_order: Option<usize>,
}

impl From<MomentSource> for MomentArgs {
    fn from(m: MomentSource) -> Self {
        MomentArgs { moments: m.moments, mayer: m.mayer, halved: m.halved, lattice: m.lattice, max_order: m.max_order }
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact moments of a lattice (or of a finite graph's matching measure).
    Moments {
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        lattice: Option<LatticeSpec>,
        /// Graph: JSON file or a family such as cycle:6, strip:10x30, torus:4x4.
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        max_order: usize,
    },
    /// Matching counts, moments, roots and exact thermodynamics of a finite graph.
    Finite {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        /// Isolate the roots to width 2^-BITS.
        #[arg(long)]
        roots: Option<u32>,
    },
    /// Certified free energy, density, entropy and inverse activity.
    Thermo {
        #[command(flatten)]
        source: MomentSource,
        /// Finite graph instead of a moment sequence (exact arithmetic).
        #[arg(long, conflicts_with_all = ["moments", "mayer", "lattice"])]
        graph: Option<String>,
        #[arg(long, value_enum, default_value_t = Quantity::FreeEnergy)]
        quantity: Quantity,
        /// Activities (comma-separated decimals or fractions; default 1).
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        t: Vec<Rational>,
        /// Dimer densities.
        #[arg(long, value_delimiter = ',', value_parser = rational)]
        p: Vec<Rational>,
        /// Polynomial fit degree (default: largest even degree <= K).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Certified near-minimax polynomial fit of ½ln(1+tz²) or tz²/(1+tz²).
    Approx {
        #[arg(long)]
        target: Target,
        #[arg(long, default_value = "1", value_parser = rational)]
        t: Rational,
        /// Fit on [-2 sqrt(D-1), 2 sqrt(D-1)].
        #[arg(long, conflicts_with = "radius_sq", required_unless_present = "radius_sq")]
        radius_from_degree: Option<usize>,
        /// Fit on [-R, R] with R^2 given.
        #[arg(long, value_parser = rational)]
        radius_sq: Option<Rational>,
        #[arg(long)]
        degree: usize,
        /// Write the fit JSON here and print a summary.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Density profiles as two-column `.dat` rows.
    Density {
        #[arg(long, value_enum)]
        mode: DensityMode,
        #[command(flatten)]
        source: MomentSource,
        /// Finite graph (kernel mode).
        #[arg(long)]
        graph: Option<String>,
        /// Kernel bandwidth (default: rule of thumb from the root spread).
        #[arg(long)]
        bandwidth: Option<f64>,
        /// Projection degree (default: the moment order).
        #[arg(long)]
        degree: Option<usize>,
        /// Projection interval [-R, R] (default: the support).
        #[arg(long, value_parser = rational)]
        radius_sq: Option<Rational>,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
    },
    /// Free energy and density at t = 1 per lattice, against the published table (TSV).
    Table {
        /// Comma-separated lattices, e.g. z2,z3,hex.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        lattices: Vec<String>,
        /// Directory of `<lattice>.json` moments or `<lattice>.csv` Mayer files.
        #[arg(long)]
        moments_dir: Option<PathBuf>,
        /// Mayer files hold d_n = a_n / 2.
        #[arg(long)]
        halved: bool,
        /// Enumerate moments to this order where no file is given.
        #[arg(long)]
        max_order: Option<usize>,
        /// Use the published honeycomb moment list for hex.
        #[arg(long)]
        reference_hex: bool,
        #[arg(long)]
        degree: Option<usize>,
        /// Exit nonzero when a row is unavailable or disagrees with the published value.
        #[arg(long)]
        strict: bool,
    },
    /// Run the invariant suites on the built-in corpus.
    Selftest,
}

fn run(cli: Cli) -> CliResult<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    }
    let g = Globals {
        threads: rayon::current_num_threads(),
        precision_bits: cli.precision_bits,
        node_budget: cli.node_budget.unwrap_or(Globals::default().node_budget),
        out: cli.out,
    };
    log::debug!("resolved globals: {g:?}");
    match cli.command {
        Command::Moments { lattice, graph, max_order } => commands::moments(&g, lattice, graph.as_deref(), max_order),
        Command::Finite { graph, max_order, roots } => commands::finite(&g, &graph, max_order, roots),
        Command::Thermo { source, graph, quantity, t, p, degree } => {
            commands::thermo(&g, &ThermoArgs { source: source.into(), graph, quantity, t, p, degree })
        }
        Command::Approx { target, t, radius_from_degree, radius_sq, degree, emit } => {
            let radius_sq = match (radius_from_degree, radius_sq) {
                (Some(d), _) => Rational::from(support_radius_sq(d)),
                (None, Some(r)) => r,
                (None, None) => unreachable!("clap requires one of them"),
            };
            commands::approx(&g, &ApproxArgs { target, t, radius_sq, degree, emit })
        }
        Command::Density { mode, source, graph, bandwidth, degree, radius_sq, grid } => commands::density(
            &g,
            &DensityArgs { mode, graph, source: source.into(), bandwidth, degree, radius_sq, grid },
        ),
        Command::Table { lattices, moments_dir, halved, max_order, reference_hex, degree, strict } => {
            let lattices = lattices
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<LatticeSpec>())
                .collect::<mdim_core::Result<Vec<_>>>()?;
            let src = TableSources { moments_dir, halved, max_order, reference_hex, degree };
            let job = JobSpec::new("table", lattices.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","), &g)
                .option("moments_dir", src.moments_dir.as_ref().map_or("-".into(), |p| p.display().to_string()))
                .option("halved", halved)
                .option("max_order", max_order.map_or("-".into(), |k| k.to_string()))
                .option("reference_hex", reference_hex)
                .option("degree", degree.map_or("max even".into(), |n| n.to_string()))
                .option("strict", strict);
            let rows = run_table(&lattices, &src, &g);
            mdim_cli::job::emit(&g, &to_tsv(&job, &rows))?;
            if strict {
                strict_status(&rows)
            } else {
                Ok(())
            }
        }
        Command::Selftest => {
            let results = run_selftest(&g.saw_config());
            let job = JobSpec::new("selftest", "built-in corpus", &g);
            mdim_cli::job::emit(&g, &(job.header() + &report(&results)))?;
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Invariant(format!("{failed} suite(s) failed")))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mdim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
