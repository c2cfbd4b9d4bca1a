use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dt4::commands::{self, VerifyRequest, EXIT_ERROR};
use dt4_core::verifier::{Target, UniquenessMode};

/// Exact equivariant vertex computations for Hilbert schemes of points on C^4.
#[derive(Parser)]
#[command(name = "dt4", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all partitions of a dimension and size (canonical keys, one per line).
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        size: u32,
        /// Print JSON partition objects instead of keys.
        #[arg(long)]
        json: bool,
    },
    /// Print w_π, L_π and optionally ω for a solid partition file.
    Weight {
        #[arg(long)]
        partition: PathBuf,
        /// Bundle character d1,d2,d3,d4; symbolic if omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        d: Option<Vec<i64>>,
        /// Also compute ω from the specialization and ω^c.
        #[arg(long)]
        omega: bool,
    },
    /// Check an identity; exit 0 on pass, 1 on failure, 2 on error.
    Verify(VerifyArgs),
    /// Print tables.
    Table {
        #[command(subcommand)]
        which: TableCommand,
    },
    /// Sign assignments.
    Signs {
        #[command(subcommand)]
        command: SignsCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Affine,
    Nekrasov,
    Counting,
    Specconj,
    Toric,
    Uniqueness,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Brute,
    Incremental,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: TargetArg,
    #[arg(long, default_value_t = 6)]
    max_order: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON-lines sign file overriding the positivity signs.
    #[arg(long)]
    signs: Option<PathBuf>,
    /// Chart file for the toric target.
    #[arg(long)]
    charts: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow orders beyond 6.
    #[arg(long)]
    unsafe_order: bool,
    /// Search mode for the uniqueness target.
    #[arg(long, value_enum, default_value_t = ModeArg::Incremental)]
    mode: ModeArg,
    /// Partition dimension for the counting target.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Counting target: use ω from the specialization up to size 6.
    #[arg(long)]
    dt4_omega: bool,
    /// Specconj target: also require ω = ω^c.
    #[arg(long)]
    compare_omega_c: bool,
}

#[derive(Subcommand)]
enum TableCommand {
    /// |ω| and ω^c for nine sample partitions of sizes 7 to 15.
    #[command(alias = "appendix-a")]
    Samples {
        #[arg(long)]
        csv: bool,
    },
    /// ω^c for every partition up to a size, as CSV.
    OmegaC {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        max_size: u32,
    },
}

#[derive(Subcommand)]
enum SignsCommand {
    /// Write the positivity signs for all partitions up to an order.
    Build {
        #[arg(long)]
        max_order: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        unsafe_order: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Enumerate { dim, size, json } => commands::enumerate(dim, size, json),
        Command::Weight {
            partition,
            d,
            omega,
        } => commands::weight(&partition, d.as_deref(), omega),
        Command::Verify(a) => commands::verify(&VerifyRequest {
            target: match a.target {
                TargetArg::Affine => Target::Affine,
                TargetArg::Nekrasov => Target::Nekrasov,
                TargetArg::Counting => Target::Counting,
                TargetArg::Specconj => Target::Specconj,
                TargetArg::Toric => Target::Toric,
                TargetArg::Uniqueness => Target::Uniqueness,
            },
            order: a.max_order,
            trials: a.trials,
            seed: a.seed,
            signs: a.signs,
            charts: a.charts,
            out: a.out,
            unsafe_order: a.unsafe_order,
            mode: match a.mode {
                ModeArg::Brute => UniquenessMode::Brute,
                ModeArg::Incremental => UniquenessMode::Incremental,
            },
            dim: a.dim,
            dt4_omega: a.dt4_omega,
            compare_omega_c: a.compare_omega_c,
        }),
        Command::Table { which } => match which {
            TableCommand::Samples { csv } => commands::table_samples(csv),
            TableCommand::OmegaC { dim, max_size } => commands::table_omega_c(dim, max_size),
        },
        Command::Signs {
            command:
                SignsCommand::Build {
                    max_order,
                    out,
                    unsafe_order,
                },
        } => commands::signs_build(max_order, &out, unsafe_order),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
