use alcove_walks::asym::EndpointMode;
use alcove_walks::cli::{
    execute, parse_family, parse_k_spec, parse_m, parse_steps, CommandConfig, OutputFormat,
    RunConfig,
};
use alcove_walks::geometry::{parse_half, Point};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alcove-walks", about = "Counts random walks in alcoves of affine Weyl groups and on the m-circle by mutually verifying routes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Working precision in decimal digits
    #[arg(long, global = true, default_value_t = 64)]
    precision: u32,
    /// Output format
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Output path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct WalkArgs {
    /// Region family: a, b, c, d, or circle
    #[arg(long)]
    family: String,
    /// Step set: positive, standard, or diagonal
    #[arg(long)]
    steps: String,
    /// Dimension (number of particles)
    #[arg(long)]
    n: usize,
    /// Region size, integer or half-integer such as 5/2
    #[arg(long)]
    m: String,
    /// Start point, comma-separated (half-integers as 3/2)
    #[arg(long)]
    start: String,
    /// End point; omit for free-endpoint runs
    #[arg(long)]
    end: Option<String>,
    /// Step count: single value, list `2,4,8`, or inclusive range `0..10`
    #[arg(long, visible_alias = "k-range")]
    k: String,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts with the DP oracle cross-check
    Count {
        #[command(flatten)]
        walk: WalkArgs,
        /// DP frontier budget; 0 disables the oracle column
        #[arg(long, default_value_t = 10_000_000)]
        dp_budget: usize,
    },
    /// Exact counts against the closed-form asymptotics
    Converge {
        #[command(flatten)]
        walk: WalkArgs,
        /// Sum over all end points instead of a fixed one
        #[arg(long)]
        free: bool,
    },
    /// Determinant, character, q-series and branching identity suites
    Identities {
        /// Suite selection: all, b, c, or branching
        #[arg(long, default_value = "all", value_parser = ["all", "b", "c", "branching"])]
        suite: String,
        /// Seed for the generic evaluation points
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Saddle-point coefficient approximation against the exact convolution
    Saddle {
        /// Root-of-unity order
        #[arg(long)]
        m: i64,
        /// Exponent subset, comma-separated, e.g. 0,1,2
        #[arg(long)]
        rs: String,
        /// Offset d, integer or half-integer
        #[arg(long, default_value = "0")]
        d: String,
        /// Step count specification
        #[arg(long, visible_alias = "k-range")]
        k: String,
    },
}

fn build_config(cli: Cli) -> Result<RunConfig, alcove_walks::Error> {
    let format = if cli.format == "csv" { OutputFormat::Csv } else { OutputFormat::Json };
    let command = match cli.command {
        Command::Count { walk, dp_budget } => CommandConfig::Count {
            family: parse_family(&walk.family)?,
            steps: parse_steps(&walk.steps)?,
            n: walk.n,
            m2: parse_m(&walk.m)?,
            start: Point::parse(&walk.start)?,
            end: walk.end.as_deref().map(Point::parse).transpose()?,
            ks: parse_k_spec(&walk.k)?,
            dp_budget,
        },
        Command::Converge { walk, free } => CommandConfig::Converge {
            family: parse_family(&walk.family)?,
            steps: parse_steps(&walk.steps)?,
            n: walk.n,
            m2: parse_m(&walk.m)?,
            start: Point::parse(&walk.start)?,
            end: walk.end.as_deref().map(Point::parse).transpose()?,
            mode: if free { EndpointMode::Free } else { EndpointMode::Fixed },
            ks: parse_k_spec(&walk.k)?,
        },
        Command::Identities { suite, seed } => CommandConfig::Identities { suite, seed },
        Command::Saddle { m, rs, d, k } => CommandConfig::Saddle {
            m,
            rs: rs
                .split(',')
                .map(|s| s.trim().parse::<i64>().map_err(|_| alcove_walks::Error::invalid("bad rs")))
                .collect::<Result<Vec<_>, _>>()?,
            d2: parse_half(&d)?,
            ks: parse_k_spec(&k)?,
        },
    };
    Ok(RunConfig { command, precision_digits: cli.precision, format, out: cli.out })
}

fn main() {
    let cli = Cli::parse();
    match build_config(cli) {
        Ok(config) => std::process::exit(execute(&config)),
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            std::process::exit(2);
        }
    }
}
