use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Polygon-valued symbolic data: aggregation, distances, clustering, density
/// and verification.
#[derive(Debug, Parser)]
#[command(name = "polysda", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Aggregate microdata (CSV) into a polygon table.
    Aggregate(AggregateArgs),
    /// Cluster the units of a polygon table.
    Cluster(ClusterArgs),
    /// Cumulative distance between two units.
    Distance(DistanceArgs),
    /// Empirical density of one variable's polygons at a point.
    Pdf(PdfArgs),
    /// Render one variable's polygons as SVG.
    Render(RenderArgs),
    /// Run the oracle suites and print one JSON report per line.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct AggregateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "class-col")]
    class_col: String,
    #[arg(long)]
    vertices: usize,
    /// Comma-separated variables; defaults to every non-class column.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long = "yes-token", default_value = "yes")]
    yes_token: String,
    #[arg(long = "no-token", default_value = "no")]
    no_token: String,
    #[arg(long = "radius-factor", default_value_t = polysda::aggregation::RADIUS_FACTOR, hide = true)]
    radius_factor: f64,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long = "max-passes", default_value_t = 100)]
    max_passes: usize,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct DistanceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "unit-a")]
    unit_a: String,
    #[arg(long = "unit-b")]
    unit_b: String,
}

#[derive(Debug, Args)]
struct PdfArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    variable: String,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, allow_negative_numbers = true)]
    y: f64,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    variable: String,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = ["metric", "prototype", "pdf", "optimum", "all"])]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the reports to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };

    let outcome = match cli.command {
        Command::Aggregate(a) => commands::aggregate(a),
        Command::Cluster(a) => commands::cluster(a),
        Command::Distance(a) => commands::distance(a),
        Command::Pdf(a) => commands::pdf(a),
        Command::Render(a) => commands::render(a),
        Command::Verify(a) => commands::verify(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DATA)
        }
    }
}
