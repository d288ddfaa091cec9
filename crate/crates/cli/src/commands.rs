use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use log::info;

use polysda::aggregation::{aggregate_with_report, AggregateOptions};
use polysda::io::{self, BinaryTokens, ResultFile};
use polysda::oracle::suite::{self, Suite, SuiteConfig};
use polysda::polygon::{empirical_pdf, Point, PolygonSet};
use polysda::{unit_distance, ClusteringConfig};

use crate::{AggregateArgs, ClusterArgs, DistanceArgs, PdfArgs, RenderArgs, VerifyArgs, EXIT_DATA};

pub fn aggregate(args: AggregateArgs) -> Result<ExitCode> {
    let tokens = BinaryTokens { yes: args.yes_token, no: args.no_token };
    let (data, ingest) = io::read_microdata_csv(&args.input, &args.class_col, &tokens)?;
    let vars: Vec<String> = match args.vars {
        Some(v) => v,
        None => data.columns().iter().map(|c| c.name.clone()).collect(),
    };
    let var_refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let opts = AggregateOptions { vertex_count: args.vertices, radius_factor: args.radius_factor };
    let (table, report) = aggregate_with_report(&data, &var_refs, &opts)?;
    io::write_table(&args.output, &table)?;

    println!("read {} rows x {} columns from {}", ingest.rows, ingest.columns, args.input.display());
    if !ingest.binary_columns.is_empty() {
        println!("binary columns: {}", ingest.binary_columns.join(", "));
    }
    for (name, dropped) in report.dropped.iter().filter(|(_, d)| *d > 0) {
        println!("  {name}: {dropped} missing values dropped");
    }
    if !report.singletons.is_empty() {
        println!("{} class/variable pairs had a single observation (radius 0)", report.singletons.len());
    }
    println!(
        "wrote {} units x {} variables (L = {}) to {}",
        table.len(),
        table.variables().len(),
        table.vertex_count(),
        args.output.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn cluster(args: ClusterArgs) -> Result<ExitCode> {
    let table = io::read_table(&args.input)?;
    let cfg = ClusteringConfig { k: args.k, seed: args.seed, restarts: args.restarts, max_passes: args.max_passes };
    let result = polysda::cluster(&table, &cfg)?;
    let file = ResultFile::new(&table, &cfg, &result);
    io::write_result(&args.output, &file)?;

    println!(
        "k = {}, criterion = {}, passes = {}, best restart = {} of {}",
        cfg.k, result.criterion, result.passes, result.restart, cfg.restarts
    );
    if result.hit_max_passes {
        println!("warning: stopped at max passes ({}) before convergence", cfg.max_passes);
    }
    for (c, members) in result.partition.clusters().iter().enumerate() {
        let labels: Vec<&str> = members.iter().map(|&i| table.units()[i].label.as_str()).collect();
        println!("cluster {} ({}): {}", c + 1, labels.len(), labels.join(" "));
    }
    println!("wrote {}", args.output.display());
    Ok(ExitCode::SUCCESS)
}

pub fn distance(args: DistanceArgs) -> Result<ExitCode> {
    let table = io::read_table(&args.input)?;
    let a = table.unit(&args.unit_a)?;
    let b = table.unit(&args.unit_b)?;
    println!("{}", unit_distance(&a.polygons, &b.polygons)?);
    Ok(ExitCode::SUCCESS)
}

pub fn pdf(args: PdfArgs) -> Result<ExitCode> {
    let table = io::read_table(&args.input)?;
    let z = table.variable_index(&args.variable)?;
    let set = PolygonSet::new(table.units().iter().map(|u| u.polygons[z].clone()).collect())?;
    println!("{}", empirical_pdf(&set, Point::new(args.x, args.y))?);
    Ok(ExitCode::SUCCESS)
}

pub fn render(args: RenderArgs) -> Result<ExitCode> {
    let table = io::read_table(&args.input)?;
    let svg = polysda::svg::render_svg(&table, &args.variable)?;
    fs::write(&args.output, svg).with_context(|| format!("writing {}", args.output.display()))?;
    println!("wrote {}", args.output.display());
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let which: Suite = args.suite.parse()?;
    info!("running {which} suite with seed {}", args.seed);
    let reports = suite::run(which, &SuiteConfig::new(args.seed))?;
    let lines = io::reports_to_jsonl(&reports);
    print!("{lines}");
    if let Some(path) = &args.output {
        fs::write(path, &lines).with_context(|| format!("writing {}", path.display()))?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    eprintln!("{} reports, {} failed", reports.len(), failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_DATA) })
}
