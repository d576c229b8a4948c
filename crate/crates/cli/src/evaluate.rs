use std::path::PathBuf;

use anyhow::{bail, Result};
use evoca_core::{
    default_t_max, evaluate_performance, parse_rule_list, IcDistribution, PerformanceReport,
    TaskKind, TaskSpec,
};
use serde::Serialize;

use crate::manifest::{read_file, sidecar, write_file, RunManifest};

#[derive(clap::Args, Serialize)]
pub struct Args {
    /// Rule-list file, one hex rule per line.
    #[arg(long)]
    rules: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "density,and,or")]
    tasks: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "149")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    /// Step budget for every size (default 2 * n_cells + 22).
    #[arg(long)]
    t_max: Option<usize>,
    /// unbiased, uniform-density, biased-and or biased-or.
    #[arg(long, default_value = "unbiased")]
    distribution: String,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let rules = parse_rule_list(&read_file(&args.rules)?)?;
    let tasks = args
        .tasks
        .iter()
        .map(|t| t.parse::<TaskKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let distribution: IcDistribution = args.distribution.parse()?;
    let mut specs = Vec::new();
    for &kind in &tasks {
        for &n in &args.sizes {
            specs.push(TaskSpec::new(kind, n, args.t_max.unwrap_or_else(|| default_t_max(n)))?);
        }
    }
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }

    let mut csv = String::from(PerformanceReport::CSV_HEADER);
    csv.push('\n');
    for &rule in &rules {
        for spec in &specs {
            let report = evaluate_performance(rule, spec, distribution, args.samples, args.seed)?;
            eprintln!(
                "{} {:<7} n={:<4} p_hat={:.4}",
                rule, spec.kind, spec.n_cells, report.p_hat
            );
            csv.push_str(&report.to_csv_row());
            csv.push('\n');
        }
    }
    write_file(&args.out, &csv)?;
    let mut manifest = RunManifest::new("evaluate", &args, Some(args.seed));
    manifest.output(&args.out);
    manifest.write(&sidecar(&args.out))?;
    Ok(())
}
