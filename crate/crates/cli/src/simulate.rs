use std::path::PathBuf;

use anyhow::{bail, Result};
use evoca_core::{default_t_max, engine, run_full, Bitmap, RuleTable};
use serde::Serialize;

use crate::ic::IcSpec;
use crate::manifest::{sidecar, write_file, RunManifest};

#[derive(clap::Args, Serialize)]
pub struct Args {
    /// Rule as 32 hex digits.
    #[arg(long)]
    rule: String,
    #[arg(long)]
    n_cells: usize,
    /// Steps to run (default 2 * n_cells + 22).
    #[arg(long)]
    t_max: Option<usize>,
    /// all-on, all-off, random, density:<d> or bits:<cells>.
    #[arg(long)]
    ic: String,
    /// Required when the IC is random.
    #[arg(long)]
    seed: Option<u64>,
    /// Stop at the first uniform fixed point instead of running all steps.
    #[arg(long)]
    halt_early: bool,
    /// PBM output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional text grid of 0/1 rows.
    #[arg(long)]
    text: Option<PathBuf>,
}

pub fn run(args: Args) -> Result<()> {
    let rule = RuleTable::parse_hex(&args.rule)?;
    let ic_spec: IcSpec = args.ic.parse()?;
    let initial = ic_spec.build(args.n_cells, args.seed)?;
    let t_max = args.t_max.unwrap_or_else(|| default_t_max(args.n_cells));
    if t_max == 0 {
        bail!("--t-max must be at least 1");
    }
    let trajectory = if args.halt_early {
        engine::run(rule, &initial, t_max)
    } else {
        run_full(rule, &initial, t_max)
    };

    let mut manifest = RunManifest::new("simulate", &args, args.seed);
    write_file(&args.out, &Bitmap::from_lattices(&trajectory.states)?.to_pbm())?;
    manifest.output(&args.out);
    if let Some(text) = &args.text {
        let grid: String = trajectory.states.iter().map(|s| format!("{s}\n")).collect();
        write_file(text, &grid)?;
        manifest.output(text);
    }
    manifest.write(&sidecar(&args.out))?;

    let last = trajectory.last();
    println!(
        "{} rows; final density {:.3}{}",
        trajectory.rows(),
        last.density(),
        match last.uniform_value() {
            Some(true) => " (all ON)",
            Some(false) => " (all OFF)",
            None => "",
        }
    );
    Ok(())
}
