use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use evoca_core::particles::{census_with_reach, label_rows, EventKind, DEFAULT_MIN_RUN};
use evoca_core::{default_t_max, run_full, Bitmap, DomainCatalog, ParticleEvent, RuleTable};
use serde::Serialize;

use crate::ic::IcSpec;
use crate::manifest::{read_file, sidecar, write_file, RunManifest};

#[derive(clap::Args, Serialize)]
pub struct Args {
    /// Space-time diagram as a PBM (rows are time steps).
    #[arg(long, conflicts_with_all = ["rule", "ic"])]
    diagram: Option<PathBuf>,
    /// Rule to simulate when no diagram is given.
    #[arg(long, requires = "ic")]
    rule: Option<String>,
    #[arg(long)]
    ic: Option<String>,
    #[arg(long)]
    n_cells: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Catalog file of `name p tau L row...` lines (default: 0, 1, checker).
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Minimum run of the default catalog.
    #[arg(long, default_value_t = DEFAULT_MIN_RUN)]
    min_run: usize,
    /// Cells within which boundary segments are linked between rows.
    #[arg(long, default_value_t = 3)]
    reach: usize,
    /// Rows excluded from the reported boundary fraction.
    #[arg(long, default_value_t = 10)]
    warmup: usize,
    /// Output prefix: writes <out>.grid.txt, <out>.boundary.pbm, <out>.events.csv.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let catalog = match &args.catalog {
        Some(path) => DomainCatalog::parse(&read_file(path)?)?,
        None => DomainCatalog::density_default(args.min_run),
    };
    let rows = match (&args.diagram, &args.rule, &args.ic) {
        (Some(path), _, _) => Bitmap::parse_pbm(&read_file(path)?)?.to_lattices()?,
        (None, Some(rule), Some(ic)) => {
            let rule = RuleTable::parse_hex(rule)?;
            let ic: IcSpec = ic.parse()?;
            let n = match (args.n_cells, &ic) {
                (Some(n), _) => n,
                (None, IcSpec::Bits(b)) => b.len(),
                (None, _) => bail!("--n-cells is required"),
            };
            let initial = ic.build(n, args.seed)?;
            run_full(rule, &initial, args.t_max.unwrap_or_else(|| default_t_max(n))).states
        }
        _ => bail!("give either --diagram or --rule with --ic"),
    };

    let filtered = label_rows(&rows, &catalog)?;
    let census = census_with_reach(&filtered, args.reach);

    let grid_path = with_suffix(&args.out, ".grid.txt");
    let mask_path = with_suffix(&args.out, ".boundary.pbm");
    let events_path = with_suffix(&args.out, ".events.csv");
    write_file(&grid_path, &filtered.to_text_grid())?;
    let mask: Vec<bool> = (0..filtered.rows()).flat_map(|t| filtered.boundary_mask(t)).collect();
    write_file(
        &mask_path,
        &Bitmap::new(filtered.width(), filtered.rows(), mask)?.to_pbm(),
    )?;
    let mut log = format!("{}\n", ParticleEvent::LOG_HEADER);
    for e in &census.events {
        log.push_str(&e.log_line());
        log.push('\n');
    }
    write_file(&events_path, &log)?;

    let mut manifest = RunManifest::new("filter", &args, args.seed);
    for p in [&grid_path, &mask_path, &events_path] {
        manifest.output(p);
    }
    manifest.write(&sidecar(&args.out))?;

    let count = |k: EventKind| census.events.iter().filter(|e| e.kind == k).count();
    println!(
        "boundary fraction after row {}: {:.4}; final segments {}; events: {} appear, {} annihilate, {} merge, {} split",
        args.warmup,
        filtered.boundary_fraction_from(args.warmup),
        census.counts.last().copied().unwrap_or(0),
        count(EventKind::Appear),
        count(EventKind::Annihilate),
        count(EventKind::Merge),
        count(EventKind::Split),
    );
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}
