use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use evoca_core::evolve::held_out_fitness;
use evoca_core::rule::format_rule_list;
use evoca_core::{
    default_t_max, parse_rule_list, reference, Checkpoint, Ga, GaConfig, GenerationRecord,
    LogicalTask, RuleTable,
};
use serde::Serialize;

use crate::manifest::{read_file, write_file, RunManifest};

const RUN_LOG: &str = "run_log.csv";
const CHECKPOINT: &str = "checkpoint.txt";
const FINAL_RULES: &str = "final_rules.txt";
const HELD_OUT: &str = "held_out.csv";
const MANIFEST: &str = "manifest.json";

#[derive(clap::Args, Serialize)]
pub struct Args {
    /// Logical task trained alongside density: and | or.
    #[arg(long, default_value = "and")]
    task: String,
    #[arg(long, default_value_t = 149)]
    n_cells: usize,
    /// Step budget (default 2 * n_cells + 22).
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long, default_value_t = 100)]
    population: usize,
    #[arg(long, default_value_t = 20)]
    elite: usize,
    /// Bit flips applied to every child.
    #[arg(long, default_value_t = 2)]
    mutations: usize,
    #[arg(long, default_value_t = 50)]
    generations: usize,
    #[arg(long)]
    seed: u64,
    /// Rule-list file of initial genomes.
    #[arg(long, conflicts_with = "reference_seeds")]
    seed_rules: Option<PathBuf>,
    /// Seed with the four published density rules.
    #[arg(long)]
    reference_seeds: bool,
    /// Reuse one IC sample for every generation.
    #[arg(long)]
    fixed_ics: bool,
    /// 100-IC batches in the held-out comparison; 0 skips it.
    #[arg(long, default_value_t = 20)]
    held_out_batches: usize,
    /// Seed of the held-out sample (default: --seed).
    #[arg(long)]
    held_out_seed: Option<u64>,
    /// Continue from the checkpoint in --out.
    #[arg(long)]
    resume: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: Args) -> Result<()> {
    let task: LogicalTask = args.task.parse()?;
    let seed_rules = match (&args.seed_rules, args.reference_seeds) {
        (Some(path), _) => parse_rule_list(&read_file(path)?)?,
        (None, true) => reference::density_seed_rules(),
        (None, false) => Vec::new(),
    };
    let cfg = GaConfig {
        population_size: args.population,
        elite_count: args.elite,
        mutations_per_child: args.mutations,
        generations: args.generations,
        task,
        n_cells: args.n_cells,
        t_max: args.t_max.unwrap_or_else(|| default_t_max(args.n_cells)),
        master_seed: args.seed,
        seed_rules: seed_rules.clone(),
        fresh_ics_per_generation: !args.fixed_ics,
    };
    cfg.validate().context("invalid GA configuration")?;

    let out = &args.out;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let log_path = out.join(RUN_LOG);
    let checkpoint_path = out.join(CHECKPOINT);

    let mut ga = if args.resume {
        let checkpoint = Checkpoint::parse(&read_file(&checkpoint_path)?)?;
        truncate_log(&log_path, checkpoint.next_generation)?;
        Ga::resume(cfg.clone(), checkpoint)?
    } else {
        write_file(&log_path, &format!("{}\n", GenerationRecord::LOG_HEADER))?;
        let ga = Ga::new(cfg.clone())?;
        write_file(&checkpoint_path, &ga.checkpoint().to_text())?;
        ga
    };

    while !ga.is_finished() {
        let record = ga.step()?;
        append_line(&log_path, &record.log_line())?;
        write_checkpoint(&checkpoint_path, &ga.checkpoint())?;
        eprintln!(
            "generation {:>4}  best {:.2}  mean {:.3}  {}",
            record.index, record.best_fitness, record.mean_fitness, record.best
        );
    }

    let population = ga.population();
    write_file(&out.join(FINAL_RULES), &format_rule_list(population))?;

    let mut manifest = RunManifest::new("evolve", &args, Some(args.seed));
    for name in [RUN_LOG, CHECKPOINT, FINAL_RULES] {
        manifest.output(&out.join(name));
    }
    if args.held_out_batches > 0 {
        let held_seed = args.held_out_seed.unwrap_or(args.seed);
        let score = |rule: RuleTable| {
            held_out_fitness(rule, task, cfg.n_cells, cfg.t_max, held_seed, args.held_out_batches)
        };
        let mut csv = String::from("role,rule_hex,held_out_fitness\n");
        let mut best_seed = None::<f64>;
        for &rule in &seed_rules {
            let f = score(rule)?;
            best_seed = Some(best_seed.map_or(f, |b| b.max(f)));
            csv.push_str(&format!("seed,{rule},{f:.6}\n"));
        }
        // the final population leads with the last generation's elites
        let mut best_final = f64::MIN;
        for &rule in &population[..cfg.elite_count] {
            let f = score(rule)?;
            best_final = best_final.max(f);
            csv.push_str(&format!("final,{rule},{f:.6}\n"));
        }
        write_file(&out.join(HELD_OUT), &csv)?;
        manifest.output(&out.join(HELD_OUT));
        match best_seed {
            Some(s) => println!("held-out fitness: best seed {s:.4}, best final {best_final:.4}"),
            None => println!("held-out fitness: best final {best_final:.4}"),
        }
    }
    manifest.write(&out.join(MANIFEST))?;
    Ok(())
}

fn append_line(path: &Path, line: &str) -> Result<()> {
    let mut f = OpenOptions::new()
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    writeln!(f, "{line}")?;
    Ok(())
}

fn write_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    write_file(&tmp, &checkpoint.to_text())?;
    std::fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))
}

/// Drops log entries at or past `next_generation`, which a resumed run will
/// write again.
fn truncate_log(path: &Path, next_generation: usize) -> Result<()> {
    let text = read_file(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == GenerationRecord::LOG_HEADER => {}
        _ => bail!("{} is not a run log", path.display()),
    }
    let mut kept = format!("{}\n", GenerationRecord::LOG_HEADER);
    for line in lines {
        let g: usize = line
            .split(',')
            .next()
            .and_then(|g| g.parse().ok())
            .with_context(|| format!("bad run log line {line:?}"))?;
        if g < next_generation {
            kept.push_str(line);
            kept.push('\n');
        }
    }
    write_file(path, &kept)
}
