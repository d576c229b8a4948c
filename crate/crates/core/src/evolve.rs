//! Genetic search over rule tables.
//!
//! Each generation every genome is scored with [`tasks::fitness`] on one
//! shared IC sample; the top `elite_count` genomes pass through unchanged and
//! the rest of the population is refilled with single-point crossovers of
//! random elite pairs, each followed by exactly `mutations_per_child` bit
//! flips.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::engine::{default_t_max, CompiledRule};
use crate::error::{domain, Error, LineError, Result};
use crate::rng::{labels, StreamKey};
use crate::rule::{format_rule_list, parse_rule_list, RuleTable, TABLE_SIZE};
use crate::tasks::{self, LogicalTask, FITNESS_DENSITY_ICS, FITNESS_LOGICAL_ICS};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub elite_count: usize,
    pub mutations_per_child: usize,
    pub generations: usize,
    pub task: LogicalTask,
    pub n_cells: usize,
    pub t_max: usize,
    pub master_seed: u64,
    pub seed_rules: Vec<RuleTable>,
    /// Draw a new IC sample every generation instead of reusing one.
    pub fresh_ics_per_generation: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            elite_count: 20,
            mutations_per_child: 2,
            generations: 50,
            task: LogicalTask::And,
            n_cells: 149,
            t_max: default_t_max(149),
            master_seed: 0,
            seed_rules: Vec::new(),
            fresh_ics_per_generation: true,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(domain("population_size must be positive"));
        }
        if self.elite_count == 0 || self.elite_count >= self.population_size {
            return Err(domain(format!(
                "elite_count must be in 1..{}, got {}",
                self.population_size, self.elite_count
            )));
        }
        if self.mutations_per_child > TABLE_SIZE {
            return Err(domain(format!(
                "mutations_per_child must be at most {TABLE_SIZE}, got {}",
                self.mutations_per_child
            )));
        }
        if self.seed_rules.len() > self.population_size {
            return Err(domain(format!(
                "{} seed rules do not fit a population of {}",
                self.seed_rules.len(),
                self.population_size
            )));
        }
        if self.n_cells % 2 == 0 || self.n_cells < 3 {
            return Err(domain(format!("n_cells must be odd and at least 3, got {}", self.n_cells)));
        }
        if self.t_max == 0 {
            return Err(domain("t_max must be at least 1"));
        }
        Ok(())
    }

    /// Seed of the fitness IC sample used in generation `g`.
    pub fn sample_seed(&self, generation: usize) -> u64 {
        let key = StreamKey::new(self.master_seed).child(labels::GA_SAMPLE);
        let g = if self.fresh_ics_per_generation { generation as u64 } else { 0 };
        key.child(g).value()
    }
}

/// Single-point crossover: outputs `0..point` from `a`, the rest from `b`.
pub fn crossover(a: RuleTable, b: RuleTable, point: usize) -> Result<RuleTable> {
    if !(1..TABLE_SIZE).contains(&point) {
        return Err(domain(format!("crossover point must be in 1..=127, got {point}")));
    }
    let low = (1u128 << point) - 1;
    Ok(RuleTable::from_bits((a.bits() & low) | (b.bits() & !low)))
}

/// Flips exactly `flips` distinct, uniformly chosen table entries.
pub fn mutate<R: Rng + ?Sized>(rule: RuleTable, flips: usize, rng: &mut R) -> Result<RuleTable> {
    Ok(mutate_traced(rule, flips, rng)?.0)
}

fn mutate_traced<R: Rng + ?Sized>(
    rule: RuleTable,
    flips: usize,
    rng: &mut R,
) -> Result<(RuleTable, Vec<usize>)> {
    if flips > TABLE_SIZE {
        return Err(domain(format!("cannot flip {flips} of {TABLE_SIZE} entries")));
    }
    let positions = index::sample(rng, TABLE_SIZE, flips).into_vec();
    let mask = positions.iter().fold(0u128, |m, &p| m | 1 << p);
    Ok((RuleTable::from_bits(rule.bits() ^ mask), positions))
}

/// How a child was produced from the elite list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lineage {
    pub parents: (usize, usize),
    pub point: usize,
    pub flips: Vec<usize>,
}

/// Crossover of a uniformly chosen elite pair (distinct when there are two
/// or more elites) followed by `flips` mutations.
pub fn breed_child<R: Rng + ?Sized>(
    elites: &[RuleTable],
    flips: usize,
    rng: &mut R,
) -> Result<(RuleTable, Lineage)> {
    if elites.is_empty() {
        return Err(domain("no elites to breed from"));
    }
    let a = rng.random_range(0..elites.len());
    let b = if elites.len() > 1 {
        let j = rng.random_range(0..elites.len() - 1);
        if j >= a {
            j + 1
        } else {
            j
        }
    } else {
        a
    };
    let point = rng.random_range(1..TABLE_SIZE);
    let crossed = crossover(elites[a], elites[b], point)?;
    let (child, flipped) = mutate_traced(crossed, flips, rng)?;
    Ok((
        child,
        Lineage {
            parents: (a, b),
            point,
            flips: flipped,
        },
    ))
}

/// Seed rules first, then mutants of the seeds taken round-robin; random
/// genomes when no seeds are given.
pub fn init_population(cfg: &GaConfig) -> Result<Vec<RuleTable>> {
    cfg.validate()?;
    let key = StreamKey::new(cfg.master_seed).child(labels::GA_INIT);
    let seeds = &cfg.seed_rules;
    (0..cfg.population_size)
        .map(|i| {
            let mut rng = key.rng(i as u64);
            if seeds.is_empty() {
                Ok(RuleTable::from_bits(rng.random()))
            } else if i < seeds.len() {
                Ok(seeds[i])
            } else {
                mutate(seeds[(i - seeds.len()) % seeds.len()], cfg.mutations_per_child, &mut rng)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub index: usize,
    /// Fitness of each genome, in population order.
    pub fitness: Vec<f64>,
    pub best: RuleTable,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub ic_seed: u64,
}

impl GenerationRecord {
    pub const LOG_HEADER: &'static str = "generation,best_hex,best_fitness,mean_fitness,ic_seed";

    pub fn log_line(&self) -> String {
        format!(
            "{},{},{:.4},{:.6},{}",
            self.index,
            self.best.to_hex(),
            self.best_fitness,
            self.mean_fitness,
            self.ic_seed
        )
    }
}

/// Population and position of a run, enough to continue it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub next_generation: usize,
    pub master_seed: u64,
    pub population: Vec<RuleTable>,
}

impl Checkpoint {
    /// Rule-list text with the run position in leading comments.
    pub fn to_text(&self) -> String {
        format!(
            "# next_generation {}\n# master_seed {}\n{}",
            self.next_generation,
            self.master_seed,
            format_rule_list(&self.population)
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut next_generation = None;
        let mut master_seed = None;
        for (i, line) in text.lines().enumerate() {
            let Some(rest) = line.trim().strip_prefix('#') else {
                continue;
            };
            let mut parts = rest.split_whitespace();
            let (Some(name), Some(value)) = (parts.next(), parts.next()) else {
                continue;
            };
            let slot = match name {
                "next_generation" => &mut next_generation,
                "master_seed" => &mut master_seed,
                _ => continue,
            };
            *slot = Some(value.parse::<u64>().map_err(|e| Error::Malformed {
                what: "checkpoint",
                detail: LineError {
                    line: i + 1,
                    message: format!("{name}: {e}"),
                },
            })?);
        }
        let missing = |name: &str| Error::Malformed {
            what: "checkpoint",
            detail: LineError {
                line: 0,
                message: format!("missing {name}"),
            },
        };
        Ok(Checkpoint {
            next_generation: next_generation.ok_or_else(|| missing("next_generation"))? as usize,
            master_seed: master_seed.ok_or_else(|| missing("master_seed"))?,
            population: parse_rule_list(text)?,
        })
    }
}

/// A GA run that can be advanced one generation at a time.
pub struct Ga {
    cfg: GaConfig,
    population: Vec<RuleTable>,
    next_generation: usize,
}

impl Ga {
    pub fn new(cfg: GaConfig) -> Result<Self> {
        let population = init_population(&cfg)?;
        Ok(Ga {
            cfg,
            population,
            next_generation: 0,
        })
    }

    pub fn resume(cfg: GaConfig, checkpoint: Checkpoint) -> Result<Self> {
        cfg.validate()?;
        if checkpoint.master_seed != cfg.master_seed {
            return Err(domain(format!(
                "checkpoint was written with seed {}, config has {}",
                checkpoint.master_seed, cfg.master_seed
            )));
        }
        if checkpoint.population.len() != cfg.population_size {
            return Err(domain(format!(
                "checkpoint holds {} genomes, config expects {}",
                checkpoint.population.len(),
                cfg.population_size
            )));
        }
        Ok(Ga {
            cfg,
            population: checkpoint.population,
            next_generation: checkpoint.next_generation,
        })
    }

    pub fn config(&self) -> &GaConfig {
        &self.cfg
    }

    pub fn population(&self) -> &[RuleTable] {
        &self.population
    }

    pub fn next_generation(&self) -> usize {
        self.next_generation
    }

    pub fn is_finished(&self) -> bool {
        self.next_generation >= self.cfg.generations
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            next_generation: self.next_generation,
            master_seed: self.cfg.master_seed,
            population: self.population.clone(),
        }
    }

    /// Scores the current population, then replaces it with the next one.
    pub fn step(&mut self) -> Result<GenerationRecord> {
        let cfg = &self.cfg;
        let g = self.next_generation;
        let ic_seed = cfg.sample_seed(g);
        let total = (FITNESS_DENSITY_ICS + FITNESS_LOGICAL_ICS) as f64;
        let fitness = self
            .population
            .par_iter()
            .map(|&rule| {
                let compiled = CompiledRule::new(rule);
                tasks::fitness_compiled(&compiled, cfg.task, cfg.n_cells, cfg.t_max, ic_seed)
                    .map(|c| c as f64 / total)
            })
            .collect::<Result<Vec<f64>>>()?;

        // rank by fitness, ties to the earlier slot
        let mut order: Vec<usize> = (0..self.population.len()).collect();
        order.sort_by(|&i, &j| fitness[j].total_cmp(&fitness[i]).then(i.cmp(&j)));

        let best = self.population[order[0]];
        let record = GenerationRecord {
            index: g,
            best,
            best_fitness: fitness[order[0]],
            mean_fitness: fitness.iter().sum::<f64>() / fitness.len() as f64,
            fitness,
            ic_seed,
        };

        let elites: Vec<RuleTable> = order[..cfg.elite_count]
            .iter()
            .map(|&i| self.population[i])
            .collect();
        let breed_key = StreamKey::new(cfg.master_seed)
            .child(labels::GA_BREED)
            .child(g as u64);
        let mut next = elites.clone();
        for slot in cfg.elite_count..cfg.population_size {
            let mut rng = breed_key.rng(slot as u64);
            next.push(breed_child(&elites, cfg.mutations_per_child, &mut rng)?.0);
        }
        self.population = next;
        self.next_generation += 1;
        Ok(record)
    }
}

/// Runs every configured generation.
pub fn run_ga(cfg: GaConfig) -> Result<(Vec<RuleTable>, Vec<GenerationRecord>)> {
    let mut ga = Ga::new(cfg)?;
    let mut records = Vec::new();
    while !ga.is_finished() {
        records.push(ga.step()?);
    }
    Ok((ga.population, records))
}

/// Mean training-style fitness over `batches` independent 100-IC samples
/// derived from `seed`, none of which the GA trains on.
pub fn held_out_fitness(
    rule: RuleTable,
    task: LogicalTask,
    n_cells: usize,
    t_max: usize,
    seed: u64,
    batches: usize,
) -> Result<f64> {
    if batches == 0 {
        return Err(domain("held-out evaluation needs at least one batch"));
    }
    let compiled = CompiledRule::new(rule);
    let key = StreamKey::new(seed).child(labels::HELD_OUT);
    let correct = (0..batches as u64)
        .into_par_iter()
        .map(|b| tasks::fitness_compiled(&compiled, task, n_cells, t_max, key.child(b).value()))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(correct as f64 / (batches * (FITNESS_DENSITY_ICS + FITNESS_LOGICAL_ICS)) as f64)
}
