//! Classification tasks, initial-configuration generators and Monte-Carlo
//! performance estimates.
//!
//! Density: converge to all-ON iff the IC has a strict majority of ON cells.
//! AND / OR: the lattice minus its center cell splits into two halves, each
//! read as one bit by majority; converge to the uniform state encoding the
//! logical function of the two bits.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::engine::CompiledRule;
use crate::error::{domain, Error, LineError, Result};
use crate::lattice::Lattice;
use crate::rng::{labels, StreamKey};
use crate::rule::RuleTable;

/// Density-task ICs in one fitness evaluation.
pub const FITNESS_DENSITY_ICS: usize = 50;
/// Logical-task ICs in one fitness evaluation.
pub const FITNESS_LOGICAL_ICS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskKind {
    Density,
    And,
    Or,
}

impl TaskKind {
    pub const ALL: [TaskKind; 3] = [TaskKind::Density, TaskKind::And, TaskKind::Or];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Density => "density",
            TaskKind::And => "and",
            TaskKind::Or => "or",
        }
    }

    pub fn logical(self) -> Option<LogicalTask> {
        match self {
            TaskKind::Density => None,
            TaskKind::And => Some(LogicalTask::And),
            TaskKind::Or => Some(LogicalTask::Or),
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "density" | "dens" => Ok(TaskKind::Density),
            "and" => Ok(TaskKind::And),
            "or" => Ok(TaskKind::Or),
            other => Err(domain(format!("unknown task {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalTask {
    And,
    Or,
}

impl LogicalTask {
    pub fn kind(self) -> TaskKind {
        match self {
            LogicalTask::And => TaskKind::And,
            LogicalTask::Or => TaskKind::Or,
        }
    }

    /// The one bit pattern whose answer differs from all others.
    pub fn exception(self) -> (bool, bool) {
        match self {
            LogicalTask::And => (true, true),
            LogicalTask::Or => (false, false),
        }
    }
}

impl fmt::Display for LogicalTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind().fmt(f)
    }
}

impl FromStr for LogicalTask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TaskKind::from_str(s)?
            .logical()
            .ok_or_else(|| domain("expected a logical task (and|or)"))
    }
}

/// A task at a lattice size and step budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TaskSpec {
    pub kind: TaskKind,
    pub n_cells: usize,
    pub t_max: usize,
}

impl TaskSpec {
    pub fn new(kind: TaskKind, n_cells: usize, t_max: usize) -> Result<Self> {
        if n_cells % 2 == 0 {
            return Err(domain(format!("task lattices must be odd, got {n_cells}")));
        }
        if kind != TaskKind::Density && n_cells < 3 {
            return Err(domain("logical tasks need at least 3 cells"));
        }
        if t_max == 0 {
            return Err(domain("t_max must be at least 1"));
        }
        Ok(TaskSpec {
            kind,
            n_cells,
            t_max,
        })
    }

    /// Task with the default step budget for its size.
    pub fn with_default_budget(kind: TaskKind, n_cells: usize) -> Result<Self> {
        TaskSpec::new(kind, n_cells, crate::engine::default_t_max(n_cells))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    AllOn,
    AllOff,
}

impl Target {
    fn from_on(on: bool) -> Self {
        if on {
            Target::AllOn
        } else {
            Target::AllOff
        }
    }

    fn value(self) -> bool {
        self == Target::AllOn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IcDistribution {
    /// Cells i.i.d. ON with probability 1/2.
    Unbiased,
    /// ON-count uniform over `0..=n`, positions uniform.
    UniformDensity,
    /// Exception bit pattern half the time, the other three patterns share
    /// the rest.
    LogicalBiased(LogicalTask),
}

impl IcDistribution {
    pub fn name(self) -> &'static str {
        match self {
            IcDistribution::Unbiased => "unbiased",
            IcDistribution::UniformDensity => "uniform-density",
            IcDistribution::LogicalBiased(LogicalTask::And) => "biased-and",
            IcDistribution::LogicalBiased(LogicalTask::Or) => "biased-or",
        }
    }

    pub fn generate<R: Rng + ?Sized>(self, n_cells: usize, rng: &mut R) -> Result<Lattice> {
        match self {
            IcDistribution::Unbiased => Ok(gen_unbiased(n_cells, rng)),
            IcDistribution::UniformDensity => Ok(gen_uniform_density(n_cells, rng)),
            IcDistribution::LogicalBiased(task) => gen_logical_biased(task, n_cells, rng),
        }
    }
}

impl fmt::Display for IcDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IcDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "unbiased" => Ok(IcDistribution::Unbiased),
            "uniform-density" => Ok(IcDistribution::UniformDensity),
            "biased-and" => Ok(IcDistribution::LogicalBiased(LogicalTask::And)),
            "biased-or" => Ok(IcDistribution::LogicalBiased(LogicalTask::Or)),
            other => Err(domain(format!("unknown IC distribution {other:?}"))),
        }
    }
}

/// Strict majority of `on` among `len` cells; exact ties read as OFF.
pub fn majority_count(on: usize, len: usize) -> Result<bool> {
    if len == 0 {
        return Err(domain("majority of an empty sequence"));
    }
    Ok(2 * on > len)
}

pub fn majority(bits: &[bool]) -> Result<bool> {
    majority_count(bits.iter().filter(|&&b| b).count(), bits.len())
}

/// Cell ranges of the two logical bits; the center cell is in neither.
pub fn halves(n_cells: usize) -> (Range<usize>, Range<usize>) {
    let h = (n_cells - 1) / 2;
    (0..h, h + 1..n_cells)
}

/// Majority bit of each half of an odd lattice.
pub fn extract_bits(lattice: &Lattice, task: &TaskSpec) -> Result<(bool, bool)> {
    if task.kind == TaskKind::Density {
        return Err(domain("bit extraction needs a logical task"));
    }
    if lattice.len() != task.n_cells {
        return Err(domain(format!(
            "lattice has {} cells, task expects {}",
            lattice.len(),
            task.n_cells
        )));
    }
    lattice_bits(lattice)
}

fn lattice_bits(lattice: &Lattice) -> Result<(bool, bool)> {
    let n = lattice.len();
    if n % 2 == 0 || n < 3 {
        return Err(domain(format!("logical bits need an odd lattice of 3+ cells, got {n}")));
    }
    let (a, b) = halves(n);
    let len = a.len();
    Ok((
        majority_count(lattice.count_ones_in(a.start, a.end), len)?,
        majority_count(lattice.count_ones_in(b.start, b.end), len)?,
    ))
}

/// The uniform state `ic` should converge to under `kind`.
pub fn target_for(kind: TaskKind, ic: &Lattice) -> Result<Target> {
    Ok(match kind {
        TaskKind::Density => Target::from_on(majority_count(ic.count_ones(), ic.len())?),
        TaskKind::And => {
            let (x, y) = lattice_bits(ic)?;
            Target::from_on(x && y)
        }
        TaskKind::Or => {
            let (x, y) = lattice_bits(ic)?;
            Target::from_on(x || y)
        }
    })
}

pub fn target_state(task: &TaskSpec, ic: &Lattice) -> Result<Target> {
    check_size(task, ic)?;
    target_for(task.kind, ic)
}

fn check_size(task: &TaskSpec, ic: &Lattice) -> Result<()> {
    if ic.len() != task.n_cells {
        return Err(domain(format!(
            "lattice has {} cells, task expects {}",
            ic.len(),
            task.n_cells
        )));
    }
    Ok(())
}

/// Runs `rule` on `ic` and reports whether it reached the task's target.
pub fn adjudicate(rule: RuleTable, ic: &Lattice, task: &TaskSpec) -> Result<bool> {
    adjudicate_compiled(&CompiledRule::new(rule), ic, task)
}

pub fn adjudicate_compiled(rule: &CompiledRule, ic: &Lattice, task: &TaskSpec) -> Result<bool> {
    let target = target_state(task, ic)?;
    // an early halt is always at a uniform fixed point; otherwise the state
    // at t_max has to be the target itself
    let settled = rule.settle(ic, task.t_max);
    Ok(settled.state.uniform_value() == Some(target.value()))
}

pub fn gen_unbiased<R: Rng + ?Sized>(n_cells: usize, rng: &mut R) -> Lattice {
    Lattice::random(n_cells, rng)
}

pub fn gen_uniform_density<R: Rng + ?Sized>(n_cells: usize, rng: &mut R) -> Lattice {
    let k = rng.random_range(0..=n_cells);
    Lattice::random_with_count(n_cells, k, rng)
}

pub fn gen_logical_biased<R: Rng + ?Sized>(
    task: LogicalTask,
    n_cells: usize,
    rng: &mut R,
) -> Result<Lattice> {
    if n_cells % 2 == 0 || n_cells < 3 {
        return Err(domain(format!(
            "biased logical ICs need an odd lattice of 3+ cells, got {n_cells}"
        )));
    }
    let exception = task.exception();
    let pattern = if rng.random_bool(0.5) {
        exception
    } else {
        let others: Vec<(bool, bool)> = [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .filter(|&p| p != exception)
            .collect();
        others[rng.random_range(0..others.len())]
    };

    let (first, second) = halves(n_cells);
    let mut lattice = Lattice::zeros(n_cells);
    fill_half(&mut lattice, first, pattern.0, rng);
    fill_half(&mut lattice, second, pattern.1, rng);
    lattice.set(n_cells / 2, rng.random_bool(0.5));
    Ok(lattice)
}

/// Fills `cells` with a strict ON (or OFF) majority whose density is drawn
/// uniformly from that side of 1/2.
fn fill_half<R: Rng + ?Sized>(lattice: &mut Lattice, cells: Range<usize>, on: bool, rng: &mut R) {
    let h = cells.len();
    let u: f64 = rng.random();
    let k = if on {
        let d = 1.0 - 0.5 * u;
        ((d * h as f64).ceil() as usize).clamp(h / 2 + 1, h)
    } else {
        let d = 0.5 * u;
        ((d * h as f64).floor() as usize).min((h - 1) / 2)
    };
    for i in index::sample(rng, h, k) {
        lattice.set(cells.start + i, true);
    }
}

/// Monte-Carlo estimate of a rule's success rate on a task.
#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceReport {
    pub rule: RuleTable,
    pub task: TaskSpec,
    pub distribution: IcDistribution,
    pub samples: u64,
    pub correct: u64,
    pub p_hat: f64,
    pub master_seed: u64,
}

impl PerformanceReport {
    pub const CSV_HEADER: &'static str =
        "rule_hex,task,n_cells,t_max,distribution,samples,correct,p_hat,master_seed";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{}",
            self.rule.to_hex(),
            self.task.kind,
            self.task.n_cells,
            self.task.t_max,
            self.distribution,
            self.samples,
            self.correct,
            self.p_hat,
            self.master_seed
        )
    }

    /// Parses one data row; `line` is used for error messages only.
    pub fn from_csv_row(row: &str, line: usize) -> Result<Self> {
        let bad = |message: String| Error::Malformed {
            what: "performance CSV",
            detail: LineError { line, message },
        };
        let fields: Vec<&str> = row.trim().split(',').collect();
        if fields.len() != 9 {
            return Err(bad(format!("expected 9 fields, found {}", fields.len())));
        }
        let num = |i: usize, name: &str| -> Result<u64> {
            fields[i]
                .trim()
                .parse::<u64>()
                .map_err(|e| bad(format!("{name}: {e}")))
        };
        let rule = RuleTable::parse_hex(fields[0].trim()).map_err(|e| bad(e.to_string()))?;
        let kind: TaskKind = fields[1].parse().map_err(|e: Error| bad(e.to_string()))?;
        let n_cells = num(2, "n_cells")? as usize;
        let t_max = num(3, "t_max")? as usize;
        let distribution: IcDistribution =
            fields[4].parse().map_err(|e: Error| bad(e.to_string()))?;
        let samples = num(5, "samples")?;
        let correct = num(6, "correct")?;
        let p_hat: f64 = fields[7]
            .trim()
            .parse()
            .map_err(|e| bad(format!("p_hat: {e}")))?;
        let master_seed = num(8, "master_seed")?;
        if correct > samples || !(0.0..=1.0).contains(&p_hat) {
            return Err(bad("inconsistent counts".into()));
        }
        let task = TaskSpec::new(kind, n_cells, t_max).map_err(|e| bad(e.to_string()))?;
        Ok(PerformanceReport {
            rule,
            task,
            distribution,
            samples,
            correct,
            p_hat,
            master_seed,
        })
    }
}

/// Fraction of `samples` ICs drawn from `dist` that `rule` classifies
/// correctly. IC `i` comes from its own substream of `master_seed`, so the
/// result does not depend on thread count or evaluation order.
pub fn evaluate_performance(
    rule: RuleTable,
    task: &TaskSpec,
    dist: IcDistribution,
    samples: u64,
    master_seed: u64,
) -> Result<PerformanceReport> {
    if samples == 0 {
        return Err(domain("samples must be at least 1"));
    }
    let compiled = CompiledRule::new(rule);
    let key = StreamKey::new(master_seed).child(labels::EVALUATE);
    let correct = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let ic = dist.generate(task.n_cells, &mut key.rng(i))?;
            Ok(adjudicate_compiled(&compiled, &ic, task)? as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(PerformanceReport {
        rule,
        task: *task,
        distribution: dist,
        samples,
        correct,
        p_hat: correct as f64 / samples as f64,
        master_seed,
    })
}

/// Training fitness: 50 uniform-density ICs judged on density plus 50
/// biased ICs judged on `logical`, as a fraction correct.
pub fn fitness(
    rule: RuleTable,
    logical: LogicalTask,
    n_cells: usize,
    t_max: usize,
    master_seed: u64,
) -> Result<f64> {
    Ok(fitness_compiled(&CompiledRule::new(rule), logical, n_cells, t_max, master_seed)? as f64
        / (FITNESS_DENSITY_ICS + FITNESS_LOGICAL_ICS) as f64)
}

/// Number of the 100 fitness ICs classified correctly.
pub fn fitness_compiled(
    rule: &CompiledRule,
    logical: LogicalTask,
    n_cells: usize,
    t_max: usize,
    master_seed: u64,
) -> Result<u32> {
    let density = TaskSpec::new(TaskKind::Density, n_cells, t_max)?;
    let logic = TaskSpec::new(logical.kind(), n_cells, t_max)?;
    let root = StreamKey::new(master_seed);
    let dkey = root.child(labels::FITNESS_DENSITY);
    let lkey = root.child(labels::FITNESS_LOGICAL);
    let mut correct = 0;
    for i in 0..FITNESS_DENSITY_ICS as u64 {
        let ic = gen_uniform_density(n_cells, &mut dkey.rng(i));
        correct += adjudicate_compiled(rule, &ic, &density)? as u32;
    }
    for i in 0..FITNESS_LOGICAL_ICS as u64 {
        let ic = gen_logical_biased(logical, n_cells, &mut lkey.rng(i))?;
        correct += adjudicate_compiled(rule, &ic, &logic)? as u32;
    }
    Ok(correct)
}
