//! Evolved radius-3 binary cellular automata.
//!
//! - [`rule`]: rule tables and their hex form
//! - [`lattice`], [`engine`]: packed cyclic lattices and the update kernel
//! - [`tasks`]: density / AND / OR classification and performance estimates
//! - [`evolve`]: genetic search over rule tables
//! - [`particles`]: domain filtering of space-time diagrams
//! - [`pbm`]: plain PBM images
//! - [`reference`]: published performance values for known rules

pub mod engine;
pub mod error;
pub mod evolve;
pub mod lattice;
pub mod particles;
pub mod pbm;
pub mod reference;
pub mod rng;
pub mod rule;
pub mod tasks;

pub use engine::{default_t_max, run, run_full, step, CompiledRule, HaltReason, Settled, Trajectory};
pub use error::{Error, LineError, Result};
pub use evolve::{run_ga, Checkpoint, Ga, GaConfig, GenerationRecord};
pub use lattice::Lattice;
pub use particles::{census, label_sites, Census, DomainCatalog, FilteredDiagram, ParticleEvent};
pub use pbm::Bitmap;
pub use rng::StreamKey;
pub use rule::{parse_rule_list, RuleTable};
pub use tasks::{
    adjudicate, evaluate_performance, fitness, IcDistribution, LogicalTask, PerformanceReport,
    Target, TaskKind, TaskSpec,
};
