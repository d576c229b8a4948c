use evoca_core::evolve::{held_out_fitness, init_population};
use evoca_core::{reference, run_ga, Checkpoint, Ga, GaConfig, LogicalTask};

fn cfg(generations: usize, fresh: bool) -> GaConfig {
    GaConfig {
        population_size: 30,
        elite_count: 6,
        generations,
        n_cells: 59,
        t_max: 140,
        master_seed: 5,
        seed_rules: reference::density_seed_rules(),
        fresh_ics_per_generation: fresh,
        ..GaConfig::default()
    }
}

#[test]
fn elitism_under_fixed_sample() {
    let (_, records) = run_ga(cfg(12, false)).unwrap();
    for w in records.windows(2) {
        assert!(w[1].best_fitness >= w[0].best_fitness, "{} -> {}", w[0].best_fitness, w[1].best_fitness);
        assert_eq!(w[0].ic_seed, w[1].ic_seed);
    }
}

#[test]
fn identical_config_identical_records() {
    let a = run_ga(cfg(5, true)).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(|| run_ga(cfg(5, true)).unwrap());
    assert_eq!(a, b);
    let lines: Vec<String> = a.1.iter().map(|r| r.log_line()).collect();
    assert_eq!(lines.len(), 5);
}

#[test]
fn seeds_are_kept_in_initial_population() {
    let pop = init_population(&cfg(0, true)).unwrap();
    assert_eq!(&pop[..4], &reference::density_seed_rules()[..]);
    assert_eq!(pop.len(), 30);
}

#[test]
fn resuming_from_checkpoint_reproduces_the_run() {
    let (full_pop, full) = run_ga(cfg(8, true)).unwrap();

    let mut ga = Ga::new(cfg(8, true)).unwrap();
    let mut records = Vec::new();
    for _ in 0..3 {
        records.push(ga.step().unwrap());
    }
    let text = ga.checkpoint().to_text();
    drop(ga);

    let mut resumed = Ga::resume(cfg(8, true), Checkpoint::parse(&text).unwrap()).unwrap();
    while !resumed.is_finished() {
        records.push(resumed.step().unwrap());
    }
    assert_eq!(records, full);
    assert_eq!(resumed.population(), &full_pop[..]);
}

#[test]
fn resume_rejects_mismatched_checkpoint() {
    let ga = Ga::new(cfg(2, true)).unwrap();
    let mut cp = ga.checkpoint();
    cp.master_seed += 1;
    assert!(Ga::resume(cfg(2, true), cp).is_err());
}

#[test]
fn held_out_is_deterministic_and_bounded() {
    let das = reference::density_seed_rules()[1];
    let a = held_out_fitness(das, LogicalTask::And, 59, 140, 1, 3).unwrap();
    assert_eq!(a, held_out_fitness(das, LogicalTask::And, 59, 140, 1, 3).unwrap());
    assert!((0.0..=1.0).contains(&a));
    assert!(held_out_fitness(das, LogicalTask::And, 59, 140, 1, 0).is_err());
}
