use evoca_core::particles::{census, label_rows, Domain, EventKind, Label, Segment};
use evoca_core::{label_sites, run, DomainCatalog, FilteredDiagram, Lattice, RuleTable, StreamKey};
use proptest::prelude::*;

const DAS: &str = "000F730F001FFF0F000FFF0F001FFF1F";

/// A block of ON cells in an OFF ring, shrinking by two cells per side each
/// step until it is gone.
fn shrinking_block() -> Vec<Lattice> {
    [12usize, 8, 4, 0, 0]
        .iter()
        .map(|&w| {
            let start = (20 - w) / 2;
            Lattice::with_ones(20, start..start + w)
        })
        .collect()
}

fn zero_one(min_run: usize) -> DomainCatalog {
    DomainCatalog::new(vec![
        Domain::from_rows("0", &["0"], min_run).unwrap(),
        Domain::from_rows("1", &["1"], min_run).unwrap(),
    ])
    .unwrap()
}

#[test]
fn two_seam_fixture_annihilates_once() {
    let fd = label_rows(&shrinking_block(), &zero_one(4)).unwrap();
    let c = census(&fd);
    assert_eq!(c.counts, vec![2, 2, 2, 0, 0]);
    assert_eq!(c.events.len(), 1);
    let e = &c.events[0];
    assert_eq!((e.time, e.kind), (3, EventKind::Annihilate));
    assert_eq!(e.before.len(), 2);
    assert!(e.after.is_empty());
}

#[test]
fn two_seam_fixture_from_label_grid() {
    let grid = "\
000**1111111111**000
00000**111111**00000
0000000**11**0000000
00000000000000000000
";
    let fd = FilteredDiagram::from_text_grid(vec!["0".into(), "1".into()], grid).unwrap();
    let c = census(&fd);
    assert_eq!(c.counts, vec![2, 2, 2, 0]);
    let kinds: Vec<_> = c.events.iter().map(|e| e.kind).collect();
    assert_eq!(kinds, vec![EventKind::Annihilate]);
}

#[test]
fn uniform_diagram_has_no_segments() {
    let fd = label_rows(&vec![Lattice::ones(30); 4], &DomainCatalog::density_default(7)).unwrap();
    let c = census(&fd);
    assert_eq!(c.counts, vec![0; 4]);
    assert!(c.events.is_empty());
}

#[test]
fn each_pure_domain_filters_clean() {
    let cat = DomainCatalog::density_default(7);
    let checker: Vec<Lattice> = (0..6)
        .map(|t| Lattice::from_bits((0..40).map(|x| (x + t) % 2 == 1)))
        .collect();
    for rows in [vec![Lattice::zeros(40); 6], vec![Lattice::ones(40); 6], checker] {
        let fd = label_rows(&rows, &cat).unwrap();
        assert_eq!(fd.boundary_count(), 0);
    }
}

#[test]
fn das_density_runs_filter_cleanly() {
    let rule = RuleTable::parse_hex(DAS).unwrap();
    let cat = DomainCatalog::density_default(7);
    let key = StreamKey::new(17);
    for i in 0..20 {
        let ic = Lattice::random_with_count(149, 60, &mut key.rng(i));
        let t = run(rule, &ic, 320);
        let fd = label_sites(&t, &cat).unwrap();
        assert!(fd.boundary_fraction_from(10) < 0.25, "run {i}: {}", fd.boundary_fraction_from(10));
        assert_eq!(fd.boundary_count() + fd.domain_count(), 149 * t.rows());
        if t.last().is_all_off() {
            assert_eq!(*census(&fd).counts.last().unwrap(), 0);
        }
    }
}

fn diagram_strategy() -> impl Strategy<Value = (Vec<Lattice>, u128)> {
    (8usize..60, 1usize..6, any::<u64>(), any::<u128>()).prop_map(|(n, rows, seed, rule)| {
        let mut rng = StreamKey::new(seed).rng(0);
        let ic = Lattice::random_with_count(n, n / 3, &mut rng);
        let mut states = vec![ic];
        for _ in 1..rows {
            let next = evoca_core::step(RuleTable::from_bits(rule), states.last().unwrap());
            states.push(next);
        }
        (states, rule)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn labels_partition_every_diagram((rows, _) in diagram_strategy(), min_run in 2usize..9) {
        let fd = label_rows(&rows, &DomainCatalog::density_default(min_run)).unwrap();
        prop_assert_eq!(fd.boundary_count() + fd.domain_count(), rows.len() * rows[0].len());
        let c = census(&fd);
        for t in 1..c.counts.len() {
            let changed = c.counts[t] != c.counts[t - 1];
            prop_assert_eq!(changed, c.events.iter().any(|e| e.time == t));
        }
        prop_assert!(c.events.iter().all(|e| c.counts[e.time] != c.counts[e.time - 1]));
    }

    #[test]
    fn rotation_rotates_labels((rows, _) in diagram_strategy(), k in -80isize..80) {
        let cat = DomainCatalog::density_default(7);
        let fd = label_rows(&rows, &cat).unwrap();
        let rotated: Vec<Lattice> = rows.iter().map(|r| r.rotate(k)).collect();
        let fr = label_rows(&rotated, &cat).unwrap();
        let n = rows[0].len() as isize;
        for t in 0..rows.len() {
            for x in 0..n {
                prop_assert_eq!(fd.label(t, x as usize), fr.label(t, (x + k).rem_euclid(n) as usize));
            }
        }
    }
}

#[test]
fn boundary_segments_are_cyclic_runs() {
    let fd = label_rows(&["1111000000000001111".parse().unwrap()], &zero_one(4)).unwrap();
    assert_eq!(fd.segments(0), vec![Segment { start: 3, len: 2 }, Segment { start: 14, len: 2 }]);
    assert_eq!(fd.label(0, 0), Label::Domain(1));
}
