mod support;

use srg_core::fitness::{evaluate, is_feasible};
use srg_core::{
    aco, constructive, ga, AcoConfig, ColumnLimits, FitnessConfig, FitnessMode, GaConfig, Grouping,
};
use support::oracle::{self, RawCohort, BELL};
use support::{courses, desk_scale_family, instance};

#[test]
fn partition_enumeration_counts_match_bell_numbers() {
    for (n, &bell) in BELL.iter().enumerate() {
        assert_eq!(oracle::partitions(n).len(), if n == 0 { 0 } else { bell }, "n = {n}");
    }
}

fn configs() -> Vec<FitnessConfig> {
    let tight = ColumnLimits {
        new_limit: 5,
        old_limit: 3,
        total_limit: 7,
        ..ColumnLimits::default()
    };
    let mut out = Vec::new();
    for limits in [
        ColumnLimits::default(),
        ColumnLimits::dynamic(),
        tight,
        tight.with_mode(srg_core::ColumnMode::Dynamic),
    ] {
        for mode in [FitnessMode::Strict, FitnessMode::PaperCompat] {
            out.push(FitnessConfig::new(limits, mode));
        }
    }
    out
}

#[test]
fn evaluator_agrees_with_brute_force_on_every_partition() {
    let mut checked = 0usize;
    for inst in desk_scale_family().into_iter().filter(|i| i.student_count() <= 6) {
        let cohort = RawCohort::from_instance(&inst);
        for labels in oracle::partitions(inst.student_count()) {
            let grouping = Grouping::from_labels(&inst, &labels).unwrap();
            let raw_labels: Vec<_> = labels.iter().copied().map(Some).collect();
            for cfg in configs() {
                let ours = evaluate(&inst, &grouping, &cfg);
                let theirs = oracle::score(&cohort, &raw_labels, &cfg.limits, cfg.mode);
                assert_eq!(ours.unfit, theirs.unfit);
                assert_eq!(ours.size, theirs.size);
                assert_eq!(ours.unassigned, theirs.unassigned);
                assert_eq!(ours.group_count, theirs.groups);
                assert!((ours.fitness - theirs.fitness).abs() < 1e-9, "{labels:?} {cfg:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn evaluator_agrees_on_partial_groupings() {
    let inst = &desk_scale_family()[1];
    let cohort = RawCohort::from_instance(inst);
    let n = inst.student_count();
    for labels in oracle::partitions(n) {
        // drop every student labelled with the highest group
        let top = *labels.iter().max().unwrap();
        let raw: Vec<Option<usize>> = labels.iter().map(|&l| (l != top || top == 0).then_some(l)).collect();
        let groups: Vec<Vec<usize>> = (0..=top)
            .map(|g| (0..n).filter(|&s| raw[s] == Some(g)).collect::<Vec<_>>())
            .filter(|g| !g.is_empty())
            .collect();
        let grouping = Grouping::from_groups(inst, groups).unwrap();
        for cfg in configs() {
            let ours = evaluate(inst, &grouping, &cfg);
            let theirs = oracle::score(&cohort, &raw, &cfg.limits, cfg.mode);
            assert!((ours.fitness - theirs.fitness).abs() < 1e-9);
            assert_eq!(ours.unassigned, theirs.unassigned);
        }
    }
}

#[test]
fn hfo_three_student_example_is_optimal() {
    let inst = instance(
        "abc",
        &[
            ("A", courses("c", 1..=10)),
            ("B", courses("c", 5..=14)),
            ("C", courses("c", 1..=2)),
        ],
    );
    let cfg = FitnessConfig::default();
    let g = constructive::hfo_solve(&inst, &cfg);
    assert_eq!(g.groups(), &[vec![0, 2], vec![1]]);
    let (opt, _) = oracle::optimum(&inst, &cfg.limits, cfg.mode);
    assert!(is_feasible(&inst, &g, &cfg.limits));
    assert!((evaluate(&inst, &g, &cfg).fitness - opt).abs() < 1e-9);
}

#[test]
fn best_fit_choice_is_the_better_partition() {
    // g1 holds c1..c10, g2 holds c11..c20; x brings c3, c4.
    let inst = instance(
        "fit",
        &[
            ("g1", courses("c", 1..=10)),
            ("g2", courses("c", 11..=20)),
            ("x", vec!["c3".into(), "c4".into()]),
        ],
    );
    let cfg = FitnessConfig::default();
    let into_g1 = Grouping::from_groups(&inst, vec![vec![0, 2], vec![1]]).unwrap();
    let into_g2 = Grouping::from_groups(&inst, vec![vec![0], vec![1, 2]]).unwrap();
    let cohort = RawCohort::from_instance(&inst);
    let score = |labels: [usize; 3]| {
        oracle::score(&cohort, &labels.map(Some), &cfg.limits, cfg.mode).fitness
    };
    // Both partitions are feasible with equal sizes, so they tie; joining g1
    // is never worse and keeps g2's spare columns.
    assert!(score([0, 1, 0]) <= score([0, 1, 1]));
    assert!(evaluate(&inst, &into_g1, &cfg).fitness <= evaluate(&inst, &into_g2, &cfg).fitness);
    assert_eq!(constructive::hfo_solve(&inst, &cfg), into_g1);

    // A third student that fits only beside g1 once x has joined it shows
    // the difference.
    let inst = instance(
        "fit2",
        &[
            ("g1", courses("c", 1..=10)),
            ("g2", courses("c", 11..=20)),
            ("x", vec!["c3".into(), "c4".into()]),
            ("y", courses("c", 17..=22)),
        ],
    );
    let cohort = RawCohort::from_instance(&inst);
    let score = |labels: [usize; 4]| {
        oracle::score(&cohort, &labels.map(Some), &cfg.limits, cfg.mode).fitness
    };
    assert!(score([0, 1, 0, 1]) < score([0, 1, 1, 2]));
    assert_eq!(
        constructive::hfo_solve(&inst, &cfg).groups(),
        &[vec![0, 2], vec![1, 3]]
    );
}

#[test]
fn six_student_instances_reach_the_optimum() {
    let cfg = FitnessConfig::default();
    for inst in desk_scale_family().into_iter().filter(|i| i.student_count() == 6) {
        let (opt, _) = oracle::optimum(&inst, &cfg.limits, cfg.mode);
        let aco_best = (0..10)
            .map(|seed| aco::aco_solve(&inst, &AcoConfig::default().with_seed(seed), &cfg).breakdown.fitness)
            .fold(f64::INFINITY, f64::min);
        let ga_best = (0..10)
            .map(|seed| ga::ga_solve(&inst, &GaConfig::default().with_seed(seed), &cfg).breakdown.fitness)
            .fold(f64::INFINITY, f64::min);
        assert!((aco_best - opt).abs() < 1e-9, "{}: aco {aco_best} vs {opt}", inst.name());
        assert!((ga_best - opt).abs() < 1e-9, "{}: ga {ga_best} vs {opt}", inst.name());
    }
}

#[test]
fn no_solver_beats_the_optimum() {
    for cfg in [FitnessConfig::default(), FitnessConfig::new(ColumnLimits::dynamic(), FitnessMode::Strict)] {
        for inst in desk_scale_family().into_iter().take(8) {
            let (opt, _) = oracle::optimum(&inst, &cfg.limits, cfg.mode);
            let results = [
                evaluate(&inst, &constructive::hfo_solve(&inst, &cfg), &cfg).fitness,
                evaluate(&inst, &constructive::ro_solve(&inst, &cfg, 3), &cfg).fitness,
                aco::aco_solve(&inst, &AcoConfig::default().with_seed(1), &cfg).breakdown.fitness,
                ga::ga_solve(&inst, &GaConfig::default().with_seed(1), &cfg).breakdown.fitness,
            ];
            for r in results {
                assert!(r >= opt - 1e-9, "{} {r} < {opt}", inst.name());
            }
        }
    }
}
