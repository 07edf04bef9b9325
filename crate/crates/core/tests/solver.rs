mod support;

use numschubert::geometry::{check_incidence, incidence_ranks, span_distance, Flag};
use numschubert::kernel::CMatrix;
use support::four_lines;
use numschubert::{
    solve_schubert_problem, solve_simple_schubert, solve_via_known_instance, Bracket, RandomSource, SchubertError,
    SchubertInstance, SchubertProblem, SolveOptions,
};

fn same_span_sets(a: &[CMatrix], b: &[CMatrix], tol: f64) -> bool {
    a.len() == b.len() && a.iter().all(|h| b.iter().any(|g| span_distance(h, g) < tol))
}

fn pairwise_distinct(sols: &[CMatrix]) -> bool {
    (0..sols.len()).all(|i| (0..i).all(|j| span_distance(&sols[i], &sols[j]) > 1e-6))
}

fn assert_sharp_incidence(sols: &[CMatrix], inst: &SchubertInstance) {
    for h in sols {
        for (c, i, rank, expected) in incidence_ranks(h, inst, 1e-8).unwrap() {
            assert_eq!(rank, expected, "condition {c}, index {i}");
        }
    }
}

#[test]
fn four_lines_two_verified_solutions() {
    let opts = SolveOptions::default();
    for seed in 0..10 {
        let mut rng = RandomSource::new(seed);
        let inst = SchubertInstance::random(&four_lines(), &mut rng).unwrap();
        let report = solve_schubert_problem(&inst, &mut rng, &opts).unwrap();
        assert_eq!(report.count, 2);
        assert_eq!(report.expected, 2);
        assert!(!report.incomplete);
        assert!(report.max_residual() < 1e-8);
        assert!(pairwise_distinct(&report.solutions));
        assert_sharp_incidence(&report.solutions, &inst);
        for h in &report.solutions {
            assert_eq!(h.shape(), (4, 2));
        }
    }
}

#[test]
fn solution_set_independent_of_order_and_seed() {
    let b = |e: &[usize]| Bracket::new(2, 5, e.to_vec()).unwrap();
    // sigma_1^4 sigma_2 on Gr(2,5) has 3 solutions.
    let conditions = vec![b(&[3, 5]), b(&[3, 5]), b(&[2, 5]), b(&[3, 5]), b(&[3, 5])];
    let prob = SchubertProblem::new(2, 5, conditions.clone()).unwrap();
    assert_eq!(prob.lr_number(), 3);
    let mut rng = RandomSource::new(100);
    let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
    let opts = SolveOptions::default();
    let base = solve_schubert_problem(&inst, &mut RandomSource::new(1), &opts).unwrap();
    assert_eq!(base.count, 3);

    let (sorted, _) = inst.sorted();
    let sorted_report = solve_schubert_problem(&sorted, &mut RandomSource::new(1), &opts).unwrap();
    assert!(same_span_sets(&base.solutions, &sorted_report.solutions, 1e-6));

    let reversed_problem = SchubertProblem::new(2, 5, conditions.iter().rev().cloned().collect()).unwrap();
    let reversed = SchubertInstance::new(reversed_problem, inst.flags().iter().rev().cloned().collect()).unwrap();
    let reversed_report = solve_schubert_problem(&reversed, &mut RandomSource::new(2), &opts).unwrap();
    assert!(same_span_sets(&base.solutions, &reversed_report.solutions, 1e-6));

    for seed in 3..6 {
        let other = solve_schubert_problem(&inst, &mut RandomSource::new(seed), &opts).unwrap();
        assert!(same_span_sets(&base.solutions, &other.solutions, 1e-6));
    }
}

/// Every problem on Gr(2,4) and Gr(2,5) solves to its LR number.
#[test]
fn small_grassmannians_solve_completely() {
    let opts = SolveOptions::default();
    for (k, n) in [(2, 4), (2, 5)] {
        let problems = support::all_problems(k, n);
        for (idx, parts) in problems.iter().enumerate() {
            let prob = SchubertProblem::from_partitions(k, n, parts).unwrap();
            let mut rng = RandomSource::new(idx as u64);
            let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
            let report = solve_schubert_problem(&inst, &mut rng, &opts).unwrap();
            assert_eq!(report.count as u64, prob.lr_number(), "Gr({k},{n}) {parts:?}: {:?}", report.failures);
            assert!(report.max_residual() < 1e-8);
            assert!(pairwise_distinct(&report.solutions));
            assert_sharp_incidence(&report.solutions, &inst);
        }
    }
}

#[test]
fn simple_solver_gr36() {
    let prob = SchubertProblem::from_partitions(3, 6, &vec![vec![1]; 9]).unwrap();
    let mut rng = RandomSource::new(2024);
    let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
    let report = solve_simple_schubert(&inst, &mut rng, &SolveOptions::default()).unwrap();
    assert_eq!(report.count, 42, "{:?}", report.failures);
    assert!(!report.incomplete);
    assert!(report.max_residual() < 1e-8);
    assert!(pairwise_distinct(&report.solutions));
    assert_sharp_incidence(&report.solutions, &inst);
}

#[test]
fn simple_solver_rejects_codim_two_trailing_condition() {
    let b = |e: &[usize]| Bracket::new(2, 5, e.to_vec()).unwrap();
    let prob = SchubertProblem::new(2, 5, vec![b(&[2, 5]), b(&[2, 5]), b(&[3, 4])]).unwrap();
    let mut rng = RandomSource::new(0);
    let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
    match solve_simple_schubert(&inst, &mut rng, &SolveOptions::default()) {
        Err(SchubertError::NotSimple { index, codimension, .. }) => {
            assert_eq!(index, 2);
            assert_eq!(codimension, 2);
        }
        other => panic!("expected NotSimple, got {other:?}"),
    }
}

#[test]
fn known_instance_real_user_flags() {
    let mut rng = RandomSource::new(5);
    // Real flags, as a user would typically supply.
    let flags: Vec<Flag> = (0..4)
        .map(|_| {
            let m = rng.gaussian_matrix(4, 4);
            Flag::new(CMatrix::from_fn(4, 4, |r, c| numschubert::C64::new(m[(r, c)].re, 0.0))).unwrap()
        })
        .collect();
    let report = solve_via_known_instance(&four_lines(), &flags, &mut rng, &SolveOptions::default()).unwrap();
    assert_eq!(report.count, 2, "{:?}", report.failures);
    let inst = SchubertInstance::new(four_lines(), flags).unwrap();
    for h in &report.solutions {
        assert!(check_incidence(h, &inst, 1e-8).unwrap());
    }
}

#[test]
fn known_instance_with_its_own_flags() {
    let mut rng = RandomSource::new(6);
    let inst = SchubertInstance::random(&four_lines(), &mut rng).unwrap();
    let direct = solve_schubert_problem(&inst, &mut RandomSource::new(7), &SolveOptions::default()).unwrap();
    let via = solve_via_known_instance(&four_lines(), inst.flags(), &mut RandomSource::new(8), &SolveOptions::default()).unwrap();
    assert!(same_span_sets(&direct.solutions, &via.solutions, 1e-6));
}

#[test]
fn degenerate_user_flags_are_reported() {
    let mut rng = RandomSource::new(9);
    let f = Flag::random(4, &mut rng).unwrap();
    let flags = vec![f.clone(), f.clone(), Flag::random(4, &mut rng).unwrap(), Flag::random(4, &mut rng).unwrap()];
    let err = solve_via_known_instance(&four_lines(), &flags, &mut rng, &SolveOptions::default()).unwrap_err();
    assert_eq!(err, SchubertError::DegenerateFlags);
}

#[test]
fn empty_problem_is_complete() {
    // sigma_2 * sigma_{1,1} = 0 on Gr(2,4).
    let b = |e: &[usize]| Bracket::new(2, 4, e.to_vec()).unwrap();
    let prob = SchubertProblem::new(2, 4, vec![b(&[1, 4]), b(&[2, 3])]).unwrap();
    let mut rng = RandomSource::new(1);
    let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
    let report = solve_schubert_problem(&inst, &mut rng, &SolveOptions::default()).unwrap();
    assert_eq!(report.expected, 0);
    assert_eq!(report.count, 0);
    assert!(!report.incomplete);
}
