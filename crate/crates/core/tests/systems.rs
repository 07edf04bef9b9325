mod support;

use numschubert::geometry::normalize_instance;
use numschubert::homotopy::NormalizedFrame;
use numschubert::kernel::{vec_norm_inf, ONE};
use numschubert::systems::{evaluate, jacobian, DeterminantalSystem, PolynomialSystem};
use numschubert::{Bracket, RandomSource, SchubertInstance, SchubertProblem, SolveOptions, C64};
use support::{four_lines, gr36, gr48, jacobian_fd_error, squared_system};

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = RandomSource::new(4);
    for (name, prob) in [("four lines", four_lines()), ("Gr(3,6)", gr36()), ("Gr(4,8)", gr48())] {
        let sys = squared_system(&prob, 3);
        assert_eq!(sys.num_equations(), sys.num_vars(), "{name}");
        let worst = jacobian_fd_error(&sys, 50, 1e-6, &mut rng);
        assert!(worst < 1e-6, "{name}: {worst:e}");
    }
}

#[test]
fn gr48_system_shape() {
    let mut rng = RandomSource::new(6);
    let inst = SchubertInstance::random(&gr48(), &mut rng).unwrap();
    let frame = NormalizedFrame::new(&inst).unwrap();
    let sys = frame.system().unwrap();
    // Two codimension-3 conditions absorbed: 16 - 6 unknowns.
    assert_eq!(sys.num_vars(), 10);
    let codim2 = &sys.blocks()[0];
    assert_eq!(codim2.bracket.entries(), &[3, 6, 7, 8]);
    assert!(codim2.minors.len() > 2);
    assert!(sys.blocks()[1..].iter().all(|b| b.minors.len() == 1));
    let sq = sys.square_up(&mut rng).unwrap();
    assert_eq!(sq.num_equations(), 10);
}

/// Restricts each equation to a random complex line and reads off the
/// degree from the discrete Fourier coefficients on a circle.
fn sampled_degrees(sys: &DeterminantalSystem, rng: &mut RandomSource) -> Vec<usize> {
    let samples = 16;
    let x0 = rng.gaussian_vec(sys.num_vars());
    let v = rng.gaussian_vec(sys.num_vars());
    let values: Vec<Vec<C64>> = (0..samples)
        .map(|s| {
            let z = C64::from_polar(1.0, std::f64::consts::TAU * s as f64 / samples as f64);
            let x: Vec<C64> = x0.iter().zip(&v).map(|(a, b)| a + b * z).collect();
            sys.evaluate(&x)
        })
        .collect();
    (0..sys.num_equations())
        .map(|e| {
            let coeffs: Vec<f64> = (0..samples)
                .map(|d| {
                    let c: C64 = (0..samples)
                        .map(|s| {
                            values[s][e] * C64::from_polar(1.0, -std::f64::consts::TAU * (d * s) as f64 / samples as f64)
                        })
                        .sum();
                    c.norm() / samples as f64
                })
                .collect();
            let scale = coeffs.iter().copied().fold(0.0, f64::max);
            (0..samples).rev().find(|&d| coeffs[d] > 1e-9 * scale).unwrap_or(0)
        })
        .collect()
}

#[test]
fn equation_degrees_bounded_by_min_k_n_minus_k() {
    let mut rng = RandomSource::new(7);
    for (prob, bound) in [(four_lines(), 2), (gr36(), 3)] {
        for seed in 0..3 {
            let sys = squared_system(&prob, seed);
            let sampled = sampled_degrees(&sys, &mut rng);
            for (e, (&d, &declared)) in sampled.iter().zip(&sys.degrees()).enumerate() {
                assert!(d <= bound, "equation {e} has degree {d}");
                assert!(d <= declared, "equation {e}: sampled {d} > declared {declared}");
            }
            assert_eq!(sampled, vec![bound; sys.num_equations()]);
        }
    }
}

#[test]
fn evaluation_contracts() {
    let sys = squared_system(&four_lines(), 8);
    assert!(vec_norm_inf(&evaluate(&sys, &[C64::new(0.0, 0.0); 2]).unwrap()) > 1e-6);
    assert!(evaluate(&sys, &[ONE]).is_err());
    assert!(jacobian(&sys, &[ONE; 3]).is_err());

    // A problem whose first two conditions determine the plane has no equations.
    let b = |e: &[usize]| Bracket::new(2, 4, e.to_vec()).unwrap();
    let prob = SchubertProblem::new(2, 4, vec![b(&[1, 4]), b(&[1, 4])]).unwrap();
    let mut rng = RandomSource::new(1);
    let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
    let (norm, _) = normalize_instance(&inst.sorted().0).unwrap();
    let c = norm.problem().conditions();
    let patch = numschubert::geometry::CoordinatePatch::build(&c[0], &c[1]).unwrap();
    let sys = DeterminantalSystem::build(&norm, &patch).unwrap();
    assert_eq!(sys.num_vars(), 0);
    assert!(evaluate(&sys, &[]).unwrap().is_empty());
}

#[test]
fn squared_up_solutions_satisfy_every_minor() {
    // Gr(2,5): {2,5}, {2,5}, {3,4}; the codimension-2 condition is mixed
    // down to two equations.
    let b = |e: &[usize]| Bracket::new(2, 5, e.to_vec()).unwrap();
    let prob = SchubertProblem::new(2, 5, vec![b(&[3, 4]), b(&[2, 5]), b(&[2, 5])]).unwrap();
    for seed in 0..5 {
        let mut rng = RandomSource::new(seed);
        let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
        let frame = NormalizedFrame::new(&inst).unwrap();
        let full = frame.system().unwrap();
        let square = full.square_up(&mut rng).unwrap();
        let report = numschubert::solve_schubert_problem(&inst, &mut rng, &SolveOptions::default()).unwrap();
        assert_eq!(report.count as u64, prob.lr_number());
        for h in &report.solutions {
            let x = frame.to_patch(h).unwrap();
            let scaled_full = full.residual_norm(&x);
            assert!(scaled_full < 1e-8, "seed {seed}: {scaled_full:e}");
            assert!(square.residual_norm(&x) < 1e-8);
        }
    }
}
