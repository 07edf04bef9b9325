use crate::error::Result;
use crate::geometry::{incidence_residuals, SchubertInstance, DEFAULT_INCIDENCE_TOL};
use crate::kernel::{random_flag_matrix, vec_norm_inf, CMatrix, RandomSource, C64};
use crate::systems::{DeterminantalSystem, PolynomialSystem};

use super::{transport, PathResult, PathStats, TrackerOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyOptions {
    pub max_loops: usize,
    pub dedup_tol: f64,
    pub verify_tol: f64,
    pub tracker: TrackerOptions,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        Self {
            max_loops: 50,
            dedup_tol: 1.0e-6,
            verify_tol: DEFAULT_INCIDENCE_TOL,
            tracker: TrackerOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyResult {
    pub solutions: Vec<Vec<C64>>,
    pub loops: usize,
    pub complete: bool,
    pub stats: PathStats,
}

/// `‖a - b‖∞ / max(1, ‖a‖∞, ‖b‖∞)`.
pub fn relative_distance(a: &[C64], b: &[C64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    diff / vec_norm_inf(a).max(vec_norm_inf(b)).max(1.0)
}

/// First representative of each cluster at relative distance `< tol`.
pub fn dedup_solutions(sols: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for s in sols {
        if !out.iter().any(|o| relative_distance(o, s) < tol) {
            out.push(s.clone());
        }
    }
    out
}

/// Grows a verified solution set of a normalized instance by tracking it
/// around loops `F -> Q -> F` through random trailing flags `Q`, stopping
/// at `target` solutions or after `opts.max_loops` loops.
pub fn monodromy_solve(
    system: &DeterminantalSystem,
    inst: &SchubertInstance,
    seeds: &[Vec<C64>],
    target: usize,
    rng: &mut RandomSource,
    opts: &MonodromyOptions,
) -> Result<MonodromyResult> {
    let base: Vec<CMatrix> = system.flags().to_vec();
    let verified = |x: &[C64]| -> bool {
        system
            .patch()
            .embed(x)
            .ok()
            .and_then(|h| incidence_residuals(&h, inst).ok())
            .is_some_and(|r| r.max_residual() < opts.verify_tol)
    };
    let mut solutions: Vec<Vec<C64>> = Vec::new();
    for s in seeds {
        if s.len() == system.num_vars()
            && verified(s)
            && !solutions.iter().any(|o| relative_distance(o, s) < opts.dedup_tol)
        {
            solutions.push(s.clone());
        }
    }
    let mut stats = PathStats::default();
    let mut loops = 0;
    let n = system.patch().n();
    while solutions.len() < target && loops < opts.max_loops && !solutions.is_empty() {
        loops += 1;
        let aux = (0..base.len())
            .map(|_| random_flag_matrix(n, rng))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let out = transport(system, &base, &aux, &solutions, rng, &opts.tracker)?;
        stats.record(&out);
        let mids = successes(out);
        let back = transport(system, &aux, &base, &mids, rng, &opts.tracker)?;
        stats.record(&back);
        for x in successes(back) {
            if solutions.len() >= target {
                break;
            }
            if verified(&x) && !solutions.iter().any(|o| relative_distance(o, &x) < opts.dedup_tol) {
                solutions.push(x);
            }
        }
    }
    Ok(MonodromyResult {
        complete: solutions.len() >= target,
        solutions,
        loops,
        stats,
    })
}

fn successes(results: Vec<PathResult>) -> Vec<Vec<C64>> {
    results
        .into_iter()
        .filter(|r| r.is_success())
        .map(|r| r.endpoint)
        .collect()
}
