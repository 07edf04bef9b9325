//! Top-level solving: normalization, seeding, monodromy completion and
//! verification against the caller's instance.

use std::time::{Duration, Instant};

use crate::combinatorics::SchubertProblem;
use crate::error::{Result, SchubertError};
use crate::geometry::{incidence_residuals, Flag, SchubertInstance};
use crate::homotopy::{
    change_flags, dedup_solutions, monodromy_solve, newton_correct, track_paths, transport, MonodromyOptions,
    NormalizedFrame, PathStats, StraightLineHomotopy, TotalDegreeStart, TrackerOptions,
};
use crate::kernel::{random_flag_matrix, CMatrix, RandomSource, C64};
use crate::systems::{DeterminantalSystem, PolynomialSystem};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Total-degree seeding is used when the Bézout number is at most this.
    pub bezout_cap: u128,
    /// Random starting points tried by plain Newton before constructing a seed.
    pub newton_retries: usize,
    /// Newton iterations per random start.
    pub newton_iters: usize,
    /// Attempts at building a seed instance with a known solution.
    pub seed_attempts: usize,
    pub monodromy: MonodromyOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            bezout_cap: 20_000,
            newton_retries: 20,
            newton_iters: 30,
            seed_attempts: 5,
            monodromy: MonodromyOptions::default(),
        }
    }
}

impl SolveOptions {
    pub fn tracker(&self) -> &TrackerOptions {
        &self.monodromy.tracker
    }

    pub fn verify_tol(&self) -> f64 {
        self.monodromy.verify_tol
    }

    pub fn with_verify_tol(mut self, tol: f64) -> Self {
        self.monodromy.verify_tol = tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMethod {
    /// Nothing to seed: no solutions or a zero-dimensional patch.
    None,
    TotalDegree,
    RandomNewton,
    ConstructedInstance,
    /// Solutions carried over from another instance.
    ParameterHomotopy,
}

impl std::fmt::Display for SeedMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeedMethod::None => "none",
            SeedMethod::TotalDegree => "totalDegree",
            SeedMethod::RandomNewton => "randomNewton",
            SeedMethod::ConstructedInstance => "constructedInstance",
            SeedMethod::ParameterHomotopy => "parameterHomotopy",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Timings {
    pub seeding: Duration,
    pub completion: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// `n x k` matrices in the caller's basis, columns of unit length.
    pub solutions: Vec<CMatrix>,
    pub count: usize,
    pub expected: u64,
    /// Largest incidence residual of each solution on the caller's instance.
    pub residuals: Vec<f64>,
    pub seed: u64,
    pub seed_method: SeedMethod,
    pub monodromy_loops: usize,
    pub timings: Timings,
    pub path_stats: PathStats,
    pub incomplete: bool,
    /// Human-readable notes on discarded paths or solutions.
    pub failures: Vec<String>,
}

impl SolveReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    fn empty(expected: u64, seed: u64) -> Self {
        Self {
            solutions: Vec::new(),
            count: 0,
            expected,
            residuals: Vec::new(),
            seed,
            seed_method: SeedMethod::None,
            monodromy_loops: 0,
            timings: Timings::default(),
            path_stats: PathStats::default(),
            incomplete: expected > 0,
            failures: Vec::new(),
        }
    }
}

/// Solves `inst` for all k-planes meeting every condition.
pub fn solve_schubert_problem(inst: &SchubertInstance, rng: &mut RandomSource, opts: &SolveOptions) -> Result<SolveReport> {
    solve_pipeline(inst, rng, opts)
}

/// Variant for instances where every condition past the two largest is a
/// hypersurface condition, so the system is square without mixing.
pub fn solve_simple_schubert(inst: &SchubertInstance, rng: &mut RandomSource, opts: &SolveOptions) -> Result<SolveReport> {
    let (sorted, perm) = inst.problem().sorted();
    for (j, b) in sorted.conditions().iter().enumerate().skip(2) {
        if b.codimension() > 1 {
            return Err(SchubertError::NotSimple {
                index: perm[j],
                bracket: b.to_string(),
                codimension: b.codimension(),
            });
        }
    }
    solve_pipeline(inst, rng, opts)
}

/// Solves a random instance of `problem` and carries its solutions to the
/// instance given by `user_flags`.
pub fn solve_via_known_instance(
    problem: &SchubertProblem,
    user_flags: &[Flag],
    rng: &mut RandomSource,
    opts: &SolveOptions,
) -> Result<SolveReport> {
    let start = Instant::now();
    let user = SchubertInstance::new(problem.clone(), user_flags.to_vec())?;
    NormalizedFrame::new(&user)?;
    let random = SchubertInstance::random(problem, rng)?;
    let base = solve_pipeline(&random, rng, opts)?;
    let moved = change_flags(
        problem,
        &base.solutions,
        random.flags(),
        user_flags,
        rng,
        opts.tracker(),
        opts.verify_tol(),
    )?;
    let mut report = SolveReport {
        seed_method: SeedMethod::ParameterHomotopy,
        path_stats: base.path_stats,
        monodromy_loops: base.monodromy_loops,
        failures: base.failures,
        ..SolveReport::empty(base.expected, rng.seed())
    };
    report.path_stats.tracked += base.solutions.len();
    for (i, r) in moved.into_iter().enumerate() {
        match r {
            Ok(h) => {
                if report
                    .solutions
                    .iter()
                    .any(|s| crate::geometry::span_distance(s, &h) < opts.monodromy.dedup_tol)
                {
                    report.failures.push(format!("solution {i} collided with another after transport"));
                    continue;
                }
                report.path_stats.succeeded += 1;
                report.residuals.push(incidence_residuals(&h, &user)?.max_residual());
                report.solutions.push(h);
            }
            Err(e) => {
                report.path_stats.failed += 1;
                report.failures.push(format!("solution {i}: {e}"));
            }
        }
    }
    report.count = report.solutions.len();
    report.incomplete = (report.count as u64) < report.expected;
    report.timings = Timings {
        seeding: base.timings.total,
        completion: start.elapsed().saturating_sub(base.timings.total),
        total: start.elapsed(),
    };
    Ok(report)
}

fn solve_pipeline(inst: &SchubertInstance, rng: &mut RandomSource, opts: &SolveOptions) -> Result<SolveReport> {
    let start = Instant::now();
    let expected = inst.problem().lr_number();
    let mut report = SolveReport::empty(expected, rng.seed());
    if expected == 0 {
        report.timings.total = start.elapsed();
        return Ok(report);
    }
    let frame = NormalizedFrame::new(inst)?;
    let system = frame.system()?.square_up(rng)?;
    let target = usize::try_from(expected).unwrap_or(usize::MAX);

    let seeds = if system.num_vars() == 0 {
        vec![Vec::new()]
    } else {
        find_seeds(&system, &frame, rng, opts, &mut report)?
    };
    report.timings.seeding = start.elapsed();

    let completed = monodromy_solve(&system, &frame.normalized, &seeds, target, rng, &opts.monodromy)?;
    report.path_stats.merge(completed.stats);
    report.monodromy_loops = completed.loops;
    report.timings.completion = start.elapsed() - report.timings.seeding;

    for (i, x) in completed.solutions.iter().enumerate() {
        let h = frame.to_original(x)?;
        let residual = incidence_residuals(&h, inst)?.max_residual();
        if residual < opts.verify_tol() {
            report.solutions.push(h);
            report.residuals.push(residual);
        } else {
            report
                .failures
                .push(format!("solution {i} failed verification on the input instance (residual {residual:e})"));
        }
    }
    report.count = report.solutions.len();
    report.incomplete = (report.count as u64) < expected;
    if completed.solutions.is_empty() {
        report.failures.push("no seed solution found; reseed to retry".into());
    }
    report.timings.total = start.elapsed();
    Ok(report)
}

fn verified_in_frame(system: &DeterminantalSystem, frame: &NormalizedFrame, x: &[C64], tol: f64) -> bool {
    system
        .patch()
        .embed(x)
        .ok()
        .and_then(|h| incidence_residuals(&h, &frame.normalized).ok())
        .is_some_and(|r| r.max_residual() < tol)
}

fn find_seeds(
    system: &DeterminantalSystem,
    frame: &NormalizedFrame,
    rng: &mut RandomSource,
    opts: &SolveOptions,
    report: &mut SolveReport,
) -> Result<Vec<Vec<C64>>> {
    let tol = opts.verify_tol();
    let start = TotalDegreeStart::for_target(system, rng)?;
    if start.num_solutions() <= opts.bezout_cap {
        report.seed_method = SeedMethod::TotalDegree;
        let h = StraightLineHomotopy::new(&start, system, rng.unit_complex());
        let results = track_paths(&h, &start.start_solutions(), opts.tracker());
        report.path_stats.record(&results);
        let found: Vec<Vec<C64>> = results
            .into_iter()
            .filter(|r| r.is_success() && verified_in_frame(system, frame, &r.endpoint, tol))
            .map(|r| r.endpoint)
            .collect();
        let found = dedup_solutions(&found, opts.monodromy.dedup_tol);
        if !found.is_empty() {
            return Ok(found);
        }
        report
            .failures
            .push("total-degree homotopy produced no verified endpoint".into());
    }

    report.seed_method = SeedMethod::RandomNewton;
    let newton = TrackerOptions {
        max_newton_iters: opts.newton_iters,
        ..opts.tracker().clone()
    };
    for _ in 0..opts.newton_retries {
        let x0 = rng.gaussian_vec(system.num_vars());
        if let Ok(r) = newton_correct(system, &x0, &newton) {
            if verified_in_frame(system, frame, &r.x, tol) {
                return Ok(vec![r.x]);
            }
        }
    }

    report.seed_method = SeedMethod::ConstructedInstance;
    let target_flags = frame.trailing_flags();
    for _ in 0..opts.seed_attempts {
        let (flags, x) = constructed_seed(system, frame, rng)?;
        let results = transport(system, &flags, &target_flags, &[x], rng, opts.tracker())?;
        report.path_stats.record(&results);
        if let Some(r) = results.into_iter().find(|r| r.is_success()) {
            if verified_in_frame(system, frame, &r.endpoint, tol) {
                return Ok(vec![r.endpoint]);
            }
        }
    }
    Ok(Vec::new())
}

/// Picks a random point `x` of the patch and trailing flags for which it is
/// a solution: for each condition `a`, a random basis `h_1..h_k` of the
/// plane is placed in columns `a_1..a_k` of an otherwise random flag, so the
/// `a_i`-th flag space contains `h_1..h_i`.
fn constructed_seed(
    system: &DeterminantalSystem,
    frame: &NormalizedFrame,
    rng: &mut RandomSource,
) -> Result<(Vec<CMatrix>, Vec<C64>)> {
    let patch = system.patch();
    let (n, k) = (patch.n(), patch.k());
    let x = rng.gaussian_vec(patch.num_vars());
    let h = patch.embed(&x)?;
    let mut flags = Vec::with_capacity(system.blocks().len());
    for block in system.blocks() {
        let mut tries = 0;
        let flag = loop {
            tries += 1;
            let basis = &h * &rng.gaussian_matrix(k, k);
            let mut f = random_flag_matrix(n, rng)?;
            for (i, &a) in block.bracket.entries().iter().enumerate() {
                f.set_column(a - 1, &basis.column(i));
            }
            f.normalize_columns();
            match Flag::new(f) {
                Ok(flag) => break flag,
                Err(e) if tries >= 100 => return Err(e),
                Err(_) => continue,
            }
        };
        flags.push(flag.matrix().clone());
    }
    debug_assert_eq!(flags.len(), frame.trailing_flags().len());
    Ok((flags, x))
}
