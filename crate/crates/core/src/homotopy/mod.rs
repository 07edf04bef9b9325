//! Predictor-corrector continuation, start systems, parameter homotopies in
//! the flags and monodromy completion.

mod monodromy;
mod newton;
mod parameter;
mod start;
mod tracker;

pub use monodromy::{dedup_solutions, monodromy_solve, relative_distance, MonodromyOptions, MonodromyResult};
pub use newton::{newton_correct, NewtonFailure, NewtonResult};
pub use parameter::{change_flags, transport, FlagHomotopy, NormalizedFrame, TransportFailure};
pub use start::{StraightLineHomotopy, TotalDegreeStart};
pub use tracker::{track_path, track_paths};

use crate::kernel::{vec_norm_inf, CMatrix, C64};

/// `H(x, t)` with derivatives, `t` running from 0 (start) to 1 (target).
pub trait Homotopy: Sync {
    fn num_vars(&self) -> usize;

    fn values(&self, x: &[C64], t: f64) -> Vec<C64>;

    fn evaluate(&self, x: &[C64], t: f64) -> HomotopyEval;

    /// Residual used to accept endpoints; at `t = 1` this is the target's
    /// own residual measure.
    fn residual(&self, x: &[C64], t: f64) -> f64 {
        vec_norm_inf(&self.values(x, t))
    }
}

#[derive(Debug, Clone)]
pub struct HomotopyEval {
    pub values: Vec<C64>,
    /// `∂H/∂x`.
    pub jac_x: CMatrix,
    /// `∂H/∂t`.
    pub jac_t: Vec<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    Euler,
    RungeKutta4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub step_shrink: f64,
    pub step_grow: f64,
    /// Consecutive accepted steps before the step grows.
    pub grow_after: usize,
    /// Endpoint acceptance on the target residual.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub max_steps: usize,
    /// Relative Newton update accepted by the corrector along the path.
    pub corrector_tol: f64,
    /// Beyond this `t` the corrector tolerance tightens to `endgame_tol`.
    pub endgame_threshold: f64,
    pub endgame_tol: f64,
    /// Newton iterations spent refining the endpoint at `t = 1`.
    pub final_newton_iters: usize,
    /// `‖x‖∞` above this marks a path as diverging.
    pub divergence_bound: f64,
    pub predictor: Predictor,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            min_step: 1.0e-14,
            max_step: 0.1,
            step_shrink: 0.5,
            step_grow: 1.5,
            grow_after: 3,
            newton_tol: 1.0e-10,
            max_newton_iters: 4,
            max_steps: 10_000,
            corrector_tol: 1.0e-8,
            endgame_threshold: 0.99,
            endgame_tol: 1.0e-12,
            final_newton_iters: 8,
            divergence_bound: 1.0e8,
            predictor: Predictor::Euler,
        }
    }
}

impl TrackerOptions {
    pub fn validate(&self) -> Result<(), String> {
        let ordered = 0.0 < self.min_step
            && self.min_step < self.initial_step
            && self.initial_step <= self.max_step
            && self.max_step <= 1.0;
        if !ordered {
            return Err("need 0 < min_step < initial_step <= max_step <= 1".into());
        }
        if !(0.0 < self.step_shrink && self.step_shrink < 1.0 && self.step_grow >= 1.0) {
            return Err("need 0 < step_shrink < 1 <= step_grow".into());
        }
        let tols = [self.newton_tol, self.corrector_tol, self.endgame_tol, self.divergence_bound];
        if tols.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err("tolerances must be positive".into());
        }
        if self.max_newton_iters == 0 || self.max_steps == 0 {
            return Err("iteration limits must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathStatus {
    Success,
    Diverged,
    StepLimit,
    Singular,
}

impl std::fmt::Display for PathStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PathStatus::Success => "success",
            PathStatus::Diverged => "diverged",
            PathStatus::StepLimit => "stepLimit",
            PathStatus::Singular => "singular",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub status: PathStatus,
    pub endpoint: Vec<C64>,
    pub final_residual: f64,
    pub steps: usize,
    /// Value of `t` reached.
    pub t: f64,
}

impl PathResult {
    pub fn is_success(&self) -> bool {
        self.status == PathStatus::Success
    }
}

/// Counts of path outcomes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PathStats {
    pub tracked: usize,
    pub succeeded: usize,
    pub diverged: usize,
    pub failed: usize,
}

impl PathStats {
    pub fn from_results(results: &[PathResult]) -> Self {
        let mut s = Self::default();
        s.record(results);
        s
    }

    pub fn record(&mut self, results: &[PathResult]) {
        for r in results {
            self.tracked += 1;
            match r.status {
                PathStatus::Success => self.succeeded += 1,
                PathStatus::Diverged => self.diverged += 1,
                PathStatus::StepLimit | PathStatus::Singular => self.failed += 1,
            }
        }
    }

    pub fn merge(&mut self, other: PathStats) {
        self.tracked += other.tracked;
        self.succeeded += other.succeeded;
        self.diverged += other.diverged;
        self.failed += other.failed;
    }
}
