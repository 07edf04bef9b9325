use crate::kernel::{vec_norm_inf, Lu, C64};
use crate::systems::PolynomialSystem;

use super::TrackerOptions;

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonResult {
    pub x: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NewtonFailure {
    #[error("singular Jacobian after {iterations} iterations")]
    Singular { iterations: usize },
    #[error("Newton updates stopped contracting after {iterations} iterations")]
    Diverging { iterations: usize },
    #[error("residual {residual:e} above tolerance after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },
    #[error("system is not square: {equations} equations in {vars} unknowns")]
    NotSquare { equations: usize, vars: usize },
}

/// Plain Newton iteration `x <- x - J(x)^{-1} f(x)`, succeeding once the
/// system's residual measure drops below `opts.newton_tol` within
/// `opts.max_newton_iters` updates.
pub fn newton_correct<S: PolynomialSystem + ?Sized>(
    sys: &S,
    x0: &[C64],
    opts: &TrackerOptions,
) -> Result<NewtonResult, NewtonFailure> {
    if sys.num_equations() != sys.num_vars() {
        return Err(NewtonFailure::NotSquare {
            equations: sys.num_equations(),
            vars: sys.num_vars(),
        });
    }
    let mut x = x0.to_vec();
    let mut prev_dx = f64::INFINITY;
    for iterations in 0..=opts.max_newton_iters {
        let residual = sys.residual_norm(&x);
        if residual < opts.newton_tol {
            return Ok(NewtonResult {
                x,
                residual,
                iterations,
            });
        }
        if iterations == opts.max_newton_iters {
            return Err(NewtonFailure::NotConverged {
                residual,
                iterations,
            });
        }
        let (f, jac) = sys.evaluate_with_jacobian(&x);
        let dx = Lu::factor(&jac)
            .and_then(|lu| lu.solve_vec(&f))
            .map_err(|_| NewtonFailure::Singular { iterations })?;
        let step = vec_norm_inf(&dx);
        if !step.is_finite() {
            return Err(NewtonFailure::Singular { iterations });
        }
        if step > prev_dx && step > opts.corrector_tol * (1.0 + vec_norm_inf(&x)) {
            return Err(NewtonFailure::Diverging { iterations });
        }
        prev_dx = step;
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi -= d;
        }
    }
    unreachable!("loop returns on its last iteration")
}
