use rayon::prelude::*;

use crate::kernel::{vec_norm_inf, Lu, C64};

use super::{Homotopy, PathResult, PathStatus, Predictor, TrackerOptions};

/// Tracks one path from `t = 0` to `t = 1`. Never panics on numerical
/// failure; the outcome is encoded in the returned status.
pub fn track_path<H: Homotopy + ?Sized>(h: &H, start: &[C64], opts: &TrackerOptions) -> PathResult {
    let mut x = start.to_vec();
    let mut t = 0.0;
    let mut dt = opts.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    let finish = |status, x: Vec<C64>, t: f64, steps| PathResult {
        final_residual: if x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            h.residual(&x, t)
        } else {
            f64::INFINITY
        },
        status,
        endpoint: x,
        steps,
        t,
    };

    while t < 1.0 {
        if steps >= opts.max_steps {
            return finish(PathStatus::StepLimit, x, t, steps);
        }
        steps += 1;
        let step = dt.min(1.0 - t);
        let t1 = if t + step >= 1.0 { 1.0 } else { t + step };
        let tol = if t1 > opts.endgame_threshold {
            opts.endgame_tol
        } else {
            opts.corrector_tol
        };
        let next = predict(h, &x, t, t1 - t, opts.predictor).and_then(|xp| correct(h, xp, t1, tol, opts));
        match next {
            Some(xn) => {
                x = xn;
                if t > opts.endgame_threshold && t1 < 1.0 {
                    // Keep the step proportional to what remains of [t, 1].
                    dt = step * (1.0 - t1) / (1.0 - t);
                }
                t = t1;
                if vec_norm_inf(&x) > opts.divergence_bound {
                    return finish(PathStatus::Diverged, x, t, steps);
                }
                streak += 1;
                if streak >= opts.grow_after {
                    dt = (dt * opts.step_grow).min(opts.max_step);
                    streak = 0;
                }
            }
            None => {
                streak = 0;
                dt = step * opts.step_shrink;
                if dt < opts.min_step {
                    let status = if vec_norm_inf(&x) > opts.divergence_bound.sqrt() {
                        PathStatus::Diverged
                    } else {
                        PathStatus::Singular
                    };
                    return finish(status, x, t, steps);
                }
            }
        }
    }

    refine_endpoint(h, &mut x, opts);
    let norm = vec_norm_inf(&x);
    if !norm.is_finite() || norm > opts.divergence_bound {
        return finish(PathStatus::Diverged, x, 1.0, steps);
    }
    let residual = h.residual(&x, 1.0);
    let status = if residual < opts.newton_tol {
        PathStatus::Success
    } else {
        PathStatus::Singular
    };
    PathResult {
        status,
        endpoint: x,
        final_residual: residual,
        steps,
        t: 1.0,
    }
}

/// Tracks independent paths in parallel; `results[i]` belongs to `starts[i]`.
pub fn track_paths<H: Homotopy + ?Sized>(h: &H, starts: &[Vec<C64>], opts: &TrackerOptions) -> Vec<PathResult> {
    starts.par_iter().map(|s| track_path(h, s, opts)).collect()
}

// Davidenko tangent dx/dt = -H_x^{-1} H_t.
fn tangent<H: Homotopy + ?Sized>(h: &H, x: &[C64], t: f64) -> Option<Vec<C64>> {
    let ev = h.evaluate(x, t);
    let rhs: Vec<C64> = ev.jac_t.iter().map(|v| -v).collect();
    let v = Lu::factor(&ev.jac_x).ok()?.solve_vec(&rhs).ok()?;
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite()).then_some(v)
}

fn axpy(x: &[C64], a: f64, v: &[C64]) -> Vec<C64> {
    x.iter().zip(v).map(|(xi, vi)| xi + vi * a).collect()
}

fn predict<H: Homotopy + ?Sized>(h: &H, x: &[C64], t: f64, dt: f64, predictor: Predictor) -> Option<Vec<C64>> {
    let k1 = tangent(h, x, t)?;
    match predictor {
        Predictor::Euler => Some(axpy(x, dt, &k1)),
        Predictor::RungeKutta4 => {
            let k2 = tangent(h, &axpy(x, dt / 2.0, &k1), t + dt / 2.0)?;
            let k3 = tangent(h, &axpy(x, dt / 2.0, &k2), t + dt / 2.0)?;
            let k4 = tangent(h, &axpy(x, dt, &k3), t + dt)?;
            Some(
                (0..x.len())
                    .map(|i| x[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
                    .collect(),
            )
        }
    }
}

// Newton at fixed t. Accepts once the relative update falls below `tol`, or
// once updates stagnate at round-off level below `corrector_tol`; rejects on
// a singular Jacobian or a non-contracting update.
fn correct<H: Homotopy + ?Sized>(h: &H, mut x: Vec<C64>, t: f64, tol: f64, opts: &TrackerOptions) -> Option<Vec<C64>> {
    let mut prev = f64::INFINITY;
    for _ in 0..opts.max_newton_iters {
        let ev = h.evaluate(&x, t);
        let dx = Lu::factor(&ev.jac_x).ok()?.solve_vec(&ev.values).ok()?;
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi -= d;
        }
        let step = vec_norm_inf(&dx);
        let scale = 1.0 + vec_norm_inf(&x);
        if !step.is_finite() || !scale.is_finite() {
            return None;
        }
        if step <= tol * scale {
            return Some(x);
        }
        if step <= opts.corrector_tol * scale && step > 0.25 * prev {
            return Some(x);
        }
        if step > 0.5 * prev {
            return None;
        }
        prev = step;
    }
    None
}

fn refine_endpoint<H: Homotopy + ?Sized>(h: &H, x: &mut [C64], opts: &TrackerOptions) {
    let mut prev = f64::INFINITY;
    for _ in 0..opts.final_newton_iters {
        if h.residual(x, 1.0) < opts.newton_tol * 1.0e-3 {
            return;
        }
        let ev = h.evaluate(x, 1.0);
        let Some(dx) = Lu::factor(&ev.jac_x).ok().and_then(|lu| lu.solve_vec(&ev.values).ok()) else {
            return;
        };
        let step = vec_norm_inf(&dx);
        if !step.is_finite() || step > prev {
            return;
        }
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi -= d;
        }
        if step <= f64::EPSILON * (1.0 + vec_norm_inf(x)) {
            return;
        }
        prev = step;
    }
}
