use crate::combinatorics::{Bracket, SchubertProblem};
use crate::error::{Result, SchubertError};
use crate::geometry::{incidence_residuals, normalize_instance, CoordinatePatch, Flag, SchubertInstance};
use crate::kernel::{CMatrix, Lu, RandomSource, C64, ONE};
use crate::systems::{DeterminantalSystem, PolynomialSystem};

use super::{track_paths, Homotopy, HomotopyEval, PathResult, PathStatus, TrackerOptions};

/// Relative misfit allowed when locating a k-plane in the patch.
const PATCH_FIT_TOL: f64 = 1.0e-6;

/// Moves the trailing flags of a determinantal system:
/// `F_b(t) = (1 - t) γ_b F_b^from + t F_b^to`.
pub struct FlagHomotopy<'a> {
    system: &'a DeterminantalSystem,
    from: Vec<CMatrix>,
    to: Vec<CMatrix>,
    gammas: Vec<C64>,
    velocity: Vec<CMatrix>,
}

impl<'a> FlagHomotopy<'a> {
    pub fn new(system: &'a DeterminantalSystem, from: Vec<CMatrix>, to: Vec<CMatrix>, rng: &mut RandomSource) -> Result<Self> {
        let gammas = (0..from.len()).map(|_| rng.unit_complex()).collect();
        Self::with_gammas(system, from, to, gammas)
    }

    pub fn with_gammas(
        system: &'a DeterminantalSystem,
        from: Vec<CMatrix>,
        to: Vec<CMatrix>,
        gammas: Vec<C64>,
    ) -> Result<Self> {
        let blocks = system.blocks().len();
        for len in [from.len(), to.len(), gammas.len()] {
            if len != blocks {
                return Err(SchubertError::LengthMismatch {
                    expected: blocks,
                    actual: len,
                });
            }
        }
        let n = system.patch().n();
        if from.iter().chain(&to).any(|f| f.shape() != (n, n)) {
            return Err(SchubertError::Shape(format!("flags must be {n}x{n}")));
        }
        let velocity = from
            .iter()
            .zip(&to)
            .zip(&gammas)
            .map(|((f, g), &gamma)| f.combine(-gamma, g, ONE))
            .collect();
        Ok(Self {
            system,
            from,
            to,
            gammas,
            velocity,
        })
    }

    pub fn flags_at(&self, t: f64) -> Vec<CMatrix> {
        self.from
            .iter()
            .zip(&self.to)
            .zip(&self.gammas)
            .map(|((f, g), &gamma)| f.combine(gamma * (1.0 - t), g, C64::new(t, 0.0)))
            .collect()
    }
}

impl Homotopy for FlagHomotopy<'_> {
    fn num_vars(&self) -> usize {
        self.system.num_vars()
    }

    fn values(&self, x: &[C64], t: f64) -> Vec<C64> {
        self.system.evaluate_full(x, &self.flags_at(t), None, false).values
    }

    fn evaluate(&self, x: &[C64], t: f64) -> HomotopyEval {
        let ev = self
            .system
            .evaluate_full(x, &self.flags_at(t), Some(&self.velocity), true);
        HomotopyEval {
            values: ev.values,
            jac_x: ev.jacobian,
            jac_t: ev.flag_derivative,
        }
    }

    fn residual(&self, x: &[C64], t: f64) -> f64 {
        self.system.scaled_residual_with(x, &self.flags_at(t))
    }
}

/// Tracks patch solutions of `system` with trailing flags `from` to the
/// same system with trailing flags `to`.
pub fn transport(
    system: &DeterminantalSystem,
    from: &[CMatrix],
    to: &[CMatrix],
    starts: &[Vec<C64>],
    rng: &mut RandomSource,
    opts: &TrackerOptions,
) -> Result<Vec<PathResult>> {
    let h = FlagHomotopy::new(system, from.to_vec(), to.to_vec(), rng)?;
    Ok(track_paths(&h, starts, opts))
}

/// An instance sorted canonically and moved so that its first two flags are
/// the standard and opposite flags, with the matching coordinate patch.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFrame {
    /// `sorted[j]` is condition `perm[j]` of the input instance.
    pub perm: Vec<usize>,
    pub normalized: SchubertInstance,
    pub g: CMatrix,
    pub g_inv: CMatrix,
    pub patch: CoordinatePatch,
}

impl NormalizedFrame {
    /// An instance with a single condition is padded with a trivial
    /// condition on the opposite flag of its flag.
    pub fn new(inst: &SchubertInstance) -> Result<Self> {
        let padded;
        let inst = if inst.problem().len() < 2 {
            padded = pad_single(inst)?;
            &padded
        } else {
            inst
        };
        let (sorted, perm) = inst.sorted();
        let (normalized, g) = normalize_instance(&sorted)?;
        let g_inv = Lu::factor(&g)?.inverse().map_err(|_| SchubertError::DegenerateFlags)?;
        let c = normalized.problem().conditions();
        let patch = CoordinatePatch::build(&c[0], &c[1])?;
        Ok(Self {
            perm,
            normalized,
            g,
            g_inv,
            patch,
        })
    }

    pub fn system(&self) -> Result<DeterminantalSystem> {
        DeterminantalSystem::build(&self.normalized, &self.patch)
    }

    pub fn trailing_flags(&self) -> Vec<CMatrix> {
        self.normalized.flags()[2..].iter().map(|f| f.matrix().clone()).collect()
    }

    /// Patch coordinates of a k-plane given in the original basis.
    pub fn to_patch(&self, h: &CMatrix) -> Option<Vec<C64>> {
        if h.rows() != self.patch.n() || h.cols() != self.patch.k() {
            return None;
        }
        self.patch.coordinates_of(&(&self.g * h), PATCH_FIT_TOL)
    }

    /// The k-plane with patch coordinates `x`, in the original basis with
    /// unit columns.
    pub fn to_original(&self, x: &[C64]) -> Result<CMatrix> {
        let mut h = &self.g_inv * &self.patch.embed(x)?;
        h.normalize_columns();
        Ok(h)
    }
}

fn pad_single(inst: &SchubertInstance) -> Result<SchubertInstance> {
    let (k, n) = (inst.k(), inst.n());
    let mut conditions = inst.problem().conditions().to_vec();
    conditions.push(Bracket::trivial(k, n)?);
    let mut flags = inst.flags().to_vec();
    let opposite = inst.flags()[0].matrix() * &CMatrix::exchange(n);
    flags.push(Flag::new(opposite)?);
    SchubertInstance::new(SchubertProblem::new(k, n, conditions)?, flags)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransportFailure {
    #[error("solution is not in the coordinate patch of the source instance")]
    NotInPatch,
    #[error("path ended with status {status} (residual {residual:e})")]
    Path { status: PathStatus, residual: f64 },
    #[error("endpoint fails incidence on the target instance (residual {residual:e})")]
    Verification { residual: f64 },
}

/// Carries solutions of `(problem, from)` to `(problem, to)` along a
/// parameter homotopy in the flags. The output has one entry per input
/// solution, in input order.
pub fn change_flags(
    problem: &SchubertProblem,
    solutions: &[CMatrix],
    from: &[Flag],
    to: &[Flag],
    rng: &mut RandomSource,
    opts: &TrackerOptions,
    tol: f64,
) -> Result<Vec<std::result::Result<CMatrix, TransportFailure>>> {
    let inst_a = SchubertInstance::new(problem.clone(), from.to_vec())?;
    let inst_b = SchubertInstance::new(problem.clone(), to.to_vec())?;
    let (k, n) = (problem.k(), problem.n());
    if let Some(h) = solutions.iter().find(|h| h.shape() != (n, k)) {
        return Err(SchubertError::Shape(format!(
            "solution is {}x{}, expected {n}x{k}",
            h.rows(),
            h.cols()
        )));
    }
    let frame_a = NormalizedFrame::new(&inst_a)?;
    let frame_b = NormalizedFrame::new(&inst_b)?;
    let system = frame_a.system()?.square_up(rng)?;

    let coords: Vec<Option<Vec<C64>>> = solutions.iter().map(|h| frame_a.to_patch(h)).collect();
    let starts: Vec<Vec<C64>> = coords.iter().flatten().cloned().collect();
    let mut tracked = transport(
        &system,
        &frame_a.trailing_flags(),
        &frame_b.trailing_flags(),
        &starts,
        rng,
        opts,
    )?
    .into_iter();

    let mut out = Vec::with_capacity(solutions.len());
    for c in &coords {
        if c.is_none() {
            out.push(Err(TransportFailure::NotInPatch));
            continue;
        }
        let r = tracked.next().expect("one result per start");
        if !r.is_success() {
            out.push(Err(TransportFailure::Path {
                status: r.status,
                residual: r.final_residual,
            }));
            continue;
        }
        let h = frame_b.to_original(&r.endpoint)?;
        let residual = incidence_residuals(&h, &inst_b)?.max_residual();
        out.push(if residual < tol {
            Ok(h)
        } else {
            Err(TransportFailure::Verification { residual })
        });
    }
    Ok(out)
}
