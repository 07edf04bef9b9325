//! Flags, problem instances, incidence verification and the local echelon
//! coordinates on Richardson varieties in which the solver works.

use crate::combinatorics::{richardson_dimension, Bracket, SchubertProblem};
use crate::error::{Result, SchubertError};
use crate::kernel::{
    condition_number, orthonormal_columns, random_flag_matrix, singular_values, CMatrix, Lu,
    RandomSource, C64, DEFAULT_RANK_TOL, ONE, ZERO,
};

pub const DEFAULT_INCIDENCE_TOL: f64 = 1.0e-8;

const FLAG_CONDITION_LIMIT: f64 = 1.0e8;
const NORMALIZATION_PIVOT_TOL: f64 = 1.0e-10;

/// A complete flag; `F_i` is the span of the first `i` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    matrix: CMatrix,
}

impl Flag {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(SchubertError::Shape(format!(
                "flag must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() || condition_number(&matrix) >= FLAG_CONDITION_LIMIT {
            return Err(SchubertError::InvalidFlag {
                index: 0,
                reason: "matrix is singular or too ill-conditioned".into(),
            });
        }
        Ok(Self { matrix })
    }

    /// Standard flag `span(e_1, ..., e_i)`.
    pub fn standard(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n),
        }
    }

    /// Opposite flag `span(e_n, ..., e_{n-i+1})`.
    pub fn opposite(n: usize) -> Self {
        Self {
            matrix: CMatrix::exchange(n),
        }
    }

    pub fn random(n: usize, rng: &mut RandomSource) -> Result<Self> {
        Ok(Self {
            matrix: random_flag_matrix(n, rng)?,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Basis of `F_i`.
    pub fn subspace(&self, i: usize) -> CMatrix {
        self.matrix.leading_columns(i)
    }
}

/// A k-plane represented by an `n x k` matrix of full column rank.
#[derive(Debug, Clone, PartialEq)]
pub struct KPlane {
    matrix: CMatrix,
}

impl KPlane {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let k = matrix.cols();
        if k == 0 || k >= matrix.rows() {
            return Err(SchubertError::Shape(format!(
                "k-plane matrix must be n x k with 0 < k < n, got {}x{}",
                matrix.rows(),
                k
            )));
        }
        if crate::kernel::numerical_rank(&matrix, DEFAULT_RANK_TOL) != k {
            return Err(SchubertError::Shape("k-plane matrix is rank deficient".into()));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn k(&self) -> usize {
        self.matrix.cols()
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }
}

/// A problem together with one flag per condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SchubertInstance {
    problem: SchubertProblem,
    flags: Vec<Flag>,
}

impl SchubertInstance {
    pub fn new(problem: SchubertProblem, flags: Vec<Flag>) -> Result<Self> {
        if flags.len() != problem.len() {
            return Err(SchubertError::LengthMismatch {
                expected: problem.len(),
                actual: flags.len(),
            });
        }
        for (index, f) in flags.iter().enumerate() {
            if f.n() != problem.n() {
                return Err(SchubertError::InvalidFlag {
                    index,
                    reason: format!("expected {0}x{0}, got {1}x{1}", problem.n(), f.n()),
                });
            }
        }
        Ok(Self { problem, flags })
    }

    /// Pairs every condition with an independent random flag.
    pub fn random(problem: &SchubertProblem, rng: &mut RandomSource) -> Result<Self> {
        let flags = (0..problem.len())
            .map(|_| Flag::random(problem.n(), rng))
            .collect::<Result<Vec<_>>>()?;
        Self::new(problem.clone(), flags)
    }

    pub fn problem(&self) -> &SchubertProblem {
        &self.problem
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn k(&self) -> usize {
        self.problem.k()
    }

    pub fn n(&self) -> usize {
        self.problem.n()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Bracket, &Flag)> {
        self.problem.conditions().iter().zip(&self.flags)
    }

    /// Conditions reordered canonically (see [`SchubertProblem::sorted`]),
    /// flags following their conditions.
    pub fn sorted(&self) -> (SchubertInstance, Vec<usize>) {
        let (problem, perm) = self.problem.sorted();
        let flags = perm.iter().map(|&i| self.flags[i].clone()).collect();
        (SchubertInstance { problem, flags }, perm)
    }
}

/// Per-condition incidence residuals of a k-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceReport {
    /// `residuals[c]` is the worst residual over the nontrivial indices of condition `c`.
    pub residuals: Vec<f64>,
}

impl IncidenceReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn worst_condition(&self) -> Option<usize> {
        self.residuals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
    }
}

/// Singular values of `[orth(H) | orth(F_{a_i})]` for one incidence index.
fn incidence_singular_values(h_basis: &CMatrix, flag: &Flag, a_i: usize) -> Vec<f64> {
    let f_basis = orthonormal_columns(&flag.subspace(a_i));
    let stacked = h_basis.hstack(&f_basis).expect("row counts agree");
    singular_values(&stacked)
}

/// Incidence residual of `h` for every condition. For condition `a` and index
/// `i`, `dim H ∩ F_{a_i} >= i` holds exactly when `[H | F_{a_i}]` has rank
/// at most `k + a_i - i`; the residual is the next singular value relative to
/// the largest, computed on orthonormal bases of both spans.
pub fn incidence_residuals(h: &CMatrix, inst: &SchubertInstance) -> Result<IncidenceReport> {
    let (k, n) = (inst.k(), inst.n());
    if h.rows() != n || h.cols() != k {
        return Err(SchubertError::Shape(format!(
            "expected a {n}x{k} matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let h_basis = orthonormal_columns(h);
    let residuals = inst
        .pairs()
        .map(|(bracket, flag)| {
            let mut worst = 0.0f64;
            for i in 0..k {
                if !bracket.is_nontrivial_at(i) {
                    continue;
                }
                let a_i = bracket.entries()[i];
                let allowed_rank = k + a_i - (i + 1);
                let sv = incidence_singular_values(&h_basis, flag, a_i);
                let top = sv[0];
                let r = if top > 0.0 { sv[allowed_rank] / top } else { 0.0 };
                worst = worst.max(r);
            }
            worst
        })
        .collect();
    Ok(IncidenceReport { residuals })
}

/// Whether `h` lies in every Schubert variety of the instance at tolerance `tol`.
pub fn check_incidence(h: &CMatrix, inst: &SchubertInstance, tol: f64) -> Result<bool> {
    Ok(incidence_residuals(h, inst)?.max_residual() <= tol)
}

/// Numerical ranks of `[H | F_{a_i}]` for each condition and nontrivial `i`,
/// as `(condition, i, rank, expected_rank)`.
pub fn incidence_ranks(
    h: &CMatrix,
    inst: &SchubertInstance,
    tol: f64,
) -> Result<Vec<(usize, usize, usize, usize)>> {
    let k = inst.k();
    if h.rows() != inst.n() || h.cols() != k {
        return Err(SchubertError::Shape("k-plane does not match instance".into()));
    }
    let h_basis = orthonormal_columns(h);
    let mut out = Vec::new();
    for (c, (bracket, flag)) in inst.pairs().enumerate() {
        for i in 0..k {
            if !bracket.is_nontrivial_at(i) {
                continue;
            }
            let a_i = bracket.entries()[i];
            let sv = incidence_singular_values(&h_basis, flag, a_i);
            let rank = sv.iter().filter(|&&s| s > tol * sv[0]).count();
            out.push((c, i, rank, k + a_i - (i + 1)));
        }
    }
    Ok(out)
}

/// Sine of the largest principal angle between the column spans of `a` and `b`.
pub fn span_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let qa = orthonormal_columns(a);
    let qb = orthonormal_columns(b);
    // (I - qa qa^H) qb
    let residual = qb.combine(ONE, &(&qa * &(&qa.adjoint() * &qb)), -ONE);
    singular_values(&residual).first().copied().unwrap_or(0.0)
}

/// Moves the first two flags of `inst` to the standard and opposite flags.
///
/// Returns the transformed instance and `g` with `g F^1` upper triangular and
/// `g F^2` spanning the opposite flag; every flag `F` is replaced by `g F`
/// (the first two by the exact standard and exchange matrices) and `H` solves
/// the original instance iff `g H` solves the new one.
pub fn normalize_instance(inst: &SchubertInstance) -> Result<(SchubertInstance, CMatrix)> {
    if inst.flags.len() < 2 {
        return Err(SchubertError::LengthMismatch {
            expected: 2,
            actual: inst.flags.len(),
        });
    }
    let g = normalizing_transform(inst.flags[0].matrix(), inst.flags[1].matrix())?;
    let n = inst.n();
    let mut flags = Vec::with_capacity(inst.flags.len());
    flags.push(Flag::standard(n));
    flags.push(Flag::opposite(n));
    for f in &inst.flags[2..] {
        let mut m = &g * f.matrix();
        m.normalize_columns();
        flags.push(Flag { matrix: m });
    }
    Ok((
        SchubertInstance {
            problem: inst.problem.clone(),
            flags,
        },
        g,
    ))
}

/// `g = U A^{-1}` where `R B^{-1} A = L U` without pivoting (`R` the row
/// reversal); then `g A = U` and `g B = L^{-1} R`. Rows of `g` are
/// equilibrated, which preserves both target flags.
pub fn normalizing_transform(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    let b_lu = Lu::factor(b)?;
    let m = b_lu
        .solve(a)
        .map_err(|_| SchubertError::DegenerateFlags)?;
    let reversed = &CMatrix::exchange(n) * &m;
    let u = lu_upper_no_pivot(&reversed).ok_or(SchubertError::DegenerateFlags)?;
    let a_inv = Lu::factor(a)?
        .inverse()
        .map_err(|_| SchubertError::DegenerateFlags)?;
    let mut g = &u * &a_inv;
    for i in 0..n {
        let norm = g.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for j in 0..n {
            g[(i, j)] /= norm;
        }
    }
    if !g.is_finite() {
        return Err(SchubertError::DegenerateFlags);
    }
    Ok(g)
}

// Upper factor of an unpivoted LU; None when a leading principal minor
// vanishes (relative to the matrix scale).
fn lu_upper_no_pivot(m: &CMatrix) -> Option<CMatrix> {
    let n = m.rows();
    let scale = m.max_abs();
    let mut w = m.clone();
    for col in 0..n {
        let pivot = w[(col, col)];
        if pivot.norm() <= NORMALIZATION_PIVOT_TOL * scale {
            return None;
        }
        for row in col + 1..n {
            let f = w[(row, col)] / pivot;
            w[(row, col)] = ZERO;
            for j in col + 1..n {
                let u = w[(col, j)];
                w[(row, j)] -= f * u;
            }
        }
    }
    Some(w)
}

/// Echelon coordinates on the Richardson variety `X_a(E) ∩ X_b(E')` for the
/// standard flag `E` and opposite flag `E'`.
///
/// Column `i` has a 1 in row `a_i`, zeros below it and zeros above row
/// `γ_i = n + 1 - b_{k+1-i}`; the entries in rows `γ_i..a_i` are the free
/// coordinates. Rows here are 1-based as in brackets; `free_positions` is
/// 0-based `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinatePatch {
    k: usize,
    n: usize,
    pivots: Bracket,
    opposite: Bracket,
    lower_bounds: Vec<usize>,
    free_positions: Vec<(usize, usize)>,
}

impl CoordinatePatch {
    pub fn build(a: &Bracket, b: &Bracket) -> Result<Self> {
        let dim = richardson_dimension(a, b)?.ok_or_else(|| SchubertError::EmptyRichardson {
            a: a.to_string(),
            b: b.to_string(),
        })?;
        let (k, n) = (a.k(), a.n());
        let lower_bounds: Vec<usize> = (0..k).map(|i| n + 1 - b.entries()[k - 1 - i]).collect();
        let mut free_positions = Vec::with_capacity(dim);
        for col in 0..k {
            for row in lower_bounds[col]..a.entries()[col] {
                free_positions.push((row - 1, col));
            }
        }
        debug_assert_eq!(free_positions.len(), dim);
        Ok(Self {
            k,
            n,
            pivots: a.clone(),
            opposite: b.clone(),
            lower_bounds,
            free_positions,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pivots(&self) -> &Bracket {
        &self.pivots
    }

    pub fn opposite(&self) -> &Bracket {
        &self.opposite
    }

    pub fn lower_bounds(&self) -> &[usize] {
        &self.lower_bounds
    }

    pub fn free_positions(&self) -> &[(usize, usize)] {
        &self.free_positions
    }

    pub fn num_vars(&self) -> usize {
        self.free_positions.len()
    }

    /// The `n x k` matrix with coordinates `x`; affine in `x`, always rank `k`.
    pub fn embed(&self, x: &[C64]) -> Result<CMatrix> {
        if x.len() != self.num_vars() {
            return Err(SchubertError::LengthMismatch {
                expected: self.num_vars(),
                actual: x.len(),
            });
        }
        Ok(self.embed_unchecked(x))
    }

    pub(crate) fn embed_unchecked(&self, x: &[C64]) -> CMatrix {
        let mut h = CMatrix::zeros(self.n, self.k);
        for (col, &a) in self.pivots.entries().iter().enumerate() {
            h[(a - 1, col)] = ONE;
        }
        for (&(r, c), v) in self.free_positions.iter().zip(x) {
            h[(r, c)] = *v;
        }
        h
    }

    pub fn embed_plane(&self, x: &[C64]) -> Result<KPlane> {
        Ok(KPlane {
            matrix: self.embed(x)?,
        })
    }

    /// Patch coordinates of the column span of `h`, or `None` when the span
    /// is not in this chart (relative misfit above `tol`).
    pub fn coordinates_of(&self, h: &CMatrix, tol: f64) -> Option<Vec<C64>> {
        if h.rows() != self.n || h.cols() != self.k {
            return None;
        }
        let basis = orthonormal_columns(h);
        let mut cols = Vec::with_capacity(self.k);
        for col in 0..self.k {
            let pivot = self.pivots.entries()[col] - 1;
            let low = self.lower_bounds[col] - 1;
            // Rows outside [low, pivot] must vanish and row `pivot` equals 1.
            let constrained: Vec<usize> = (0..self.n).filter(|&r| r < low || r > pivot).collect();
            let all_cols: Vec<usize> = (0..self.k).collect();
            let pivot_row = CMatrix::from_fn(1, self.k, |_, j| basis[(pivot, j)]);
            let system = stack_rows(&basis.select(&constrained, &all_cols), &pivot_row);
            let mut rhs = CMatrix::zeros(system.rows(), 1);
            rhs[(system.rows() - 1, 0)] = ONE;
            if system.rows() < self.k {
                return None;
            }
            let coeffs = crate::kernel::solve_linear(&system, &rhs).ok()?;
            let misfit = (&system * &coeffs).combine(ONE, &rhs, -ONE).max_abs();
            let column = &basis * &coeffs;
            let scale = column.max_abs().max(1.0);
            if misfit > tol * scale {
                return None;
            }
            cols.push(column);
        }
        Some(
            self.free_positions
                .iter()
                .map(|&(r, c)| cols[c][(r, 0)])
                .collect(),
        )
    }
}

fn stack_rows(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    CMatrix::from_fn(top.rows() + bottom.rows(), top.cols(), |i, j| {
        if i < top.rows() {
            top[(i, j)]
        } else {
            bottom[(i - top.rows(), j)]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::numerical_rank;

    fn b(k: usize, n: usize, e: &[usize]) -> Bracket {
        Bracket::new(k, n, e.to_vec()).unwrap()
    }

    #[test]
    fn four_lines_patch_shape() {
        let a = b(2, 4, &[2, 4]);
        let patch = CoordinatePatch::build(&a, &a).unwrap();
        assert_eq!(patch.free_positions(), &[(0, 0), (2, 1)]);
        let (u, v) = (C64::new(0.3, -1.0), C64::new(2.0, 0.5));
        let h = patch.embed(&[u, v]).unwrap();
        let expected = CMatrix::from_rows(&[
            vec![u, ZERO],
            vec![ONE, ZERO],
            vec![ZERO, v],
            vec![ZERO, ONE],
        ])
        .unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn zero_dimensional_and_gr36_patches() {
        let p = CoordinatePatch::build(&b(2, 4, &[1, 2]), &b(2, 4, &[3, 4])).unwrap();
        assert_eq!(p.num_vars(), 0);
        assert_eq!(p.embed(&[]).unwrap(), CMatrix::identity(4).leading_columns(2));
        let s = b(3, 6, &[3, 5, 6]);
        assert_eq!(CoordinatePatch::build(&s, &s).unwrap().num_vars(), 7);
        assert!(CoordinatePatch::build(&b(2, 4, &[1, 2]), &b(2, 4, &[1, 2])).is_err());
    }

    #[test]
    fn embed_rejects_wrong_length() {
        let a = b(2, 4, &[2, 4]);
        let patch = CoordinatePatch::build(&a, &a).unwrap();
        assert!(patch.embed(&[ONE]).is_err());
    }

    #[test]
    fn coordinates_round_trip_through_a_change_of_basis() {
        let mut rng = RandomSource::new(3);
        let a = b(3, 7, &[3, 5, 7]);
        let c = b(3, 7, &[4, 6, 7]);
        let patch = CoordinatePatch::build(&a, &c).unwrap();
        let x = rng.gaussian_vec(patch.num_vars());
        let h = patch.embed(&x).unwrap();
        let mixed = &h * &rng.gaussian_matrix(3, 3);
        let back = patch.coordinates_of(&mixed, 1e-8).unwrap();
        for (u, v) in x.iter().zip(&back) {
            assert!((u - v).norm() < 1e-10);
        }
        // A random plane is not in the chart.
        assert!(patch.coordinates_of(&rng.gaussian_matrix(7, 3), 1e-8).is_none());
    }

    #[test]
    fn standard_flag_point_satisfies_point_condition() {
        let mut rng = RandomSource::new(5);
        let f = Flag::random(5, &mut rng).unwrap();
        let prob = crate::combinatorics::SchubertProblem::new(2, 5, vec![b(2, 5, &[1, 2])]).unwrap();
        let inst = SchubertInstance::new(prob, vec![f.clone()]).unwrap();
        assert!(check_incidence(&f.subspace(2), &inst, DEFAULT_INCIDENCE_TOL).unwrap());
        assert!(!check_incidence(&rng.gaussian_matrix(5, 2), &inst, DEFAULT_INCIDENCE_TOL).unwrap());
    }

    #[test]
    fn normalization_maps_first_flags_to_standard_and_opposite() {
        let mut rng = RandomSource::new(11);
        let prob = crate::combinatorics::SchubertProblem::new(2, 4, vec![b(2, 4, &[2, 4]); 4]).unwrap();
        let inst = SchubertInstance::random(&prob, &mut rng).unwrap();
        let (norm, g) = normalize_instance(&inst).unwrap();
        let ga = &g * inst.flags()[0].matrix();
        let gb = &g * inst.flags()[1].matrix();
        for i in 0..4 {
            for j in 0..4 {
                // g F^1 upper triangular: F^1_j = span(e_1..e_j).
                if i > j {
                    assert!(ga[(i, j)].norm() < 1e-12 * ga.max_abs());
                }
                // g F^2 column j supported in rows >= n-1-j.
                if i + j + 1 < 4 {
                    assert!(gb[(i, j)].norm() < 1e-12 * gb.max_abs());
                }
            }
        }
        assert_eq!(norm.flags()[0].matrix(), &CMatrix::identity(4));
        assert_eq!(norm.flags()[1].matrix(), &CMatrix::exchange(4));
    }

    #[test]
    fn normalization_of_standard_pair_is_diagonal() {
        let prob = crate::combinatorics::SchubertProblem::new(2, 4, vec![b(2, 4, &[2, 4]); 4]).unwrap();
        let mut rng = RandomSource::new(1);
        let mut flags = vec![Flag::standard(4), Flag::opposite(4)];
        flags.push(Flag::random(4, &mut rng).unwrap());
        flags.push(Flag::random(4, &mut rng).unwrap());
        let inst = SchubertInstance::new(prob, flags).unwrap();
        let (_, g) = normalize_instance(&inst).unwrap();
        assert!(g.combine(ONE, &CMatrix::identity(4), -ONE).max_abs() < 1e-14);
    }

    #[test]
    fn coincident_first_flags_are_degenerate() {
        let prob = crate::combinatorics::SchubertProblem::new(2, 4, vec![b(2, 4, &[2, 4]); 4]).unwrap();
        let mut rng = RandomSource::new(2);
        let f = Flag::random(4, &mut rng).unwrap();
        let flags = vec![f.clone(), f.clone(), f.clone(), f];
        let inst = SchubertInstance::new(prob, flags).unwrap();
        assert_eq!(normalize_instance(&inst).unwrap_err(), SchubertError::DegenerateFlags);
    }

    #[test]
    fn embedded_points_satisfy_both_patch_conditions() {
        let mut rng = RandomSource::new(17);
        let a = b(3, 6, &[2, 5, 6]);
        let c = b(3, 6, &[3, 4, 6]);
        let patch = CoordinatePatch::build(&a, &c).unwrap();
        let codim_rest = 9 - a.codimension() - c.codimension();
        assert_eq!(patch.num_vars(), codim_rest);
        for _ in 0..20 {
            let h = patch.embed(&rng.gaussian_vec(patch.num_vars())).unwrap();
            for (bracket, flag) in [(&a, Flag::standard(6)), (&c, Flag::opposite(6))] {
                for i in 0..3 {
                    let m = h.hstack(&flag.subspace(bracket.entries()[i])).unwrap();
                    assert!(numerical_rank(&m, 1e-10) <= 3 + bracket.entries()[i] - (i + 1));
                }
            }
        }
    }

    #[test]
    fn span_distance_ignores_basis_choice() {
        let mut rng = RandomSource::new(23);
        let h = rng.gaussian_matrix(6, 3);
        let h2 = &h * &rng.gaussian_matrix(3, 3);
        assert!(span_distance(&h, &h2) < 1e-12);
        assert!(span_distance(&h, &rng.gaussian_matrix(6, 3)) > 1e-3);
    }
}
