//! Determinantal polynomial systems in patch coordinates.
//!
//! After normalization the first two conditions are absorbed into the
//! coordinate patch. Every other condition `(a, F)` and every nontrivial `i`
//! requires `rank [H(x) | F_{a_i}] <= k + a_i - i`, i.e. the vanishing of all
//! minors of size `k + a_i - i + 1`. Each patch coordinate occupies exactly
//! one entry of `H(x)`, so the partial derivative of a minor with respect to
//! it is a single cofactor of the assembled matrix.

use crate::combinatorics::Bracket;
use crate::error::{Result, SchubertError};
use crate::geometry::{CoordinatePatch, SchubertInstance};
use crate::kernel::{vec_norm_inf, CMatrix, Lu, RandomSource, C64, ONE, ZERO};

/// Square polynomial-like system `f: C^n -> C^m` with analytic Jacobian.
pub trait PolynomialSystem: Sync {
    fn num_vars(&self) -> usize;

    fn num_equations(&self) -> usize;

    fn evaluate(&self, x: &[C64]) -> Vec<C64>;

    /// Values and Jacobian (`num_equations x num_vars`).
    fn evaluate_with_jacobian(&self, x: &[C64]) -> (Vec<C64>, CMatrix);

    /// Scale-aware residual used for convergence decisions.
    fn residual_norm(&self, x: &[C64]) -> f64 {
        vec_norm_inf(&self.evaluate(x))
    }
}

/// One minor of `[H(x) | F_{a_i}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinorEquation {
    /// Rows of the `n x (k + a_i)` matrix, 0-based.
    pub rows: Vec<usize>,
    /// Columns of `H` used, 0-based.
    pub plane_cols: Vec<usize>,
    /// Columns of the flag used, 0-based, all `< a_i`.
    pub flag_cols: Vec<usize>,
    /// `(variable, assembly row, assembly column)` for every coordinate
    /// appearing in the minor.
    pub slots: Vec<(usize, usize, usize)>,
    /// Upper bound on the total degree in the patch coordinates.
    pub degree: usize,
}

impl MinorEquation {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    fn assemble(&self, h: &CMatrix, flag: &CMatrix) -> CMatrix {
        let p = self.plane_cols.len();
        CMatrix::from_fn(self.rows.len(), self.rows.len(), |a, b| {
            let r = self.rows[a];
            if b < p {
                h[(r, self.plane_cols[b])]
            } else {
                flag[(r, self.flag_cols[b - p])]
            }
        })
    }
}

/// All equations contributed by one condition, before or after mixing.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionBlock {
    /// Index of the condition in the (sorted, normalized) instance.
    pub condition: usize,
    pub bracket: Bracket,
    pub minors: Vec<MinorEquation>,
    /// `provenance[j]` is the 0-based incidence index `i` of minor `j`.
    pub provenance: Vec<usize>,
    /// Random combination `codim x minors.len()` after squaring up.
    pub mixing: Option<CMatrix>,
}

impl ConditionBlock {
    pub fn num_equations(&self) -> usize {
        match &self.mixing {
            Some(m) => m.rows(),
            None => self.minors.len(),
        }
    }

    fn degrees(&self) -> Vec<usize> {
        match &self.mixing {
            None => self.minors.iter().map(|m| m.degree).collect(),
            Some(mix) => {
                let d = self.minors.iter().map(|m| m.degree).max().unwrap_or(0);
                vec![d; mix.rows()]
            }
        }
    }
}

/// Full evaluation of a determinantal system.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub values: Vec<C64>,
    pub jacobian: CMatrix,
    /// Derivative along the supplied flag velocity, if one was given.
    pub flag_derivative: Vec<C64>,
    /// Hadamard-type bound on each equation's magnitude, for scaled residuals.
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantalSystem {
    patch: CoordinatePatch,
    blocks: Vec<ConditionBlock>,
    flags: Vec<CMatrix>,
}

impl DeterminantalSystem {
    /// Equations for conditions `2..` of a normalized instance on the patch
    /// of its first two conditions.
    pub fn build(inst: &SchubertInstance, patch: &CoordinatePatch) -> Result<Self> {
        let n = inst.n();
        let conditions = inst.problem().conditions();
        if conditions.len() < 2
            || inst.flags()[0].matrix() != &CMatrix::identity(n)
            || inst.flags()[1].matrix() != &CMatrix::exchange(n)
            || &conditions[0] != patch.pivots()
            || &conditions[1] != patch.opposite()
        {
            return Err(SchubertError::NotNormalized);
        }
        let structure = patch.embed_unchecked(&vec![ONE; patch.num_vars()]);
        let mut var_at = vec![vec![None; patch.k()]; n];
        for (v, &(r, c)) in patch.free_positions().iter().enumerate() {
            var_at[r][c] = Some(v);
        }
        let mut blocks = Vec::new();
        let mut flags = Vec::new();
        for (c, (bracket, flag)) in inst.pairs().enumerate().skip(2) {
            let (minors, provenance) = condition_minors(bracket, &structure, &var_at);
            blocks.push(ConditionBlock {
                condition: c,
                bracket: bracket.clone(),
                minors,
                provenance,
                mixing: None,
            });
            flags.push(flag.matrix().clone());
        }
        Ok(Self {
            patch: patch.clone(),
            blocks,
            flags,
        })
    }

    pub fn patch(&self) -> &CoordinatePatch {
        &self.patch
    }

    pub fn blocks(&self) -> &[ConditionBlock] {
        &self.blocks
    }

    /// Flag matrices of the constrained conditions, one per block.
    pub fn flags(&self) -> &[CMatrix] {
        &self.flags
    }

    /// Same equations with the block flags replaced.
    pub fn with_flags(&self, flags: Vec<CMatrix>) -> Result<Self> {
        if flags.len() != self.flags.len() {
            return Err(SchubertError::LengthMismatch {
                expected: self.flags.len(),
                actual: flags.len(),
            });
        }
        Ok(Self {
            patch: self.patch.clone(),
            blocks: self.blocks.clone(),
            flags,
        })
    }

    pub fn is_square(&self) -> bool {
        self.num_equations() == self.num_vars()
    }

    /// Per-equation degree bounds.
    pub fn degrees(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(ConditionBlock::degrees).collect()
    }

    /// `(condition, codimension)` that produced each equation.
    pub fn equation_conditions(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.condition, b.num_equations()))
            .collect()
    }

    /// Replaces each condition's minors by `codim` random complex Gaussian
    /// combinations when it has more; blocks already square are untouched.
    pub fn square_up(&self, rng: &mut RandomSource) -> Result<Self> {
        let mut out = self.clone();
        for block in &mut out.blocks {
            let codim = block.bracket.codimension();
            let m = block.minors.len();
            if m < codim {
                return Err(SchubertError::Underdetermined {
                    equations: m,
                    vars: codim,
                });
            }
            if m > codim && block.mixing.is_none() {
                block.mixing = Some(rng.gaussian_matrix(codim, m));
            }
        }
        if out.num_equations() != out.num_vars() {
            return Err(SchubertError::Underdetermined {
                equations: out.num_equations(),
                vars: out.num_vars(),
            });
        }
        Ok(out)
    }

    /// Evaluates at `x` with `flags` in place of the stored block flags.
    /// `flag_velocity`, when given, yields the derivative of every equation
    /// along that direction in flag space.
    pub fn evaluate_full(
        &self,
        x: &[C64],
        flags: &[CMatrix],
        flag_velocity: Option<&[CMatrix]>,
        want_jacobian: bool,
    ) -> Evaluation {
        let n_eq = self.num_equations();
        let h = self.patch.embed_unchecked(x);
        let mut values = Vec::with_capacity(n_eq);
        let mut scales = Vec::with_capacity(n_eq);
        let mut jacobian = CMatrix::zeros(if want_jacobian { n_eq } else { 0 }, self.num_vars());
        let mut flag_derivative = Vec::new();
        let mut row = 0;
        for (bi, (block, flag)) in self.blocks.iter().zip(flags).enumerate() {
            let velocity = flag_velocity.map(|v| &v[bi]);
            let need_cof = want_jacobian || velocity.is_some();
            let mut minor_vals = Vec::with_capacity(block.minors.len());
            let mut minor_scales = Vec::with_capacity(block.minors.len());
            let mut minor_grads: Vec<Vec<(usize, C64)>> = Vec::new();
            let mut minor_dt = Vec::new();
            for minor in &block.minors {
                let m = minor.assemble(&h, flag);
                minor_scales.push((0..m.cols()).map(|j| m.column_norm(j)).product::<f64>());
                if need_cof {
                    let (det, cof) = det_and_cofactors(&m);
                    minor_vals.push(det);
                    if want_jacobian {
                        minor_grads.push(
                            minor
                                .slots
                                .iter()
                                .map(|&(v, a, b)| (v, cof[(a, b)]))
                                .collect(),
                        );
                    }
                    if let Some(vel) = velocity {
                        let p = minor.plane_cols.len();
                        let mut d = ZERO;
                        for (a, &r) in minor.rows.iter().enumerate() {
                            for (j, &fc) in minor.flag_cols.iter().enumerate() {
                                d += cof[(a, p + j)] * vel[(r, fc)];
                            }
                        }
                        minor_dt.push(d);
                    }
                } else {
                    minor_vals.push(det_only(&m));
                }
            }
            match &block.mixing {
                None => {
                    for j in 0..block.minors.len() {
                        values.push(minor_vals[j]);
                        scales.push(minor_scales[j]);
                        if want_jacobian {
                            for &(v, g) in &minor_grads[j] {
                                jacobian[(row + j, v)] += g;
                            }
                        }
                        if velocity.is_some() {
                            flag_derivative.push(minor_dt[j]);
                        }
                    }
                }
                Some(mix) => {
                    for e in 0..mix.rows() {
                        let mut val = ZERO;
                        let mut scale = 0.0;
                        let mut dt = ZERO;
                        for j in 0..block.minors.len() {
                            let w = mix[(e, j)];
                            val += w * minor_vals[j];
                            scale += w.norm() * minor_scales[j];
                            if want_jacobian {
                                for &(v, g) in &minor_grads[j] {
                                    jacobian[(row + e, v)] += w * g;
                                }
                            }
                            if velocity.is_some() {
                                dt += w * minor_dt[j];
                            }
                        }
                        values.push(val);
                        scales.push(scale);
                        if velocity.is_some() {
                            flag_derivative.push(dt);
                        }
                    }
                }
            }
            row += block.num_equations();
        }
        Evaluation {
            values,
            jacobian,
            flag_derivative,
            scales,
        }
    }

    /// Largest `|f_e(x)| / scale_e(x)` with the given flags.
    pub fn scaled_residual_with(&self, x: &[C64], flags: &[CMatrix]) -> f64 {
        let ev = self.evaluate_full(x, flags, None, false);
        scaled_max(&ev.values, &ev.scales)
    }
}

pub(crate) fn scaled_max(values: &[C64], scales: &[f64]) -> f64 {
    values
        .iter()
        .zip(scales)
        .map(|(v, &s)| if s > 0.0 { v.norm() / s } else { v.norm() })
        .fold(0.0, f64::max)
}

impl PolynomialSystem for DeterminantalSystem {
    fn num_vars(&self) -> usize {
        self.patch.num_vars()
    }

    fn num_equations(&self) -> usize {
        self.blocks.iter().map(ConditionBlock::num_equations).sum()
    }

    fn evaluate(&self, x: &[C64]) -> Vec<C64> {
        self.evaluate_full(x, &self.flags, None, false).values
    }

    fn evaluate_with_jacobian(&self, x: &[C64]) -> (Vec<C64>, CMatrix) {
        let ev = self.evaluate_full(x, &self.flags, None, true);
        (ev.values, ev.jacobian)
    }

    fn residual_norm(&self, x: &[C64]) -> f64 {
        self.scaled_residual_with(x, &self.flags)
    }
}

/// Numerically checked evaluation wrapper returning an error for bad input.
pub fn evaluate(sys: &DeterminantalSystem, x: &[C64]) -> Result<Vec<C64>> {
    check_len(sys, x)?;
    let v = sys.evaluate(x);
    if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(crate::kernel::LinalgError::NonFinite.into());
    }
    Ok(v)
}

pub fn jacobian(sys: &DeterminantalSystem, x: &[C64]) -> Result<CMatrix> {
    check_len(sys, x)?;
    let (_, jac) = sys.evaluate_with_jacobian(x);
    if !jac.is_finite() {
        return Err(crate::kernel::LinalgError::NonFinite.into());
    }
    Ok(jac)
}

fn check_len(sys: &DeterminantalSystem, x: &[C64]) -> Result<()> {
    if x.len() != sys.num_vars() {
        return Err(SchubertError::LengthMismatch {
            expected: sys.num_vars(),
            actual: x.len(),
        });
    }
    Ok(())
}

fn det_only(m: &CMatrix) -> C64 {
    if m.rows() == 0 {
        return ONE;
    }
    Lu::factor(m).expect("square").determinant()
}

/// Determinant and cofactor matrix `C[a][b] = ∂det/∂m[a][b]`.
///
/// Uses `P S Q = L U` with complete pivoting on the column-equilibrated
/// matrix `S`. Writing `U = D (I + N)`, `adj U = (I + N)^{-1} diag(Π_{j≠i} u_j)`
/// needs no division by the smallest pivot, so the result stays accurate
/// when `m` is singular or nearly so.
pub fn det_and_cofactors(m: &CMatrix) -> (C64, CMatrix) {
    let s = m.rows();
    match s {
        0 => return (ONE, CMatrix::zeros(0, 0)),
        1 => return (m[(0, 0)], CMatrix::from_fn(1, 1, |_, _| ONE)),
        _ => {}
    }
    let norms: Vec<f64> = (0..s)
        .map(|j| match m.column_norm(j) {
            c if c > 0.0 && c.is_finite() => c,
            _ => 1.0,
        })
        .collect();
    let mut a = CMatrix::from_fn(s, s, |i, j| m[(i, j)] / norms[j]);
    let mut p: Vec<usize> = (0..s).collect();
    let mut q: Vec<usize> = (0..s).collect();
    let mut sign = 1.0;
    for k in 0..s {
        let (mut pi, mut pj, mut best) = (k, k, -1.0);
        for i in k..s {
            for j in k..s {
                let v = a[(i, j)].norm_sqr();
                if v > best {
                    (pi, pj, best) = (i, j, v);
                }
            }
        }
        if pi != k {
            for j in 0..s {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(pi, j)];
                a[(pi, j)] = tmp;
            }
            p.swap(k, pi);
            sign = -sign;
        }
        if pj != k {
            for i in 0..s {
                let tmp = a[(i, k)];
                a[(i, k)] = a[(i, pj)];
                a[(i, pj)] = tmp;
            }
            q.swap(k, pj);
            sign = -sign;
        }
        let pivot = a[(k, k)];
        if pivot == ZERO {
            continue;
        }
        for i in k + 1..s {
            let l = a[(i, k)] / pivot;
            a[(i, k)] = l;
            for j in k + 1..s {
                let u = a[(k, j)];
                a[(i, j)] -= l * u;
            }
        }
    }
    let u: Vec<C64> = (0..s).map(|i| a[(i, i)]).collect();
    let scale: f64 = norms.iter().product();
    let det = u.iter().product::<C64>() * sign * scale;

    // X = (I + N)^{-1} diag(π), upper triangular.
    let pi: Vec<C64> = (0..s)
        .map(|i| (0..s).filter(|&j| j != i).map(|j| u[j]).product())
        .collect();
    let n_at = |i: usize, j: usize| if u[i] == ZERO { ZERO } else { a[(i, j)] / u[i] };
    let mut x = CMatrix::zeros(s, s);
    for col in 0..s {
        x[(col, col)] = pi[col];
        for i in (0..col).rev() {
            let mut acc = ZERO;
            for j in i + 1..=col {
                acc += n_at(i, j) * x[(j, col)];
            }
            x[(i, col)] = -acc;
        }
    }
    // L^{-1}, unit lower triangular.
    let mut linv = CMatrix::identity(s);
    for col in 0..s {
        for i in col + 1..s {
            let mut acc = ZERO;
            for j in col..i {
                acc += a[(i, j)] * linv[(j, col)];
            }
            linv[(i, col)] = -acc;
        }
    }
    let adj = &x * &linv;
    let mut pinv = vec![0; s];
    let mut qinv = vec![0; s];
    for i in 0..s {
        pinv[p[i]] = i;
        qinv[q[i]] = i;
    }
    let cof = CMatrix::from_fn(s, s, |r, c| adj[(qinv[c], pinv[r])] * (sign * scale / norms[c]));
    (det, cof)
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Maximum bipartite matching between `left` vertices and right vertices
/// `0..right` over the allowed edges.
fn max_matching(left: usize, right: usize, edge: impl Fn(usize, usize) -> bool) -> usize {
    fn augment(
        u: usize,
        right: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for v in 0..right {
            if edge(u, v) && !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, right, edge, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right];
    let mut size = 0;
    for u in 0..left {
        let mut seen = vec![false; right];
        if augment(u, right, &edge, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

/// Structurally nonzero minors for every nontrivial index of `bracket`.
/// `structure` is a patch matrix with every free entry set to one; flag
/// entries are generic and treated as nonzero.
fn condition_minors(
    bracket: &Bracket,
    structure: &CMatrix,
    var_at: &[Vec<Option<usize>>],
) -> (Vec<MinorEquation>, Vec<usize>) {
    let (n, k) = (structure.rows(), structure.cols());
    let mut minors = Vec::new();
    let mut provenance = Vec::new();
    for i in 0..k {
        if !bracket.is_nontrivial_at(i) {
            continue;
        }
        let a_i = bracket.entries()[i];
        let width = k + a_i;
        let size = k + a_i - i; // (k + a_i - (i+1)) + 1
        for rows in combinations(n, size) {
            for cols in combinations(width, size) {
                let plane_cols: Vec<usize> = cols.iter().copied().filter(|&c| c < k).collect();
                let flag_cols: Vec<usize> = cols.iter().filter(|&&c| c >= k).map(|&c| c - k).collect();
                let p = plane_cols.len();
                let nonzero = |a: usize, b: usize| b >= p || structure[(rows[a], plane_cols[b])] != ZERO;
                if max_matching(size, size, nonzero) < size {
                    continue;
                }
                let mut slots = Vec::new();
                for (a, &r) in rows.iter().enumerate() {
                    for (b, &c) in plane_cols.iter().enumerate() {
                        if let Some(v) = var_at[r][c] {
                            slots.push((v, a, b));
                        }
                    }
                }
                let degree = max_matching(size, p, |a, b| var_at[rows[a]][plane_cols[b]].is_some());
                minors.push(MinorEquation {
                    rows: rows.clone(),
                    plane_cols,
                    flag_cols,
                    slots,
                    degree,
                });
                provenance.push(i);
            }
        }
    }
    (minors, provenance)
}
