//! Oracles and exhaustive checks shared by the integration tests and the
//! acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeMap;

use numschubert::combinatorics::{partitions_in_box, richardson_dimension};
use numschubert::geometry::CoordinatePatch;
use numschubert::homotopy::NormalizedFrame;
use numschubert::kernel::numerical_rank;
use numschubert::systems::{jacobian, DeterminantalSystem, PolynomialSystem};
use numschubert::{Bracket, CMatrix, RandomSource, SchubertInstance, SchubertProblem, C64};

/// Classes in the cohomology of Gr(k, n) as partition -> integer
/// coefficient, multiplied through complete homogeneous classes only.
pub type Class = BTreeMap<Vec<usize>, i64>;

/// `s_mu * h_m` by horizontal strips, dropping shapes outside the box.
pub fn pieri(mu: &[usize], m: usize, k: usize, width: usize, out: &mut Class, coeff: i64) {
    fn rec(row: usize, left: usize, mu: &[usize], nu: &mut Vec<usize>, width: usize, out: &mut Class, coeff: i64) {
        if row == mu.len() {
            if left == 0 {
                *out.entry(nu.clone()).or_insert(0) += coeff;
            }
            return;
        }
        // Row `row` may grow up to the previous row's old length (strip condition).
        let cap = if row == 0 { width } else { mu[row - 1].min(width) };
        let room = cap.saturating_sub(mu[row]);
        for add in 0..=room.min(left) {
            nu[row] = mu[row] + add;
            rec(row + 1, left - add, mu, nu, width, out, coeff);
        }
        nu[row] = mu[row];
    }
    let mut nu = mu.to_vec();
    debug_assert_eq!(mu.len(), k);
    rec(0, m, mu, &mut nu, width, out, coeff);
}

pub fn times_h(class: &Class, m: usize, k: usize, width: usize) -> Class {
    let mut out = Class::new();
    for (mu, &c) in class {
        if c != 0 {
            pieri(mu, m, k, width, &mut out, c);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut sign = 1;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        sign = -sign;
                    }
                }
            }
            out.push((prefix.clone(), sign));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `class * s_lambda` with `s_lambda = det(h_{lambda_i - i + j})`.
pub fn times_schur(class: &Class, lambda: &[usize], k: usize, width: usize) -> Class {
    let len = lambda.iter().take_while(|&&p| p > 0).count();
    let mut out = Class::new();
    for (perm, sign) in permutations(len) {
        let mut term = class.clone();
        let mut zero = false;
        for i in 0..len {
            let idx = lambda[i] as i64 - i as i64 + perm[i] as i64;
            if idx < 0 {
                zero = true;
                break;
            }
            if idx > 0 {
                term = times_h(&term, idx as usize, k, width);
            }
        }
        if zero {
            continue;
        }
        for (p, c) in term {
            *out.entry(p).or_insert(0) += sign * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn oracle_count(k: usize, n: usize, partitions: &[Vec<usize>]) -> i64 {
    let width = n - k;
    let mut class = Class::new();
    class.insert(vec![0; k], 1);
    for p in partitions {
        class = times_schur(&class, p, k, width);
    }
    class.get(&vec![width; k]).copied().unwrap_or(0)
}

/// Multisets of nonempty partitions in the box whose sizes sum to `k(n-k)`.
pub fn all_problems(k: usize, n: usize) -> Vec<Vec<Vec<usize>>> {
    let shapes: Vec<Vec<usize>> = (1..=k * (n - k))
        .flat_map(|s| partitions_in_box(k, n - k, s))
        .collect();
    fn rec(start: usize, left: usize, shapes: &[Vec<usize>], cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..shapes.len() {
            let size: usize = shapes[i].iter().sum();
            if size <= left {
                cur.push(shapes[i].clone());
                rec(i, left - size, shapes, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, k * (n - k), &shapes, &mut Vec::new(), &mut out);
    out
}

pub fn all_brackets(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            rec(v + 1, k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, k, n, &mut Vec::new(), &mut out);
    out
}

// rank [H | F_{a_i}] <= k + a_i - i for every i (1-based).
pub fn meets(h: &CMatrix, bracket: &Bracket, flag: &CMatrix) -> bool {
    let k = h.cols();
    bracket.entries().iter().enumerate().all(|(i, &a)| {
        let m = h.hstack(&flag.leading_columns(a)).unwrap();
        numerical_rank(&m, 1e-10) <= k + a - (i + 1)
    })
}


pub fn four_lines() -> SchubertProblem {
    SchubertProblem::new(2, 4, vec![Bracket::new(2, 4, vec![2, 4]).unwrap(); 4]).unwrap()
}

pub fn gr36() -> SchubertProblem {
    SchubertProblem::from_partitions(3, 6, &vec![vec![1]; 9]).unwrap()
}

pub fn gr48() -> SchubertProblem {
    SchubertProblem::from_multiplicities(
        4,
        8,
        &[(2, vec![3, 5, 7, 8]), (1, vec![3, 6, 7, 8]), (8, vec![4, 6, 7, 8])],
    )
    .unwrap()
}

/// alpha_i - i + lambda_i = n - k, sizes match codimensions, and duality
/// conjugates the partition, for every bracket with `n <= max_n`.
pub fn check_bracket_round_trip(max_n: usize) -> Result<usize, String> {
    let mut checked = 0;
    for n in 2..=max_n {
        for k in 1..n {
            for entries in all_brackets(k, n) {
                let b = Bracket::new(k, n, entries.clone()).map_err(|e| e.to_string())?;
                let p = b.to_partition();
                for i in 0..k {
                    if entries[i] + p.parts()[i] != n - k + i + 1 {
                        return Err(format!("{b}: formula fails at {i}"));
                    }
                }
                if p.size() != b.codimension() || p.to_bracket() != b || b.dual().dual() != b {
                    return Err(format!("{b}: round trip fails"));
                }
                let conj = b.dual().to_partition();
                for (j, &c) in conj.parts().iter().enumerate() {
                    if c != p.parts().iter().filter(|&&r| r > j).count() {
                        return Err(format!("{b}: dual is not the conjugate"));
                    }
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Patch dimension equals k(n-k) - |a| - |b|, the patch exists exactly when
/// the Richardson variety is nonempty, and random patch points meet both
/// Schubert conditions.
pub fn check_richardson(max_n: usize, rng: &mut RandomSource) -> Result<usize, String> {
    let mut checked = 0;
    for n in 2..=max_n {
        for k in 1..n {
            let brackets: Vec<Bracket> = all_brackets(k, n)
                .into_iter()
                .map(|e| Bracket::new(k, n, e).unwrap())
                .collect();
            for a in &brackets {
                for b in &brackets {
                    let nonempty = (0..k).all(|i| a.entries()[i] + b.entries()[k - 1 - i] >= n + 1);
                    let dim = richardson_dimension(a, b).map_err(|e| e.to_string())?;
                    match CoordinatePatch::build(a, b) {
                        Ok(patch) => {
                            let expected = k * (n - k) - a.codimension() - b.codimension();
                            if !nonempty || patch.num_vars() != expected || dim != Some(expected) {
                                return Err(format!("{a} {b}: dimension {} vs {expected}", patch.num_vars()));
                            }
                            let x = rng.gaussian_vec(patch.num_vars());
                            let h = patch.embed(&x).map_err(|e| e.to_string())?;
                            if !meets(&h, a, &CMatrix::identity(n)) || !meets(&h, b, &CMatrix::exchange(n)) {
                                return Err(format!("{a} {b}: patch point misses a condition"));
                            }
                        }
                        Err(_) => {
                            if nonempty || dim.is_some() {
                                return Err(format!("{a} {b}: nonempty but no patch"));
                            }
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// `lr_number` against the oracle for every problem on the given Grassmannians.
pub fn check_lr_against_oracle(grassmannians: &[(usize, usize)]) -> Result<usize, String> {
    let mut checked = 0;
    for &(k, n) in grassmannians {
        for parts in all_problems(k, n) {
            let prob = SchubertProblem::from_partitions(k, n, &parts).map_err(|e| e.to_string())?;
            let (got, want) = (prob.lr_number() as i64, oracle_count(k, n, &parts));
            if got != want {
                return Err(format!("Gr({k},{n}) {parts:?}: {got} vs oracle {want}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `lr_number` and `lr_rule` are unchanged by shuffling the conditions.
pub fn check_order_invariance(k: usize, n: usize, cases: usize, rng: &mut RandomSource) -> Result<(), String> {
    let problems = all_problems(k, n);
    for _ in 0..cases {
        let parts = problems[(rng.next_u64() as usize) % problems.len()].clone();
        let prob = SchubertProblem::from_partitions(k, n, &parts).unwrap();
        let mut shuffled = parts.clone();
        for i in (1..shuffled.len()).rev() {
            let j = (rng.next_u64() as usize) % (i + 1);
            shuffled.swap(i, j);
        }
        let perm = SchubertProblem::from_partitions(k, n, &shuffled).unwrap();
        if prob.lr_number() != perm.lr_number() || prob.lr_rule() != perm.lr_rule() {
            return Err(format!("{parts:?} vs {shuffled:?}"));
        }
    }
    Ok(())
}

pub fn squared_system(prob: &SchubertProblem, seed: u64) -> DeterminantalSystem {
    let mut rng = RandomSource::new(seed);
    let inst = SchubertInstance::random(prob, &mut rng).unwrap();
    let frame = NormalizedFrame::new(&inst).unwrap();
    frame.system().unwrap().square_up(&mut rng).unwrap()
}

/// Largest deviation between the analytic Jacobian and central differences
/// with step `h` over `points` random points.
pub fn jacobian_fd_error(sys: &DeterminantalSystem, points: usize, h: f64, rng: &mut RandomSource) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let x = rng.gaussian_vec(sys.num_vars());
        let jac = jacobian(sys, &x).unwrap();
        for j in 0..sys.num_vars() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += C64::new(h, 0.0);
            xm[j] -= C64::new(h, 0.0);
            let fp = sys.evaluate(&xp);
            let fm = sys.evaluate(&xm);
            for e in 0..sys.num_equations() {
                let fd = (fp[e] - fm[e]) / (2.0 * h);
                worst = worst.max((fd - jac[(e, j)]).norm());
            }
        }
    }
    worst
}
