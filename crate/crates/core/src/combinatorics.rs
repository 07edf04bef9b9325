//! Brackets, partitions, Schubert problems and Littlewood-Richardson counting.
//!
//! A bracket `a_1 < ... < a_k` in `[1, n]` and a partition
//! `n-k >= l_1 >= ... >= l_k >= 0` encode the same Schubert condition on
//! `Gr(k, n)` through `a_i - i + l_i = n - k`. The number of solutions of a
//! problem is the coefficient of the full `k x (n-k)` box in the product of
//! its condition classes, computed with the classical Littlewood-Richardson
//! rule on skew tableaux.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Result, SchubertError};

fn check_grassmannian(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(SchubertError::InvalidGrassmannian { k, n });
    }
    Ok(())
}

/// A Schubert condition in bracket notation. Entries are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bracket {
    k: usize,
    n: usize,
    entries: Vec<usize>,
}

impl Bracket {
    pub fn new(k: usize, n: usize, entries: Vec<usize>) -> Result<Self> {
        check_grassmannian(k, n)?;
        let invalid = |reason| SchubertError::InvalidBracket {
            entries: entries.clone(),
            k,
            n,
            reason,
        };
        if entries.len() != k {
            return Err(invalid("length differs from k"));
        }
        if entries[0] < 1 || entries[k - 1] > n {
            return Err(invalid("entries must lie in 1..=n"));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("entries must be strictly increasing"));
        }
        Ok(Self { k, n, entries })
    }

    /// `{n-k+1, ..., n}`: the condition satisfied by every k-plane.
    pub fn trivial(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, (n - k + 1..=n).collect())
    }

    /// `{1, ..., k}`: the point class.
    pub fn point(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, (1..=k).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `|a| = sum(a_i - i)`, the dimension of the Schubert variety.
    pub fn dimension(&self) -> usize {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &a)| a - (i + 1))
            .sum()
    }

    /// `k(n-k) - |a|`.
    pub fn codimension(&self) -> usize {
        self.k * (self.n - self.k) - self.dimension()
    }

    pub fn is_simple(&self) -> bool {
        self.codimension() == 1
    }

    /// Whether the `i`-th incidence condition (0-based) constrains anything.
    /// `dim H ∩ F_{a_i} >= i+1` is automatic when `a_i = n-k+i+1`.
    pub fn is_nontrivial_at(&self, i: usize) -> bool {
        self.entries[i] < self.n - self.k + i + 1
    }

    pub fn to_partition(&self) -> Partition {
        let parts = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, &a)| self.n - self.k + i + 1 - a)
            .collect();
        Partition {
            k: self.k,
            n: self.n,
            parts,
        }
    }

    /// The corresponding condition on `Gr(n-k, n)` under `H -> H^perp`:
    /// `{n+1-j : j not in a}`. Its partition is the conjugate partition.
    pub fn dual(&self) -> Bracket {
        let mut entries: Vec<usize> = (1..=self.n)
            .filter(|j| !self.entries.contains(j))
            .map(|j| self.n + 1 - j)
            .collect();
        entries.sort_unstable();
        Bracket {
            k: self.n - self.k,
            n: self.n,
            entries,
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// A partition fitting in the `k x (n-k)` box, stored padded to length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    k: usize,
    n: usize,
    parts: Vec<usize>,
}

impl Partition {
    /// Trailing zeros may be omitted; `parts` is padded to length `k`.
    pub fn new(k: usize, n: usize, mut parts: Vec<usize>) -> Result<Self> {
        check_grassmannian(k, n)?;
        let invalid = |parts: &Vec<usize>, reason| SchubertError::InvalidPartition {
            parts: parts.clone(),
            k,
            n,
            reason,
        };
        if parts.len() > k {
            return Err(invalid(&parts, "more than k parts"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(&parts, "parts must be weakly decreasing"));
        }
        if parts.first().is_some_and(|&p| p > n - k) {
            return Err(invalid(&parts, "largest part exceeds n-k"));
        }
        parts.resize(k, 0);
        Ok(Self { k, n, parts })
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, Vec::new())
    }

    /// The full box `(n-k)^k`, the class of a point.
    pub fn full_box(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, vec![n - k; k])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn to_bracket(&self) -> Bracket {
        let entries = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &l)| self.n - self.k + i + 1 - l)
            .collect();
        Bracket {
            k: self.k,
            n: self.n,
            entries,
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let nonzero: Vec<String> = self
            .parts
            .iter()
            .filter(|&&p| p > 0)
            .map(|p| p.to_string())
            .collect();
        write!(f, "{})", nonzero.join(","))
    }
}

pub fn codimension(b: &Bracket) -> usize {
    b.codimension()
}

pub fn bracket_to_partition(b: &Bracket) -> Partition {
    b.to_partition()
}

pub fn partition_to_bracket(p: &Partition) -> Bracket {
    p.to_bracket()
}

/// Checks raw condition data for `Gr(k, n)`, naming the first offending
/// condition by index.
pub fn validate_problem(k: usize, n: usize, conditions: &[Vec<usize>]) -> Result<()> {
    let brackets = conditions
        .iter()
        .enumerate()
        .map(|(index, c)| {
            Bracket::new(k, n, c.clone()).map_err(|e| SchubertError::InvalidCondition {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SchubertProblem::new(k, n, brackets).map(|_| ())
}

/// A list of Schubert conditions whose codimensions sum to `k(n-k)`.
/// The order is the caller's; [`SchubertProblem::sorted`] gives the
/// canonical order used by the solver and by [`SchubertProblem::lr_rule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertProblem {
    k: usize,
    n: usize,
    conditions: Vec<Bracket>,
}

impl SchubertProblem {
    pub fn new(k: usize, n: usize, conditions: Vec<Bracket>) -> Result<Self> {
        check_grassmannian(k, n)?;
        for (index, b) in conditions.iter().enumerate() {
            if b.k != k || b.n != n {
                return Err(SchubertError::InvalidCondition {
                    index,
                    source: Box::new(SchubertError::InvalidBracket {
                        entries: b.entries.clone(),
                        k,
                        n,
                        reason: "bracket belongs to a different Grassmannian",
                    }),
                });
            }
        }
        let expected = k * (n - k);
        let actual: usize = conditions.iter().map(Bracket::codimension).sum();
        if actual != expected {
            return Err(SchubertError::CodimensionSum { expected, actual });
        }
        Ok(Self { k, n, conditions })
    }

    pub fn from_partitions(k: usize, n: usize, partitions: &[Vec<usize>]) -> Result<Self> {
        let conditions = partitions
            .iter()
            .enumerate()
            .map(|(index, p)| {
                Partition::new(k, n, p.clone())
                    .map(|p| p.to_bracket())
                    .map_err(|e| SchubertError::InvalidCondition {
                        index,
                        source: Box::new(e),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, n, conditions)
    }

    /// Rows `(m, b)`: bracket `b` repeated `m` times.
    pub fn from_multiplicities(k: usize, n: usize, rows: &[(usize, Vec<usize>)]) -> Result<Self> {
        let mut conditions = Vec::new();
        for (index, (m, entries)) in rows.iter().enumerate() {
            let b = Bracket::new(k, n, entries.clone()).map_err(|e| {
                SchubertError::InvalidCondition {
                    index,
                    source: Box::new(e),
                }
            })?;
            conditions.extend(std::iter::repeat_n(b, *m));
        }
        Self::new(k, n, conditions)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conditions(&self) -> &[Bracket] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Canonical order: decreasing codimension, then lexicographic. Returns
    /// the sorted problem and `perm` with `sorted[j] = self[perm[j]]`.
    pub fn sorted(&self) -> (SchubertProblem, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.conditions.len()).collect();
        perm.sort_by(|&a, &b| {
            let (ba, bb) = (&self.conditions[a], &self.conditions[b]);
            bb.codimension()
                .cmp(&ba.codimension())
                .then_with(|| ba.entries.cmp(&bb.entries))
        });
        let conditions = perm.iter().map(|&i| self.conditions[i].clone()).collect();
        (
            SchubertProblem {
                k: self.k,
                n: self.n,
                conditions,
            },
            perm,
        )
    }

    /// Distinct brackets with multiplicities, in canonical order.
    pub fn grouped(&self) -> Vec<(Bracket, usize)> {
        let (sorted, _) = self.sorted();
        let mut groups: Vec<(Bracket, usize)> = Vec::new();
        for b in sorted.conditions {
            match groups.last_mut() {
                Some((last, m)) if *last == b => *m += 1,
                _ => groups.push((b, 1)),
            }
        }
        groups
    }

    /// Number of solutions for general flags.
    pub fn lr_number(&self) -> u64 {
        let mut class = CohomologyClass::identity(self.k, self.n);
        for b in &self.conditions {
            class = class
                .multiply(&b.to_partition())
                .expect("validated conditions fit the box");
        }
        let point = Partition::full_box(self.k, self.n).expect("valid Grassmannian");
        class.coefficient(&point)
    }

    /// Product string in the style `[ 2 4 ]^4 = +2[1 2]`.
    pub fn lr_rule(&self) -> String {
        let lhs: Vec<String> = self
            .grouped()
            .iter()
            .map(|(b, m)| {
                let entries: Vec<String> = b.entries.iter().map(|e| e.to_string()).collect();
                format!("[ {} ]^{}", entries.join(" "), m)
            })
            .collect();
        let point: Vec<String> = (1..=self.k).map(|e| e.to_string()).collect();
        format!("{} = +{}[{}]", lhs.join("*"), self.lr_number(), point.join(" "))
    }
}

pub fn lr_number(p: &SchubertProblem) -> u64 {
    p.lr_number()
}

pub fn format_lr_rule(p: &SchubertProblem) -> String {
    p.lr_rule()
}

/// `k(n-k) - ||a|| - ||b||` when `X_a(E) ∩ X_b(E')` is nonempty for opposite
/// flags, i.e. `a_i + b_{k+1-i} >= n+1` for all `i`; `None` otherwise.
pub fn richardson_dimension(a: &Bracket, b: &Bracket) -> Result<Option<usize>> {
    if a.k != b.k || a.n != b.n {
        return Err(SchubertError::GrassmannianMismatch {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let k = a.k;
    let n = a.n;
    if (0..k).any(|i| a.entries[i] + b.entries[k - 1 - i] < n + 1) {
        return Ok(None);
    }
    Ok(Some(a.dimension() + b.dimension() - k * (n - k)))
}

/// An element of the cohomology ring of `Gr(k, n)` in the Schubert basis.
/// Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    k: usize,
    n: usize,
    terms: BTreeMap<Partition, u64>,
}

impl CohomologyClass {
    pub fn zero(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The fundamental class `σ_∅`.
    pub fn identity(k: usize, n: usize) -> Self {
        let mut c = Self::zero(k, n);
        c.terms
            .insert(Partition::empty(k, n).expect("valid Grassmannian"), 1);
        c
    }

    pub fn schubert(p: &Partition) -> Self {
        let mut c = Self::zero(p.k, p.n);
        c.terms.insert(p.clone(), 1);
        c
    }

    pub fn terms(&self) -> &BTreeMap<Partition, u64> {
        &self.terms
    }

    pub fn coefficient(&self, p: &Partition) -> u64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    /// `self · σ_p`, truncated to the box.
    pub fn multiply(&self, p: &Partition) -> Result<CohomologyClass> {
        if p.k != self.k || p.n != self.n {
            return Err(SchubertError::InvalidPartition {
                parts: p.parts.clone(),
                k: self.k,
                n: self.n,
                reason: "partition belongs to a different box",
            });
        }
        let mut out = CohomologyClass::zero(self.k, self.n);
        for (mu, &coef) in &self.terms {
            let target_size = mu.size() + p.size();
            for nu in partitions_in_box(self.k, self.n - self.k, target_size) {
                if !contains(&nu, &mu.parts) {
                    continue;
                }
                let c = lr_coefficient(&mu.parts, &nu, &p.parts);
                if c > 0 {
                    let key = Partition {
                        k: self.k,
                        n: self.n,
                        parts: nu,
                    };
                    *out.terms.entry(key).or_insert(0) += coef * c;
                }
            }
        }
        Ok(out)
    }
}

fn contains(outer: &[usize], inner: &[usize]) -> bool {
    outer.iter().zip(inner).all(|(o, i)| o >= i)
}

/// All partitions with at most `rows` parts, each at most `width`, of the
/// given size; padded to length `rows`.
pub fn partitions_in_box(rows: usize, width: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(
        rows: usize,
        max_part: usize,
        remaining: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == rows {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let slots = rows - prefix.len();
        if remaining > slots * max_part {
            return;
        }
        for part in (0..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(rows, part, remaining - part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(rows, width, size, &mut Vec::with_capacity(rows), &mut out);
    out
}

/// Littlewood-Richardson coefficient `c^ν_{μ,λ}`: the number of semistandard
/// fillings of `ν/μ` with content `λ` whose reverse reading word is a
/// lattice word.
pub fn lr_coefficient(mu: &[usize], nu: &[usize], lambda: &[usize]) -> u64 {
    let rows = nu.len();
    let mu_at = |r: usize| mu.get(r).copied().unwrap_or(0);
    if (0..rows).any(|r| mu_at(r) > nu[r]) || mu.iter().skip(rows).any(|&m| m > 0) {
        return 0;
    }
    let skew: usize = (0..rows).map(|r| nu[r] - mu_at(r)).sum();
    if skew != lambda.iter().sum::<usize>() {
        return 0;
    }
    if skew == 0 {
        return 1;
    }
    // Reading order: rows top to bottom, each row right to left.
    let cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|r| (mu_at(r)..nu[r]).rev().map(move |c| (r, c)))
        .collect();
    let labels = lambda.iter().take_while(|&&l| l > 0).count();
    let mut filling: Vec<Vec<usize>> = nu.iter().map(|&w| vec![usize::MAX; w]).collect();
    let mut used = vec![0usize; labels];

    fn fill(
        idx: usize,
        cells: &[(usize, usize)],
        mu: &dyn Fn(usize) -> usize,
        lambda: &[usize],
        filling: &mut [Vec<usize>],
        used: &mut [usize],
    ) -> u64 {
        let Some(&(r, c)) = cells.get(idx) else {
            return 1;
        };
        let upper = if c + 1 < filling[r].len() {
            filling[r][c + 1]
        } else {
            used.len() - 1
        };
        let lower = if r > 0 && c >= mu(r - 1) && c < filling[r - 1].len() {
            filling[r - 1][c] + 1
        } else {
            0
        };
        let mut total = 0;
        for v in lower..=upper.min(used.len() - 1) {
            if used[v] >= lambda[v] || (v > 0 && used[v] + 1 > used[v - 1]) {
                continue;
            }
            used[v] += 1;
            filling[r][c] = v;
            total += fill(idx + 1, cells, mu, lambda, filling, used);
            used[v] -= 1;
        }
        filling[r][c] = usize::MAX;
        total
    }

    if labels == 0 {
        return 0;
    }
    fill(0, &cells, &mu_at, lambda, &mut filling, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(k: usize, n: usize, e: &[usize]) -> Bracket {
        Bracket::new(k, n, e.to_vec()).unwrap()
    }

    fn p(k: usize, n: usize, parts: &[usize]) -> Partition {
        Partition::new(k, n, parts.to_vec()).unwrap()
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(b(2, 4, &[2, 4]).codimension(), 1);
        assert_eq!(b(3, 6, &[3, 5, 6]).codimension(), 1);
        assert_eq!(Bracket::trivial(3, 7).unwrap().codimension(), 0);
        assert_eq!(Bracket::point(3, 7).unwrap().codimension(), 12);
    }

    #[test]
    fn invalid_brackets_rejected() {
        assert!(Bracket::new(2, 4, vec![2, 2]).is_err());
        assert!(Bracket::new(2, 4, vec![0, 2]).is_err());
        assert!(Bracket::new(2, 4, vec![2, 5]).is_err());
        assert!(Bracket::new(2, 4, vec![1, 2, 3]).is_err());
        assert!(Bracket::new(4, 4, vec![1, 2, 3, 4]).is_err());
    }

    #[test]
    fn bracket_partition_examples() {
        assert_eq!(b(3, 6, &[3, 5, 6]).to_partition().parts(), &[1, 0, 0]);
        assert_eq!(b(2, 4, &[2, 4]).to_partition().parts(), &[1, 0]);
        assert_eq!(Bracket::trivial(2, 5).unwrap().to_partition().size(), 0);
        assert_eq!(p(3, 6, &[1]).to_bracket(), b(3, 6, &[3, 5, 6]));
        assert_eq!(p(3, 6, &[]).to_bracket(), Bracket::trivial(3, 6).unwrap());
        assert_eq!(p(3, 6, &[3, 3, 3]).to_bracket(), Bracket::point(3, 6).unwrap());
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(2, 4, vec![3]).is_err());
        assert!(Partition::new(2, 4, vec![1, 2]).is_err());
        assert!(Partition::new(2, 4, vec![1, 1, 1]).is_err());
    }

    #[test]
    fn validation_examples() {
        assert!(validate_problem(2, 4, &vec![vec![2, 4]; 4]).is_ok());
        assert_eq!(
            validate_problem(3, 6, &vec![vec![3, 5, 6]; 8]),
            Err(SchubertError::CodimensionSum {
                expected: 9,
                actual: 8
            })
        );
        assert!(SchubertProblem::from_multiplicities(
            4,
            8,
            &[(2, vec![3, 5, 7, 8]), (1, vec![3, 6, 7, 8]), (8, vec![4, 6, 7, 8])]
        )
        .is_ok());
        let err = validate_problem(2, 4, &[vec![2, 4], vec![4, 2]]).unwrap_err();
        assert!(matches!(err, SchubertError::InvalidCondition { index: 1, .. }));
    }

    #[test]
    fn multiply_examples() {
        let one = p(2, 4, &[1]);
        let id = CohomologyClass::identity(2, 4);
        assert_eq!(id.multiply(&one).unwrap(), CohomologyClass::schubert(&one));

        let sq = CohomologyClass::schubert(&one).multiply(&one).unwrap();
        let terms: Vec<(Vec<usize>, u64)> = sq
            .terms()
            .iter()
            .map(|(k, &v)| (k.parts().to_vec(), v))
            .collect();
        assert_eq!(terms, vec![(vec![1, 1], 1), (vec![2, 0], 1)]);

        let c = CohomologyClass::schubert(&p(2, 4, &[2, 1])).multiply(&one).unwrap();
        assert_eq!(c, CohomologyClass::schubert(&p(2, 4, &[2, 2])));
    }

    #[test]
    fn lr_coefficient_known_values() {
        // s_21 * s_21 contains s_321 with coefficient 2.
        assert_eq!(lr_coefficient(&[2, 1], &[3, 2, 1], &[2, 1]), 2);
        assert_eq!(lr_coefficient(&[2, 1], &[4, 2], &[2, 1]), 1);
        assert_eq!(lr_coefficient(&[1], &[1, 1], &[2]), 0);
        assert_eq!(lr_coefficient(&[], &[2, 1], &[2, 1]), 1);
    }

    #[test]
    fn lr_numbers_and_rule_strings() {
        let four_lines = SchubertProblem::new(2, 4, vec![b(2, 4, &[2, 4]); 4]).unwrap();
        assert_eq!(four_lines.lr_number(), 2);
        assert_eq!(four_lines.lr_rule(), "[ 2 4 ]^4 = +2[1 2]");

        let gr36 = SchubertProblem::from_partitions(3, 6, &vec![vec![1]; 9]).unwrap();
        assert_eq!(gr36.lr_number(), 42);
        assert_eq!(gr36.lr_rule(), "[ 3 5 6 ]^9 = +42[1 2 3]");

        let point = SchubertProblem::new(2, 4, vec![b(2, 4, &[1, 2])]).unwrap();
        assert_eq!(point.lr_rule(), "[ 1 2 ]^1 = +1[1 2]");
    }

    #[test]
    fn gr48_problem_has_1530_solutions() {
        let prob = SchubertProblem::from_multiplicities(
            4,
            8,
            &[(2, vec![3, 5, 7, 8]), (1, vec![3, 6, 7, 8]), (8, vec![4, 6, 7, 8])],
        )
        .unwrap();
        assert_eq!(prob.lr_number(), 1530);
        assert_eq!(
            prob.lr_rule(),
            "[ 3 5 7 8 ]^2*[ 3 6 7 8 ]^1*[ 4 6 7 8 ]^8 = +1530[1 2 3 4]"
        );
    }

    #[test]
    fn richardson_dimension_examples() {
        assert_eq!(richardson_dimension(&b(2, 4, &[2, 4]), &b(2, 4, &[2, 4])).unwrap(), Some(2));
        assert_eq!(richardson_dimension(&b(2, 4, &[1, 2]), &b(2, 4, &[3, 4])).unwrap(), Some(0));
        assert_eq!(richardson_dimension(&b(2, 4, &[1, 2]), &b(2, 4, &[1, 2])).unwrap(), None);
        assert!(richardson_dimension(&b(2, 4, &[2, 4]), &b(2, 5, &[2, 4])).is_err());
    }

    #[test]
    fn sorting_is_by_decreasing_codimension() {
        let prob = SchubertProblem::new(
            2,
            5,
            vec![b(2, 5, &[3, 5]), b(2, 5, &[2, 5]), b(2, 5, &[3, 5]), b(2, 5, &[3, 4])],
        )
        .unwrap();
        let (sorted, perm) = prob.sorted();
        assert_eq!(perm, vec![1, 3, 0, 2]);
        assert_eq!(sorted.conditions()[0], b(2, 5, &[2, 5]));
        assert_eq!(prob.lr_rule(), "[ 2 5 ]^1*[ 3 4 ]^1*[ 3 5 ]^2 = +1[1 2]");
    }

    #[test]
    fn dual_bracket_conjugates_partition() {
        let a = b(2, 5, &[2, 5]);
        let d = a.dual();
        assert_eq!(d.k(), 3);
        assert_eq!(d.to_partition().parts(), &[1, 1, 0]);
        assert_eq!(d.dual(), a);
    }
}
