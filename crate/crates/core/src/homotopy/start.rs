use std::f64::consts::TAU;

use crate::error::{Result, SchubertError};
use crate::kernel::{vec_norm_inf, CMatrix, RandomSource, C64};
use crate::systems::PolynomialSystem;

use super::{Homotopy, HomotopyEval};

/// Start system `x_e^{d_e} - c_e = 0` with random unit constants.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalDegreeStart {
    degrees: Vec<usize>,
    constants: Vec<C64>,
}

impl TotalDegreeStart {
    pub fn new(degrees: &[usize], rng: &mut RandomSource) -> Result<Self> {
        if let Some(e) = degrees.iter().position(|&d| d == 0) {
            return Err(SchubertError::ConstantEquation(e));
        }
        let constants = degrees.iter().map(|_| rng.unit_complex()).collect();
        Ok(Self {
            degrees: degrees.to_vec(),
            constants,
        })
    }

    /// Start system for a square target, using its per-equation degree bounds.
    pub fn for_target(target: &crate::systems::DeterminantalSystem, rng: &mut RandomSource) -> Result<Self> {
        if !target.is_square() {
            return Err(SchubertError::Underdetermined {
                equations: target.num_equations(),
                vars: target.num_vars(),
            });
        }
        Self::new(&target.degrees(), rng)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Bézout number `Π d_e`, saturating.
    pub fn num_solutions(&self) -> u128 {
        self.degrees
            .iter()
            .try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
            .unwrap_or(u128::MAX)
    }

    /// All `Π d_e` start solutions, last variable varying fastest.
    pub fn start_solutions(&self) -> Vec<Vec<C64>> {
        let roots: Vec<Vec<C64>> = self
            .degrees
            .iter()
            .zip(&self.constants)
            .map(|(&d, &c)| {
                let base = c.powf(1.0 / d as f64);
                (0..d)
                    .map(|j| base * C64::from_polar(1.0, TAU * j as f64 / d as f64))
                    .collect()
            })
            .collect();
        let total = self.num_solutions() as usize;
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.degrees.len()];
        for _ in 0..total {
            out.push(idx.iter().zip(&roots).map(|(&j, r)| r[j]).collect());
            for e in (0..idx.len()).rev() {
                idx[e] += 1;
                if idx[e] < self.degrees[e] {
                    break;
                }
                idx[e] = 0;
            }
        }
        out
    }
}

impl PolynomialSystem for TotalDegreeStart {
    fn num_vars(&self) -> usize {
        self.degrees.len()
    }

    fn num_equations(&self) -> usize {
        self.degrees.len()
    }

    fn evaluate(&self, x: &[C64]) -> Vec<C64> {
        x.iter()
            .zip(&self.degrees)
            .zip(&self.constants)
            .map(|((xi, &d), c)| xi.powu(d as u32) - c)
            .collect()
    }

    fn evaluate_with_jacobian(&self, x: &[C64]) -> (Vec<C64>, CMatrix) {
        let n = self.degrees.len();
        let mut jac = CMatrix::zeros(n, n);
        for e in 0..n {
            let d = self.degrees[e];
            jac[(e, e)] = x[e].powu(d as u32 - 1) * d as f64;
        }
        (self.evaluate(x), jac)
    }
}

/// `H(x, t) = (1 - t) γ G(x) + t F(x)`.
pub struct StraightLineHomotopy<'a, S: ?Sized, T: ?Sized> {
    start: &'a S,
    target: &'a T,
    gamma: C64,
}

impl<'a, S, T> StraightLineHomotopy<'a, S, T>
where
    S: PolynomialSystem + ?Sized,
    T: PolynomialSystem + ?Sized,
{
    pub fn new(start: &'a S, target: &'a T, gamma: C64) -> Self {
        Self { start, target, gamma }
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }
}

impl<S, T> Homotopy for StraightLineHomotopy<'_, S, T>
where
    S: PolynomialSystem + ?Sized,
    T: PolynomialSystem + ?Sized,
{
    fn num_vars(&self) -> usize {
        self.target.num_vars()
    }

    fn values(&self, x: &[C64], t: f64) -> Vec<C64> {
        let g = self.start.evaluate(x);
        let f = self.target.evaluate(x);
        let a = self.gamma * (1.0 - t);
        g.iter().zip(&f).map(|(gi, fi)| gi * a + fi * t).collect()
    }

    fn evaluate(&self, x: &[C64], t: f64) -> HomotopyEval {
        let (g, jg) = self.start.evaluate_with_jacobian(x);
        let (f, jf) = self.target.evaluate_with_jacobian(x);
        let a = self.gamma * (1.0 - t);
        HomotopyEval {
            values: g.iter().zip(&f).map(|(gi, fi)| gi * a + fi * t).collect(),
            jac_x: jg.combine(a, &jf, C64::new(t, 0.0)),
            jac_t: g.iter().zip(&f).map(|(gi, fi)| fi - gi * self.gamma).collect(),
        }
    }

    fn residual(&self, x: &[C64], t: f64) -> f64 {
        if t >= 1.0 {
            self.target.residual_norm(x)
        } else {
            vec_norm_inf(&self.values(x, t))
        }
    }
}
