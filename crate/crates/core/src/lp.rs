//! Exact two-phase simplex over rationals with Bland's anti-cycling rule.
//!
//! Dense tableau; every arithmetic step is overflow-checked so an `i128`
//! overflow surfaces as [`LpError::Overflow`] instead of a wrong answer.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("rational arithmetic overflowed i128")]
    Overflow,
    #[error("variable index {0} out of range")]
    BadVariable(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Maximize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![Rational::zero(); num_vars], constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add(&mut self, terms: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        self.constraints.push(Constraint { terms, sense, rhs });
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        for c in &self.constraints {
            if let Some(&(v, _)) = c.terms.iter().find(|(v, _)| *v >= self.num_vars) {
                return Err(LpError::BadVariable(v));
            }
        }
        Tableau::build(self)?.run(&self.objective)
    }
}

fn add(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_add(b).ok_or(LpError::Overflow)
}

fn sub(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_sub(b).ok_or(LpError::Overflow)
}

fn mul(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_mul(b).ok_or(LpError::Overflow)
}

fn div(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_div(b).ok_or(LpError::Overflow)
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    num_vars: usize,
    width: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Result<Self, LpError> {
        let m = lp.constraints.len();
        let mut senses = Vec::with_capacity(m);
        let mut dense: Vec<(Vec<Rational>, Rational)> = Vec::with_capacity(m);
        for c in &lp.constraints {
            let mut row = vec![Rational::zero(); lp.num_vars];
            for (v, a) in &c.terms {
                row[*v] = add(&row[*v], a)?;
            }
            let (mut sense, mut rhs) = (c.sense, c.rhs);
            if rhs.is_negative() {
                row.iter_mut().for_each(|x| *x = -*x);
                rhs = -rhs;
                sense = match sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
            senses.push(sense);
            dense.push((row, rhs));
        }
        let slacks = senses.iter().filter(|s| **s != Sense::Eq).count();
        let artificials = senses.iter().filter(|s| **s != Sense::Le).count();
        let artificial_start = lp.num_vars + slacks;
        let width = artificial_start + artificials;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (lp.num_vars, artificial_start);
        for ((mut row, rhs), sense) in dense.into_iter().zip(senses) {
            row.resize(width + 1, Rational::zero());
            row[width] = rhs;
            match sense {
                Sense::Le => {
                    row[next_slack] = Rational::from_integer(1);
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Sense::Ge => {
                    row[next_slack] = Rational::from_integer(-1);
                    next_slack += 1;
                    row[next_art] = Rational::from_integer(1);
                    basis.push(next_art);
                    next_art += 1;
                }
                Sense::Eq => {
                    row[next_art] = Rational::from_integer(1);
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Ok(Tableau { rows, basis, num_vars: lp.num_vars, width, artificial_start })
    }

    fn run(mut self, objective: &[Rational]) -> Result<LpOutcome, LpError> {
        if self.artificial_start < self.width {
            let mut phase1 = vec![Rational::zero(); self.width];
            for c in phase1[self.artificial_start..].iter_mut() {
                *c = Rational::from_integer(-1);
            }
            let bounded = self.optimize(&phase1, self.width)?;
            debug_assert!(bounded);
            let infeasibility = self
                .basis
                .iter()
                .zip(&self.rows)
                .filter(|(b, _)| **b >= self.artificial_start)
                .try_fold(Rational::zero(), |acc, (_, r)| add(&acc, &r[self.width]))?;
            if !infeasibility.is_zero() {
                return Ok(LpOutcome::Infeasible);
            }
            self.evict_artificials()?;
        }
        let mut full = objective.to_vec();
        full.resize(self.width, Rational::zero());
        if !self.optimize(&full, self.artificial_start)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![Rational::zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                x[b] = self.rows[r][self.width];
            }
        }
        let value = x.iter().zip(objective).try_fold(Rational::zero(), |acc, (a, c)| add(&acc, &mul(a, c)?))?;
        Ok(LpOutcome::Optimal { x, value })
    }

    /// Pivots degenerate artificial basics out; drops redundant rows.
    fn evict_artificials(&mut self) -> Result<(), LpError> {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j)?,
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        Ok(())
    }

    /// Maximizes `cost . x` over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> Result<bool, LpError> {
        loop {
            // Reduced cost of column j: c_j - c_B . column_j.
            let basic_cost: Vec<Rational> = self.basis.iter().map(|&b| cost[b]).collect();
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j];
                for (r, row) in self.rows.iter().enumerate() {
                    if !row[j].is_zero() && !basic_cost[r].is_zero() {
                        reduced = sub(&reduced, &mul(&basic_cost[r], &row[j])?)?;
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = div(&row[self.width], &row[j])?;
                    let better = match &leaving {
                        None => true,
                        Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(r, j)?;
        }
    }

    fn pivot(&mut self, r: usize, j: usize) -> Result<(), LpError> {
        let p = self.rows[r][j];
        if p != Rational::from_integer(1) {
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = div(x, &p)?;
                }
            }
        }
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=self.width).filter(|&c| !pivot_row[c].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let factor = row[j];
            for &c in &nz {
                row[c] = sub(&row[c], &mul(&factor, &pivot_row[c])?)?;
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = j;
        Ok(())
    }
}
