//! Exact two-phase primal simplex over the rationals with Bland's rule.
//!
//! Solves `maximize c·x subject to rows, x >= 0`. Dense tableau; intended for
//! the few-hundred-variable programs that arise at desk scale.

use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    /// Sparse coefficients `(variable, value)`; repeated variables are summed.
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<(usize, Rational)>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            ..Default::default()
        }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(v, _)| *v < self.num_vars));
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    /// True iff `x` is nonnegative and satisfies every constraint exactly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coeffs.iter().map(|(v, a)| a * &x[*v]).sum();
                match c.sense {
                    Sense::Le => lhs <= c.rhs,
                    Sense::Eq => lhs == c.rhs,
                    Sense::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().map(|(v, a)| a * &x[*v]).sum()
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// columns: structural, then slack/surplus, then artificial, then rhs
    width: usize,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.sense != Sense::Eq)
            .count();
        // rows are flipped so the rhs is nonnegative (and Ge rows with zero rhs become
        // Le rows); a row needs an artificial unless its slack then has coefficient +1
        let flip: Vec<bool> = lp
            .constraints
            .iter()
            .map(|c| c.rhs.is_negative() || (c.sense == Sense::Ge && c.rhs.is_zero()))
            .collect();
        let needs_art: Vec<bool> = lp
            .constraints
            .iter()
            .zip(&flip)
            .map(|(c, &f)| match c.sense {
                Sense::Eq => true,
                Sense::Le => f,
                Sense::Ge => !f,
            })
            .collect();
        let art_count = needs_art.iter().filter(|&&b| b).count();
        let first_artificial = n + slack_count;
        let width = first_artificial + art_count + 1;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = n;
        let mut art = first_artificial;
        for ((c, &needs), &flip) in lp.constraints.iter().zip(&needs_art).zip(&flip) {
            let mut row = vec![Rational::zero(); width];
            for (v, a) in &c.coeffs {
                row[*v] += a;
            }
            row[width - 1] = c.rhs.clone();
            let slack_col = match c.sense {
                Sense::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    slack += 1;
                    Some(slack - 1)
                }
                Sense::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    Some(slack - 1)
                }
                Sense::Eq => None,
            };
            if flip {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            if needs {
                row[art] = Rational::from_integer(1.into());
                basis.push(art);
                art += 1;
            } else {
                basis.push(slack_col.expect("inequality row"));
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            width,
            first_artificial,
        }
    }

    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, r: usize, col: usize, obj: &mut [Rational]) {
        let p = self.rows[r][col].clone();
        for x in self.rows[r].iter_mut() {
            *x /= &p;
        }
        let prow = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for (x, y) in obj.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Reduced-cost row for maximizing `cost` (indexed by column) at the current basis.
    fn objective_row(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut obj = cost.to_vec();
        obj.resize(self.width, Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if !obj[b].is_zero() {
                let f = obj[b].clone();
                for (x, y) in obj.iter_mut().zip(&self.rows[r]) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        obj
    }

    /// Runs simplex iterations over columns `< limit`. Returns false if unbounded.
    fn optimize(&mut self, obj: &mut [Rational], limit: usize) -> bool {
        let rhs = self.rhs();
        loop {
            // Bland: lowest-index improving column, then lowest-index leaving variable
            let Some(col) = (0..limit).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[rhs] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => {
                            ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, col, obj);
        }
    }

    fn solve(mut self, lp: &LinearProgram) -> LpOutcome {
        let rhs = self.rhs();
        if self.first_artificial + 1 < self.width {
            // phase 1: maximize minus the sum of artificials
            let mut cost = vec![Rational::zero(); self.width];
            for c in cost.iter_mut().take(rhs).skip(self.first_artificial) {
                *c = Rational::from_integer((-1).into());
            }
            let mut obj = self.objective_row(&cost);
            self.optimize(&mut obj, rhs);
            if !obj[rhs].is_zero() {
                return LpOutcome::Infeasible;
            }
            // drive remaining (zero-valued) artificials out of the basis
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(col) => self.pivot(r, col, &mut obj),
                        None => {
                            // redundant row
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut cost = vec![Rational::zero(); self.width];
        for (v, a) in &lp.objective {
            cost[*v] += a;
        }
        let mut obj = self.objective_row(&cost);
        if !self.optimize(&mut obj, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); lp.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < lp.num_vars {
                x[b] = self.rows[r][rhs].clone();
            }
        }
        let value = lp.objective_value(&x);
        LpOutcome::Optimal { x, value }
    }
}
