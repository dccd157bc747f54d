//! Exact two-phase simplex over rationals (Bland's rule, so it always terminates).
//! All variables are non-negative. Sizes here are tiny, so the tableau is dense.

use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<(Vec<Rational>, Cmp, Rational)>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, row: Vec<Rational>, cmp: Cmp, rhs: Rational) -> &mut Self {
        assert_eq!(row.len(), self.num_vars);
        self.constraints.push((row, cmp, rhs));
        self
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.num_vars;
        let m = self.constraints.len();
        let slack_count = self
            .constraints
            .iter()
            .filter(|(_, c, _)| *c != Cmp::Eq)
            .count();
        let art0 = n + slack_count;
        let cols = art0 + m;

        let mut t = Tableau {
            rows: Vec::with_capacity(m),
            basis: Vec::with_capacity(m),
            cols,
        };
        let mut slack = n;
        for (i, (row, cmp, rhs)) in self.constraints.iter().enumerate() {
            let mut r = vec![Rational::zero(); cols + 1];
            r[..n].clone_from_slice(row);
            match cmp {
                Cmp::Le => {
                    r[slack] = Rational::from_integer(1.into());
                    slack += 1;
                }
                Cmp::Ge => {
                    r[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                }
                Cmp::Eq => {}
            }
            r[cols] = rhs.clone();
            if rhs.is_negative() {
                for x in r.iter_mut() {
                    *x = -x.clone();
                }
            }
            r[art0 + i] = Rational::from_integer(1.into());
            t.rows.push(r);
            t.basis.push(art0 + i);
        }

        // Phase 1: maximize -(sum of artificials).
        let mut phase1 = vec![Rational::zero(); cols];
        for c in phase1.iter_mut().skip(art0) {
            *c = Rational::from_integer((-1).into());
        }
        let allowed_all = vec![true; cols];
        if t.run(&phase1, &allowed_all).is_err() {
            unreachable!("phase one is bounded");
        }
        if t.objective_value(&phase1).is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive artificial variables out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                match (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }

        let mut phase2 = vec![Rational::zero(); cols];
        phase2[..n].clone_from_slice(&self.objective);
        let allowed: Vec<bool> = (0..cols).map(|j| j < art0).collect();
        if t.run(&phase2, &allowed).is_err() {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Rational::zero(); n];
        for (r, &b) in t.rows.iter().zip(&t.basis) {
            if b < n {
                point[b] = r[cols].clone();
            }
        }
        let value = point
            .iter()
            .zip(&self.objective)
            .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        LpOutcome::Optimal { value, point }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

struct Unbounded;

impl Tableau {
    fn objective_value(&self, c: &[Rational]) -> Rational {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(Rational::zero(), |acc, (r, &b)| acc + &c[b] * &r[self.cols])
    }

    fn reduced_cost(&self, c: &[Rational], j: usize) -> Rational {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(c[j].clone(), |acc, (r, &b)| acc - &c[b] * &r[j])
    }

    fn run(&mut self, c: &[Rational], allowed: &[bool]) -> Result<(), Unbounded> {
        loop {
            let entering = (0..self.cols)
                .filter(|&j| allowed[j] && !self.basis.contains(&j))
                .find(|&j| self.reduced_cost(c, j).is_positive());
            let Some(j) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[j].is_positive() {
                    continue;
                }
                let ratio = &r[self.cols] / &r[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((i, _)) = best else {
                return Err(Unbounded);
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, i: usize, j: usize) {
        let inv = self.rows[i][j].recip();
        for x in self.rows[i].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[i].clone();
        for (k, r) in self.rows.iter_mut().enumerate() {
            if k == i || r[j].is_zero() {
                continue;
            }
            let f = r[j].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[i] = j;
    }
}
