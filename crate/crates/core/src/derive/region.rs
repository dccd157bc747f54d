//! Regions cut out by condition sets inside the open positive orthant, decided
//! with exact LPs after normalizing `g = 1`.
//!
//! A nonempty region `{x > 0, E x = 0, S x < 0}` is relatively open in its
//! equality subspace, so it is the relative interior of its closure. Region
//! comparisons therefore reduce to comparing closures, plus agreeing on
//! emptiness (decided by a maximin-slack LP).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::form::{Condition, ConditionSet, LinearForm, Relation, Var, Weight};
use crate::lp::{Cmp, LinearProgram, LpOutcome};
use crate::poset::PrimitivePoset;
use crate::Rational;

/// The alpha variables an LP runs over, in key order.
#[derive(Clone, Debug)]
struct Space {
    vars: Vec<Var>,
}

impl Space {
    fn of<'a, I: IntoIterator<Item = &'a ConditionSet>>(sets: I) -> Self {
        let mut vars: BTreeSet<Var> = BTreeSet::new();
        for s in sets {
            vars.extend(s.vars());
        }
        vars.remove(&Var::Gamma);
        Self {
            vars: vars.into_iter().collect(),
        }
    }

    fn with(mut self, extra: impl IntoIterator<Item = Var>) -> Self {
        let mut all: BTreeSet<Var> = self.vars.into_iter().collect();
        all.extend(extra);
        all.remove(&Var::Gamma);
        self.vars = all.into_iter().collect();
        self
    }

    /// Coefficient row over the alpha variables and the constant (the gamma
    /// coefficient, since `g = 1`).
    fn row(&self, f: &LinearForm, extra_cols: usize) -> (Vec<Rational>, Rational) {
        let mut row: Vec<Rational> = self.vars.iter().map(|v| f.coeff(*v)).collect();
        row.extend(std::iter::repeat_n(Rational::zero(), extra_cols));
        (row, f.coeff(Var::Gamma))
    }

    /// LP over the closure of the region, with `extra_cols` additional
    /// non-negative columns appended (all zero in the constraint rows).
    fn closure_lp<'a, I: IntoIterator<Item = &'a Condition>>(
        &self,
        conditions: I,
        extra_cols: usize,
    ) -> LinearProgram {
        let mut lp = LinearProgram::new(self.vars.len() + extra_cols);
        for c in conditions {
            let (row, constant) = self.row(&c.form, extra_cols);
            let cmp = match c.rel {
                Relation::EqZero => Cmp::Eq,
                Relation::LtZero => Cmp::Le,
            };
            lp.constrain(row, cmp, -constant);
        }
        lp
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Sup {
    Infeasible,
    Unbounded,
    Max(Rational),
}

/// Supremum of `f` (at `g = 1`) over the closure of the region.
fn sup_over_closure<'a, I>(space: &Space, conditions: I, f: &LinearForm) -> Sup
where
    I: IntoIterator<Item = &'a Condition>,
{
    let mut lp = space.closure_lp(conditions, 0);
    let (objective, constant) = space.row(f, 0);
    lp.maximize(objective);
    match lp.solve() {
        LpOutcome::Infeasible => Sup::Infeasible,
        LpOutcome::Unbounded => Sup::Unbounded,
        LpOutcome::Optimal { value, .. } => Sup::Max(value + constant),
    }
}

fn nonpositive_on_closure<'a, I>(space: &Space, conditions: I, f: &LinearForm) -> bool
where
    I: IntoIterator<Item = &'a Condition>,
{
    match sup_over_closure(space, conditions, f) {
        Sup::Infeasible => true,
        Sup::Unbounded => false,
        Sup::Max(v) => !v.is_positive(),
    }
}

/// Maximin-slack point: maximize `t <= 1` with every variable `>= t` and every
/// strict inequality at slack `>= t`. Returns the point (at `g = 1`) and `t`.
fn maximin_point(space: &Space, c: &ConditionSet) -> Option<(Vec<Rational>, Rational)> {
    let n = space.vars.len();
    let mut lp = LinearProgram::new(n + 1);
    let unit = |k: usize| {
        let mut r = vec![Rational::zero(); n + 1];
        r[k] = Rational::one();
        r
    };
    for cond in c {
        let (mut row, constant) = space.row(&cond.form, 1);
        match cond.rel {
            Relation::EqZero => {
                lp.constrain(row, Cmp::Eq, -constant);
            }
            Relation::LtZero => {
                row[n] = Rational::one();
                lp.constrain(row, Cmp::Le, -constant);
            }
        }
    }
    for k in 0..n {
        // t - x_k <= 0
        let mut r = unit(n);
        r[k] = -Rational::one();
        lp.constrain(r, Cmp::Le, Rational::zero());
    }
    lp.constrain(unit(n), Cmp::Le, Rational::one());
    lp.maximize(unit(n));
    match lp.solve() {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(n);
            Some((point, value))
        }
        _ => None,
    }
}

/// Whether some positive weight satisfies every condition strictly.
pub fn is_region_empty(c: &ConditionSet) -> bool {
    maximin_point(&Space::of([c]), c).is_none()
}

/// A strictly feasible weight for `p`, scaled to coprime integers, or `None`
/// when the region is empty.
pub fn interior_point(p: &PrimitivePoset, c: &ConditionSet) -> Option<Weight> {
    let space = Space::of([c]).with(p.elements().map(|(j, i)| Var::alpha(j, i)));
    let (point, _) = maximin_point(&space, c)?;
    let values: BTreeMap<Var, Rational> = space.vars.iter().copied().zip(point).collect();
    let lcm = values
        .values()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scale = Rational::from_integer(lcm);
    let alphas = p
        .branches()
        .iter()
        .enumerate()
        .map(|(j, &k)| {
            (0..k)
                .map(|i| &values[&Var::alpha(j, i)] * &scale)
                .collect()
        })
        .collect();
    Weight::new(alphas, scale).ok()
}

/// Whether the two condition sets cut out the same subset of the open positive
/// orthant (over the union of their variables).
pub fn regions_equivalent(c1: &ConditionSet, c2: &ConditionSet) -> bool {
    let space = Space::of([c1, c2]);
    let empty1 = maximin_point(&space, c1).is_none();
    let empty2 = maximin_point(&space, c2).is_none();
    if empty1 || empty2 {
        return empty1 == empty2;
    }
    implies_closure(&space, c1, c2) && implies_closure(&space, c2, c1)
}

/// Every condition of `target` holds (in closed form) on the closure of `source`.
fn implies_closure(space: &Space, source: &ConditionSet, target: &ConditionSet) -> bool {
    target.iter().all(|c| match c.rel {
        Relation::LtZero => nonpositive_on_closure(space, source, &c.form),
        Relation::EqZero => {
            nonpositive_on_closure(space, source, &c.form)
                && nonpositive_on_closure(space, source, &-&c.form)
        }
    })
}

/// Drops duplicates and inequalities implied by the rest (together with
/// positivity), then rewrites each surviving inequality modulo the equality
/// into the shortest form with non-negative alpha coefficients. The region is
/// unchanged. Empty regions are returned as they are.
pub fn simplify(c: &ConditionSet) -> ConditionSet {
    let space = Space::of([c]);
    if maximin_point(&space, c).is_none() {
        return c.clone();
    }
    let equalities: Vec<Condition> = c.equalities().cloned().collect();
    let mut kept: Vec<Condition> = c.inequalities().cloned().collect();
    let mut i = 0;
    while i < kept.len() {
        let others = equalities
            .iter()
            .chain(kept[..i].iter())
            .chain(kept[i + 1..].iter());
        if nonpositive_on_closure(&space, others, &kept[i].form) {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    let reduced: Vec<Condition> = match equalities.as_slice() {
        [eq] => kept
            .into_iter()
            .map(|c| Condition::lt_zero(reduce_modulo(&c.form, &eq.form)))
            .collect(),
        _ => kept,
    };
    reduced.into_iter().chain(equalities).collect()
}

/// Among `f + l e` for the `l` that cancel one coefficient (and `l = 0`), pick
/// the form with non-negative alpha coefficients and negative gamma
/// coefficient if any exists, then fewest terms, then smallest `|l|`.
fn reduce_modulo(f: &LinearForm, e: &LinearForm) -> LinearForm {
    let mut candidates = vec![Rational::zero()];
    for (v, c) in e.terms() {
        let fv = f.coeff(*v);
        if !fv.is_zero() {
            candidates.push(-(fv / c));
        }
    }
    let score = |l: &Rational| {
        let g = f + &e.scale(l);
        let alphas_ok = g.terms().all(|(v, c)| *v == Var::Gamma || !c.is_negative());
        let gamma_ok = g.coeff(Var::Gamma).is_negative();
        (!(alphas_ok && gamma_ok), g.len(), l.abs())
    };
    let best = candidates
        .iter()
        .min_by(|a, b| score(a).cmp(&score(b)))
        .expect("candidates include zero");
    (f + &e.scale(best)).primitive()
}
