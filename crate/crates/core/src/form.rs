//! Exact linear forms over the weight variables and the conditions built from them.
//!
//! Variables are the per-element weights `a.j.i` (branch `j`, position `i`, both
//! 1-based in every textual encoding, 0-based in memory) and the total weight `g`.
//! Key order is branch-major, then index, with `g` last.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poset::PrimitivePoset;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Alpha { branch: usize, index: usize },
    Gamma,
}

impl Var {
    pub fn alpha(branch: usize, index: usize) -> Self {
        Var::Alpha { branch, index }
    }

    pub fn key(&self) -> String {
        match self {
            Var::Alpha { branch, index } => format!("a.{}.{}", branch + 1, index + 1),
            Var::Gamma => "g".to_string(),
        }
    }
}

impl FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "g" {
            return Ok(Var::Gamma);
        }
        let bad = || Error::Parse(format!("bad variable key {s:?}"));
        let mut parts = s.split('.');
        if parts.next() != Some("a") {
            return Err(bad());
        }
        let j: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let i: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() || j == 0 || i == 0 {
            return Err(bad());
        }
        Ok(Var::alpha(j - 1, i - 1))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// A homogeneous linear form `sum c_v * v` with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: BTreeMap<Var, Rational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::term(v, Rational::one())
    }

    pub fn gamma() -> Self {
        Self::var(Var::Gamma)
    }

    pub fn alpha(branch: usize, index: usize) -> Self {
        Self::var(Var::alpha(branch, index))
    }

    pub fn term(v: Var, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(v, c);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (Var, Rational)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (v, c) in terms {
            f.add_term(v, c);
        }
        f
    }

    pub fn add_term(&mut self, v: Var, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: Var) -> Rational {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Var, &Rational)> {
        self.coeffs.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(v, x)| (*v, x * c)).collect(),
        }
    }

    pub fn eval_with<F: Fn(Var) -> Rational>(&self, value: F) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * value(*v))
    }

    pub fn eval(&self, w: &Weight) -> Rational {
        self.eval_with(|v| w.value(v))
    }

    /// Replace every variable by the corresponding form of `w`.
    pub fn compose(&self, w: &SymbolicWeight) -> LinearForm {
        let mut out = LinearForm::zero();
        for (v, c) in &self.coeffs {
            out = &out + &w.form(*v).scale(c);
        }
        out
    }

    /// Positive rescaling to integer coefficients with gcd 1.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lcm = self
            .coeffs
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .values()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Self {
            coeffs: self
                .coeffs
                .keys()
                .zip(ints)
                .map(|(v, x)| (*v, Rational::from_integer(x / &gcd)))
                .collect(),
        }
    }

    /// `primitive` followed by a sign flip making the first coefficient positive.
    pub fn primitive_signed(&self) -> Self {
        let p = self.primitive();
        match p.coeffs.values().next() {
            Some(c) if c.is_negative() => -p,
            _ => p,
        }
    }

    pub fn integer_coeffs(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        for (v, c) in &rhs.coeffs {
            out.add_term(*v, c.clone());
        }
        out
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: LinearForm) -> LinearForm {
        &self + &rhs
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &(-rhs)
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: LinearForm) -> LinearForm {
        &self - &rhs
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, -c)).collect(),
        }
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        -&self
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (v, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}*{v}")?;
            }
        }
        Ok(())
    }
}

/// Sum of the forms, in iteration order.
pub fn sum_forms<'a, I: IntoIterator<Item = &'a LinearForm>>(forms: I) -> LinearForm {
    forms
        .into_iter()
        .fold(LinearForm::zero(), |acc, f| &acc + f)
}

/// A concrete weight: one positive rational per poset element plus the total weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    alphas: Vec<Vec<Rational>>,
    gamma: Rational,
}

impl Weight {
    pub fn new(alphas: Vec<Vec<Rational>>, gamma: Rational) -> Result<Self> {
        let w = Self::new_unchecked(alphas, gamma);
        w.check_positive()?;
        Ok(w)
    }

    /// Construct without the positivity check; used for symbolic evaluation
    /// results that are validated by the caller.
    pub(crate) fn new_unchecked(alphas: Vec<Vec<Rational>>, gamma: Rational) -> Self {
        Self { alphas, gamma }
    }

    fn check_positive(&self) -> Result<()> {
        for (j, branch) in self.alphas.iter().enumerate() {
            for (i, a) in branch.iter().enumerate() {
                if !a.is_positive() {
                    return Err(Error::NonPositiveWeight(format!(
                        "{} = {a}",
                        Var::alpha(j, i)
                    )));
                }
            }
        }
        if !self.gamma.is_positive() {
            return Err(Error::NonPositiveWeight(format!("g = {}", self.gamma)));
        }
        Ok(())
    }

    pub fn alphas(&self) -> &[Vec<Rational>] {
        &self.alphas
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn shape(&self) -> Vec<usize> {
        self.alphas.iter().map(Vec::len).collect()
    }

    pub fn check_shape(&self, p: &PrimitivePoset) -> Result<()> {
        if self.shape() != p.branches() {
            return Err(Error::ShapeMismatch(format!(
                "weight shape {:?} vs poset {:?}",
                self.shape(),
                p.branches()
            )));
        }
        Ok(())
    }

    /// Value of a variable; variables outside the weight's shape read as zero.
    pub fn value(&self, v: Var) -> Rational {
        match v {
            Var::Gamma => self.gamma.clone(),
            Var::Alpha { branch, index } => self
                .alphas
                .get(branch)
                .and_then(|b| b.get(index))
                .cloned()
                .unwrap_or_else(Rational::zero),
        }
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Self::new(
            self.alphas
                .iter()
                .map(|b| b.iter().map(|a| a * c).collect())
                .collect(),
            &self.gamma * c,
        )
    }
}

/// One linear form per poset element plus one for the total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicWeight {
    pub alphas: Vec<Vec<LinearForm>>,
    pub gamma: LinearForm,
}

impl SymbolicWeight {
    pub fn identity(p: &PrimitivePoset) -> Self {
        Self {
            alphas: p
                .branches()
                .iter()
                .enumerate()
                .map(|(j, &k)| (0..k).map(|i| LinearForm::alpha(j, i)).collect())
                .collect(),
            gamma: LinearForm::gamma(),
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.alphas.iter().map(Vec::len).collect()
    }

    /// The form substituted for variable `v`; variables outside the shape are
    /// left as themselves.
    pub fn form(&self, v: Var) -> LinearForm {
        match v {
            Var::Gamma => self.gamma.clone(),
            Var::Alpha { branch, index } => self
                .alphas
                .get(branch)
                .and_then(|b| b.get(index))
                .cloned()
                .unwrap_or_else(|| LinearForm::var(v)),
        }
    }

    /// `self` after `inner`: every form of `self` has `inner` substituted in.
    pub fn compose(&self, inner: &SymbolicWeight) -> SymbolicWeight {
        SymbolicWeight {
            alphas: self
                .alphas
                .iter()
                .map(|b| b.iter().map(|f| f.compose(inner)).collect())
                .collect(),
            gamma: self.gamma.compose(inner),
        }
    }

    /// Evaluate at a concrete weight; errors when an entry is not positive.
    pub fn eval(&self, w: &Weight) -> Result<Weight> {
        Weight::new(
            self.alphas
                .iter()
                .map(|b| b.iter().map(|f| f.eval(w)).collect())
                .collect(),
            self.gamma.eval(w),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    EqZero,
    LtZero,
}

impl Relation {
    pub fn code(&self) -> &'static str {
        match self {
            Relation::EqZero => "eq0",
            Relation::LtZero => "lt0",
        }
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eq0" => Ok(Relation::EqZero),
            "lt0" => Ok(Relation::LtZero),
            _ => Err(Error::Parse(format!("unknown relation {s:?}"))),
        }
    }
}

/// `form = 0` or `form < 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition {
    pub form: LinearForm,
    pub rel: Relation,
}

impl Condition {
    pub fn eq_zero(form: LinearForm) -> Self {
        Self {
            form,
            rel: Relation::EqZero,
        }
    }

    pub fn lt_zero(form: LinearForm) -> Self {
        Self {
            form,
            rel: Relation::LtZero,
        }
    }

    /// Integer coefficients with gcd 1; equalities also get a positive leading
    /// coefficient. Inequalities are only ever rescaled by positive factors.
    pub fn canonical(&self) -> Self {
        let form = match self.rel {
            Relation::EqZero => self.form.primitive_signed(),
            Relation::LtZero => self.form.primitive(),
        };
        Self {
            form,
            rel: self.rel,
        }
    }

    pub fn holds(&self, w: &Weight) -> bool {
        let v = self.form.eval(w);
        match self.rel {
            Relation::EqZero => v.is_zero(),
            Relation::LtZero => v.is_negative(),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.rel {
            Relation::EqZero => "=",
            Relation::LtZero => "<",
        };
        write!(f, "{} {rel} 0", self.form)
    }
}

/// Canonical, duplicate-free conditions in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionSet {
    items: Vec<Condition>,
}

impl ConditionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts the canonical form; returns false if it was already present.
    /// A zero inequality form is kept (it makes the region empty), while a
    /// zero equality is dropped as vacuous.
    pub fn insert(&mut self, c: Condition) -> bool {
        let c = c.canonical();
        if c.rel == Relation::EqZero && c.form.is_zero() {
            return false;
        }
        if self.items.contains(&c) {
            return false;
        }
        self.items.push(c);
        true
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Condition> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Condition> {
        self.items.iter().filter(|c| c.rel == Relation::EqZero)
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Condition> {
        self.items.iter().filter(|c| c.rel == Relation::LtZero)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.items.iter().flat_map(|c| c.form.vars()).collect()
    }

    pub fn violated(&self, w: &Weight) -> Vec<Condition> {
        self.items.iter().filter(|c| !c.holds(w)).cloned().collect()
    }

    pub fn contains(&self, c: &Condition) -> bool {
        self.items.contains(&c.canonical())
    }
}

impl FromIterator<Condition> for ConditionSet {
    fn from_iter<I: IntoIterator<Item = Condition>>(iter: I) -> Self {
        let mut set = ConditionSet::new();
        for c in iter {
            set.insert(c);
        }
        set
    }
}

impl<'a> IntoIterator for &'a ConditionSet {
    type Item = &'a Condition;
    type IntoIter = std::slice::Iter<'a, Condition>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn a(j: usize) -> LinearForm {
        LinearForm::alpha(j, 0)
    }

    #[test]
    fn eval_trace_form_at_equiangular_weight() {
        let f = &(&(&a(0) + &a(1)) + &a(2)) - &LinearForm::gamma().scale(&q(2));
        let w = Weight::new(vec![vec![q(2)], vec![q(2)], vec![q(2)]], q(3)).unwrap();
        assert_eq!(f.eval(&w), q(0));
    }

    #[test]
    fn canonicalize_divides_gcd() {
        let f = &a(0).scale(&q(2)) - &LinearForm::gamma().scale(&q(4));
        let c = Condition::eq_zero(f).canonical();
        assert_eq!(c.form, &a(0) - &LinearForm::gamma().scale(&q(2)));
    }

    #[test]
    fn inequality_sign_is_never_flipped() {
        let f = &LinearForm::gamma().scale(&q(-3)) + &a(0).scale(&q(-6));
        let c = Condition::lt_zero(f).canonical();
        assert_eq!(c.form.coeff(Var::alpha(0, 0)), q(-2));
        assert_eq!(c.form.coeff(Var::Gamma), q(-1));
        let e = Condition::eq_zero(c.form.clone()).canonical();
        assert_eq!(e.form.coeff(Var::alpha(0, 0)), q(2));
    }

    #[test]
    fn additive_inverse_is_zero() {
        let f = &a(0) - &LinearForm::gamma();
        let g = &LinearForm::gamma() - &a(0);
        assert!((&f + &g).is_zero());
    }

    #[test]
    fn fractional_coefficients_are_cleared() {
        let half = Rational::new(1.into(), 2.into());
        let third = Rational::new(1.into(), 3.into());
        let f = &a(0).scale(&half) + &a(1).scale(&third);
        let p = f.primitive();
        assert_eq!(p.coeff(Var::alpha(0, 0)), q(3));
        assert_eq!(p.coeff(Var::alpha(1, 0)), q(2));
    }

    #[test]
    fn var_keys_round_trip() {
        for v in [Var::Gamma, Var::alpha(0, 0), Var::alpha(2, 4)] {
            assert_eq!(v.key().parse::<Var>().unwrap(), v);
        }
        assert!("a.0.1".parse::<Var>().is_err());
        assert!("b.1.1".parse::<Var>().is_err());
    }

    #[test]
    fn key_order_is_branch_major_then_gamma() {
        let mut vars = vec![
            Var::Gamma,
            Var::alpha(1, 0),
            Var::alpha(0, 1),
            Var::alpha(0, 0),
        ];
        vars.sort();
        assert_eq!(
            vars,
            vec![
                Var::alpha(0, 0),
                Var::alpha(0, 1),
                Var::alpha(1, 0),
                Var::Gamma
            ]
        );
    }

    #[test]
    fn condition_set_dedups_scaled_copies() {
        let f = &a(0) - &LinearForm::gamma();
        let mut set = ConditionSet::new();
        assert!(set.insert(Condition::lt_zero(f.clone())));
        assert!(!set.insert(Condition::lt_zero(f.scale(&q(2)))));
        assert!(set.insert(Condition::lt_zero(-&f)));
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn nonpositive_weight_is_rejected() {
        assert!(matches!(
            Weight::new(vec![vec![q(0)]], q(1)),
            Err(Error::NonPositiveWeight(_))
        ));
        assert!(Weight::new(vec![vec![q(1)]], q(-1)).is_err());
    }
}
