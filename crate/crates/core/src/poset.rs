//! Primitive posets, dimension vectors and the degeneracy classification.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::{Condition, LinearForm, Var, Weight};
use crate::Rational;

/// Cardinal sum of chains of lengths `k_1, ..., k_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitivePoset {
    branches: Vec<usize>,
}

impl PrimitivePoset {
    pub fn new(branches: Vec<usize>) -> Result<Self> {
        if branches.is_empty() || branches.contains(&0) {
            return Err(Error::EmptyOrNonPositiveBranch);
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    pub fn width(&self) -> usize {
        self.branches.len()
    }

    /// Total number of elements.
    pub fn len(&self) -> usize {
        self.branches.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Elements as `(branch, index)` pairs, branch-major.
    pub fn elements(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.branches
            .iter()
            .enumerate()
            .flat_map(|(j, &k)| (0..k).map(move |i| (j, i)))
    }
}

impl fmt::Display for PrimitivePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.branches.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `d0` is the ambient dimension, `branches[j][i]` the dimension of the
/// subspace attached to element `i` of chain `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector {
    pub d0: usize,
    pub branches: Vec<Vec<usize>>,
}

impl DimVector {
    pub fn new(d0: usize, branches: Vec<Vec<usize>>) -> Self {
        Self { d0, branches }
    }

    pub fn zero(p: &PrimitivePoset) -> Self {
        Self {
            d0: 0,
            branches: p.branches().iter().map(|&k| vec![0; k]).collect(),
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.branches.iter().map(Vec::len).collect()
    }

    pub fn check_shape(&self, p: &PrimitivePoset) -> Result<()> {
        if self.shape() != p.branches() {
            return Err(Error::ShapeMismatch(format!(
                "dimension vector {self} does not fit poset {p}"
            )));
        }
        Ok(())
    }

    /// Chain-monotone: `d_1 <= ... <= d_k <= d0` on every branch.
    pub fn is_admissible(&self) -> bool {
        self.branches.iter().all(|b| {
            b.windows(2).all(|w| w[0] <= w[1]) && b.last().is_none_or(|&last| last <= self.d0)
        })
    }

    /// Sort key: `d0` first, then the concatenated branches.
    pub fn sort_key(&self) -> (usize, Vec<usize>) {
        (self.d0, self.branches.concat())
    }

    pub fn add(&self, other: &DimVector) -> Result<DimVector> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!("{self} vs {other}")));
        }
        Ok(DimVector {
            d0: self.d0 + other.d0,
            branches: self
                .branches
                .iter()
                .zip(&other.branches)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }
}

/// Same grammar as the command line: branches separated by `;`, entries by
/// `,`, ambient dimension last.
impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.branches {
            let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{};", parts.join(","))?;
        }
        write!(f, "{}", self.d0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Finding {
    /// `d(j,i) = 0`
    Zero(usize, usize),
    /// `d(j,i) = d(j,i+1)`
    Merge(usize, usize),
    /// `d(j,i) = d0`
    Full(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub findings: Vec<Finding>,
}

impl DegeneracyReport {
    pub fn is_non_degenerate(&self) -> bool {
        self.findings.is_empty()
    }

    /// The reduction to apply first: zeros, then merges, then full elements,
    /// each branch-major.
    pub fn first(&self) -> Option<Finding> {
        self.findings.first().copied()
    }
}

/// Lists every degeneracy of an admissible dimension vector, ordered by kind
/// (zero, merge, full) and then branch-major.
pub fn classify_degeneracy(p: &PrimitivePoset, d: &DimVector) -> Result<DegeneracyReport> {
    d.check_shape(p)?;
    if !d.is_admissible() {
        return Err(Error::ShapeMismatch(format!("{d} is not chain-monotone")));
    }
    let mut zeros = Vec::new();
    let mut merges = Vec::new();
    let mut fulls = Vec::new();
    for (j, b) in d.branches.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            if x == 0 {
                zeros.push(Finding::Zero(j, i));
            }
            if i + 1 < b.len() && x == b[i + 1] {
                merges.push(Finding::Merge(j, i));
            }
            if x == d.d0 {
                fulls.push(Finding::Full(j, i));
            }
        }
    }
    zeros.extend(merges);
    zeros.extend(fulls);
    Ok(DegeneracyReport { findings: zeros })
}

/// `sum d(j,i) * a(j,i) - d0 * g = 0`, canonicalized.
pub fn trace_form(d: &DimVector) -> LinearForm {
    let mut f = LinearForm::gamma().scale(&-Rational::from_integer(d.d0.into()));
    for (j, b) in d.branches.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            f = &f + &LinearForm::alpha(j, i).scale(&Rational::from_integer(x.into()));
        }
    }
    f
}

pub fn trace_condition(p: &PrimitivePoset, d: &DimVector) -> Result<Condition> {
    d.check_shape(p)?;
    Ok(Condition::eq_zero(trace_form(d)).canonical())
}

/// The trace pre-check: `sum d(j,i) a(j,i) == d0 g`, evaluated in one pass.
pub fn check_trace(d: &DimVector, w: &Weight) -> Result<()> {
    let mut lhs = Rational::zero();
    for (j, b) in d.branches.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            lhs += w.value(Var::alpha(j, i)) * Rational::from_integer(x.into());
        }
    }
    let rhs = w.gamma() * Rational::from_integer(d.d0.into());
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::TraceObstruction {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    }
}
