//! Dimension shadows of the reflection functors (`sigma`, `rho`, `F+`, `F-`),
//! the weight transforms `Phi+` / `Phi-`, and the change of coordinates between
//! chain weights `alpha` and star weights `beta`.
//!
//! `sigma` and `rho` land in representations of the dual poset; since primitive
//! posets are self-dual, every output is re-indexed to increasing chain order.
//!
//! The closed form used for `F-` is the one forced by `F- = rho . sigma` being
//! the inverse of `F+ = sigma . rho`:
//! `d0' = (m-1) d0 - sum_j d(j,1)`, `d'(j,i) = d(j,i+1) - d(j,1)` for `i < k_j`,
//! `d'(j,k_j) = d0 - d(j,1)`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::form::{sum_forms, LinearForm, SymbolicWeight, Weight};
use crate::poset::{DimVector, PrimitivePoset};
use crate::Rational;

fn to_dim(d0: i64, branches: Vec<Vec<i64>>) -> Result<DimVector> {
    let describe = || {
        let b: Vec<String> = branches
            .iter()
            .map(|b| {
                b.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("({};{d0})", b.join(";"))
    };
    if d0 < 0 || branches.iter().flatten().any(|&x| x < 0) {
        return Err(Error::NegativeEntry(describe()));
    }
    let d = DimVector::new(
        d0 as usize,
        branches
            .iter()
            .map(|b| b.iter().map(|&x| x as usize).collect())
            .collect(),
    );
    if !d.is_admissible() {
        return Err(Error::NegativeEntry(format!(
            "{} is not chain-monotone",
            describe()
        )));
    }
    Ok(d)
}

fn require_admissible(p: &PrimitivePoset, d: &DimVector) -> Result<()> {
    d.check_shape(p)?;
    if !d.is_admissible() {
        return Err(Error::NegativeEntry(format!("{d} is not chain-monotone")));
    }
    Ok(())
}

fn signed(d: &DimVector) -> (i64, Vec<Vec<i64>>) {
    (
        d.d0 as i64,
        d.branches
            .iter()
            .map(|b| b.iter().map(|&x| x as i64).collect())
            .collect(),
    )
}

/// Complement every subspace: `d'(j,i) = d0 - d(j, k_j + 1 - i)`.
pub fn sigma_dim(p: &PrimitivePoset, d: &DimVector) -> Result<DimVector> {
    require_admissible(p, d)?;
    let (d0, b) = signed(d);
    let out = b
        .iter()
        .map(|br| br.iter().rev().map(|x| d0 - x).collect())
        .collect();
    to_dim(d0, out)
}

/// `d0' = sum_j d(j,k_j) - d0`, `d'(j,i) = d(j,k_j) - d(j,k_j - i)` with `d(j,0) = 0`.
pub fn rho_dim(p: &PrimitivePoset, d: &DimVector) -> Result<DimVector> {
    require_admissible(p, d)?;
    let (d0, b) = signed(d);
    let tops: i64 = b.iter().map(|br| *br.last().unwrap()).sum();
    let out = b
        .iter()
        .map(|br| {
            let k = br.len();
            let top = br[k - 1];
            (1..=k)
                .map(|i| top - if i == k { 0 } else { br[k - 1 - i] })
                .collect()
        })
        .collect();
    to_dim(tops - d0, out)
}

/// `F+ = sigma . rho` (rho first).
pub fn fplus_dim(p: &PrimitivePoset, d: &DimVector) -> Result<DimVector> {
    sigma_dim(p, &rho_dim(p, d)?)
}

/// `F- = rho . sigma` (sigma first), the two-sided inverse of `fplus_dim`.
pub fn fminus_dim(p: &PrimitivePoset, d: &DimVector) -> Result<DimVector> {
    rho_dim(p, &sigma_dim(p, d)?)
}

/// Closed formula for `F+`: with `S_j = sum_{l != j} d(l,k_l) - d0`, branch `j`
/// becomes `(S_j, S_j + d(j,1), ..., S_j + d(j,k_j - 1))` and
/// `d0' = sum_l d(l,k_l) - d0`.
pub fn fplus_dim_closed(p: &PrimitivePoset, d: &DimVector) -> Result<DimVector> {
    require_admissible(p, d)?;
    let (d0, b) = signed(d);
    let tops: i64 = b.iter().map(|br| *br.last().unwrap()).sum();
    let out = b
        .iter()
        .map(|br| {
            let s = tops - br[br.len() - 1] - d0;
            (0..br.len())
                .map(|i| if i == 0 { s } else { s + br[i - 1] })
                .collect()
        })
        .collect();
    to_dim(tops - d0, out)
}

/// Closed formula for `F-` (see the module docs).
pub fn fminus_dim_closed(p: &PrimitivePoset, d: &DimVector) -> Result<DimVector> {
    require_admissible(p, d)?;
    let (d0, b) = signed(d);
    let m = b.len() as i64;
    let firsts: i64 = b.iter().map(|br| br[0]).sum();
    let out = b
        .iter()
        .map(|br| {
            let k = br.len();
            (0..k)
                .map(|i| {
                    if i + 1 < k {
                        br[i + 1] - br[0]
                    } else {
                        d0 - br[0]
                    }
                })
                .collect()
        })
        .collect();
    to_dim((m - 1) * d0 - firsts, out)
}

fn check_weight_shape(p: &PrimitivePoset, w: &SymbolicWeight) -> Result<()> {
    if w.shape() != p.branches() {
        return Err(Error::ShapeMismatch(format!(
            "symbolic weight shape {:?} vs poset {p}",
            w.shape()
        )));
    }
    Ok(())
}

/// Branch `j` becomes `(g - A_j, a(j,1), ..., a(j,k_j - 1))` with `A_j` the
/// branch sum; `g' = (m-1) g - sum_j a(j,k_j)`.
pub fn phiplus_weight(p: &PrimitivePoset, w: &SymbolicWeight) -> Result<SymbolicWeight> {
    check_weight_shape(p, w)?;
    let m = Rational::from_integer((w.alphas.len() as i64).into());
    let alphas = w
        .alphas
        .iter()
        .map(|br| {
            let mut out = vec![&w.gamma - &sum_forms(br)];
            out.extend(br[..br.len() - 1].iter().cloned());
            out
        })
        .collect();
    let tops = sum_forms(w.alphas.iter().map(|br| br.last().unwrap()));
    let gamma = &w.gamma.scale(&(m - Rational::from_integer(1.into()))) - &tops;
    Ok(SymbolicWeight { alphas, gamma })
}

/// Branch `j` becomes `(a(j,2), ..., a(j,k_j), sum_{l != j} A_l - g)`;
/// `g' = sum_l A_l - g`.
pub fn phiminus_weight(p: &PrimitivePoset, w: &SymbolicWeight) -> Result<SymbolicWeight> {
    check_weight_shape(p, w)?;
    let branch_sums: Vec<LinearForm> = w.alphas.iter().map(sum_forms).collect();
    let total = sum_forms(&branch_sums);
    let alphas = w
        .alphas
        .iter()
        .zip(&branch_sums)
        .map(|(br, a)| {
            let mut out: Vec<LinearForm> = br[1..].to_vec();
            out.push(&(&total - a) - &w.gamma);
            out
        })
        .collect();
    Ok(SymbolicWeight {
        alphas,
        gamma: &total - &w.gamma,
    })
}

fn weight_as_symbolic(w: &Weight) -> SymbolicWeight {
    SymbolicWeight {
        alphas: w
            .alphas()
            .iter()
            .map(|b| {
                b.iter()
                    .map(|a| LinearForm::term(crate::form::Var::Gamma, a.clone()))
                    .collect()
            })
            .collect(),
        gamma: LinearForm::term(crate::form::Var::Gamma, w.gamma().clone()),
    }
}

fn symbolic_constant_to_weight(s: &SymbolicWeight) -> Result<Weight> {
    // every form is c * g; read off c
    let unit = Weight::new_unchecked(Vec::new(), Rational::from_integer(1.into()));
    s.eval(&unit)
}

/// `Phi+` on a concrete weight; errors when an entry is not positive.
pub fn phiplus_concrete(p: &PrimitivePoset, w: &Weight) -> Result<Weight> {
    w.check_shape(p)?;
    symbolic_constant_to_weight(&phiplus_weight(p, &weight_as_symbolic(w))?)
}

/// `Phi-` on a concrete weight; errors when an entry is not positive.
pub fn phiminus_concrete(p: &PrimitivePoset, w: &Weight) -> Result<Weight> {
    w.check_shape(p)?;
    symbolic_constant_to_weight(&phiminus_weight(p, &weight_as_symbolic(w))?)
}

/// `sum alpha(j,i) d(j,i) - gamma d0` as a form in the entries of `w`.
pub fn defect(d: &DimVector, w: &SymbolicWeight) -> LinearForm {
    let mut f = -&w.gamma.scale(&Rational::from_integer((d.d0 as i64).into()));
    for (db, wb) in d.branches.iter().zip(&w.alphas) {
        for (&x, form) in db.iter().zip(wb) {
            f = &f + &form.scale(&Rational::from_integer((x as i64).into()));
        }
    }
    f
}

/// Weight on the star graph: `beta(j,i) = sum_{s >= i} alpha(j,s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarWeight {
    pub betas: Vec<Vec<Rational>>,
    pub gamma: Rational,
}

pub fn alpha_to_beta(p: &PrimitivePoset, w: &Weight) -> Result<StarWeight> {
    w.check_shape(p)?;
    let betas = w
        .alphas()
        .iter()
        .map(|br| {
            let mut acc = Rational::zero();
            let mut out: Vec<Rational> = br
                .iter()
                .rev()
                .map(|a| {
                    acc += a;
                    acc.clone()
                })
                .collect();
            out.reverse();
            out
        })
        .collect();
    Ok(StarWeight {
        betas,
        gamma: w.gamma().clone(),
    })
}

pub fn beta_to_alpha(p: &PrimitivePoset, sw: &StarWeight) -> Result<Weight> {
    let shape: Vec<usize> = sw.betas.iter().map(Vec::len).collect();
    if shape != p.branches() {
        return Err(Error::ShapeMismatch(format!(
            "star weight shape {shape:?} vs poset {p}"
        )));
    }
    let mut alphas = Vec::with_capacity(sw.betas.len());
    for (j, br) in sw.betas.iter().enumerate() {
        let k = br.len();
        if !br[k - 1].is_positive() || br.windows(2).any(|x| x[0] <= x[1]) {
            return Err(Error::NotStrictlyDecreasing(j + 1));
        }
        alphas.push(
            (0..k)
                .map(|i| {
                    if i + 1 < k {
                        &br[i] - &br[i + 1]
                    } else {
                        br[i].clone()
                    }
                })
                .collect(),
        );
    }
    Weight::new(alphas, sw.gamma.clone())
}
