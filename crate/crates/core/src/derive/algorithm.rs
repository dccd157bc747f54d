use std::fmt;

use crate::coxeter::{fminus_dim, phiminus_weight};
use crate::error::{Error, Result};
use crate::form::{Condition, ConditionSet, LinearForm, SymbolicWeight};
use crate::poset::{classify_degeneracy, DimVector, Finding, PrimitivePoset};
use crate::roots::{enumerate_indec_dims, positive_root_count};

/// One step of a derivation. Positions are 0-based in the poset current at
/// that step (elements shift as others are deleted or merged).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    ReduceZero {
        branch: usize,
        index: usize,
    },
    ReduceMerge {
        branch: usize,
        index: usize,
    },
    ReduceFull {
        branch: usize,
        index: usize,
    },
    ApplyPhiMinus {
        from: DimVector,
        to: DimVector,
        emitted: Vec<Condition>,
    },
    Terminal(Condition),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::ReduceZero { branch, index } => {
                write!(f, "zero    ({},{}) deleted", branch + 1, index + 1)
            }
            Step::ReduceMerge { branch, index } => write!(
                f,
                "merge   ({},{}) and ({},{})",
                branch + 1,
                index + 1,
                branch + 1,
                index + 2
            ),
            Step::ReduceFull { branch, index } => {
                write!(f, "full    ({},{}) moved into g", branch + 1, index + 1)
            }
            Step::ApplyPhiMinus { from, to, emitted } => {
                write!(f, "phi-    {from} -> {to}")?;
                for c in emitted {
                    write!(f, "\n          emit {c}")?;
                }
                Ok(())
            }
            Step::Terminal(c) => write!(f, "end     {c}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    pub steps: Vec<Step>,
}

impl DerivationTrace {
    /// Number of `F-` applications.
    pub fn depth(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::ApplyPhiMinus { .. }))
            .count()
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

struct Chain {
    dims: Vec<usize>,
    forms: Vec<LinearForm>,
}

struct State {
    d0: usize,
    chains: Vec<Chain>,
    gamma: LinearForm,
}

impl State {
    fn poset(&self) -> PrimitivePoset {
        PrimitivePoset::new(self.chains.iter().map(|c| c.dims.len()).collect())
            .expect("chains are never empty")
    }

    fn dim(&self) -> DimVector {
        DimVector::new(
            self.d0,
            self.chains.iter().map(|c| c.dims.clone()).collect(),
        )
    }

    fn weight(&self) -> SymbolicWeight {
        SymbolicWeight {
            alphas: self.chains.iter().map(|c| c.forms.clone()).collect(),
            gamma: self.gamma.clone(),
        }
    }

    fn remove(&mut self, branch: usize, index: usize) -> LinearForm {
        let chain = &mut self.chains[branch];
        chain.dims.remove(index);
        let form = chain.forms.remove(index);
        if chain.dims.is_empty() {
            self.chains.remove(branch);
        }
        form
    }

    fn apply(&mut self, finding: Finding) -> Step {
        match finding {
            Finding::Zero(branch, index) => {
                self.remove(branch, index);
                Step::ReduceZero { branch, index }
            }
            Finding::Merge(branch, index) => {
                let upper = self.chains[branch].forms.remove(index + 1);
                self.chains[branch].dims.remove(index + 1);
                let merged = &self.chains[branch].forms[index] + &upper;
                self.chains[branch].forms[index] = merged;
                Step::ReduceMerge { branch, index }
            }
            Finding::Full(branch, index) => {
                let form = self.remove(branch, index);
                self.gamma = &self.gamma - &form;
                Step::ReduceFull { branch, index }
            }
        }
    }
}

/// Derives the weight conditions for dimension vector `d` of finite-type poset
/// `p`, which must be one of its indecomposable dimension vectors.
pub fn derive_conditions(
    p: &PrimitivePoset,
    d: &DimVector,
) -> Result<(ConditionSet, DerivationTrace)> {
    let dims = enumerate_indec_dims(p)?;
    d.check_shape(p)?;
    if !dims.contains(d) {
        return Err(Error::NotInEnumeration(d.to_string()));
    }
    derive_unchecked(p, d, positive_root_count(p)?)
}

/// The derivation loop without the enumeration membership check. `max_depth`
/// bounds the number of `F-` steps.
pub fn derive_unchecked(
    p: &PrimitivePoset,
    d: &DimVector,
    max_depth: usize,
) -> Result<(ConditionSet, DerivationTrace)> {
    d.check_shape(p)?;
    let identity = SymbolicWeight::identity(p);
    let mut state = State {
        d0: d.d0,
        chains: d
            .branches
            .iter()
            .zip(identity.alphas)
            .map(|(dims, forms)| Chain {
                dims: dims.clone(),
                forms,
            })
            .collect(),
        gamma: identity.gamma,
    };
    let mut trace = DerivationTrace::default();
    let mut emitted: Vec<Condition> = Vec::new();
    let mut depth = 0;
    loop {
        if state.chains.is_empty() {
            let terminal = Condition::eq_zero(state.gamma.clone()).canonical();
            trace.steps.push(Step::Terminal(terminal.clone()));
            emitted.push(terminal);
            break;
        }
        let poset = state.poset();
        let dim = state.dim();
        let report = classify_degeneracy(&poset, &dim).map_err(|_| Error::OrbitEscape {
            steps: depth,
            dim: dim.to_string(),
        })?;
        if let Some(finding) = report.first() {
            trace.steps.push(state.apply(finding));
            continue;
        }
        if depth == max_depth {
            return Err(Error::OrbitEscape {
                steps: depth,
                dim: dim.to_string(),
            });
        }
        let next = fminus_dim(&poset, &dim).map_err(|_| Error::OrbitEscape {
            steps: depth,
            dim: dim.to_string(),
        })?;
        let weight = phiminus_weight(&poset, &state.weight())?;
        let new_conditions: Vec<Condition> = weight
            .alphas
            .iter()
            .map(|b| Condition::lt_zero(-b.last().unwrap()).canonical())
            .collect();
        emitted.extend(new_conditions.iter().cloned());
        trace.steps.push(Step::ApplyPhiMinus {
            from: dim,
            to: next.clone(),
            emitted: new_conditions,
        });
        state = State {
            d0: next.d0,
            chains: next
                .branches
                .into_iter()
                .zip(weight.alphas)
                .map(|(dims, forms)| Chain { dims, forms })
                .collect(),
            gamma: weight.gamma,
        };
        depth += 1;
    }
    Ok((emitted.into_iter().collect(), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive::regions_equivalent;
    use crate::form::Var;
    use crate::notation::parse_dim;
    use crate::Rational;

    fn poset(b: &[usize]) -> PrimitivePoset {
        PrimitivePoset::new(b.to_vec()).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// `sum c_v v < k g` style builder: (branch, index, coeff) terms and the gamma multiple.
    fn lt(terms: &[(usize, usize, i64)], k: i64) -> Condition {
        let mut f = LinearForm::gamma().scale(&q(-k));
        for &(j, i, c) in terms {
            f = &f + &LinearForm::alpha(j, i).scale(&q(c));
        }
        Condition::lt_zero(f)
    }

    fn eq(terms: &[(usize, usize, i64)], k: i64) -> Condition {
        let mut c = lt(terms, k);
        c.rel = crate::form::Relation::EqZero;
        c
    }

    #[test]
    fn d4_top_root() {
        let p = poset(&[1, 1, 1]);
        let (c, trace) = derive_conditions(&p, &parse_dim("1;1;1;2").unwrap()).unwrap();
        let expected: ConditionSet = [
            lt(&[(0, 0, 1)], 1),
            lt(&[(1, 0, 1)], 1),
            lt(&[(2, 0, 1)], 1),
            eq(&[(0, 0, 1), (1, 0, 1), (2, 0, 1)], 2),
        ]
        .into_iter()
        .collect();
        assert!(regions_equivalent(&c, &expected));
        assert_eq!(trace.depth(), 1);
        assert!(matches!(trace.steps.last(), Some(Step::Terminal(_))));
    }

    #[test]
    fn d4_one_dimensional_full_rep() {
        let p = poset(&[1, 1, 1]);
        let (c, trace) = derive_conditions(&p, &parse_dim("1;1;1;1").unwrap()).unwrap();
        let expected: ConditionSet = [eq(&[(0, 0, 1), (1, 0, 1), (2, 0, 1)], 1)]
            .into_iter()
            .collect();
        assert_eq!(c, expected);
        assert_eq!(trace.depth(), 0);
    }

    #[test]
    fn d5_top_root() {
        let p = poset(&[2, 1, 1]);
        let (c, _) = derive_conditions(&p, &parse_dim("1,2;1;1;2").unwrap()).unwrap();
        let expected: ConditionSet = [
            lt(&[(0, 0, 1), (0, 1, 1)], 1),
            lt(&[(0, 1, 1), (1, 0, 1)], 1),
            lt(&[(0, 1, 1), (2, 0, 1)], 1),
            eq(&[(0, 0, 1), (0, 1, 2), (1, 0, 1), (2, 0, 1)], 2),
        ]
        .into_iter()
        .collect();
        assert!(regions_equivalent(&c, &expected));
    }

    #[test]
    fn e6_row_with_d0_three() {
        let p = poset(&[2, 2, 1]);
        let (c, _) = derive_conditions(&p, &parse_dim("1,2;1,2;1;3").unwrap()).unwrap();
        let expected: ConditionSet = [
            lt(&[(0, 0, 1), (0, 1, 1)], 1),
            lt(&[(0, 0, 1), (0, 1, 1), (1, 1, 1), (2, 0, 1)], 2),
            lt(&[(1, 0, 1), (1, 1, 1)], 1),
            lt(&[(0, 1, 1), (1, 0, 1), (1, 1, 1), (2, 0, 1)], 2),
            lt(&[(0, 1, 1), (1, 1, 1)], 1),
            eq(&[(0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 2), (2, 0, 1)], 3),
        ]
        .into_iter()
        .collect();
        assert!(regions_equivalent(&c, &expected));
    }

    #[test]
    fn leading_zero_variables_never_appear() {
        let p = poset(&[2, 1, 1]);
        let (c, trace) = derive_conditions(&p, &parse_dim("0,1;1;1;2").unwrap()).unwrap();
        assert!(!c.vars().contains(&Var::alpha(0, 0)));
        assert_eq!(
            trace.steps[0],
            Step::ReduceZero {
                branch: 0,
                index: 0
            }
        );
    }

    #[test]
    fn errors() {
        let p = poset(&[1, 1, 1]);
        assert!(matches!(
            derive_conditions(&p, &parse_dim("1;1;1;3").unwrap()),
            Err(Error::NotInEnumeration(_))
        ));
        assert!(matches!(
            derive_conditions(&poset(&[1, 1, 1, 1]), &parse_dim("1;1;1;1;2").unwrap()),
            Err(Error::FiniteTypeRequired(_))
        ));
    }

    #[test]
    fn non_finite_type_orbit_escapes() {
        // (1;1;1;1;2) on (1,1,1,1) is fixed by F-, so the bound must stop it
        let p = poset(&[1, 1, 1, 1]);
        let r = derive_unchecked(&p, &parse_dim("1;1;1;1;2").unwrap(), 10);
        assert!(matches!(r, Err(Error::OrbitEscape { .. })));
    }
}
