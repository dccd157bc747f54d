//! JSON encodings. Rationals travel as `"p/q"` strings, variables as `a.j.i` / `g`.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::form::{Condition, ConditionSet, LinearForm, Relation, SymbolicWeight, Var, Weight};
use crate::linalg::QMatrix;
use crate::linrep::SubspaceRep;
use crate::notation::parse_rational;
use crate::poset::{DimVector, PrimitivePoset};

#[derive(Serialize, Deserialize)]
struct PosetRepr {
    branches: Vec<usize>,
}

impl Serialize for PrimitivePoset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PosetRepr {
            branches: self.branches().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrimitivePoset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PosetRepr::deserialize(d)?;
        PrimitivePoset::new(r.branches).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct DimRepr {
    branches: Vec<Vec<usize>>,
    d0: usize,
}

impl Serialize for DimVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DimRepr {
            branches: self.branches.clone(),
            d0: self.d0,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DimVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = DimRepr::deserialize(d)?;
        Ok(DimVector::new(r.d0, r.branches))
    }
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    alphas: Vec<Vec<String>>,
    gamma: String,
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightRepr {
            alphas: self
                .alphas()
                .iter()
                .map(|b| b.iter().map(|a| a.to_string()).collect())
                .collect(),
            gamma: self.gamma().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = WeightRepr::deserialize(d)?;
        let alphas = r
            .alphas
            .iter()
            .map(|b| b.iter().map(|a| parse_rational(a)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()
            .map_err(D::Error::custom)?;
        let gamma = parse_rational(&r.gamma).map_err(D::Error::custom)?;
        Weight::new(alphas, gamma).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    coeffs: BTreeMap<String, String>,
}

impl FormRepr {
    fn from_form(f: &LinearForm) -> Self {
        Self {
            coeffs: f.terms().map(|(v, c)| (v.key(), c.to_string())).collect(),
        }
    }

    fn to_form(&self) -> crate::Result<LinearForm> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (k, c) in &self.coeffs {
            terms.push((k.parse::<Var>()?, parse_rational(c)?));
        }
        Ok(LinearForm::from_terms(terms))
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormRepr::from_form(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FormRepr::deserialize(d)?
            .to_form()
            .map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ConditionRepr {
    coeffs: BTreeMap<String, String>,
    rel: String,
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConditionRepr {
            coeffs: FormRepr::from_form(&self.form).coeffs,
            rel: self.rel.code().to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ConditionRepr::deserialize(d)?;
        let form = FormRepr { coeffs: r.coeffs }
            .to_form()
            .map_err(D::Error::custom)?;
        let rel: Relation = r.rel.parse().map_err(D::Error::custom)?;
        Ok(Condition { form, rel })
    }
}

impl Serialize for ConditionSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ConditionSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let items = Vec::<Condition>::deserialize(d)?;
        Ok(items.into_iter().collect())
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolicWeightRepr {
    alphas: Vec<Vec<LinearForm>>,
    gamma: LinearForm,
}

impl Serialize for SymbolicWeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymbolicWeightRepr {
            alphas: self.alphas.clone(),
            gamma: self.gamma.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicWeight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SymbolicWeightRepr::deserialize(d)?;
        Ok(SymbolicWeight {
            alphas: r.alphas,
            gamma: r.gamma,
        })
    }
}

/// `{"poset", "ambient", "bases"}`: one entry per element in branch-major
/// order, each a list of spanning column vectors.
#[derive(Serialize, Deserialize)]
struct RepRepr {
    poset: PrimitivePoset,
    ambient: usize,
    bases: Vec<Vec<Vec<String>>>,
}

impl Serialize for SubspaceRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let bases = self
            .bases()
            .iter()
            .flatten()
            .map(|b| {
                (0..b.cols())
                    .map(|k| b.col(k).iter().map(ToString::to_string).collect())
                    .collect()
            })
            .collect();
        RepRepr {
            poset: self.poset().clone(),
            ambient: self.ambient(),
            bases,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceRep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RepRepr::deserialize(d)?;
        if r.bases.len() != r.poset.len() {
            return Err(D::Error::custom(format!(
                "expected {} subspaces, got {}",
                r.poset.len(),
                r.bases.len()
            )));
        }
        let mut matrices = Vec::with_capacity(r.bases.len());
        for cols in &r.bases {
            let mut parsed = Vec::with_capacity(cols.len());
            for c in cols {
                if c.len() != r.ambient {
                    return Err(D::Error::custom(format!(
                        "vector of length {} in ambient dimension {}",
                        c.len(),
                        r.ambient
                    )));
                }
                let v = c
                    .iter()
                    .map(|x| parse_rational(x))
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(D::Error::custom)?;
                parsed.push(v);
            }
            matrices.push(QMatrix::from_cols(r.ambient, parsed));
        }
        let mut it = matrices.into_iter();
        let bases = r
            .poset
            .branches()
            .iter()
            .map(|&k| it.by_ref().take(k).collect())
            .collect();
        SubspaceRep::new(r.poset, r.ambient, bases).map_err(D::Error::custom)
    }
}
