use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::algorithm::derive_conditions;
use super::region::{is_region_empty, regions_equivalent, simplify};
use crate::error::{Error, Result};
use crate::form::{Condition, ConditionSet, Weight};
use crate::poset::{check_trace, DimVector, PrimitivePoset};
use crate::roots::enumerate_indec_dims;

const EMBEDDED_CORPUS: &str = include_str!("../../tables/reference_tables.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub dim: DimVector,
    pub conditions: ConditionSet,
    /// Set on generated rows; corpus rows leave it out.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub poset: PrimitivePoset,
    pub rows: Vec<TableRow>,
}

/// Reference tables keyed by poset.
#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub tables: BTreeMap<PrimitivePoset, Table>,
}

#[derive(Serialize, Deserialize)]
struct CorpusFile {
    tables: Vec<Table>,
}

impl Corpus {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CorpusFile = serde_json::from_str(text)?;
        Ok(Self {
            tables: file
                .tables
                .into_iter()
                .map(|t| (t.poset.clone(), t))
                .collect(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn table(&self, p: &PrimitivePoset) -> Result<&Table> {
        self.tables
            .get(p)
            .ok_or_else(|| Error::CorpusMissing(p.branches().to_vec()))
    }

    pub fn row_count(&self) -> usize {
        self.tables.values().map(|t| t.rows.len()).sum()
    }
}

/// The four reference tables shipped with the crate.
pub fn reference_corpus() -> Corpus {
    Corpus::from_json(EMBEDDED_CORPUS).expect("embedded corpus is valid")
}

/// Derived and simplified conditions for every indecomposable dimension
/// vector of `p`, in enumeration order.
pub fn generate_table(p: &PrimitivePoset) -> Result<Table> {
    let dims = enumerate_indec_dims(p)?;
    let rows = dims
        .into_par_iter()
        .map(|dim| {
            let (raw, _) = derive_conditions(p, &dim)?;
            let conditions = simplify(&raw);
            let empty = is_region_empty(&conditions);
            Ok(TableRow {
                dim,
                conditions,
                empty,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        poset: p.clone(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowCheck {
    pub dim: DimVector,
    pub expected: ConditionSet,
    pub derived: ConditionSet,
    pub equivalent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableCheck {
    pub poset: PrimitivePoset,
    /// The corpus lists exactly the enumerated dimension vectors.
    pub dims_match: bool,
    pub rows: Vec<RowCheck>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.dims_match && self.rows.iter().all(|r| r.equivalent)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub tables: Vec<TableCheck>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.tables.iter().all(TableCheck::passed)
    }

    pub fn row_count(&self) -> usize {
        self.tables.iter().map(|t| t.rows.len()).sum()
    }

    pub fn equivalent_count(&self) -> usize {
        self.tables
            .iter()
            .flat_map(|t| &t.rows)
            .filter(|r| r.equivalent)
            .count()
    }
}

/// Compares every corpus row against a fresh derivation.
pub fn verify_corpus(corpus: &Corpus) -> Result<Report> {
    let tables = corpus
        .tables
        .values()
        .map(verify_table)
        .collect::<Result<Vec<_>>>()?;
    Ok(Report { tables })
}

/// [`verify_corpus`] on the embedded tables.
pub fn verify_tables() -> Result<Report> {
    verify_corpus(&reference_corpus())
}

fn verify_table(t: &Table) -> Result<TableCheck> {
    let p = &t.poset;
    let mut enumerated = enumerate_indec_dims(p)?;
    let mut listed: Vec<DimVector> = t.rows.iter().map(|r| r.dim.clone()).collect();
    enumerated.sort();
    listed.sort();
    let dims_match = enumerated == listed;
    let rows = t
        .rows
        .par_iter()
        .map(|row| {
            let derived = match derive_conditions(p, &row.dim) {
                Ok((c, _)) => c,
                Err(Error::NotInEnumeration(_)) => {
                    return Ok(RowCheck {
                        dim: row.dim.clone(),
                        expected: row.conditions.clone(),
                        derived: ConditionSet::new(),
                        equivalent: false,
                    })
                }
                Err(e) => return Err(e),
            };
            Ok(RowCheck {
                dim: row.dim.clone(),
                equivalent: regions_equivalent(&derived, &row.conditions),
                expected: row.conditions.clone(),
                derived,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableCheck {
        poset: p.clone(),
        dims_match,
        rows,
    })
}

/// Outcome of evaluating the derived conditions at a concrete weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub admissible: bool,
    pub violated: Vec<Condition>,
    /// Set when the trace pre-check already fails.
    pub trace_obstruction: Option<Error>,
}

pub fn check_weight(p: &PrimitivePoset, d: &DimVector, w: &Weight) -> Result<Verdict> {
    w.check_shape(p)?;
    d.check_shape(p)?;
    let trace_obstruction = check_trace(d, w).err();
    let (conditions, _) = derive_conditions(p, d)?;
    let violated = conditions.violated(w);
    Ok(Verdict {
        admissible: violated.is_empty(),
        violated,
        trace_obstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{parse_dim, parse_weight};

    fn poset(b: &[usize]) -> PrimitivePoset {
        PrimitivePoset::new(b.to_vec()).unwrap()
    }

    #[test]
    fn corpus_has_four_tables() {
        let c = reference_corpus();
        let counts: Vec<usize> = c.tables.values().map(|t| t.rows.len()).collect();
        assert_eq!(counts, vec![9, 15, 29, 53]);
        assert_eq!(c.row_count(), 106);
        assert!(matches!(
            c.table(&poset(&[4, 2, 1])),
            Err(Error::CorpusMissing(_))
        ));
    }

    #[test]
    fn d4_table_matches_corpus() {
        let c = reference_corpus();
        let check = verify_table(c.table(&poset(&[1, 1, 1])).unwrap()).unwrap();
        assert!(check.passed());
        assert_eq!(check.rows.len(), 9);
    }

    #[test]
    fn generated_d4_table() {
        let t = generate_table(&poset(&[1, 1, 1])).unwrap();
        assert_eq!(t.rows.len(), 9);
        assert!(t.rows[0].empty);
        assert!(t.rows[1..].iter().all(|r| !r.empty));
    }

    #[test]
    fn check_weight_examples() {
        let p = poset(&[1, 1, 1]);
        let d = parse_dim("1;1;1;2").unwrap();
        let ok = check_weight(&p, &d, &parse_weight("2;2;2;3").unwrap()).unwrap();
        assert!(ok.admissible && ok.trace_obstruction.is_none());
        let scaled = check_weight(&p, &d, &parse_weight("4;4;4;6").unwrap()).unwrap();
        assert!(scaled.admissible);
        let bad = check_weight(&p, &d, &parse_weight("3;2;2;3").unwrap()).unwrap();
        assert!(!bad.admissible);
        assert!(matches!(
            bad.trace_obstruction,
            Some(Error::TraceObstruction { .. })
        ));
    }
}
