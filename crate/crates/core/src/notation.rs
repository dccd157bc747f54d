//! String grammar shared by the command line and the text emitters:
//! posets as `2,2,1`; dimension vectors and weights as `;`-separated branches
//! of `,`-separated entries with the ambient dimension (or `g`) as the final field.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::form::Weight;
use crate::poset::{DimVector, PrimitivePoset};
use crate::Rational;

fn parse_entries<T: FromStr>(field: &str, what: &str) -> Result<Vec<T>> {
    field
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} entry {s:?}")))
        })
        .collect()
}

pub fn parse_poset(s: &str) -> Result<PrimitivePoset> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    PrimitivePoset::new(parse_entries(s, "branch length")?)
}

fn split_fields(s: &str) -> Result<(Vec<&str>, &str)> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let mut fields: Vec<&str> = s.split(';').collect();
    let last = fields.pop().filter(|l| !l.trim().is_empty());
    match last {
        Some(last) if !fields.is_empty() => Ok((fields, last)),
        _ => Err(Error::Parse(format!(
            "{s:?} needs at least one branch and a final field"
        ))),
    }
}

pub fn parse_dim(s: &str) -> Result<DimVector> {
    let (fields, last) = split_fields(s)?;
    let d0 = last
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad ambient dimension {last:?}")))?;
    let branches = fields
        .iter()
        .map(|f| parse_entries(f, "dimension"))
        .collect::<Result<_>>()?;
    Ok(DimVector::new(d0, branches))
}

pub fn parse_dim_for(p: &PrimitivePoset, s: &str) -> Result<DimVector> {
    let d = parse_dim(s)?;
    d.check_shape(p)?;
    Ok(d)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r: Rational = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if s.contains('/') && s.ends_with("/0") {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(r)
}

pub fn parse_weight(s: &str) -> Result<Weight> {
    let (fields, last) = split_fields(s)?;
    let gamma = parse_rational(last)?;
    let alphas = fields
        .iter()
        .map(|f| f.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Weight::new(alphas, gamma)
}

pub fn parse_weight_for(p: &PrimitivePoset, s: &str) -> Result<Weight> {
    let w = parse_weight(s)?;
    w.check_shape(p)?;
    Ok(w)
}

pub fn format_poset(p: &PrimitivePoset) -> String {
    p.branches()
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn format_dim(d: &DimVector) -> String {
    d.to_string()
}

pub fn format_weight(w: &Weight) -> String {
    let mut out = String::new();
    for b in w.alphas() {
        let parts: Vec<String> = b.iter().map(|a| a.to_string()).collect();
        out.push_str(&parts.join(","));
        out.push(';');
    }
    out.push_str(&w.gamma().to_string());
    out
}
