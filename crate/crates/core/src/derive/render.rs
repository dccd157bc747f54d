//! Human-readable condition output: Unicode text and LaTeX longtable rows.

use num_traits::{One, Signed};

use super::table::Table;
use crate::form::{Condition, ConditionSet, LinearForm, Relation, Var};
use crate::notation::format_dim;
use crate::poset::PrimitivePoset;
use crate::Rational;

const UNICODE: [&str; 10] = ["α", "β", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "μ"];
const LATEX: [&str; 10] = [
    "\\alpha",
    "\\beta",
    "\\delta",
    "\\varepsilon",
    "\\zeta",
    "\\eta",
    "\\theta",
    "\\iota",
    "\\kappa",
    "\\mu",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Unicode,
    Latex,
}

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap())
        .collect()
}

fn var_name(p: &PrimitivePoset, v: Var, style: Style) -> String {
    match (v, style) {
        (Var::Gamma, Style::Unicode) => "γ".to_string(),
        (Var::Gamma, Style::Latex) => "\\gamma".to_string(),
        (Var::Alpha { branch, index }, _) => {
            let chained = p.branches().get(branch).is_some_and(|&k| k > 1);
            let letter = match style {
                Style::Unicode => UNICODE.get(branch).map(|s| s.to_string()),
                Style::Latex => LATEX.get(branch).map(|s| s.to_string()),
            };
            match (letter, style) {
                (Some(l), Style::Unicode) if chained => format!("{l}{}", subscript(index + 1)),
                (Some(l), Style::Latex) if chained => format!("{l}_{}", index + 1),
                (Some(l), _) => l,
                (None, Style::Unicode) => format!("a⁽{}⁾{}", branch + 1, subscript(index + 1)),
                (None, Style::Latex) => format!("a^{{({})}}_{}", branch + 1, index + 1),
            }
        }
    }
}

/// Sum of `c * v` with all `c > 0`, or `0` when there are no terms.
fn side(p: &PrimitivePoset, terms: &[(Var, Rational)], style: Style) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(v, c)| {
            let name = var_name(p, *v, style);
            if c.is_one() {
                name
            } else {
                format!("{c}{name}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// A signed sum such as `α₂+β-γ`; `0` for the zero form.
pub fn format_form(p: &PrimitivePoset, f: &LinearForm, style: Style) -> String {
    let mut out = String::new();
    for (v, c) in f.terms() {
        let name = var_name(p, *v, style);
        let mag = c.abs();
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `form < 0` printed as `positive part < negative part`.
pub fn format_condition(p: &PrimitivePoset, c: &Condition, style: Style) -> String {
    let (lhs, rhs) = split(&c.form);
    let rel = match c.rel {
        Relation::EqZero => "=",
        Relation::LtZero => "<",
    };
    format!("{}{rel}{}", side(p, &lhs, style), side(p, &rhs, style))
}

type Terms = Vec<(Var, Rational)>;

fn split(f: &LinearForm) -> (Terms, Terms) {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (v, c) in f.terms() {
        if c.is_positive() {
            pos.push((*v, c.clone()));
        } else {
            neg.push((*v, -c));
        }
    }
    (pos, neg)
}

pub fn format_conditions(p: &PrimitivePoset, c: &ConditionSet, style: Style) -> String {
    c.iter()
        .map(|x| format_condition(p, x, style))
        .collect::<Vec<_>>()
        .join(", ")
}

/// One row in the reference layout: `$(dims)$ & $conditions$ \\ \hline`.
pub fn latex_row(p: &PrimitivePoset, dim: &crate::DimVector, c: &ConditionSet) -> String {
    format!(
        "$({})$ & ${} $ \\\\ \\hline",
        format_dim(dim),
        format_conditions(p, c, Style::Latex)
    )
}

pub fn table_to_latex(t: &Table) -> String {
    let mut out = format!(
        "\\begin{{longtable}}{{p{{3.2cm}} | p{{7cm}}}}\n\\hline\n% poset ({})\n",
        t.poset
            .branches()
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(";")
    );
    for r in &t.rows {
        out.push_str(&latex_row(&t.poset, &r.dim, &r.conditions));
        out.push('\n');
    }
    out.push_str("\\end{longtable}\n");
    out
}

/// Aligned two-column text; empty regions are flagged.
pub fn table_to_text(t: &Table) -> String {
    let dims: Vec<String> = t
        .rows
        .iter()
        .map(|r| format!("({})", format_dim(&r.dim)))
        .collect();
    let width = dims.iter().map(|d| d.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (d, r) in dims.iter().zip(&t.rows) {
        let pad = width - d.chars().count();
        let mut line = format!(
            "{d}{}  {}",
            " ".repeat(pad),
            format_conditions(&t.poset, &r.conditions, Style::Unicode)
        );
        if r.empty {
            line.push_str("  [empty]");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derive::derive_conditions;
    use crate::notation::parse_dim;

    fn poset(b: &[usize]) -> PrimitivePoset {
        PrimitivePoset::new(b.to_vec()).unwrap()
    }

    #[test]
    fn d4_row_text_and_latex() {
        let p = poset(&[1, 1, 1]);
        let d = parse_dim("1;1;1;2").unwrap();
        let c = crate::derive::simplify(&derive_conditions(&p, &d).unwrap().0);
        let text = format_conditions(&p, &c, Style::Unicode);
        assert!(text.contains("α<γ"));
        assert!(text.ends_with("α+β+δ=2γ"));
        let row = latex_row(&p, &d, &c);
        assert!(row.starts_with("$(1;1;1;2)$ & $"));
        assert!(row.contains("\\alpha+\\beta+\\delta=2\\gamma"));
        assert!(row.ends_with("\\\\ \\hline"));
    }

    #[test]
    fn subscripts_only_on_chains() {
        let p = poset(&[2, 1, 1]);
        let c = Condition::lt_zero(
            &(&LinearForm::alpha(0, 1) + &LinearForm::alpha(1, 0)) - &LinearForm::gamma(),
        );
        assert_eq!(format_condition(&p, &c, Style::Unicode), "α₂+β<γ");
        assert_eq!(
            format_condition(&p, &c, Style::Latex),
            "\\alpha_2+\\beta<\\gamma"
        );
        let f = &(&LinearForm::alpha(0, 1).scale(&Rational::from_integer(2.into()))
            + &LinearForm::alpha(1, 0))
            - &LinearForm::gamma();
        assert_eq!(format_form(&p, &f, Style::Unicode), "2α₂+β-γ");
        assert_eq!(format_form(&p, &-&f, Style::Unicode), "-2α₂-β+γ");
        let g0 = Condition::eq_zero(LinearForm::gamma());
        assert_eq!(format_condition(&p, &g0, Style::Unicode), "γ=0");
    }
}
