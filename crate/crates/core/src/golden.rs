//! Reference data shipped with the crate.
//!
//! Record grammar: UTF-8, one record per line, fields separated by `;`,
//! list entries separated by `,`. Lines starting with `#` are comments.

use std::str::FromStr;

use crate::compositions::Composition;
use crate::error::{Error, Result};
use crate::exact::{Rational, UniPoly};
use crate::formula::{FormulaTerm, RecursiveFormula};

const R_POLYNOMIALS: &str = include_str!("../data/r_polynomials.txt");
const R_VALUES: &str = include_str!("../data/r_values.txt");
const ALPHA_TABLE: &str = include_str!("../data/alpha_table.txt");
const FORMULAS: [&str; 7] = [
    include_str!("../data/formula_q4.txt"),
    include_str!("../data/formula_q6.txt"),
    include_str!("../data/formula_q8.txt"),
    include_str!("../data/formula_q10.txt"),
    include_str!("../data/formula_q12.txt"),
    include_str!("../data/formula_q14.txt"),
    include_str!("../data/formula_q16.txt"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueEntry {
    pub table: String,
    pub index: Composition,
    pub x: Rational,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaEntry {
    pub n: u32,
    pub j: u32,
    pub value: Rational,
}

fn records(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split(';').collect())
}

fn field<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad field '{s}'")))
}

fn arity<'a>(rec: &'a [&'a str], n: usize) -> Result<&'a [&'a str]> {
    if rec.len() != n {
        return Err(Error::Parse(format!("expected {n} fields in '{}'", rec.join(";"))));
    }
    Ok(rec)
}

/// Parses `composition;c0,c1,...` records.
pub fn parse_polynomials(text: &str) -> Result<Vec<(Composition, UniPoly)>> {
    records(text)
        .map(|rec| {
            let rec = arity(&rec, 2)?;
            let coeffs = rec[1].split(',').map(field::<Rational>).collect::<Result<Vec<_>>>()?;
            Ok((field(rec[0])?, UniPoly::from_coeffs(coeffs)))
        })
        .collect()
}

/// Parses `table;composition;x;value` records.
pub fn parse_values(text: &str) -> Result<Vec<ValueEntry>> {
    records(text)
        .map(|rec| {
            let rec = arity(&rec, 4)?;
            Ok(ValueEntry {
                table: rec[0].to_string(),
                index: field(rec[1])?,
                x: field(rec[2])?,
                value: field(rec[3])?,
            })
        })
        .collect()
}

/// Parses `N;j;value` records.
pub fn parse_alpha(text: &str) -> Result<Vec<AlphaEntry>> {
    records(text)
        .map(|rec| {
            let rec = arity(&rec, 3)?;
            Ok(AlphaEntry {
                n: field(rec[0])?,
                j: field(rec[1])?,
                value: field(rec[2])?,
            })
        })
        .collect()
}

/// Parses `coeff;word;q_order` records followed by one `bar;coeff;power`.
pub fn parse_formula(n: u32, text: &str) -> Result<RecursiveFormula> {
    let mut terms = Vec::new();
    let mut bar = None;
    for rec in records(text) {
        let rec = arity(&rec, 3)?;
        if rec[0] == "bar" {
            bar = Some((field::<Rational>(rec[1])?, field::<u32>(rec[2])?));
        } else {
            terms.push(FormulaTerm {
                coeff: field(rec[0])?,
                word: field(rec[1])?,
                q_order: field(rec[2])?,
            });
        }
    }
    let (bar_coeff, bar_power) = bar.ok_or_else(|| Error::Parse("missing bar record".into()))?;
    RecursiveFormula::new(n, terms, bar_coeff, bar_power)
}

pub fn r_polynomials() -> Vec<(Composition, UniPoly)> {
    parse_polynomials(R_POLYNOMIALS).expect("shipped data parses")
}

pub fn r_values() -> Vec<ValueEntry> {
    parse_values(R_VALUES).expect("shipped data parses")
}

pub fn alpha_table() -> Vec<AlphaEntry> {
    parse_alpha(ALPHA_TABLE).expect("shipped data parses")
}

/// Explicit formulae for `Q_4, ..., Q_16` (`N = 2..=8`).
pub fn explicit_formulas() -> Vec<RecursiveFormula> {
    FORMULAS
        .iter()
        .enumerate()
        .map(|(i, text)| parse_formula(i as u32 + 2, text).expect("shipped data parses"))
        .collect()
}

pub fn explicit_formula(n: u32) -> Option<RecursiveFormula> {
    (2..=8)
        .contains(&n)
        .then(|| parse_formula(n, FORMULAS[n as usize - 2]).expect("shipped data parses"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_data_shapes() {
        let polys = r_polynomials();
        assert_eq!(polys.len(), 2 + 4 + 8 + 16);
        let values = r_values();
        assert!(values.iter().any(|v| v.table == "vi5"));
        let alpha = alpha_table();
        assert_eq!(alpha.len(), (1..=10).sum::<usize>());
        for (i, f) in explicit_formulas().iter().enumerate() {
            let n = i as u32 + 2;
            assert_eq!(f.n, n);
            assert_eq!(f.terms.len(), (1usize << (n - 1)) - 1);
            assert_eq!(f.bar_power, n - 1);
        }
    }

    #[test]
    fn malformed_records_rejected() {
        assert!(parse_polynomials("1,1").is_err());
        assert!(parse_values("v2;1,1;x;1").is_err());
        assert!(parse_formula(2, "1;1;2").is_err());
    }
}
