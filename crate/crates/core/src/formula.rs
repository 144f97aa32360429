//! Universal recursive formulae and their text, LaTeX and JSON forms.
//!
//! A formula for `Q_{2N}` is a sum of terms `a_I P_{2I}(Q_{2N-2|I|})` over
//! compositions `I` with `|I| <= N-1`, plus one bar term
//! `b i* P̄_2^{N-1}(Q̄_2)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compositions::Composition;
use crate::error::{Error, Result};
use crate::exact::{sign_pow, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Coefficients from the interpolation polynomials `r_I`.
    Rpoly,
    /// Coefficients from residue families.
    Residue,
    /// Transcribed reference data.
    Reference,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Rpoly => "rpoly",
            Source::Residue => "residue",
            Source::Reference => "reference",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaTerm {
    pub coeff: Rational,
    pub word: Composition,
    pub q_order: u32,
}

impl FormulaTerm {
    /// Whether the coefficient has sign `(-1)^(|I|+m-1)`.
    pub fn obeys_sign_law(&self) -> bool {
        let e = self.word.size() as i64 + self.word.len() as i64 - 1;
        self.coeff.signum() == sign_pow(e).signum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursiveFormula {
    pub n: u32,
    pub source: Source,
    /// Canonical composition order.
    pub terms: Vec<FormulaTerm>,
    pub bar_coeff: Rational,
    pub bar_power: u32,
}

#[derive(Serialize, Deserialize)]
struct BarJson {
    coeff: Rational,
    power: u32,
}

#[derive(Serialize, Deserialize)]
struct FormulaJson {
    #[serde(rename = "N")]
    n: u32,
    source: Source,
    terms: Vec<FormulaTerm>,
    bar: BarJson,
}

/// Coefficient map key: `(word, q_order)`.
pub type TermKey = (Composition, u32);

impl RecursiveFormula {
    /// Validates homogeneity `|I| + q_order/2 = N`, uniqueness of keys and the
    /// bar power, then sorts the terms canonically.
    pub fn new(n: u32, mut terms: Vec<FormulaTerm>, bar_coeff: Rational, bar_power: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::MalformedFormula("N must be positive".into()));
        }
        if bar_power != n - 1 {
            return Err(Error::MalformedFormula(format!("bar power {bar_power} for N = {n}")));
        }
        for t in &terms {
            if t.q_order % 2 != 0 || t.q_order < 2 || t.word.size() + t.q_order / 2 != n {
                return Err(Error::MalformedFormula(format!(
                    "term P({}) Q_{} is not of order {}",
                    t.word,
                    t.q_order,
                    2 * n
                )));
            }
        }
        terms.sort_by(|a, b| a.word.cmp(&b.word));
        if terms.windows(2).any(|w| w[0].word == w[1].word) {
            return Err(Error::MalformedFormula("repeated word".into()));
        }
        Ok(RecursiveFormula {
            n,
            source: Source::Reference,
            terms,
            bar_coeff,
            bar_power,
        })
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    /// Whether every composition of size `1..N-1` has a term.
    pub fn is_complete(&self) -> bool {
        self.terms.len() + 1 == 1usize << (self.n - 1)
    }

    pub fn coefficient_map(&self) -> BTreeMap<TermKey, Rational> {
        self.terms
            .iter()
            .map(|t| ((t.word.clone(), t.q_order), t.coeff.clone()))
            .collect()
    }

    pub fn coeff_of(&self, word: &Composition) -> Option<&Rational> {
        self.terms.iter().find(|t| &t.word == word).map(|t| &t.coeff)
    }

    /// Terms whose coefficients violate the sign law.
    pub fn sign_law_violations(&self) -> Vec<&FormulaTerm> {
        self.terms.iter().filter(|t| !t.obeys_sign_law()).collect()
    }

    /// Differences as coefficient maps; empty iff the formulae agree.
    /// Missing terms count as coefficient 0.
    pub fn diff(&self, other: &RecursiveFormula) -> Vec<String> {
        let mut out = Vec::new();
        if self.n != other.n {
            out.push(format!("N: {} vs {}", self.n, other.n));
            return out;
        }
        let a = self.coefficient_map();
        let b = other.coefficient_map();
        let zero = Rational::zero();
        let keys: std::collections::BTreeSet<&TermKey> = a.keys().chain(b.keys()).collect();
        for key in keys {
            let x = a.get(key).unwrap_or(&zero);
            let y = b.get(key).unwrap_or(&zero);
            if x != y {
                out.push(format!("P({}) Q_{}: {x} vs {y}", key.0, key.1));
            }
        }
        if self.bar_coeff != other.bar_coeff || self.bar_power != other.bar_power {
            out.push(format!(
                "bar: {} (power {}) vs {} (power {})",
                self.bar_coeff, self.bar_power, other.bar_coeff, other.bar_power
            ));
        }
        out
    }

    pub fn same_coefficients(&self, other: &RecursiveFormula) -> bool {
        self.diff(other).is_empty()
    }

    pub fn to_json(&self) -> String {
        let j = FormulaJson {
            n: self.n,
            source: self.source,
            terms: self.terms.clone(),
            bar: BarJson {
                coeff: self.bar_coeff.clone(),
                power: self.bar_power,
            },
        };
        serde_json::to_string_pretty(&j).expect("formula serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: FormulaJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(RecursiveFormula::new(j.n, j.terms, j.bar.coeff, j.bar.power)?.with_source(j.source))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("Q_{} =", 2 * self.n);
        let mut first = true;
        let mut push = |coeff: &Rational, body: String| {
            let (sign, mag) = if coeff.is_negative() {
                ("-", coeff.abs())
            } else {
                ("+", coeff.clone())
            };
            let c = if mag.is_one() { String::new() } else { format!("{mag} ") };
            if first {
                let lead = if sign == "-" { "-" } else { "" };
                s.push_str(&format!(" {lead}{c}{body}"));
                first = false;
            } else {
                s.push_str(&format!(" {sign} {c}{body}"));
            }
        };
        for t in &self.terms {
            let word: Vec<String> = t.word.entries().iter().map(|j| format!("P_{}", 2 * j)).collect();
            push(&t.coeff, format!("{}(Q_{})", word.join(" "), t.q_order));
        }
        let bar = match self.bar_power {
            0 => "i*(Qbar_2)".to_string(),
            1 => "i* Pbar_2(Qbar_2)".to_string(),
            p => format!("i* Pbar_2^{p}(Qbar_2)"),
        };
        push(&self.bar_coeff, bar);
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = format!("Q_{{{}}} =", 2 * self.n);
        let mut first = true;
        let mut push = |coeff: &Rational, body: String| {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            let c = if mag.is_one() {
                String::new()
            } else if mag.is_integer() {
                format!("{mag} ")
            } else {
                format!("\\frac{{{}}}{{{}}} ", mag.numer(), mag.denom())
            };
            match (first, neg) {
                (true, false) => s.push_str(&format!(" {c}{body}")),
                (true, true) => s.push_str(&format!(" -{c}{body}")),
                (false, false) => s.push_str(&format!(" + {c}{body}")),
                (false, true) => s.push_str(&format!(" - {c}{body}")),
            }
            first = false;
        };
        for t in &self.terms {
            push(&t.coeff, format!("{}(Q_{{{}}})", latex_word(&t.word), t.q_order));
        }
        let bar = match self.bar_power {
            0 => "i^*(\\bar{Q}_2)".to_string(),
            1 => "i^* \\bar{P}_2(\\bar{Q}_2)".to_string(),
            p => format!("i^* \\bar{{P}}_2^{{{p}}}(\\bar{{Q}}_2)"),
        };
        push(&self.bar_coeff, bar);
        s
    }
}

/// `P_{2I_1} ... P_{2I_m}` with runs of equal factors written as powers.
fn latex_word(word: &Composition) -> String {
    let mut parts = Vec::new();
    let e = word.entries();
    let mut i = 0;
    while i < e.len() {
        let mut j = i;
        while j < e.len() && e[j] == e[i] {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            parts.push(format!("P_{{{}}}", 2 * e[i]));
        } else {
            parts.push(format!("P_{{{}}}^{{{run}}}", 2 * e[i]));
        }
        i = j;
    }
    parts.join(" ")
}

impl fmt::Display for RecursiveFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
