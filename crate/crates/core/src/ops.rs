//! Free noncommutative operator words over boundary GJMS operators `P_{2j}`,
//! the restriction `i*` and the bulk Yamabe operator `P̄_2`, with
//! coefficients that are polynomials in the spectral parameter `λ`.
//!
//! Words read left to right as `P_{2I_1} ... P_{2I_m} [i*] P̄_2^k` and act
//! rightmost first. No commutation rules are applied.

use std::collections::BTreeMap;
use std::fmt;

use crate::compositions::Composition;
use crate::error::{Error, Result};
use crate::exact::{Rational, UniPoly, Var};
use crate::formula::{FormulaTerm, RecursiveFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpSymbol {
    /// `P_{2j}` on the boundary.
    Gjms(u32),
    /// `i*`, restriction to `r = 0`.
    Restrict,
    /// `P̄_2`, the Yamabe operator of the bulk metric.
    Bar,
}

/// A well-formed word `P_{2I} [i*] P̄_2^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    gjms: Vec<u32>,
    restrict: bool,
    bar: u32,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn new(gjms: Vec<u32>, restrict: bool, bar: u32) -> Result<Self> {
        if gjms.contains(&0) {
            return Err(Error::WordGrammar("P_0 is not a GJMS operator".into()));
        }
        Ok(Word { gjms, restrict, bar })
    }

    pub fn from_symbols(symbols: &[OpSymbol]) -> Result<Self> {
        let mut w = Word::identity();
        for &s in symbols {
            let next = match s {
                OpSymbol::Gjms(j) => Word::new(vec![j], false, 0)?,
                OpSymbol::Restrict => Word::new(vec![], true, 0)?,
                OpSymbol::Bar => Word::new(vec![], false, 1)?,
            };
            w = w.concat(&next)?;
        }
        Ok(w)
    }

    pub fn symbols(&self) -> Vec<OpSymbol> {
        let mut out: Vec<OpSymbol> = self.gjms.iter().map(|&j| OpSymbol::Gjms(j)).collect();
        if self.restrict {
            out.push(OpSymbol::Restrict);
        }
        out.extend(std::iter::repeat_n(OpSymbol::Bar, self.bar as usize));
        out
    }

    pub fn gjms(&self) -> &[u32] {
        &self.gjms
    }

    pub fn has_restriction(&self) -> bool {
        self.restrict
    }

    pub fn bar_power(&self) -> u32 {
        self.bar
    }

    /// `self` followed by `other`, if the result is still well formed.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        let self_tail = self.restrict || self.bar > 0;
        if !other.gjms.is_empty() && self_tail {
            return Err(Error::WordGrammar(format!("{self} followed by {other}")));
        }
        if other.restrict && (self.restrict || self.bar > 0) {
            return Err(Error::WordGrammar(format!("{self} followed by {other}")));
        }
        let mut gjms = self.gjms.clone();
        gjms.extend_from_slice(&other.gjms);
        Ok(Word {
            gjms,
            restrict: self.restrict || other.restrict,
            bar: self.bar + other.bar,
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.gjms.iter().map(|j| format!("P_{}", 2 * j)).collect();
        if self.restrict {
            parts.push("i*".into());
        }
        match self.bar {
            0 => {}
            1 => parts.push("Pbar_2".into()),
            k => parts.push(format!("Pbar_2^{k}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Linear combination of words with `λ`-polynomial coefficients, in a fixed
/// dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpExpr {
    n: Rational,
    terms: BTreeMap<Word, UniPoly>,
}

impl OpExpr {
    pub fn zero(n: Rational) -> Self {
        OpExpr {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(n: Rational, word: Word, coeff: UniPoly) -> Self {
        let mut e = OpExpr::zero(n);
        e.add_term(word, &coeff);
        e
    }

    pub fn constant(n: Rational, word: Word, coeff: Rational) -> Self {
        Self::term(n, word, UniPoly::constant(coeff))
    }

    pub fn identity(n: Rational) -> Self {
        Self::constant(n, Word::identity(), Rational::one())
    }

    pub fn gjms(n: Rational, j: u32) -> Self {
        Self::constant(n, Word::new(vec![j], false, 0).expect("j >= 1"), Rational::one())
    }

    pub fn restriction(n: Rational) -> Self {
        Self::constant(n, Word::new(vec![], true, 0).expect("valid"), Rational::one())
    }

    pub fn yamabe(n: Rational) -> Self {
        Self::constant(n, Word::new(vec![], false, 1).expect("valid"), Rational::one())
    }

    pub fn dimension(&self) -> &Rational {
        &self.n
    }

    pub fn terms(&self) -> &BTreeMap<Word, UniPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &Word) -> UniPoly {
        self.terms.get(word).cloned().unwrap_or_else(UniPoly::zero)
    }

    fn add_term(&mut self, word: Word, coeff: &UniPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(word.clone()).or_insert_with(UniPoly::zero);
        *slot = &*slot + coeff;
        if slot.is_zero() {
            self.terms.remove(&word);
        }
    }

    fn same_dimension(&self, other: &OpExpr) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n.to_string(), other.n.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &OpExpr) -> Result<OpExpr> {
        self.same_dimension(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    /// `self += s * other` with a `λ`-polynomial weight.
    pub fn add_weighted(&mut self, other: &OpExpr, s: &UniPoly) -> Result<()> {
        self.same_dimension(other)?;
        for (w, c) in &other.terms {
            self.add_term(w.clone(), &(c * s));
        }
        Ok(())
    }

    pub fn scale(&self, s: &Rational) -> OpExpr {
        let mut out = OpExpr::zero(self.n.clone());
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &c.scale(s));
        }
        out
    }

    /// Bilinear extension of word concatenation; `self` acts after `other`.
    pub fn compose(&self, other: &OpExpr) -> Result<OpExpr> {
        self.same_dimension(other)?;
        let mut out = OpExpr::zero(self.n.clone());
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Evaluation at `λ = λ0`; the result has constant coefficients.
    pub fn eval_lambda(&self, lambda: &Rational) -> OpExpr {
        let mut out = OpExpr::zero(self.n.clone());
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &UniPoly::constant(c.eval(lambda)));
        }
        out
    }

    /// The coefficient of `λ^i`, as a `λ`-free expression.
    pub fn lambda_coeff(&self, i: usize) -> OpExpr {
        let mut out = OpExpr::zero(self.n.clone());
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &UniPoly::constant(c.coeff(i)));
        }
        out
    }

    pub fn lambda_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(UniPoly::degree).max()
    }

    pub fn is_lambda_free(&self) -> bool {
        self.lambda_degree().is_none_or(|d| d == 0)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let c = c.clone().with_var(Var::Lambda);
                if c.degree() == Some(0) {
                    format!("({}) {w}", c.coeff(0))
                } else {
                    format!("({c}) {w}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for OpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// What an operator word finally acts on after rewriting at the constant
/// function 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// The constant 1 itself.
    Unit,
    /// `Q_{2k}`.
    Q(u32),
    /// `i* P̄_2^k(Q̄_2)`, `k >= 1`; power 0 is normalized to `Q(1)`.
    Bar(u32),
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Unit => f.write_str("1"),
            Target::Q(k) => write!(f, "Q_{}", 2 * k),
            Target::Bar(1) => f.write_str("i* Pbar_2(Qbar_2)"),
            Target::Bar(k) => write!(f, "i* Pbar_2^{k}(Qbar_2)"),
        }
    }
}

/// `(boundary word, target)` key of a [`ValueExpr`].
pub type ValueKey = (Vec<u32>, Target);

/// Linear combination of `P_{2I}(target)` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValueExpr {
    terms: BTreeMap<ValueKey, Rational>,
}

impl ValueExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(word: Vec<u32>, target: Target, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(word, target, &coeff);
        v
    }

    pub fn terms(&self) -> &BTreeMap<ValueKey, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, word: &[u32], target: Target) -> Rational {
        self.terms
            .get(&(word.to_vec(), target))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, word: Vec<u32>, target: Target, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        let target = match target {
            Target::Bar(0) => Target::Q(1),
            t => t,
        };
        let key = (word, target);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &ValueExpr, s: &Rational) {
        for ((w, t), c) in &other.terms {
            self.add_term(w.clone(), *t, &(c * s));
        }
    }

    pub fn scale(&self, s: &Rational) -> ValueExpr {
        let mut out = ValueExpr::zero();
        out.add_scaled(self, s);
        out
    }

    /// Largest bar power present.
    pub fn max_bar_power(&self) -> Option<u32> {
        self.terms
            .keys()
            .filter_map(|(_, t)| match t {
                Target::Bar(k) => Some(*k),
                _ => None,
            })
            .max()
    }

    /// Reads `Q_{2N} = self` as a recursive formula: every term must be
    /// `P_{2I}(Q_{2N-2|I|})` with `I` nonempty, or the single bar term
    /// `i* P̄_2^{N-1}(Q̄_2)`.
    pub fn to_formula(&self, n: u32) -> Result<RecursiveFormula> {
        let mut terms = Vec::new();
        let mut bar = Rational::zero();
        for ((w, t), c) in &self.terms {
            match t {
                Target::Bar(k) if w.is_empty() && *k == n - 1 => bar = c.clone(),
                Target::Q(k) if !w.is_empty() => terms.push(FormulaTerm {
                    coeff: c.clone(),
                    word: Composition::new(w.clone())?,
                    q_order: 2 * k,
                }),
                Target::Q(1) if n == 1 && w.is_empty() => bar = c.clone(),
                _ => {
                    return Err(Error::MalformedFormula(format!(
                        "unexpected term {c} {} for Q_{}",
                        render_key(w, *t),
                        2 * n
                    )))
                }
            }
        }
        RecursiveFormula::new(n, terms, bar, n - 1)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((w, t), c)| format!("({c}) {}", render_key(w, *t)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn render_key(word: &[u32], target: Target) -> String {
    if word.is_empty() {
        return target.to_string();
    }
    let w: Vec<String> = word.iter().map(|j| format!("P_{}", 2 * j)).collect();
    format!("{}({target})", w.join(" "))
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Rewrites the action of a `λ`-free expression on the constant function 1.
///
/// `i* P̄_2^k(1) = -((n-1)/2) i* P̄_2^{k-1}(Q̄_2)`, since `P̄_2` is the
/// Yamabe operator in dimension `n+1`; `P_{2I'} P_{2j}(1) = (-1)^j (n/2 - j)
/// P_{2I'}(Q_{2j})`; `i*(1) = 1`.
pub fn apply_to_one(e: &OpExpr) -> Result<ValueExpr> {
    if !e.is_lambda_free() {
        return Err(Error::NotLambdaFree);
    }
    let n = e.dimension();
    let half_n = n * &Rational::frac(1, 2);
    let bar_factor = -((n - &Rational::one()) * Rational::frac(1, 2));
    let mut out = ValueExpr::zero();
    for (w, c) in e.terms() {
        let c = c.coeff(0);
        if w.bar_power() > 0 {
            if !w.has_restriction() {
                return Err(Error::WordGrammar(format!("{w} applied to 1 is not a boundary value")));
            }
            out.add_term(w.gjms().to_vec(), Target::Bar(w.bar_power() - 1), &(&c * &bar_factor));
        } else if let Some((&j, rest)) = w.gjms().split_last() {
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            let factor = sign * (&half_n - &Rational::from_int(j as i64));
            out.add_term(rest.to_vec(), Target::Q(j), &(&c * &factor));
        } else {
            out.add_term(Vec::new(), Target::Unit, &c);
        }
    }
    Ok(out)
}

/// Replaces every bar term of power `1 <= k < keep` by the formula for
/// `Q_{2k+2}` solved for its bar term, left-multiplied by the term's word.
/// `known` maps `N` to the formula for `Q_{2N}`.
pub fn substitute_universal(v: &ValueExpr, known: &BTreeMap<u32, RecursiveFormula>, keep: u32) -> Result<ValueExpr> {
    let mut out = ValueExpr::zero();
    for ((w, t), c) in v.terms() {
        match *t {
            Target::Bar(k) if k >= 1 && k < keep => {
                let f = known.get(&(k + 1)).ok_or(Error::UniversalityIncomplete(2 * (k + 1)))?;
                if f.bar_coeff.is_zero() {
                    return Err(Error::DegenerateNormalization);
                }
                let s = c / &f.bar_coeff;
                out.add_term(w.clone(), Target::Q(k + 1), &s);
                for term in &f.terms {
                    let mut word = w.clone();
                    word.extend_from_slice(term.word.entries());
                    out.add_term(word, Target::Q(term.q_order / 2), &-(&s * &term.coeff));
                }
            }
            _ => out.add_term(w.clone(), *t, c),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn w(gjms: &[u32], restrict: bool, bar: u32) -> Word {
        Word::new(gjms.to_vec(), restrict, bar).unwrap()
    }

    #[test]
    fn word_grammar() {
        let ok = Word::from_symbols(&[OpSymbol::Gjms(1), OpSymbol::Restrict, OpSymbol::Bar]).unwrap();
        assert_eq!(ok, w(&[1], true, 1));
        assert_eq!(ok.to_string(), "P_2 i* Pbar_2");
        assert_eq!(ok.symbols(), vec![OpSymbol::Gjms(1), OpSymbol::Restrict, OpSymbol::Bar]);
        assert!(Word::from_symbols(&[OpSymbol::Restrict, OpSymbol::Gjms(1)]).is_err());
        assert!(Word::from_symbols(&[OpSymbol::Bar, OpSymbol::Restrict]).is_err());
        assert!(Word::from_symbols(&[OpSymbol::Restrict, OpSymbol::Restrict]).is_err());
        assert!(Word::new(vec![0], false, 0).is_err());
    }

    #[test]
    fn compose_examples() {
        let n = Rational::from_int(4);
        let p2 = OpExpr::gjms(n.clone(), 1);
        let istar_bar = OpExpr::constant(n.clone(), w(&[], true, 1), Rational::one());
        assert_eq!(
            p2.compose(&istar_bar).unwrap(),
            OpExpr::constant(n.clone(), w(&[1], true, 1), Rational::one())
        );
        let id = OpExpr::identity(n.clone());
        assert_eq!(id.compose(&p2).unwrap(), p2);
        assert_eq!(p2.compose(&id).unwrap(), p2);
        let a = OpExpr::gjms(n.clone(), 2).scale(&q(2, 1));
        let b = OpExpr::constant(n.clone(), w(&[1], true, 0), q(3, 1));
        assert_eq!(
            a.compose(&b).unwrap(),
            OpExpr::constant(n.clone(), w(&[2, 1], true, 0), q(6, 1))
        );
        assert!(istar_bar.compose(&p2).is_err());
        assert!(p2.compose(&OpExpr::gjms(Rational::from_int(6), 1)).is_err());
    }

    #[test]
    fn lambda_handling() {
        let n = Rational::from_int(4);
        let e = OpExpr::term(n.clone(), w(&[1], true, 0), UniPoly::from_ints(&[3, 2]));
        assert_eq!(e.lambda_degree(), Some(1));
        assert!(!e.is_lambda_free());
        assert_eq!(
            e.eval_lambda(&q(1, 1)).coeff(&w(&[1], true, 0)),
            UniPoly::constant(q(5, 1))
        );
        assert_eq!(e.lambda_coeff(1).coeff(&w(&[1], true, 0)), UniPoly::constant(q(2, 1)));
        assert!(apply_to_one(&e).is_err());
    }

    #[test]
    fn apply_to_one_examples() {
        let six = Rational::from_int(6);
        let v = apply_to_one(&OpExpr::constant(six, w(&[1], true, 0), Rational::one())).unwrap();
        assert_eq!(v, ValueExpr::single(vec![], Target::Q(1), q(-2, 1)));

        let eight = Rational::from_int(8);
        let v = apply_to_one(&OpExpr::constant(eight, w(&[4], true, 0), Rational::one())).unwrap();
        assert!(v.is_zero());

        let four = Rational::from_int(4);
        let v = apply_to_one(&OpExpr::constant(four.clone(), w(&[], true, 1), Rational::one())).unwrap();
        assert_eq!(v, ValueExpr::single(vec![], Target::Q(1), q(-3, 2)));

        let v = apply_to_one(&OpExpr::constant(four.clone(), w(&[2], true, 3), q(2, 1))).unwrap();
        assert_eq!(v, ValueExpr::single(vec![2], Target::Bar(2), q(-3, 1)));

        let v = apply_to_one(&OpExpr::restriction(four.clone())).unwrap();
        assert_eq!(v, ValueExpr::single(vec![], Target::Unit, q(1, 1)));

        assert!(apply_to_one(&OpExpr::yamabe(four)).is_err());
    }

    fn q4_formula() -> RecursiveFormula {
        crate::golden::explicit_formula(2).unwrap()
    }

    fn q6_formula() -> RecursiveFormula {
        crate::golden::explicit_formula(3).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let mut known = BTreeMap::new();
        known.insert(2, q4_formula());
        known.insert(3, q6_formula());

        let v = ValueExpr::single(vec![], Target::Bar(1), Rational::one());
        let s = substitute_universal(&v, &known, 3).unwrap();
        let mut expected = ValueExpr::zero();
        expected.add_term(vec![], Target::Q(2), &q(-1, 2));
        expected.add_term(vec![1], Target::Q(1), &q(1, 2));
        assert_eq!(s, expected);

        let v = ValueExpr::single(vec![1], Target::Bar(2), Rational::one());
        let s = substitute_universal(&v, &known, 4).unwrap();
        assert_eq!(s.get(&[1], Target::Q(3)), q(3, 8));
        assert_eq!(s.get(&[1, 1], Target::Q(2)), q(-1, 4));
        assert_eq!(s.get(&[1, 1, 1], Target::Q(1)), q(5, 8));
        assert_eq!(s.get(&[1, 2], Target::Q(1)), q(-1, 4));
        assert_eq!(s.max_bar_power(), None);

        let kept = substitute_universal(&v, &known, 2).unwrap();
        assert_eq!(kept, v);
        let again = substitute_universal(&s, &known, 4).unwrap();
        assert_eq!(again, s);

        let v = ValueExpr::single(vec![], Target::Bar(3), Rational::one());
        assert!(matches!(
            substitute_universal(&v, &known, 4),
            Err(Error::UniversalityIncomplete(8))
        ));
    }

    #[test]
    fn value_expr_to_formula() {
        let mut v = ValueExpr::zero();
        v.add_term(vec![1], Target::Q(1), &Rational::one());
        v.add_term(vec![], Target::Bar(1), &q(-2, 1));
        assert!(v.to_formula(2).unwrap().same_coefficients(&q4_formula()));
        v.add_term(vec![], Target::Unit, &Rational::one());
        assert!(v.to_formula(2).is_err());
    }
}
