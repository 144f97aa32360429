//! Residue families and the formulae they produce.
//!
//! `D_{2N}(λ)` is a polynomial of degree `N` in `λ`, fixed by the `N + 1`
//! factorization identities
//!
//! ```text
//! D_{2N}(-n/2 + 2N - j) = P_{2j} D_{2N-2j}(-n/2 + 2N - j),   j = 1..N
//! D_{2N}(-(n-1)/2)      = D_{2N-2}(-(n+3)/2) P̄_2
//! ```
//!
//! with `D_0 = i*`. In the critical dimension `n = 2N` the linear
//! coefficient of `Q^res(λ) = -(-1)^N D_{2N}(λ)(1)` is `Q_{2N}`; above it,
//! `Q^res(0) = 0` gives a second route to the same formula.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::coeffs::assemble_formula;
use crate::error::{Error, Result};
use crate::exact::{sign_pow, LagrangeBasis, Rational, UniPoly};
use crate::formula::{RecursiveFormula, Source};
use crate::ops::{apply_to_one, substitute_universal, OpExpr, Target, ValueExpr};
use crate::report::Report;
use crate::rpoly::RTable;

#[derive(Clone, Debug)]
pub struct ResidueFamily {
    pub order: u32,
    pub n: Rational,
    /// `(λ node, operator value)`, factorization nodes first, `P̄_2` node last.
    pub nodes: Vec<(Rational, OpExpr)>,
    pub expanded: OpExpr,
}

/// The identity `0 = Q^res(0)` read as a formula for `Q_{2N}`.
#[derive(Clone, Debug)]
pub struct Residual {
    pub n: Rational,
    /// `Q^res(0)` after eliminating intermediate bar powers.
    pub value: ValueExpr,
    /// Coefficient of `Q_{2N}` in `value`.
    pub multiplier: Rational,
    /// `value` rescaled to the gap between the derivatives at `λ = -n/2 + N`
    /// of the vanishing-at-0 interpolant and the factorization interpolant.
    /// Its `Q_{2N}` coefficient is `(n-1)/(2N-1)`.
    pub derivative_form: ValueExpr,
    pub formula: RecursiveFormula,
}

/// Memoized residue-family builder.
#[derive(Default)]
pub struct ResidueEngine {
    families: HashMap<(u32, Rational), Rc<ResidueFamily>>,
    critical: BTreeMap<u32, RecursiveFormula>,
    trace: Option<Vec<String>>,
}

fn q2_formula() -> RecursiveFormula {
    RecursiveFormula::new(1, Vec::new(), Rational::one(), 0)
        .expect("valid")
        .with_source(Source::Residue)
}

impl ResidueEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records node tables, Lagrange weights and substitution steps.
    pub fn with_trace() -> Self {
        ResidueEngine {
            trace: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn trace(&self) -> &[String] {
        self.trace.as_deref().unwrap_or(&[])
    }

    fn log(&mut self, line: impl FnOnce() -> String) {
        if let Some(t) = &mut self.trace {
            t.push(line());
        }
    }

    pub fn family(&mut self, order: u32, n: &Rational) -> Result<Rc<ResidueFamily>> {
        let key = (order, n.clone());
        if let Some(f) = self.families.get(&key) {
            return Ok(f.clone());
        }
        let fam = if order == 0 {
            ResidueFamily {
                order,
                n: n.clone(),
                nodes: Vec::new(),
                expanded: OpExpr::restriction(n.clone()),
            }
        } else {
            self.build_family(order, n)?
        };
        let fam = Rc::new(fam);
        self.families.insert(key, fam.clone());
        Ok(fam)
    }

    fn build_family(&mut self, order: u32, n: &Rational) -> Result<ResidueFamily> {
        let half_n = n * &Rational::frac(1, 2);
        let mut nodes = Vec::with_capacity(order as usize + 1);
        for j in 1..=order {
            let lambda = Rational::from_int((2 * order - j) as i64) - &half_n;
            let lower = self.family(order - j, n)?;
            let value = OpExpr::gjms(n.clone(), j).compose(&lower.expanded.eval_lambda(&lambda))?;
            nodes.push((lambda, value));
        }
        let lambda_bar = -((n - &Rational::one()) * Rational::frac(1, 2));
        let inner = -((n + &Rational::from_int(3)) * Rational::frac(1, 2));
        let lower = self.family(order - 1, n)?;
        let value = lower.expanded.eval_lambda(&inner).compose(&OpExpr::yamabe(n.clone()))?;
        nodes.push((lambda_bar, value));

        let abscissas: Vec<Rational> = nodes.iter().map(|(l, _)| l.clone()).collect();
        let basis = LagrangeBasis::new(&abscissas).map_err(|e| match e {
            Error::DegenerateNodes => Error::CoincidentNodes(format!("D_{} at n = {n}", 2 * order)),
            e => e,
        })?;
        let mut expanded = OpExpr::zero(n.clone());
        for ((_, value), weight) in nodes.iter().zip(basis.basis()) {
            expanded.add_weighted(value, weight)?;
        }
        self.log(|| {
            let mut s = format!("D_{} at n = {n}\n", 2 * order);
            for ((l, v), w) in nodes.iter().zip(basis.basis()) {
                s.push_str(&format!(
                    "  node λ = {l}: {v}\n    weight {}\n",
                    w.clone().with_var(crate::exact::Var::Lambda)
                ));
            }
            s.push_str(&format!("  expanded: {expanded}"));
            s
        });
        Ok(ResidueFamily {
            order,
            n: n.clone(),
            nodes,
            expanded,
        })
    }

    fn known_below(&mut self, order: u32) -> Result<BTreeMap<u32, RecursiveFormula>> {
        let mut known = BTreeMap::new();
        known.insert(1, q2_formula());
        for k in 2..order {
            known.insert(k, self.critical_formula(k)?);
        }
        Ok(known)
    }

    /// The formula for `Q_{2N}` extracted in the critical dimension `n = 2N`.
    pub fn critical_formula(&mut self, order: u32) -> Result<RecursiveFormula> {
        if order < 2 {
            return Err(Error::Domain("critical_formula requires N >= 2".into()));
        }
        if let Some(f) = self.critical.get(&order) {
            return Ok(f.clone());
        }
        let n = Rational::from_int(2 * order as i64);
        let fam = self.family(order, &n)?;
        let constant = apply_to_one(&fam.expanded.lambda_coeff(0))?;
        if !constant.is_zero() {
            return Err(Error::CriticalChannel(constant.to_text()));
        }
        let sign = -sign_pow(order as i64);
        let linear = apply_to_one(&fam.expanded.lambda_coeff(1))?.scale(&sign);
        let known = self.known_below(order)?;
        self.log(|| format!("Q_{} before substitution: {linear}", 2 * order));
        let value = substitute_universal(&linear, &known, order - 1)?;
        self.log(|| format!("Q_{} after substitution: {value}", 2 * order));
        let f = value.to_formula(order)?.with_source(Source::Residue);
        self.critical.insert(order, f.clone());
        Ok(f)
    }

    /// Solves `Q^res(0) = 0` in dimension `n` for `Q_{2N}`.
    pub fn universality_residual(&mut self, order: u32, n: &Rational) -> Result<Residual> {
        if order < 2 {
            return Err(Error::Domain("universality_residual requires N >= 2".into()));
        }
        let two = Rational::from_int(2);
        if !(n / &two).is_integer() || *n < Rational::from_int(4 * order as i64) {
            return Err(Error::Domain(format!(
                "dimension {n} must be even and >= {}",
                4 * order
            )));
        }
        let fam = self.family(order, n)?;
        let at_zero = apply_to_one(&fam.expanded.eval_lambda(&Rational::zero()))?;
        let qres = at_zero.scale(&-sign_pow(order as i64));
        let known = self.known_below(order)?;
        let value = substitute_universal(&qres, &known, order - 1)?;
        let multiplier = value.get(&[], Target::Q(order));
        if multiplier.is_zero() {
            return Err(Error::DegenerateNormalization);
        }
        let mut rest = value.clone();
        rest.add_term(Vec::new(), Target::Q(order), &-multiplier.clone());
        let solved = rest.scale(&-multiplier.recip()?);
        let formula = solved.to_formula(order)?.with_source(Source::Residue);

        // F - G = κ W(λ) with W the product over the shared nodes, so the
        // derivative gap G' - F' at the first node is -Q^res(0) W'(λ_0) / W(0).
        let half_n = n * &Rational::frac(1, 2);
        let mut w = UniPoly::one();
        for j in 1..=order {
            let lambda = Rational::from_int((2 * order - j) as i64) - &half_n;
            w = &w * &UniPoly::linear_root(&lambda);
        }
        let first = Rational::from_int(order as i64) - &half_n;
        let ratio = w.derivative().eval(&first) / w.eval(&Rational::zero());
        let derivative_form = value.scale(&-ratio);

        Ok(Residual {
            n: n.clone(),
            value,
            multiplier,
            derivative_form,
            formula,
        })
    }

    /// Compares the residue route with the `r_I` route for `2 <= N <= n_max`.
    pub fn cross_check(&mut self, table: &mut RTable, n_max: u32) -> Result<Report> {
        let mut report = Report::new(format!("residue vs r_I formulae up to N = {n_max}"));
        for order in 2..=n_max {
            let a = self.critical_formula(order)?;
            let b = assemble_formula(table, order)?;
            let d = a.diff(&b);
            report.check(format!("N={order}"), d.is_empty(), || d.join("; "));
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::Word;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn w(gjms: &[u32], restrict: bool, bar: u32) -> Word {
        Word::new(gjms.to_vec(), restrict, bar).unwrap()
    }

    #[test]
    fn second_order_family_in_dimension_four() {
        let mut e = ResidueEngine::new();
        let four = Rational::from_int(4);
        let fam = e.family(1, &four).unwrap();
        let at1 = fam.expanded.eval_lambda(&q(1, 1));
        assert_eq!(at1.coeff(&w(&[1], true, 0)), UniPoly::constant(q(5, 1)));
        assert_eq!(at1.coeff(&w(&[], true, 1)), UniPoly::constant(q(-4, 1)));
        assert_eq!(at1.terms().len(), 2);
        let at = fam.expanded.eval_lambda(&q(-7, 2));
        assert_eq!(at.coeff(&w(&[], true, 1)), UniPoly::constant(q(5, 1)));
        assert_eq!(at.coeff(&w(&[1], true, 0)), UniPoly::constant(q(-4, 1)));
    }

    #[test]
    fn fourth_order_family_coefficients() {
        let mut e = ResidueEngine::new();
        let four = Rational::from_int(4);
        let fam = e.family(2, &four).unwrap();
        let a = fam.expanded.lambda_coeff(2);
        let b = fam.expanded.lambda_coeff(1);
        let c = fam.expanded.lambda_coeff(0);
        let k = |e: &OpExpr, word: Word| e.coeff(&word).coeff(0);
        assert_eq!(k(&a, w(&[1, 1], true, 0)), q(2, 1));
        assert_eq!(k(&a, w(&[1], true, 1)), q(-8, 3));
        assert_eq!(k(&a, w(&[], true, 2)), q(4, 3));
        assert_eq!(a.terms().len(), 4);
        assert_eq!(k(&b, w(&[1, 1], true, 0)), q(3, 1));
        assert_eq!(k(&b, w(&[1], true, 1)), q(-4, 3));
        assert_eq!(k(&b, w(&[], true, 2)), q(-4, 3));
        assert_eq!(b.terms().len(), 4);
        assert_eq!(c, OpExpr::constant(four, w(&[2], true, 0), Rational::one()));

        // The mixing matrix acts on the node values with C removed.
        let v_bar = fam.nodes[2].1.add(&c.scale(&q(-1, 1))).unwrap();
        let v_one = fam.nodes[0].1.add(&c.scale(&q(-1, 1))).unwrap();
        assert_eq!(fam.nodes[0].0, q(1, 1));
        let a2 = v_bar.scale(&q(4, 15)).add(&v_one.scale(&q(6, 15))).unwrap();
        let b2 = v_bar.scale(&q(-4, 15)).add(&v_one.scale(&q(9, 15))).unwrap();
        assert_eq!(a2, a);
        assert_eq!(b2, b);
    }

    #[test]
    fn families_reproduce_their_nodes() {
        let mut e = ResidueEngine::new();
        for order in 1..=4 {
            for n in [2 * order as i64, 4 * order as i64 + 2] {
                let fam = e.family(order, &Rational::from_int(n)).unwrap();
                assert!(fam.expanded.lambda_degree().unwrap() <= order as usize);
                for (l, v) in &fam.nodes {
                    assert_eq!(&fam.expanded.eval_lambda(l), v);
                }
            }
        }
    }

    #[test]
    fn critical_formulas_match_explicit_ones() {
        let mut e = ResidueEngine::new();
        for order in 2..=4 {
            let f = e.critical_formula(order).unwrap();
            let g = crate::golden::explicit_formula(order).unwrap();
            assert!(f.same_coefficients(&g), "N={order}: {:?}", f.diff(&g));
            assert_eq!(f.source, Source::Residue);
        }
        assert!(e.critical_formula(1).is_err());
    }

    #[test]
    fn universality_residuals() {
        let mut e = ResidueEngine::new();
        for order in 2..=3u32 {
            let g = crate::golden::explicit_formula(order).unwrap();
            for n in [4 * order, 4 * order + 2] {
                let n = Rational::from_int(n as i64);
                let r = e.universality_residual(order, &n).unwrap();
                assert!(r.formula.same_coefficients(&g));
                let expected = (&n - &Rational::one()) / Rational::from_int(2 * order as i64 - 1);
                assert_eq!(r.derivative_form.get(&[], Target::Q(order)), expected);
                let mut bracket = ValueExpr::single(vec![], Target::Q(order), Rational::one());
                for t in &g.terms {
                    bracket.add_term(t.word.entries().to_vec(), Target::Q(t.q_order / 2), &-t.coeff.clone());
                }
                bracket.add_term(vec![], Target::Bar(order - 1), &-g.bar_coeff.clone());
                assert_eq!(r.derivative_form, bracket.scale(&expected));
            }
        }
        assert!(e.universality_residual(2, &Rational::from_int(6)).is_err());
        assert!(e.universality_residual(2, &Rational::from_int(9)).is_err());
    }

    #[test]
    fn trace_records_steps() {
        let mut e = ResidueEngine::with_trace();
        e.critical_formula(2).unwrap();
        assert!(e.trace().iter().any(|l| l.contains("node λ")));
        assert!(e.trace().iter().any(|l| l.contains("after substitution")));
    }
}
