//! Closed-form evaluation on round spheres and Einstein metrics, symbolic
//! in `m = n/2`.
//!
//! On an Einstein metric with normalized scalar curvature `λ` (`λ = 1` on
//! the unit sphere) every GJMS operator acts on constants by a scalar, and
//! the bulk quantities only depend on `r`. With `D = 1 - cλr²`, `c = 1/4`:
//!
//! ```text
//! Q̄_2 = mλ / D
//! P̄_2 = ∂_r² - mλ r D⁻¹ ∂_r - m(m - 1/2)λ D⁻¹
//! ```

use crate::error::{Error, Result};
use crate::exact::{Rational, UniPoly, Var};
use crate::formula::RecursiveFormula;
use crate::report::Report;

/// A polynomial in `m`.
pub type MPoly = UniPoly;

fn m_poly(coeffs: &[i64]) -> MPoly {
    UniPoly::from_ints(coeffs).with_var(Var::M)
}

/// `m prod_{j=1}^{N-1} (m² - j²)`.
pub fn sphere_q(n: u32) -> MPoly {
    let mut p = m_poly(&[0, 1]);
    for j in 1..n as i64 {
        p = &p * &m_poly(&[-j * j, 0, 1]);
    }
    p.with_var(Var::M)
}

/// `P_{2j}(1) = (-1)^j prod_{i=m}^{m+j-1} i(2m-1-i)`.
pub fn gjms_on_constant(j: u32) -> MPoly {
    let mut p = m_poly(&[if j.is_multiple_of(2) { 1 } else { -1 }]);
    for t in 0..j as i64 {
        p = &p * &m_poly(&[t, 1]);
        p = &p * &m_poly(&[-1 - t, 1]);
    }
    p.with_var(Var::M)
}

/// Polynomial in `(m, r)`, stored as one `r`-polynomial per power of `m`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct BiPoly(Vec<UniPoly>);

impl BiPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(UniPoly::is_zero) {
            self.0.pop();
        }
        self
    }

    fn add(&self, other: &BiPoly) -> BiPoly {
        let len = self.0.len().max(other.0.len());
        let zero = UniPoly::zero();
        BiPoly(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
        .trim()
    }

    fn mul_r(&self, p: &UniPoly) -> BiPoly {
        BiPoly(self.0.iter().map(|c| c * p).collect()).trim()
    }

    /// Multiplication by `m^k` times a constant.
    fn mul_m(&self, k: usize, s: &Rational) -> BiPoly {
        let mut v = vec![UniPoly::zero(); k];
        v.extend(self.0.iter().map(|c| c.scale(s)));
        BiPoly(v).trim()
    }

    fn d_r(&self) -> BiPoly {
        BiPoly(self.0.iter().map(UniPoly::derivative).collect()).trim()
    }

    fn at_r_zero(&self) -> MPoly {
        UniPoly::from_coeffs(self.0.iter().map(|c| c.coeff(0)).collect()).with_var(Var::M)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// `numerator(m, r) / (1 - κ r²)^K` with `κ = cλ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialFunction {
    numerator: BiPoly,
    exponent: u32,
    kappa: Rational,
}

impl RadialFunction {
    /// `Q̄_2 = mλ / (1 - cλ r²)`.
    pub fn q_bar(lambda: &Rational) -> Self {
        RadialFunction {
            numerator: BiPoly(vec![UniPoly::zero(), UniPoly::constant(lambda.clone())]).trim(),
            exponent: 1,
            kappa: lambda * &Rational::frac(1, 4),
        }
        .canonical()
    }

    fn denominator_base(&self) -> UniPoly {
        UniPoly::from_coeffs(vec![Rational::one(), Rational::zero(), -self.kappa.clone()])
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Multiplies numerator and denominator by `(1 - κ r²)^k`.
    pub fn inflate(&self, k: u32) -> Self {
        let mut num = self.numerator.clone();
        let d = self.denominator_base();
        for _ in 0..k {
            num = num.mul_r(&d);
        }
        RadialFunction {
            numerator: num,
            exponent: self.exponent + k,
            kappa: self.kappa.clone(),
        }
    }

    /// Divides out every common factor `1 - κ r²`.
    pub fn canonical(mut self) -> Self {
        let d = self.denominator_base();
        if self.kappa.is_zero() {
            self.exponent = 0;
            return self;
        }
        while self.exponent > 0 && !self.numerator.is_zero() {
            let mut quotients = Vec::with_capacity(self.numerator.0.len());
            for c in &self.numerator.0 {
                let (q, rem) = c.div_rem(&d).expect("nonzero divisor");
                if !rem.is_zero() {
                    return self;
                }
                quotients.push(q);
            }
            self.numerator = BiPoly(quotients).trim();
            self.exponent -= 1;
        }
        if self.numerator.is_zero() {
            self.exponent = 0;
        }
        self
    }

    /// The value at `r = 0`, where the denominator is 1.
    pub fn restrict(&self) -> MPoly {
        self.numerator.at_r_zero()
    }
}

/// Applies `P̄_2` for the metric of scale `λ = 4κ`.
pub fn bar_apply(f: &RadialFunction) -> RadialFunction {
    let k = Rational::from_int(f.exponent as i64);
    let kappa = &f.kappa;
    let lambda = kappa * &Rational::from_int(4);
    let d = f.denominator_base();
    let r = UniPoly::x();
    let two_kappa_r = r.scale(&(kappa * &Rational::from_int(2)));

    // f' = A / D^(K+1), f'' = B / D^(K+2)
    let a = f
        .numerator
        .d_r()
        .mul_r(&d)
        .add(&f.numerator.mul_r(&two_kappa_r.scale(&k)));
    let b = a
        .d_r()
        .mul_r(&d)
        .add(&a.mul_r(&two_kappa_r.scale(&(&k + &Rational::one()))));
    let first = a.mul_r(&r).mul_m(1, &-lambda.clone());
    let nd = f.numerator.mul_r(&d);
    let potential = nd
        .mul_m(2, &-lambda.clone())
        .add(&nd.mul_m(1, &(&lambda * &Rational::frac(1, 2))));
    RadialFunction {
        numerator: b.add(&first).add(&potential),
        exponent: f.exponent + 2,
        kappa: kappa.clone(),
    }
    .canonical()
}

/// `i* P̄_2^k(Q̄_2)` at scale `λ`.
pub fn bar_term_value(k: u32, lambda: &Rational) -> MPoly {
    let mut f = RadialFunction::q_bar(lambda);
    for _ in 0..k {
        f = bar_apply(&f);
    }
    f.restrict()
}

/// Sphere values of the boundary terms and of the bar term of `F` at scale
/// `λ`, with the bar coefficient applied.
pub fn formula_parts(f: &RecursiveFormula, lambda: &Rational) -> (MPoly, MPoly) {
    let mut subtotal = UniPoly::zero();
    for t in &f.terms {
        let mut v = sphere_q(t.q_order / 2).scale(&lambda.pow(t.q_order / 2));
        for &j in t.word.entries() {
            v = &v * &gjms_on_constant(j).scale(&lambda.pow(j));
        }
        subtotal.add_scaled(&v, &t.coeff);
    }
    let bar = bar_term_value(f.bar_power, lambda).scale(&f.bar_coeff);
    (subtotal.with_var(Var::M), bar.with_var(Var::M))
}

/// `F` evaluated on the Einstein metric of scale `λ`, minus `λ^N Q_{2N}`.
pub fn sphere_defect(f: &RecursiveFormula, lambda: &Rational) -> MPoly {
    let (sub, bar) = formula_parts(f, lambda);
    let expected = sphere_q(f.n).scale(&lambda.pow(f.n));
    (&(&sub + &bar) - &expected).with_var(Var::M)
}

pub fn verify_formula_on_sphere(f: &RecursiveFormula) -> Report {
    let mut report = Report::new(format!("Q_{} on round spheres", 2 * f.n));
    let defect = sphere_defect(f, &Rational::one());
    report.check(format!("N={} λ=1", f.n), defect.is_zero(), || {
        format!("difference {defect}")
    });
    report
}

pub fn einstein_scaling_check(f: &RecursiveFormula, lambdas: &[Rational]) -> Result<Report> {
    let mut report = Report::new(format!("Q_{} on Einstein metrics", 2 * f.n));
    for lambda in lambdas {
        if lambda.is_zero() {
            return Err(Error::DegenerateScale);
        }
        let defect = sphere_defect(f, lambda);
        report.check(format!("N={} λ={lambda}", f.n), defect.is_zero(), || {
            format!("difference {defect}")
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::explicit_formula;

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    fn mp(c: &[i64]) -> MPoly {
        m_poly(c)
    }

    /// `scale * prod (roots as m - r) * rest`.
    fn mp_prod(scale: Rational, factors: &[&[i64]]) -> MPoly {
        let mut p = UniPoly::constant(scale);
        for f in factors {
            p = &p * &mp(f);
        }
        p
    }

    #[test]
    fn sphere_q_values() {
        assert_eq!(sphere_q(1), mp(&[0, 1]));
        assert_eq!(sphere_q(3), mp_prod(q(1, 1), &[&[0, 1], &[-1, 0, 1], &[-4, 0, 1]]));
        assert_eq!(sphere_q(4), mp(&[0, -36, 0, 49, 0, -14, 0, 1]));
    }

    #[test]
    fn gjms_values() {
        assert_eq!(gjms_on_constant(1), mp_prod(q(-1, 1), &[&[0, 1], &[-1, 1]]));
        assert_eq!(
            gjms_on_constant(2),
            mp_prod(q(1, 1), &[&[0, 1], &[1, 1], &[-1, 1], &[-2, 1]])
        );
        for j in 1..=6u32 {
            assert!(gjms_on_constant(j).eval(&Rational::from_int(j as i64)).is_zero());
            // P_{2j}(1) = (-1)^j (m - j) Q_{2j}
            let sign = if j % 2 == 0 { q(1, 1) } else { q(-1, 1) };
            let rhs = &mp(&[-(j as i64), 1]) * &sphere_q(j).scale(&sign);
            assert_eq!(gjms_on_constant(j), rhs);
        }
    }

    #[test]
    fn bar_values() {
        let one = Rational::one();
        assert_eq!(bar_term_value(0, &one), mp(&[0, 1]));
        assert_eq!(
            bar_term_value(1, &one),
            mp_prod(q(-1, 2), &[&[0, 1], &[-1, 1], &[1, 2]])
        );
        assert_eq!(
            bar_term_value(2, &one),
            mp_prod(q(1, 4), &[&[0, 1], &[-1, 1], &[-6, -5, 0, 4]])
        );
        assert_eq!(
            bar_term_value(3, &one),
            mp_prod(q(-1, 8), &[&[0, 1], &[-1, 1], &[90, 25, -31, -22, -4, 8]])
        );
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let f = RadialFunction::q_bar(&q(5, 7));
        let g = bar_apply(&f);
        let inflated = f.inflate(3);
        assert_ne!(inflated, f);
        assert_eq!(inflated.clone().canonical(), f);
        assert_eq!(bar_apply(&inflated), g);
        assert_eq!(bar_apply(&bar_apply(&f.inflate(1))), bar_apply(&g));
    }

    #[test]
    fn subtotals_and_identities() {
        let one = Rational::one();
        let f2 = explicit_formula(2).unwrap();
        assert!(sphere_defect(&f2, &one).is_zero());
        // The m² coefficient is +2/3; it is the value for which the sum closes.
        let (sub, _) = formula_parts(&explicit_formula(3).unwrap(), &one);
        assert_eq!(sub, mp(&[0, 0, 2, -5, 8, -5]).scale(&q(1, 3)));
        let f4 = explicit_formula(4).unwrap();
        let (sub, bar) = formula_parts(&f4, &one);
        assert_eq!(sub, mp(&[0, 0, -130, 133, 18, -34, 24, -11]).scale(&q(1, 5)));
        assert_eq!(&sub + &bar, sphere_q(4));
        assert!(verify_formula_on_sphere(&f4).all_passed());
    }

    #[test]
    fn einstein_scaling() {
        let f2 = explicit_formula(2).unwrap();
        let (sub, bar) = formula_parts(&f2, &q(2, 1));
        assert_eq!(&sub + &bar, sphere_q(2).scale(&q(4, 1)));
        let f3 = explicit_formula(3).unwrap();
        let (sub, bar) = formula_parts(&f3, &q(-1, 1));
        assert_eq!(&sub + &bar, sphere_q(3).scale(&q(-1, 1)));
        let lambdas = [q(1, 1), q(2, 1), q(-1, 1), q(5, 7)];
        assert!(einstein_scaling_check(&f3, &lambdas).unwrap().all_passed());
        assert!(matches!(
            einstein_scaling_check(&f3, &[Rational::zero()]),
            Err(Error::DegenerateScale)
        ));
    }

    #[test]
    fn wrong_formula_is_rejected() {
        let mut f = explicit_formula(3).unwrap();
        f.terms[0].coeff = q(1, 1);
        assert!(!verify_formula_on_sphere(&f).all_passed());
    }
}
