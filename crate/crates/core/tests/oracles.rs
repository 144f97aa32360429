//! Independent oracles for derived values.

use qrecur_core::coeffs::{alpha, assemble_formula, coeff_a, SizeSums};
use qrecur_core::compositions::compositions_up_to;
use qrecur_core::exact::{sign_pow, Rational};
use qrecur_core::golden;
use qrecur_core::rpoly::{build_r_direct, RTable};
use qrecur_core::sphere::{bar_term_value, gjms_on_constant, sphere_q};

fn q(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// Memoized construction agrees with the memo-free one.
#[test]
fn memoized_r_matches_direct_construction() {
    let mut t = RTable::new();
    for c in compositions_up_to(6) {
        assert_eq!(t.build_r(&c).unwrap().poly, build_r_direct(&c).unwrap(), "I = ({c})");
    }
}

/// Size sums agree with summing a_I over all compositions.
#[test]
fn alpha_by_size_sums_matches_enumeration() {
    let mut t = RTable::new();
    let sums = SizeSums::new(7).unwrap();
    for n in 2..=8 {
        for j in 1..n {
            assert_eq!(sums.alpha(j, n).unwrap(), alpha(&mut t, j, n).unwrap(), "N={n} j={j}");
        }
    }
}

/// The r_I route reproduces every reference formula term by term.
#[test]
fn coefficients_match_reference_formulae() {
    let mut t = RTable::new();
    for f in golden::explicit_formulas().into_iter().filter(|f| f.n <= 6) {
        for term in &f.terms {
            assert_eq!(coeff_a(&mut t, &term.word, f.n).unwrap(), term.coeff);
        }
    }
}

/// Truncated Taylor series in `r` with rational coefficients.
#[derive(Clone)]
struct Series(Vec<Rational>);

impl Series {
    fn deriv(&self) -> Series {
        let mut v: Vec<Rational> = (1..self.0.len())
            .map(|i| &self.0[i] * &Rational::from_int(i as i64))
            .collect();
        v.push(Rational::zero());
        Series(v)
    }

    /// Multiplication by `1 / (1 - κ r²)`.
    fn over_d(&self, kappa: &Rational) -> Series {
        let mut out = self.0.clone();
        for i in 2..out.len() {
            let prev = out[i - 2].clone();
            out[i] = &out[i] + &(kappa * &prev);
        }
        Series(out)
    }

    fn times_r(&self) -> Series {
        let mut v = vec![Rational::zero()];
        v.extend(self.0[..self.0.len() - 1].iter().cloned());
        Series(v)
    }

    fn lin(&self, a: &Rational, other: &Series, b: &Rational) -> Series {
        Series(self.0.iter().zip(&other.0).map(|(x, y)| &(a * x) + &(b * y)).collect())
    }
}

/// `i* P̄_2^k(Q̄_2)` for numeric `m` and `λ` by power series.
fn bar_by_series(k: usize, m: &Rational, lambda: &Rational) -> Rational {
    let kappa = lambda * &q(1, 4);
    let len = 2 * k + 3;
    let mut one = vec![Rational::zero(); len];
    one[0] = m * lambda;
    let mut f = Series(one).over_d(&kappa);
    let one_r = Rational::one();
    let pot = -(m * &(m - &q(1, 2))) * lambda.clone();
    for _ in 0..k {
        let d1 = f.deriv();
        let d2 = d1.deriv();
        let first = d1.times_r().over_d(&kappa);
        let zeroth = f.over_d(&kappa);
        let tmp = d2.lin(&one_r, &first, &-(m * lambda));
        f = tmp.lin(&one_r, &zeroth, &pot);
    }
    f.0[0].clone()
}

#[test]
fn bar_values_match_power_series() {
    for lambda in [q(1, 1), q(2, 1), q(-1, 1), q(5, 7)] {
        for m in [q(1, 1), q(3, 2), q(3, 1), q(7, 1)] {
            for k in 0..5u32 {
                assert_eq!(
                    bar_term_value(k, &lambda).eval(&m),
                    bar_by_series(k as usize, &m, &lambda),
                    "k={k} m={m} λ={lambda}"
                );
            }
        }
    }
}

/// Sphere scalars from their product definitions at integer `m`.
fn sphere_q_direct(n: u32, m: i64) -> Rational {
    (1..n as i64)
        .map(|j| Rational::from_int(m * m - j * j))
        .product::<Rational>()
        * Rational::from_int(m)
}

fn gjms_direct(j: u32, m: i64) -> Rational {
    sign_pow(j as i64)
        * (m..m + j as i64)
            .map(|i| Rational::from_int(i * (2 * m - 1 - i)))
            .product::<Rational>()
}

#[test]
fn sphere_scalars_match_products() {
    for n in 1..=6 {
        for m in [1i64, 2, 5, 9] {
            assert_eq!(sphere_q(n).eval(&Rational::from_int(m)), sphere_q_direct(n, m));
            assert_eq!(gjms_on_constant(n).eval(&Rational::from_int(m)), gjms_direct(n, m));
        }
    }
}

/// Each assembled formula evaluated numerically with series-based bar
/// values on spheres of several dimensions.
#[test]
fn formulas_hold_numerically_on_spheres() {
    let mut t = RTable::new();
    for n in 2..=6u32 {
        let f = assemble_formula(&mut t, n).unwrap();
        for m in [n as i64, n as i64 + 3, 11] {
            let mr = Rational::from_int(m);
            let mut total = &f.bar_coeff * &bar_by_series(f.bar_power as usize, &mr, &Rational::one());
            for term in &f.terms {
                let mut v = sphere_q_direct(term.q_order / 2, m);
                for &j in term.word.entries() {
                    v *= gjms_direct(j, m);
                }
                total += &term.coeff * &v;
            }
            assert_eq!(total, sphere_q_direct(n, m), "N={n} m={m}");
        }
    }
}
