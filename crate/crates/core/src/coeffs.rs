//! Coefficients `a_I^(N)` of the recursive formulae and the layer of
//! identities built on their size sums `alpha_j^(N)`.

use crate::compositions::{enumerate_compositions, Composition};
use crate::error::{Error, Result};
use crate::exact::{
    binomial, double_factorial, factorial, lagrange_interpolate, pochhammer, sign_pow, Rational, UniPoly,
};
use crate::formula::{FormulaTerm, RecursiveFormula, Source};
use crate::report::Report;
use crate::rpoly::{base_constant_term, base_plateau, HalfIntegerSet, RTable};

/// `prod_{i=1}^{s} (N-i)/(2N-2i-1)`.
fn prefactor(size: u32, n: u32) -> Rational {
    (1..=size as i64)
        .map(|i| Rational::frac(n as i64 - i, 2 * n as i64 - 2 * i - 1))
        .product()
}

/// `a_I^(N) = prod_{i=1}^{|I|} (N-i)/(2N-2i-1) * r_I(N-|I|)`.
pub fn coeff_a(table: &mut RTable, index: &Composition, n: u32) -> Result<Rational> {
    let size = index.size();
    if n <= size {
        return Err(Error::BelowThreshold { n: n as i64, size });
    }
    let r = table.value(index, &Rational::from_int((n - size) as i64))?;
    Ok(prefactor(size, n) * r)
}

/// `(-1)^(N-1) (2N-2)!! / (2N-3)!!`.
pub fn bar_coefficient(n: u32) -> Result<Rational> {
    if n < 1 {
        return Err(Error::Domain("bar coefficient requires N >= 1".into()));
    }
    let n = n as i64;
    Ok(sign_pow(n - 1) * double_factorial(2 * n - 2)? / double_factorial(2 * n - 3)?)
}

/// The full formula for `Q_{2N}` from the `r_I`.
pub fn assemble_formula(table: &mut RTable, n: u32) -> Result<RecursiveFormula> {
    if n < 1 {
        return Err(Error::Domain("assemble_formula requires N >= 1".into()));
    }
    let mut terms = Vec::with_capacity((1usize << (n - 1)) - 1);
    for size in 1..n {
        for c in enumerate_compositions(size)? {
            terms.push(FormulaTerm {
                coeff: coeff_a(table, &c, n)?,
                q_order: 2 * (n - size),
                word: c,
            });
        }
    }
    Ok(RecursiveFormula::new(n, terms, bar_coefficient(n)?, n - 1)?.with_source(Source::Rpoly))
}

fn check_range(j: u32, n: u32) -> Result<()> {
    if n < 1 || j > n - 1 {
        return Err(Error::Domain(format!("index out of range: j = {j}, N = {n}")));
    }
    Ok(())
}

/// `alpha_j^(N) = sum_{|I|=j} a_I^(N)`, with `alpha_0 = -1`.
pub fn alpha(table: &mut RTable, j: u32, n: u32) -> Result<Rational> {
    check_range(j, n)?;
    if j == 0 {
        return Ok(-Rational::one());
    }
    let mut total = Rational::zero();
    for c in enumerate_compositions(j)? {
        total += coeff_a(table, &c, n)?;
    }
    Ok(total)
}

/// `(-1)^(j-1) C(N-1, j) (2j-1)!! (2N-2j-3)!! / (2N-3)!!`.
pub fn beta(j: u32, n: u32) -> Result<Rational> {
    check_range(j, n)?;
    let (j, n) = (j as i64, n as i64);
    Ok(
        sign_pow(j - 1) * binomial(n - 1, j) * double_factorial(2 * j - 1)? * double_factorial(2 * n - 2 * j - 3)?
            / double_factorial(2 * n - 3)?,
    )
}

/// Size sums `T_j = sum_{|I|=j} r_I`, built without enumerating compositions.
///
/// The defining conditions of `r_I` are linear once the last entry `k` is
/// fixed, so `T_{j,k} = sum_{|I|=j, I_last=k} r_I` satisfies the same
/// interpolation problem with summed data: the lower part becomes
/// `sum_t rho_t T_{j-t,k}` with `rho_t = sum_{|P|=t} R_P`, and the constant
/// term becomes `-T_{j-k}(k) r_(k)(0)`.
///
/// `T_{j,k}` vanishes on the integer nodes, so it is stored as `Z q` with
/// `Z = prod_{i<=j, i!=k} (x+i)` and `q` given by its values on `S(j)`.
/// Monomial coefficients grow much faster than these values, so polynomials
/// are only formed on request.
pub struct SizeSums {
    /// `parts[j][k-1]` = values of `q` on `S(j)`.
    parts: Vec<Vec<Vec<Rational>>>,
    /// `grid[j][k-1]` = values of `T_{j,k}` on the half-integers
    /// `1/2 - max_size ..= 1/2`, where the lower parts are evaluated.
    grid: Vec<Vec<Vec<Rational>>>,
    /// Barycentric weights of `S(j)`.
    weights: Vec<Vec<Rational>>,
    rho: Vec<Rational>,
    max_size: u32,
}

impl SizeSums {
    pub fn new(max_size: u32) -> Result<Self> {
        let mut sums = SizeSums {
            parts: vec![Vec::new()],
            grid: vec![Vec::new()],
            weights: vec![Vec::new()],
            rho: vec![Rational::one()],
            max_size,
        };
        let half = Rational::frac(1, 2);
        let points = sums.grid_points();
        let mut tau = vec![Rational::zero()];
        for j in 1..=max_size {
            let nodes = HalfIntegerSet::new(j).points().to_vec();
            sums.weights.push(unit_weights(nodes.len() - 1));
            let weights = sums.weights[j as usize].clone();
            let mut parts = Vec::with_capacity(j as usize);
            let mut grid = Vec::with_capacity(j as usize);
            for k in 1..=j {
                let target = if k == j {
                    None
                } else {
                    let total_at_k = sums.grid_total(j - k, &Rational::from_int(k as i64));
                    Some(-(total_at_k * base_constant_term(k)))
                };
                // lower(s) on S(j), then the plateau constant from the value at 0.
                let lower: Vec<Rational> = nodes
                    .iter()
                    .map(|s| {
                        (1..=(j - k))
                            .map(|t| &sums.rho[t as usize] * &sums.grid_at(j - t, k, s))
                            .sum()
                    })
                    .collect();
                let z_nodes: Vec<Rational> = nodes.iter().map(|s| zero_factor(j, k, s)).collect();
                let constant = match target {
                    None => base_plateau(k),
                    Some(target) => {
                        // T(0) = c P(0) - L(0) with P, L the interpolants of
                        // 1 and lower against Z.
                        let zero = Rational::zero();
                        let z0 = zero_factor(j, k, &zero);
                        let ones: Vec<Rational> = z_nodes.iter().map(|z| z.recip()).collect::<Result<_>>()?;
                        let lows: Vec<Rational> = lower.iter().zip(&ones).map(|(l, r)| l * r).collect();
                        let p0 = &z0 * &lagrange_value(&nodes, &weights, &ones, &zero);
                        let l0 = &z0 * &lagrange_value(&nodes, &weights, &lows, &zero);
                        (target + l0) / p0
                    }
                };
                let q: Vec<Rational> = lower.iter().zip(&z_nodes).map(|(l, z)| (&constant - l) / z).collect();
                grid.push(
                    points
                        .iter()
                        .map(|x| zero_factor(j, k, x) * lagrange_value(&nodes, &weights, &q, x))
                        .collect(),
                );
                parts.push(q);
            }
            sums.parts.push(parts);
            sums.grid.push(grid);
            tau.push(sums.grid_total(j, &half));
            let r: Rational = (1..=j as usize).map(|u| &tau[u] * &sums.rho[j as usize - u]).sum();
            sums.rho.push(r);
        }
        Ok(sums)
    }

    pub fn max_size(&self) -> u32 {
        self.max_size
    }

    fn grid_points(&self) -> Vec<Rational> {
        let m = self.max_size as i64;
        (0..=m).map(|i| Rational::frac(1 - 2 * (m - i), 2)).collect()
    }

    fn grid_index(&self, x: &Rational) -> Option<usize> {
        let m = self.max_size as i64;
        let twice = (x * &Rational::from_int(2)).to_integer()?;
        if twice % 2 == 0 {
            return None;
        }
        let i = (twice - 1) / 2 + m;
        (0..=m).contains(&i).then_some(i as usize)
    }

    fn grid_at(&self, j: u32, k: u32, x: &Rational) -> Rational {
        match self.grid_index(x) {
            Some(i) => self.grid[j as usize][k as usize - 1][i].clone(),
            None => self.by_last_at(j, k, x),
        }
    }

    fn grid_total(&self, j: u32, x: &Rational) -> Rational {
        (1..=j).map(|k| self.grid_at(j, k, x)).sum()
    }

    /// `T_{j,k}(x)`.
    pub fn by_last_at(&self, j: u32, k: u32, x: &Rational) -> Rational {
        let nodes = HalfIntegerSet::new(j).points().to_vec();
        let weights = &self.weights[j as usize];
        zero_factor(j, k, x) * lagrange_value(&nodes, weights, &self.parts[j as usize][k as usize - 1], x)
    }

    /// `T_j(x)`.
    pub fn total_at(&self, j: u32, x: &Rational) -> Rational {
        if j == 0 {
            return Rational::zero();
        }
        self.grid_total(j, x)
    }

    /// `T_{j,k}` as a polynomial.
    pub fn by_last(&self, j: u32, k: u32) -> UniPoly {
        let zeros = (1..=j).filter(|&i| i != k).fold(UniPoly::one(), |acc, i| {
            &acc * &UniPoly::linear_root(&Rational::from_int(-(i as i64)))
        });
        let nodes: Vec<(Rational, Rational)> = HalfIntegerSet::new(j)
            .points()
            .iter()
            .cloned()
            .zip(self.parts[j as usize][k as usize - 1].iter().cloned())
            .collect();
        &zeros * &lagrange_interpolate(&nodes).expect("distinct nodes")
    }

    /// `T_j` as a polynomial.
    pub fn total(&self, j: u32) -> UniPoly {
        (1..=j).fold(UniPoly::zero(), |acc, k| &acc + &self.by_last(j, k))
    }

    /// `sum_{|P|=t} R_P`.
    pub fn rho(&self, t: u32) -> &Rational {
        &self.rho[t as usize]
    }

    /// `alpha_j^(N) = prod (N-i)/(2N-2i-1) * T_j(N-j)`.
    pub fn alpha(&self, j: u32, n: u32) -> Result<Rational> {
        check_range(j, n)?;
        if j == 0 {
            return Ok(-Rational::one());
        }
        if j > self.max_size() {
            return Err(Error::Domain(format!("size sums built only up to {}", self.max_size())));
        }
        Ok(prefactor(j, n) * self.total_at(j, &Rational::from_int((n - j) as i64)))
    }
}

/// `prod_{i<=j, i!=k} (x+i)`.
fn zero_factor(j: u32, k: u32, x: &Rational) -> Rational {
    (1..=j as i64)
        .filter(|&i| i != k as i64)
        .map(|i| x + &Rational::from_int(i))
        .product()
}

/// Barycentric weights `(-1)^(d-i) C(d, i) / d!` of `d+1` unit-spaced nodes.
fn unit_weights(d: usize) -> Vec<Rational> {
    let d = d as i64;
    let scale = factorial(d as u64);
    (0..=d).map(|i| sign_pow(d - i) * binomial(d, i) / &scale).collect()
}

/// Value at `x` of the interpolant of `values` on `nodes`, given their
/// barycentric weights.
fn lagrange_value(nodes: &[Rational], weights: &[Rational], values: &[Rational], x: &Rational) -> Rational {
    if let Some(i) = nodes.iter().position(|n| n == x) {
        return values[i].clone();
    }
    let mut sum = Rational::zero();
    let mut ell = Rational::one();
    for ((xi, wi), yi) in nodes.iter().zip(weights).zip(values) {
        let diff = x - xi;
        ell *= &diff;
        sum += wi * yi / diff;
    }
    ell * sum
}

/// `a(a-1)...(a-n+1) / n!`.
fn general_binomial(a: &Rational, n: u64) -> Rational {
    let mut num = Rational::one();
    for i in 0..n {
        num *= a - &Rational::from_int(i as i64);
    }
    num / factorial(n)
}

/// Coefficients of `(1-z)^(-1/2)` up to `z^d`, from the binomial series.
fn inverse_sqrt_series(d: u32) -> Vec<Rational> {
    let a = Rational::frac(-1, 2);
    (0..=d as u64)
        .map(|i| sign_pow(i as i64) * general_binomial(&a, i))
        .collect()
}

/// Checks alpha = beta, the symmetry and alternating-sum identities for
/// `2 <= N <= n_max`, and the generating function identity for every
/// `z^j w^(N-1-j)` with `N - 1 <= gen_degree`.
pub fn check_alpha_layer(sums: &SizeSums, n_max: u32, gen_degree: u32) -> Result<Report> {
    let mut report = Report::conjectural(format!("alpha layer up to N = {n_max}"));
    for n in 2..=n_max {
        let alphas = (0..n).map(|j| sums.alpha(j, n)).collect::<Result<Vec<_>>>()?;
        for j in 0..n {
            let b = beta(j, n)?;
            let a = &alphas[j as usize];
            report.check(format!("alpha=beta N={n} j={j}"), *a == b, || format!("{a} vs {b}"));
            let mirror = sign_pow(n as i64 - 1) * &alphas[(n - 1 - j) as usize];
            report.check(format!("symmetry N={n} j={j}"), *a == mirror, || {
                format!("{a} vs {mirror}")
            });
        }
        let alt: Rational = alphas.iter().enumerate().map(|(j, a)| sign_pow(j as i64 - 1) * a).sum();
        let n = n as i64;
        let expected = double_factorial(2 * n - 2)? / double_factorial(2 * n - 3)?;
        report.check(format!("alternating sum N={n}"), alt == expected, || {
            format!("{alt} vs {expected}")
        });
    }

    let series = inverse_sqrt_series(gen_degree);
    for total in 0..=gen_degree {
        let n = total + 1;
        let n_i = n as i64;
        let scale = double_factorial(2 * n_i - 3)? / double_factorial(2 * n_i - 2)?;
        for j in 0..n {
            let g = &series[j as usize] * &series[(n - 1 - j) as usize];
            let a = sums.alpha(j, n)? * &scale * sign_pow(j as i64 - 1);
            report.check(format!("generating function z^{j} w^{}", n - 1 - j), g == a, || {
                format!("series {g} vs alpha side {a}")
            });
        }
    }
    Ok(report)
}

/// Coefficient of `x^I y^l` in `Q(x; y)`: `(2N-3)!!/(2N-2)!! a_I^(N)` with
/// `N = |I| + l + 1`.
pub fn q_series(table: &mut RTable, x_orders: &[Composition], y_order: u32) -> Result<Vec<(Composition, Rational)>> {
    x_orders
        .iter()
        .map(|c| {
            let n = c.size() + y_order + 1;
            let n_i = n as i64;
            let scale = double_factorial(2 * n_i - 3)? / double_factorial(2 * n_i - 2)?;
            Ok((c.clone(), scale * coeff_a(table, c, n)?))
        })
        .collect()
}

/// Checks `Q(diag(x); y) = -G(-x, y)` up to total degree `max_degree`, and
/// the closed form `2^(-|I|) (1/2)_l r_I(l+1) / l!` of every coefficient.
pub fn check_q_series(table: &mut RTable, max_degree: u32) -> Result<Report> {
    let mut report = Report::conjectural(format!("Q(x;y) series up to total degree {max_degree}"));
    let series = inverse_sqrt_series(max_degree);
    let half = Rational::frac(1, 2);
    for total in 0..=max_degree {
        for j in 0..=total {
            let l = total - j;
            let diag: Rational = if j == 0 {
                let n = l as i64 + 1;
                -(double_factorial(2 * n - 3)? / double_factorial(2 * n - 2)?)
            } else {
                let comps = enumerate_compositions(j)?;
                let coeffs = q_series(table, &comps, l)?;
                for (c, v) in &coeffs {
                    let closed = Rational::from_int(2).powi(-(j as i64))?
                        * pochhammer(&half, l as u64)
                        * table.value(c, &Rational::from_int(l as i64 + 1))?
                        / factorial(l as u64);
                    report.check(format!("closed form I=({c}) l={l}"), *v == closed, || {
                        format!("{v} vs {closed}")
                    });
                }
                coeffs.into_iter().map(|(_, v)| v).sum()
            };
            let g = -(sign_pow(j as i64) * &series[j as usize] * &series[l as usize]);
            report.check(format!("diagonal x^{j} y^{l}"), diag == g, || format!("{diag} vs {g}"));
        }
    }
    Ok(report)
}

/// Closed forms for `a_(1)^(N)` and `a_(N-1)^(N)`, `2 <= N <= n_max`.
pub fn closed_form_check(table: &mut RTable, n_max: u32) -> Result<Report> {
    let mut report = Report::new(format!("closed forms for a_(1), a_(N-1) up to N = {n_max}"));
    for n in 2..=n_max {
        let ni = n as i64;
        let first = coeff_a(table, &Composition::single(1), n)?;
        let expected = Rational::frac(ni - 1, 2 * ni - 3);
        report.check(format!("a_(1)^({n})"), first == expected, || {
            format!("{first} vs {expected}")
        });
        let last = coeff_a(table, &Composition::single(n - 1), n)?;
        let expected = sign_pow(ni - 1) * Rational::frac((ni - 1) * (2 * ni - 5), 2 * ni - 3);
        report.check(format!("a_({})^({n})", n - 1), last == expected, || {
            format!("{last} vs {expected}")
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn coefficient_examples() {
        let mut t = RTable::new();
        assert_eq!(coeff_a(&mut t, &c("2,1"), 4).unwrap(), q(28, 5));
        assert_eq!(coeff_a(&mut t, &c("1"), 2).unwrap(), q(1, 1));
        assert_eq!(coeff_a(&mut t, &c("1,3"), 5).unwrap(), q(-69, 35));
        assert!(matches!(
            coeff_a(&mut t, &c("1,2"), 3),
            Err(Error::BelowThreshold { n: 3, size: 3 })
        ));
    }

    #[test]
    fn bar_coefficients() {
        assert_eq!(bar_coefficient(1).unwrap(), q(1, 1));
        assert_eq!(bar_coefficient(4).unwrap(), q(-16, 5));
        assert_eq!(bar_coefficient(7).unwrap(), q(1024, 231));
    }

    #[test]
    fn small_formulas() {
        let mut t = RTable::new();
        let f = assemble_formula(&mut t, 3).unwrap();
        assert_eq!(f.coeff_of(&c("1")), Some(&q(2, 3)));
        assert_eq!(f.coeff_of(&c("1,1")), Some(&q(-5, 3)));
        assert_eq!(f.coeff_of(&c("2")), Some(&q(2, 3)));
        assert_eq!(f.bar_coeff, q(8, 3));
        let f5 = assemble_formula(&mut t, 5).unwrap();
        assert_eq!(f5.terms.len(), 15);
        assert_eq!(f5.coeff_of(&c("1")), Some(&q(4, 7)));
        assert_eq!(f5.coeff_of(&c("4")), Some(&q(20, 7)));
        assert_eq!(f5.bar_coeff, q(128, 35));
        let f1 = assemble_formula(&mut t, 1).unwrap();
        assert!(f1.terms.is_empty());
        assert_eq!(f1.bar_coeff, q(1, 1));
    }

    #[test]
    fn alpha_and_beta() {
        let mut t = RTable::new();
        assert_eq!(alpha(&mut t, 2, 5).unwrap(), q(-18, 35));
        assert_eq!(alpha(&mut t, 0, 4).unwrap(), q(-1, 1));
        assert_eq!(alpha(&mut t, 4, 7).unwrap(), q(-5, 11));
        assert_eq!(beta(2, 5).unwrap(), q(-18, 35));
        assert_eq!(beta(1, 3).unwrap(), q(2, 3));
        assert_eq!(beta(0, 6).unwrap(), q(-1, 1));
        assert!(alpha(&mut t, 5, 5).is_err());
        assert!(beta(3, 3).is_err());
    }

    #[test]
    fn size_sums_match_enumeration() {
        let mut t = RTable::new();
        let sums = SizeSums::new(7).unwrap();
        for j in 1..=7 {
            let mut brute = UniPoly::zero();
            for comp in enumerate_compositions(j).unwrap() {
                brute = &brute + &t.build_r(&comp).unwrap().poly;
            }
            assert_eq!(sums.total(j), brute, "j={j}");
            let mut rho = Rational::zero();
            for comp in enumerate_compositions(j).unwrap() {
                rho += t.script_r(&comp).unwrap();
            }
            assert_eq!(sums.rho(j), &rho);
        }
        for n in 2..=8 {
            for j in 0..n {
                assert_eq!(sums.alpha(j, n).unwrap(), alpha(&mut t, j, n).unwrap());
            }
        }
    }

    #[test]
    fn alpha_layer_small() {
        let sums = SizeSums::new(5).unwrap();
        let r = check_alpha_layer(&sums, 6, 5).unwrap();
        assert!(r.all_passed(), "{r}");
        let alphas: Vec<Rational> = (0..3).map(|j| sums.alpha(j, 3).unwrap()).collect();
        let alt: Rational = alphas.iter().enumerate().map(|(j, a)| sign_pow(j as i64 - 1) * a).sum();
        assert_eq!(alt, q(8, 3));
    }

    #[test]
    fn barycentric_matches_interpolation() {
        let nodes = HalfIntegerSet::new(4).points().to_vec();
        let values: Vec<Rational> = (0..5).map(|i| q(i * i - 3, i + 1)).collect();
        let pairs: Vec<(Rational, Rational)> = nodes.iter().cloned().zip(values.iter().cloned()).collect();
        let p = lagrange_interpolate(&pairs).unwrap();
        for x in [q(0, 1), q(7, 3), q(-11, 2), q(1, 2)] {
            assert_eq!(lagrange_value(&nodes, &unit_weights(4), &values, &x), p.eval(&x));
        }
    }

    #[test]
    fn binomial_series() {
        let s = inverse_sqrt_series(3);
        assert_eq!(s, vec![q(1, 1), q(1, 2), q(3, 8), q(5, 16)]);
        for (i, v) in s.iter().enumerate() {
            assert_eq!(*v, pochhammer(&q(1, 2), i as u64) / factorial(i as u64));
        }
        assert_eq!(&s[1] * &s[1], q(1, 4));
    }

    #[test]
    fn q_series_examples() {
        let mut t = RTable::new();
        let v = q_series(&mut t, &[c("1")], 0).unwrap();
        assert_eq!(v[0].1, q(1, 2));
        let r = check_q_series(&mut t, 4).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn closed_forms() {
        let mut t = RTable::new();
        assert_eq!(coeff_a(&mut t, &c("3"), 4).unwrap(), q(-9, 5));
        assert_eq!(coeff_a(&mut t, &c("4"), 5).unwrap(), q(20, 7));
        let r = closed_form_check(&mut t, 8).unwrap();
        assert!(r.all_passed(), "{r}");
    }
}
