//! Interpolation polynomials `r_I` and the objects derived from them.
//!
//! `r_I` has degree `2|I| - 1`, vanishes at the negative integers `-i`
//! (`1 <= i <= |I|`, `i != I_last`), and makes
//! `C_I = r_I + R_(I_1) r_(I_2..) + ... + R_(I_1..I_{m-1}) r_(I_m)` constant on
//! the half-integer set `S(|I|)`. The free constant is pinned by the
//! constant-term relation `r_(J,k)(0) = -r_J(k) r_(k)(0)`.

use std::collections::HashMap;
use std::rc::Rc;

use crate::compositions::{enumerate_compositions, Composition};
use crate::error::{Error, Result};
use crate::exact::{double_factorial, factorial, pochhammer, sign_pow, LagrangeBasis, Rational, UniPoly};
use crate::report::Report;

/// The half-integers `{1/2 - k, ..., -1/2, 1/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntegerSet {
    k: u32,
    points: Vec<Rational>,
}

impl HalfIntegerSet {
    pub fn new(k: u32) -> Self {
        let points = (0..=k as i64).rev().map(|i| Rational::frac(1 - 2 * i, 2)).collect();
        HalfIntegerSet { k, points }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Ascending, so the last point is `1/2`.
    pub fn points(&self) -> &[Rational] {
        &self.points
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPolynomial {
    pub index: Composition,
    pub poly: UniPoly,
    pub value_at_half: Rational,
    pub script_r: Rational,
}

/// `r_(k)(0) = (-1)^(k-1) (2k-3)!! / k!`.
pub fn base_constant_term(k: u32) -> Rational {
    let k = k as i64;
    sign_pow(k - 1) * double_factorial(2 * k - 3).expect("k >= 1") / factorial(k as u64)
}

/// Common value of `r_(k)` on `S(k)`: `(-2)^(-(k-1)) (1/2)_(k-1) / (k-1)!`.
pub fn base_plateau(k: u32) -> Rational {
    let e = k as i64 - 1;
    Rational::from_int(-2).powi(-e).expect("nonzero base") * pochhammer(&Rational::frac(1, 2), e as u64)
        / factorial(e as u64)
}

/// Node set `{-i : 1 <= i <= size, i != last} ∪ S(size)`, zeros first.
fn node_set(size: u32, last: u32) -> Vec<Rational> {
    let mut nodes: Vec<Rational> = (1..=size)
        .filter(|&i| i != last)
        .map(|i| Rational::from_int(-(i as i64)))
        .collect();
    nodes.extend(HalfIntegerSet::new(size).points().iter().cloned());
    nodes
}

/// Memo store for `r_I`, `R_I` and the Lagrange bases they share.
#[derive(Default)]
pub struct RTable {
    polys: HashMap<Composition, Rc<RPolynomial>>,
    script_r: HashMap<Vec<u32>, Rational>,
    bases: HashMap<(u32, u32), Rc<LagrangeBasis>>,
}

impl RTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn basis(&mut self, size: u32, last: u32) -> Rc<LagrangeBasis> {
        self.bases
            .entry((size, last))
            .or_insert_with(|| Rc::new(LagrangeBasis::new(&node_set(size, last)).expect("nodes are distinct")))
            .clone()
    }

    /// Sum of the basis polynomials attached to the `S(size)` nodes.
    fn plateau_sum(basis: &LagrangeBasis, size: u32) -> UniPoly {
        let offset = size as usize - 1;
        let mut a = UniPoly::zero();
        for b in &basis.basis()[offset..] {
            a = &a + b;
        }
        a
    }

    /// `r_(k)`: zeros at `-1..-(k-1)` and a fixed plateau on `S(k)`.
    pub fn build_base(&mut self, k: u32) -> Result<Rc<RPolynomial>> {
        if k < 1 {
            return Err(Error::Domain("build_base requires k >= 1".into()));
        }
        let index = Composition::single(k);
        if let Some(p) = self.polys.get(&index) {
            return Ok(p.clone());
        }
        let basis = self.basis(k, k);
        let poly = Self::plateau_sum(&basis, k).scale(&base_plateau(k));
        let expected = if k == 1 { 0 } else { 2 * k as usize - 1 };
        if poly.degree() != Some(expected) {
            return Err(Error::InconsistentInterpolation(index.to_string()));
        }
        Ok(self.store(index, poly))
    }

    fn store(&mut self, index: Composition, poly: UniPoly) -> Rc<RPolynomial> {
        let half = Rational::frac(1, 2);
        let value_at_half = poly.eval(&half);
        let key = index.entries().to_vec();
        let partial = Rc::new(RPolynomial {
            index: index.clone(),
            poly,
            value_at_half,
            script_r: Rational::zero(),
        });
        self.polys.insert(index.clone(), partial);
        let script_r = self.script_r_entries(&key).expect("sub-polynomials are built");
        let full = {
            let p = self.polys.get(&index).unwrap();
            Rc::new(RPolynomial {
                script_r,
                ..(**p).clone()
            })
        };
        self.polys.insert(index, full.clone());
        full
    }

    /// Builds `r_I`, recursively building every sub-composition it needs.
    pub fn build_r(&mut self, index: &Composition) -> Result<Rc<RPolynomial>> {
        if let Some(p) = self.polys.get(index) {
            return Ok(p.clone());
        }
        let (head, k) = index.split_last();
        let Some(head) = head else {
            return self.build_base(k);
        };
        let size = index.size();
        let splits = index.prefix_splits();
        let mut weighted = Vec::with_capacity(splits.len());
        for (prefix, suffix) in &splits {
            let w = self.script_r(prefix)?;
            let s = self.build_r(suffix)?;
            weighted.push((w, s));
        }
        let basis = self.basis(size, k);
        let offset = size as usize - 1;
        let mut lower_part = UniPoly::zero();
        for (pt, b) in basis.nodes()[offset..].iter().zip(&basis.basis()[offset..]) {
            let l: Rational = weighted.iter().map(|(w, s)| w * s.poly.eval(pt)).sum();
            lower_part.add_scaled(b, &l);
        }
        let plateau = Self::plateau_sum(&basis, size);

        let rj_at_k = self.build_r(&head)?.poly.eval(&Rational::from_int(k as i64));
        let target = -(rj_at_k * base_constant_term(k));
        let zero = Rational::zero();
        let a0 = plateau.eval(&zero);
        if a0.is_zero() {
            return Err(Error::InconsistentInterpolation(index.to_string()));
        }
        let constant = (target + lower_part.eval(&zero)) / a0;
        let poly = &plateau.scale(&constant) - &lower_part;
        if poly.degree() != Some(2 * size as usize - 1) {
            return Err(Error::InconsistentInterpolation(index.to_string()));
        }
        Ok(self.store(index.clone(), poly))
    }

    /// `r_I(x0)`.
    pub fn value(&mut self, index: &Composition, x0: &Rational) -> Result<Rational> {
        Ok(self.build_r(index)?.poly.eval(x0))
    }

    /// Builds every composition of every size up to `max_size`.
    pub fn build_all(&mut self, max_size: u32) -> Result<()> {
        for size in 1..=max_size {
            for c in enumerate_compositions(size)? {
                self.build_r(&c)?;
            }
        }
        Ok(())
    }

    /// `R_I`: sum over subdivisions of `I` of the products of `r_J(1/2)`.
    pub fn script_r(&mut self, index: &Composition) -> Result<Rational> {
        self.script_r_entries(index.entries())
    }

    fn script_r_entries(&mut self, entries: &[u32]) -> Result<Rational> {
        if entries.is_empty() {
            return Ok(Rational::one());
        }
        if let Some(v) = self.script_r.get(entries) {
            return Ok(v.clone());
        }
        let mut total = Rational::zero();
        for t in 1..=entries.len() {
            let block = Composition::new(entries[..t].to_vec())?;
            let head = self.build_r(&block)?.value_at_half.clone();
            if head.is_zero() {
                continue;
            }
            total += head * self.script_r_entries(&entries[t..])?;
        }
        self.script_r.insert(entries.to_vec(), total.clone());
        Ok(total)
    }

    /// `s_I = r_I - r_I(1/2)`.
    pub fn s_poly(&mut self, index: &Composition) -> Result<UniPoly> {
        let r = self.build_r(index)?;
        Ok(&r.poly - &UniPoly::constant(r.value_at_half.clone()))
    }

    /// `C_I = r_I + sum over prefix splits (P, S) of R_P r_S`.
    pub fn curly_c(&mut self, index: &Composition) -> Result<UniPoly> {
        let mut out = self.build_r(index)?.poly.clone();
        for (prefix, suffix) in index.prefix_splits() {
            let w = self.script_r(&prefix)?;
            let s = self.build_r(&suffix)?;
            out.add_scaled(&s.poly, &w);
        }
        Ok(out)
    }

    /// `sigma_(k,j) = sum over J with k + |J| = j of r_(k,J)`.
    pub fn sigma(&mut self, k: u32, j: u32) -> Result<UniPoly> {
        if k < 1 || k > j {
            return Err(Error::Domain(format!("sigma requires 1 <= k <= j, got ({k},{j})")));
        }
        if k == j {
            return Ok(self.build_base(k)?.poly.clone());
        }
        let head = Composition::single(k);
        let mut out = UniPoly::zero();
        for tail in enumerate_compositions(j - k)? {
            out = &out + &self.build_r(&head.concat(&tail))?.poly;
        }
        Ok(out)
    }

    /// Checks the unproven identities satisfied by the `r_I` over all
    /// compositions of size `<= max_size`.
    pub fn check_conjectural_identities(&mut self, max_size: u32) -> Result<Report> {
        let mut report = Report::conjectural(format!("r_I identities up to size {max_size}"));
        self.build_all(max_size)?;
        let half = Rational::frac(1, 2);

        for j in 1..=max_size {
            let mut total = UniPoly::zero();
            for c in enumerate_compositions(j)? {
                total = &total + &self.build_r(&c)?.poly;
            }
            let expected =
                UniPoly::constant(sign_pow(j as i64 - 1) * double_factorial(2 * j as i64 - 1)? / factorial(j as u64));
            report.check(format!("sum-r j={j}"), total == expected, || {
                format!("sum is {total}, expected {expected}")
            });
        }

        for j in 1..=max_size {
            for k in 1..=j {
                let sigma = self.sigma(k, j)?;
                let m = j - k;
                let interp = standard_interp(m, j)?;
                let value = sigma_value(k, j);
                report.check(format!("AI k={k} j={j}"), sigma == interp.scale(&value), || {
                    format!("sigma = {sigma}")
                });
                let bad_zero = (1..j as i64)
                    .map(|i| Rational::from_int(-(m as i64) - i))
                    .find(|x| !sigma.eval(x).is_zero());
                report.check(format!("zeros k={k} j={j}"), bad_zero.is_none(), || {
                    let x = bad_zero.clone().unwrap();
                    format!("sigma({x}) = {}", sigma.eval(&x))
                });
                let at_half = sigma.eval(&half);
                report.check(format!("sigma-value k={k} j={j}"), at_half == value, || {
                    format!("sigma(1/2) = {at_half}, expected {value}")
                });
            }
        }

        for size in 2..=max_size {
            for c in enumerate_compositions(size)? {
                self.check_structural(&c, &mut report)?;
            }
        }
        Ok(report)
    }

    /// mult-1, mult-2, mult-4 and s-const for one composition.
    fn check_structural(&mut self, c: &Composition, report: &mut Report) -> Result<()> {
        let e = c.entries();
        let m = e.len();
        let size = c.size();

        let (head, k) = c.split_last();
        if let Some(head) = &head {
            let lhs = self.value(c, &Rational::zero())?;
            let rhs = -(self.value(head, &Rational::from_int(k as i64))? * base_constant_term(k));
            report.check(format!("mult-2 I=({c})"), lhs == rhs, || format!("{lhs} != {rhs}"));
        }

        if m >= 3 {
            let j = e[m - 1];
            let kk = e[m - 2];
            let jj = Composition::new(e[..m - 2].to_vec())?;
            let tail = Composition::new(vec![kk, j])?;
            let x = Rational::from_int(-(j as i64));
            let lhs = self.value(c, &x)?;
            let rhs = -(self.value(&jj, &Rational::from_int(kk as i64))? * self.value(&tail, &x)?);
            report.check(format!("mult-1 I=({c})"), lhs == rhs, || format!("{lhs} != {rhs}"));
        }

        if let Some(head) = &head {
            if k >= 2 {
                let x = Rational::frac(-1 - 2 * k as i64, 2);
                let lhs = self.s_poly(c)?.eval(&x);
                let rhs = -(self.build_r(head)?.value_at_half.clone() * self.s_poly(&Composition::single(k))?.eval(&x));
                report.check(format!("mult-4 I=({c})"), lhs == rhs, || format!("{lhs} != {rhs}"));
            }
        }

        let mut combo = self.s_poly(c)?;
        for (prefix, suffix) in c.prefix_splits() {
            let w = self.script_r(&prefix)?;
            combo.add_scaled(&self.s_poly(&suffix)?, &w);
        }
        let bad = HalfIntegerSet::new(size)
            .points()
            .iter()
            .find(|x| !combo.eval(x).is_zero())
            .cloned();
        report.check(format!("s-const I=({c})"), bad.is_none(), || {
            let x = bad.clone().unwrap();
            format!("value {} at {x}", combo.eval(&x))
        });
        Ok(())
    }
}

/// `(-2)^(-(j-1)) (1/2)_(k-1) (1/2+j)_(j-k) / ((k-1)! (j-k)!)`.
pub fn sigma_value(k: u32, j: u32) -> Rational {
    let (k, j) = (k as u64, j as u64);
    Rational::from_int(-2).powi(-(j as i64 - 1)).expect("nonzero base")
        * pochhammer(&Rational::frac(1, 2), k - 1)
        * pochhammer(&Rational::frac(1 + 2 * j as i64, 2), j - k)
        / (factorial(k - 1) * factorial(j - k))
}

/// `I_(M,N)`: equal to 1 on `S(N)` and 0 at `-M-1, ..., -M-(N-1)`.
pub fn standard_interp(m: u32, n: u32) -> Result<UniPoly> {
    if n < 1 || m > n - 1 {
        return Err(Error::Domain(format!(
            "standard_interp requires 0 <= M <= N-1, got ({m},{n})"
        )));
    }
    let mut nodes: Vec<(Rational, Rational)> = (1..n as i64)
        .map(|i| (Rational::from_int(-(m as i64) - i), Rational::zero()))
        .collect();
    nodes.extend(
        HalfIntegerSet::new(n)
            .points()
            .iter()
            .map(|p| (p.clone(), Rational::one())),
    );
    crate::exact::lagrange_interpolate(&nodes)
}

/// `r_I` rebuilt without any memo table: every sub-polynomial is recomputed
/// and `R_I` is summed over explicit subdivisions.
pub fn build_r_direct(index: &Composition) -> Result<UniPoly> {
    let size = index.size();
    let (head, k) = index.split_last();
    let nodes = node_set(size, k);
    let basis = LagrangeBasis::new(&nodes)?;
    let plateau = RTable::plateau_sum(&basis, size);
    let Some(head) = head else {
        return Ok(plateau.scale(&base_plateau(k)));
    };
    let half = Rational::frac(1, 2);
    let mut lower = UniPoly::zero();
    for (prefix, suffix) in index.prefix_splits() {
        let mut w = Rational::zero();
        for sub in prefix.subdivisions() {
            let mut prod = Rational::one();
            for block in &sub {
                prod *= build_r_direct(block)?.eval(&half);
            }
            w += prod;
        }
        lower.add_scaled(&build_r_direct(&suffix)?, &w);
    }
    let offset = size as usize - 1;
    let mut lower_part = UniPoly::zero();
    for (pt, b) in nodes[offset..].iter().zip(&basis.basis()[offset..]) {
        lower_part.add_scaled(b, &lower.eval(pt));
    }
    let target = -(build_r_direct(&head)?.eval(&Rational::from_int(k as i64)) * base_constant_term(k));
    let zero = Rational::zero();
    let a0 = plateau.eval(&zero);
    if a0.is_zero() {
        return Err(Error::InconsistentInterpolation(index.to_string()));
    }
    let constant = (target + lower_part.eval(&zero)) / a0;
    Ok(&plateau.scale(&constant) - &lower_part)
}
