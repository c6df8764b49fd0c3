//! Exact Laurent polynomials with integer coefficients.
//!
//! Canonical form drops zero coefficients, so structural equality is
//! polynomial equality. Display formats are fixed (golden tests rely on
//! them): terms in descending degree, `q*t + q^-1*t^-1`, `-2*q^3`, `0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::Serialize;

/// Polynomial in one variable, `Σ c_e x^e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `x + x⁻¹`
    pub fn quantum_two() -> Self {
        Self::from_terms([(1, 1), (-1, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn shift(&self, by: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, &c)| (e + by, c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    /// `x -> x⁻¹`
    pub fn invert_variable(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Text with a chosen variable name, descending degree.
    pub fn render(&self, var: &str) -> String {
        render_terms(self.terms().rev().map(|(e, c)| (c, vec![(var, e)])))
    }

    /// Same as [`render`](Self::render) without spaces, ascending or
    /// descending, for use inside other expressions.
    pub fn render_compact(&self, var: &str, ascending: bool) -> String {
        let terms: Vec<(i32, i64)> = if ascending {
            self.terms().collect()
        } else {
            self.terms().rev().collect()
        };
        render_terms(terms.into_iter().map(|(e, c)| (c, vec![(var, e)]))).replace(' ', "")
    }
}

/// Joins signed terms as `a + b - c`. Each term is a coefficient and a list
/// of `(variable, exponent)` factors; zero exponents are skipped.
pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (i64, Vec<(&'a str, i32)>)>) -> String {
    let mut out = String::new();
    for (k, (c, vars)) in terms.enumerate() {
        let mono: Vec<String> = vars
            .iter()
            .filter(|(_, e)| *e != 0)
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        let mag = c.unsigned_abs();
        let body = match (mono.is_empty(), mag) {
            (true, _) => mag.to_string(),
            (false, 1) => mono.join("*"),
            (false, _) => format!("{mag}*{}", mono.join("*")),
        };
        match (k, c < 0) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("q"))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl std::iter::Sum for Laurent {
    fn sum<I: Iterator<Item = Laurent>>(iter: I) -> Self {
        iter.fold(Laurent::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

/// Polynomial in `q` and `t`, keyed by `(q-exponent, t-exponent)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentQT {
    terms: BTreeMap<(i32, i32), i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub q: i32,
    pub t: i32,
    pub c: i64,
}

impl LaurentQT {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: i64, q: i32, t: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(q, t, coeff);
        p
    }

    /// `z = qt + (qt)⁻¹`
    pub fn z() -> Self {
        let mut p = Self::monomial(1, 1, 1);
        p.add_term(-1, -1, 1);
        p
    }

    pub fn add_term(&mut self, q: i32, t: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry((q, t)).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&(q, t));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q: i32, t: i32) -> i64 {
        self.terms.get(&(q, t)).copied().unwrap_or(0)
    }

    /// `(q, t, coeff)` in display order: t descending, then q descending.
    pub fn terms(&self) -> Vec<(i32, i32, i64)> {
        let mut v: Vec<(i32, i32, i64)> = self.terms.iter().map(|(&(q, t), &c)| (q, t, c)).collect();
        v.sort_by_key(|&(q, t, _)| std::cmp::Reverse((t, q)));
        v
    }

    pub fn max_t_degree(&self) -> Option<i32> {
        self.terms.keys().map(|&(_, t)| t).max()
    }

    /// Coefficient of `t^d` as a polynomial in `q`.
    pub fn t_coefficient(&self, d: i32) -> Laurent {
        Laurent::from_terms(
            self.terms
                .iter()
                .filter(|((_, t), _)| *t == d)
                .map(|(&(q, _), &c)| (q, c)),
        )
    }

    pub fn from_q(p: &Laurent, t: i32) -> Self {
        let mut out = Self::zero();
        for (e, c) in p.terms() {
            out.add_term(e, t, c);
        }
        out
    }

    /// Substitutes `t = 1`.
    pub fn at_t_one(&self) -> Laurent {
        Laurent::from_terms(self.terms.iter().map(|(&(q, _), &c)| (q, c)))
    }

    /// `(q, t) -> (q⁻¹, t⁻¹)`
    pub fn invert_variables(&self) -> Self {
        let mut out = Self::zero();
        for (&(q, t), &c) in &self.terms {
            out.add_term(-q, -t, c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::monomial(1, 0, 0), |acc, _| &acc * self)
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms().into_iter().map(|(q, t, c)| TermJson { q, t, c }).collect()
    }
}

impl fmt::Display for LaurentQT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(
            self.terms().into_iter().map(|(q, t, c)| (c, vec![("q", q), ("t", t)])),
        ))
    }
}

impl Add for &LaurentQT {
    type Output = LaurentQT;
    fn add(self, rhs: &LaurentQT) -> LaurentQT {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentQT> for LaurentQT {
    fn add_assign(&mut self, rhs: &LaurentQT) {
        for (&(q, t), &c) in &rhs.terms {
            self.add_term(q, t, c);
        }
    }
}

impl Sub for &LaurentQT {
    type Output = LaurentQT;
    fn sub(self, rhs: &LaurentQT) -> LaurentQT {
        let mut out = self.clone();
        for (&(q, t), &c) in &rhs.terms {
            out.add_term(q, t, -c);
        }
        out
    }
}

impl Mul for &LaurentQT {
    type Output = LaurentQT;
    fn mul(self, rhs: &LaurentQT) -> LaurentQT {
        let mut out = LaurentQT::zero();
        for (&(q1, t1), &c1) in &self.terms {
            for (&(q2, t2), &c2) in &rhs.terms {
                out.add_term(q1 + q2, t1 + t2, c1 * c2);
            }
        }
        out
    }
}

impl std::iter::Sum for LaurentQT {
    fn sum<I: Iterator<Item = LaurentQT>>(iter: I) -> Self {
        iter.fold(LaurentQT::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_formats() {
        assert_eq!(LaurentQT::z().to_string(), "q*t + q^-1*t^-1");
        assert_eq!(Laurent::quantum_two().to_string(), "q + q^-1");
        assert_eq!(Laurent::zero().to_string(), "0");
        assert_eq!(Laurent::from_terms([(3, -2), (0, 1)]).to_string(), "-2*q^3 + 1");
        assert_eq!(Laurent::from_terms([(-9, -1), (5, 1)]).to_string(), "q^5 - q^-9");
        assert_eq!(Laurent::quantum_two().render_compact("q", false), "q+q^-1");
        let mut p = LaurentQT::monomial(-1, 3, 0);
        p.add_term(1, 2, 2);
        assert_eq!(p.to_string(), "2*q*t^2 - q^3");
    }

    #[test]
    fn json_terms() {
        let j = serde_json::to_string(&LaurentQT::z().to_json()).unwrap();
        assert_eq!(j, r#"[{"q":1,"t":1,"c":1},{"q":-1,"t":-1,"c":1}]"#);
    }

    #[test]
    fn z_squared() {
        let z2 = LaurentQT::z().pow(2);
        assert_eq!(z2.to_string(), "q^2*t^2 + 2 + q^-2*t^-2");
        assert_eq!(z2.at_t_one(), Laurent::quantum_two().pow(2));
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-6i32..6, -5i64..5), 0..6).prop_map(Laurent::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(a.invert_variable().invert_variable(), a.clone());
        }
    }
}
