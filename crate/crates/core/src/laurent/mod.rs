//! Sparse multivariate Laurent polynomials with exact coefficients.
//!
//! A polynomial is a map from integer exponent vectors to nonzero
//! coefficients. Exponents may be negative. The term order everywhere
//! (iteration, serialization, support listings) is graded-lexicographic:
//! lower total degree first, and within a degree the lexicographically
//! larger exponent vector first, so `1 + x1 + x2` prints in exactly that
//! order and parse→print→parse is the identity.

mod graph;
mod moduli;
mod parse;

pub use graph::{symanzik, Graph, KinCoeff, KinPolynomial};
pub use moduli::{m05_factors, moduli_minors};
pub use parse::parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dd::CDD;
use crate::error::{Error, Result};

/// Exponent vector of a single term; ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {
                for (a, b) in self.0.iter().zip(other.0.iter()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        // larger entry first within a degree class
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            }
            ord => ord,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial over a coefficient ring `T`.
///
/// Invariants: no stored coefficient is zero; all exponent vectors have
/// length `nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial<T> {
    nvars: usize,
    terms: BTreeMap<Exponent, T>,
}

/// The exact-coefficient polynomial used throughout the symbolic paths.
pub type LaurentRat = LaurentPolynomial<BigRational>;
/// Numeric-mode polynomial with complex double coefficients.
pub type LaurentC = LaurentPolynomial<Complex64>;

impl<T> LaurentPolynomial<T>
where
    T: Clone + Zero + PartialEq,
{
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Vec<i64>, T)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            p.add_term(&e, c);
        }
        p
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn monomial(nvars: usize, exp: Vec<i64>, c: T) -> Self {
        Self::from_terms(nvars, [(exp, c)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    /// Support in canonical order.
    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(|e| e.0.clone()).collect()
    }

    pub fn coeff(&self, exp: &[i64]) -> Option<&T> {
        self.terms.get(&Exponent(exp.to_vec()))
    }

    /// Add `c * x^exp`, removing the term if the sum cancels.
    pub fn add_term(&mut self, exp: &[i64], c: T) {
        assert_eq!(exp.len(), self.nvars, "exponent length must equal nvars");
        if c.is_zero() {
            return;
        }
        let key = Exponent(exp.to_vec());
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self
    where
        T: std::ops::Add<Output = T>,
    {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(&e.0, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self
    where
        T: std::ops::Neg<Output = T>,
    {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self
    where
        T: std::ops::Add<Output = T> + std::ops::Neg<Output = T>,
    {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
    {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exp: Vec<i64> = ea.0.iter().zip(eb.0.iter()).map(|(a, b)| a + b).collect();
                out.add_term(&exp, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self
    where
        T: std::ops::Mul<Output = T>,
    {
        let mut out = Self::zero(self.nvars);
        for (e, t) in self.terms.iter() {
            out.add_term(&e.0, t.clone() * c.clone());
        }
        out
    }

    /// Partial derivative in variable `j` (0-based). Exponents may go
    /// negative.
    pub fn partial(&self, j: usize) -> Self
    where
        T: std::ops::Mul<Output = T> + std::ops::Add<Output = T> + FromI64,
    {
        assert!(j < self.nvars, "variable index out of range");
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            let k = e.0[j];
            if k == 0 {
                continue;
            }
            let mut exp = e.0.clone();
            exp[j] -= 1;
            out.add_term(&exp, c.clone() * T::from_i64(k));
        }
        out
    }

    /// Toric derivative `x_j * ∂/∂x_j`; keeps the support inside the
    /// Newton polytope.
    pub fn toric_partial(&self, j: usize) -> Self
    where
        T: std::ops::Mul<Output = T> + std::ops::Add<Output = T> + FromI64,
    {
        assert!(j < self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms.iter() {
            let k = e.0[j];
            if k == 0 {
                continue;
            }
            out.add_term(&e.0, c.clone() * T::from_i64(k));
        }
        out
    }
}

/// Coefficient rings that can embed machine integers (for derivatives).
pub trait FromI64 {
    fn from_i64(k: i64) -> Self;
}

impl FromI64 for BigRational {
    fn from_i64(k: i64) -> Self {
        BigRational::from_integer(BigInt::from(k))
    }
}

impl FromI64 for Complex64 {
    fn from_i64(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
}

impl LaurentRat {
    /// All coefficients strictly positive (Assumption for the
    /// Euler–Mellin analysis).
    pub fn all_coeffs_positive(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|c| c.is_positive())
    }

    pub fn to_complex(&self) -> LaurentC {
        LaurentPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), Complex64::new(rat_to_f64(c), 0.0)))
                .collect(),
        }
    }

    /// Exact evaluation at a rational point. `None` when a negative
    /// exponent meets a zero coordinate.
    pub fn eval_rational(&self, x: &[BigRational]) -> Option<BigRational> {
        assert_eq!(x.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in self.terms.iter() {
            let mut term = c.clone();
            for (j, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if x[j].is_zero() {
                    if k < 0 {
                        return None;
                    }
                    term = BigRational::zero();
                    break;
                }
                term *= rat_powi(&x[j], k);
            }
            acc += term;
        }
        Some(acc)
    }
}

impl LaurentC {
    /// Evaluate at a complex point; summation follows the canonical term
    /// order.
    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64> {
        assert_eq!(x.len(), self.nvars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms.iter() {
            let mut term = *c;
            for (j, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if x[j] == Complex64::new(0.0, 0.0) {
                    if k < 0 {
                        return Err(Error::EvalDivisionByZero { var: j });
                    }
                    term = Complex64::new(0.0, 0.0);
                    break;
                }
                term *= x[j].powi(k as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Evaluation in double-double precision, for residual certificates.
    pub fn eval_dd(&self, x: &[CDD]) -> Result<CDD> {
        assert_eq!(x.len(), self.nvars);
        let mut acc = CDD::ZERO;
        for (e, c) in self.terms.iter() {
            let mut term = CDD::from_c64(*c);
            for (j, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if x[j].norm_f64() == 0.0 {
                    if k < 0 {
                        return Err(Error::EvalDivisionByZero { var: j });
                    }
                    term = CDD::ZERO;
                    break;
                }
                term = term.mul(x[j].powi(k));
            }
            acc = acc.add(term);
        }
        Ok(acc)
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a widening division for pathological magnitudes
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub(crate) fn rat_powi(x: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let mut base = if k < 0 { x.recip() } else { x.clone() };
    let mut n = k.unsigned_abs();
    let mut acc = BigRational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= base.clone();
        }
        base = base.clone() * base;
        n >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------
// canonical text form
// ---------------------------------------------------------------------

/// Formats a monomial part like `x1^2*x2`, empty for the constant term.
fn fmt_monomial(vars: &[String], exp: &[i64]) -> String {
    let mut parts = Vec::new();
    for (j, &k) in exp.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if k == 1 {
            parts.push(vars[j].clone());
        } else {
            parts.push(format!("{}^{}", vars[j], k));
        }
    }
    parts.join("*")
}

fn fmt_rat(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl LaurentRat {
    /// Canonical text form, e.g. `1 + x1 + x1^2*x2`. `parse` of the
    /// result reproduces the polynomial exactly.
    pub fn to_text(&self, vars: &[String]) -> String {
        assert_eq!(vars.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = fmt_monomial(vars, &e.0);
            let mag = c.abs();
            let body = if mono.is_empty() {
                fmt_rat(&mag)
            } else if mag.is_one() {
                mono.clone()
            } else {
                format!("{}*{}", fmt_rat(&mag), mono)
            };
            if i == 0 {
                if c.is_negative() {
                    out.push_str("-");
                }
                out.push_str(&body);
            } else if c.is_negative() {
                out.push_str(" - ");
                out.push_str(&body);
            } else {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------

/// One serialized term: exponent vector plus an exact rational
/// coefficient. Numerator/denominator are JSON numbers when they fit in
/// an `i64`, decimal strings otherwise.
#[derive(Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: Vec<i64>,
    pub num: serde_json::Value,
    pub den: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
pub struct JsonPolynomial {
    pub vars: Vec<String>,
    pub terms: Vec<JsonTerm>,
}

pub(crate) fn bigint_to_json(b: &BigInt) -> serde_json::Value {
    match b.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(b.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::InvalidSpec(format!("integer out of range: {n}"))),
        serde_json::Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidSpec(format!("bad integer literal: {s}"))),
        other => Err(Error::InvalidSpec(format!("expected integer, got {other}"))),
    }
}

impl LaurentRat {
    pub fn to_json(&self, vars: &[String]) -> JsonPolynomial {
        JsonPolynomial {
            vars: vars.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| JsonTerm {
                    exp: e.0.clone(),
                    num: bigint_to_json(c.numer()),
                    den: bigint_to_json(c.denom()),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &JsonPolynomial) -> Result<(Self, Vec<String>)> {
        let nvars = json.vars.len();
        let mut p = Self::zero(nvars);
        for t in &json.terms {
            if t.exp.len() != nvars {
                return Err(Error::InvalidSpec("term exponent length != vars".into()));
            }
            let num = bigint_from_json(&t.num)?;
            let den = bigint_from_json(&t.den)?;
            if den.is_zero() {
                return Err(Error::InvalidSpec("zero denominator".into()));
            }
            p.add_term(&t.exp, BigRational::new(num, den));
        }
        Ok((p, json.vars.clone()))
    }
}

impl fmt::Display for LaurentRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (1..=self.nvars).map(|j| format!("x{j}")).collect();
        write!(f, "{}", self.to_text(&vars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn term_order_is_graded_lex() {
        // 1 + x1 + x2, then the degree-3 monomial last
        let p = LaurentRat::from_terms(
            2,
            [
                (vec![0, 1], rat(1)),
                (vec![2, 1], rat(1)),
                (vec![0, 0], rat(1)),
                (vec![1, 0], rat(1)),
            ],
        );
        let sup = p.support();
        assert_eq!(sup, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 1]]);
        assert_eq!(p.to_text(&["x1".into(), "x2".into()]), "1 + x1 + x2 + x1^2*x2");
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut p = LaurentRat::zero(2);
        p.add_term(&[1, 1], rat(1));
        p.add_term(&[1, 1], rat(-1));
        assert!(p.is_zero());
        assert_eq!(p.to_text(&["x1".into(), "x2".into()]), "0");
    }

    #[test]
    fn partial_derivatives() {
        // f = 1 + x1 + x2 -> df/dx1 = 1
        let f = LaurentRat::from_terms(
            2,
            [(vec![0, 0], rat(1)), (vec![1, 0], rat(1)), (vec![0, 1], rat(1))],
        );
        assert_eq!(f.partial(0), LaurentRat::constant(2, rat(1)));

        // f = x1*x2 -> df/dx2 = x1
        let g = LaurentRat::from_terms(2, [(vec![1, 1], rat(1))]);
        assert_eq!(g.partial(1), LaurentRat::monomial(2, vec![1, 0], rat(1)));

        // f = x1^-1 -> df/dx1 = -x1^-2
        let h = LaurentRat::monomial(1, vec![-1], rat(1));
        assert_eq!(h.partial(0), LaurentRat::monomial(1, vec![-2], rat(-1)));
    }

    #[test]
    fn mixed_partials_commute() {
        let f = LaurentRat::from_terms(
            2,
            [(vec![3, 2], rat(5)), (vec![-1, 4], rat(2)), (vec![0, 0], rat(7))],
        );
        assert_eq!(f.partial(0).partial(1), f.partial(1).partial(0));
    }

    #[test]
    fn eval_cases() {
        // f = 1 + x1 at 1 -> 2
        let f = LaurentRat::from_terms(1, [(vec![0], rat(1)), (vec![1], rat(1))]).to_complex();
        let v = f.eval(&[Complex64::new(1.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-15);

        // x^-1 at 2 -> 0.5
        let g = LaurentRat::monomial(1, vec![-1], rat(1)).to_complex();
        let v = g.eval(&[Complex64::new(2.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        // x^-1 at 0 -> error
        assert!(g.eval(&[Complex64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn eval_expanded_product_matches_factor_product() {
        // oracle: value of (1+x1)(1+x1+x2)(x1+x2) at (1,1) is 2*3*2 = 12
        let f1 = LaurentRat::from_terms(2, [(vec![0, 0], rat(1)), (vec![1, 0], rat(1))]);
        let f2 = LaurentRat::from_terms(
            2,
            [(vec![0, 0], rat(1)), (vec![1, 0], rat(1)), (vec![0, 1], rat(1))],
        );
        let f3 = LaurentRat::from_terms(2, [(vec![1, 0], rat(1)), (vec![0, 1], rat(1))]);
        let prod = f1.mul(&f2).mul(&f3).to_complex();
        let x = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        let v = prod.eval(&x).unwrap();
        assert!((v - Complex64::new(12.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn toric_partial_is_x_times_partial() {
        let f = LaurentRat::from_terms(2, [(vec![2, -1], rat(3)), (vec![0, 1], rat(1))]);
        let lhs = f.toric_partial(0);
        let xdx = f.partial(0).mul(&LaurentRat::monomial(2, vec![1, 0], rat(1)));
        assert_eq!(lhs, xdx);
    }
}
