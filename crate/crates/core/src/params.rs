//! Exact rational-function arithmetic in the exponent parameters
//! (s_1..s_ℓ, ν_1..ν_n).
//!
//! Coefficients of the difference and differential operators live here.
//! Fractions are kept gcd-free: normalization only scales numerator and
//! denominator by the denominator's content and sign (no polynomial
//! gcd), so equality is decided by cross-multiplication.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::laurent::{FromI64, LaurentPolynomial};

/// Polynomial in the ℓ+n parameters (s block first, then ν block).
pub type ParamPoly = LaurentPolynomial<BigRational>;

/// Display names for the parameters: `s`/`nu` when single, indexed
/// otherwise.
pub fn param_names(l: usize, n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(l + n);
    for i in 0..l {
        names.push(if l == 1 { "s".into() } else { format!("s{}", i + 1) });
    }
    for j in 0..n {
        names.push(if n == 1 { "nu".into() } else { format!("nu{}", j + 1) });
    }
    names
}

pub fn param_const(nparams: usize, c: BigRational) -> ParamPoly {
    ParamPoly::constant(nparams, c)
}

pub fn param_var(nparams: usize, idx: usize) -> ParamPoly {
    let mut e = vec![0i64; nparams];
    e[idx] = 1;
    ParamPoly::monomial(nparams, e, BigRational::one())
}

/// Substitute parameter `idx` by itself plus an integer shift.
pub fn shift_param(p: &ParamPoly, idx: usize, k: i64) -> ParamPoly {
    if k == 0 {
        return p.clone();
    }
    let nparams = p.nvars();
    let mut out = ParamPoly::zero(nparams);
    let shift_base = {
        let mut e = vec![0i64; nparams];
        e[idx] = 1;
        let mut b = ParamPoly::monomial(nparams, e, BigRational::one());
        b.add_term(&vec![0i64; nparams], BigRational::from_integer(BigInt::from(k)));
        b
    };
    for (e, c) in p.terms() {
        let mut term = ParamPoly::constant(nparams, c.clone());
        for (j, &kj) in e.0.iter().enumerate() {
            debug_assert!(kj >= 0, "parameter polynomials have non-negative exponents");
            let base = if j == idx {
                shift_base.clone()
            } else {
                let mut ej = vec![0i64; nparams];
                ej[j] = 1;
                ParamPoly::monomial(nparams, ej, BigRational::one())
            };
            for _ in 0..kj {
                term = term.mul(&base);
            }
        }
        out = out.add(&term);
    }
    out
}

pub fn eval_param_poly(p: &ParamPoly, point: &[BigRational]) -> BigRational {
    p.eval_rational(point).expect("parameter polynomials have non-negative exponents")
}

pub fn eval_param_poly_complex(p: &ParamPoly, point: &[Complex64]) -> Complex64 {
    p.to_complex().eval(point).expect("non-negative exponents")
}

fn content(p: &ParamPoly) -> BigRational {
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for (_, c) in p.terms() {
        num_gcd = num_gcd.gcd(c.numer());
        den_lcm = den_lcm.lcm(c.denom());
    }
    if num_gcd.is_zero() {
        BigRational::one()
    } else {
        BigRational::new(num_gcd, den_lcm)
    }
}

fn leading_sign(p: &ParamPoly) -> i32 {
    match p.terms().last() {
        Some((_, c)) if c.is_negative() => -1,
        _ => 1,
    }
}

/// A rational function num/den in the parameters.
#[derive(Debug, Clone)]
pub struct ParamRat {
    pub num: ParamPoly,
    pub den: ParamPoly,
}

impl ParamRat {
    pub fn new(num: ParamPoly, den: ParamPoly) -> ParamRat {
        assert!(!den.is_zero(), "zero denominator");
        ParamRat { num, den }.normalized()
    }

    pub fn from_poly(num: ParamPoly) -> ParamRat {
        let nparams = num.nvars();
        ParamRat { num, den: param_const(nparams, BigRational::one()) }
    }

    pub fn constant(nparams: usize, c: BigRational) -> ParamRat {
        ParamRat::from_poly(param_const(nparams, c))
    }

    pub fn var(nparams: usize, idx: usize) -> ParamRat {
        ParamRat::from_poly(param_var(nparams, idx))
    }

    pub fn nparams(&self) -> usize {
        self.num.nvars()
    }

    fn normalized(mut self) -> ParamRat {
        if self.num.is_zero() {
            self.den = param_const(self.den.nvars(), BigRational::one());
            return self;
        }
        let c = content(&self.den);
        let sign = leading_sign(&self.den);
        let k = BigRational::from_integer(BigInt::from(sign)) / c;
        self.num = self.num.scale(&k);
        self.den = self.den.scale(&k);
        self
    }

    pub fn add(&self, other: &ParamRat) -> ParamRat {
        ParamRat::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &ParamRat) -> ParamRat {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ParamRat) -> ParamRat {
        ParamRat::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &ParamRat) -> ParamRat {
        assert!(!other.num.is_zero(), "division by the zero rational function");
        ParamRat::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn neg(&self) -> ParamRat {
        ParamRat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn is_zero_fn(&self) -> bool {
        self.num.is_zero()
    }

    /// Shift every parameter by the given integer vector (substitution
    /// p_k -> p_k + shift_k).
    pub fn shift_all(&self, shift: &[i64]) -> ParamRat {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (idx, &k) in shift.iter().enumerate() {
            num = shift_param(&num, idx, k);
            den = shift_param(&den, idx, k);
        }
        ParamRat::new(num, den)
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = eval_param_poly(&self.den, point);
        if d.is_zero() {
            return None;
        }
        Some(eval_param_poly(&self.num, point) / d)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        eval_param_poly_complex(&self.num, point) / eval_param_poly_complex(&self.den, point)
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn to_text(&self, names: &[String]) -> String {
        if self.num.is_zero() {
            return "0".into();
        }
        let den_is_one = {
            let one = param_const(self.den.nvars(), BigRational::one());
            self.den == one
        };
        if den_is_one {
            self.num.to_text(names)
        } else {
            format!("({})/({})", self.num.to_text(names), self.den.to_text(names))
        }
    }
}

impl PartialEq for ParamRat {
    fn eq(&self, other: &Self) -> bool {
        // cross-multiplied equality: robust without polynomial gcd
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Zero for ParamRat {
    fn zero() -> Self {
        // nparams unknown here; a 0-parameter constant is compatible with
        // every arity through the arithmetic below
        ParamRat { num: ParamPoly::zero(0), den: param_const(0, BigRational::one()) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

// The std::ops impls let ParamRat serve as a polynomial coefficient
// ring. Mixed-arity zero values (from Zero::zero) are coerced.
fn coerce(a: &ParamRat, arity: usize) -> ParamRat {
    if a.nparams() == arity {
        a.clone()
    } else if a.num.is_zero() {
        ParamRat { num: ParamPoly::zero(arity), den: param_const(arity, BigRational::one()) }
    } else if a.num.num_terms() == 1 && a.nparams() == 0 {
        let c = a.eval(&[]).unwrap();
        ParamRat::constant(arity, c)
    } else {
        panic!("parameter arity mismatch: {} vs {}", a.nparams(), arity)
    }
}

impl std::ops::Add for ParamRat {
    type Output = ParamRat;
    fn add(self, rhs: ParamRat) -> ParamRat {
        let arity = self.nparams().max(rhs.nparams());
        ParamRat::add(&coerce(&self, arity), &coerce(&rhs, arity))
    }
}

impl std::ops::Mul for ParamRat {
    type Output = ParamRat;
    fn mul(self, rhs: ParamRat) -> ParamRat {
        let arity = self.nparams().max(rhs.nparams());
        ParamRat::mul(&coerce(&self, arity), &coerce(&rhs, arity))
    }
}

impl std::ops::Neg for ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        ParamRat::neg(&self)
    }
}

impl FromI64 for ParamRat {
    fn from_i64(k: i64) -> Self {
        ParamRat::constant(0, BigRational::from_integer(BigInt::from(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn arithmetic_and_equality() {
        // (s + nu)/(s) + (s - nu)/(s) == 2
        let s = ParamRat::var(2, 0);
        let nu = ParamRat::var(2, 1);
        let two = ParamRat::constant(2, rat(2));
        let lhs = s.add(&nu).div(&s).add(&s.sub(&nu).div(&s));
        assert_eq!(lhs, two);
    }

    #[test]
    fn shifting_parameters() {
        // shift s -> s+2 in (s^2): (s+2)^2 = s^2 + 4s + 4
        let s = param_var(2, 0);
        let s2 = s.mul(&s);
        let shifted = shift_param(&s2, 0, 2);
        let expect = {
            let mut p = ParamPoly::zero(2);
            p.add_term(&[2, 0], rat(1));
            p.add_term(&[1, 0], rat(4));
            p.add_term(&[0, 0], rat(4));
            p
        };
        assert_eq!(shifted, expect);
    }

    #[test]
    fn evaluation() {
        // (nu)/(1 + nu - s) at (s, nu) = (1/2, 1/3): (1/3)/(5/6) = 2/5
        let nu = ParamRat::var(2, 1);
        let s = ParamRat::var(2, 0);
        let one = ParamRat::constant(2, rat(1));
        let f = nu.div(&one.add(&nu).sub(&s));
        let v = f.eval(&[BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())]);
        assert_eq!(v.unwrap(), BigRational::new(2.into(), 5.into()));
    }

    #[test]
    fn denominator_normalization() {
        // (-nu)/(-s) normalizes to a positive-leading denominator
        let f = ParamRat::new(param_var(2, 1).neg(), param_var(2, 0).neg());
        let names = param_names(1, 1);
        assert_eq!(f.to_text(&names), "(nu)/(s)");
    }
}
