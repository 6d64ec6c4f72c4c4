//! The integral specification shared by every subsystem: the factors
//! f_1..f_ℓ, the exponents s ∈ ℂ^ℓ and ν ∈ ℂ^n, and the mode flags.
//!
//! Exponents are carried as [`Scalar`]s so that exact rational data
//! stays exact through the polytope paths while complex values remain
//! available to the numeric ones.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{parse, LaurentRat};

/// A real-rational, real-float, or complex-float parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rat(BigRational),
    F64(f64),
    Complex(Complex64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rat(r) => Complex64::new(crate::laurent::rat_to_f64(r), 0.0),
            Scalar::F64(x) => Complex64::new(*x, 0.0),
            Scalar::Complex(z) => *z,
        }
    }

    pub fn re_f64(&self) -> f64 {
        self.to_complex().re
    }

    pub fn im_f64(&self) -> f64 {
        self.to_complex().im
    }

    pub fn is_real(&self) -> bool {
        self.im_f64() == 0.0
    }

    /// The exact real part, when the value is a real rational.
    pub fn rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Shift by an integer (for difference operators).
    pub fn shift(&self, k: i64) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r + BigRational::from_integer(BigInt::from(k))),
            Scalar::F64(x) => Scalar::F64(x + k as f64),
            Scalar::Complex(z) => Scalar::Complex(z + Complex64::new(k as f64, 0.0)),
        }
    }

    /// Scale by 1/δ (for the δ-rescaled integral).
    pub fn scale_f64(&self, factor: f64) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::F64(crate::laurent::rat_to_f64(r) * factor),
            Scalar::F64(x) => Scalar::F64(x * factor),
            Scalar::Complex(z) => Scalar::Complex(z * factor),
        }
    }
}

/// The full problem: factors, exponents, variable names, and flags.
#[derive(Debug, Clone)]
pub struct IntegralSpec {
    pub vars: Vec<String>,
    pub polys: Vec<LaurentRat>,
    pub s: Vec<Scalar>,
    pub nu: Vec<Scalar>,
    /// Every coefficient of every factor is a positive rational
    /// (required by the convergence, limit, and quadrature paths).
    pub positive_mode: bool,
}

impl IntegralSpec {
    pub fn new(
        vars: Vec<String>,
        polys: Vec<LaurentRat>,
        s: Vec<Scalar>,
        nu: Vec<Scalar>,
    ) -> Result<IntegralSpec> {
        let n = vars.len();
        if n == 0 {
            return Err(Error::InvalidSpec("need at least one variable".into()));
        }
        if polys.is_empty() {
            return Err(Error::InvalidSpec("need at least one factor".into()));
        }
        if polys.iter().any(|p| p.nvars() != n) {
            return Err(Error::InvalidSpec("factor variable count mismatch".into()));
        }
        if polys.iter().any(|p| p.is_zero()) {
            return Err(Error::InvalidSpec("zero polynomial among the factors".into()));
        }
        if s.len() != polys.len() {
            return Err(Error::InvalidSpec(format!(
                "got {} exponents s for {} factors",
                s.len(),
                polys.len()
            )));
        }
        if nu.len() != n {
            return Err(Error::InvalidSpec(format!(
                "got {} exponents nu for {} variables",
                nu.len(),
                n
            )));
        }
        let positive_mode = polys.iter().all(|p| p.all_coeffs_positive());
        Ok(IntegralSpec { vars, polys, s, nu, positive_mode })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nfactors(&self) -> usize {
        self.polys.len()
    }

    pub fn require_positive_mode(&self) -> Result<()> {
        if self.positive_mode {
            Ok(())
        } else {
            Err(Error::Precondition(
                "operation requires positive-coefficient mode (all factor coefficients positive)"
                    .into(),
            ))
        }
    }

    pub fn s_complex(&self) -> Vec<Complex64> {
        self.s.iter().map(Scalar::to_complex).collect()
    }

    pub fn nu_complex(&self) -> Vec<Complex64> {
        self.nu.iter().map(Scalar::to_complex).collect()
    }

    /// Exact real parts of s, when every entry is a real rational.
    pub fn s_rational(&self) -> Option<Vec<BigRational>> {
        self.s.iter().map(|x| x.rational().cloned()).collect()
    }

    pub fn nu_rational(&self) -> Option<Vec<BigRational>> {
        self.nu.iter().map(|x| x.rational().cloned()).collect()
    }

    /// The spec with exponents (s/δ, ν/δ).
    pub fn rescaled(&self, delta: f64) -> IntegralSpec {
        let inv = 1.0 / delta;
        IntegralSpec {
            vars: self.vars.clone(),
            polys: self.polys.clone(),
            s: self.s.iter().map(|x| x.scale_f64(inv)).collect(),
            nu: self.nu.iter().map(|x| x.scale_f64(inv)).collect(),
            positive_mode: self.positive_mode,
        }
    }

    /// The spec with integer-shifted exponents (s + a, ν + b).
    pub fn shifted(&self, a: &[i64], b: &[i64]) -> IntegralSpec {
        assert_eq!(a.len(), self.nfactors());
        assert_eq!(b.len(), self.nvars());
        IntegralSpec {
            vars: self.vars.clone(),
            polys: self.polys.clone(),
            s: self.s.iter().zip(a).map(|(x, &k)| x.shift(k)).collect(),
            nu: self.nu.iter().zip(b).map(|(x, &k)| x.shift(k)).collect(),
            positive_mode: self.positive_mode,
        }
    }
}

// ---------------------------------------------------------------------
// JSON schema (one schema for all CLI subcommands)
// ---------------------------------------------------------------------

/// JSON value for one exponent: a float, an exact `[num, den]` pair, or
/// `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Pair([i64; 2]),
    Float(f64),
    Complex { re: f64, im: f64 },
}

impl JsonScalar {
    pub fn to_scalar(&self) -> Result<Scalar> {
        match self {
            JsonScalar::Pair([num, den]) => {
                if *den == 0 {
                    return Err(Error::InvalidSpec("zero denominator in exponent".into()));
                }
                Ok(Scalar::from_ratio(*num, *den))
            }
            JsonScalar::Float(x) => Ok(Scalar::F64(*x)),
            JsonScalar::Complex { re, im } => {
                if *im == 0.0 {
                    Ok(Scalar::F64(*re))
                } else {
                    Ok(Scalar::Complex(Complex64::new(*re, *im)))
                }
            }
        }
    }

    pub fn from_scalar(s: &Scalar) -> JsonScalar {
        match s {
            Scalar::Rat(r) => {
                match (r.numer().to_i64(), r.denom().to_i64()) {
                    (Some(n), Some(d)) => JsonScalar::Pair([n, d]),
                    _ => JsonScalar::Float(crate::laurent::rat_to_f64(r)),
                }
            }
            Scalar::F64(x) => JsonScalar::Float(*x),
            Scalar::Complex(z) => JsonScalar::Complex { re: z.re, im: z.im },
        }
    }
}

/// The problem-spec file format. Commands ignore fields they do not
/// need.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecFile {
    pub vars: Vec<String>,
    pub f: Vec<String>,
    pub s: Vec<JsonScalar>,
    pub nu: Vec<JsonScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<bool>,
}

impl SpecFile {
    pub fn to_spec(&self) -> Result<IntegralSpec> {
        let polys: Result<Vec<LaurentRat>> =
            self.f.iter().map(|src| parse(src, &self.vars)).collect();
        let s: Result<Vec<Scalar>> = self.s.iter().map(JsonScalar::to_scalar).collect();
        let nu: Result<Vec<Scalar>> = self.nu.iter().map(JsonScalar::to_scalar).collect();
        let spec = IntegralSpec::new(self.vars.clone(), polys?, s?, nu?)?;
        if self.positive == Some(true) && !spec.positive_mode {
            return Err(Error::InvalidSpec(
                "spec requests positive-coefficient mode but a factor has a non-positive \
                 coefficient"
                    .into(),
            ));
        }
        Ok(spec)
    }

    /// Canonicalized form of a spec (canonical polynomial text, resolved
    /// flags); embedding this in outputs makes runs reproducible.
    pub fn canonical(spec: &IntegralSpec) -> SpecFile {
        SpecFile {
            vars: spec.vars.clone(),
            f: spec.polys.iter().map(|p| p.to_text(&spec.vars)).collect(),
            s: spec.s.iter().map(JsonScalar::from_scalar).collect(),
            nu: spec.nu.iter().map(JsonScalar::from_scalar).collect(),
            positive: Some(spec.positive_mode),
        }
    }
}

/// Positivity check used by the convergence preconditions: Re(s_i) > 0
/// for all i.
pub fn all_re_positive(s: &[Scalar]) -> bool {
    s.iter().all(|x| match x {
        Scalar::Rat(r) => r.is_positive(),
        _ => x.re_f64() > 0.0,
    })
}
