//! Linear differential operators with polynomial coefficients.
//!
//! An operator is a sum of terms (coefficient polynomial in the base
//! variables over ℚ(s,ν)) × (monomial in the partials ∂). Products
//! follow the Weyl relations: pushing a partial through a coefficient
//! produces the Leibniz correction term. Canonical form sorts terms by
//! the ∂ multi-index and normalizes the overall sign so the leading
//! coefficient is positive.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::laurent::LaurentPolynomial;
use crate::params::ParamRat;

/// Coefficient polynomial: base variables with ℚ(s,ν) coefficients.
pub type VarPoly = LaurentPolynomial<ParamRat>;

/// A differential operator in `nvars` base variables.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    pub nvars: usize,
    pub nparams: usize,
    /// ∂ multi-index → coefficient polynomial
    pub terms: BTreeMap<Vec<u32>, VarPoly>,
}

impl DiffOp {
    pub fn zero(nvars: usize, nparams: usize) -> DiffOp {
        DiffOp { nvars, nparams, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, dpow: Vec<u32>, coeff: VarPoly) {
        assert_eq!(dpow.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&dpow) {
            None => {
                self.terms.insert(dpow, coeff);
            }
            Some(old) => {
                let sum = old.add(&coeff);
                if !sum.is_zero() {
                    self.terms.insert(dpow, sum);
                }
            }
        }
    }

    /// c · x^mono · ∂^dpow as an operator.
    pub fn monomial_op(
        nvars: usize,
        nparams: usize,
        coeff: ParamRat,
        mono: Vec<i64>,
        dpow: Vec<u32>,
    ) -> DiffOp {
        let mut op = DiffOp::zero(nvars, nparams);
        op.add_term(dpow, VarPoly::monomial(nvars, mono, coeff));
        op
    }

    pub fn constant_op(nvars: usize, nparams: usize, c: ParamRat) -> DiffOp {
        DiffOp::monomial_op(nvars, nparams, c, vec![0; nvars], vec![0; nvars])
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            nvars: self.nvars,
            nparams: self.nparams,
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ParamRat) -> DiffOp {
        DiffOp {
            nvars: self.nvars,
            nparams: self.nparams,
            terms: self.terms.iter().map(|(d, p)| (d.clone(), p.scale(c))).collect(),
        }
    }

    /// Operator composition self ∘ other (apply `other` first).
    pub fn mul(&self, other: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero(self.nvars, self.nparams);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                // p ∂^a q ∂^b = p Σ_c binom(a,c) (∂^{a-c} q) ∂^{b+c}
                for (c_idx, deriv_q, mult) in leibniz_expansion(a, q) {
                    let dpow: Vec<u32> = b.iter().zip(&c_idx).map(|(x, y)| x + y).collect();
                    let coeff = p
                        .mul(&deriv_q)
                        .scale(&ParamRat::constant(self.nparams, mult));
                    out.add_term(dpow, coeff);
                }
            }
        }
        out
    }

    /// Sign-normalize: the coefficient of the leading ∂-monomial (max by
    /// total degree, then lex) gets a positive leading coefficient.
    pub fn sign_normalized(&self) -> DiffOp {
        let Some(lead) = self
            .terms
            .keys()
            .max_by(|a, b| {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| a.cmp(b))
            })
            .cloned()
        else {
            return self.clone();
        };
        let coeff = &self.terms[&lead];
        let negative = coeff
            .terms()
            .last()
            .map(|(_, c)| c.num.terms().last().map(|(_, q)| q.is_negative()).unwrap_or(false))
            .unwrap_or(false);
        if negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Total ∂-order of the operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|d| d.iter().sum()).max().unwrap_or(0)
    }

    /// Text form, leading ∂-terms first: `(t1)*d[t1]^2 - ...`.
    pub fn to_text(&self, var_names: &[String], param_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut parts = Vec::new();
        for d in keys {
            let coeff = &self.terms[d];
            let coeff_text = varpoly_text(coeff, var_names, param_names);
            let mut dpart = String::new();
            for (j, &k) in d.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !dpart.is_empty() {
                    dpart.push('*');
                }
                if k == 1 {
                    dpart.push_str(&format!("d[{}]", var_names[j]));
                } else {
                    dpart.push_str(&format!("d[{}]^{}", var_names[j], k));
                }
            }
            if dpart.is_empty() {
                parts.push(format!("({coeff_text})"));
            } else {
                parts.push(format!("({coeff_text})*{dpart}"));
            }
        }
        parts.join(" + ")
    }
}

/// Terms of ∂^a applied through a coefficient polynomial: tuples
/// (c, ∂^{a-c} q, binom(a, c)) over all c ≤ a with non-vanishing
/// derivative.
fn leibniz_expansion(a: &[u32], q: &VarPoly) -> Vec<(Vec<u32>, VarPoly, BigRational)> {
    let n = a.len();
    let mut out = Vec::new();
    let mut c = vec![0u32; n];
    loop {
        // derivative ∂^{a-c} q
        let mut deriv = q.clone();
        let mut vanished = false;
        for j in 0..n {
            for _ in 0..(a[j] - c[j]) {
                deriv = deriv.partial(j);
                if deriv.is_zero() {
                    vanished = true;
                    break;
                }
            }
            if vanished {
                break;
            }
        }
        if !vanished {
            let mut mult = BigRational::one();
            for j in 0..n {
                mult *= BigRational::from_integer(BigInt::from(binom(a[j], c[j])));
            }
            out.push((c.clone(), deriv, mult));
        }
        // next c ≤ a
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            c[j] += 1;
            if c[j] <= a[j] {
                break;
            }
            c[j] = 0;
            j += 1;
        }
    }
}

fn binom(n: u32, k: u32) -> u64 {
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

fn varpoly_text(p: &VarPoly, var_names: &[String], param_names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (e, c) in p.terms() {
        let mono: Vec<String> = e
            .0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k != 0)
            .map(|(j, &k)| {
                if k == 1 {
                    var_names[j].clone()
                } else {
                    format!("{}^{}", var_names[j], k)
                }
            })
            .collect();
        let ctext = c.to_text(param_names);
        let minus_one = {
            let one = ParamRat::constant(c.nparams(), BigRational::one());
            c == &one.neg()
        };
        let body = if mono.is_empty() {
            ctext
        } else if c.is_one() {
            mono.join("*")
        } else if minus_one {
            format!("-{}", mono.join("*"))
        } else {
            format!("{}*{}", ctext, mono.join("*"))
        };
        parts.push(body);
    }
    parts.join(" + ").replace("+ -", "- ")
}

/// JSON form of an operator, with exact rational coefficient data.
pub fn diffop_to_json(
    op: &DiffOp,
    var_names: &[String],
    param_names: &[String],
) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = op
        .terms
        .iter()
        .map(|(d, c)| {
            serde_json::json!({
                "dpow": d,
                "coeff": varpoly_json(c, param_names),
            })
        })
        .collect();
    serde_json::json!({
        "vars": var_names,
        "params": param_names,
        "terms": terms,
        "text": op.to_text(var_names, param_names),
    })
}

fn varpoly_json(p: &VarPoly, param_names: &[String]) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = p
        .terms()
        .map(|(e, c)| {
            serde_json::json!({
                "exp": e.0,
                "num": c.num.to_text(param_names),
                "den": c.den.to_text(param_names),
            })
        })
        .collect();
    serde_json::Value::Array(terms)
}
