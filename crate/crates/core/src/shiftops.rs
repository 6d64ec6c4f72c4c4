//! Difference (shift) operators in the exponents (s, ν).
//!
//! The ring is ℚ(s,ν)⟨σ_{s_1}^{±1},…,σ_{ν_n}^{±1}⟩ with the commutation
//! rule σ·g(s,ν) = g(shifted)·σ. Operators are kept in normal form with
//! coefficients on the left of the shift monomials. The annihilator of
//! the Euler integral contains, for every factor and every variable,
//!
//!   1 − σ_{s_i}·f_i(σ_ν)        and
//!   σ_{ν_j}^{-1}·ν_j − Σ_i s_i·σ_{s_i}·(∂f_i/∂x_j)(σ_ν),
//!
//! built by substituting x_j ↦ σ_{ν_j} into the factors. For the beta
//! family the full contiguity reduction is closed-form through
//! Pochhammer symbols.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::integrate::evaluate;
use crate::laurent::LaurentRat;
use crate::params::{param_names, param_var, ParamPoly, ParamRat};
use crate::spec::IntegralSpec;

/// A difference operator Σ g_{a,b}(s,ν) σ_s^a σ_ν^b in normal form
/// (coefficients left of the shifts).
#[derive(Debug, Clone)]
pub struct ShiftOperator {
    pub l: usize,
    pub n: usize,
    /// shift vector (length ℓ+n, s block first) → coefficient
    pub terms: BTreeMap<Vec<i64>, ParamRat>,
}

impl ShiftOperator {
    pub fn zero(l: usize, n: usize) -> ShiftOperator {
        ShiftOperator { l, n, terms: BTreeMap::new() }
    }

    pub fn nparams(&self) -> usize {
        self.l + self.n
    }

    pub fn identity(l: usize, n: usize) -> ShiftOperator {
        ShiftOperator::coefficient(l, n, ParamRat::constant(l + n, BigRational::one()))
    }

    /// A pure multiplication operator g(s,ν).
    pub fn coefficient(l: usize, n: usize, g: ParamRat) -> ShiftOperator {
        let mut op = ShiftOperator::zero(l, n);
        op.add_term(vec![0; l + n], g);
        op
    }

    /// The monomial g·σ^shift.
    pub fn monomial(l: usize, n: usize, g: ParamRat, shift: Vec<i64>) -> ShiftOperator {
        let mut op = ShiftOperator::zero(l, n);
        op.add_term(shift, g);
        op
    }

    /// σ_{s_i}
    pub fn sigma_s(l: usize, n: usize, i: usize, power: i64) -> ShiftOperator {
        let mut shift = vec![0i64; l + n];
        shift[i] = power;
        ShiftOperator::monomial(l, n, ParamRat::constant(l + n, BigRational::one()), shift)
    }

    /// σ_{ν_j}
    pub fn sigma_nu(l: usize, n: usize, j: usize, power: i64) -> ShiftOperator {
        let mut shift = vec![0i64; l + n];
        shift[l + j] = power;
        ShiftOperator::monomial(l, n, ParamRat::constant(l + n, BigRational::one()), shift)
    }

    pub fn add_term(&mut self, shift: Vec<i64>, g: ParamRat) {
        assert_eq!(shift.len(), self.nparams());
        if g.is_zero_fn() {
            return;
        }
        match self.terms.remove(&shift) {
            None => {
                self.terms.insert(shift, g);
            }
            Some(old) => {
                let sum = old.add(&g);
                if !sum.is_zero_fn() {
                    self.terms.insert(shift, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &ShiftOperator) -> ShiftOperator {
        let mut out = self.clone();
        for (shift, g) in &other.terms {
            out.add_term(shift.clone(), g.clone());
        }
        out
    }

    pub fn neg(&self) -> ShiftOperator {
        ShiftOperator {
            l: self.l,
            n: self.n,
            terms: self.terms.iter().map(|(a, g)| (a.clone(), g.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &ShiftOperator) -> ShiftOperator {
        self.add(&other.neg())
    }

    /// Product with the commutation rule: (g σ^a)(h σ^b) = g·h(·+a) σ^{a+b}.
    pub fn mul(&self, other: &ShiftOperator) -> ShiftOperator {
        let mut out = ShiftOperator::zero(self.l, self.n);
        for (a, g) in &self.terms {
            for (b, h) in &other.terms {
                let shifted = h.shift_all(a);
                let coeff = g.mul(&shifted);
                let total: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(total, coeff);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = param_names(self.l, self.n);
        let mut parts = Vec::new();
        for (shift, g) in &self.terms {
            let mut sigmas = String::new();
            for (k, &p) in shift.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !sigmas.is_empty() {
                    sigmas.push('*');
                }
                let base = if k < self.l {
                    if self.l == 1 {
                        "sigma_s".to_string()
                    } else {
                        format!("sigma_s[{}]", k + 1)
                    }
                } else if self.n == 1 {
                    "sigma_nu".to_string()
                } else {
                    format!("sigma_nu[{}]", k - self.l + 1)
                };
                if p == 1 {
                    sigmas.push_str(&base);
                } else {
                    sigmas.push_str(&format!("{base}^{p}"));
                }
            }
            let coeff = format!("({})", g.to_text(&names));
            if sigmas.is_empty() {
                parts.push(coeff);
            } else {
                parts.push(format!("{coeff}*{sigmas}"));
            }
        }
        parts.join(" + ")
    }
}

impl PartialEq for ShiftOperator {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

/// Substitute x_j -> σ_{ν_j} in a polynomial with rational coefficients,
/// producing the shift operator Σ c_α σ_ν^α.
pub fn poly_of_sigma_nu(l: usize, n: usize, f: &LaurentRat) -> ShiftOperator {
    let mut op = ShiftOperator::zero(l, n);
    for (e, c) in f.terms() {
        let mut shift = vec![0i64; l + n];
        for (j, &k) in e.0.iter().enumerate() {
            shift[l + j] = k;
        }
        op.add_term(shift, ParamRat::constant(l + n, c.clone()));
    }
    op
}

/// The ℓ+n annihilator generators of the Euler integral.
pub fn annihilator_generators(spec: &IntegralSpec) -> Vec<ShiftOperator> {
    let l = spec.nfactors();
    let n = spec.nvars();
    let mut out = Vec::with_capacity(l + n);
    // 1 − σ_{s_i} f_i(σ_ν)
    for (i, f) in spec.polys.iter().enumerate() {
        let f_sigma = poly_of_sigma_nu(l, n, f);
        let op = ShiftOperator::identity(l, n)
            .sub(&ShiftOperator::sigma_s(l, n, i, 1).mul(&f_sigma));
        out.push(op);
    }
    // σ_{ν_j}^{-1} ν_j − Σ_i s_i σ_{s_i} (∂f_i/∂x_j)(σ_ν)
    for j in 0..n {
        let nu_j = ParamRat::from_poly(param_var(l + n, l + j));
        let mut op = ShiftOperator::sigma_nu(l, n, j, -1)
            .mul(&ShiftOperator::coefficient(l, n, nu_j));
        for (i, f) in spec.polys.iter().enumerate() {
            let s_i = ParamRat::from_poly(param_var(l + n, i));
            let df = poly_of_sigma_nu(l, n, &f.partial(j));
            let term = ShiftOperator::coefficient(l, n, s_i)
                .mul(&ShiftOperator::sigma_s(l, n, i, 1))
                .mul(&df);
            op = op.sub(&term);
        }
        out.push(op);
    }
    out
}

// ---------------------------------------------------------------------
// Pochhammer symbols and the beta-family reduction
// ---------------------------------------------------------------------

/// (γ)_a with the negative-index extension:
/// γ(γ+1)⋯(γ+a−1) for a > 0, 1 for a = 0, and
/// (γ−1)^{-1}⋯(γ+a)^{-1} for a < 0.
pub fn pochhammer(gamma: &BigRational, a: i64) -> Result<BigRational> {
    let mut acc = BigRational::one();
    if a > 0 {
        for k in 0..a {
            acc *= gamma + BigRational::from_integer(BigInt::from(k));
        }
    } else {
        for k in 1..=(-a) {
            let factor = gamma - BigRational::from_integer(BigInt::from(k));
            if factor.is_zero() {
                return Err(Error::SingularParameter(format!(
                    "Pochhammer ({gamma})_{a} hits a zero factor"
                )));
            }
            acc /= factor;
        }
    }
    Ok(acc)
}

/// Symbolic Pochhammer of a degree-one parameter polynomial.
pub fn pochhammer_symbolic(base: &ParamPoly, a: i64) -> ParamRat {
    let nparams = base.nvars();
    let one = ParamPoly::constant(nparams, BigRational::one());
    let mut num = ParamPoly::constant(nparams, BigRational::one());
    let mut den = ParamPoly::constant(nparams, BigRational::one());
    if a > 0 {
        for k in 0..a {
            let mut f = base.clone();
            f = f.add(&one.scale(&BigRational::from_integer(BigInt::from(k))));
            num = num.mul(&f);
        }
    } else {
        for k in 1..=(-a) {
            let mut f = base.clone();
            f = f.sub(&one.scale(&BigRational::from_integer(BigInt::from(k))));
            den = den.mul(&f);
        }
    }
    ParamRat::new(num, den)
}

/// The reduction coefficient c^{a,b} = (1−s)_{−a}(ν)_b/(1+ν−s)_{b−a}
/// of x^{ν+b}(1−x)^{-(s+a)} dx/x to the master form, symbolically in
/// (s, ν) with ℓ = n = 1.
pub fn beta_reduction_symbolic(a: i64, b: i64) -> ParamRat {
    let nparams = 2;
    let s = param_var(nparams, 0);
    let nu = param_var(nparams, 1);
    let one = ParamPoly::constant(nparams, BigRational::one());
    let one_minus_s = one.sub(&s);
    let one_plus_nu_minus_s = one.add(&nu).sub(&s);
    pochhammer_symbolic(&one_minus_s, -a)
        .mul(&pochhammer_symbolic(&nu, b))
        .div(&pochhammer_symbolic(&one_plus_nu_minus_s, b - a))
}

/// c^{a,b} evaluated at rational (s, ν).
pub fn beta_reduction(a: i64, b: i64, s: &BigRational, nu: &BigRational) -> Result<BigRational> {
    let sym = beta_reduction_symbolic(a, b);
    sym.eval(&[s.clone(), nu.clone()]).ok_or_else(|| {
        Error::SingularParameter(format!("beta reduction c^{{{a},{b}}} has a pole at ({s}, {nu})"))
    })
}

// ---------------------------------------------------------------------
// numeric verification
// ---------------------------------------------------------------------

/// Result of numerically applying a shift operator to the integral.
#[derive(Debug, Clone)]
pub struct ShiftVerification {
    /// per term: shift vector, coefficient value, integral estimate,
    /// standard error
    pub terms: Vec<TermEstimate>,
    pub total: num_complex::Complex64,
    pub propagated_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct TermEstimate {
    pub shift: Vec<i64>,
    pub coefficient: num_complex::Complex64,
    pub estimate: num_complex::Complex64,
    pub std_error: (f64, f64),
}

/// Evaluate Σ g_{a,b}(s,ν) · I(s+a, ν+b) by quadrature. Every shifted
/// point must lie in the convergence domain; the check passes when the
/// total is below 10× the propagated Monte-Carlo error.
pub fn verify_shift(
    spec: &IntegralSpec,
    op: &ShiftOperator,
    samples: usize,
    seed: u64,
) -> Result<ShiftVerification> {
    spec.require_positive_mode()?;
    if op.is_zero() {
        return Ok(ShiftVerification {
            terms: vec![],
            total: num_complex::Complex64::new(0.0, 0.0),
            propagated_error: 0.0,
            pass: true,
        });
    }
    let l = spec.nfactors();
    let param_point: Vec<num_complex::Complex64> = spec
        .s
        .iter()
        .chain(spec.nu.iter())
        .map(|x| x.to_complex())
        .collect();

    let mut terms = Vec::new();
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    let mut var = 0.0_f64;
    for (idx, (shift, g)) in op.terms.iter().enumerate() {
        let shifted = spec.shifted(&shift[..l], &shift[l..]);
        let report = crate::convergence::check_convergence(&shifted)?;
        if !report.converges {
            return Err(Error::Precondition(format!(
                "shifted point s+{:?}, ν+{:?} lies outside the convergence domain",
                &shift[..l],
                &shift[l..]
            )));
        }
        let coeff = g.eval_complex(&param_point);
        let quad = evaluate(&shifted, samples, crate::rng::derive_seed(seed, &[idx as u64]))?;
        total += coeff * quad.estimate;
        let term_err = coeff.norm()
            * (quad.std_error.0 * quad.std_error.0 + quad.std_error.1 * quad.std_error.1).sqrt();
        var += term_err * term_err;
        terms.push(TermEstimate {
            shift: shift.clone(),
            coefficient: coeff,
            estimate: quad.estimate,
            std_error: quad.std_error,
        });
    }
    let propagated_error = var.sqrt();
    let pass = total.norm() <= 10.0 * propagated_error;
    Ok(ShiftVerification { terms, total, propagated_error, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::parse;
    use crate::spec::Scalar;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn beta_minus_spec() -> IntegralSpec {
        // f = 1 - x in the unit-interval chart
        let vars = vec!["x".to_string()];
        IntegralSpec::new(
            vars.clone(),
            vec![parse("1-x", &vars).unwrap()],
            vec![Scalar::from_ratio(1, 2)],
            vec![Scalar::from_ratio(1, 3)],
        )
        .unwrap()
    }

    #[test]
    fn beta_annihilators_match_known_form() {
        let gens = annihilator_generators(&beta_minus_spec());
        assert_eq!(gens.len(), 2);
        // S1 = 1 - σ_s (1 - σ_ν) = 1 - σ_s + σ_s σ_ν
        assert_eq!(gens[0].to_text(), "(1) + (-1)*sigma_s + (1)*sigma_s*sigma_nu");
        // σ_ν^{-1} ν - s σ_s ∂f/∂x(σ_ν) = (ν-1)σ_ν^{-1} + s σ_s
        assert_eq!(gens[1].to_text(), "(-1 + nu)*sigma_nu^-1 + (s)*sigma_s");
    }

    #[test]
    fn constant_factor_annihilator() {
        // f = 3: (J1) gives 1 - 3 σ_s
        let vars = vec!["x".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("3", &vars).unwrap()],
            vec![Scalar::from_int(1)],
            vec![Scalar::from_int(1)],
        )
        .unwrap();
        let gens = annihilator_generators(&spec);
        assert_eq!(gens[0].to_text(), "(1) + (-3)*sigma_s");
    }

    #[test]
    fn m05_annihilator_count() {
        let spec = IntegralSpec::new(
            vec!["x1".into(), "x2".into()],
            crate::laurent::m05_factors(),
            vec![Scalar::from_int(1); 3],
            vec![Scalar::from_int(1); 2],
        )
        .unwrap();
        let gens = annihilator_generators(&spec);
        assert_eq!(gens.len(), 5);
        // audit the (J2) generator for j = 1 against the hand-built
        // substitution: σ_ν1^{-1}ν1 − s1σ_s1·1 − s2σ_s2·1 − s3σ_s3·1
        // (all three ∂f_i/∂x1 equal 1)
        let l = 3;
        let n = 2;
        let expect = {
            let nu1 = ParamRat::from_poly(param_var(l + n, l));
            let mut op = ShiftOperator::sigma_nu(l, n, 0, -1)
                .mul(&ShiftOperator::coefficient(l, n, nu1));
            for i in 0..3 {
                let si = ParamRat::from_poly(param_var(l + n, i));
                op = op.sub(
                    &ShiftOperator::coefficient(l, n, si).mul(&ShiftOperator::sigma_s(l, n, i, 1)),
                );
            }
            op
        };
        assert_eq!(gens[3], expect);
    }

    #[test]
    fn non_commutation_rule() {
        // σ·g − g·σ = (g(shifted) − g)·σ for every generator
        let l = 1;
        let n = 1;
        let g = ParamRat::new(
            param_var(2, 0).mul(&param_var(2, 1)),
            param_var(2, 1).add(&ParamPoly::constant(2, rat(3))),
        );
        let g_op = ShiftOperator::coefficient(l, n, g.clone());
        for (sigma, shift) in [
            (ShiftOperator::sigma_s(l, n, 0, 1), vec![1i64, 0]),
            (ShiftOperator::sigma_s(l, n, 0, -1), vec![-1, 0]),
            (ShiftOperator::sigma_nu(l, n, 0, 1), vec![0, 1]),
            (ShiftOperator::sigma_nu(l, n, 0, -1), vec![0, -1]),
        ] {
            let lhs = sigma.mul(&g_op).sub(&g_op.mul(&sigma));
            let expect = ShiftOperator::monomial(l, n, g.shift_all(&shift).sub(&g), shift);
            assert_eq!(lhs, expect);
        }
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(&rat(5), 0).unwrap(), rat(1));
        assert_eq!(pochhammer(&rat(3), 2).unwrap(), rat(12));
        // oracle: (γ)_{-1}(γ-1)_1 = 1, so (3)_{-1} = 1/2
        assert_eq!(pochhammer(&rat(3), -1).unwrap(), ratio(1, 2));
        assert!(pochhammer(&rat(1), -1).is_err());
    }

    #[test]
    fn pochhammer_cocycle() {
        // (γ)_a (γ+a)_b = (γ)_{a+b}
        let gammas = [ratio(7, 3), ratio(-5, 2), rat(4), ratio(13, 11)];
        for g in &gammas {
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    let lhs = pochhammer(g, a).and_then(|x| {
                        let ga = g + BigRational::from_integer(BigInt::from(a));
                        Ok(x * pochhammer(&ga, b)?)
                    });
                    let rhs = pochhammer(g, a + b);
                    if let (Ok(l), Ok(r)) = (lhs, rhs) {
                        assert_eq!(l, r, "γ={g} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn beta_reduction_examples() {
        // a=1, b=1: -ν/s
        let c11 = beta_reduction_symbolic(1, 1);
        let expect = ParamRat::new(param_var(2, 1).neg(), param_var(2, 0));
        assert_eq!(c11, expect);
        // a=0, b=0: 1
        assert!(beta_reduction_symbolic(0, 0).is_one());
        // numeric at (s, ν) = (1/2, 1/3)
        let v = beta_reduction(1, 1, &ratio(1, 2), &ratio(1, 3)).unwrap();
        assert_eq!(v, ratio(-2, 3));
    }

    #[test]
    fn contiguity_walk_oracle() {
        // walk the one-step relations in random interleavings; the
        // accumulated coefficient must match c^{a,b} independent of the
        // step order
        let step_nu = |s: &BigRational, nu: &BigRational| {
            // σ_ν • [dx/x] = ν/(1+ν−s) • [dx/x]
            nu.clone() / (BigRational::one() + nu - s)
        };
        let step_nu_inv = |s: &BigRational, nu: &BigRational| {
            // inverse of the ν-step at ν-1
            let num = BigRational::one() + (nu - BigRational::one()) - s;
            num / (nu - BigRational::one())
        };
        let step_s = |s: &BigRational, nu: &BigRational| {
            // σ_s • [dx/x] = (s−ν)/s • [dx/x]
            (s - nu) / s.clone()
        };
        let step_s_inv = |s: &BigRational, nu: &BigRational| {
            // σ_s^{-1} • [dx/x] = (1−s)/(1+ν−s) • [dx/x]
            (BigRational::one() - s) / (BigRational::one() + nu - s)
        };

        let s0 = ratio(1, 2);
        let nu0 = ratio(1, 3);
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                let expect = beta_reduction(a, b, &s0, &nu0).unwrap();
                // several interleavings driven by a counter pattern
                for pattern in 0..4u32 {
                    let mut s = s0.clone();
                    let mut nu = nu0.clone();
                    let mut coeff = BigRational::one();
                    let mut remaining_a = a;
                    let mut remaining_b = b;
                    let mut toggle = pattern;
                    while remaining_a != 0 || remaining_b != 0 {
                        let do_s = if remaining_a == 0 {
                            false
                        } else if remaining_b == 0 {
                            true
                        } else {
                            toggle % 2 == 0
                        };
                        toggle = toggle.rotate_right(1) ^ 0b11;
                        if do_s {
                            if remaining_a > 0 {
                                coeff *= step_s(&s, &nu);
                                s += BigRational::one();
                                remaining_a -= 1;
                            } else {
                                coeff *= step_s_inv(&s, &nu);
                                s -= BigRational::one();
                                remaining_a += 1;
                            }
                        } else if remaining_b > 0 {
                            coeff *= step_nu(&s, &nu);
                            nu += BigRational::one();
                            remaining_b -= 1;
                        } else {
                            coeff *= step_nu_inv(&s, &nu);
                            nu -= BigRational::one();
                            remaining_b += 1;
                        }
                    }
                    assert_eq!(coeff, expect, "a={a} b={b} pattern={pattern}");
                }
            }
        }
    }

    #[test]
    fn verify_shift_on_plus_chart_beta() {
        // f = 1 + y: both annihilator families hold numerically
        let vars = vec!["y".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1+y", &vars).unwrap()],
            vec![Scalar::from_int(3)],
            vec![Scalar::from_ratio(3, 2)],
        )
        .unwrap();
        for op in annihilator_generators(&spec) {
            let report = verify_shift(&spec, &op, 120_000, 11).unwrap();
            assert!(
                report.pass,
                "operator {} total {} err {}",
                op.to_text(),
                report.total,
                report.propagated_error
            );
        }
    }

    #[test]
    fn verify_shift_refuses_nonconvergent_points() {
        // at ν = 1/2 the σ_ν^{-1} term needs I(s, ν−1) with ν−1 < 0
        let vars = vec!["y".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1+y", &vars).unwrap()],
            vec![Scalar::from_int(3)],
            vec![Scalar::from_ratio(1, 2)],
        )
        .unwrap();
        let gens = annihilator_generators(&spec);
        assert!(verify_shift(&spec, &gens[1], 1000, 0).is_err());
    }

    #[test]
    fn zero_operator_passes() {
        let spec = IntegralSpec::new(
            vec!["y".to_string()],
            vec![parse("1+y", &["y".to_string()]).unwrap()],
            vec![Scalar::from_int(3)],
            vec![Scalar::from_int(1)],
        )
        .unwrap();
        let zero = ShiftOperator::zero(1, 1);
        assert!(verify_shift(&spec, &zero, 10, 0).unwrap().pass);
    }
}
