//! Absolute-convergence decision for the Euler–Mellin integral and the
//! Γ-factor skeleton of its meromorphic continuation.
//!
//! The integral over the positive orthant converges absolutely iff
//! Re(s_i) > 0 for all i, the Minkowski sum of the Newton polytopes is
//! full-dimensional, and Re(ν) lies strictly inside
//! P(s) = Σ Re(s_i)·Δ(f_i). The facets of P(s) have s-independent data
//! (r_k, w_k) with `r_k·p >= w_k·s`, read off from the facet normals of
//! the Cayley cone of the supports; each facet contributes a factor
//! Γ(r_k·ν − w_k·s) to the meromorphic continuation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{rat_to_f64, LaurentRat};
use crate::polytope::linalg::{rank, rat, sub, Vecr};
use crate::polytope::{cone_facets, newton_polytope, weighted_sum, Polytope};
use crate::spec::{IntegralSpec, Scalar};

/// One factor Γ(r·ν − w·s) of the continuation skeleton; equivalently
/// the parametric facet `r·p >= w·s` of P(s).
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactor {
    pub r: Vec<BigInt>,
    pub w: Vec<BigRational>,
}

impl GammaFactor {
    /// Value r·Re(ν) − w·Re(s) at exact rational exponents.
    pub fn margin_rational(&self, s: &[BigRational], nu: &[BigRational]) -> BigRational {
        let rnu: BigRational = self
            .r
            .iter()
            .zip(nu)
            .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
            .sum();
        let ws: BigRational = self.w.iter().zip(s).map(|(a, b)| a * b).sum();
        rnu - ws
    }

    pub fn margin_f64(&self, s_re: &[f64], nu_re: &[f64]) -> f64 {
        let rnu: f64 = self
            .r
            .iter()
            .zip(nu_re)
            .map(|(a, b)| rat_to_f64(&BigRational::from_integer(a.clone())) * b)
            .sum();
        let ws: f64 = self.w.iter().zip(s_re).map(|(a, b)| rat_to_f64(a) * b).sum();
        rnu - ws
    }

    /// Text form `Gamma(...)` of the linear argument in ν and s.
    pub fn display(&self) -> String {
        let nvars = self.r.len();
        let l = self.w.len();
        let mut parts: Vec<String> = Vec::new();
        let name = |base: &str, idx: usize, count: usize| {
            if count == 1 {
                base.to_string()
            } else {
                format!("{base}{}", idx + 1)
            }
        };
        for (j, c) in self.r.iter().enumerate() {
            push_linear_term(&mut parts, &BigRational::from_integer(c.clone()), &name("nu", j, nvars));
        }
        for (i, c) in self.w.iter().enumerate() {
            push_linear_term(&mut parts, &-c.clone(), &name("s", i, l));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        format!("Gamma({})", parts.join(" ").trim_start_matches("+ "))
    }
}

fn push_linear_term(parts: &mut Vec<String>, c: &BigRational, name: &str) {
    if c.is_zero() {
        return;
    }
    let mag = c.abs();
    let body = if mag == rat(1) {
        name.to_string()
    } else if mag.is_integer() {
        format!("{}*{}", mag.numer(), name)
    } else {
        format!("{}/{}*{}", mag.numer(), mag.denom(), name)
    };
    if c.is_negative() {
        parts.push(format!("- {body}"));
    } else {
        parts.push(format!("+ {body}"));
    }
}

/// The Γ-factor skeleton: the irredundant parametric H-representation
/// of P(s). The entire prefactor of the continuation is not computed.
#[derive(Debug, Clone)]
pub struct GammaSkeleton {
    pub factors: Vec<GammaFactor>,
}

impl GammaSkeleton {
    pub fn display(&self) -> String {
        self.factors.iter().map(GammaFactor::display).collect::<Vec<_>>().join(" * ")
    }
}

/// Why a spec was declared non-convergent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ReasonCode {
    /// Re(s_i) <= 0 at this factor index.
    NonPositiveS(usize),
    /// The Minkowski sum of Newton polytopes has the given dimension < n.
    DegenerateSum { dim: usize, ambient: usize },
    /// Re(ν) violates at least one facet strictly.
    OutsideInterior,
    /// Re(ν) lies on the boundary of P(s).
    Boundary,
}

/// A violated (or boundary) facet: r·Re(ν) <= w·Re(s).
#[derive(Debug, Clone)]
pub struct ViolatedFacet {
    pub factor: GammaFactor,
    pub boundary: bool,
}

/// Result of the convergence decision.
///
/// In positive-coefficient mode the decision is exact: `converges =
/// false` means divergent, not merely "outside the guaranteed domain".
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub converges: bool,
    pub reasons: Vec<ReasonCode>,
    /// P(s), exact; present when all Re(s_i) are rational and the sum is
    /// full-dimensional.
    pub polytope: Option<Polytope>,
    pub skeleton: Option<GammaSkeleton>,
    pub violated: Vec<ViolatedFacet>,
    /// Whether the decision used exact rational arithmetic or the float
    /// fallback with tolerance 1e-9.
    pub exact: bool,
}

/// Tolerance of the float fallback for irrational exponents.
pub const FACET_TOL: f64 = 1e-9;

/// Dimension of Δ(f_1) + ... + Δ(f_ℓ), computed from the supports.
pub fn minkowski_dim(polys: &[LaurentRat]) -> usize {
    let mut rows: Vec<Vecr> = Vec::new();
    for f in polys {
        let sup = f.support();
        if sup.is_empty() {
            continue;
        }
        let base: Vecr = sup[0].iter().map(|&e| rat(e)).collect();
        for alpha in &sup[1..] {
            let v: Vecr = alpha.iter().map(|&e| rat(e)).collect();
            rows.push(sub(&v, &base));
        }
    }
    rank(&rows)
}

/// The s-independent facet data of P(s), from the Cayley cone of the
/// supports.
pub fn gamma_skeleton(polys: &[LaurentRat]) -> Result<GammaSkeleton> {
    if polys.is_empty() {
        return Err(Error::Precondition("need at least one factor".into()));
    }
    let n = polys[0].nvars();
    let l = polys.len();
    let dim = minkowski_dim(polys);
    if dim < n {
        return Err(Error::Degenerate(format!(
            "Minkowski sum of Newton polytopes has dimension {dim} < {n}"
        )));
    }

    // Cayley configuration: columns (e_i, alpha) for alpha in supp(f_i)
    let mut gens: Vec<Vecr> = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        for alpha in f.support() {
            let mut col = vec![BigRational::zero(); l + n];
            col[i] = rat(1);
            for (j, &e) in alpha.iter().enumerate() {
                col[l + j] = rat(e);
            }
            gens.push(col);
        }
    }
    let normals = cone_facets(&gens)?;

    let mut factors = Vec::new();
    for normal in normals {
        // normal = (w_tilde, r) with normal·(s,p) >= 0, i.e. r·p >= w·s
        // for w = -w_tilde
        let r_part = &normal[l..];
        if r_part.iter().all(|x| x.is_zero()) {
            continue; // pure-s facet, no constraint on p
        }
        let mut g = BigInt::zero();
        for x in r_part {
            g = num_integer::Integer::gcd(&g, x);
        }
        let r: Vec<BigInt> = r_part.iter().map(|x| x / &g).collect();
        let w: Vec<BigRational> = normal[..l]
            .iter()
            .map(|x| -BigRational::new(x.clone(), g.clone()))
            .collect();
        factors.push(GammaFactor { r, w });
    }
    factors.sort_by(|a, b| (&a.r, &a.w).cmp(&(&b.r, &b.w)));

    let skeleton = GammaSkeleton { factors };
    validate_skeleton(&skeleton, polys)?;
    Ok(skeleton)
}

/// Cross-check: at a few generic positive rational s, the parametric
/// facets must match the geometric facets of Σ s_i Δ(f_i).
fn validate_skeleton(skeleton: &GammaSkeleton, polys: &[LaurentRat]) -> Result<()> {
    let newtons: Result<Vec<Polytope>> = polys.iter().map(newton_polytope).collect();
    let newtons = newtons?;
    let mut state = 0x5eed_cafe_u64;
    for _ in 0..3 {
        let weights: Vec<BigRational> = (0..polys.len())
            .map(|_| {
                state = crate::rng::derive_seed(state, &[1]);
                let num = 1 + (state % 97) as i64;
                let den = 1 + ((state >> 32) % 89) as i64;
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect();
        let p = weighted_sum(&newtons, &weights)?;
        let facets = p.facets()?;
        if facets.len() != skeleton.factors.len() {
            return Err(Error::Numeric(format!(
                "skeleton validation failed: {} parametric facets vs {} geometric",
                skeleton.factors.len(),
                facets.len()
            )));
        }
        for fac in &skeleton.factors {
            let ws: BigRational = fac.w.iter().zip(&weights).map(|(a, b)| a * b).sum();
            let hit = facets.iter().any(|f| f.normal == fac.r && f.offset == ws);
            if !hit {
                return Err(Error::Numeric(
                    "skeleton validation failed: parametric facet not found geometrically".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Decide absolute convergence of the Euler–Mellin integral.
pub fn check_convergence(spec: &IntegralSpec) -> Result<ConvergenceReport> {
    spec.require_positive_mode()?;
    let n = spec.nvars();
    let mut reasons = Vec::new();

    for (i, si) in spec.s.iter().enumerate() {
        let positive = match si {
            Scalar::Rat(r) => r.is_positive(),
            other => other.re_f64() > 0.0,
        };
        if !positive {
            reasons.push(ReasonCode::NonPositiveS(i));
        }
    }

    let dim = minkowski_dim(&spec.polys);
    if dim < n {
        reasons.push(ReasonCode::DegenerateSum { dim, ambient: n });
        return Ok(ConvergenceReport {
            converges: false,
            reasons,
            polytope: None,
            skeleton: None,
            violated: vec![],
            exact: true,
        });
    }

    let skeleton = gamma_skeleton(&spec.polys)?;

    // exact path when the real parts are rational and exactly real
    let exact_data = match (spec.s_rational(), spec.nu_rational()) {
        (Some(s), Some(nu)) => Some((s, nu)),
        _ => None,
    };

    let mut violated = Vec::new();
    let mut boundary = false;
    let exact = exact_data.is_some();
    match &exact_data {
        Some((s, nu)) => {
            for fac in &skeleton.factors {
                let m = fac.margin_rational(s, nu);
                if m.is_zero() {
                    boundary = true;
                    violated.push(ViolatedFacet { factor: fac.clone(), boundary: true });
                } else if m.is_negative() {
                    violated.push(ViolatedFacet { factor: fac.clone(), boundary: false });
                }
            }
        }
        None => {
            let s_re: Vec<f64> = spec.s.iter().map(Scalar::re_f64).collect();
            let nu_re: Vec<f64> = spec.nu.iter().map(Scalar::re_f64).collect();
            for fac in &skeleton.factors {
                let m = fac.margin_f64(&s_re, &nu_re);
                if m.abs() <= FACET_TOL {
                    boundary = true;
                    violated.push(ViolatedFacet { factor: fac.clone(), boundary: true });
                } else if m < 0.0 {
                    violated.push(ViolatedFacet { factor: fac.clone(), boundary: false });
                }
            }
        }
    }

    if violated.iter().any(|v| !v.boundary) {
        reasons.push(ReasonCode::OutsideInterior);
    }
    if boundary {
        reasons.push(ReasonCode::Boundary);
    }

    let polytope = exact_data.as_ref().and_then(|(s, _)| {
        if s.iter().all(|x| x.is_positive()) {
            let newtons: Result<Vec<Polytope>> = spec.polys.iter().map(newton_polytope).collect();
            newtons.ok().and_then(|ns| weighted_sum(&ns, s).ok())
        } else {
            None
        }
    });

    Ok(ConvergenceReport {
        converges: reasons.is_empty(),
        reasons,
        polytope,
        skeleton: Some(skeleton),
        violated,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{m05_factors, parse};

    fn m05_spec(s: [i64; 3], nu: [i64; 2]) -> IntegralSpec {
        IntegralSpec::new(
            vec!["x1".into(), "x2".into()],
            m05_factors(),
            s.iter().map(|&v| Scalar::from_int(v)).collect(),
            nu.iter().map(|&v| Scalar::from_int(v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn pentagon_convergence_decision() {
        let report = check_convergence(&m05_spec([1, 1, 1], [1, 1])).unwrap();
        assert!(report.converges, "reasons: {:?}", report.reasons);
        assert!(report.exact);

        let report2 = check_convergence(&m05_spec([1, 1, 1], [2, 2])).unwrap();
        assert!(!report2.converges);
        assert!(!report2.violated.is_empty());
        assert!(report2.violated.iter().any(|v| !v.boundary));
    }

    #[test]
    fn beta_boundary_point() {
        let vars = vec!["y".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1+y", &vars).unwrap()],
            vec![Scalar::from_int(1)],
            vec![Scalar::from_int(0)],
        )
        .unwrap();
        let report = check_convergence(&spec).unwrap();
        assert!(!report.converges);
        assert!(report.reasons.contains(&ReasonCode::Boundary));
    }

    #[test]
    fn beta_gamma_skeleton() {
        let vars = vec!["y".to_string()];
        let f = parse("1+y", &vars).unwrap();
        let skel = gamma_skeleton(&[f]).unwrap();
        assert_eq!(skel.factors.len(), 2);
        // (r, w) = (1, 0) and (-1, -1)
        let mut pairs: Vec<(i64, i64)> = skel
            .factors
            .iter()
            .map(|f| {
                let r: i64 = (&f.r[0]).try_into().unwrap();
                let w = f.w[0].numer().try_into().unwrap();
                assert!(f.w[0].is_integer());
                (r, w)
            })
            .collect();
        pairs.sort();
        assert_eq!(pairs, vec![(-1, -1), (1, 0)]);
        let text = skel.display();
        assert!(text.contains("Gamma(nu)"), "got {text}");
        assert!(text.contains("Gamma(- nu + s)"), "got {text}");
    }

    #[test]
    fn pentagon_skeleton_has_five_factors() {
        let skel = gamma_skeleton(&m05_factors()).unwrap();
        assert_eq!(skel.factors.len(), 5);
    }

    #[test]
    fn single_monomial_is_degenerate() {
        let vars = vec!["x".to_string()];
        let f = parse("x", &vars).unwrap();
        assert!(matches!(gamma_skeleton(&[f]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn scaling_invariance_of_membership() {
        // membership Re(nu) in int P(s) is invariant under
        // (s, nu) -> (λ s, λ nu)
        for (nu, expect) in [([1i64, 1i64], true), ([2, 2], false)] {
            for lambda in [1i64, 3, 7] {
                let spec = m05_spec(
                    [lambda, lambda, lambda],
                    [nu[0] * lambda, nu[1] * lambda],
                );
                let report = check_convergence(&spec).unwrap();
                assert_eq!(report.converges, expect, "lambda={lambda} nu={nu:?}");
            }
        }
    }

    #[test]
    fn float_fallback_agrees_with_exact() {
        let exact = check_convergence(&m05_spec([1, 1, 1], [1, 1])).unwrap();
        let vars = vec!["x1".to_string(), "x2".to_string()];
        let spec = IntegralSpec::new(
            vars,
            m05_factors(),
            vec![Scalar::F64(1.0); 3],
            vec![Scalar::F64(1.0); 2],
        )
        .unwrap();
        let float = check_convergence(&spec).unwrap();
        assert!(!float.exact);
        assert_eq!(exact.converges, float.converges);
    }
}
