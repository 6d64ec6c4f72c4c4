//! Critical points of the log-likelihood log L = log(f^{-s} x^ν).
//!
//! The critical equations are the n rational-function equations
//!
//!   g_j = ν_j/x_j − Σ_i s_i (∂f_i/∂x_j)/f_i = 0,
//!
//! considered on the complement X of {x_1⋯x_n f_1⋯f_ℓ = 0}. For generic
//! (s, ν) the number of solutions equals the signed Euler characteristic
//! (−1)^n χ(X). All complex solutions are found by clearing denominators
//! and running a total-degree homotopy; the excess roots that land on
//! the cleared locus are filtered out by re-checking the rational
//! residuals in extended precision. The unique positive critical point
//! (for real positive s and interior ν) is found separately by damped
//! Newton iteration on the strictly concave function z ↦ log L(e^z).

pub mod homotopy;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::dd::CDD;
use crate::error::{Error, Result};
use crate::laurent::{LaurentC, LaurentRat};
use crate::spec::{IntegralSpec, Scalar};
use homotopy::{track_all, PathOutcome, TrackedSystem};

/// Residual bound certified in double-double precision.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Two endpoints within this max-norm distance are the same point.
pub const DEDUPE_TOL: f64 = 1e-6;
/// Points with |x_j| or |f_i(x)| below this sit on the excluded locus.
pub const EXCLUDED_TOL: f64 = 1e-10;

/// The critical equations of a spec in rational and cleared form.
pub struct CriticalSystem {
    pub nvars: usize,
    /// ∂f_i/∂x_j, exact
    pub partials: Vec<Vec<LaurentRat>>,
    /// the denominator-free system p_j = x_j·(Π_i f_i)·g_j, with
    /// exponents shifted to be non-negative
    pub cleared: Vec<LaurentC>,
    /// true when every g_j vanishes identically (s = ν = 0)
    pub degenerate: bool,
    factors: Vec<LaurentC>,
    s: Vec<Complex64>,
    nu: Vec<Complex64>,
}

/// Build the critical system at the spec's exponent values.
pub fn critical_system(spec: &IntegralSpec) -> CriticalSystem {
    let n = spec.nvars();
    let l = spec.nfactors();
    let s = spec.s_complex();
    let nu = spec.nu_complex();
    let factors: Vec<LaurentC> = spec.polys.iter().map(|f| f.to_complex()).collect();
    let partials: Vec<Vec<LaurentRat>> =
        spec.polys.iter().map(|f| (0..n).map(|j| f.partial(j)).collect()).collect();

    // cleared form: p_j = ν_j Π f_i − Σ_i s_i (θ_j f_i) Π_{k≠i} f_k
    let prod_all = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.mul(f));
    let mut cleared = Vec::with_capacity(n);
    for j in 0..n {
        let mut p = prod_all.scale(&nu[j]);
        for i in 0..l {
            let theta: LaurentC = spec.polys[i].toric_partial(j).to_complex();
            let mut prod_rest = theta;
            for (k, f) in factors.iter().enumerate() {
                if k != i {
                    prod_rest = prod_rest.mul(f);
                }
            }
            p = p.add(&prod_rest.scale(&-s[i]));
        }
        cleared.push(shift_nonnegative(&p));
    }
    let degenerate = cleared.iter().all(|p| p.is_zero());
    CriticalSystem { nvars: n, partials, cleared, degenerate, factors, s, nu }
}

/// Multiply by a monomial so that every exponent is non-negative;
/// roots in the torus are unchanged.
fn shift_nonnegative(p: &LaurentC) -> LaurentC {
    let n = p.nvars();
    let mut min_exp = vec![0i64; n];
    for (e, _) in p.terms() {
        for (j, &k) in e.0.iter().enumerate() {
            min_exp[j] = min_exp[j].min(k);
        }
    }
    if min_exp.iter().all(|&k| k == 0) {
        return p.clone();
    }
    let mut out = LaurentC::zero(n);
    for (e, c) in p.terms() {
        let exp: Vec<i64> = e.0.iter().zip(&min_exp).map(|(k, m)| k - m).collect();
        out.add_term(&exp, *c);
    }
    out
}

impl CriticalSystem {
    /// max_j |g_j(x)| evaluated in double-double precision.
    pub fn residual_dd(&self, x: &[Complex64]) -> Result<f64> {
        let xd: Vec<CDD> = x.iter().map(|&z| CDD::from_c64(z)).collect();
        let mut worst = 0.0_f64;
        for j in 0..self.nvars {
            let mut g = CDD::from_c64(self.nu[j]).div(xd[j]);
            for i in 0..self.factors.len() {
                let fi = self.factors[i].eval_dd(&xd)?;
                let dfi = self.partials[i][j].to_complex().eval_dd(&xd)?;
                g = g.sub(CDD::from_c64(self.s[i]).mul(dfi).div(fi));
            }
            worst = worst.max(g.norm_f64());
        }
        Ok(worst)
    }

    /// Distance to the excluded locus: min over |x_j| and |f_i(x)|.
    pub fn locus_margin(&self, x: &[Complex64]) -> f64 {
        let mut m = x.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        for f in &self.factors {
            if let Ok(v) = f.eval(x) {
                m = m.min(v.norm());
            }
        }
        m
    }
}

/// A certified set of critical points.
#[derive(Debug, Clone)]
pub struct CriticalPointSet {
    pub points: Vec<Vec<Complex64>>,
    /// max_j |g_j| per point, from the double-double check
    pub residuals: Vec<f64>,
    /// H_{-log L} = det(−M) per point
    pub hessians: Vec<Complex64>,
    pub count: usize,
    pub path_failures: usize,
    pub warnings: Vec<String>,
}

/// All isolated critical points at the spec's (s, ν), by total-degree
/// homotopy continuation.
pub fn all_critical_points(spec: &IntegralSpec, seed: u64) -> Result<CriticalPointSet> {
    let n = spec.nvars();
    let dim = crate::convergence::minkowski_dim(&spec.polys);
    if dim < n {
        return Err(Error::Degenerate(format!(
            "Minkowski sum of Newton polytopes has dimension {dim} < {n}; \
             the critical locus is not a finite point set"
        )));
    }
    let system = critical_system(spec);
    if system.degenerate {
        return Err(Error::Degenerate(
            "all critical equations vanish identically (s = ν = 0)".into(),
        ));
    }

    let tracked = TrackedSystem::new(&system.cleared);
    // retry a full sweep with a fresh deterministic γ while any path
    // fails; each γ yields a complete homotopy, so only a zero-failure
    // sweep is trusted silently
    let mut report = track_all(&tracked, seed);
    let mut attempt = 0u64;
    while report.failures > 0 && attempt < 3 {
        attempt += 1;
        let retry = homotopy::track_all_attempt(&tracked, seed, attempt);
        if retry.failures < report.failures {
            report = retry;
        }
        if report.failures == 0 {
            break;
        }
    }

    let mut warnings = Vec::new();
    if report.failures > 0 {
        warnings.push(format!(
            "{} of {} paths failed to track after {} γ draw(s)",
            report.failures,
            tracked.bezout_count(),
            attempt + 1
        ));
    }

    // Excess Bézout paths legitimately end on the excluded locus: the
    // cleared system vanishes identically where two factors meet, so
    // those components swallow paths at every parameter value. The
    // non-genericity signal is a *certified* critical point (small
    // rational residual) degenerating onto the locus.
    let mut kept: Vec<(Vec<Complex64>, f64)> = Vec::new();
    let mut critical_near_locus = 0usize;
    let mut stray_singular = 0usize;
    for outcome in &report.outcomes {
        match outcome {
            PathOutcome::Endpoint { x, .. } => {
                let margin = system.locus_margin(x);
                if margin <= EXCLUDED_TOL {
                    continue; // cleared-system artifact on the excluded locus
                }
                let res = system.residual_dd(x)?;
                if res >= RESIDUAL_TOL {
                    continue; // locus debris that did not fully collapse
                }
                if margin < 1e-6 {
                    critical_near_locus += 1;
                    continue;
                }
                let dup = kept.iter().any(|(y, _)| {
                    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) < DEDUPE_TOL
                });
                if !dup {
                    kept.push((x.clone(), res));
                }
            }
            PathOutcome::SingularEndpoint { x, .. } => {
                // singular endpoints on the locus are the expected
                // positive-dimensional components; off-locus ones are
                // suspicious and reported as a warning below
                if system.locus_margin(x) > 1e-4 {
                    stray_singular += 1;
                }
            }
            _ => {}
        }
    }

    if critical_near_locus > 0 {
        return Err(Error::Numeric(format!(
            "{critical_near_locus} certified critical point(s) sit on the boundary of the \
             excluded locus; (s, ν) appears non-generic — perturb the parameters and retry"
        )));
    }
    if stray_singular > 0 {
        warnings.push(format!(
            "{stray_singular} singular endpoint(s) off the excluded locus; \
             counts may be unreliable"
        ));
    }

    let mut points = Vec::new();
    let mut residuals = Vec::new();
    let mut hessians = Vec::new();
    for (x, res) in kept {
        let (_, _, h_neg) = toric_hessian(spec, &x)?;
        points.push(x);
        residuals.push(res);
        hessians.push(h_neg);
    }
    let count = points.len();
    Ok(CriticalPointSet { points, residuals, hessians, count, path_failures: report.failures, warnings })
}

/// Toric Hessian matrix M_{jk} = x_j ∂_j (x_k ∂_k log L) at x, its
/// determinant, and H_{−log L} = det(−M).
pub fn toric_hessian(
    spec: &IntegralSpec,
    x: &[Complex64],
) -> Result<(nalgebra::DMatrix<Complex64>, Complex64, Complex64)> {
    let n = spec.nvars();
    let s = spec.s_complex();
    let mut m = nalgebra::DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (i, f) in spec.polys.iter().enumerate() {
        let fc = f.to_complex();
        let fv = fc.eval(x)?;
        if fv.norm() <= EXCLUDED_TOL {
            return Err(Error::Precondition(
                "toric Hessian evaluated on the excluded locus (f_i(x) ≈ 0)".into(),
            ));
        }
        let thetas: Vec<Complex64> = (0..n)
            .map(|j| f.toric_partial(j).to_complex().eval(x))
            .collect::<Result<_>>()?;
        for j in 0..n {
            for k in j..n {
                let theta2 = f.toric_partial(k).toric_partial(j).to_complex().eval(x)?;
                let val = -s[i] * (theta2 * fv - thetas[j] * thetas[k]) / (fv * fv);
                m[(j, k)] += val;
                if k != j {
                    m[(k, j)] += val;
                }
            }
        }
    }
    for (j, xj) in x.iter().enumerate() {
        if xj.norm() <= EXCLUDED_TOL {
            return Err(Error::Precondition(format!(
                "toric Hessian evaluated on the excluded locus (x_{} ≈ 0)",
                j + 1
            )));
        }
    }
    let det = m.clone().lu().determinant();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok((m, det, det * sign))
}

/// Report from the positive-critical-point solver.
#[derive(Debug, Clone)]
pub struct PositiveCriticalPoint {
    pub point: Vec<f64>,
    /// H_{−log L} at the point (positive under the theorem hypotheses)
    pub hessian: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
}

/// The unique maximizer of log L on the positive orthant, by damped
/// Newton iteration in logarithmic coordinates starting from x = 1.
pub fn positive_critical_point(spec: &IntegralSpec) -> Result<PositiveCriticalPoint> {
    spec.require_positive_mode()?;
    let n = spec.nvars();
    for si in &spec.s {
        if !si.is_real() || si.re_f64() <= 0.0 {
            return Err(Error::Precondition("positive critical point needs real s > 0".into()));
        }
    }
    for nuj in &spec.nu {
        if !nuj.is_real() {
            return Err(Error::Precondition("positive critical point needs real ν".into()));
        }
    }
    if crate::convergence::minkowski_dim(&spec.polys) < n {
        return Err(Error::Degenerate("Minkowski sum of Newton polytopes is lower-dimensional".into()));
    }

    let s: Vec<f64> = spec.s.iter().map(Scalar::re_f64).collect();
    let nu: Vec<f64> = spec.nu.iter().map(Scalar::re_f64).collect();
    let factors: Vec<LaurentC> = spec.polys.iter().map(|f| f.to_complex()).collect();

    let log_l = |z: &[f64]| -> f64 {
        let x: Vec<Complex64> = z.iter().map(|&zj| Complex64::new(zj.exp(), 0.0)).collect();
        let mut acc = 0.0;
        for (i, f) in factors.iter().enumerate() {
            acc -= s[i] * f.eval(&x).unwrap().re.ln();
        }
        acc + nu.iter().zip(z).map(|(a, b)| a * b).sum::<f64>()
    };

    let mut z = vec![0.0_f64; n];
    for iter in 0..200 {
        let x: Vec<Complex64> = z.iter().map(|&zj| Complex64::new(zj.exp(), 0.0)).collect();
        // gradient of log L in z-coordinates: ν_j − Σ_i s_i θ_j f_i / f_i
        let mut grad = vec![0.0_f64; n];
        for j in 0..n {
            grad[j] = nu[j];
        }
        for (i, f) in spec.polys.iter().enumerate() {
            let fv = factors[i].eval(&x).unwrap().re;
            for j in 0..n {
                let th = f.toric_partial(j).to_complex().eval(&x).unwrap().re;
                grad[j] -= s[i] * th / fv;
            }
        }
        let gnorm = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
        if gnorm < 1e-12 {
            let xs: Vec<Complex64> = x.clone();
            let (_, _, h_neg) = toric_hessian(spec, &xs)?;
            return Ok(PositiveCriticalPoint {
                point: x.iter().map(|v| v.re).collect(),
                hessian: h_neg.re,
                gradient_norm: gnorm,
                iterations: iter,
            });
        }

        let (m, _, _) = toric_hessian(spec, &x)?;
        let mr = nalgebra::DMatrix::from_fn(n, n, |a, b| m[(a, b)].re);
        let rhs = nalgebra::DVector::from_iterator(n, grad.iter().map(|&g| -g));
        let Some(delta) = mr.lu().solve(&rhs) else {
            return Err(Error::Numeric("singular toric Hessian in Newton iteration".into()));
        };

        // damped ascent step
        let base = log_l(&z);
        let mut lambda = 1.0_f64;
        let mut accepted = false;
        while lambda > 1e-10 {
            let trial: Vec<f64> = z.iter().zip(delta.iter()).map(|(zj, d)| zj + lambda * d).collect();
            if log_l(&trial) > base - 1e-14 {
                z = trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::Numeric("line search stalled; ν may lie outside int P(s)".into()));
        }
    }
    Err(Error::Numeric(
        "Newton iteration did not converge in 200 steps; ν may lie outside int P(s) \
         or the problem is badly scaled"
            .into(),
    ))
}

/// The algebraic moment map μ(x)_j = x_j Σ_i s_i f_i(x)^{-1} ∂f_i/∂x_j
/// at a positive point.
pub fn moment_map(polys: &[LaurentRat], s: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|&v| v <= 0.0) || s.iter().any(|&v| v <= 0.0) {
        return Err(Error::Precondition("moment map needs strictly positive s and x".into()));
    }
    let n = polys[0].nvars();
    let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut mu = vec![0.0_f64; n];
    for (i, f) in polys.iter().enumerate() {
        let fv = f.to_complex().eval(&xc)?.re;
        for (j, m) in mu.iter_mut().enumerate() {
            let th = f.toric_partial(j).to_complex().eval(&xc)?.re;
            *m += s[i] * th / fv;
        }
    }
    Ok(mu)
}

/// Exact moment map at rational data (for interiority proofs in tests).
pub fn moment_map_rational(
    polys: &[LaurentRat],
    s: &[BigRational],
    x: &[BigRational],
) -> Result<Vec<BigRational>> {
    if x.iter().any(|v| !v.is_positive()) || s.iter().any(|v| !v.is_positive()) {
        return Err(Error::Precondition("moment map needs strictly positive s and x".into()));
    }
    let n = polys[0].nvars();
    let mut mu = vec![BigRational::zero(); n];
    for (i, f) in polys.iter().enumerate() {
        let fv = f.eval_rational(x).ok_or(Error::EvalDivisionByZero { var: 0 })?;
        for (j, m) in mu.iter_mut().enumerate() {
            let th = f
                .toric_partial(j)
                .eval_rational(x)
                .ok_or(Error::EvalDivisionByZero { var: j })?;
            *m += &s[i] * th / fv.clone();
        }
    }
    Ok(mu)
}

/// (−1)^n χ(X) as the stable critical-point count over `trials` random
/// generic rational exponent draws.
pub fn euler_characteristic(polys: &[LaurentRat], trials: usize, seed: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let n = polys[0].nvars();
    let l = polys.len();
    let vars: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    let mut counts = Vec::new();
    for trial in 0..trials {
        let mut rng = crate::rng::stream(seed, &[0xE777, trial as u64]);
        let mut draw = || {
            let num = rng.gen_range(1..=400i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let den = rng.gen_range(1..=97i64);
            Scalar::from_ratio(num, den)
        };
        let s: Vec<Scalar> = (0..l).map(|_| draw()).collect();
        let nu: Vec<Scalar> = (0..n).map(|_| draw()).collect();
        let spec = IntegralSpec::new(vars.clone(), polys.to_vec(), s, nu)?;
        let set = all_critical_points(&spec, crate::rng::derive_seed(seed, &[trial as u64]))?;
        counts.push(set.count);
    }
    if counts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Numeric(format!(
            "critical-point counts disagree across trials: {counts:?}"
        )));
    }
    Ok(counts[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{m05_factors, parse};

    fn beta_spec(s: i64, nu: i64) -> IntegralSpec {
        let vars = vec!["y".to_string()];
        IntegralSpec::new(
            vars.clone(),
            vec![parse("1+y", &vars).unwrap()],
            vec![Scalar::from_int(s)],
            vec![Scalar::from_int(nu)],
        )
        .unwrap()
    }

    fn m05_spec() -> IntegralSpec {
        IntegralSpec::new(
            vec!["x1".into(), "x2".into()],
            m05_factors(),
            vec![Scalar::from_int(1); 3],
            vec![Scalar::from_int(1); 2],
        )
        .unwrap()
    }

    #[test]
    fn beta_cleared_system() {
        // f = 1 - x: g = ν/x + s/(1-x) since ∂f/∂x = -1, so the cleared
        // polynomial is ν(1-x) + s x, with root ν/(ν-s)
        let vars = vec!["x".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1-x", &vars).unwrap()],
            vec![Scalar::from_int(2)],
            vec![Scalar::from_int(1)],
        )
        .unwrap();
        let sys = critical_system(&spec);
        assert!(!sys.degenerate);
        let p = &sys.cleared[0];
        let root = Complex64::new(-1.0, 0.0);
        assert!(p.eval(&[root]).unwrap().norm() < 1e-12);

        // the plus-chart factor 1 + y at the same exponents has the
        // cleared polynomial ν(1+y) - s y with root ν/(s-ν) = 1
        let vars = vec!["y".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1+y", &vars).unwrap()],
            vec![Scalar::from_int(2)],
            vec![Scalar::from_int(1)],
        )
        .unwrap();
        let sys = critical_system(&spec);
        let p = &sys.cleared[0];
        assert!(p.eval(&[Complex64::new(1.0, 0.0)]).unwrap().norm() < 1e-12);
    }

    #[test]
    fn degenerate_zero_parameters() {
        let vars = vec!["x".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1+x", &vars).unwrap()],
            vec![Scalar::from_int(0)],
            vec![Scalar::from_int(0)],
        )
        .unwrap();
        let sys = critical_system(&spec);
        assert!(sys.degenerate);
        assert!(all_critical_points(&spec, 0).is_err());
    }

    #[test]
    fn beta_single_critical_point() {
        // a = ν/(s̃−ν) = 1/2 at (s̃, ν) = (3, 1)
        let spec = beta_spec(3, 1);
        let set = all_critical_points(&spec, 11).unwrap();
        assert_eq!(set.count, 1);
        assert!((set.points[0][0] - Complex64::new(0.5, 0.0)).norm() < 1e-10);
        // H_{-log L} = ν(s̃−ν)/s̃ = 2/3
        assert!((set.hessians[0] - Complex64::new(2.0 / 3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn m05_two_critical_points() {
        let set = all_critical_points(&m05_spec(), 3).unwrap();
        assert_eq!(set.count, 2);
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let psi = (-5.0_f64.sqrt() - 1.0) / 2.0;
        let mut first_coords: Vec<f64> = set.points.iter().map(|p| p[0].re).collect();
        first_coords.sort_by(f64::total_cmp);
        assert!((first_coords[0] - psi).abs() < 1e-8);
        assert!((first_coords[1] - phi).abs() < 1e-8);
        for p in &set.points {
            assert!((p[1] - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        }
        // Hessian values (25 ± 11√5)/2
        let mut hs: Vec<f64> = set.hessians.iter().map(|h| h.re).collect();
        hs.sort_by(f64::total_cmp);
        let lo = (25.0 - 11.0 * 5.0_f64.sqrt()) / 2.0;
        let hi = (25.0 + 11.0 * 5.0_f64.sqrt()) / 2.0;
        assert!((hs[0] - lo).abs() < 1e-8);
        assert!((hs[1] - hi).abs() < 1e-8);
        for r in &set.residuals {
            assert!(*r < RESIDUAL_TOL);
        }
    }

    #[test]
    fn positive_point_beta() {
        let spec = beta_spec(3, 1);
        let p = positive_critical_point(&spec).unwrap();
        assert!((p.point[0] - 0.5).abs() < 1e-12);
        assert!((p.hessian - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn positive_point_m05() {
        let p = positive_critical_point(&m05_spec()).unwrap();
        let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        assert!((p.point[0] - phi).abs() < 1e-9);
        assert!((p.point[1] - 1.0).abs() < 1e-9);
        assert!(p.hessian > 0.0);
    }

    #[test]
    fn positive_point_rejects_outside_nu() {
        let spec = IntegralSpec::new(
            vec!["x1".into(), "x2".into()],
            m05_factors(),
            vec![Scalar::from_int(1); 3],
            vec![Scalar::from_int(2), Scalar::from_int(2)],
        )
        .unwrap();
        assert!(positive_critical_point(&spec).is_err());
    }

    #[test]
    fn beta_toric_hessian_formula() {
        // H_{-log L}(y) = s̃ y/(1+y)^2 at generic points
        let spec = beta_spec(3, 1);
        for y in [0.25, 0.5, 2.0] {
            let x = [Complex64::new(y, 0.0)];
            let (_, _, h_neg) = toric_hessian(&spec, &x).unwrap();
            let expect = 3.0 * y / (1.0 + y) / (1.0 + y);
            assert!((h_neg.re - expect).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn constant_factor_has_zero_hessian() {
        let vars = vec!["x".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1", &vars).unwrap()],
            vec![Scalar::from_int(1)],
            vec![Scalar::from_int(1)],
        )
        .unwrap();
        let (_, det, _) = toric_hessian(&spec, &[Complex64::new(2.0, 0.0)]).unwrap();
        assert!(det.norm() < 1e-15);
    }

    #[test]
    fn moment_map_at_critical_point_returns_nu() {
        // beta: μ(1/2) = 3·(1/2)/(3/2) = 1
        let polys = vec![parse("1+y", &["y".to_string()]).unwrap()];
        let mu = moment_map(&polys, &[3.0], &[0.5]).unwrap();
        assert!((mu[0] - 1.0).abs() < 1e-14);

        // M05 at the positive critical point: μ(a) = (1, 1)
        let p = positive_critical_point(&m05_spec()).unwrap();
        let mu = moment_map(&m05_factors(), &[1.0, 1.0, 1.0], &p.point).unwrap();
        assert!((mu[0] - 1.0).abs() < 1e-6);
        assert!((mu[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn euler_characteristic_m04_m05() {
        let m04 = vec![parse("1+x1", &["x1".to_string()]).unwrap()];
        assert_eq!(euler_characteristic(&m04, 3, 5).unwrap(), 1);
        assert_eq!(euler_characteristic(&m05_factors(), 3, 5).unwrap(), 2);
    }

    #[test]
    fn univariate_endpoints_match_companion_matrix() {
        // oracle: eigenvalues of the companion matrix of the cleared
        // univariate polynomial
        let vars = vec!["y".to_string()];
        let spec = IntegralSpec::new(
            vars.clone(),
            vec![parse("1+y+y^2", &vars).unwrap()],
            vec![Scalar::from_ratio(5, 3)],
            vec![Scalar::from_ratio(2, 7)],
        )
        .unwrap();
        let sys = critical_system(&spec);
        let p = &sys.cleared[0];
        // coefficients c_0..c_d
        let deg = p.terms().map(|(e, _)| e.0[0]).max().unwrap() as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (e, c) in p.terms() {
            coeffs[e.0[0] as usize] = *c;
        }
        // rational (s, ν) and rational f give a real cleared polynomial
        assert!(coeffs.iter().all(|c| c.im.abs() < 1e-14));
        let lead = coeffs[deg].re;
        let mut comp = nalgebra::DMatrix::from_element(deg, deg, 0.0_f64);
        for r in 1..deg {
            comp[(r, r - 1)] = 1.0;
        }
        for r in 0..deg {
            comp[(r, deg - 1)] = -coeffs[r].re / lead;
        }
        let mut eig: Vec<Complex64> = comp.complex_eigenvalues().iter().copied().collect();

        let set = all_critical_points(&spec, 17).unwrap();
        let mut got: Vec<Complex64> = set.points.iter().map(|p| p[0]).collect();
        let key = |z: &Complex64| (z.re, z.im);
        eig.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        // companion roots include excluded-locus artifacts only if f(root)=0;
        // filter those out of the oracle
        let fc = spec.polys[0].to_complex();
        eig.retain(|z| {
            fc.eval(&[*z]).unwrap().norm() > 1e-8 && z.norm() > 1e-8
        });
        assert_eq!(eig.len(), got.len());
        for (a, b) in eig.iter().zip(&got) {
            assert!((a - b).norm() < 1e-8, "oracle {a} vs tracked {b}");
        }
    }
}
