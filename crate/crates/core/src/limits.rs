//! The two physical limits of the δ-rescaled integral
//! I(δ) = δ^{-n} ∫ (f^{-s} x^ν)^{1/δ} dx/x.
//!
//! As δ → ∞ the integral tends to the normalized volume of the polar
//! dual (P(s) − ν)°, which also equals the sum of reciprocal toric
//! Hessians over all complex critical points — two independently
//! computable routes that must agree. As δ → 0⁺ a saddle-point
//! approximation at the unique positive critical point a gives
//! (2πδ)^{-n/2} L(a)^{-1/δ} I(δ) → H_{-log L}(a)^{-1/2}.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::critpoints::{all_critical_points, positive_critical_point, PositiveCriticalPoint};
use crate::error::{Error, Result};
use crate::integrate::{evaluate_idelta, QuadratureResult};
use crate::laurent::rat_to_f64;
use crate::polytope::{newton_polytope, normalized_volume, polar_dual, weighted_sum, Polytope};
use crate::spec::IntegralSpec;

/// Field-theory limit by both routes.
#[derive(Debug, Clone)]
pub struct LimitReport {
    /// Vol((P(s)−ν)°) in the n!-normalized convention (this is the limit)
    pub dual_volume_normalized: BigRational,
    /// the plain Euclidean volume, for cross-checking conventions
    pub dual_volume_euclidean: BigRational,
    /// Σ_{x ∈ Crit} 1/H_{−log L}(x); imaginary part ≈ 0
    pub critical_sum: Complex64,
    /// |normalized volume − Re(critical sum)|
    pub agreement_gap: f64,
    /// number of critical points used in the sum
    pub count: usize,
    /// false when the count disagrees with the Euler-characteristic
    /// count at independent generic draws
    pub reliable: bool,
}

/// lim_{δ→∞} I(δ) via the dual volume and via the critical-point sum.
pub fn field_theory_limit(spec: &IntegralSpec, seed: u64) -> Result<LimitReport> {
    spec.require_positive_mode()?;
    let n = spec.nvars();
    let (s, nu) = match (spec.s_rational(), spec.nu_rational()) {
        (Some(s), Some(nu)) => (s, nu),
        _ => {
            return Err(Error::Precondition(
                "the exact volume route needs rational s and ν".into(),
            ))
        }
    };
    if !s.iter().all(|x| x.is_positive()) {
        return Err(Error::Precondition("Re(s_i) must be positive".into()));
    }

    // volume route
    let newtons: Result<Vec<Polytope>> = spec.polys.iter().map(newton_polytope).collect();
    let p = weighted_sum(&newtons?, &s)?;
    let shifted = p.translate(&nu.iter().map(|x| -x.clone()).collect::<Vec<_>>());
    if !shifted.contains_interior(&vec![BigRational::from_integer(0.into()); n])? {
        return Err(Error::Precondition("ν must lie in the interior of P(s)".into()));
    }
    let dual = polar_dual(&shifted)?;
    let vol_normalized = normalized_volume(&dual)?;
    let mut factorial = BigRational::one();
    for k in 2..=n {
        factorial *= BigRational::from_integer(k.into());
    }
    let vol_euclidean = vol_normalized.clone() / factorial;

    // critical-point route
    let set = all_critical_points(spec, seed)?;
    let mut critical_sum = Complex64::new(0.0, 0.0);
    for h in &set.hessians {
        if h.norm() < 1e-14 {
            return Err(Error::Numeric("degenerate critical point (H = 0) in the sum".into()));
        }
        critical_sum += 1.0 / h;
    }

    // reliability: the sum must run over the full fiber, so the count
    // has to match the Euler-characteristic count
    let reliable = match crate::critpoints::euler_characteristic(
        &spec.polys,
        2,
        crate::rng::derive_seed(seed, &[0xEC]),
    ) {
        Ok(chi) => chi == set.count,
        Err(_) => false,
    };

    let agreement_gap = (rat_to_f64(&vol_normalized) - critical_sum.re).abs();
    Ok(LimitReport {
        dual_volume_normalized: vol_normalized,
        dual_volume_euclidean: vol_euclidean,
        critical_sum,
        agreement_gap,
        count: set.count,
        reliable,
    })
}

/// Saddle-point data for the high-energy limit.
#[derive(Debug, Clone)]
pub struct HighEnergyReport {
    /// the unique positive critical point a
    pub point: Vec<f64>,
    /// L(a) on the positive branch
    pub l_at_a: f64,
    /// H_{−log L}(a) > 0
    pub hessian: f64,
    /// H^{-1/2}, the limit value; real positive for valid inputs
    pub prefactor: Complex64,
    pub newton: PositiveCriticalPoint,
}

/// lim_{δ→0⁺} (2πδ)^{-n/2} L(a)^{-1/δ} I(δ) = H_{-log L}(a)^{-1/2}.
pub fn high_energy_limit(spec: &IntegralSpec) -> Result<HighEnergyReport> {
    let newton = positive_critical_point(spec)?;
    let a = newton.point.clone();
    let xc: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut log_l = 0.0_f64;
    for (i, f) in spec.polys.iter().enumerate() {
        log_l -= spec.s[i].re_f64() * f.to_complex().eval(&xc)?.re.ln();
    }
    for (j, &aj) in a.iter().enumerate() {
        log_l += spec.nu[j].re_f64() * aj.ln();
    }
    let h = newton.hessian;
    // branch convention: (-r)^{1/2} = e^{iπ/2} r^{1/2}
    let prefactor = if h > 0.0 {
        Complex64::new(1.0 / h.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, 1.0 / (-h).sqrt()).inv()
    };
    Ok(HighEnergyReport { point: a, l_at_a: log_l.exp(), hessian: h, prefactor, newton })
}

/// One row of a δ-sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub delta: f64,
    pub result: QuadratureResult,
}

/// Empirical I(δ) estimates across a list of δ values.
pub fn limit_sweep(
    spec: &IntegralSpec,
    deltas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    spec.require_positive_mode()?;
    deltas
        .iter()
        .enumerate()
        .map(|(k, &delta)| {
            let result =
                evaluate_idelta(spec, delta, samples, crate::rng::derive_seed(seed, &[k as u64]))?;
            Ok(SweepRow { delta, result })
        })
        .collect()
}
