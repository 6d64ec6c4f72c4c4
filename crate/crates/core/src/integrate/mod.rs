//! Numerical evaluation of the Euler–Mellin integral over the positive
//! orthant.
//!
//! The substitution x = exp(y) turns the integral into ∫ e^{ν·y} f(e^y)^{-s} dy
//! over ℝⁿ, which splits over the (negated) maximal cones of the normal
//! fan of P(s) — one sector per vertex. On the sector of vertex v,
//! writing y = −A z with the cone's ray matrix A and z ∈ ℝⁿ₊, the
//! integrand is enveloped by exp(−Σ λ_k z_k) with strictly positive
//! rates λ_k = (Re(ν) − Re(s)·v)·r_k, so importance sampling each z_k
//! from Exp(λ_k) gives a bounded likelihood ratio and finite variance
//! wherever the integral converges. A deterministic tensor
//! Gauss–Laguerre backend covers n ≤ 2 as an independent cross-check.

pub mod laguerre;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rayon::prelude::*;

use crate::convergence::check_convergence;
use crate::error::{Error, Result};
use crate::laurent::rat_to_f64;
use crate::polytope::linalg::{determinant, dot_int, rat, sub, Matr, Vecr};
use crate::polytope::{newton_polytope, normal_fan, weighted_sum, Polytope};
use crate::spec::{IntegralSpec, Scalar};

const BATCH: usize = 16384;

/// One simplicial integration sector: a vertex of P(s) together with a
/// simplicial subcone of its normal cone.
#[derive(Debug, Clone)]
pub struct Sector {
    /// index of the vertex of P(s) this sector belongs to
    pub vertex_index: usize,
    /// the vertex v of P(s)
    pub vertex: Vecr,
    /// columns of the cone matrix A_v: ray generators of the subcone
    pub rays: Vec<Vec<BigInt>>,
    /// |det A_v|
    pub det_abs: BigRational,
    /// per factor i: the support point v_i selected by the cone and its
    /// coefficient c_{i,v_i}
    pub selected: Vec<(Vec<i64>, f64)>,
}

/// Decompose the integral into simplicial sectors, one per
/// (vertex, simplicial subcone) pair. Non-simplicial vertex cones are
/// subdivided by pulling from the lexicographically least ray.
pub fn sector_decompose(spec: &IntegralSpec) -> Result<Vec<Sector>> {
    let n = spec.nvars();
    let s_re = rationalized_re_s(spec)?;
    let newtons: Result<Vec<Polytope>> = spec.polys.iter().map(newton_polytope).collect();
    let p = weighted_sum(&newtons?, &s_re)?;
    if !p.is_full_dimensional() {
        return Err(Error::Degenerate("P(s) is not full-dimensional".into()));
    }
    let fan = normal_fan(&p)?;
    let base = p.centroid();

    let mut sectors = Vec::new();
    for (vi, v) in p.vertices().iter().enumerate() {
        let rays = &fan.cones[vi].rays;
        let sub_cones: Vec<Vec<Vec<BigInt>>> = if rays.len() == n {
            vec![rays.clone()]
        } else {
            subdivide_cone(rays, v, &base)?
        };
        for cone_rays in sub_cones {
            let m: Matr = (0..n)
                .map(|row| {
                    cone_rays
                        .iter()
                        .map(|r| BigRational::from_integer(r[row].clone()))
                        .collect()
                })
                .collect();
            let det_abs = determinant(&m).abs();
            if det_abs.numer().sign() == num_bigint::Sign::NoSign {
                return Err(Error::Numeric("degenerate simplicial subcone".into()));
            }
            let selected = select_factor_vertices(spec, &cone_rays)?;
            sectors.push(Sector {
                vertex_index: vi,
                vertex: v.clone(),
                rays: cone_rays,
                det_abs,
                selected,
            });
        }
    }
    Ok(sectors)
}

/// Simplicial subdivision of a vertex cone by pulling the cross-section
/// polytope from its lexicographically least vertex.
fn subdivide_cone(
    rays: &[Vec<BigInt>],
    v: &[BigRational],
    base: &[BigRational],
) -> Result<Vec<Vec<Vec<BigInt>>>> {
    let shifted = sub(v, base);
    // tips t_k = r_k / (-(r_k · (v - base))) all lie on the hyperplane
    // {y · (v - base) = -1}; conv(tips) is a cross-section of the cone
    let mut tips: Vec<(Vecr, usize)> = Vec::new();
    for (k, r) in rays.iter().enumerate() {
        let denom = dot_int(r, &shifted);
        if !denom.is_negative() {
            return Err(Error::Degenerate(
                "cone ray pairs non-negatively with v - base; base not interior".into(),
            ));
        }
        let t = -denom.recip();
        tips.push((r.iter().map(|x| BigRational::from_integer(x.clone()) * t.clone()).collect(), k));
    }
    tips.sort();
    let pts: Vec<Vecr> = tips.iter().map(|(p, _)| p.clone()).collect();
    let simplices = crate::polytope::triangulate_point_set(&pts)?;
    Ok(simplices
        .into_iter()
        .map(|simp| simp.into_iter().map(|i| rays[tips[i].1].clone()).collect())
        .collect())
}

/// For each factor, the unique support point minimized by directions
/// interior to the sector cone.
fn select_factor_vertices(
    spec: &IntegralSpec,
    cone_rays: &[Vec<BigInt>],
) -> Result<Vec<(Vec<i64>, f64)>> {
    let n = spec.nvars();
    let interior: Vec<BigInt> = (0..n)
        .map(|j| cone_rays.iter().map(|r| r[j].clone()).sum())
        .collect();
    let mut out = Vec::new();
    for f in &spec.polys {
        let mut best: Option<(BigRational, Vec<i64>, f64)> = None;
        let mut tie = false;
        for (e, c) in f.terms() {
            let val: BigRational = interior
                .iter()
                .zip(&e.0)
                .map(|(r, &a)| BigRational::from_integer(r.clone()) * rat(a))
                .sum();
            match &best {
                None => best = Some((val, e.0.clone(), rat_to_f64(c))),
                Some((bv, _, _)) => {
                    if val < *bv {
                        best = Some((val, e.0.clone(), rat_to_f64(c)));
                        tie = false;
                    } else if val == *bv {
                        tie = true;
                    }
                }
            }
        }
        if tie {
            return Err(Error::Numeric(
                "tie selecting the factor vertex for a sector; cone not generic".into(),
            ));
        }
        let (_, e, c) = best.unwrap();
        out.push((e, c));
    }
    Ok(out)
}

fn rationalized_re_s(spec: &IntegralSpec) -> Result<Vec<BigRational>> {
    spec.s
        .iter()
        .map(|x| match x {
            Scalar::Rat(r) => {
                if r.is_positive() {
                    Ok(r.clone())
                } else {
                    Err(Error::Precondition("Re(s_i) must be positive".into()))
                }
            }
            other => {
                let re = other.re_f64();
                if re <= 0.0 {
                    return Err(Error::Precondition("Re(s_i) must be positive".into()));
                }
                Ok(rationalize(re))
            }
        })
        .collect()
}

/// Continued-fraction rationalization of a float (for the polytope
/// combinatorics only; numeric paths keep the float).
pub fn rationalize(x: f64) -> BigRational {
    let mut num0 = BigInt::from(1);
    let mut num1 = BigInt::from(x.floor() as i64);
    let mut den0 = BigInt::from(0);
    let mut den1 = BigInt::from(1);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-14 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let ai = BigInt::from(a as i64);
        let num2 = &ai * &num1 + &num0;
        let den2 = &ai * &den1 + &den0;
        num0 = std::mem::replace(&mut num1, num2);
        den0 = std::mem::replace(&mut den1, den2);
        let approx = rat_to_f64(&BigRational::new(num1.clone(), den1.clone()));
        if (approx - x).abs() < 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    BigRational::new(num1, den1)
}

/// Monte-Carlo estimate with componentwise standard errors.
#[derive(Debug, Clone)]
pub struct QuadratureResult {
    pub estimate: Complex64,
    pub std_error: (f64, f64),
    pub samples: usize,
    pub seed: u64,
    pub per_sector: Vec<SectorEstimate>,
}

#[derive(Debug, Clone)]
pub struct SectorEstimate {
    pub vertex_index: usize,
    pub estimate: Complex64,
    pub std_error: (f64, f64),
    pub samples: usize,
}

struct FactorData {
    alphas: Vec<Vec<f64>>,
    ln_coeffs: Vec<f64>,
}

/// ln f(e^y) by log-sum-exp; stable for large |y|.
fn ln_factor(fd: &FactorData, y: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    let mut vals = Vec::with_capacity(fd.alphas.len());
    for (alpha, lc) in fd.alphas.iter().zip(&fd.ln_coeffs) {
        let t = lc + alpha.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        m = m.max(t);
        vals.push(t);
    }
    m + vals.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Evaluate the Euler–Mellin integral by sector-decomposed importance
/// sampling. Requires a convergent positive-coefficient spec.
pub fn evaluate(spec: &IntegralSpec, samples: usize, seed: u64) -> Result<QuadratureResult> {
    let sectors = prepared_sectors(spec)?;
    mc_integrate(spec, &sectors, 1.0, samples, seed)
}

/// Estimate the δ-rescaled integral I(δ) = δ^{-n} I(s/δ, ν/δ). The
/// sector geometry of P(s) is reused exactly (the normal fan is
/// invariant under the rescaling).
pub fn evaluate_idelta(
    spec: &IntegralSpec,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<QuadratureResult> {
    if delta <= 0.0 {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let sectors = prepared_sectors(spec)?;
    let mut result = mc_integrate(spec, &sectors, 1.0 / delta, samples, seed)?;
    let scale = delta.powi(-(spec.nvars() as i32));
    result.estimate *= scale;
    result.std_error = (result.std_error.0 * scale, result.std_error.1 * scale);
    for sec in &mut result.per_sector {
        sec.estimate *= scale;
        sec.std_error = (sec.std_error.0 * scale, sec.std_error.1 * scale);
    }
    Ok(result)
}

fn prepared_sectors(spec: &IntegralSpec) -> Result<Vec<Sector>> {
    let report = check_convergence(spec)?;
    if !report.converges {
        return Err(Error::Precondition(format!(
            "integral does not converge: {:?}",
            report.reasons
        )));
    }
    sector_decompose(spec)
}

/// Core sampler. `eps` multiplies the exponents: eps = 1/δ.
fn mc_integrate(
    spec: &IntegralSpec,
    sectors: &[Sector],
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<QuadratureResult> {
    let n = spec.nvars();
    let s: Vec<Complex64> = spec.s_complex();
    let nu: Vec<Complex64> = spec.nu_complex();
    let nu_re: Vec<f64> = nu.iter().map(|z| z.re).collect();
    let factors: Vec<FactorData> = spec
        .polys
        .iter()
        .map(|f| {
            let mut alphas = Vec::new();
            let mut ln_coeffs = Vec::new();
            for (e, c) in f.terms() {
                alphas.push(e.0.iter().map(|&k| k as f64).collect());
                ln_coeffs.push(rat_to_f64(c).ln());
            }
            FactorData { alphas, ln_coeffs }
        })
        .collect();

    let per_sector_samples = samples.div_ceil(sectors.len().max(1)).max(1);
    let mut per_sector = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut var = (0.0_f64, 0.0_f64);
    let mut total_samples = 0usize;

    for (sec_idx, sector) in sectors.iter().enumerate() {
        // rates λ_k = eps · (Re(ν) − v) · r_k > 0, where v is already the
        // weighted vertex Re(s)·v_i of P(s)
        let mut rates = Vec::with_capacity(n);
        for r in &sector.rays {
            let margin: f64 = (0..n)
                .map(|j| {
                    (nu_re[j] - rat_to_f64(&sector.vertex[j]))
                        * rat_to_f64(&BigRational::from_integer(r[j].clone()))
                })
                .sum();
            let rate = eps * margin;
            if rate <= 0.0 {
                return Err(Error::Numeric(
                    "non-positive sector rate; interiority violated (internal guard)".into(),
                ));
            }
            rates.push(rate);
        }

        let a_cols: Vec<Vec<f64>> = sector
            .rays
            .iter()
            .map(|r| r.iter().map(|x| rat_to_f64(&BigRational::from_integer(x.clone()))).collect())
            .collect();
        let det_abs = rat_to_f64(&sector.det_abs);
        let log_norm = det_abs.ln() - rates.iter().map(|l| l.ln()).sum::<f64>();

        let n_batches = per_sector_samples.div_ceil(BATCH);
        let batch_stats: Vec<(Complex64, f64, f64, usize)> = (0..n_batches)
            .into_par_iter()
            .map(|batch_idx| {
                let mut rng = crate::rng::stream(seed, &[sec_idx as u64, batch_idx as u64]);
                let count = if batch_idx + 1 == n_batches {
                    per_sector_samples - BATCH * (n_batches - 1)
                } else {
                    BATCH
                };
                let mut sum = Complex64::new(0.0, 0.0);
                let mut sq_re = 0.0_f64;
                let mut sq_im = 0.0_f64;
                let mut z = vec![0.0_f64; n];
                let mut y = vec![0.0_f64; n];
                for _ in 0..count {
                    for k in 0..n {
                        let u: f64 = rng.gen();
                        z[k] = -(1.0 - u).ln() / rates[k];
                    }
                    for j in 0..n {
                        y[j] = 0.0;
                    }
                    for (k, col) in a_cols.iter().enumerate() {
                        for j in 0..n {
                            y[j] -= col[j] * z[k];
                        }
                    }
                    // complex exponent of the weight:
                    //   eps·(ν·y − Σ s_i ln f_i(e^y)) + Σ λ_k z_k + log_norm
                    let mut e_re = log_norm;
                    let mut e_im = 0.0;
                    for j in 0..n {
                        e_re += eps * nu[j].re * y[j];
                        e_im += eps * nu[j].im * y[j];
                    }
                    for (i, fd) in factors.iter().enumerate() {
                        let lf = ln_factor(fd, &y);
                        e_re -= eps * s[i].re * lf;
                        e_im -= eps * s[i].im * lf;
                    }
                    for k in 0..n {
                        e_re += rates[k] * z[k];
                    }
                    let w = Complex64::from_polar(e_re.exp(), e_im);
                    sum += w;
                    sq_re += w.re * w.re;
                    sq_im += w.im * w.im;
                }
                (sum, sq_re, sq_im, count)
            })
            .collect();

        // deterministic reduction in batch order
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sq = (0.0_f64, 0.0_f64);
        let mut count = 0usize;
        for (bsum, bre, bim, bcount) in batch_stats {
            sum += bsum;
            sq.0 += bre;
            sq.1 += bim;
            count += bcount;
        }
        let mean = sum / count as f64;
        let var_re = (sq.0 / count as f64 - mean.re * mean.re).max(0.0) / count as f64;
        let var_im = (sq.1 / count as f64 - mean.im * mean.im).max(0.0) / count as f64;
        per_sector.push(SectorEstimate {
            vertex_index: sector.vertex_index,
            estimate: mean,
            std_error: (var_re.sqrt(), var_im.sqrt()),
            samples: count,
        });
        total += mean;
        var.0 += var_re;
        var.1 += var_im;
        total_samples += count;
    }

    Ok(QuadratureResult {
        estimate: total,
        std_error: (var.0.sqrt(), var.1.sqrt()),
        samples: total_samples,
        seed,
        per_sector,
    })
}

/// Deterministic tensor Gauss–Laguerre evaluation for n ≤ 2
/// (cross-check backend; 64 nodes per axis by default).
pub fn evaluate_deterministic(spec: &IntegralSpec, nodes_per_axis: usize) -> Result<Complex64> {
    let n = spec.nvars();
    if n > 2 {
        return Err(Error::Precondition(
            "deterministic backend is limited to n <= 2".into(),
        ));
    }
    let sectors = prepared_sectors(spec)?;
    let s: Vec<Complex64> = spec.s_complex();
    let nu: Vec<Complex64> = spec.nu_complex();
    let nu_re: Vec<f64> = nu.iter().map(|z| z.re).collect();
    let factors: Vec<FactorData> = spec
        .polys
        .iter()
        .map(|f| {
            let mut alphas = Vec::new();
            let mut ln_coeffs = Vec::new();
            for (e, c) in f.terms() {
                alphas.push(e.0.iter().map(|&k| k as f64).collect());
                ln_coeffs.push(rat_to_f64(c).ln());
            }
            FactorData { alphas, ln_coeffs }
        })
        .collect();
    let (nodes, weights) = laguerre::nodes_weights(nodes_per_axis);

    let mut total = Complex64::new(0.0, 0.0);
    for sector in &sectors {
        let mut rates = Vec::with_capacity(n);
        for r in &sector.rays {
            let margin: f64 = (0..n)
                .map(|j| {
                    (nu_re[j] - rat_to_f64(&sector.vertex[j]))
                        * rat_to_f64(&BigRational::from_integer(r[j].clone()))
                })
                .sum();
            if margin <= 0.0 {
                return Err(Error::Numeric("non-positive sector rate".into()));
            }
            rates.push(margin);
        }
        let a_cols: Vec<Vec<f64>> = sector
            .rays
            .iter()
            .map(|r| r.iter().map(|x| rat_to_f64(&BigRational::from_integer(x.clone()))).collect())
            .collect();
        let det_abs = rat_to_f64(&sector.det_abs);
        let norm = det_abs / rates.iter().product::<f64>();

        // ∫ e^{-Σu} ψ(u) du with u_k = λ_k z_k
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; n];
        loop {
            let mut wprod = 1.0;
            let mut y = vec![0.0_f64; n];
            for k in 0..n {
                wprod *= weights[idx[k]];
                let zk = nodes[idx[k]] / rates[k];
                for j in 0..n {
                    y[j] -= a_cols[k][j] * zk;
                }
            }
            // ψ(u) = exp(ν·y − Σ s_i ln f_i(e^y) + Σ u_k)
            let mut e_re = 0.0;
            let mut e_im = 0.0;
            for j in 0..n {
                e_re += nu[j].re * y[j];
                e_im += nu[j].im * y[j];
            }
            for (i, fd) in factors.iter().enumerate() {
                let lf = ln_factor(fd, &y);
                e_re -= s[i].re * lf;
                e_im -= s[i].im * lf;
            }
            for k in 0..n {
                e_re += nodes[idx[k]];
            }
            acc += Complex64::from_polar(e_re.exp(), e_im) * wprod;

            // advance the tensor index
            let mut k = 0;
            loop {
                if k == n {
                    break;
                }
                idx[k] += 1;
                if idx[k] < nodes_per_axis {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        total += acc * norm;
    }
    Ok(total)
}

/// Monte-Carlo estimate of ∫_C exp(y·v) dy over a simplicial cone with
/// the given ray matrix, for y·v < 0 on C∖{0}. Samples a deliberately
/// mismatched exponential density so the estimator has nonzero
/// variance. Returns (estimate, std_error).
pub fn mc_cone_exp_integral(
    rays: &[Vec<i64>],
    v: &[f64],
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let n = v.len();
    if rays.len() != n {
        return Err(Error::Precondition("need a simplicial cone (n rays)".into()));
    }
    let mut lambdas = Vec::with_capacity(n);
    for r in rays {
        let lam: f64 = -(r.iter().zip(v).map(|(&a, b)| a as f64 * b).sum::<f64>());
        if lam <= 0.0 {
            return Err(Error::Precondition("need y·v < 0 on the cone".into()));
        }
        lambdas.push(lam);
    }
    let m: Matr = (0..n)
        .map(|row| rays.iter().map(|r| rat(r[row])).collect())
        .collect();
    let det_abs = rat_to_f64(&determinant(&m).abs());

    // sample with rates 0.7λ: the likelihood ratio exp(-0.3 λ z) stays
    // bounded, so the variance is finite but nonzero
    let q = 0.7;
    let n_batches = samples.div_ceil(BATCH);
    let stats: Vec<(f64, f64, usize)> = (0..n_batches)
        .into_par_iter()
        .map(|batch_idx| {
            let mut rng = crate::rng::stream(seed, &[0xC0DE, batch_idx as u64]);
            let count = if batch_idx + 1 == n_batches {
                samples - BATCH * (n_batches - 1)
            } else {
                BATCH
            };
            let mut sum = 0.0;
            let mut sq = 0.0;
            for _ in 0..count {
                let mut log_w = det_abs.ln();
                for k in 0..n {
                    let u: f64 = rng.gen();
                    let rate = q * lambdas[k];
                    let z = -(1.0 - u).ln() / rate;
                    log_w += -lambdas[k] * z + rate * z - rate.ln();
                }
                let w = log_w.exp();
                sum += w;
                sq += w * w;
            }
            (sum, sq, count)
        })
        .collect();
    let (mut sum, mut sq, mut count) = (0.0, 0.0, 0usize);
    for (bs, bq, bc) in stats {
        sum += bs;
        sq += bq;
        count += bc;
    }
    let mean = sum / count as f64;
    let var = (sq / count as f64 - mean * mean).max(0.0) / count as f64;
    Ok((mean, var.sqrt()))
}
