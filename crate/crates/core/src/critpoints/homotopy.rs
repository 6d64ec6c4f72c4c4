//! Total-degree homotopy continuation for square polynomial systems.
//!
//! The start system is g_j = x_j^{d_j} - 1 with d_j the total degree of
//! the target polynomial, blended as H(x,t) = (1-t)·γ·G + t·F with a
//! random complex γ (the gamma trick). Paths are tracked with an Euler
//! predictor and at most three Newton corrections per step, adaptive
//! step length in [1e-6, 0.1], and a 50-iteration Newton endgame in
//! double-double precision at t = 1.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::dd::CDD;
use crate::laurent::LaurentC;

const STEP_MIN: f64 = 1e-6;
const STEP_MAX: f64 = 0.1;
const CORRECTOR_TOL: f64 = 1e-10;
const DIVERGENCE_BOUND: f64 = 1e8;
const ENDGAME_STEPS: usize = 50;

/// A polynomial flattened for fast repeated evaluation.
#[derive(Debug, Clone)]
struct FlatPoly {
    terms: Vec<(Vec<i32>, Complex64)>,
}

impl FlatPoly {
    fn from_laurent(p: &LaurentC) -> FlatPoly {
        FlatPoly {
            terms: p
                .terms()
                .map(|(e, c)| (e.0.iter().map(|&k| k as i32).collect(), *c))
                .collect(),
        }
    }

    fn total_degree(&self) -> i32 {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max().unwrap_or(0)
    }

    fn eval_with_tables(&self, pow: &[Vec<Complex64>]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (j, &k) in e.iter().enumerate() {
                if k != 0 {
                    t *= pow[j][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    fn eval_dd(&self, x: &[CDD]) -> CDD {
        let mut acc = CDD::ZERO;
        for (e, c) in &self.terms {
            let mut t = CDD::from_c64(*c);
            for (j, &k) in e.iter().enumerate() {
                if k != 0 {
                    t = t.mul(x[j].powi(k as i64));
                }
            }
            acc = acc.add(t);
        }
        acc
    }
}

/// Square system with precomputed Jacobian, set up for path tracking.
pub struct TrackedSystem {
    n: usize,
    polys: Vec<FlatPoly>,
    jac: Vec<Vec<FlatPoly>>,
    degrees: Vec<i32>,
    max_exp: Vec<i32>,
}

/// All exponents here are non-negative: clearing denominators happens
/// before systems reach the tracker.
impl TrackedSystem {
    pub fn new(polys: &[LaurentC]) -> TrackedSystem {
        let n = polys.len();
        assert!(polys.iter().all(|p| p.nvars() == n), "system must be square");
        let flat: Vec<FlatPoly> = polys.iter().map(FlatPoly::from_laurent).collect();
        let jac: Vec<Vec<FlatPoly>> = polys
            .iter()
            .map(|p| (0..n).map(|j| FlatPoly::from_laurent(&p.partial(j))).collect())
            .collect();
        let degrees: Vec<i32> = flat.iter().map(FlatPoly::total_degree).collect();
        let mut max_exp = vec![0i32; n];
        for fp in flat.iter().chain(jac.iter().flatten()) {
            for (e, _) in &fp.terms {
                for (j, &k) in e.iter().enumerate() {
                    max_exp[j] = max_exp[j].max(k);
                }
            }
        }
        TrackedSystem { n, polys: flat, jac, degrees, max_exp }
    }

    pub fn bezout_count(&self) -> usize {
        self.degrees.iter().map(|&d| d.max(1) as usize).product()
    }

    fn power_tables(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|j| {
                let mut row = Vec::with_capacity(self.max_exp[j] as usize + 1);
                row.push(Complex64::new(1.0, 0.0));
                for k in 1..=self.max_exp[j] {
                    let prev = row[(k - 1) as usize];
                    row.push(prev * x[j]);
                }
                row
            })
            .collect()
    }

    fn eval_f(&self, pow: &[Vec<Complex64>]) -> Vec<Complex64> {
        self.polys.iter().map(|p| p.eval_with_tables(pow)).collect()
    }

    fn eval_jac(&self, pow: &[Vec<Complex64>]) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| self.jac[i][j].eval_with_tables(pow))
    }

    /// Start system value and Jacobian diag at x.
    fn eval_start(&self, x: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let g: Vec<Complex64> = self
            .degrees
            .iter()
            .zip(x)
            .map(|(&d, xi)| xi.powi(d) - Complex64::new(1.0, 0.0))
            .collect();
        let gj: Vec<Complex64> = self
            .degrees
            .iter()
            .zip(x)
            .map(|(&d, xi)| Complex64::new(d as f64, 0.0) * xi.powi(d - 1))
            .collect();
        (g, gj)
    }
}

/// Outcome of tracking one path.
#[derive(Debug, Clone)]
pub enum PathOutcome {
    /// Path reached t = 1 and the endgame converged.
    Endpoint { x: Vec<Complex64>, residual: f64 },
    /// Path wandered beyond the divergence bound (solution at infinity).
    Diverged,
    /// Step control underflowed: a genuine tracking failure.
    Failed,
    /// Endgame did not converge at t = 1 (singular endpoint).
    SingularEndpoint { x: Vec<Complex64>, residual: f64 },
}

pub struct TrackReport {
    pub outcomes: Vec<PathOutcome>,
    pub failures: usize,
    pub singular: usize,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Track all total-degree start solutions to the target system.
pub fn track_all(system: &TrackedSystem, seed: u64) -> TrackReport {
    track_all_attempt(system, seed, 0)
}

/// One tracking sweep with the γ drawn for the given attempt number.
pub fn track_all_attempt(system: &TrackedSystem, seed: u64, attempt: u64) -> TrackReport {
    let mut rng = crate::rng::stream(seed, &[0x67616d6d61, attempt]); // "gamma"
    let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let gamma = Complex64::from_polar(1.0, phase);

    let n_paths = system.bezout_count();
    let outcomes: Vec<PathOutcome> = (0..n_paths)
        .into_par_iter()
        .map(|path_idx| {
            let start = start_solution(system, path_idx);
            track_one(system, gamma, start)
        })
        .collect();

    let failures = outcomes.iter().filter(|o| matches!(o, PathOutcome::Failed)).count();
    let singular =
        outcomes.iter().filter(|o| matches!(o, PathOutcome::SingularEndpoint { .. })).count();
    TrackReport { outcomes, failures, singular }
}

/// The path_idx-th tuple of roots of unity (mixed-radix decoding).
fn start_solution(system: &TrackedSystem, path_idx: usize) -> Vec<Complex64> {
    let mut idx = path_idx;
    let mut x = Vec::with_capacity(system.n);
    for &d in &system.degrees {
        let d = d.max(1) as usize;
        let k = idx % d;
        idx /= d;
        let angle = std::f64::consts::TAU * (k as f64) / (d as f64);
        x.push(Complex64::from_polar(1.0, angle));
    }
    x
}

fn track_one(system: &TrackedSystem, gamma: Complex64, mut x: Vec<Complex64>) -> PathOutcome {
    let mut t = 0.0_f64;
    let mut dt = 0.05_f64;

    while t < 1.0 {
        let step = dt.min(1.0 - t);

        // Euler predictor: dx/dt = -J_H^{-1} (F - gamma*G)
        let pow = system.power_tables(&x);
        let f = system.eval_f(&pow);
        let jf = system.eval_jac(&pow);
        let (g, gj) = system.eval_start(&x);
        let mut jh = jf * Complex64::new(t, 0.0);
        for j in 0..system.n {
            jh[(j, j)] += Complex64::new(1.0 - t, 0.0) * gamma * gj[j];
        }
        let rhs = nalgebra::DVector::from_iterator(
            system.n,
            f.iter().zip(&g).map(|(fi, gi)| -(fi - gamma * gi)),
        );
        let Some(dx) = jh.lu().solve(&rhs) else {
            dt *= 0.5;
            if dt < STEP_MIN {
                return PathOutcome::Failed;
            }
            continue;
        };
        let mut x_pred: Vec<Complex64> =
            x.iter().zip(dx.iter()).map(|(xi, di)| xi + di * step).collect();
        if max_norm(&x_pred) > DIVERGENCE_BOUND {
            return PathOutcome::Diverged;
        }

        // Newton corrector at t + step
        let t_new = t + step;
        let mut converged = false;
        for _ in 0..3 {
            let pow = system.power_tables(&x_pred);
            let f = system.eval_f(&pow);
            let (g, gj) = system.eval_start(&x_pred);
            let h: Vec<Complex64> = f
                .iter()
                .zip(&g)
                .map(|(fi, gi)| fi * t_new + gamma * gi * (1.0 - t_new))
                .collect();
            let jf = system.eval_jac(&pow);
            let mut jh = jf * Complex64::new(t_new, 0.0);
            for j in 0..system.n {
                jh[(j, j)] += Complex64::new(1.0 - t_new, 0.0) * gamma * gj[j];
            }
            let rhs = nalgebra::DVector::from_iterator(system.n, h.iter().map(|z| -z));
            let Some(delta) = jh.lu().solve(&rhs) else {
                break;
            };
            for (xi, di) in x_pred.iter_mut().zip(delta.iter()) {
                *xi += di;
            }
            if max_norm(delta.as_slice()) <= CORRECTOR_TOL * max_norm(&x_pred).max(1.0) {
                converged = true;
                break;
            }
        }

        if converged {
            x = x_pred;
            t = t_new;
            dt = (dt * 2.0).min(STEP_MAX);
            if max_norm(&x) > DIVERGENCE_BOUND {
                return PathOutcome::Diverged;
            }
        } else {
            dt *= 0.5;
            if dt < STEP_MIN {
                // corrector breakdown at large coordinates close to the
                // end is a solution escaping to infinity, not a tracking
                // failure
                if t > 0.98 && max_norm(&x) > 1e4 {
                    return PathOutcome::Diverged;
                }
                return PathOutcome::Failed;
            }
        }
    }

    // endgame: Newton on the target system in double-double precision
    let mut xd: Vec<CDD> = x.iter().map(|&z| CDD::from_c64(z)).collect();
    for _ in 0..ENDGAME_STEPS {
        let f: Vec<CDD> = system.polys.iter().map(|p| p.eval_dd(&xd)).collect();
        let jac: Vec<Vec<CDD>> = system
            .jac
            .iter()
            .map(|row| row.iter().map(|p| p.eval_dd(&xd)).collect())
            .collect();
        let Some(delta) = solve_dd(&jac, &f) else { break };
        let mut shift = 0.0_f64;
        for (xi, di) in xd.iter_mut().zip(&delta) {
            *xi = xi.sub(*di);
            shift = shift.max(di.norm_f64());
        }
        if shift < 1e-28 {
            break;
        }
        if xd.iter().any(|z| !z.to_c64().re.is_finite() || !z.to_c64().im.is_finite()) {
            return PathOutcome::Diverged;
        }
    }
    let residual = system
        .polys
        .iter()
        .map(|p| p.eval_dd(&xd).norm_f64())
        .fold(0.0, f64::max);
    let x_final: Vec<Complex64> = xd.iter().map(|z| z.to_c64()).collect();
    if max_norm(&x_final) > DIVERGENCE_BOUND {
        return PathOutcome::Diverged;
    }
    // scale-aware singularity check on the polynomial residual
    let scale = max_norm(&x_final).max(1.0).powi(
        system.degrees.iter().copied().max().unwrap_or(1),
    );
    if residual > 1e-8 * scale {
        return PathOutcome::SingularEndpoint { x: x_final, residual };
    }
    PathOutcome::Endpoint { x: x_final, residual }
}

/// Gaussian elimination with partial pivoting in double-double
/// complex arithmetic; returns J^{-1} f.
fn solve_dd(jac: &[Vec<CDD>], f: &[CDD]) -> Option<Vec<CDD>> {
    let n = f.len();
    let mut a: Vec<Vec<CDD>> = jac.to_vec();
    let mut b: Vec<CDD> = f.to_vec();
    for c in 0..n {
        let (pivot, mag) = (c..n)
            .map(|r| (r, a[r][c].norm_f64()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if mag == 0.0 || !mag.is_finite() {
            return None;
        }
        a.swap(c, pivot);
        b.swap(c, pivot);
        for r in (c + 1)..n {
            let factor = a[r][c].div(a[c][c]);
            for k in c..n {
                let t = factor.mul(a[c][k]);
                a[r][k] = a[r][k].sub(t);
            }
            let t = factor.mul(b[c]);
            b[r] = b[r].sub(t);
        }
    }
    let mut x = vec![CDD::ZERO; n];
    for c in (0..n).rev() {
        let mut acc = b[c];
        for k in (c + 1)..n {
            acc = acc.sub(a[c][k].mul(x[k]));
        }
        x[c] = acc.div(a[c][c]);
    }
    Some(x)
}
