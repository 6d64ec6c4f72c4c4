//! The A-hypergeometric (GKZ) system annihilating the Euler integral as
//! a function of the coefficients z of f.
//!
//! The configuration is the Cayley matrix A with columns (e_i, α) for
//! α in supp(f_i). The system H_A(β) with β = −(s, ν) consists of the
//! toric binomials ∂^u − ∂^v for u−v in ker A together with the ℓ+n
//! Euler operators Σ_α A_{kα} z_α ∂_α − β_k. Binomial generation is
//! degree-bounded kernel enumeration (all paper-scale ideals are
//! captured at degree 2); the emitted set is normalized by keeping, for
//! each leading ∂-monomial, the relation with the smallest trailing
//! monomial. Torus specialization rewrites the system in the surviving
//! coordinates exactly as the homogeneity reduction prescribes.

pub mod operator;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::params::{param_names, ParamPoly, ParamRat};
use crate::polytope::cone_facets;
use crate::polytope::linalg::{self, rat, Matr, Vecr};
use crate::spec::{IntegralSpec, Scalar};
use operator::{DiffOp, VarPoly};

/// The Cayley configuration of the factor supports.
#[derive(Debug, Clone, PartialEq)]
pub struct CayleyMatrix {
    pub l: usize,
    pub n: usize,
    /// (ℓ+n) × N integer matrix
    pub matrix: Vec<Vec<i64>>,
    /// column labels (factor index, exponent vector)
    pub labels: Vec<(usize, Vec<i64>)>,
    pub rank: usize,
}

impl CayleyMatrix {
    pub fn ncols(&self) -> usize {
        self.labels.len()
    }

    pub fn nrows(&self) -> usize {
        self.l + self.n
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.nrows()).map(|r| self.matrix[r][j]).collect()
    }
}

/// Build the Cayley matrix from ordered supports (each support in the
/// canonical term order of its factor).
pub fn cayley(supports: &[Vec<Vec<i64>>]) -> Result<CayleyMatrix> {
    let l = supports.len();
    if l == 0 || supports.iter().any(|s| s.is_empty()) {
        return Err(Error::Precondition("empty support".into()));
    }
    let n = supports[0][0].len();
    let mut labels = Vec::new();
    for (i, sup) in supports.iter().enumerate() {
        for alpha in sup {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch("support exponent length mismatch".into()));
            }
            labels.push((i, alpha.clone()));
        }
    }
    let ncols = labels.len();
    let mut matrix = vec![vec![0i64; ncols]; l + n];
    for (col, (i, alpha)) in labels.iter().enumerate() {
        matrix[*i][col] = 1;
        for (j, &a) in alpha.iter().enumerate() {
            matrix[l + j][col] = a;
        }
    }
    let ratm: Matr = matrix.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
    let rank = linalg::rank(&ratm);
    Ok(CayleyMatrix { l, n, matrix, labels, rank })
}

pub fn cayley_from_spec(spec: &IntegralSpec) -> Result<CayleyMatrix> {
    let supports: Vec<Vec<Vec<i64>>> = spec.polys.iter().map(|f| f.support()).collect();
    cayley(&supports)
}

// ---------------------------------------------------------------------
// toric binomials
// ---------------------------------------------------------------------

/// Graded-lex comparison with x1 > x2 > …: higher total degree wins,
/// ties go to the first positive entry of the difference.
fn grlex_gt(a: &[u32], b: &[u32]) -> bool {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    if da != db {
        return da > db;
    }
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x > y;
        }
    }
    false
}

#[derive(Debug, Clone)]
struct KernelBinomial {
    u: Vec<u32>,
    v: Vec<u32>,
}

impl KernelBinomial {
    fn from_vector(w: &[i64]) -> KernelBinomial {
        let u: Vec<u32> = w.iter().map(|&x| if x > 0 { x as u32 } else { 0 }).collect();
        let v: Vec<u32> = w.iter().map(|&x| if x < 0 { (-x) as u32 } else { 0 }).collect();
        if grlex_gt(&u, &v) {
            KernelBinomial { u, v }
        } else {
            KernelBinomial { u: v, v: u }
        }
    }
}

/// Generators of the toric ideal up to the ℓ¹ degree bound
/// (default: max kernel-basis norm + 2). The emitted set keeps, per
/// leading ∂-monomial, the binomial with the grlex-smallest trailing
/// monomial, then drops any candidate in the linear span of the kept
/// ones.
pub fn toric_binomials(a: &CayleyMatrix, degree_bound: Option<usize>) -> Vec<DiffOp> {
    let ncols = a.ncols();
    let nparams = a.nrows();
    let ratm: Matr =
        a.matrix.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect();
    let kern = linalg::kernel_basis(&ratm);
    if kern.is_empty() {
        return vec![];
    }
    let basis_norm = kern
        .iter()
        .map(|v| {
            let prim = linalg::primitive_integer(v);
            prim.iter().map(|x| x.magnitude().try_into().unwrap_or(usize::MAX)).sum::<usize>()
        })
        .max()
        .unwrap_or(2);
    let bound = degree_bound.unwrap_or(basis_norm + 2);

    // enumerate integer kernel vectors with ‖w‖₁ ≤ bound, first nonzero
    // entry positive
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut w = vec![0i64; ncols];
    enumerate_kernel(a, &mut w, 0, bound as i64, &mut candidates);

    let mut binomials: Vec<KernelBinomial> =
        candidates.iter().map(|w| KernelBinomial::from_vector(w)).collect();

    // group by leading monomial, keep the smallest tail
    binomials.sort_by(|x, y| {
        let dx: u32 = x.u.iter().sum::<u32>() + x.v.iter().sum::<u32>();
        let dy: u32 = y.u.iter().sum::<u32>() + y.v.iter().sum::<u32>();
        dx.cmp(&dy).then_with(|| x.u.cmp(&y.u)).then_with(|| x.v.cmp(&y.v))
    });
    let mut by_lead: BTreeMap<Vec<u32>, KernelBinomial> = BTreeMap::new();
    for b in &binomials {
        match by_lead.get(&b.u) {
            None => {
                by_lead.insert(b.u.clone(), b.clone());
            }
            Some(prev) => {
                if grlex_gt(&prev.v, &b.v) {
                    by_lead.insert(b.u.clone(), b.clone());
                }
            }
        }
    }

    // span check: drop candidates generated linearly by the kept set,
    // keep any stragglers so the output still spans every enumerated
    // relation
    let mut kept: Vec<KernelBinomial> = by_lead.into_values().collect();
    kept.sort_by(|x, y| {
        if grlex_gt(&x.u, &y.u) {
            std::cmp::Ordering::Less
        } else if grlex_gt(&y.u, &x.u) {
            std::cmp::Ordering::Greater
        } else {
            x.v.cmp(&y.v)
        }
    });
    let mut pivots: Vec<BTreeMap<Vec<u32>, BigRational>> = Vec::new();
    let mut reduced_kept = Vec::new();
    for b in kept {
        if reduce_against(&mut pivots, &b) {
            reduced_kept.push(b);
        }
    }
    for b in binomials {
        if reduce_against(&mut pivots, &b) {
            reduced_kept.push(b);
        }
    }

    reduced_kept
        .into_iter()
        .map(|b| {
            let mut op = DiffOp::zero(ncols, nparams);
            op.add_term(
                b.u.clone(),
                VarPoly::constant(ncols, ParamRat::constant(nparams, BigRational::one())),
            );
            op.add_term(
                b.v.clone(),
                VarPoly::constant(ncols, ParamRat::constant(nparams, -BigRational::one())),
            );
            op
        })
        .collect()
}

/// Reduce the binomial's monomial vector against the pivot rows; on a
/// nonzero remainder, record a new pivot and return true.
fn reduce_against(
    pivots: &mut Vec<BTreeMap<Vec<u32>, BigRational>>,
    b: &KernelBinomial,
) -> bool {
    let mut vec: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    vec.insert(b.u.clone(), BigRational::one());
    vec.insert(b.v.clone(), -BigRational::one());
    for pivot in pivots.iter() {
        let Some((lead, lead_c)) = pivot.iter().next_back() else { continue };
        if let Some(c) = vec.get(lead).cloned() {
            let factor = c / lead_c.clone();
            for (m, pc) in pivot {
                let entry = vec.entry(m.clone()).or_insert_with(BigRational::zero);
                *entry -= factor.clone() * pc.clone();
            }
            vec.retain(|_, c| !c.is_zero());
        }
    }
    if vec.is_empty() {
        false
    } else {
        pivots.push(vec);
        pivots.sort_by(|x, y| y.keys().next_back().cmp(&x.keys().next_back()));
        true
    }
}

fn enumerate_kernel(
    a: &CayleyMatrix,
    w: &mut Vec<i64>,
    pos: usize,
    budget: i64,
    out: &mut Vec<Vec<i64>>,
) {
    if pos == w.len() {
        if w.iter().any(|&x| x != 0) {
            // orientation: first nonzero positive (dedupe ±w)
            if w.iter().find(|&&x| x != 0).copied().unwrap_or(0) > 0 {
                let ok = (0..a.nrows())
                    .all(|r| w.iter().zip(&a.matrix[r]).map(|(&wi, &ai)| wi * ai).sum::<i64>() == 0);
                if ok {
                    out.push(w.clone());
                }
            }
        }
        return;
    }
    for val in -budget..=budget {
        w[pos] = val;
        enumerate_kernel(a, w, pos + 1, budget - val.abs(), out);
    }
    w[pos] = 0;
}

// ---------------------------------------------------------------------
// Euler operators and non-resonance
// ---------------------------------------------------------------------

/// The ℓ+n first-order operators Σ_α A_{kα} z_α ∂_α + (s,ν)_k
/// (the GKZ homogeneity relations with β = −(s,ν)).
pub fn euler_operators(a: &CayleyMatrix) -> Vec<DiffOp> {
    let ncols = a.ncols();
    let nparams = a.nrows();
    (0..a.nrows())
        .map(|k| {
            let mut op = DiffOp::zero(ncols, nparams);
            for col in 0..ncols {
                let coeff = a.matrix[k][col];
                if coeff == 0 {
                    continue;
                }
                let mut mono = vec![0i64; ncols];
                mono[col] = 1;
                let mut dpow = vec![0u32; ncols];
                dpow[col] = 1;
                op.add_term(
                    dpow,
                    VarPoly::monomial(
                        ncols,
                        mono,
                        ParamRat::constant(nparams, BigRational::from_integer(coeff.into())),
                    ),
                );
            }
            op.add_term(
                vec![0u32; ncols],
                VarPoly::constant(ncols, ParamRat::var(nparams, k)),
            );
            op
        })
        .collect()
}

/// Non-resonance check: β = −(s,ν) pairs non-integrally with every
/// facet ray of pos(A). Exact for rational data; otherwise a 1e-9
/// tolerance on the distance to the nearest integer.
#[derive(Debug, Clone)]
pub struct ResonanceReport {
    pub nonresonant: bool,
    /// a facet ray witnessing resonance, with its pairing r·β
    pub witness: Option<(Vec<BigInt>, f64)>,
    pub exact: bool,
}

pub fn check_nonresonant(a: &CayleyMatrix, s: &[Scalar], nu: &[Scalar]) -> Result<ResonanceReport> {
    if s.len() != a.l || nu.len() != a.n {
        return Err(Error::DimensionMismatch("β length must be ℓ+n".into()));
    }
    let gens: Vec<Vecr> = (0..a.ncols())
        .map(|j| a.column(j).into_iter().map(rat).collect())
        .collect();
    let normals = cone_facets(&gens)?;

    let beta_rat: Option<Vec<BigRational>> = s
        .iter()
        .chain(nu.iter())
        .map(|x| x.rational().map(|r| -r.clone()))
        .collect();
    match beta_rat {
        Some(beta) => {
            for r in &normals {
                let pairing: BigRational = r
                    .iter()
                    .zip(&beta)
                    .map(|(ri, bi)| BigRational::from_integer(ri.clone()) * bi)
                    .sum();
                if pairing.is_integer() {
                    let val = crate::laurent::rat_to_f64(&pairing);
                    return Ok(ResonanceReport {
                        nonresonant: false,
                        witness: Some((r.clone(), val)),
                        exact: true,
                    });
                }
            }
            Ok(ResonanceReport { nonresonant: true, witness: None, exact: true })
        }
        None => {
            let beta: Vec<f64> = s
                .iter()
                .chain(nu.iter())
                .map(|x| -x.re_f64())
                .collect();
            for r in &normals {
                let pairing: f64 = r
                    .iter()
                    .zip(&beta)
                    .map(|(ri, bi)| crate::laurent::rat_to_f64(&BigRational::from_integer(ri.clone())) * bi)
                    .sum();
                if (pairing - pairing.round()).abs() < 1e-9 {
                    return Ok(ResonanceReport {
                        nonresonant: false,
                        witness: Some((r.clone(), pairing)),
                        exact: false,
                    });
                }
            }
            Ok(ResonanceReport { nonresonant: true, witness: None, exact: false })
        }
    }
}

/// The full GKZ system of a spec.
#[derive(Debug, Clone)]
pub struct GkzSystem {
    pub cayley: CayleyMatrix,
    pub binomials: Vec<DiffOp>,
    pub euler_ops: Vec<DiffOp>,
    pub degree_bound: usize,
}

pub fn gkz_system(spec: &IntegralSpec, degree_bound: Option<usize>) -> Result<GkzSystem> {
    let a = cayley_from_spec(spec)?;
    let binomials = toric_binomials(&a, degree_bound);
    let euler_ops = euler_operators(&a);
    let bound = degree_bound.unwrap_or_else(|| {
        binomials.iter().map(|b| b.order() as usize).max().unwrap_or(0).max(2) + 2
    });
    Ok(GkzSystem { cayley: a, binomials, euler_ops, degree_bound: bound })
}

impl GkzSystem {
    pub fn z_names(&self) -> Vec<String> {
        (1..=self.cayley.ncols()).map(|k| format!("z{k}")).collect()
    }

    pub fn param_names(&self) -> Vec<String> {
        param_names(self.cayley.l, self.cayley.n)
    }
}

// ---------------------------------------------------------------------
// torus specialization
// ---------------------------------------------------------------------

/// How to restrict the GKZ system to a torus slice: the `fixed`
/// coordinates are scaled to 1, each remaining coordinate becomes a
/// named variable with a sign (z_col = sign · t).
#[derive(Debug, Clone)]
pub struct TorusRecipe {
    pub fixed: Vec<usize>,
    pub rest: Vec<RestVar>,
}

#[derive(Debug, Clone)]
pub struct RestVar {
    pub col: usize,
    pub name: String,
    pub sign: i64,
}

/// Affine-linear operator c(s,ν) + Σ_m a_m θ_{t_m}.
#[derive(Debug, Clone)]
struct ThetaAffine {
    constant: ParamPoly,
    theta: Vec<BigRational>,
}

impl ThetaAffine {
    fn zero(nparams: usize, nrest: usize) -> ThetaAffine {
        ThetaAffine { constant: ParamPoly::zero(nparams), theta: vec![BigRational::zero(); nrest] }
    }

    fn scale(&self, c: &BigRational) -> ThetaAffine {
        ThetaAffine {
            constant: self.constant.scale(c),
            theta: self.theta.iter().map(|a| a * c).collect(),
        }
    }

    fn add(&self, other: &ThetaAffine) -> ThetaAffine {
        ThetaAffine {
            constant: self.constant.add(&other.constant),
            theta: self.theta.iter().zip(&other.theta).map(|(a, b)| a + b).collect(),
        }
    }

    fn to_diffop(&self, nrest: usize, nparams: usize) -> DiffOp {
        let mut op = DiffOp::constant_op(
            nrest,
            nparams,
            ParamRat::from_poly(self.constant.clone()),
        );
        for (m, a) in self.theta.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut mono = vec![0i64; nrest];
            mono[m] = 1;
            let mut dpow = vec![0u32; nrest];
            dpow[m] = 1;
            op = op.add(&DiffOp::monomial_op(
                nrest,
                nparams,
                ParamRat::constant(nparams, a.clone()),
                mono,
                dpow,
            ));
        }
        op
    }
}

/// Specialize the system to the recipe's torus slice. Returns the
/// rewritten binomials followed by the surviving homogeneity operators,
/// all in the remaining variables.
pub fn specialize(system: &GkzSystem, recipe: &TorusRecipe) -> Result<Vec<DiffOp>> {
    let a = &system.cayley;
    let d = a.nrows();
    let ncols = a.ncols();
    let q = recipe.fixed.len();
    let nrest = recipe.rest.len();
    let nparams = d;

    // the recipe must partition the columns
    {
        let mut seen = vec![false; ncols];
        for &c in &recipe.fixed {
            if c >= ncols || seen[c] {
                return Err(Error::Precondition("bad fixed column in torus recipe".into()));
            }
            seen[c] = true;
        }
        for rv in &recipe.rest {
            if rv.col >= ncols || seen[rv.col] || rv.sign.abs() != 1 {
                return Err(Error::Precondition("bad rest column in torus recipe".into()));
            }
            seen[rv.col] = true;
        }
        if !seen.iter().all(|&b| b) {
            return Err(Error::Precondition("torus recipe must cover every column".into()));
        }
    }

    // choose q rows (preferring later rows: the ν-block) whose fixed
    // submatrix is invertible; the remaining rows become pure-t
    // operators
    let mut chosen: Vec<usize> = Vec::new();
    {
        let mut rows: Matr = Vec::new();
        for row in (0..d).rev() {
            if chosen.len() == q {
                break;
            }
            let cand: Vecr = recipe.fixed.iter().map(|&c| rat(a.matrix[row][c])).collect();
            let mut test = rows.clone();
            test.push(cand.clone());
            if linalg::rank(&test) > rows.len() {
                rows.push(cand);
                chosen.push(row);
            }
        }
        if chosen.len() != q {
            return Err(Error::Precondition(
                "torus recipe not applicable: homogeneity relations do not solve for the \
                 fixed derivatives"
                    .into(),
            ));
        }
        chosen.reverse();
    }
    let leftover_rows: Vec<usize> = (0..d).filter(|r| !chosen.contains(r)).collect();

    let b: Matr = chosen
        .iter()
        .map(|&r| recipe.fixed.iter().map(|&c| rat(a.matrix[r][c])).collect())
        .collect();
    let binv = invert_exact(&b).ok_or_else(|| {
        Error::Precondition("torus recipe not applicable: singular solve".into())
    })?;

    // solve_for(w): per fixed column p, the operator expressing
    // (∂_{fixed_p} ∂^w I)(1, σt); leftover(w): the pure-t relations
    let solve_for = |w: &[u32]| -> (Vec<ThetaAffine>, Vec<ThetaAffine>) {
        let aw: Vec<BigRational> = (0..d)
            .map(|r| {
                (0..ncols)
                    .map(|c| rat(a.matrix[r][c] * w[c] as i64))
                    .sum()
            })
            .collect();
        // rhs_r = −param_r − (Aw)_r − Σ_m A[r][rest_m] θ_m
        let rhs: Vec<ThetaAffine> = chosen
            .iter()
            .map(|&r| {
                let mut t = ThetaAffine::zero(nparams, nrest);
                t.constant = t
                    .constant
                    .sub(&crate::params::param_var(nparams, r))
                    .sub(&ParamPoly::constant(nparams, aw[r].clone()));
                for (m, rv) in recipe.rest.iter().enumerate() {
                    t.theta[m] = -rat(a.matrix[r][rv.col]);
                }
                t
            })
            .collect();
        let solved: Vec<ThetaAffine> = (0..q)
            .map(|p| {
                let mut acc = ThetaAffine::zero(nparams, nrest);
                for (ri, rhs_r) in rhs.iter().enumerate() {
                    acc = acc.add(&rhs_r.scale(&binv[p][ri]));
                }
                acc
            })
            .collect();
        let leftovers: Vec<ThetaAffine> = leftover_rows
            .iter()
            .map(|&r| {
                let mut t = ThetaAffine::zero(nparams, nrest);
                t.constant = t
                    .constant
                    .add(&crate::params::param_var(nparams, r))
                    .add(&ParamPoly::constant(nparams, aw[r].clone()));
                for (m, rv) in recipe.rest.iter().enumerate() {
                    t.theta[m] = rat(a.matrix[r][rv.col]);
                }
                for (p, &c) in recipe.fixed.iter().enumerate() {
                    let coeff = rat(a.matrix[r][c]);
                    if !coeff.numer().is_zero() {
                        t = t.add(&solved[p].scale(&coeff));
                    }
                }
                t
            })
            .collect();
        (solved, leftovers)
    };

    // Gaussian elimination of non-preferred θ's using the leftover
    // relations (the Euler-operator reduction)
    let reduce = |expr: &ThetaAffine, preferred: &[bool], leftovers: &[ThetaAffine]| -> ThetaAffine {
        let mut expr = expr.clone();
        let mut pool: Vec<ThetaAffine> = leftovers.to_vec();
        loop {
            // pick the largest non-preferred θ present in expr that some
            // pool relation can eliminate
            let mut target: Option<usize> = None;
            for m in (0..nrest).rev() {
                if preferred[m] || expr.theta[m].is_zero() {
                    continue;
                }
                if pool.iter().any(|rel| !rel.theta[m].is_zero()) {
                    target = Some(m);
                    break;
                }
            }
            let Some(m) = target else { break };
            let rel_idx = pool.iter().position(|rel| !rel.theta[m].is_zero()).unwrap();
            let rel = pool.remove(rel_idx);
            let factor = expr.theta[m].clone() / rel.theta[m].clone();
            expr = expr.add(&rel.scale(&-factor.clone()));
            // also eliminate from the remaining pool
            for other in pool.iter_mut() {
                if !other.theta[m].is_zero() {
                    let f = other.theta[m].clone() / rel.theta[m].clone();
                    *other = other.add(&rel.scale(&-f));
                }
            }
        }
        expr
    };

    let rewrite_monomial = |u: &[u32]| -> DiffOp {
        // outer part: plain t-derivatives from the rest columns
        let mut dpow = vec![0u32; nrest];
        let mut sign = 1i64;
        let mut preferred = vec![false; nrest];
        for (m, rv) in recipe.rest.iter().enumerate() {
            dpow[m] = u[rv.col];
            if u[rv.col] > 0 {
                preferred[m] = true;
                if rv.sign < 0 && u[rv.col] % 2 == 1 {
                    sign = -sign;
                }
            }
        }
        // inner chain: fixed columns, ascending, with the accumulated
        // remaining multidegree
        let mut chain: Vec<usize> = Vec::new();
        for (p, &c) in recipe.fixed.iter().enumerate() {
            for _ in 0..u[c] {
                chain.push(p);
            }
        }
        let mut acc = DiffOp::constant_op(
            nrest,
            nparams,
            ParamRat::constant(nparams, BigRational::one()),
        );
        // process right-to-left so w counts the derivatives still inside
        let mut w_inner = vec![0u32; ncols];
        let mut ops: Vec<DiffOp> = Vec::new();
        for &p in chain.iter().rev() {
            let (solved, leftovers) = solve_for(&w_inner);
            let reduced = reduce(&solved[p], &preferred, &leftovers);
            ops.push(reduced.to_diffop(nrest, nparams));
            w_inner[recipe.fixed[p]] += 1;
        }
        for op in ops.into_iter().rev() {
            acc = op.mul(&acc);
        }
        let outer = DiffOp::monomial_op(
            nrest,
            nparams,
            ParamRat::constant(nparams, BigRational::from_integer(sign.into())),
            vec![0i64; nrest],
            dpow,
        );
        outer.mul(&acc)
    };

    let mut out = Vec::new();
    for binom in &system.binomials {
        let mut op = DiffOp::zero(nrest, nparams);
        for (dpow, coeff) in &binom.terms {
            // binomial coefficients are constants
            let c = coeff
                .coeff(&vec![0i64; ncols])
                .cloned()
                .unwrap_or_else(|| ParamRat::constant(nparams, BigRational::zero()));
            op = op.add(&rewrite_monomial(dpow).scale(&c));
        }
        out.push(op.sign_normalized());
    }
    // surviving homogeneity operators
    let (_, leftovers) = solve_for(&vec![0u32; ncols]);
    for rel in &leftovers {
        out.push(rel.to_diffop(nrest, nparams).sign_normalized());
    }
    Ok(out)
}

fn invert_exact(m: &Matr) -> Option<Matr> {
    let n = m.len();
    let mut aug: Matr = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { BigRational::one() } else { BigRational::zero() });
            }
            r
        })
        .collect();
    let pivots = linalg::row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
