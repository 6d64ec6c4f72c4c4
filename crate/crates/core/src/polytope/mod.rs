//! Exact rational convex polytopes in small ambient dimension.
//!
//! V-representations are irredundant sorted vertex lists; the
//! H-representation (primitive integer inward normals `r` with rational
//! offsets `c`, meaning `r·p >= c`) is computed lazily by brute force
//! over vertex subsets and cross-validated against the vertices. Faces
//! follow the minimization convention: the face selected by a direction
//! `y` is where `y·p` attains its *minimum* over the polytope, so a
//! facet's cone ray in the normal fan is its inward normal.
//!
//! Everything here is exact; callers that only have floating-point data
//! must rationalize first.

pub mod linalg;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentRat;
use linalg::{affine_dim, dot, dot_int, hyperplane_normal, primitive_integer, rat, sub, Matr, Vecr};

/// Guard for the brute-force hull algorithms.
pub const MAX_HULL_DIM: usize = 6;

/// Supporting halfspace `normal · p >= offset` of a full-dimensional
/// polytope; `normal` is a primitive integer vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: BigRational,
}

/// Convex polytope with exact rational vertices.
#[derive(Debug, Clone)]
pub struct Polytope {
    ambient: usize,
    dim: usize,
    vertices: Vec<Vecr>,
    facets: OnceCell<Vec<Facet>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

/// Pointed polyhedral cone given by primitive integer ray generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub rays: Vec<Vec<BigInt>>,
}

/// The normal fan of a full-dimensional polytope: one maximal cone per
/// vertex, one ray per facet.
#[derive(Debug, Clone)]
pub struct NormalFan {
    /// cones\[i\] belongs to vertices()\[i\]
    pub cones: Vec<Cone>,
    /// rays\[k\] is the (inward) primitive normal of facet k
    pub rays: Vec<Vec<BigInt>>,
    /// facet indices incident to each vertex
    pub incidence: Vec<Vec<usize>>,
}

impl Polytope {
    fn from_vertex_list(ambient: usize, mut vertices: Vec<Vecr>) -> Polytope {
        vertices.sort();
        vertices.dedup();
        let dim = affine_dim(&vertices);
        Polytope { ambient, dim, vertices, facets: OnceCell::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient
    }

    pub fn vertices(&self) -> &[Vecr] {
        &self.vertices
    }

    /// H-representation; only available for full-dimensional polytopes.
    pub fn facets(&self) -> Result<&[Facet]> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional { dim: self.dim, ambient: self.ambient });
        }
        if self.facets.get().is_none() {
            let f = enumerate_facets(&self.vertices, self.ambient)?;
            // cross-validate: every vertex satisfies all inequalities and
            // is tight on at least ambient-many of them
            for v in &self.vertices {
                let mut tight = 0usize;
                for facet in &f {
                    let val = dot_int(&facet.normal, v);
                    assert!(
                        val >= facet.offset,
                        "facet validation failed: vertex outside halfspace"
                    );
                    if val == facet.offset {
                        tight += 1;
                    }
                }
                assert!(tight >= self.ambient, "vertex not on enough facets");
            }
            let _ = self.facets.set(f);
        }
        Ok(self.facets.get().unwrap())
    }

    pub fn translate(&self, w: &[BigRational]) -> Polytope {
        assert_eq!(w.len(), self.ambient);
        Polytope::from_vertex_list(
            self.ambient,
            self.vertices
                .iter()
                .map(|v| v.iter().zip(w.iter()).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    pub fn dilate(&self, c: &BigRational) -> Polytope {
        Polytope::from_vertex_list(
            self.ambient,
            self.vertices.iter().map(|v| v.iter().map(|a| a * c).collect()).collect(),
        )
    }

    /// Strict interior membership test (full-dimensional only).
    pub fn contains_interior(&self, p: &[BigRational]) -> Result<bool> {
        let facets = self.facets()?;
        Ok(facets.iter().all(|f| dot_int(&f.normal, p) > f.offset))
    }

    /// Non-strict membership.
    pub fn contains(&self, p: &[BigRational]) -> Result<bool> {
        let facets = self.facets()?;
        Ok(facets.iter().all(|f| dot_int(&f.normal, p) >= f.offset))
    }

    /// An interior rational point (vertex centroid).
    pub fn centroid(&self) -> Vecr {
        let k = rat(self.vertices.len() as i64);
        (0..self.ambient)
            .map(|j| self.vertices.iter().map(|v| v[j].clone()).sum::<BigRational>() / k.clone())
            .collect()
    }
}

// ---------------------------------------------------------------------
// hull construction
// ---------------------------------------------------------------------

/// Convex hull of exact rational points. Works in any affine dimension;
/// the H-representation is available when the hull is full-dimensional.
pub fn convex_hull(points: &[Vecr]) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::Precondition("empty point set".into()));
    }
    let ambient = points[0].len();
    if ambient > MAX_HULL_DIM {
        return Err(Error::Precondition(format!(
            "hull guard: ambient dimension {ambient} exceeds {MAX_HULL_DIM}"
        )));
    }
    if points.iter().any(|p| p.len() != ambient) {
        return Err(Error::DimensionMismatch("points of unequal length".into()));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let d = affine_dim(&pts);

    if d == 0 {
        return Ok(Polytope::from_vertex_list(ambient, vec![pts[0].clone()]));
    }
    if d == ambient {
        let vertex_idx = hull_vertices_full_dim(&pts, ambient)?;
        let verts: Vec<Vecr> = vertex_idx.into_iter().map(|i| pts[i].clone()).collect();
        return Ok(Polytope::from_vertex_list(ambient, verts));
    }

    // lower-dimensional: run the hull in affine coordinates
    let chart = AffineChart::new(&pts, d);
    let coords: Vec<Vecr> = pts.iter().map(|p| chart.coords(p)).collect();
    let vertex_idx = hull_vertices_full_dim(&coords, d)?;
    let verts: Vec<Vecr> = vertex_idx.into_iter().map(|i| pts[i].clone()).collect();
    Ok(Polytope::from_vertex_list(ambient, verts))
}

/// Exact affine coordinate chart for a point set of affine dimension d.
struct AffineChart {
    origin: Vecr,
    basis: Matr,     // d x n rows
    gram_inv: Matr,  // (B B^T)^{-1}
}

impl AffineChart {
    fn new(points: &[Vecr], d: usize) -> AffineChart {
        let origin = points[0].clone();
        let mut basis: Matr = Vec::new();
        for p in &points[1..] {
            if basis.len() == d {
                break;
            }
            let cand = sub(p, &origin);
            let mut test = basis.clone();
            test.push(cand.clone());
            if linalg::rank(&test) > basis.len() {
                basis.push(cand);
            }
        }
        assert_eq!(basis.len(), d, "affine basis extraction failed");
        let gram: Matr = basis
            .iter()
            .map(|bi| basis.iter().map(|bj| dot(bi, bj)).collect())
            .collect();
        let gram_inv = invert(&gram).expect("gram matrix of independent rows is invertible");
        AffineChart { origin, basis, gram_inv }
    }

    fn coords(&self, p: &[BigRational]) -> Vecr {
        let diff = sub(p, &self.origin);
        let rhs: Vecr = self.basis.iter().map(|b| dot(b, &diff)).collect();
        self.gram_inv.iter().map(|row| dot(row, &rhs)).collect()
    }
}

fn invert(m: &Matr) -> Option<Matr> {
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

/// Vertex indices of the hull of a full-dimensional point set.
fn hull_vertices_full_dim(pts: &[Vecr], d: usize) -> Result<Vec<usize>> {
    if d == 1 {
        let lo = pts.iter().position_min().unwrap();
        let hi = pts.iter().position_max().unwrap();
        return Ok(if lo == hi { vec![lo] } else { vec![lo, hi] });
    }
    let facets = enumerate_facets(pts, d)?;
    let mut verts = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let tight: Matr = facets
            .iter()
            .filter(|f| dot_int(&f.normal, p) == f.offset)
            .map(|f| f.normal.iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        if linalg::rank(&tight) == d {
            verts.push(i);
        }
    }
    Ok(verts)
}

/// Brute-force facet enumeration over d-subsets of a full-dimensional
/// point set.
fn enumerate_facets(pts: &[Vecr], d: usize) -> Result<Vec<Facet>> {
    if d == 1 {
        let lo = pts.iter().min().unwrap()[0].clone();
        let hi = pts.iter().max().unwrap()[0].clone();
        return Ok(vec![
            Facet { normal: vec![BigInt::one()], offset: lo },
            Facet { normal: vec![-BigInt::one()], offset: -hi },
        ]);
    }
    let mut seen: BTreeMap<(Vec<BigInt>, BigRational), ()> = BTreeMap::new();
    let mut facets = Vec::new();
    for subset in (0..pts.len()).combinations(d) {
        let chosen: Vec<Vecr> = subset.iter().map(|&i| pts[i].clone()).collect();
        let Some(normal) = hyperplane_normal(&chosen) else {
            continue;
        };
        let offset = dot_int(&normal, &chosen[0]);
        let mut above = false;
        let mut below = false;
        for p in pts {
            let val = dot_int(&normal, p);
            if val > offset {
                above = true;
            } else if val < offset {
                below = true;
            }
            if above && below {
                break;
            }
        }
        let (normal, offset) = if above && below {
            continue;
        } else if below {
            let n: Vec<BigInt> = normal.iter().map(|x| -x).collect();
            let o = -offset;
            (n, o)
        } else {
            (normal, offset)
        };
        if seen.insert((normal.clone(), offset.clone()), ()).is_none() {
            facets.push(Facet { normal, offset });
        }
    }
    if facets.is_empty() {
        return Err(Error::Degenerate("no supporting facets found".into()));
    }
    Ok(facets)
}

// ---------------------------------------------------------------------
// polytope arithmetic
// ---------------------------------------------------------------------

/// Newton polytope of a Laurent polynomial.
pub fn newton_polytope(f: &LaurentRat) -> Result<Polytope> {
    if f.is_zero() {
        return Err(Error::Degenerate("Newton polytope of the zero polynomial".into()));
    }
    let pts: Vec<Vecr> = f
        .support()
        .into_iter()
        .map(|e| e.into_iter().map(rat).collect())
        .collect();
    convex_hull(&pts)
}

/// Minkowski sum via the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.ambient != q.ambient {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski sum of ambient dims {} and {}",
            p.ambient, q.ambient
        )));
    }
    let mut sums = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(a.iter().zip(b.iter()).map(|(x, y)| x + y).collect());
        }
    }
    convex_hull(&sums)
}

/// Weighted Minkowski sum Σ w_i · P_i with positive rational weights.
pub fn weighted_sum(polys: &[Polytope], weights: &[BigRational]) -> Result<Polytope> {
    if polys.is_empty() || polys.len() != weights.len() {
        return Err(Error::DimensionMismatch("need one positive weight per polytope".into()));
    }
    for w in weights {
        if !w.is_positive() {
            return Err(Error::Precondition("weights must be positive".into()));
        }
    }
    let mut acc = polys[0].dilate(&weights[0]);
    for (p, w) in polys.iter().zip(weights.iter()).skip(1) {
        acc = minkowski_sum(&acc, &p.dilate(w))?;
    }
    Ok(acc)
}

/// Normal fan of a full-dimensional polytope; cone C_v is generated by
/// the inward normals of the facets through v.
pub fn normal_fan(p: &Polytope) -> Result<NormalFan> {
    let facets = p.facets()?;
    let rays: Vec<Vec<BigInt>> = facets.iter().map(|f| f.normal.clone()).collect();
    let mut cones = Vec::new();
    let mut incidence = Vec::new();
    for v in &p.vertices {
        let idx: Vec<usize> = facets
            .iter()
            .enumerate()
            .filter(|(_, f)| dot_int(&f.normal, v) == f.offset)
            .map(|(k, _)| k)
            .collect();
        let cone_rays: Vec<Vec<BigInt>> = idx.iter().map(|&k| rays[k].clone()).collect();
        cones.push(Cone { rays: cone_rays });
        incidence.push(idx);
    }
    Ok(NormalFan { cones, rays, incidence })
}

/// Polar dual {y : y·p >= -1 for all p in P}. Requires the origin
/// strictly interior.
pub fn polar_dual(p: &Polytope) -> Result<Polytope> {
    let facets = p.facets()?;
    if !facets.iter().all(|f| f.offset.is_negative()) {
        return Err(Error::OriginNotInterior);
    }
    let d = p.ambient;
    let minus_one = -BigRational::one();
    let mut duals: Vec<Vecr> = Vec::new();
    for subset in (0..p.vertices.len()).combinations(d) {
        let m: Matr = subset.iter().map(|&i| p.vertices[i].clone()).collect();
        let rhs = vec![minus_one.clone(); d];
        let Some(y) = linalg::solve_square(&m, &rhs) else {
            continue;
        };
        if p.vertices.iter().all(|v| dot(v, &y) >= minus_one) {
            duals.push(y);
        }
    }
    duals.sort();
    duals.dedup();
    if duals.is_empty() {
        return Err(Error::Degenerate("polar dual has no vertices".into()));
    }
    convex_hull(&duals)
}

/// A triangulation of the polytope into full-dimensional simplices,
/// each listed as vertex indices. Uses the "pulling" rule from the
/// lexicographically smallest vertex, recursing on facets.
pub fn triangulate(p: &Polytope) -> Result<Vec<Vec<usize>>> {
    triangulate_indices(&p.vertices)
}

/// Triangulate a raw point set (indices refer to the input order, which
/// must be sorted ascending for a deterministic pulling vertex).
pub fn triangulate_point_set(points: &[Vecr]) -> Result<Vec<Vec<usize>>> {
    triangulate_indices(points)
}

fn triangulate_indices(points: &[Vecr]) -> Result<Vec<Vec<usize>>> {
    let d = affine_dim(points);
    if points.len() == d + 1 {
        return Ok(vec![(0..points.len()).collect()]);
    }
    // work in affine coordinates for the face combinatorics
    let (coords, dim): (Vec<Vecr>, usize) = if d == points[0].len() {
        (points.to_vec(), d)
    } else {
        let chart = AffineChart::new(points, d);
        (points.iter().map(|p| chart.coords(p)).collect(), d)
    };
    // vertices sorted: index 0 is the lexicographically smallest, the
    // pulling vertex
    let facets = enumerate_facets(&coords, dim)?;
    let pull = 0usize;
    let mut simplices = Vec::new();
    for f in &facets {
        if dot_int(&f.normal, &coords[pull]) == f.offset {
            continue; // facet contains the pulling vertex
        }
        let members: Vec<usize> = (0..coords.len())
            .filter(|&i| dot_int(&f.normal, &coords[i]) == f.offset)
            .collect();
        let sub_points: Vec<Vecr> = members.iter().map(|&i| coords[i].clone()).collect();
        for simp in triangulate_indices(&sub_points)? {
            let mut mapped: Vec<usize> = simp.into_iter().map(|k| members[k]).collect();
            mapped.push(pull);
            simplices.push(mapped);
        }
    }
    Ok(simplices)
}

/// Normalized volume: n! times the Euclidean volume, exact. Zero for
/// lower-dimensional polytopes.
pub fn normalized_volume(p: &Polytope) -> Result<BigRational> {
    if !p.is_full_dimensional() {
        return Ok(BigRational::zero());
    }
    let n = p.ambient;
    let mut vol = BigRational::zero();
    for simp in triangulate(p)? {
        let base = &p.vertices[simp[n]];
        let m: Matr = simp[..n]
            .iter()
            .map(|&i| sub(&p.vertices[i], base))
            .collect();
        vol += linalg::determinant(&m).abs();
    }
    Ok(vol)
}

/// The polar-dual cell B_v = {y in C_v : y·(v - base) >= -1} for every
/// vertex v; the cells subdivide (P - base)°.
pub fn dual_cells(p: &Polytope, base: &[BigRational]) -> Result<Vec<(usize, Polytope)>> {
    if !p.contains_interior(base)? {
        return Err(Error::Precondition("base point must be interior".into()));
    }
    let fan = normal_fan(p)?;
    let mut cells = Vec::new();
    for (vi, v) in p.vertices.iter().enumerate() {
        let shifted = sub(v, base);
        let mut cell_pts: Vec<Vecr> = vec![vec![BigRational::zero(); p.ambient]];
        for ray in &fan.cones[vi].rays {
            let denom = dot_int(ray, &shifted);
            if !denom.is_negative() {
                return Err(Error::Degenerate(
                    "ray pairing non-negative; base point not strictly interior".into(),
                ));
            }
            let t = -denom.recip();
            cell_pts.push(ray.iter().map(|x| BigRational::from_integer(x.clone()) * t.clone()).collect());
        }
        cells.push((vi, convex_hull(&cell_pts)?));
    }
    Ok(cells)
}

// ---------------------------------------------------------------------
// polyhedral cones through the origin
// ---------------------------------------------------------------------

/// Primitive inward facet normals of the full-dimensional cone pos(A)
/// spanned by the given generators.
pub fn cone_facets(generators: &[Vecr]) -> Result<Vec<Vec<BigInt>>> {
    if generators.is_empty() {
        return Err(Error::Degenerate("cone with no generators".into()));
    }
    let d = generators[0].len();
    let full: Matr = generators.to_vec();
    if linalg::rank(&full) != d {
        return Err(Error::Degenerate(format!(
            "cone is not full-dimensional (rank < {d})"
        )));
    }
    if d == 1 {
        let pos = generators.iter().any(|g| g[0].is_positive());
        let neg = generators.iter().any(|g| g[0].is_negative());
        return match (pos, neg) {
            (true, false) => Ok(vec![vec![BigInt::one()]]),
            (false, true) => Ok(vec![vec![-BigInt::one()]]),
            _ => Ok(vec![]), // the whole line: no facets
        };
    }
    let mut seen: BTreeMap<Vec<BigInt>, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for subset in (0..generators.len()).combinations(d - 1) {
        let rows: Matr = subset.iter().map(|&i| generators[i].clone()).collect();
        let kern = linalg::kernel_basis(&rows);
        if kern.len() != 1 {
            continue;
        }
        let normal = primitive_integer(&kern[0]);
        let mut above = false;
        let mut below = false;
        for g in generators {
            let val = dot_int(&normal, g);
            if val.is_positive() {
                above = true;
            } else if val.is_negative() {
                below = true;
            }
            if above && below {
                break;
            }
        }
        let normal = if above && below {
            continue;
        } else if below {
            normal.iter().map(|x| -x).collect()
        } else {
            normal
        };
        if seen.insert(normal.clone(), ()).is_none() {
            out.push(normal);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub struct JsonFacet {
    pub normal: Vec<serde_json::Value>,
    pub offset: [serde_json::Value; 2],
}

#[derive(Serialize, Deserialize)]
pub struct JsonPolytope {
    pub vertices: Vec<Vec<[serde_json::Value; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<JsonFacet>>,
}

impl Polytope {
    pub fn to_json(&self) -> JsonPolytope {
        use crate::laurent::bigint_to_json as ij;
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| [ij(x.numer()), ij(x.denom())]).collect())
            .collect();
        let facets = if self.is_full_dimensional() {
            self.facets().ok().map(|fs| {
                fs.iter()
                    .map(|f| JsonFacet {
                        normal: f.normal.iter().map(ij).collect(),
                        offset: [ij(f.offset.numer()), ij(f.offset.denom())],
                    })
                    .collect()
            })
        } else {
            None
        };
        JsonPolytope { vertices, facets }
    }
}
