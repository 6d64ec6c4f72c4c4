//! Exact linear algebra over the rationals, sized for desk-scale
//! polyhedral computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Vecr = Vec<BigRational>;
pub type Matr = Vec<Vecr>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn dot_int(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
        .sum()
}

pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vecr {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

/// Row echelon reduction in place; returns pivot column indices.
pub fn row_reduce(m: &mut Matr) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone().recip();
        for x in m[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Matr) -> usize {
    let mut work = m.clone();
    row_reduce(&mut work).len()
}

/// Kernel basis of the row space map x -> M x.
pub fn kernel_basis(m: &Matr) -> Vec<Vecr> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let mut work = m.clone();
    let pivots = row_reduce(&mut work);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve the square system M x = b exactly; `None` when singular.
pub fn solve_square(m: &Matr, b: &[BigRational]) -> Option<Vecr> {
    let n = m.len();
    if n == 0 {
        return Some(vec![]);
    }
    assert!(m.iter().all(|row| row.len() == n));
    let mut aug: Matr = m
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// Exact determinant by fraction-free-ish elimination.
pub fn determinant(m: &Matr) -> BigRational {
    let n = m.len();
    let mut work = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !work[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            work.swap(p, c);
            det = -det;
        }
        det *= work[c][c].clone();
        let inv = work[c][c].clone().recip();
        for i in (c + 1)..n {
            if work[i][c].is_zero() {
                continue;
            }
            let f = work[i][c].clone() * inv.clone();
            for j in c..n {
                let t = work[c][j].clone() * f.clone();
                work[i][j] -= t;
            }
        }
    }
    det
}

/// Scale a rational vector to a primitive integer vector (gcd 1),
/// preserving direction.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Normal direction of the hyperplane through the given points (a basis
/// of the 1-dimensional kernel), or `None` when the points do not span
/// a hyperplane.
pub fn hyperplane_normal(points: &[Vecr]) -> Option<Vec<BigInt>> {
    let n = points[0].len();
    if points.len() != n {
        return None;
    }
    // rows: p_i - p_0 for i >= 1; normal is in the kernel
    let rows: Matr = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    let kern = kernel_basis(&rows);
    if kern.len() != 1 {
        return None;
    }
    Some(primitive_integer(&kern[0]))
}

/// Affine rank of a point set (dimension of its affine hull).
pub fn affine_dim(points: &[Vecr]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let rows: Matr = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_wide_matrix() {
        // kernel of [1 1 1; 0 1 2] is spanned by (1, -2, 1)
        let m = vec![
            vec![rat(1), rat(1), rat(1)],
            vec![rat(0), rat(1), rat(2)],
        ];
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let prim = primitive_integer(&k[0]);
        let expect: Vec<BigInt> = [1, -2, 1].iter().map(|&x| BigInt::from(x)).collect();
        let neg: Vec<BigInt> = expect.iter().map(|x| -x).collect();
        assert!(prim == expect || prim == neg);
    }

    #[test]
    fn determinant_and_solve() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        assert_eq!(determinant(&m), rat(5));
        let x = solve_square(&m, &[rat(4), rat(7)]).unwrap();
        assert_eq!(dot(&m[0], &x), rat(4));
        assert_eq!(dot(&m[1], &x), rat(7));
    }

    #[test]
    fn hyperplane_through_points() {
        // through (1,0) and (0,1): normal (1,1)
        let pts = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        let nrm = hyperplane_normal(&pts).unwrap();
        assert_eq!(nrm[0], nrm[1]);
    }

    #[test]
    fn affine_dimension() {
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(1)],
            vec![rat(2), rat(2)],
        ];
        assert_eq!(affine_dim(&pts), 1);
    }
}
