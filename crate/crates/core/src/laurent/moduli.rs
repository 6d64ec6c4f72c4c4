//! Moduli-space factor polynomials.
//!
//! Points of the m-marked genus-zero moduli space are parameterized by a
//! 2×m matrix whose second row is (0, 1, 1+x1, 1+x1+x2, ..., 1). The
//! integrand factors are the 2×2 minors f_{ij} for 1 < i+1 < j < m;
//! constant minors and plain variables are excluded.

use num_rational::BigRational;
use num_traits::One;

use super::LaurentRat;
use crate::error::{Error, Result};

/// The non-trivial matrix minors in n = m-3 variables, in row-major
/// (i, j) order.
pub fn moduli_minors(m: usize) -> Result<Vec<LaurentRat>> {
    if m < 4 {
        return Err(Error::Precondition(format!("need m >= 4 marked points, got {m}")));
    }
    let n = m - 3;
    // second-row entries b_k for columns k = 1..m-1:
    //   b_1 = 0, b_2 = 1, b_k = 1 + x1 + ... + x_{k-2}
    let b = |k: usize| -> LaurentRat {
        let mut p = LaurentRat::zero(n);
        if k >= 2 {
            p.add_term(&vec![0; n], BigRational::one());
            for v in 0..k.saturating_sub(2) {
                let mut exp = vec![0i64; n];
                exp[v] = 1;
                p.add_term(&exp, BigRational::one());
            }
        }
        p
    };

    let mut out = Vec::new();
    for i in 1..m {
        for j in (i + 2)..m {
            // f_ij = b_j - b_i for columns inside the all-ones first row
            out.push(b(j).sub(&b(i)));
        }
    }
    Ok(out)
}

/// The three factors of the five-point moduli integrand: 1+x1,
/// 1+x1+x2, x1+x2.
pub fn m05_factors() -> Vec<LaurentRat> {
    moduli_minors(5).unwrap()
}
