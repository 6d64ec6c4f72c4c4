//! Gauss–Laguerre nodes and weights via Golub–Welsch.
//!
//! The Jacobi matrix of the Laguerre recurrence is symmetric
//! tridiagonal with diagonal 2k+1 and off-diagonal k; its eigenvalues
//! are the nodes and the squared first eigenvector components are the
//! weights (the zeroth moment of e^{-x} is 1).

use nalgebra::DMatrix;

pub fn nodes_weights(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut j = DMatrix::from_element(m, m, 0.0_f64);
    for k in 0..m {
        j[(k, k)] = (2 * k + 1) as f64;
        if k + 1 < m {
            j[(k, k + 1)] = (k + 1) as f64;
            j[(k + 1, k)] = (k + 1) as f64;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let node = eig.eigenvalues[i];
            let q0 = eig.eigenvectors[(0, i)];
            (node, q0 * q0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}
