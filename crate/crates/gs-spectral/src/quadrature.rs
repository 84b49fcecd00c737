//! Gauss quadrature on the reference triangle.
//!
//! Rules come from collapsing a tensor-product Gauss-Legendre grid on the
//! unit square onto the triangle `{(xi, eta): xi, eta >= 0, xi + eta <= 1}`
//! through the map `xi = (1 - s) r, eta = s`, whose Jacobian `(1 - s)` is
//! folded into the weights. The collapse raises the polynomial degree seen
//! in the `s` direction by one, so a rule for total degree `d` uses
//! `n = (d + 3) / 2` points per direction (`2n - 1 >= d + 1`).

use nalgebra::{DMatrix, SymmetricEigen};

/// Quadrature rule on the reference triangle with vertices
/// `(0,0), (1,0), (0,1)`. Positive weights summing to the triangle
/// area `1/2`; exact for all polynomials of total degree <= `degree`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub degree: usize,
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Rule exact for total degree `degree` on the reference triangle.
    pub fn triangle(degree: usize) -> Self {
        let n = (degree + 3) / 2;
        let (nodes, weights) = gauss_legendre_unit(n.max(1));
        let mut pts = Vec::with_capacity(n * n);
        let mut wts = Vec::with_capacity(n * n);
        for (i, &s) in nodes.iter().enumerate() {
            for (j, &r) in nodes.iter().enumerate() {
                pts.push([(1.0 - s) * r, s]);
                wts.push(weights[i] * weights[j] * (1.0 - s));
            }
        }
        Self {
            degree,
            points: pts,
            weights: wts,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`, exact for polynomials of
/// degree `2n - 1`. Computed by the Golub-Welsch eigenvalue method.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature needs at least one point");
    if n == 1 {
        return (vec![0.5], vec![1.0]);
    }
    // Jacobi matrix of the Legendre recurrence on [-1, 1].
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let node = eig.eigenvalues[i];
            let w = 2.0 * eig.eigenvectors[(0, i)].powi(2);
            (node, w)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // map [-1, 1] -> [0, 1]
    let nodes = pairs.iter().map(|&(x, _)| 0.5 * (x + 1.0)).collect();
    let weights = pairs.iter().map(|&(_, w)| 0.5 * w).collect();
    (nodes, weights)
}

/// Exact moment of the monomial `xi^a eta^b` over the reference triangle:
/// `a! b! / (a + b + 2)!`.
pub fn triangle_monomial_moment(a: usize, b: usize) -> f64 {
    let mut value = 1.0;
    // a! b! / (a+b+2)! computed incrementally to stay in range
    for k in 1..=(a + b + 2) {
        value /= k as f64;
    }
    for k in 1..=a {
        value *= k as f64;
    }
    for k in 1..=b {
        value *= k as f64;
    }
    value
}
