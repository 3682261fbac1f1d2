#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use slnh_core::{HMatrix, Quaternion as Q};

pub type C = Complex<f64>;

/// `A* = E12 (1+j) + E21 (i+k)`, `B* = diag(1+i, -1+i√2)`.
pub fn seed_pair() -> (HMatrix, HMatrix) {
    let mut a = HMatrix::zeros(2);
    a[(0, 1)] = Q::new(1.0, 0.0, 1.0, 0.0);
    a[(1, 0)] = Q::new(0.0, 1.0, 0.0, 1.0);
    let b = HMatrix::complex_diag(&[(1.0, 1.0), (-1.0, 2f64.sqrt())]);
    (a, b)
}

/// Complex adjoint written out from the components, `q = (w + xi) + (y + zi) j`.
pub fn chi(m: &HMatrix) -> DMatrix<C> {
    let n = m.n();
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for s in 0..n {
            let q = m[(r, s)];
            c[(2 * r, 2 * s)] = C::new(q.w, q.x);
            c[(2 * r, 2 * s + 1)] = C::new(q.y, q.z);
            c[(2 * r + 1, 2 * s)] = C::new(-q.y, q.z);
            c[(2 * r + 1, 2 * s + 1)] = C::new(q.w, -q.x);
        }
    }
    c
}

pub fn cbracket(x: &DMatrix<C>, y: &DMatrix<C>) -> DMatrix<C> {
    x * y - y * x
}

pub fn cnorm(x: &DMatrix<C>) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rank of all left-normed bracket words of length at most `depth + 1`,
/// from the singular values of the stacked (normalized) words.
pub fn gram_rank(gens: &[HMatrix], depth: usize) -> usize {
    let gens: Vec<DMatrix<C>> = gens.iter().map(chi).collect();
    let mut words: Vec<DMatrix<C>> = gens.clone();
    let mut level = gens.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for g in &gens {
            for w in &level {
                let b = cbracket(g, w);
                let norm = cnorm(&b);
                if norm > 1e-12 {
                    next.push(b / C::new(norm, 0.0));
                }
            }
        }
        words.extend(next.iter().cloned());
        level = next;
    }
    let dim = words[0].len();
    let m = DMatrix::from_fn(words.len(), 2 * dim, |i, j| {
        let z = words[i][j % dim] / C::new(cnorm(&words[i]).max(1e-300), 0.0);
        if j < dim {
            z.re
        } else {
            z.im
        }
    });
    let sv = m.singular_values();
    let top = sv.max();
    sv.iter().filter(|s| **s > 1e-8 * top).count()
}

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
