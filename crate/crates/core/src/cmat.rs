//! Dense complex matrix helpers shared by the quaternionic layer.

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Maximum absolute column sum.
pub fn norm1(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

const TAYLOR_TERMS: usize = 18;
const SCALED_NORM: f64 = 0.25;

/// Matrix exponential by scaling and squaring with a truncated Taylor core.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/4; at that
/// size 18 Taylor terms are below double-precision roundoff.
pub fn expm(m: &CMatrix) -> CMatrix {
    assert!(m.is_square());
    let dim = m.nrows();
    let norm = norm1(m);
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m * C64::new(0.5f64.powi(squarings), 0.0);

    // Horner evaluation of sum_{k <= N} A^k / k!
    let identity = CMatrix::identity(dim, dim);
    let mut acc = identity.clone();
    for k in (1..=TAYLOR_TERMS).rev() {
        acc = &identity + (&scaled * &acc) * C64::new(1.0 / k as f64, 0.0);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

/// Singular values in descending order.
pub fn singular_values_desc(m: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Right singular vector belonging to the smallest singular value.
pub fn smallest_right_singular_vector(m: &CMatrix) -> (f64, Vec<C64>) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let (idx, sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, s)| (i, *s))
        .expect("non-empty matrix");
    let v = v_t.row(idx).iter().map(|z| z.conj()).collect();
    (sigma, v)
}
