//! Square quaternionic matrices, the complex adjoint representation, the
//! Study absolute determinant and the group exponential.
//!
//! An [`HMatrix`] plays two roles. As a group element it lives in
//! `Sl(n,H)` (Study absolute determinant one); as an algebra element it lives
//! in `sl(n,H)` (real part of the trace zero). Both are plain `HMatrix`
//! values; [`HMatrix::ensure_in_algebra`] and [`HMatrix::ensure_in_group`]
//! check the refinement where an operation needs it.
//!
//! The complex adjoint `χ` writes every entry `q = z1 + z2·j` as the block
//! `[[z1, z2], [-conj(z2), conj(z1)]]`. It is an injective real algebra
//! homomorphism into `2n × 2n` complex matrices, and the exponential,
//! inverse and determinant are all computed through it.

use crate::cmat::{self, CMatrix, C64};
use crate::error::{Error, Result};
use crate::quat::Quaternion;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Relative tolerance used for `Re tr = 0` and `|det| = 1` membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Dense `n × n` quaternionic matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HMatrixRepr", into = "HMatrixRepr")]
pub struct HMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

#[derive(Serialize, Deserialize)]
struct HMatrixRepr {
    n: usize,
    entries: Vec<Vec<Quaternion>>,
}

impl TryFrom<HMatrixRepr> for HMatrix {
    type Error = Error;

    fn try_from(r: HMatrixRepr) -> Result<Self> {
        let m = HMatrix::from_rows(r.entries)?;
        if m.n != r.n {
            return Err(Error::SizeMismatch {
                expected: r.n,
                found: m.n,
            });
        }
        Ok(m)
    }
}

impl From<HMatrix> for HMatrixRepr {
    fn from(m: HMatrix) -> Self {
        HMatrixRepr {
            n: m.n,
            entries: m.rows(),
        }
    }
}

impl HMatrix {
    pub fn zeros(n: usize) -> Self {
        HMatrix {
            n,
            data: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for r in 0..n {
            m[(r, r)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let data = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        HMatrix { n, data }
    }

    /// Builds a matrix from a list of rows; rows must form a non-empty square.
    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidSize(0, "matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(HMatrix { n, data })
    }

    /// `E_{rs} · q` with 0-based indices.
    pub fn unit(n: usize, r: usize, s: usize, q: Quaternion) -> Self {
        let mut m = Self::zeros(n);
        m[(r, s)] = q;
        m
    }

    pub fn diag(entries: &[Quaternion]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (r, &q) in entries.iter().enumerate() {
            m[(r, r)] = q;
        }
        m
    }

    /// Complex diagonal matrix `diag(a_r + i b_r)`.
    pub fn complex_diag(entries: &[(f64, f64)]) -> Self {
        let qs: Vec<Quaternion> = entries
            .iter()
            .map(|&(a, b)| Quaternion::complex(a, b))
            .collect();
        Self::diag(&qs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Quaternion>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Quaternion> {
        (0..self.n).map(|r| self[(r, r)]).collect()
    }

    pub fn trace(&self) -> Quaternion {
        self.diagonal().into_iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        HMatrix {
            n: self.n,
            data: self.data.iter().map(|&q| q * s).collect(),
        }
    }

    /// Entrywise quaternionic conjugate of the transpose.
    pub fn conj_transpose(&self) -> Self {
        HMatrix::from_fn(self.n, |r, s| self[(s, r)].conj())
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let bound = tol * self.frobenius_norm().max(f64::MIN_POSITIVE);
        (0..self.n).all(|r| (0..self.n).all(|s| r == s || self[(r, s)].norm() <= bound))
    }

    fn check_same_size(&self, other: &HMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// `|Re tr| / max(1, ‖M‖_F)`; zero for members of `sl(n,H)`.
    pub fn trace_free_residual(&self) -> f64 {
        self.trace().w.abs() / self.frobenius_norm().max(1.0)
    }

    pub fn ensure_in_algebra(&self) -> Result<()> {
        let res = self.trace_free_residual();
        if res > MEMBERSHIP_TOL {
            return Err(Error::NotInAlgebra(res));
        }
        Ok(())
    }

    pub fn ensure_in_group(&self) -> Result<()> {
        let det = self.study_det_abs();
        if (det - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(Error::NotInGroup(det));
        }
        Ok(())
    }

    /// Lie bracket `XY - YX`.
    pub fn bracket(&self, other: &HMatrix) -> Result<HMatrix> {
        self.check_same_size(other)?;
        Ok(&(self * other) - &(other * self))
    }

    /// `g X g^{-1}`.
    pub fn conjugate_by(&self, g: &HMatrix) -> Result<HMatrix> {
        self.check_same_size(g)?;
        let g_inv = g.inverse()?;
        Ok(&(g * self) * &g_inv)
    }

    /// The complex adjoint `χ(M)`, a `2n × 2n` complex matrix.
    pub fn complex_adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut c = CMatrix::zeros(2 * n, 2 * n);
        for r in 0..n {
            for s in 0..n {
                let q = self[(r, s)];
                let z1 = C64::new(q.w, q.x);
                let z2 = C64::new(q.y, q.z);
                c[(2 * r, 2 * s)] = z1;
                c[(2 * r, 2 * s + 1)] = z2;
                c[(2 * r + 1, 2 * s)] = -z2.conj();
                c[(2 * r + 1, 2 * s + 1)] = z1.conj();
            }
        }
        c
    }

    /// Inverse of [`complex_adjoint`](Self::complex_adjoint), read off the
    /// first row of each 2×2 block.
    pub fn from_complex_adjoint(c: &CMatrix) -> Result<HMatrix> {
        if !c.is_square() || c.nrows() % 2 != 0 || c.nrows() == 0 {
            return Err(Error::InvalidSize(
                c.nrows(),
                "complex adjoint must be square of even size",
            ));
        }
        let n = c.nrows() / 2;
        Ok(HMatrix::from_fn(n, |r, s| {
            let z1 = c[(2 * r, 2 * s)];
            let z2 = c[(2 * r, 2 * s + 1)];
            Quaternion::from_complex_pair((z1.re, z1.im), (z2.re, z2.im))
        }))
    }

    /// Study absolute determinant `det(χ(g))^{1/2}`.
    pub fn study_det_abs(&self) -> f64 {
        // det χ(g) is real and nonnegative; its modulus is the stable estimate
        self.complex_adjoint().determinant().norm().sqrt()
    }

    pub fn inverse(&self) -> Result<HMatrix> {
        let c = self.complex_adjoint();
        let x0 = c.clone().try_inverse().ok_or(Error::Singular)?;
        if x0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Singular);
        }
        // The LU inverse has a small residual but its roundoff is not
        // quaternionic, and dropping that part loses the small residual.
        // One Newton step X ← X + X(I - gX) on the projection restores it.
        let x = HMatrix::from_complex_adjoint(&x0)?;
        let resid = &HMatrix::identity(self.n) - &(self * &x);
        Ok(&x + &(&x * &resid))
    }

    /// Group exponential, via scaling and squaring on `χ(X)`.
    pub fn exp(&self) -> HMatrix {
        let c = cmat::expm(&self.complex_adjoint());
        debug_assert!(
            !cmat::frobenius(&c).is_finite()
                || quaternionic_residual(&c) <= 1e-9 * cmat::frobenius(&c).max(1.0),
            "exp left the image of the complex adjoint"
        );
        HMatrix::from_complex_adjoint(&c).expect("even square")
    }

    /// Rescales `g` so that its Study absolute determinant is one.
    pub fn renormalize_det(&self) -> Result<HMatrix> {
        let det = self.study_det_abs();
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::Singular);
        }
        Ok(self.scale(det.powf(-1.0 / self.n as f64)))
    }

    /// Real coordinates, row-major over entries and `(w, x, y, z)` within
    /// each entry. Length `4n²`.
    pub fn vectorize(&self) -> Vec<f64> {
        self.data.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn from_vector(n: usize, v: &[f64]) -> Result<HMatrix> {
        if v.len() != 4 * n * n {
            return Err(Error::SizeMismatch {
                expected: 4 * n * n,
                found: v.len(),
            });
        }
        let data = v
            .chunks(4)
            .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
            .collect();
        Ok(HMatrix { n, data })
    }

    /// Frobenius distance to another matrix of the same size.
    pub fn distance(&self, other: &HMatrix) -> f64 {
        assert_eq!(self.n, other.n, "distance between different sizes");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sq())
            .sum::<f64>()
            .sqrt()
    }
}

/// Distance of a complex matrix from the image of `χ`: the 2×2 blocks must
/// have the shape `[[z1, z2], [-conj(z2), conj(z1)]]`.
pub fn quaternionic_residual(c: &CMatrix) -> f64 {
    let n = c.nrows() / 2;
    let mut acc = 0.0;
    for r in 0..n {
        for s in 0..n {
            let z1 = c[(2 * r, 2 * s)];
            let z2 = c[(2 * r, 2 * s + 1)];
            acc += (c[(2 * r + 1, 2 * s)] + z2.conj()).norm_sqr();
            acc += (c[(2 * r + 1, 2 * s + 1)] - z1.conj()).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Group exponential of an algebra element.
pub fn hexp(x: &HMatrix) -> HMatrix {
    x.exp()
}

/// Lie bracket `XY - YX`.
pub fn bracket(x: &HMatrix, y: &HMatrix) -> Result<HMatrix> {
    x.bracket(y)
}

/// Study absolute determinant.
pub fn study_det_abs(g: &HMatrix) -> f64 {
    g.study_det_abs()
}

/// Orthonormal basis of `sl(n,H)` inside the vectorized coordinates.
///
/// The first `n - 1` elements are real trace-free diagonals (Helmert
/// contrasts); after them come, entry by entry in row-major order, the unit
/// quaternion directions, skipping the real unit on the diagonal.
pub fn trace_free_basis(n: usize) -> Vec<HMatrix> {
    let mut basis = Vec::with_capacity(4 * n * n - 1);
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut m = HMatrix::zeros(n);
        for r in 0..k {
            m[(r, r)] = Quaternion::real(1.0 / norm);
        }
        m[(k, k)] = Quaternion::real(-(k as f64) / norm);
        basis.push(m);
    }
    for r in 0..n {
        for s in 0..n {
            for (u, &unit) in Quaternion::UNITS.iter().enumerate() {
                if r == s && u == 0 {
                    continue;
                }
                basis.push(HMatrix::unit(n, r, s, unit));
            }
        }
    }
    basis
}

/// Coordinates of `x` in [`trace_free_basis`]; the real trace is ignored.
pub fn trace_free_coordinates(x: &HMatrix) -> Vec<f64> {
    let v = x.vectorize();
    trace_free_basis(x.n())
        .iter()
        .map(|b| b.vectorize().iter().zip(&v).map(|(a, c)| a * c).sum())
        .collect()
}

/// Element of `sl(n,H)` with independent standard Gaussian coordinates in
/// [`trace_free_basis`], deterministic in `seed`.
pub fn random_algebra_element(n: usize, seed: u64) -> Result<HMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_algebra_element_with(n, &mut rng)
}

pub fn random_algebra_element_with<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HMatrix> {
    if n < 1 {
        return Err(Error::InvalidSize(n, "n must be at least 1"));
    }
    let mut m = HMatrix::zeros(n);
    // real diagonal: Helmert contrasts
    for k in 1..n {
        let c: f64 = StandardNormal.sample(rng);
        let norm = ((k * (k + 1)) as f64).sqrt();
        for r in 0..k {
            m[(r, r)].w += c / norm;
        }
        m[(k, k)].w -= c * k as f64 / norm;
    }
    for r in 0..n {
        for s in 0..n {
            let mut coords = [0.0; 4];
            for (u, c) in coords.iter_mut().enumerate() {
                if r == s && u == 0 {
                    continue;
                }
                *c = StandardNormal.sample(rng);
            }
            let q = &mut m[(r, s)];
            q.x = coords[1];
            q.y = coords[2];
            q.z = coords[3];
            if r != s {
                q.w = coords[0];
            }
        }
    }
    Ok(m)
}

impl Index<(usize, usize)> for HMatrix {
    type Output = Quaternion;
    fn index(&self, (r, s): (usize, usize)) -> &Quaternion {
        &self.data[r * self.n + s]
    }
}

impl IndexMut<(usize, usize)> for HMatrix {
    fn index_mut(&mut self, (r, s): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.n + s]
    }
}

impl<'a> Mul<&'a HMatrix> for &'a HMatrix {
    type Output = HMatrix;
    fn mul(self, o: &HMatrix) -> HMatrix {
        assert_eq!(self.n, o.n, "matrix product of different sizes");
        let n = self.n;
        let mut out = HMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for s in 0..n {
                    out.data[r * n + s] += a * o[(k, s)];
                }
            }
        }
        out
    }
}

impl Mul for HMatrix {
    type Output = HMatrix;
    fn mul(self, o: HMatrix) -> HMatrix {
        &self * &o
    }
}

impl<'a> Add<&'a HMatrix> for &'a HMatrix {
    type Output = HMatrix;
    fn add(self, o: &HMatrix) -> HMatrix {
        assert_eq!(self.n, o.n, "sum of different sizes");
        HMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Add for HMatrix {
    type Output = HMatrix;
    fn add(self, o: HMatrix) -> HMatrix {
        &self + &o
    }
}

impl<'a> Sub<&'a HMatrix> for &'a HMatrix {
    type Output = HMatrix;
    fn sub(self, o: &HMatrix) -> HMatrix {
        assert_eq!(self.n, o.n, "difference of different sizes");
        HMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Sub for HMatrix {
    type Output = HMatrix;
    fn sub(self, o: HMatrix) -> HMatrix {
        &self - &o
    }
}

impl Neg for &HMatrix {
    type Output = HMatrix;
    fn neg(self) -> HMatrix {
        self.scale(-1.0)
    }
}

impl Neg for HMatrix {
    type Output = HMatrix;
    fn neg(self) -> HMatrix {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quaternion as Q;

    fn rel(a: &HMatrix, b: &HMatrix) -> f64 {
        a.distance(b) / a.frobenius_norm().max(b.frobenius_norm()).max(1.0)
    }

    #[test]
    fn bracket_examples() {
        let x = HMatrix::unit(2, 0, 1, Q::I);
        let y = HMatrix::unit(2, 1, 0, Q::J);
        assert_eq!(x.bracket(&y).unwrap(), HMatrix::diag(&[Q::K, Q::K]));
        assert_eq!(x.bracket(&x).unwrap(), HMatrix::zeros(2));
        let h = HMatrix::diag(&[Q::ONE, -Q::ONE]);
        let p = Q::new(0.3, -1.0, 2.0, 0.5);
        let e = HMatrix::unit(2, 0, 1, p);
        assert_eq!(h.bracket(&e).unwrap(), HMatrix::unit(2, 0, 1, p * 2.0));
        assert!(x.bracket(&HMatrix::zeros(3)).is_err());
    }

    #[test]
    fn complex_adjoint_examples() {
        let one = HMatrix::identity(1).complex_adjoint();
        assert_eq!(one, CMatrix::identity(2, 2));
        let j = HMatrix::diag(&[Q::J]).complex_adjoint();
        let expect = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)],
        );
        assert_eq!(j, expect);
        let i = HMatrix::diag(&[Q::I]).complex_adjoint();
        let expect = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        );
        assert_eq!(i, expect);
    }

    #[test]
    fn study_det_of_scalar_is_norm() {
        // det χ(q) = |z1|² + |z2|² by direct 2×2 expansion
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let c: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let q = Q::from(c);
            let z1_sq = c[0] * c[0] + c[1] * c[1];
            let z2_sq = c[2] * c[2] + c[3] * c[3];
            let brute = ((z1_sq + z2_sq) as f64).sqrt();
            let det = HMatrix::diag(&[q]).study_det_abs();
            assert!((det - brute).abs() < 1e-12 * brute.max(1.0));
            assert!((det - q.norm()).abs() < 1e-12 * brute.max(1.0));
        }
        assert!((HMatrix::identity(3).study_det_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(HMatrix::zeros(3).exp(), HMatrix::identity(3));
        let x = HMatrix::complex_diag(&[(0.0, std::f64::consts::FRAC_PI_2), (0.0, 0.0), (0.0, 0.0)]);
        let e = x.exp();
        assert!((e[(0, 0)] - Q::I).norm() < 1e-14);
        let t = 0.7;
        let e = HMatrix::diag(&[Q::real(t), Q::real(-t)]).exp();
        let expect = HMatrix::diag(&[Q::real(t.exp()), Q::real((-t).exp())]);
        assert!(rel(&e, &expect) < 1e-14);
    }

    #[test]
    fn exp_of_algebra_element_is_in_group() {
        for seed in 0..20 {
            let x = random_algebra_element(3, seed).unwrap().scale(0.5);
            let g = x.exp();
            assert!((g.study_det_abs() - 1.0).abs() < 1e-10);
            let back = &g * &(-&x).exp();
            assert!(rel(&back, &HMatrix::identity(3)) < 1e-10);
        }
    }

    #[test]
    fn exp_on_cartan_is_entrywise() {
        let d = [(0.4, 1.3), (-0.1, -2.0), (-0.3, 0.25)];
        let e = HMatrix::complex_diag(&d).exp();
        for (r, &(a, b)) in d.iter().enumerate() {
            let expect = Q::cis(b) * a.exp();
            assert!((e[(r, r)] - expect).norm() < 1e-13);
        }
        assert!(e.is_diagonal(1e-14));
    }

    #[test]
    fn vectorize_ordering() {
        assert_eq!(HMatrix::zeros(2).vectorize(), vec![0.0; 16]);
        assert_eq!(HMatrix::identity(1).vectorize(), vec![1.0, 0.0, 0.0, 0.0]);
        let v = HMatrix::unit(2, 0, 1, Q::J).vectorize();
        let hot: Vec<usize> = v.iter().enumerate().filter(|(_, &x)| x != 0.0).map(|(i, _)| i).collect();
        assert_eq!(hot, vec![6]);
        let m = random_algebra_element(3, 9).unwrap();
        assert_eq!(HMatrix::from_vector(3, &m.vectorize()).unwrap(), m);
    }

    #[test]
    fn trace_free_constraint_has_rank_one() {
        for n in 1..=4 {
            let basis = trace_free_basis(n);
            assert_eq!(basis.len(), 4 * n * n - 1);
            // orthonormal, and each one trace free
            for (a, x) in basis.iter().enumerate() {
                assert!(x.trace().w.abs() < 1e-15);
                for (b, y) in basis.iter().enumerate() {
                    let dot: f64 = x.vectorize().iter().zip(y.vectorize()).map(|(p, q)| p * q).sum();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn random_elements() {
        let a = random_algebra_element(3, 42).unwrap();
        let b = random_algebra_element(3, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.trace().w.abs() < 1e-12);
        assert!(random_algebra_element(0, 1).is_err());
        let coords = trace_free_coordinates(&a);
        let rebuilt = trace_free_basis(3)
            .iter()
            .zip(&coords)
            .fold(HMatrix::zeros(3), |acc, (b, &c)| &acc + &b.scale(c));
        assert!(rel(&rebuilt, &a) < 1e-14);
    }

    #[test]
    fn coordinate_variance_is_one() {
        let draws = 10_000;
        let dim = 15;
        let mut sum = vec![0.0; dim];
        let mut sum_sq = vec![0.0; dim];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..draws {
            let x = random_algebra_element_with(2, &mut rng).unwrap();
            for (k, c) in trace_free_coordinates(&x).into_iter().enumerate() {
                sum[k] += c;
                sum_sq[k] += c * c;
            }
        }
        for k in 0..dim {
            let mean = sum[k] / draws as f64;
            let var = sum_sq[k] / draws as f64 - mean * mean;
            assert!((0.9..=1.1).contains(&var), "coordinate {k} variance {var}");
        }
    }

    #[test]
    fn renormalize_det() {
        let g = HMatrix::identity(3).scale(2.0);
        let h = g.renormalize_det().unwrap();
        assert!((h.study_det_abs() - 1.0).abs() < 1e-14);
        assert!(HMatrix::zeros(2).renormalize_det().is_err());
    }

    #[test]
    fn json_layout() {
        let m = HMatrix::from_rows(vec![
            vec![Q::ONE, Q::J],
            vec![Q::new(0.0, 1.0, 0.0, 1.0), Q::real(-1.0)],
        ])
        .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"n":2,"entries":[[[1.0,0.0,0.0,0.0],[0.0,0.0,1.0,0.0]],[[0.0,1.0,0.0,1.0],[-1.0,0.0,0.0,0.0]]]}"#
        );
        let back: HMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<HMatrix>(r#"{"n":3,"entries":[[[1,0,0,0]]]}"#).is_err());
        assert!(serde_json::from_str::<HMatrix>(r#"{"n":2,"entries":[[[1,0,0,0],[0,0,0,0]],[[1,0,0,0]]]}"#).is_err());
    }

    #[test]
    fn singular_inverse_is_rejected() {
        assert_eq!(HMatrix::zeros(2).inverse(), Err(Error::Singular));
        let e = HMatrix::unit(2, 0, 1, Q::ONE);
        assert!(e.inverse().is_err());
    }
}
