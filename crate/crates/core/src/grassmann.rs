//! Quaternionic Grassmannians `Gr_d(H^n)` of right submodules.
//!
//! A point is stored as an `n × d` frame `F` with `Fᴴ F = I_d`. The inner
//! product is `⟨u, v⟩ = Σ conj(u_a) v_a`, and scalars act on the right, so
//! the span `{F c}` and the projector `F Fᴴ` do not depend on the frame.

use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::quat::Quaternion;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Relative norm under which a Gram–Schmidt residual counts as lost rank.
pub const COLLAPSE_TOL: f64 = 1e-10;

/// Column-major `n × d` quaternionic frame with orthonormal columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrassmannPoint {
    n: usize,
    d: usize,
    columns: Vec<Vec<Quaternion>>,
}

fn inner(u: &[Quaternion], v: &[Quaternion]) -> Quaternion {
    u.iter().zip(v).map(|(a, b)| a.conj() * *b).sum()
}

fn col_norm(u: &[Quaternion]) -> f64 {
    u.iter().map(|q| q.norm_sq()).sum::<f64>().sqrt()
}

/// `v ← v - u ⟨u, v⟩` for unit `u`.
fn remove_component(v: &mut [Quaternion], u: &[Quaternion]) {
    let c = inner(u, v);
    for (x, y) in v.iter_mut().zip(u) {
        *x = *x - *y * c;
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
fn orthonormalize(columns: Vec<Vec<Quaternion>>) -> Result<Vec<Vec<Quaternion>>> {
    let mut done: Vec<Vec<Quaternion>> = Vec::with_capacity(columns.len());
    for mut v in columns {
        let original = col_norm(&v);
        for _ in 0..2 {
            for u in &done {
                remove_component(&mut v, u);
            }
        }
        let norm = col_norm(&v);
        if !(norm > COLLAPSE_TOL * original) {
            return Err(Error::RankCollapse(if original > 0.0 { norm / original } else { 0.0 }));
        }
        for x in &mut v {
            *x = *x * (1.0 / norm);
        }
        done.push(v);
    }
    Ok(done)
}

impl GrassmannPoint {
    /// Orthonormalizes the given columns (each of length `n`).
    pub fn from_columns(n: usize, columns: Vec<Vec<Quaternion>>) -> Result<Self> {
        let d = columns.len();
        if d == 0 || d > n {
            return Err(Error::InvalidSize(d, "subspace dimension must be in 1..=n"));
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(GrassmannPoint {
            n,
            d,
            columns: orthonormalize(columns)?,
        })
    }

    /// `V_d`, spanned by the first `d` standard basis vectors.
    pub fn standard(n: usize, d: usize) -> Result<Self> {
        let cols = (0..d)
            .map(|k| {
                let mut e = vec![Quaternion::ZERO; n];
                if k < n {
                    e[k] = Quaternion::ONE;
                }
                e
            })
            .collect();
        Self::from_columns(n, cols)
    }

    /// Span of Gaussian columns.
    pub fn random<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Self> {
        let cols = (0..d).map(|_| gaussian_column(n, rng)).collect();
        Self::from_columns(n, cols)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn columns(&self) -> &[Vec<Quaternion>] {
        &self.columns
    }

    /// `F Fᴴ`.
    pub fn projector(&self) -> HMatrix {
        HMatrix::from_fn(self.n, |r, s| {
            self.columns.iter().map(|c| c[r] * c[s].conj()).sum()
        })
    }

    /// `max |Fᴴ F - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (a, u) in self.columns.iter().enumerate() {
            for (b, v) in self.columns.iter().enumerate() {
                let target = if a == b { Quaternion::ONE } else { Quaternion::ZERO };
                worst = worst.max((inner(u, v) - target).norm());
            }
        }
        worst
    }

    /// Frame `F U` for a `d × d` matrix `U` acting on the right.
    pub fn right_multiply(&self, u: &HMatrix) -> Result<Self> {
        if u.n() != self.d {
            return Err(Error::SizeMismatch {
                expected: self.d,
                found: u.n(),
            });
        }
        let cols = (0..self.d)
            .map(|k| {
                (0..self.n)
                    .map(|r| (0..self.d).map(|m| self.columns[m][r] * u[(m, k)]).sum())
                    .collect()
            })
            .collect();
        Self::from_columns(self.n, cols)
    }

    /// Extends the frame to an orthonormal basis of `H^n`; the first `d`
    /// columns of the result are this frame.
    pub fn complete(&self) -> HMatrix {
        let mut basis = self.columns.clone();
        for k in 0..self.n {
            if basis.len() == self.n {
                break;
            }
            let mut v = vec![Quaternion::ZERO; self.n];
            v[k] = Quaternion::ONE;
            for _ in 0..2 {
                for u in &basis {
                    remove_component(&mut v, u);
                }
            }
            let norm = col_norm(&v);
            // some standard vector keeps at least 1/sqrt(n) of its length
            if norm > 0.5 / (self.n as f64).sqrt() {
                basis.push(v.into_iter().map(|x| x * (1.0 / norm)).collect());
            }
        }
        debug_assert_eq!(basis.len(), self.n);
        HMatrix::from_fn(self.n, |r, s| basis[s][r])
    }
}

pub(crate) fn gaussian_column<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Quaternion> {
    (0..n)
        .map(|_| {
            Quaternion::new(
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            )
        })
        .collect()
}

/// Random `d × d` quaternionic unitary (orthonormalized Gaussian matrix).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<HMatrix> {
    let p = GrassmannPoint::random(d, d, rng)?;
    Ok(HMatrix::from_fn(d, |r, s| p.columns[s][r]))
}

/// `g · P`, with the image frame re-orthonormalized.
pub fn grassmann_act(g: &HMatrix, p: &GrassmannPoint) -> Result<GrassmannPoint> {
    if g.n() != p.n {
        return Err(Error::SizeMismatch {
            expected: p.n,
            found: g.n(),
        });
    }
    let cols = p
        .columns
        .iter()
        .map(|c| {
            (0..p.n)
                .map(|r| (0..p.n).map(|s| g[(r, s)] * c[s]).sum())
                .collect()
        })
        .collect();
    GrassmannPoint::from_columns(p.n, cols)
}

/// `‖F₁F₁ᴴ - F₂F₂ᴴ‖_F`.
pub fn grassmann_dist(p1: &GrassmannPoint, p2: &GrassmannPoint) -> Result<f64> {
    if p1.n != p2.n || p1.d != p2.d {
        return Err(Error::InvalidArgument(format!(
            "Gr_{}(H^{}) vs Gr_{}(H^{})",
            p1.d, p1.n, p2.d, p2.n
        )));
    }
    Ok(p1.projector().distance(&p2.projector()))
}

/// A unitary `g` (so `g ∈ Sl(n,H)`) with `g · from = to`.
pub fn transport(from: &GrassmannPoint, to: &GrassmannPoint) -> Result<HMatrix> {
    if from.n != to.n || from.d != to.d {
        return Err(Error::InvalidArgument(format!(
            "Gr_{}(H^{}) vs Gr_{}(H^{})",
            from.d, from.n, to.d, to.n
        )));
    }
    let u_from = from.complete();
    let u_to = to.complete();
    Ok(&u_to * &u_from.conj_transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use Quaternion as Q;

    #[test]
    fn distance_examples() {
        let v1 = GrassmannPoint::standard(2, 1).unwrap();
        assert_eq!(grassmann_dist(&v1, &v1).unwrap(), 0.0);
        let e2 = GrassmannPoint::from_columns(2, vec![vec![Q::ZERO, Q::ONE]]).unwrap();
        assert!((grassmann_dist(&v1, &e2).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        // a quaternionic multiple spans the same line
        let v1j = GrassmannPoint::from_columns(2, vec![vec![Q::J * 3.0, Q::ZERO]]).unwrap();
        assert!(grassmann_dist(&v1, &v1j).unwrap() < 1e-15);
    }

    #[test]
    fn action_examples() {
        let v1 = GrassmannPoint::standard(2, 1).unwrap();
        let id = HMatrix::identity(2);
        assert!(grassmann_dist(&grassmann_act(&id, &v1).unwrap(), &v1).unwrap() < 1e-15);
        let h = HMatrix::diag(&[Q::real(2.0), Q::real(0.5)]);
        assert!(grassmann_dist(&grassmann_act(&h, &v1).unwrap(), &v1).unwrap() < 1e-15);
        assert!(matches!(
            grassmann_act(&HMatrix::zeros(2), &v1),
            Err(Error::RankCollapse(_))
        ));
    }

    #[test]
    fn frames_are_orthonormal_and_gauge_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(2..=5);
            let d = rng.random_range(1..=n);
            let p = GrassmannPoint::random(n, d, &mut rng).unwrap();
            assert!(p.orthonormality_defect() < 1e-12);
            let u = random_unitary(d, &mut rng).unwrap();
            let pu = p.right_multiply(&u).unwrap();
            assert!(grassmann_dist(&p, &pu).unwrap() < 1e-12);
            let basis = p.complete();
            let gram = &basis.conj_transpose() * &basis;
            assert!(gram.distance(&HMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn transport_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.random_range(2..=4);
            let d = rng.random_range(1..n);
            let p = GrassmannPoint::random(n, d, &mut rng).unwrap();
            let q = GrassmannPoint::random(n, d, &mut rng).unwrap();
            let g = transport(&p, &q).unwrap();
            assert!((g.study_det_abs() - 1.0).abs() < 1e-12);
            let image = grassmann_act(&g, &p).unwrap();
            assert!(grassmann_dist(&image, &q).unwrap() < 1e-10);
        }
    }

    #[test]
    fn shape_checks() {
        assert!(GrassmannPoint::standard(2, 0).is_err());
        assert!(GrassmannPoint::standard(2, 3).is_err());
        let a = GrassmannPoint::standard(3, 1).unwrap();
        let b = GrassmannPoint::standard(3, 2).unwrap();
        assert!(grassmann_dist(&a, &b).is_err());
        assert!(GrassmannPoint::from_columns(2, vec![vec![Q::ONE]]).is_err());
    }
}
