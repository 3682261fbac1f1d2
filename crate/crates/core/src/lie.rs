//! Real spans, bracket closure and restricted-root bookkeeping in `sl(n,H)`.
//!
//! [`generated_subalgebra`] grows an orthonormal basis (in the coordinates of
//! [`HMatrix::vectorize`]) by repeatedly applying `ad(generator)` to the
//! directions found in the previous generation. Candidates are orthogonalized
//! with two passes of modified Gram–Schmidt and kept only when what remains
//! exceeds [`RANK_TOL`] relative to their natural scale.

use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::quat::Quaternion;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Relative threshold for accepting a new direction into a span.
pub const RANK_TOL: f64 = 1e-8;

/// Real dimension of `sl(n,H)`.
pub fn algebra_dim(n: usize) -> usize {
    4 * n * n - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureStatus {
    /// No new direction appeared in the last generation, or the span is full.
    Stable,
    /// `max_depth` generations were used and the span was still growing.
    Unstable,
}

/// Bracket-closed real span of a set of generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Subalgebra {
    pub ambient_n: usize,
    /// Orthonormal in vectorized coordinates.
    pub basis: Vec<HMatrix>,
    pub span_rank: usize,
    /// Number of bracket generations that contributed new directions.
    pub closure_depth: usize,
    /// `σ_min / σ_max` of the normalized accepted candidates; 0 for an empty span.
    pub margin: f64,
    pub status: ClosureStatus,
}

impl Subalgebra {
    /// Norm of the component of `x` orthogonal to the span.
    pub fn residual(&self, x: &HMatrix) -> f64 {
        let mut v = x.vectorize();
        for b in &self.basis {
            let bv = b.vectorize();
            let c = dot(&v, &bv);
            axpy(-c, &bv, &mut v);
        }
        norm(&v)
    }

    pub fn is_full(&self) -> bool {
        self.span_rank == algebra_dim(self.ambient_n)
    }

    /// Largest relative residual of a basis bracket outside the span.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, x) in self.basis.iter().enumerate() {
            for y in &self.basis[a + 1..] {
                let br = x.bracket(y).expect("uniform size");
                worst = worst.max(self.residual(&br));
            }
        }
        worst
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Incrementally orthonormalized real span.
struct SpanBuilder {
    n: usize,
    ortho: Vec<Vec<f64>>,
    accepted: Vec<Vec<f64>>,
}

impl SpanBuilder {
    fn new(n: usize) -> Self {
        SpanBuilder {
            n,
            ortho: Vec::new(),
            accepted: Vec::new(),
        }
    }

    /// Adds `x` if it leaves the span by more than `RANK_TOL · scale`.
    /// Returns the index of the new orthonormal direction.
    fn try_add(&mut self, x: &HMatrix, scale: f64) -> Option<usize> {
        if self.ortho.len() == 4 * self.n * self.n {
            return None;
        }
        let raw = x.vectorize();
        let raw_norm = norm(&raw);
        if raw_norm == 0.0 {
            return None;
        }
        let mut v = raw.clone();
        for _ in 0..2 {
            for q in &self.ortho {
                let c = dot(&v, q);
                axpy(-c, q, &mut v);
            }
        }
        let r = norm(&v);
        if r <= RANK_TOL * raw_norm.max(scale) {
            return None;
        }
        v.iter_mut().for_each(|c| *c /= r);
        self.ortho.push(v);
        self.accepted.push(raw.iter().map(|c| c / raw_norm).collect());
        Some(self.ortho.len() - 1)
    }

    fn element(&self, idx: usize) -> HMatrix {
        HMatrix::from_vector(self.n, &self.ortho[idx]).expect("length 4n²")
    }

    fn margin(&self) -> f64 {
        if self.accepted.is_empty() {
            return 0.0;
        }
        let rows = 4 * self.n * self.n;
        let cols = self.accepted.len();
        let m = DMatrix::from_fn(rows, cols, |r, c| self.accepted[c][r]);
        let sv = m.singular_values();
        let max = sv.max();
        let min = sv.min();
        if max > 0.0 {
            min / max
        } else {
            0.0
        }
    }
}

/// Default number of bracket generations, `2 · (4n² - 1)`.
pub fn default_max_depth(n: usize) -> usize {
    2 * algebra_dim(n)
}

/// Lie algebra generated by `generators`, by iterated bracketing.
///
/// Each generation brackets every generator against the directions added in
/// the previous one. The loop ends when a generation adds nothing or the
/// span fills `sl(n,H)`; hitting `max_depth` first yields
/// [`ClosureStatus::Unstable`].
pub fn generated_subalgebra(generators: &[HMatrix], max_depth: usize) -> Result<Subalgebra> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidArgument("generator list is empty".into()))?;
    let n = first.n();
    for g in generators {
        if g.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: g.n(),
            });
        }
    }
    let full = algebra_dim(n);
    let mut span = SpanBuilder::new(n);
    let mut frontier: Vec<usize> = generators
        .iter()
        .filter_map(|g| span.try_add(g, 0.0))
        .collect();
    let gen_norms: Vec<f64> = generators.iter().map(|g| g.frobenius_norm()).collect();

    let mut depth = 0;
    let mut status = ClosureStatus::Stable;
    while !frontier.is_empty() && span.ortho.len() < full {
        if depth == max_depth {
            status = ClosureStatus::Unstable;
            break;
        }
        let mut next = Vec::new();
        for &idx in &frontier {
            let e = span.element(idx);
            for (g, &gn) in generators.iter().zip(&gen_norms) {
                let br = g.bracket(&e)?;
                if let Some(k) = span.try_add(&br, gn) {
                    next.push(k);
                }
            }
        }
        if !next.is_empty() {
            depth += 1;
        }
        frontier = next;
    }

    Ok(Subalgebra {
        ambient_n: n,
        basis: (0..span.ortho.len()).map(|k| span.element(k)).collect(),
        span_rank: span.ortho.len(),
        closure_depth: depth,
        margin: span.margin(),
        status,
    })
}

/// Outcome of the Lie algebra rank condition for a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LarcReport {
    pub holds: bool,
    pub rank: usize,
    pub margin: f64,
    pub depth: usize,
}

/// Lie algebra rank condition: do `A` and `B` generate all of `sl(n,H)`?
pub fn larc(a: &HMatrix, b: &HMatrix) -> Result<LarcReport> {
    larc_with_depth(a, b, default_max_depth(a.n()))
}

pub fn larc_with_depth(a: &HMatrix, b: &HMatrix, max_depth: usize) -> Result<LarcReport> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let sub = generated_subalgebra(&[a.clone(), b.clone()], max_depth)?;
    if sub.status == ClosureStatus::Unstable {
        return Err(Error::ClosureUnstable {
            depth: sub.closure_depth,
            rank: sub.span_rank,
        });
    }
    Ok(LarcReport {
        holds: sub.is_full(),
        rank: sub.span_rank,
        margin: sub.margin,
        depth: sub.closure_depth,
    })
}

/// One entry of a matrix together with its position, 1-based.
///
/// For `r ≠ s` the entry lies in the root space of `α_rs = a_r - a_s`;
/// positive roots are those with `r < s`. `r = s` is the diagonal part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootComponent {
    pub r: usize,
    pub s: usize,
    pub entry: Quaternion,
}

impl RootComponent {
    pub fn is_positive_root(&self) -> bool {
        self.r < self.s
    }

    /// Value of the root `a_r - a_s` on the real diagonal `a`.
    pub fn root_value(&self, a: &[f64]) -> f64 {
        a[self.r - 1] - a[self.s - 1]
    }
}

/// Splits `A` into its nonzero entries, one component per root space
/// position (plus diagonal entries).
pub fn root_decompose(a: &HMatrix) -> Vec<RootComponent> {
    let n = a.n();
    let mut out = Vec::new();
    for r in 0..n {
        for s in 0..n {
            let entry = a[(r, s)];
            if !entry.is_zero() {
                out.push(RootComponent {
                    r: r + 1,
                    s: s + 1,
                    entry,
                });
            }
        }
    }
    out
}

pub fn reassemble(n: usize, components: &[RootComponent]) -> HMatrix {
    let mut m = HMatrix::zeros(n);
    for c in components {
        m[(c.r - 1, c.s - 1)] += c.entry;
    }
    m
}

/// If `b` is diagonal with complex entries, returns them as `(a_r, b_r)`.
pub fn complex_diagonal(b: &HMatrix, tol: f64) -> Option<Vec<(f64, f64)>> {
    if !b.is_diagonal(tol) {
        return None;
    }
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    b.diagonal()
        .into_iter()
        .map(|q| {
            let (c, jk) = q.split();
            (jk.norm() <= tol * scale).then_some((c.w, c.x))
        })
        .collect()
}

const DIAGONAL_TOL: f64 = 1e-12;
const FLOW_TOL: f64 = 1e-9;

/// `e^{t·ad(B)} A = e^{tB} A e^{-tB}`.
///
/// For complex diagonal `B = diag(a_r + i b_r)` the entries are computed in
/// closed form as `e^{t(a_r - a_s)} e^{itb_r} A_rs e^{-itb_s}`. Any other `B`
/// goes through the group exponential, and the call fails if
/// `e^{tB} e^{-tB}` drifts from the identity by more than 1e-9.
pub fn ad_flow(b: &HMatrix, a: &HMatrix, t: f64) -> Result<HMatrix> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            expected: b.n(),
            found: a.n(),
        });
    }
    if let Some(d) = complex_diagonal(b, DIAGONAL_TOL) {
        return Ok(HMatrix::from_fn(a.n(), |r, s| {
            let (ar, br) = d[r];
            let (as_, bs) = d[s];
            Quaternion::cis(t * br) * a[(r, s)] * Quaternion::cis(-t * bs) * (t * (ar - as_)).exp()
        }));
    }
    let forward = b.scale(t).exp();
    let backward = b.scale(-t).exp();
    let id = HMatrix::identity(a.n());
    let drift = (&forward * &backward).distance(&id) / (a.n() as f64).sqrt();
    if !(drift <= FLOW_TOL) {
        return Err(Error::FlowResidual(drift));
    }
    Ok(&(&forward * a) * &backward)
}

/// Orthonormal basis (15 elements) of `sl(2,H)_{r,s}`, the copy of `sl(2,H)`
/// supported on rows and columns `{r, s}` (0-based, `r ≠ s`).
pub fn sl2_block_basis(n: usize, r: usize, s: usize) -> Vec<HMatrix> {
    assert!(r != s && r < n && s < n, "invalid block ({r}, {s}) in size {n}");
    let mut basis = Vec::with_capacity(15);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut h = HMatrix::zeros(n);
    h[(r, r)] = Quaternion::real(inv_sqrt2);
    h[(s, s)] = Quaternion::real(-inv_sqrt2);
    basis.push(h);
    for &d in &[r, s] {
        for unit in &Quaternion::UNITS[1..] {
            basis.push(HMatrix::unit(n, d, d, *unit));
        }
    }
    for &(p, q) in &[(r, s), (s, r)] {
        for unit in &Quaternion::UNITS {
            basis.push(HMatrix::unit(n, p, q, *unit));
        }
    }
    basis
}

/// Residual of `x` outside `sl(2,H)_{r,s}`: the norm of everything off the
/// `{r,s}` block, plus the real trace of the block.
pub fn sl2_block_residual(x: &HMatrix, r: usize, s: usize) -> f64 {
    let n = x.n();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            let inside = (p == r || p == s) && (q == r || q == s);
            if !inside {
                acc += x[(p, q)].norm_sq();
            }
        }
    }
    let tr = x[(r, r)].w + x[(s, s)].w;
    (acc + tr * tr / 2.0).sqrt()
}
