//! Numerical checks of the geometric steps behind the controllability
//! criterion: the scaled `Ad`-flow limit onto the root space `g_{α_1n}`,
//! the torus-curve cone lemma, the conjugation homotopy `P(t)`, and the
//! dimension of the `Sl(2,H)_{1,n}`-orbit through `V_d`.

use crate::certify::check_h2;
use crate::error::{Error, Result};
use crate::grassmann::{grassmann_act, grassmann_dist, GrassmannPoint};
use crate::hmat::HMatrix;
use crate::lie::{self, Subalgebra};
use crate::quat::{Quaternion, DEFAULT_TOL};
use microlp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, Matrix4, Vector4};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTrace {
    pub t_grid: Vec<f64>,
    pub off_target_norms: Vec<f64>,
    pub target_entry_norms: Vec<f64>,
    /// Least-squares slope of `ln(off)` against `t`; `None` when `A` has no
    /// off-target mass at all.
    pub fitted_rate: Option<f64>,
}

/// Real parts `a_r` of a complex diagonal `B`, after checking the ordering
/// `a_1 > a_2 ≥ … ≥ a_{n-1} > a_n`.
fn ordered_real_parts(b_diag: &HMatrix) -> Result<Vec<f64>> {
    let rep = check_h2(b_diag, 2, DEFAULT_TOL)?;
    if !rep.ordering_ok {
        return Err(Error::OrderingViolated(format!("{:?}", rep.a)));
    }
    Ok(rep.a)
}

/// Decay rate of the slowest off-target entry of
/// `e^{-t(a_1-a_n)} e^{t ad B} A`: the largest `a_r - a_s - a_1 + a_n` over
/// nonzero entries `A_rs` other than `(1,n)`.
pub fn predicted_decay_rate(a: &HMatrix, b_diag: &HMatrix) -> Result<Option<f64>> {
    let re = ordered_real_parts(b_diag)?;
    let n = re.len();
    if a.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: a.n(),
        });
    }
    let gap = re[0] - re[n - 1];
    let mut best: Option<f64> = None;
    for r in 0..n {
        for s in 0..n {
            if (r, s) == (0, n - 1) || a[(r, s)].is_zero() {
                continue;
            }
            let rate = re[r] - re[s] - gap;
            best = Some(best.map_or(rate, |b: f64| b.max(rate)));
        }
    }
    Ok(best)
}

/// Samples `R(t) = e^{-t(a_1-a_n)} e^{t ad B} A` on `t_grid`.
///
/// Under the ordering of H2 every entry except `(1,n)` decays, while
/// `R(t)_{1n} = e^{itb_1} p e^{-itb_n}` keeps the norm `|p|`.
pub fn scaled_limit_trace(a: &HMatrix, b_diag: &HMatrix, t_grid: &[f64]) -> Result<DecayTrace> {
    let re = ordered_real_parts(b_diag)?;
    let n = re.len();
    if a.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: a.n(),
        });
    }
    if t_grid.is_empty()
        || t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0))
        || t_grid.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(Error::InvalidArgument(
            "t grid must be nonnegative and strictly increasing".into(),
        ));
    }
    let gap = re[0] - re[n - 1];
    let mut off = Vec::with_capacity(t_grid.len());
    let mut target = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut r = lie::ad_flow(b_diag, a, t)?.scale((-t * gap).exp());
        target.push(r[(0, n - 1)].norm());
        r[(0, n - 1)] = Quaternion::ZERO;
        off.push(r.frobenius_norm());
    }

    let pts: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(&off)
        .filter(|(_, o)| **o > 0.0)
        .map(|(t, o)| (*t, o.ln()))
        .collect();
    let fitted_rate = (pts.len() >= 2).then(|| {
        let m = pts.len() as f64;
        let tm = pts.iter().map(|p| p.0).sum::<f64>() / m;
        let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
        sxy / sxx
    });

    Ok(DecayTrace {
        t_grid: t_grid.to_vec(),
        off_target_norms: off,
        target_entry_norms: target,
        fitted_rate,
    })
}

/// Number of periods of the slower circle covered by the torus sampling window.
pub const CONE_WINDOW_PERIODS: f64 = 1000.0;

const CONE_DIRECTIONS: usize = 2048;
const CONE_REFINE_STEPS: usize = 64;
const LP_SLACK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub full: bool,
    /// Estimated radius of the largest ball about the origin inside the hull
    /// of the normalized samples. It is the smallest support value found
    /// over the directions tried, hence an upper bound; 0 when not full.
    pub margin: f64,
    pub rank: usize,
}

/// Unit samples of `t ↦ e^{itc_1} q e^{-itc_2}` at `samples` equispaced times.
pub fn torus_curve(q: Quaternion, c1: f64, c2: f64, samples: usize) -> Vec<Vector4<f64>> {
    let window = 2.0 * std::f64::consts::PI * CONE_WINDOW_PERIODS * (1.0 / c1.abs()).max(1.0 / c2.abs());
    let step = window / (samples - 1) as f64;
    (0..samples)
        .map(|k| {
            let t = k as f64 * step;
            let x = Quaternion::cis(t * c1) * q * Quaternion::cis(-t * c2);
            let v = Vector4::from(x.to_array());
            let norm = v.norm();
            if norm > 0.0 {
                v / norm
            } else {
                v
            }
        })
        .collect()
}

fn sample_rank(points: &[Vector4<f64>]) -> usize {
    let m = DMatrix::from_fn(points.len(), 4, |i, j| points[i][j]);
    let sv = m.singular_values();
    let top = sv.max();
    if !(top > 0.0) {
        return 0;
    }
    sv.iter().filter(|s| **s > DEFAULT_TOL * top).count()
}

/// Largest `s` with a convex combination `Σλ_i x_i = 0`, `λ_i ≥ s`.
///
/// Positive exactly when the origin is in the relative interior of the hull.
fn interior_slack(points: &[Vector4<f64>]) -> Result<Option<f64>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let s = lp.add_var(1.0, (0.0, 1.0));
    let lambda: Vec<_> = points.iter().map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    for coord in 0..4 {
        lp.add_constraint(
            lambda.iter().zip(points).map(|(v, x)| (*v, x[coord])).collect::<Vec<_>>(),
            ComparisonOp::Eq,
            0.0,
        );
    }
    lp.add_constraint(lambda.iter().map(|v| (*v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    for v in &lambda {
        lp.add_constraint([(*v, 1.0), (s, -1.0)], ComparisonOp::Ge, 0.0);
    }
    match lp.solve() {
        Ok(outcome) => match outcome.solution() {
            Some(sol) => Ok(Some(sol.objective())),
            None => Err(Error::LinearProgram("solve interrupted".into())),
        },
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::LinearProgram(e.to_string())),
    }
}

fn support(points: &[Vector4<f64>], u: &Vector4<f64>) -> f64 {
    points.iter().map(|x| x.dot(u)).fold(f64::NEG_INFINITY, f64::max)
}

/// Normal of the hyperplane through the four points with the largest
/// inner product against `u`, oriented to agree with `u`.
fn facet_normal(points: &[Vector4<f64>], u: &Vector4<f64>) -> Option<Vector4<f64>> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| points[j].dot(u).total_cmp(&points[i].dot(u)));
    let base = points[idx[0]];
    let mut m = Matrix4::zeros();
    for k in 1..4 {
        m.set_row(k - 1, &(points[idx[k]] - base).transpose());
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t?;
    let (min_idx, _) = svd.singular_values.argmin();
    let mut normal: Vector4<f64> = v_t.row(min_idx).transpose();
    if normal.dot(u) < 0.0 {
        normal = -normal;
    }
    let len = normal.norm();
    (len > 0.0).then(|| normal / len)
}

/// Inradius estimate `min_u max_i ⟨u, x_i⟩`.
fn cone_margin(points: &[Vector4<f64>]) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut best_u = Vector4::new(1.0, 0.0, 0.0, 0.0);
    let mut best = support(points, &best_u);
    for _ in 0..CONE_DIRECTIONS {
        let u = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
        let u: Vector4<f64> = u.normalize();
        let h = support(points, &u);
        if h < best {
            best = h;
            best_u = u;
        }
    }
    for _ in 0..CONE_REFINE_STEPS {
        match facet_normal(points, &best_u) {
            Some(u) => {
                let h = support(points, &u);
                if h < best - 1e-15 {
                    best = h;
                    best_u = u;
                } else {
                    break;
                }
            }
            None => break,
        }
    }
    best.max(0.0)
}

/// Whether the closed convex cone spanned by `e^{itc_1} q e^{-itc_2}` is all
/// of `H`, decided on `samples` points of the curve.
///
/// The cone is everything iff the origin is an interior point of the hull
/// of the normalized samples: the samples must span `R^4` and admit a
/// strictly positive vanishing convex combination.
pub fn torus_cone_full(q: Quaternion, c1: f64, c2: f64, samples: usize) -> Result<ConeReport> {
    if samples < 8 {
        return Err(Error::InvalidArgument("need at least 8 samples".into()));
    }
    if !(c1 * c2 != 0.0) || !c1.is_finite() || !c2.is_finite() {
        return Err(Error::InvalidArgument("need finite nonzero c1, c2".into()));
    }
    let points = torus_curve(q, c1, c2, samples);
    let rank = sample_rank(&points);
    if rank < 4 {
        return Ok(ConeReport {
            full: false,
            margin: 0.0,
            rank,
        });
    }
    let full = matches!(interior_slack(&points)?, Some(s) if s > LP_SLACK_TOL);
    Ok(ConeReport {
        full,
        margin: if full { cone_margin(&points) } else { 0.0 },
        rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub n: usize,
    pub d: usize,
    /// Largest residual of `P(π/2) X P(π/2)^{-1}` outside `sl(2,H)_{1,n}`
    /// over the basis of `sl(2,H)_{d,d+1}`.
    pub ad_residual: f64,
    /// Largest Grassmann distance from `P(t)V_d` to `V_d` over the t grid.
    pub fixes_vd_residual: f64,
}

fn check_d(n: usize, d: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSize(n, "need n >= 2"));
    }
    if d < 1 || d >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= d <= n-1, got d = {d}, n = {n}")));
    }
    Ok(())
}

/// Rotation generators of the homotopy (1-based `d`):
/// `A e_1 = e_d`, `A e_d = -e_1` and `B e_{d+1} = e_n`, `B e_n = -e_{d+1}`.
/// `A = 0` when `d = 1` and `B = 0` when `d + 1 = n`.
pub fn homotopy_generators(n: usize, d: usize) -> Result<(HMatrix, HMatrix)> {
    check_d(n, d)?;
    let mut a = HMatrix::zeros(n);
    if d != 1 {
        a[(d - 1, 0)] = Quaternion::ONE;
        a[(0, d - 1)] = Quaternion::real(-1.0);
    }
    let mut b = HMatrix::zeros(n);
    if d + 1 != n {
        b[(n - 1, d)] = Quaternion::ONE;
        b[(d, n - 1)] = Quaternion::real(-1.0);
    }
    Ok((a, b))
}

/// `P(t) = e^{tA} e^{tB}`.
pub fn homotopy_map(n: usize, d: usize, t: f64) -> Result<HMatrix> {
    let (a, b) = homotopy_generators(n, d)?;
    Ok(&a.scale(t).exp() * &b.scale(t).exp())
}

const HOMOTOPY_GRID: usize = 33;

pub fn verify_conjugation_homotopy(n: usize, d: usize) -> Result<HomotopyReport> {
    check_d(n, d)?;
    let p = homotopy_map(n, d, std::f64::consts::FRAC_PI_2)?;
    let p_inv = p.inverse()?;
    let ad_residual = lie::sl2_block_basis(n, d - 1, d)
        .iter()
        .map(|x| lie::sl2_block_residual(&(&(&p * x) * &p_inv), 0, n - 1))
        .fold(0.0, f64::max);

    let vd = GrassmannPoint::standard(n, d)?;
    let mut fixes = 0.0f64;
    for k in 0..HOMOTOPY_GRID {
        let t = std::f64::consts::FRAC_PI_2 * k as f64 / (HOMOTOPY_GRID - 1) as f64;
        let moved = grassmann_act(&homotopy_map(n, d, t)?, &vd)?;
        fixes = fixes.max(grassmann_dist(&moved, &vd)?);
    }
    Ok(HomotopyReport {
        n,
        d,
        ad_residual,
        fixes_vd_residual: fixes,
    })
}

/// Relative singular value below which a tangent direction counts as zero.
pub const ORBIT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRank {
    pub n: usize,
    pub d: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

impl OrbitRank {
    /// `σ_k / σ_{k+1}`; infinite when `σ_{k+1}` vanishes exactly.
    pub fn gap_ratio(&self, k: usize) -> f64 {
        match (self.singular_values.get(k - 1), self.singular_values.get(k)) {
            (Some(a), Some(b)) if *b > 0.0 => a / b,
            (Some(_), _) => f64::INFINITY,
            _ => 0.0,
        }
    }
}

/// Rank of the infinitesimal action of `basis` on `Gr_d(H^n)` at `point`.
///
/// `X` acts at the frame `F` through `(I - FFᴴ) X F`, the horizontal part
/// of `X F`.
pub fn orbit_tangent_spectrum(basis: &[HMatrix], point: &GrassmannPoint) -> Result<OrbitRank> {
    let (n, d) = (point.n(), point.d());
    let proj = point.projector();
    let comp = &HMatrix::identity(n) - &proj;
    let frame = point.columns();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for x in basis {
        if x.n() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: x.n(),
            });
        }
        let m = &comp * x;
        let mut v = Vec::with_capacity(4 * n * d);
        for col in frame {
            for r in 0..n {
                let e: Quaternion = (0..n).map(|s| m[(r, s)] * col[s]).sum();
                v.extend_from_slice(&e.to_array());
            }
        }
        rows.push(v);
    }
    let mat = DMatrix::from_fn(rows.len(), 4 * n * d, |i, j| rows[i][j]);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|s| **s > ORBIT_RANK_TOL * top).count();
    Ok(OrbitRank {
        n,
        d,
        rank,
        singular_values: sv,
    })
}

/// Dimension of the `Sl(2,H)_{1,n}`-orbit through `V_d` (1-based `d`).
pub fn orbit_tangent_rank(n: usize, d: usize) -> Result<OrbitRank> {
    check_d(n, d)?;
    orbit_tangent_spectrum(&lie::sl2_block_basis(n, 0, n - 1), &GrassmannPoint::standard(n, d)?)
}

/// Subalgebra generated by the root-space directions reached by the
/// rotating corner entries: `E_1n · e^{itc_1} p e^{-itc_2}` and
/// `E_n1 · e^{itc_2} q e^{-itc_1}` for `t = 0, 1, …, samples - 1`.
pub fn corner_closure(
    n: usize,
    p: Quaternion,
    q: Quaternion,
    c1: f64,
    c2: f64,
    samples: usize,
) -> Result<Subalgebra> {
    if n < 2 {
        return Err(Error::InvalidSize(n, "need n >= 2"));
    }
    let mut gens = Vec::with_capacity(2 * samples);
    for k in 0..samples {
        let t = k as f64;
        let x = Quaternion::cis(t * c1) * p * Quaternion::cis(-t * c2);
        let y = Quaternion::cis(t * c2) * q * Quaternion::cis(-t * c1);
        gens.push(HMatrix::unit(n, 0, n - 1, x));
        gens.push(HMatrix::unit(n, n - 1, 0, y));
    }
    lie::generated_subalgebra(&gens, lie::default_max_depth(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::reference_pair;
    use Quaternion as Q;

    fn grid(end: f64, m: usize) -> Vec<f64> {
        (0..m).map(|k| end * k as f64 / (m - 1) as f64).collect()
    }

    #[test]
    fn trace_of_reference_pair() {
        let (a, b) = reference_pair(2);
        let tr = scaled_limit_trace(&a, &b, &grid(8.0, 81)).unwrap();
        for v in &tr.target_entry_norms {
            assert!((v - 2f64.sqrt()).abs() < 1e-10);
        }
        // only the (2,1) entry is off target, decaying at 2(a_2 - a_1) = -4
        let rate = tr.fitted_rate.unwrap();
        assert!((rate + 4.0).abs() < 1e-9, "{rate}");
        assert_eq!(predicted_decay_rate(&a, &b).unwrap(), Some(-4.0));
    }

    #[test]
    fn trace_of_pure_corner() {
        let (_, b) = reference_pair(2);
        let a = HMatrix::unit(2, 0, 1, Q::new(1.0, 0.0, 1.0, 0.0));
        let tr = scaled_limit_trace(&a, &b, &grid(8.0, 9)).unwrap();
        assert!(tr.off_target_norms.iter().all(|v| *v == 0.0));
        assert_eq!(tr.fitted_rate, None);
        assert_eq!(predicted_decay_rate(&a, &b).unwrap(), None);
    }

    #[test]
    fn trace_rejects_bad_ordering() {
        let (a, _) = reference_pair(2);
        let b = HMatrix::complex_diag(&[(-1.0, 1.0), (1.0, 2.0)]);
        assert!(matches!(
            scaled_limit_trace(&a, &b, &[0.0, 1.0]),
            Err(Error::OrderingViolated(_))
        ));
        let (_, b) = reference_pair(2);
        assert!(scaled_limit_trace(&a, &b, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn cone_examples() {
        let s2 = 2f64.sqrt();
        let rep = torus_cone_full(Q::new(1.0, 0.0, 1.0, 0.0), 1.0, s2, 400).unwrap();
        assert!(rep.full && rep.margin > 0.0, "{rep:?}");
        assert!(!torus_cone_full(Q::new(1.0, 1.0, 0.0, 0.0), 1.0, s2, 400).unwrap().full);
        assert!(!torus_cone_full(Q::J, 1.0, s2, 400).unwrap().full);
        assert!(!torus_cone_full(Q::new(0.0, 0.0, 2.0, -1.0), 3.0, 0.7, 400).unwrap().full);
        assert!(torus_cone_full(Q::ONE, 1.0, s2, 7).is_err());
        assert!(torus_cone_full(Q::ONE, 0.0, s2, 100).is_err());
    }

    #[test]
    fn cone_margin_bounds() {
        // the normalized curve lies on the unit sphere, so the inradius is < 1
        let rep = torus_cone_full(Q::new(1.0, 0.3, -0.7, 0.2), 1.0, 2f64.sqrt(), 400).unwrap();
        assert!(rep.full);
        assert!(rep.margin > 0.0 && rep.margin < 1.0);
        // for q = 1 + j the curve is (e^{iθ₁t}, e^{iθ₂t})/√2, whose hull has
        // support function (|u₁| + |u₂|)/√2 ≥ 1/√2 in the dense limit
        let rep = torus_cone_full(Q::new(1.0, 0.0, 1.0, 0.0), 1.0, 2f64.sqrt(), 4000).unwrap();
        assert!((rep.margin - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.05, "{rep:?}");
    }

    #[test]
    fn homotopy_examples() {
        for (n, d) in [(4, 2), (3, 1), (2, 1), (4, 1), (4, 3), (3, 2), (5, 3)] {
            let rep = verify_conjugation_homotopy(n, d).unwrap();
            assert!(rep.ad_residual < 1e-10, "{rep:?}");
            assert!(rep.fixes_vd_residual < 1e-10, "{rep:?}");
        }
        let rep = verify_conjugation_homotopy(2, 1).unwrap();
        assert_eq!((rep.ad_residual, rep.fixes_vd_residual), (0.0, 0.0));
        assert!(verify_conjugation_homotopy(3, 0).is_err());
        assert!(verify_conjugation_homotopy(3, 3).is_err());
    }

    #[test]
    fn homotopy_endpoint_is_a_signed_permutation() {
        let p = homotopy_map(4, 2, std::f64::consts::FRAC_PI_2).unwrap();
        // e_2 ↦ -e_1 and e_3 ↦ e_4
        assert!((p[(0, 1)] - Q::real(-1.0)).norm() < 1e-14);
        assert!((p[(3, 2)] - Q::ONE).norm() < 1e-14);
    }

    #[test]
    fn orbit_rank_examples() {
        assert_eq!(orbit_tangent_rank(2, 1).unwrap().rank, 4);
        assert_eq!(orbit_tangent_rank(4, 2).unwrap().rank, 4);
        let full = crate::hmat::trace_free_basis(2);
        let rep = orbit_tangent_spectrum(&full, &GrassmannPoint::standard(2, 1).unwrap()).unwrap();
        assert_eq!(rep.rank, 4);
        let full = crate::hmat::trace_free_basis(4);
        let rep = orbit_tangent_spectrum(&full, &GrassmannPoint::standard(4, 2).unwrap()).unwrap();
        assert_eq!(rep.rank, 16);
    }

    #[test]
    fn orbit_rank_survives_homotopy_conjugation() {
        for (n, d) in [(3, 1), (3, 2), (4, 2)] {
            let p = homotopy_map(n, d, std::f64::consts::FRAC_PI_2).unwrap();
            let p_inv = p.inverse().unwrap();
            let moved: Vec<HMatrix> = lie::sl2_block_basis(n, d - 1, d)
                .iter()
                .map(|x| &(&p * x) * &p_inv)
                .collect();
            let vd = GrassmannPoint::standard(n, d).unwrap();
            assert_eq!(
                orbit_tangent_spectrum(&moved, &vd).unwrap().rank,
                orbit_tangent_rank(n, d).unwrap().rank
            );
        }
    }

    #[test]
    fn corner_directions_generate_sl2_block() {
        let s2 = 2f64.sqrt();
        for n in 2..=3 {
            let sub = corner_closure(n, Q::new(1.0, 0.0, 1.0, 0.0), Q::new(0.0, 1.0, 0.0, 1.0), 1.0, s2, 8)
                .unwrap();
            assert_eq!(sub.span_rank, 15);
            for x in &sub.basis {
                assert!(lie::sl2_block_residual(x, 0, n - 1) < 1e-10);
            }
        }
        let sub = corner_closure(2, Q::new(1.0, 1.0, 0.0, 0.0), Q::new(1.0, -2.0, 0.0, 0.0), 1.0, s2, 8)
            .unwrap();
        assert!(sub.span_rank < 15);
    }
}
