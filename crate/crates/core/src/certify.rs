//! Sufficient conditions H1–H3 for controllability of `ġ = Ag + uBg`, and
//! the conjugation transport that brings `B` into the diagonal Cartan
//! subalgebra `h = {diag(a_r + i b_r)}`.
//!
//! The conditions are checked in a frame where `B` is complex diagonal:
//!
//! * H1: `A` and `B` generate `sl(n,H)` (Lie algebra rank condition);
//! * H2: `B = diag(a_r + i b_r)` with `a_1 > a_2 ≥ … ≥ a_{n-1} > a_n`,
//!   `b_1 ≠ 0 ≠ b_n`, and `b_1 / b_n` irrational;
//! * H3: the `(1,n)` and `(n,1)` entries of `A` lie outside `H_{1,i} ∪ H_{j,k}`.
//!
//! Together they are sufficient, not necessary, so a failed H2 or H3 yields
//! [`Verdict::Inconclusive`]. Only a failed H1 is conclusive: the pair then
//! lives in a proper subalgebra and the system is not even accessible.
//!
//! Irrationality is decided at a finite resolution `Q` (see
//! [`crate::rational`]); the certificate records the `Q` that was used.

use crate::cmat::{self, C64};
use crate::error::{Error, Result};
use crate::hmat::{random_algebra_element, HMatrix};
use crate::lie::{self, LarcReport};
use crate::quat::{Quaternion, DEFAULT_TOL};
use crate::rational::irrational_at_resolution;
use crate::seed::{derive_seed, stream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_RESOLUTION: u64 = 10_000;

/// Relative gap under which two eigenvalue classes count as one.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Relative singular value under which a direction counts as a null vector.
const NULL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub tol: f64,
    #[serde(rename = "Q")]
    pub resolution: u64,
    pub max_depth: Option<usize>,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            tol: DEFAULT_TOL,
            resolution: DEFAULT_RESOLUTION,
            max_depth: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H2Report {
    pub is_diagonal_frame: bool,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub ordering_ok: bool,
    pub b_ends_nonzero: bool,
    pub ratio_irrational_at_resolution: bool,
    #[serde(rename = "resolution_Q")]
    pub resolution: u64,
}

impl H2Report {
    pub fn holds(&self) -> bool {
        self.is_diagonal_frame
            && self.ordering_ok
            && self.b_ends_nonzero
            && self.ratio_irrational_at_resolution
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Report {
    pub p: Quaternion,
    pub q: Quaternion,
    pub p_ok: bool,
    pub q_ok: bool,
}

impl H3Report {
    pub fn holds(&self) -> bool {
        self.p_ok && self.q_ok
    }
}

/// Conjugator `g` with `g B g^{-1} ≈ b_diag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanFrame {
    pub g: HMatrix,
    pub b_diag: HMatrix,
    /// `‖g B g^{-1} - b_diag‖_F / ‖B‖_F`.
    pub residual: f64,
}

impl CartanFrame {
    /// Canonical eigenvalue representatives `(a_r, b_r)`, `b_r ≥ 0`.
    pub fn spectrum(&self) -> Vec<(f64, f64)> {
        self.b_diag.diagonal().iter().map(|q| (q.w, q.x)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Controllable,
    NotAccessible,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H1Summary {
    pub holds: bool,
    pub rank: usize,
    pub margin: f64,
}

impl From<LarcReport> for H1Summary {
    fn from(r: LarcReport) -> Self {
        H1Summary {
            holds: r.holds,
            rank: r.rank,
            margin: r.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameWitness {
    pub g: HMatrix,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateConfig {
    #[serde(rename = "Q")]
    pub resolution: u64,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub h1: H1Summary,
    pub h2: Option<H2Report>,
    pub h3: Option<H3Report>,
    pub frame: Option<FrameWitness>,
    pub config: CertificateConfig,
    /// Why the verdict is not `Controllable`, when it is not.
    pub reason: Option<String>,
}

fn strict_gap(scale: f64, tol: f64) -> f64 {
    tol * scale
}

/// Checks H2 on a complex diagonal `B`.
pub fn check_h2(b_diag: &HMatrix, resolution: u64, tol: f64) -> Result<H2Report> {
    let n = b_diag.n();
    if n < 2 {
        return Err(Error::InvalidSize(n, "H2 needs n >= 2"));
    }
    if !b_diag.is_diagonal(1e-12) {
        return Err(Error::NotDiagonal);
    }
    let entries = lie::complex_diagonal(b_diag, 1e-12).ok_or(Error::NotComplexDiagonal)?;
    let a: Vec<f64> = entries.iter().map(|e| e.0).collect();
    let b: Vec<f64> = entries.iter().map(|e| e.1).collect();
    let scale = b_diag.max_abs().max(f64::MIN_POSITIVE);
    let gap = strict_gap(scale, tol);

    let ends_strict = a[0] - a[1] > gap && a[n - 2] - a[n - 1] > gap;
    let middle_ok = (1..n.saturating_sub(2)).all(|r| a[r] >= a[r + 1] - gap);
    let b_ends_nonzero = b[0].abs() > gap && b[n - 1].abs() > gap;
    let ratio_ok = b_ends_nonzero && irrational_at_resolution(b[0] / b[n - 1], resolution);

    Ok(H2Report {
        is_diagonal_frame: true,
        a,
        b,
        ordering_ok: ends_strict && middle_ok,
        b_ends_nonzero,
        ratio_irrational_at_resolution: ratio_ok,
        resolution,
    })
}

/// Checks H3 on the corner entries `p = A_{1n}`, `q = A_{n1}`.
pub fn check_h3(a: &HMatrix, tol: f64) -> Result<H3Report> {
    let n = a.n();
    if n < 2 {
        return Err(Error::InvalidSize(n, "H3 needs n >= 2"));
    }
    let p = a[(0, n - 1)];
    let q = a[(n - 1, 0)];
    Ok(H3Report {
        p,
        q,
        p_ok: !p.in_forbidden_union(tol),
        q_ok: !q.in_forbidden_union(tol),
    })
}

struct EigenClass {
    value: C64,
    count: usize,
    spread: f64,
}

/// Groups eigenvalues of `χ(B)` into quaternionic similarity classes.
///
/// Each value is replaced by its representative with nonnegative imaginary
/// part; values closer than `CLUSTER_TOL · scale` are merged.
fn cluster_classes(eigs: &[C64], scale: f64) -> Vec<EigenClass> {
    let canon: Vec<C64> = eigs.iter().map(|z| C64::new(z.re, z.im.abs())).collect();
    let m = canon.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let tol = CLUSTER_TOL * scale;
    for i in 0..m {
        for j in i + 1..m {
            if (canon[i] - canon[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: Vec<(usize, Vec<C64>)> = Vec::new();
    for i in 0..m {
        let root = find(&mut parent, i);
        match classes.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(canon[i]),
            None => classes.push((root, vec![canon[i]])),
        }
    }
    classes
        .into_iter()
        .map(|(_, members)| {
            let count = members.len();
            let value = members.iter().sum::<C64>() / C64::new(count as f64, 0.0);
            let spread = members
                .iter()
                .map(|z| (z - value).norm())
                .fold(0.0, f64::max);
            EigenClass { value, count, spread }
        })
        .collect()
}

/// Orders classes by decreasing real part, then decreasing imaginary part.
/// Real parts within the cluster tolerance count as tied.
fn canonical_order(mut classes: Vec<EigenClass>, scale: f64) -> Vec<EigenClass> {
    classes.sort_by(|x, y| y.value.re.total_cmp(&x.value.re));
    let tol = CLUSTER_TOL * scale;
    let mut out = Vec::with_capacity(classes.len());
    let mut run: Vec<EigenClass> = Vec::new();
    for c in classes {
        if let Some(last) = run.last() {
            if (last.value.re - c.value.re).abs() > tol {
                run.sort_by(|x, y| y.value.im.total_cmp(&x.value.im));
                out.append(&mut run);
            }
        }
        run.push(c);
    }
    run.sort_by(|x, y| y.value.im.total_cmp(&x.value.im));
    out.append(&mut run);
    out
}

/// Conjugates `B` into the diagonal Cartan subalgebra.
///
/// The eigenvalues of `χ(B)` come in pairs `(λ, conj λ)`, one pair per
/// quaternionic eigenvalue class. For each class the representative with
/// `Im λ ≥ 0` is kept, classes are sorted canonically, and a null vector
/// `u` of `χ(B) - λ` is pulled back to the quaternionic column
/// `h_a = u_{2a} - conj(u_{2a+1}) j`, which satisfies `B h = h λ`.
/// The conjugator is `g = h^{-1}`, scaled into `Sl(n,H)`.
pub fn diagonalize_cartan(b: &HMatrix) -> Result<CartanFrame> {
    let n = b.n();
    let c = b.complex_adjoint();
    let eigs: Vec<C64> = c
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::InvalidArgument("complex Schur form not triangular".into()))?
        .iter()
        .copied()
        .collect();
    let scale = eigs
        .iter()
        .map(|z| z.norm())
        .fold(b.frobenius_norm(), f64::max)
        .max(f64::MIN_POSITIVE);

    let classes = canonical_order(cluster_classes(&eigs, scale), scale);
    if classes.len() != n || classes.iter().any(|k| k.count != 2) {
        // Some classes merged. Decide between a genuine repeated eigenvalue
        // and a Jordan block by comparing geometric and algebraic multiplicity.
        for class in classes.iter().filter(|k| k.count != 2) {
            let is_real = class.value.im <= CLUSTER_TOL * scale;
            let expected_nullity = if is_real { class.count } else { class.count / 2 };
            let shifted = &c - cmat::CMatrix::identity(2 * n, 2 * n) * class.value;
            let nullity = cmat::singular_values_desc(&shifted)
                .iter()
                .filter(|&&s| s <= NULL_TOL * scale)
                .count();
            if nullity < expected_nullity {
                return Err(Error::Defective);
            }
        }
        let spread = classes.iter().map(|k| k.spread).fold(0.0, f64::max) / scale;
        return Err(Error::NearDegenerate(spread));
    }

    let mut h = HMatrix::zeros(n);
    for (r, class) in classes.iter().enumerate() {
        let shifted = &c - cmat::CMatrix::identity(2 * n, 2 * n) * class.value;
        let (_, u) = cmat::smallest_right_singular_vector(&shifted);
        for a in 0..n {
            let z1 = u[2 * a];
            let z2 = -u[2 * a + 1].conj();
            h[(a, r)] = Quaternion::from_complex_pair((z1.re, z1.im), (z2.re, z2.im));
        }
    }
    let h = h.renormalize_det().map_err(|_| Error::Defective)?;
    let g = h.inverse().map_err(|_| Error::Defective)?;
    let b_diag = HMatrix::complex_diag(
        &classes
            .iter()
            .map(|k| (k.value.re, k.value.im))
            .collect::<Vec<_>>(),
    );
    let transported = &(&g * b) * &h;
    let residual = transported.distance(&b_diag) / b.frobenius_norm().max(f64::MIN_POSITIVE);
    Ok(CartanFrame { g, b_diag, residual })
}

/// `(gAg^{-1}, gBg^{-1})` for `g ∈ Sl(n,H)`.
pub fn conjugate_system(a: &HMatrix, b: &HMatrix, g: &HMatrix) -> Result<(HMatrix, HMatrix)> {
    if a.n() != b.n() || a.n() != g.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            found: if a.n() != b.n() { b.n() } else { g.n() },
        });
    }
    g.ensure_in_group()?;
    let g_inv = g.inverse()?;
    Ok((&(g * a) * &g_inv, &(g * b) * &g_inv))
}

/// Permutation matrix sending `e_r ↦ e_1` and `e_s ↦ e_n` (0-based `r < s`),
/// so that it conjugates `sl(2,H)_{r,s}` onto `sl(2,H)_{1,n}`.
pub fn corner_permutation(n: usize, r: usize, s: usize) -> HMatrix {
    assert!(r < s && s < n, "need r < s < n");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(0, r);
    perm.swap(n - 1, s);
    // perm[k] is the basis vector placed at position k; column perm[k] of P
    // therefore has its 1 in row k.
    let mut p = HMatrix::zeros(n);
    for (row, &col) in perm.iter().enumerate() {
        p[(row, col)] = Quaternion::ONE;
    }
    p
}

/// Runs H1, diagonalizes `B`, and evaluates H2/H3 in the resulting frame.
pub fn certify(a: &HMatrix, b: &HMatrix, opts: &CertifyOptions) -> Result<Certificate> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let n = a.n();
    if n < 2 {
        return Err(Error::InvalidSize(n, "certification needs n >= 2"));
    }
    a.ensure_in_algebra()?;
    b.ensure_in_algebra()?;
    if !(opts.tol > 0.0) || opts.resolution < 2 {
        return Err(Error::InvalidArgument("need tol > 0 and Q >= 2".into()));
    }
    let config = CertificateConfig {
        resolution: opts.resolution,
        tol: opts.tol,
        seed: opts.seed,
    };
    let max_depth = opts.max_depth.unwrap_or_else(|| lie::default_max_depth(n));

    let mut reasons = Vec::new();
    let h1 = match lie::larc_with_depth(a, b, max_depth) {
        Ok(rep) => H1Summary::from(rep),
        Err(Error::ClosureUnstable { depth, rank }) => {
            reasons.push(format!("bracket closure unstable after {depth} generations at rank {rank}"));
            H1Summary {
                holds: false,
                rank,
                margin: 0.0,
            }
        }
        Err(e) => return Err(e),
    };
    let unstable = !reasons.is_empty();

    let (frame, h2, h3) = match diagonalize_cartan(b) {
        Ok(frame) => {
            let a_t = &(&frame.g * a) * &frame.g.inverse()?;
            let h2 = check_h2(&frame.b_diag, opts.resolution, opts.tol)?;
            let h3 = check_h3(&a_t, opts.tol)?;
            let witness = FrameWitness {
                g: frame.g,
                residual: frame.residual,
            };
            (Some(witness), Some(h2), Some(h3))
        }
        Err(e) => {
            reasons.push(format!("cartan frame unavailable: {e}"));
            (None, None, None)
        }
    };

    let verdict = if !h1.holds && !unstable {
        reasons.insert(0, format!("H1 fails: rank {} < {}", h1.rank, lie::algebra_dim(n)));
        Verdict::NotAccessible
    } else if unstable || frame.is_none() {
        Verdict::Inconclusive
    } else {
        let h2r = h2.as_ref().expect("frame present");
        let h3r = h3.as_ref().expect("frame present");
        if !h2r.ordering_ok {
            reasons.push("H2 fails: real parts not in the closed Weyl chamber with strict end gaps".into());
        }
        if !h2r.b_ends_nonzero {
            reasons.push("H2 fails: b_1 or b_n vanishes".into());
        } else if !h2r.ratio_irrational_at_resolution {
            reasons.push(format!("H2 fails: b_1/b_n rational at resolution Q = {}", opts.resolution));
        }
        if !h3r.p_ok {
            reasons.push("H3 fails: p in H_{1,i} ∪ H_{j,k}".into());
        }
        if !h3r.q_ok {
            reasons.push("H3 fails: q in H_{1,i} ∪ H_{j,k}".into());
        }
        if h2r.holds() && h3r.holds() {
            Verdict::Controllable
        } else {
            Verdict::Inconclusive
        }
    };

    Ok(Certificate {
        verdict,
        h1,
        h2,
        h3,
        frame,
        config,
        reason: (!reasons.is_empty()).then(|| reasons.join("; ")),
    })
}

/// A pair that passes H1–H3 for every `n ≥ 2`.
///
/// For `n = 2` this is `A = E_12 (1+j) + E_21 (i+k)`, `B = diag(1+i, -1+i√2)`.
pub fn reference_pair(n: usize) -> (HMatrix, HMatrix) {
    assert!(n >= 2);
    let sqrt2 = 2f64.sqrt();
    let b = if n == 2 {
        HMatrix::complex_diag(&[(1.0, 1.0), (-1.0, sqrt2)])
    } else {
        let entries: Vec<(f64, f64)> = (0..n)
            .map(|r| ((n as f64 - 1.0) / 2.0 - r as f64, 1.0 + r as f64 * sqrt2))
            .collect();
        HMatrix::complex_diag(&entries)
    };
    let mut a = HMatrix::zeros(n);
    if n > 2 {
        // fill the interior so that the pair brackets out to everything
        for r in 0..n {
            for s in 0..n {
                if r != s {
                    a[(r, s)] = Quaternion::new(
                        1.0 / (1 + r + s) as f64,
                        0.5 * r as f64,
                        0.25 * s as f64,
                        0.1 * (r * s) as f64,
                    );
                }
            }
        }
    }
    a[(0, n - 1)] = Quaternion::new(1.0, 0.0, 1.0, 0.0);
    a[(n - 1, 0)] = Quaternion::new(0.0, 1.0, 0.0, 1.0);
    (a, b)
}

/// Random element of `Sl(n,H)`: `exp(scale · X)` with Gaussian `X`.
pub fn random_group_element(n: usize, seed: u64, scale: f64) -> Result<HMatrix> {
    Ok(random_algebra_element(n, seed)?.scale(scale).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub conjugations: usize,
    /// Size of the random conjugators `exp(scale · X)`.
    pub conjugation_scale: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            conjugations: 100,
            conjugation_scale: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub h1_count: usize,
    pub h1_fraction: f64,
    pub controllable_count: usize,
    pub controllable_fraction: f64,
    pub not_accessible_count: usize,
    pub inconclusive_count: usize,
    /// Index of the sampled pair used for the conjugation check, or `None`
    /// when no sample was controllable and [`reference_pair`] was used.
    pub reference_trial: Option<usize>,
    pub conjugations: usize,
    pub conjugations_controllable: usize,
}

/// Per-trial seeds for [`sample_generic`].
pub fn trial_pair(n: usize, seed: u64, trial: usize) -> Result<(HMatrix, HMatrix)> {
    let a = random_algebra_element(n, derive_seed(seed, stream::SAMPLE_A, trial as u64))?;
    let b = random_algebra_element(n, derive_seed(seed, stream::SAMPLE_B, trial as u64))?;
    Ok((a, b))
}

/// Certifies `trials` Gaussian pairs, then checks that a controllable pair
/// stays controllable under `sample.conjugations` random conjugations.
pub fn sample_generic(
    n: usize,
    trials: usize,
    seed: u64,
    opts: &CertifyOptions,
    sample: &SampleOptions,
) -> Result<SampleStats> {
    if trials < 1 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::InvalidSize(n, "sampling needs n >= 2"));
    }
    let verdicts: Vec<(bool, Verdict)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (a, b) = trial_pair(n, seed, t)?;
            let cert = certify(&a, &b, opts)?;
            Ok((cert.h1.holds, cert.verdict))
        })
        .collect::<Result<_>>()?;

    let h1_count = verdicts.iter().filter(|v| v.0).count();
    let count = |want: Verdict| verdicts.iter().filter(|v| v.1 == want).count();
    let controllable_count = count(Verdict::Controllable);
    let reference_trial = verdicts.iter().position(|v| v.1 == Verdict::Controllable);
    let (ref_a, ref_b) = match reference_trial {
        Some(t) => trial_pair(n, seed, t)?,
        None => reference_pair(n),
    };

    let survivors: usize = (0..sample.conjugations)
        .into_par_iter()
        .map(|k| {
            let g = random_group_element(
                n,
                derive_seed(seed, stream::CONJUGATION, k as u64),
                sample.conjugation_scale,
            )?
            .renormalize_det()?;
            let (a2, b2) = conjugate_system(&ref_a, &ref_b, &g)?;
            let cert = certify(&a2, &b2, opts)?;
            Ok(usize::from(cert.verdict == Verdict::Controllable))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();

    Ok(SampleStats {
        n,
        trials,
        seed,
        h1_count,
        h1_fraction: h1_count as f64 / trials as f64,
        controllable_count,
        controllable_fraction: controllable_count as f64 / trials as f64,
        not_accessible_count: count(Verdict::NotAccessible),
        inconclusive_count: count(Verdict::Inconclusive),
        reference_trial,
        conjugations: sample.conjugations,
        conjugations_controllable: survivors,
    })
}
