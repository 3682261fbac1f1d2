//! Piecewise-constant controls for `ġ = (A + uB) g` and a randomized
//! reachability probe.
//!
//! With `u` constant on each segment the flow is a finite product of
//! exponentials, so integration is exact up to the matrix exponential.

use crate::error::{Error, Result};
use crate::hmat::{HMatrix, MEMBERSHIP_TOL};
use crate::seed::{derive_seed, stream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Segments `(duration, u)` applied in order. Durations are positive and
/// finite; an empty signal is the empty product and leaves `g0` unchanged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "SignalRepr", into = "SignalRepr")]
pub struct ControlSignal {
    segments: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct SignalRepr {
    segments: Vec<(f64, f64)>,
}

impl TryFrom<SignalRepr> for ControlSignal {
    type Error = Error;

    fn try_from(r: SignalRepr) -> Result<Self> {
        ControlSignal::new(r.segments)
    }
}

impl From<ControlSignal> for SignalRepr {
    fn from(s: ControlSignal) -> Self {
        SignalRepr { segments: s.segments }
    }
}

impl ControlSignal {
    pub fn new(segments: Vec<(f64, f64)>) -> Result<Self> {
        for (k, &(tau, u)) in segments.iter().enumerate() {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::InvalidSignal(format!("segment {k}: duration {tau}")));
            }
            if !u.is_finite() {
                return Err(Error::InvalidSignal(format!("segment {k}: control {u}")));
            }
        }
        Ok(ControlSignal { segments })
    }

    pub fn empty() -> Self {
        ControlSignal::default()
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.0).sum()
    }

    pub fn reversed(&self) -> Self {
        ControlSignal {
            segments: self.segments.iter().rev().copied().collect(),
        }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &ControlSignal) -> Self {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        ControlSignal { segments }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    /// `g0` followed by the state after each segment.
    pub states: Vec<HMatrix>,
    /// Largest `| |det g| - 1 |` seen before each renormalization.
    pub max_det_drift: f64,
}

impl FlowTrace {
    pub fn final_state(&self) -> &HMatrix {
        self.states.last().expect("trace holds g0")
    }
}

fn check_system(a: &HMatrix, b: &HMatrix, g0: &HMatrix) -> Result<()> {
    for m in [b, g0] {
        if m.n() != a.n() {
            return Err(Error::SizeMismatch {
                expected: a.n(),
                found: m.n(),
            });
        }
    }
    g0.ensure_in_group()
}

fn step(a: &HMatrix, b: &HMatrix, tau: f64, u: f64) -> HMatrix {
    (a + &b.scale(u)).scale(tau).exp()
}

/// Full trajectory of [`flow`].
pub fn flow_trace(a: &HMatrix, b: &HMatrix, signal: &ControlSignal, g0: &HMatrix) -> Result<FlowTrace> {
    check_system(a, b, g0)?;
    let mut states = Vec::with_capacity(signal.len() + 1);
    states.push(g0.clone());
    let mut g = g0.clone();
    let mut drift = 0.0f64;
    for &(tau, u) in signal.segments() {
        let next = &step(a, b, tau, u) * &g;
        drift = drift.max((next.study_det_abs() - 1.0).abs());
        g = next.renormalize_det()?;
        states.push(g.clone());
    }
    Ok(FlowTrace {
        states,
        max_det_drift: drift,
    })
}

/// `e^{τ_k(A + u_k B)} ⋯ e^{τ_1(A + u_1 B)} g0`, renormalized to `|det| = 1`
/// after each factor.
pub fn flow(a: &HMatrix, b: &HMatrix, signal: &ControlSignal, g0: &HMatrix) -> Result<HMatrix> {
    check_system(a, b, g0)?;
    let mut g = g0.clone();
    for &(tau, u) in signal.segments() {
        g = (&step(a, b, tau, u) * &g).renormalize_det()?;
    }
    Ok(g)
}

/// Candidates evaluated per refinement round.
pub const ROUND_SIZE: usize = 64;

const MIN_DURATION: f64 = 1e-2;
const MAX_DURATION: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReachResult {
    pub best_dist: f64,
    pub best_signal: ControlSignal,
    pub best_index: usize,
    pub evaluated: usize,
}

fn random_duration<R: Rng>(rng: &mut R) -> f64 {
    (rng.random_range(MIN_DURATION.ln()..MAX_DURATION.ln())).exp()
}

/// At most `2 + log₂(k+1)` segments for candidate `k`.
fn segment_cap(k: usize) -> usize {
    2 + (usize::BITS - (k + 1).leading_zeros() - 1) as usize
}

fn fresh_candidate<R: Rng>(k: usize, rng: &mut R) -> ControlSignal {
    let cauchy = Cauchy::new(0.0, 1.0).expect("valid scale");
    let count = rng.random_range(1..=segment_cap(k));
    let segments = (0..count)
        .map(|_| (random_duration(rng), cauchy.sample(rng)))
        .collect();
    ControlSignal { segments }
}

fn perturb<R: Rng>(base: &ControlSignal, k: usize, rng: &mut R) -> ControlSignal {
    if base.is_empty() {
        return fresh_candidate(k, rng);
    }
    let jitter = Normal::new(0.0f64, 0.2).expect("valid sigma");
    let mut segments: Vec<(f64, f64)> = base
        .segments
        .iter()
        .map(|&(tau, u)| {
            let tau = (tau * jitter.sample(rng).exp()).clamp(1e-6, 10.0 * MAX_DURATION);
            let u = u + jitter.sample(rng) * (1.0 + u.abs());
            (tau, u)
        })
        .collect();
    match rng.random_range(0..4) {
        0 if segments.len() < segment_cap(k) + 2 => {
            let at = rng.random_range(0..=segments.len());
            let cauchy = Cauchy::new(0.0, 1.0).expect("valid scale");
            segments.insert(at, (random_duration(rng), cauchy.sample(rng)));
        }
        1 if segments.len() > 1 => {
            let at = rng.random_range(0..segments.len());
            segments.remove(at);
        }
        _ => {}
    }
    ControlSignal { segments }
}

/// Candidate `k`, given the incumbent at the start of its round.
fn candidate(k: usize, seed: u64, incumbent: &ControlSignal) -> ControlSignal {
    if k == 0 {
        return ControlSignal::empty();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, stream::REACH, k as u64));
    if k >= ROUND_SIZE && k % 2 == 1 {
        perturb(incumbent, k, &mut rng)
    } else {
        fresh_candidate(k, &mut rng)
    }
}

/// Best distances after each budget in `budgets` from a single run.
///
/// Candidate `k` depends only on the seed and on candidates evaluated in
/// earlier rounds, so the search with budget `m` is a prefix of the search
/// with any larger budget and the best distance is nonincreasing in it.
pub fn reach_probe_checkpoints(
    a: &HMatrix,
    b: &HMatrix,
    target: &HMatrix,
    budgets: &[usize],
    seed: u64,
) -> Result<Vec<ReachResult>> {
    let id = HMatrix::identity(a.n());
    check_system(a, b, &id)?;
    if target.n() != a.n() {
        return Err(Error::SizeMismatch {
            expected: a.n(),
            found: target.n(),
        });
    }
    let det = target.study_det_abs();
    if (det - 1.0).abs() > MEMBERSHIP_TOL {
        return Err(Error::NotInGroup(det));
    }
    if budgets.is_empty() || budgets.contains(&0) || budgets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "budgets must be positive and nondecreasing".into(),
        ));
    }
    let total = *budgets.last().expect("non-empty");

    let mut best = (f64::INFINITY, 0usize, ControlSignal::empty());
    let mut out = Vec::with_capacity(budgets.len());
    let mut next_checkpoint = 0;
    let mut start = 0;
    while start < total {
        let end = (start + ROUND_SIZE).min(total);
        let incumbent = best.2.clone();
        let round: Vec<(f64, usize, ControlSignal)> = (start..end)
            .into_par_iter()
            .map(|k| {
                let s = candidate(k, seed, &incumbent);
                // heavy-tailed controls can overflow; such candidates just lose
                let dist = match flow(a, b, &s, &id) {
                    Ok(g) => g.distance(target),
                    Err(_) => f64::INFINITY,
                };
                (if dist.is_finite() { dist } else { f64::INFINITY }, k, s)
            })
            .collect();
        // sequential scan keeps the prefix minima exact at every checkpoint
        for (dist, k, s) in round {
            if dist < best.0 || (dist == best.0 && k < best.1) {
                best = (dist, k, s);
            }
            while next_checkpoint < budgets.len() && k + 1 == budgets[next_checkpoint] {
                out.push(ReachResult {
                    best_dist: best.0,
                    best_signal: best.2.clone(),
                    best_index: best.1,
                    evaluated: k + 1,
                });
                next_checkpoint += 1;
            }
        }
        start = end;
    }
    Ok(out)
}

/// Random shooting with local refinement towards `target`, starting from
/// the identity. Heuristic evidence only: a small distance shows the target
/// is (nearly) reachable, a large one proves nothing.
pub fn reach_probe(
    a: &HMatrix,
    b: &HMatrix,
    target: &HMatrix,
    budget: usize,
    seed: u64,
) -> Result<ReachResult> {
    if budget < 1 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    Ok(reach_probe_checkpoints(a, b, target, &[budget], seed)?
        .pop()
        .expect("one checkpoint"))
}
