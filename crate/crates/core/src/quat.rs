//! Real quaternions and the subspace tests on `H = H_{1,i} ⊕ H_{j,k}`.
//!
//! A quaternion `w + xi + yj + zk` is stored as four `f64` coordinates and
//! serialized as the array `[w, x, y, z]`. Multiplication is the Hamilton
//! product (`ij = k`, `jk = i`, `ki = j`).
//!
//! Every quaternion splits uniquely as `a + b` with `a = w + xi` in the complex
//! line `H_{1,i}` and `b = yj + zk` in `H_{j,k}`. The two pieces behave very
//! differently under the circle action `q ↦ e^{it} q e^{-is}`: the first turns
//! by `t - s`, the second by `t + s`. The membership test
//! [`Quaternion::in_forbidden_union`] and the tangent rank test
//! [`Quaternion::tangent_pair`] are both phrased in terms of this splitting.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Relative tolerance used by the membership tests when none is supplied.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A real quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// The four basis units `1, i, j, k` in coordinate order.
    pub const UNITS: [Quaternion; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// The complex number `re + im·i` viewed as a quaternion.
    pub const fn complex(re: f64, im: f64) -> Self {
        Quaternion::new(re, im, 0.0, 0.0)
    }

    /// `e^{iθ} = cos θ + i sin θ`.
    pub fn cis(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Quaternion::complex(c, s)
    }

    /// Builds `z1 + z2·j` from two complex numbers given as `(re, im)` pairs.
    ///
    /// With `z2 = y + zi` this is `w + xi + yj + zk`, since `i·j = k`.
    pub const fn from_complex_pair(z1: (f64, f64), z2: (f64, f64)) -> Self {
        Quaternion::new(z1.0, z1.1, z2.0, z2.1)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Multiplicative inverse, or `None` for zero.
    pub fn inv(self) -> Option<Self> {
        let n2 = self.norm_sq();
        if n2 == 0.0 {
            None
        } else {
            Some(self.conj() / n2)
        }
    }

    /// Real inner product on `R^4`.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn is_zero(self) -> bool {
        self == Quaternion::ZERO
    }

    /// Splits `q = a + b` with `a ∈ H_{1,i}` and `b ∈ H_{j,k}`.
    pub fn split(self) -> (Quaternion, Quaternion) {
        (
            Quaternion::new(self.w, self.x, 0.0, 0.0),
            Quaternion::new(0.0, 0.0, self.y, self.z),
        )
    }

    /// True iff `q` lies (up to relative tolerance `tol`) in `H_{1,i} ∪ H_{j,k}`.
    ///
    /// Zero is always inside the union.
    pub fn in_forbidden_union(self, tol: f64) -> bool {
        let norm = self.norm();
        if norm == 0.0 {
            return true;
        }
        let (a, b) = self.split();
        a.norm() <= tol * norm || b.norm() <= tol * norm
    }

    /// `e^{it} · q · e^{-is}`.
    pub fn circle_conjugate(self, t: f64, s: f64) -> Self {
        Quaternion::cis(t) * self * Quaternion::cis(-s)
    }

    /// Tangent vectors `(iq, -qi)` of the torus orbit `{e^{it} q e^{-is}}` at `q`,
    /// with a relative rank test for their real linear independence.
    ///
    /// The pair counts as independent when its smallest singular value exceeds
    /// `tol` times its Frobenius norm. For this particular pair that ratio
    /// equals `min(|a|, |b|) / |q|`, so the verdict matches
    /// `!in_forbidden_union(q, tol)`.
    pub fn tangent_pair(self, tol: f64) -> (Quaternion, Quaternion, bool) {
        let v1 = Quaternion::I * self;
        let v2 = -(self * Quaternion::I);
        let g11 = v1.norm_sq();
        let g22 = v2.norm_sq();
        let g12 = v1.dot(v2);
        let trace = g11 + g22;
        if trace == 0.0 {
            return (v1, v2, false);
        }
        let det = (g11 * g22 - g12 * g12).max(0.0);
        let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
        // smaller eigenvalue of the Gram matrix, computed without cancellation
        let lo = 2.0 * det / (trace + disc);
        let independent = lo.sqrt() > tol * trace.sqrt();
        (v1, v2, independent)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.w, self.x, self.y, self.z);
        let (b0, b1, b2, b3) = (o.w, o.x, o.y, o.z);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

/// Hamilton product as a free function.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}
