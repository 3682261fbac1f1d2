//! Continued-fraction tests for "irrational at resolution `Q`".
//!
//! A real `x` is declared irrational at resolution `Q` when no fraction
//! `p/q` with `1 ≤ q ≤ Q` lies within `1 / (2Q²)` of it. Any such fraction
//! satisfies `|x - p/q| < 1/(2q²)` and is therefore a convergent of `x`
//! (Legendre), so scanning the convergents with denominator at most `Q` is
//! exhaustive.

/// A convergent `p/q` of a continued fraction expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergent {
    pub p: i128,
    pub q: i128,
}

impl Convergent {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

const MAX_TERMS: usize = 64;

/// Convergents of `x` with denominator at most `max_den`, in order.
pub fn convergents(x: f64, max_den: u64) -> Vec<Convergent> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut p_prev, mut p) = (0i128, 1i128);
    let (mut q_prev, mut q) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..MAX_TERMS {
        let a = rest.floor();
        if a.abs() > 1e18 {
            break;
        }
        let a_int = a as i128;
        let p_next = a_int * p + p_prev;
        let q_next = a_int * q + q_prev;
        if q_next > max_den as i128 {
            break;
        }
        out.push(Convergent { p: p_next, q: q_next });
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
        let frac = rest - a;
        if frac == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

/// First fraction with denominator `≤ resolution` within `1/(2·resolution²)` of `x`.
pub fn rational_witness(x: f64, resolution: u64) -> Option<Convergent> {
    let radius = 0.5 / (resolution as f64 * resolution as f64);
    convergents(x, resolution)
        .into_iter()
        .find(|c| (x - c.value()).abs() <= radius)
}

/// True iff no fraction with denominator `≤ resolution` lies within
/// `1/(2·resolution²)` of `x`. Non-finite inputs are never irrational.
pub fn irrational_at_resolution(x: f64, resolution: u64) -> bool {
    x.is_finite() && rational_witness(x, resolution).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over every denominator.
    fn brute_force_rational(x: f64, resolution: u64) -> bool {
        let radius = 0.5 / (resolution as f64 * resolution as f64);
        (1..=resolution).any(|q| {
            let p = (x * q as f64).round();
            (x - p / q as f64).abs() <= radius
        })
    }

    #[test]
    fn sqrt2_convergent_denominators() {
        let dens: Vec<i128> = convergents(2f64.sqrt(), 100).iter().map(|c| c.q).collect();
        assert_eq!(dens, vec![1, 2, 5, 12, 29, 70]);
        let dens: Vec<i128> = convergents(std::f64::consts::FRAC_1_SQRT_2, 100)
            .iter()
            .map(|c| c.q)
            .collect();
        assert_eq!(dens, vec![1, 1, 3, 7, 17, 41, 99].into_iter().filter(|&d| d <= 100).collect::<Vec<_>>());
    }

    #[test]
    fn decisions() {
        assert!(irrational_at_resolution(std::f64::consts::FRAC_1_SQRT_2, 10_000));
        assert!(irrational_at_resolution(2f64.sqrt(), 10_000));
        assert!(!irrational_at_resolution(2.0, 10_000));
        assert!(!irrational_at_resolution(0.5, 10_000));
        assert!(!irrational_at_resolution(-3.0 / 7.0, 10_000));
        assert!(!irrational_at_resolution(f64::NAN, 10_000));
        assert_eq!(rational_witness(2.0, 10_000), Some(Convergent { p: 2, q: 1 }));
    }

    #[test]
    fn agrees_with_brute_force() {
        let xs = [
            std::f64::consts::PI,
            std::f64::consts::E,
            0.123456789,
            1.0 / 3.0 + 1e-10,
            355.0 / 113.0,
            -0.618033988749895,
            7.000000001,
        ];
        for &x in &xs {
            for &res in &[10u64, 100, 1000, 10_000] {
                assert_eq!(
                    !irrational_at_resolution(x, res),
                    brute_force_rational(x, res),
                    "x = {x}, Q = {res}"
                );
            }
        }
    }
}
