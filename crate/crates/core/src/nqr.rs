//! The least quadratic nonresidue, smooth-number counts, and the two-branch
//! survey comparing `n_p` and the worst-case box side against power thresholds.
//!
//! The bridge between short character sums and `n_p` is the elementary
//! inequality behind Vinogradov's argument: if `y < n_p`, every `y`-smooth
//! integer is a product of residues, so `S(0; x) >= 2 Psi(x, y) - x`.

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Result};
use crate::hyperbola::max_min_box;
use crate::modarith::Modulus;

/// `1 / (6 sqrt(e))`, the exponent of the nonresidue branch before `epsilon`.
pub fn nonresidue_exponent() -> f64 {
    1.0 / (6.0 * std::f64::consts::E.sqrt())
}

/// Exponent of the box branch before `epsilon`.
pub const BOX_EXPONENT: f64 = 1.0 / 6.0;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NqrResult {
    pub p: Modulus,
    pub n_p: u64,
}

/// Smallest `n >= 2` with `(n/p) = -1`, by linear scan.
pub fn least_nonresidue(p: Modulus) -> NqrResult {
    let n_p = (2..p.get())
        .find(|&n| p.legendre(n) == -1)
        .expect("half of the nonzero residues are nonresidues");
    NqrResult { p, n_p }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SmoothCount {
    pub x: u64,
    pub y: u64,
    /// Number of `y`-smooth integers in `[1, x]`, counting 1.
    pub psi: u64,
}

/// `Psi(x, y)` from a largest-prime-factor sieve over `[1, x]`.
pub fn smooth_count(x: u64, y: u64) -> Result<SmoothCount> {
    if x == 0 || y == 0 {
        return Err(out_of_range(format!(
            "Psi(x, y) needs x, y >= 1, got ({x}, {y})"
        )));
    }
    let n = x as usize;
    let mut largest = vec![1u64; n + 1];
    for q in 2..=n {
        if largest[q] != 1 {
            continue;
        }
        // q is prime; primes are visited in increasing order so the last
        // write wins with the largest factor.
        let mut k = q;
        while k <= n {
            largest[k] = q as u64;
            k += q;
        }
    }
    let psi = largest[1..].iter().filter(|&&f| f <= y).count() as u64;
    Ok(SmoothCount { x, y, psi })
}

/// `2 Psi(x, y) - x`, a lower bound for `S(0; x)` whenever `y < n_p`.
pub fn vinogradov_lower_bound(p: Modulus, x: u64, y: u64) -> Result<i64> {
    if x == 0 || x > p.get() - 1 {
        return Err(out_of_range(format!(
            "x = {x} outside [1, {}]",
            p.get() - 1
        )));
    }
    let psi = smooth_count(x, y)?.psi;
    Ok(2 * psi as i64 - x as i64)
}

/// One prime's position relative to both branches of the dichotomy.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyRecord {
    pub p: u64,
    pub n_p: u64,
    pub epsilon: f64,
    #[serde(rename = "C")]
    pub constant: f64,
    #[serde(rename = "threshold_A")]
    pub threshold_a: f64,
    #[serde(rename = "branch_A")]
    pub branch_a: bool,
    pub max_h_star: u64,
    #[serde(rename = "threshold_B")]
    pub threshold_b: f64,
    #[serde(rename = "branch_B")]
    pub branch_b: bool,
}

impl DichotomyRecord {
    /// Thresholds and booleans recomputed from the stored inputs agree with
    /// the stored values.
    pub fn is_consistent(&self) -> bool {
        let pf = self.p as f64;
        let ta = self.constant * pf.powf(nonresidue_exponent() + self.epsilon);
        let tb = self.constant * pf.powf(BOX_EXPONENT + self.epsilon);
        self.threshold_a > 0.0
            && self.threshold_b > 0.0
            && ta == self.threshold_a
            && tb == self.threshold_b
            && self.branch_a == (self.n_p as f64 <= self.threshold_a)
            && self.branch_b == (self.max_h_star as f64 <= self.threshold_b)
    }

    pub fn either(&self) -> bool {
        self.branch_a || self.branch_b
    }
}

pub fn dichotomy_check(p: Modulus, epsilon: f64, constant: f64) -> Result<DichotomyRecord> {
    if !(epsilon > 0.0 && epsilon.is_finite()) || !(constant > 0.0 && constant.is_finite()) {
        return Err(out_of_range(format!(
            "epsilon and C must be positive, got {epsilon} and {constant}"
        )));
    }
    let n_p = least_nonresidue(p).n_p;
    let (max_h_star, _) = max_min_box(p)?;
    let pf = p.get() as f64;
    let threshold_a = constant * pf.powf(nonresidue_exponent() + epsilon);
    let threshold_b = constant * pf.powf(BOX_EXPONENT + epsilon);
    Ok(DichotomyRecord {
        p: p.get(),
        n_p,
        epsilon,
        constant,
        threshold_a,
        branch_a: n_p as f64 <= threshold_a,
        max_h_star,
        threshold_b,
        branch_b: max_h_star as f64 <= threshold_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::{build_table, char_sum};
    use crate::modarith::{is_prime, legendre, primes_in};

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn psi_brute(x: u64, y: u64) -> u64 {
        (1..=x)
            .filter(|&n| {
                let mut k = n;
                for q in 2..=y.min(n) {
                    while k % q == 0 {
                        k /= q;
                    }
                }
                k == 1
            })
            .count() as u64
    }

    #[test]
    fn nonresidue_examples() {
        assert_eq!(least_nonresidue(m(3)).n_p, 2);
        assert_eq!(least_nonresidue(m(7)).n_p, 3);
        assert_eq!(least_nonresidue(m(23)).n_p, 5);
        assert_eq!(least_nonresidue(m(5)).n_p, 2);
    }

    #[test]
    fn nonresidue_is_prime_and_preceded_by_residues() {
        for p in primes_in(3, 20_000) {
            let r = least_nonresidue(m(p));
            assert!(is_prime(r.n_p));
            assert_eq!(legendre(r.n_p as i64, m(p)), -1);
            assert!((2..r.n_p).all(|q| legendre(q as i64, m(p)) == 1));
        }
    }

    #[test]
    fn smooth_examples() {
        assert_eq!(smooth_count(10, 2).unwrap().psi, 4);
        assert_eq!(smooth_count(6, 2).unwrap().psi, 3);
        // {1, 2, 3, 4, 6, 8, 9, 12, 16, 18}
        assert_eq!(smooth_count(22, 3).unwrap().psi, 10);
        assert_eq!(smooth_count(1, 1).unwrap().psi, 1);
        for x in 1..40 {
            assert_eq!(smooth_count(x, x).unwrap().psi, x);
            assert_eq!(smooth_count(x, x + 7).unwrap().psi, x);
        }
        assert!(smooth_count(0, 3).is_err());
        assert!(smooth_count(3, 0).is_err());
    }

    #[test]
    fn smooth_matches_trial_division_and_is_monotone() {
        for x in 1..200 {
            for y in 1..30 {
                let psi = smooth_count(x, y).unwrap().psi;
                assert_eq!(psi, psi_brute(x, y), "x={x} y={y}");
                assert!(psi >= 1 && psi <= x);
                assert!(smooth_count(x + 1, y).unwrap().psi >= psi);
                assert!(smooth_count(x, y + 1).unwrap().psi >= psi);
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(vinogradov_lower_bound(m(7), 6, 2).unwrap(), 0);
        let t7 = build_table(m(7)).unwrap();
        assert_eq!(char_sum(&t7, 0, 6).unwrap(), 0);
        assert_eq!(vinogradov_lower_bound(m(23), 22, 3).unwrap(), -2);
        let t23 = build_table(m(23)).unwrap();
        assert!(char_sum(&t23, 0, 22).unwrap() >= -2);
        for x in 1..23 {
            assert_eq!(vinogradov_lower_bound(m(23), x, 50).unwrap(), x as i64);
        }
        assert!(vinogradov_lower_bound(m(7), 7, 2).is_err());
        assert!(vinogradov_lower_bound(m(7), 0, 2).is_err());
    }

    #[test]
    fn exponent_value() {
        assert!((nonresidue_exponent() - 0.101088).abs() < 5e-7);
    }

    #[test]
    fn dichotomy_examples() {
        let d = dichotomy_check(m(7), 0.1, 2.0).unwrap();
        assert_eq!(d.n_p, 3);
        assert!((d.threshold_a - 2.958).abs() < 1e-3);
        assert!(!d.branch_a);
        assert_eq!(d.max_h_star, 3);
        assert!((d.threshold_b - 3.36).abs() < 1e-2);
        assert!(d.branch_b);
        assert!(d.is_consistent());

        let d = dichotomy_check(m(23), 0.1, 2.0).unwrap();
        assert_eq!(d.n_p, 5);
        assert!(d.is_consistent());

        for p in [5, 7, 11, 13] {
            let d = dichotomy_check(m(p), 0.05, p as f64).unwrap();
            assert!(d.branch_a && d.branch_b);
        }
        assert!(dichotomy_check(m(7), 0.0, 2.0).is_err());
        assert!(dichotomy_check(m(7), 0.1, -1.0).is_err());
        assert!(dichotomy_check(m(3), 0.1, 2.0).is_err());
    }
}
