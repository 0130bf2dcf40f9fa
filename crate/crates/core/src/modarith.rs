//! Word-sized modular arithmetic modulo an odd prime.
//!
//! All products go through 128-bit intermediates, so every kernel is exact for
//! moduli below 2^62. [`Modulus`] carries the raw `u64` kernels used by the hot
//! loops elsewhere in the crate; [`Residue`] is the checked, modulus-tagged
//! value type.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 62;

// Deterministic for every n < 3.3 * 10^24, far beyond the word range we accept.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// An odd prime `3 <= p < 2^62`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(u64);

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Modulus::new(p)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..MAX_MODULUS).contains(&p) || p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Modulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Canonical representative of an arbitrary signed integer.
    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn reduce_i128(self, a: i128) -> u64 {
        a.rem_euclid(self.0 as i128) as u64
    }

    pub fn residue(self, a: i64) -> Residue {
        Residue {
            value: self.reduce(a),
            modulus: self,
        }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        mul_raw(a, b, self.0)
    }

    #[inline]
    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_raw(a, e, self.0)
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(self, a: u64) -> Result<u64> {
        let a = a % self.0;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.0 as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.reduce_i128(t0))
    }

    /// Legendre symbol of a reduced value `a < p`.
    #[inline]
    pub fn legendre(self, a: u64) -> i8 {
        jacobi(a, self.0)
    }

    /// A square root of `a` (Tonelli–Shanks), if one exists. The smaller of
    /// the two roots is returned.
    pub fn sqrt(self, a: u64) -> Option<u64> {
        let p = self.0;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let root = if p % 4 == 3 {
            self.pow(a, (p + 1) / 4)
        } else {
            let s = (p - 1).trailing_zeros();
            let q = (p - 1) >> s;
            let z = (2..p)
                .find(|&z| self.legendre(z) == -1)
                .expect("an odd prime has a nonresidue");
            let mut m = s;
            let mut c = self.pow(z, q);
            let mut t = self.pow(a, q);
            let mut r = self.pow(a, q.div_ceil(2));
            while t != 1 {
                let mut i = 0;
                let mut t2 = t;
                while t2 != 1 {
                    t2 = self.mul(t2, t2);
                    i += 1;
                }
                let b = self.pow(c, 1 << (m - i - 1));
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        Some(root.min(p - root))
    }
}

/// An element of Z/pZ tied to its modulus.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Result<Self> {
        if value >= modulus.get() {
            return Err(Error::OutOfRange(format!(
                "residue {value} is not reduced modulo {modulus}"
            )));
        }
        Ok(Residue { value, modulus })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Modulus {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// The quadratic character mod p, tabulated for small moduli and evaluated by
/// reciprocity otherwise. Used by loops that query many values for one `p`.
#[derive(Clone, Debug)]
pub struct QuadraticCharacter {
    modulus: Modulus,
    table: Option<Vec<i8>>,
}

impl QuadraticCharacter {
    /// Largest modulus that gets a lookup table.
    pub const TABLE_LIMIT: u64 = 1 << 24;

    pub fn new(modulus: Modulus) -> Self {
        if modulus.get() <= Self::TABLE_LIMIT {
            Self::tabulated(modulus)
        } else {
            Self::direct(modulus)
        }
    }

    pub fn direct(modulus: Modulus) -> Self {
        QuadraticCharacter {
            modulus,
            table: None,
        }
    }

    /// Marks the squares `k^2` for `1 <= k <= (p-1)/2`; everything else nonzero
    /// is a nonresidue.
    pub fn tabulated(modulus: Modulus) -> Self {
        let p = modulus.get();
        let mut table = vec![-1i8; p as usize];
        table[0] = 0;
        let mut sq = 0u64;
        for k in 1..=(p - 1) / 2 {
            // (k)^2 = (k-1)^2 + 2k - 1
            sq = modulus.add(sq, (2 * k - 1) % p);
            table[sq as usize] = 1;
        }
        QuadraticCharacter {
            modulus,
            table: Some(table),
        }
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Character value of a reduced residue `a < p`.
    #[inline]
    pub fn chi(&self, a: u64) -> i8 {
        match &self.table {
            Some(t) => t[a as usize],
            None => self.modulus.legendre(a),
        }
    }
}

#[inline]
fn mul_raw(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_raw(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_raw(acc, base, m);
        }
        base = mul_raw(base, base, m);
        e >>= 1;
    }
    acc
}

/// Jacobi symbol `(a/n)` for odd `n`, by reciprocity descent.
fn jacobi(a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz & 1 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Deterministic Miller–Rabin for `n < 2^62`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_raw(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_raw(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: Residue, b: Residue) -> Result<Residue> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch(a.modulus.get(), b.modulus.get()));
    }
    Ok(Residue {
        value: a.modulus.mul(a.value, b.value),
        modulus: a.modulus,
    })
}

/// `a^e mod p`; `0^0` is 1.
pub fn pow_mod(a: Residue, e: u64) -> Residue {
    Residue {
        value: a.modulus.pow(a.value, e),
        modulus: a.modulus,
    }
}

pub fn inv_mod(a: Residue) -> Result<Residue> {
    Ok(Residue {
        value: a.modulus.inv(a.value)?,
        modulus: a.modulus,
    })
}

/// Legendre symbol `(a/p)` of any integer, negative values included.
pub fn legendre(a: i64, p: Modulus) -> i8 {
    p.legendre(p.reduce(a))
}

/// Euler's criterion `a^((p-1)/2)` mapped onto `{-1, 0, 1}`.
pub fn euler_criterion(a: i64, p: Modulus) -> i8 {
    let a = p.reduce(a);
    if a == 0 {
        return 0;
    }
    match p.pow(a, (p.get() - 1) / 2) {
        1 => 1,
        v if v == p.get() - 1 => -1,
        v => unreachable!("Euler's criterion gave {v} for a prime modulus"),
    }
}

/// Primes in `[lo, hi]`, by a plain sieve of Eratosthenes when the range is
/// small enough, otherwise by Miller–Rabin.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    if hi <= 1 << 26 {
        let n = hi as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if composite[i] {
                continue;
            }
            if i as u64 >= lo {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        out
    } else {
        (lo..=hi).filter(|&n| is_prime(n)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_small_values() {
        assert!(is_prime(7));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(561));
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn primality_large_values() {
        // 2^61 - 1 is a Mersenne prime; strong pseudoprimes to several bases.
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(4_611_686_018_427_387_847)); // largest prime below 2^62
    }

    #[test]
    fn modulus_rejects_bad_values() {
        for p in [0, 1, 2, 9, 561, MAX_MODULUS, MAX_MODULUS + 1] {
            assert_eq!(Modulus::new(p), Err(Error::InvalidModulus(p)));
        }
    }

    #[test]
    fn mul_examples() {
        let p = m(7);
        let r = |v| Residue::new(v, p).unwrap();
        assert_eq!(mul_mod(r(6), r(6)).unwrap().value(), 1);
        assert_eq!(mul_mod(r(0), r(5)).unwrap().value(), 0);
        assert_eq!(mul_mod(r(3), r(5)).unwrap().value(), 1);
        let big = m((1 << 61) - 1);
        let pm1 = big.residue(-1);
        assert_eq!(mul_mod(pm1, pm1).unwrap().value(), 1);
    }

    #[test]
    fn mul_mismatched_moduli() {
        let a = m(7).residue(3);
        let b = m(11).residue(3);
        assert_eq!(mul_mod(a, b), Err(Error::ModulusMismatch(7, 11)));
    }

    #[test]
    fn pow_examples() {
        let p = m(7);
        assert_eq!(pow_mod(p.residue(0), 0).value(), 1);
        assert_eq!(pow_mod(p.residue(5), 0).value(), 1);
        assert_eq!(pow_mod(p.residue(3), 3).value(), 6);
        for a in 1..7 {
            assert_eq!(pow_mod(p.residue(a), 6).value(), 1);
        }
    }

    #[test]
    fn inverse_examples() {
        let p = m(7);
        assert_eq!(inv_mod(p.residue(1)).unwrap().value(), 1);
        assert_eq!(inv_mod(p.residue(3)).unwrap().value(), 5);
        assert_eq!(inv_mod(p.residue(6)).unwrap().value(), 6);
        assert_eq!(inv_mod(p.residue(0)), Err(Error::ZeroInverse));
    }

    #[test]
    fn legendre_examples() {
        let p = m(7);
        assert_eq!(legendre(0, p), 0);
        assert_eq!(legendre(2, p), 1);
        assert_eq!(legendre(3, p), -1);
        assert_eq!(legendre(-4, p), -1);
        assert_eq!(legendre(-11, p), legendre(3, p));
    }

    #[test]
    fn legendre_matches_euler_exhaustively() {
        for p in primes_in(3, 1000) {
            let p = m(p);
            let mut residues = 0;
            for a in 0..p.get() as i64 {
                let l = legendre(a, p);
                assert_eq!(l, euler_criterion(a, p), "a = {a}, p = {p}");
                residues += (l == 1) as u64;
            }
            assert_eq!(residues, (p.get() - 1) / 2);
        }
    }

    #[test]
    fn legendre_is_completely_multiplicative() {
        for p in [3, 5, 7, 11, 13, 31, 61] {
            let p = m(p);
            for a in 0..p.get() as i64 {
                for b in 0..p.get() as i64 {
                    assert_eq!(legendre(a * b, p), legendre(a, p) * legendre(b, p));
                }
            }
        }
    }

    #[test]
    fn inverse_is_an_involution() {
        for p in [3, 5, 7, 101, 997] {
            let p = m(p);
            for a in 1..p.get() as i64 {
                let a = p.residue(a);
                let inv = inv_mod(a).unwrap();
                assert_eq!(mul_mod(a, inv).unwrap().value(), 1);
                assert_eq!(inv_mod(inv).unwrap(), a);
            }
        }
    }

    #[test]
    fn sqrt_recovers_squares() {
        for p in [3, 5, 13, 17, 41, 97, 113, 257, 65_537] {
            let p = m(p);
            for a in 0..p.get().min(3000) {
                match p.sqrt(a) {
                    Some(r) => {
                        assert_eq!(p.mul(r, r), a);
                        assert!(r <= p.get() - r || r == 0);
                    }
                    None => assert_eq!(p.legendre(a), -1),
                }
            }
        }
    }

    #[test]
    fn tabulated_character_matches_legendre() {
        for p in primes_in(3, 2000) {
            let p = m(p);
            let chi = QuadraticCharacter::tabulated(p);
            for a in 0..p.get() {
                assert_eq!(chi.chi(a), p.legendre(a));
            }
        }
    }

    #[test]
    fn primes_in_agrees_with_miller_rabin() {
        let sieved = primes_in(0, 5000);
        let tested: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, tested);
        assert_eq!(primes_in(4, 4), Vec::<u64>::new());
        assert_eq!(primes_in(3, 7), vec![3, 5, 7]);
    }
}
