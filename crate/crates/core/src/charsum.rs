//! Short sums of the quadratic character, mean-value statistics over spaced
//! families, and the moment of the bilinear sum `sum_u (u/p)((un - 4c)/p)`.

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::hyperbola::{circ_dist, HyperbolaInstance};
use crate::modarith::{legendre, Modulus, QuadraticCharacter};

/// Prefix sums of the Legendre symbol: `prefix[k] = sum_{1 <= n <= k} (n/p)`.
#[derive(Clone, Debug)]
pub struct CharSumTable {
    p: Modulus,
    prefix: Vec<i32>,
}

impl CharSumTable {
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn prefix(&self) -> &[i32] {
        &self.prefix
    }

    /// `(n/p)` for `0 <= n < p`.
    #[inline]
    pub fn chi(&self, n: u64) -> i8 {
        if n == 0 {
            0
        } else {
            (self.prefix[n as usize] - self.prefix[n as usize - 1]) as i8
        }
    }
}

pub fn build_table(p: Modulus) -> Result<CharSumTable> {
    if p.get() > QuadraticCharacter::TABLE_LIMIT {
        return Err(out_of_range(format!(
            "p = {p} exceeds the table limit {}",
            QuadraticCharacter::TABLE_LIMIT
        )));
    }
    let chi = QuadraticCharacter::tabulated(p);
    let mut prefix = Vec::with_capacity(p.get() as usize);
    let mut acc = 0i32;
    prefix.push(0);
    for n in 1..p.get() {
        acc += chi.chi(n) as i32;
        prefix.push(acc);
    }
    Ok(CharSumTable { p, prefix })
}

fn check_window(table: &CharSumTable, n: u64, h: u64) -> Result<()> {
    let p = table.p.get();
    if h == 0 || n.checked_add(h).is_none_or(|end| end > p - 1) {
        return Err(out_of_range(format!(
            "window (N = {n}, h = {h}) must satisfy h >= 1 and N + h <= {}",
            p - 1
        )));
    }
    Ok(())
}

/// `S(N; h) = sum_{N < n <= N + h} (n/p)`, for windows inside one period.
pub fn char_sum(table: &CharSumTable, n: u64, h: u64) -> Result<i64> {
    check_window(table, n, h)?;
    Ok((table.prefix[(n + h) as usize] - table.prefix[n as usize]) as i64)
}

/// `max_{1 <= h <= H} |S(N; h)|`.
pub fn max_partial(table: &CharSumTable, n: u64, h: u64) -> Result<u64> {
    check_window(table, n, h)?;
    let base = table.prefix[n as usize];
    Ok(table.prefix[n as usize + 1..=(n + h) as usize]
        .iter()
        .map(|&s| (s - base).unsigned_abs() as u64)
        .max()
        .unwrap_or(0))
}

/// Strictly increasing starting points `0 <= N_1 < .. < N_J < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacedFamily {
    p: Modulus,
    points: Vec<u64>,
}

impl SpacedFamily {
    pub fn new(p: Modulus, points: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = points.iter().find(|&&n| n >= p.get()) {
            return Err(out_of_range(format!("family point {bad} outside [0, {p})")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Usage(
                "family points must be strictly increasing".into(),
            ));
        }
        Ok(SpacedFamily { p, points })
    }

    /// `{0, H, 2H, ..}` as far as `N + H <= p - 1` allows.
    pub fn arithmetic(p: Modulus, h: u64) -> Result<Self> {
        if h == 0 || h > p.get() - 1 {
            return Err(out_of_range(format!(
                "spacing {h} outside [1, {}]",
                p.get() - 1
            )));
        }
        let points = (0..)
            .map(|j| j * h)
            .take_while(|&n| n + h < p.get())
            .collect();
        SpacedFamily::new(p, points)
    }

    pub fn modulus(&self) -> Modulus {
        self.p
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// An exact moment next to the reference quantity it is compared with.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub r: u32,
    /// `H` for the spaced-family statistic, `U` for the bilinear moment.
    pub window: u64,
    pub value: u128,
    pub bound: f64,
    pub ratio: f64,
}

impl MomentReport {
    fn new(r: u32, window: u64, value: u128, bound: f64) -> Self {
        MomentReport {
            r,
            window,
            value,
            bound,
            ratio: value as f64 / bound,
        }
    }
}

fn checked_pow(base: u64, exp: u32, what: &'static str) -> Result<u128> {
    (base as u128).checked_pow(exp).ok_or(Error::Overflow(what))
}

fn check_r(r: u32) -> Result<()> {
    if r == 0 {
        return Err(out_of_range("moment order r must be positive"));
    }
    Ok(())
}

/// `sum_j max_{h <= H} |S(N_j; h)|^{2r}` against `H^{2r-2} p^{1/2 + 1/(2r)}`.
///
/// The family must be spaced by at least `H` and every window must stay inside
/// the period.
pub fn shao_statistic(
    table: &CharSumTable,
    family: &SpacedFamily,
    h: u64,
    r: u32,
) -> Result<MomentReport> {
    check_r(r)?;
    if family.p != table.p {
        return Err(Error::ModulusMismatch(family.p.get(), table.p.get()));
    }
    if h == 0 {
        return Err(out_of_range("window H must be positive"));
    }
    if let Some(w) = family.points.windows(2).find(|w| w[1] - w[0] < h) {
        return Err(Error::SpacingViolation {
            left: w[0],
            right: w[1],
            h,
        });
    }
    let mut value = 0u128;
    for &n in &family.points {
        let m = max_partial(table, n, h)?;
        value = value
            .checked_add(checked_pow(m, 2 * r, "shao statistic")?)
            .ok_or(Error::Overflow("shao statistic"))?;
    }
    let p = table.p.get() as f64;
    let bound = (h as f64).powi(2 * r as i32 - 2) * p.powf(0.5 + 1.0 / (2.0 * r as f64));
    Ok(MomentReport::new(r, h, value, bound))
}

fn check_moment_args(p: Modulus, c: i64, u: u64, r: u32) -> Result<u64> {
    check_r(r)?;
    if u == 0 || u >= p.get() {
        return Err(out_of_range(format!("U = {u} outside [1, {})", p)));
    }
    let c = p.reduce(c);
    if c == 0 {
        return Err(Error::InvalidConstant { c: 0, p: p.get() });
    }
    Ok(c)
}

fn sum_powers(mut inner: impl Iterator<Item = i64>, r: u32) -> Result<u128> {
    inner.try_fold(0u128, |acc, s| {
        acc.checked_add(checked_pow(s.unsigned_abs(), 2 * r, "weil moment")?)
            .ok_or(Error::Overflow("weil moment"))
    })
}

/// `sum_{n=1}^{p-1} |sum_{u<=U} (u/p)((un - 4c)/p)|^{2r}` by the direct double
/// loop over Legendre symbols.
pub fn weil_moment_naive(p: Modulus, c: i64, u_max: u64, r: u32) -> Result<u128> {
    let c = check_moment_args(p, c, u_max, r)?;
    let c4 = p.mul(4, c);
    let inner = (1..p.get()).map(|n| {
        (1..=u_max)
            .map(|u| {
                let arg = p.sub(p.mul(u, n), c4);
                (legendre(u as i64, p) * p.legendre(arg)) as i64
            })
            .sum::<i64>()
    });
    sum_powers(inner, r)
}

/// The same moment from a character table, walking `un - 4c` in steps of `u`.
fn weil_moment_tabulated(chi: &QuadraticCharacter, c: u64, u_max: u64, r: u32) -> Result<u128> {
    let p = chi.modulus();
    let c4 = p.mul(4, c);
    let mut inner = vec![0i64; p.get() as usize];
    for u in 1..=u_max {
        let cu = chi.chi(u) as i64;
        let mut arg = p.sub(u, c4);
        for slot in inner.iter_mut().skip(1) {
            *slot += cu * chi.chi(arg) as i64;
            arg = p.add(arg, u);
        }
    }
    sum_powers(inner.into_iter().skip(1), r)
}

/// The bilinear moment with reference `U^r p + U^{2r} p^{1/2}`.
pub fn weil_moment(p: Modulus, c: i64, u_max: u64, r: u32) -> Result<MomentReport> {
    let c = check_moment_args(p, c, u_max, r)?;
    let value = weil_moment_tabulated(&QuadraticCharacter::new(p), c, u_max, r)?;
    let (uf, pf) = (u_max as f64, p.get() as f64);
    let bound = uf.powi(r as i32) * pf + uf.powi(2 * r as i32) * pf.sqrt();
    Ok(MomentReport::new(r, u_max, value, bound))
}

/// `{-c / b' mod p : 1 <= b' <= H/2}`, sorted.
pub fn inverse_family(inst: &HyperbolaInstance, h: u64) -> Result<SpacedFamily> {
    let p = inst.modulus();
    if h < 2 || h > p.get() {
        return Err(out_of_range(format!("H = {h} outside [2, {p}]")));
    }
    let neg_c = p.neg(inst.c());
    let mut points: Vec<u64> = (1..=h / 2)
        .map(|b| p.mul(neg_c, p.inv(b).expect("b' < p is a unit")))
        .collect();
    points.sort_unstable();
    SpacedFamily::new(p, points)
}

/// Smallest circular distance between two members of the family.
pub fn min_circular_gap(family: &SpacedFamily) -> Result<u64> {
    let pts = &family.points;
    if pts.len() < 2 {
        return Err(Error::Usage(
            "a circular gap needs at least two points".into(),
        ));
    }
    // The closest pair is adjacent on the circle.
    let wrap = family.p.get() - (pts[pts.len() - 1] - pts[0]);
    Ok(pts
        .windows(2)
        .map(|w| circ_dist(w[0], w[1], family.p))
        .chain(std::iter::once(wrap))
        .min()
        .expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::primes_in;
    use proptest::prelude::*;

    fn m(p: u64) -> Modulus {
        Modulus::new(p).unwrap()
    }

    fn table(p: u64) -> CharSumTable {
        build_table(m(p)).unwrap()
    }

    fn naive_sum(p: Modulus, n: u64, h: u64) -> i64 {
        (n + 1..=n + h).map(|k| legendre(k as i64, p) as i64).sum()
    }

    #[test]
    fn table_examples() {
        assert_eq!(table(7).prefix(), &[0, 1, 2, 1, 2, 1, 0]);
        assert_eq!(table(3).prefix(), &[0, 1, 0]);
        for p in primes_in(3, 3000) {
            let t = table(p);
            assert_eq!(t.prefix()[p as usize - 1], 0);
            assert!(t.prefix().windows(2).all(|w| (w[1] - w[0]).abs() == 1));
        }
    }

    #[test]
    fn char_sum_examples() {
        let t = table(7);
        assert_eq!(char_sum(&t, 0, 3).unwrap(), 1);
        assert_eq!(char_sum(&t, 0, 6).unwrap(), 0);
        assert_eq!(char_sum(&t, 3, 2).unwrap(), 0);
        assert!(char_sum(&t, 3, 4).is_err());
        assert!(char_sum(&t, 0, 0).is_err());
        assert!(char_sum(&t, u64::MAX, 1).is_err());
    }

    #[test]
    fn max_partial_examples() {
        let t = table(7);
        assert_eq!(max_partial(&t, 0, 6).unwrap(), 2);
        assert_eq!(max_partial(&t, 2, 2).unwrap(), 1);
        for n in 0..6 {
            assert_eq!(max_partial(&t, n, 1).unwrap(), 1);
        }
        assert!(max_partial(&t, 5, 2).is_err());
    }

    #[test]
    fn shao_examples() {
        let t = table(7);
        let fam = |v: Vec<u64>| SpacedFamily::new(m(7), v).unwrap();
        assert_eq!(shao_statistic(&t, &fam(vec![0]), 2, 1).unwrap().value, 4);
        // max_partial(3, 2) = max(|1|, |0|) = 1
        assert_eq!(shao_statistic(&t, &fam(vec![0, 3]), 2, 1).unwrap().value, 5);
        for p in [7, 11, 101] {
            let t = table(p);
            let r = shao_statistic(&t, &SpacedFamily::new(m(p), vec![0]).unwrap(), 1, 1).unwrap();
            assert_eq!(r.value, 1);
        }
    }

    #[test]
    fn shao_rejects_bad_families() {
        let t = table(7);
        let fam = SpacedFamily::new(m(7), vec![0, 1]).unwrap();
        assert_eq!(
            shao_statistic(&t, &fam, 2, 1),
            Err(Error::SpacingViolation {
                left: 0,
                right: 1,
                h: 2
            })
        );
        let fam = SpacedFamily::new(m(7), vec![0, 5]).unwrap();
        assert!(shao_statistic(&t, &fam, 2, 1).is_err());
        assert!(shao_statistic(&t, &SpacedFamily::new(m(7), vec![0]).unwrap(), 2, 0).is_err());
        assert!(shao_statistic(&table(11), &fam, 2, 1).is_err());
        assert!(SpacedFamily::new(m(7), vec![3, 3]).is_err());
        assert!(SpacedFamily::new(m(7), vec![7]).is_err());
    }

    #[test]
    fn shao_trivial_bound() {
        for p in primes_in(11, 400) {
            let t = table(p);
            for h in [1, 2, 5, 9] {
                let fam = SpacedFamily::arithmetic(m(p), h).unwrap();
                for r in 1..=3 {
                    let rep = shao_statistic(&t, &fam, h, r).unwrap();
                    assert!(rep.value <= fam.len() as u128 * (h as u128).pow(2 * r));
                    assert!(rep.ratio.is_finite() && rep.ratio >= 0.0);
                }
            }
        }
    }

    #[test]
    fn weil_examples() {
        let p = m(7);
        assert_eq!(weil_moment(p, 1, 1, 1).unwrap().value, 5);
        assert_eq!(weil_moment(p, 1, 1, 2).unwrap().value, 5);
        assert_eq!(weil_moment_naive(p, 1, 1, 1).unwrap(), 5);
        // Frozen from the naive double loop: U = p - 1, r = 1 gives p - 1.
        for q in [5, 7, 11, 13] {
            for c in 1..q as i64 {
                assert_eq!(
                    weil_moment_naive(m(q), c, q - 1, 1).unwrap(),
                    (q - 1) as u128
                );
                assert_eq!(
                    weil_moment(m(q), c, q - 1, 1).unwrap().value,
                    (q - 1) as u128
                );
            }
        }
        assert!(weil_moment(p, 0, 1, 1).is_err());
        assert!(weil_moment(p, 1, 0, 1).is_err());
        assert!(weil_moment(p, 1, 7, 1).is_err());
        assert!(weil_moment(p, 1, 1, 0).is_err());
    }

    #[test]
    fn weil_reference_bound() {
        let rep = weil_moment(m(101), 3, 10, 2).unwrap();
        let expected = 100.0 * 101.0 + 10_000.0 * 101f64.sqrt();
        assert!((rep.bound - expected).abs() < 1e-9);
        assert_eq!(rep.window, 10);
        assert!((rep.ratio - rep.value as f64 / expected).abs() < 1e-12);
    }

    #[test]
    fn weil_paths_agree() {
        for p in primes_in(3, 120) {
            for c in [1, 2, p as i64 - 1] {
                for u in [1, 2, (p - 1) / 2, p - 1] {
                    if u == 0 {
                        continue;
                    }
                    for r in 1..=3 {
                        assert_eq!(
                            weil_moment(m(p), c, u, r).unwrap().value,
                            weil_moment_naive(m(p), c, u, r).unwrap(),
                            "p={p} c={c} U={u} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_family_examples() {
        let i = |p, c| HyperbolaInstance::new(m(p), c).unwrap();
        assert_eq!(inverse_family(&i(7, 1), 4).unwrap().points(), &[3, 6]);
        assert_eq!(inverse_family(&i(7, 1), 2).unwrap().points(), &[6]);
        for h in 2..=101 {
            assert_eq!(inverse_family(&i(101, 5), h).unwrap().len() as u64, h / 2);
        }
        assert!(inverse_family(&i(7, 1), 1).is_err());
        assert!(inverse_family(&i(7, 1), 8).is_err());
    }

    #[test]
    fn circular_gap_examples() {
        let fam = |p, v: Vec<u64>| SpacedFamily::new(m(p), v).unwrap();
        assert_eq!(min_circular_gap(&fam(7, vec![3, 6])).unwrap(), 3);
        assert_eq!(min_circular_gap(&fam(101, vec![0, 50])).unwrap(), 50);
        assert_eq!(min_circular_gap(&fam(7, vec![1, 2, 4])).unwrap(), 1);
        assert_eq!(min_circular_gap(&fam(7, vec![0, 6])).unwrap(), 1);
        assert!(min_circular_gap(&fam(7, vec![2])).is_err());
    }

    proptest! {
        #[test]
        fn circular_gap_matches_all_pairs(
            p in prop::sample::select(primes_in(3, 500)),
            raw in prop::collection::btree_set(0u64..500, 2..12),
        ) {
            let pts: Vec<u64> = raw.into_iter().filter(|&n| n < p).collect();
            prop_assume!(pts.len() >= 2);
            let fam = SpacedFamily::new(m(p), pts.clone()).unwrap();
            let mut best = u64::MAX;
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    best = best.min(circ_dist(pts[i], pts[j], m(p)));
                }
            }
            prop_assert_eq!(min_circular_gap(&fam).unwrap(), best);
        }

        #[test]
        fn table_sums_match_naive(
            p in prop::sample::select(primes_in(3, 2000)),
            n_frac in 0.0f64..1.0,
            h_frac in 0.0f64..1.0,
        ) {
            let t = table(p);
            let n = ((p - 2) as f64 * n_frac) as u64;
            let h = 1 + ((p - 2 - n) as f64 * h_frac) as u64;
            let s = char_sum(&t, n, h).unwrap();
            prop_assert_eq!(s, naive_sum(m(p), n, h));
            let pf = p as f64;
            prop_assert!((s.abs() as f64) <= pf.sqrt() * pf.ln());
            let running: Vec<u64> = (1..=h).map(|k| naive_sum(m(p), n, k).unsigned_abs()).collect();
            prop_assert_eq!(max_partial(&t, n, h).unwrap(), *running.iter().max().unwrap());
            if n + h < p - 1 {
                prop_assert!(max_partial(&t, n, h + 1).unwrap() >= max_partial(&t, n, h).unwrap());
            }
        }
    }
}
