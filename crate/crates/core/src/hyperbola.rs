//! Points of the modular hyperbola `xy = c (mod p)` and the smallest square box
//! that holds two of them.
//!
//! Boxes are cyclic in both coordinates: a box of side `H` covers `H`
//! consecutive residues on each axis, wrapping past `p - 1`. Two points fit in
//! such a box exactly when both circular coordinate distances are at most
//! `H - 1`.
//!
//! Two routes compute the minimal side:
//!
//! * [`min_box_oracle`] scans every pair of points, `O(p^2)`.
//! * [`min_box_fast`] searches offsets `(a, b)` in order of increasing
//!   `max(a, b)` and decides each with one Legendre symbol. Points `(x, y)` and
//!   `(x + a, y + b')` both lie on the curve iff
//!   `b'x^2 + ab'x + ac = 0`, whose discriminant is `ab'(ab' - 4c)`. A square
//!   or zero discriminant gives a solution `x`, hence a pair of points.
//!
//! The offset `b'` runs over both signs `+b` and `-b`, so the decision is an
//! exact "if and only if" against the oracle.

use serde::{Deserialize, Serialize};

use crate::error::{out_of_range, Error, Result};
use crate::modarith::{Modulus, QuadraticCharacter};

/// The curve `xy = c (mod p)` for a unit `c`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperbolaInstance {
    p: Modulus,
    c: u64,
}

impl HyperbolaInstance {
    pub fn new(p: Modulus, c: i64) -> Result<Self> {
        if c < 1 || c as u64 >= p.get() {
            return Err(Error::InvalidConstant { c, p: p.get() });
        }
        Ok(HyperbolaInstance { p, c: c as u64 })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.p
    }

    #[inline]
    pub fn c(&self) -> u64 {
        self.c
    }

    /// The point with abscissa `x`, for `1 <= x < p`.
    pub fn point_at(&self, x: u64) -> Result<Point> {
        if x == 0 || x >= self.p.get() {
            return Err(out_of_range(format!(
                "abscissa {x} outside [1, {})",
                self.p
            )));
        }
        let y = self.p.mul(self.c, self.p.inv(x)?);
        Ok(Point { x, y })
    }

    pub fn contains(&self, pt: Point) -> bool {
        pt.x < self.p.get() && pt.y < self.p.get() && self.p.mul(pt.x, pt.y) == self.c
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: u64,
    pub y: u64,
}

impl Point {
    pub fn new(x: u64, y: u64) -> Self {
        Point { x, y }
    }
}

/// The cyclic box `{X+1, .., X+H} x {Y+1, .., Y+H}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxSpec {
    x_offset: u64,
    y_offset: u64,
    side: u64,
}

impl BoxSpec {
    pub fn new(p: Modulus, x_offset: u64, y_offset: u64, side: u64) -> Result<Self> {
        let p = p.get();
        if x_offset >= p || y_offset >= p {
            return Err(out_of_range(format!(
                "box offsets ({x_offset}, {y_offset}) must lie in [0, {p})"
            )));
        }
        if side == 0 || side > p {
            return Err(out_of_range(format!("box side {side} outside [1, {p}]")));
        }
        Ok(BoxSpec {
            x_offset,
            y_offset,
            side,
        })
    }

    pub fn x_offset(&self) -> u64 {
        self.x_offset
    }

    pub fn y_offset(&self) -> u64 {
        self.y_offset
    }

    pub fn side(&self) -> u64 {
        self.side
    }

    /// Whether `u` lies in the cyclic window starting just after `offset`.
    #[inline]
    fn window_contains(offset: u64, side: u64, u: u64, p: Modulus) -> bool {
        p.sub(u, p.add(offset, 1 % p.get())) < side
    }

    pub fn contains(&self, pt: Point, p: Modulus) -> bool {
        Self::window_contains(self.x_offset, self.side, pt.x, p)
            && Self::window_contains(self.y_offset, self.side, pt.y, p)
    }
}

/// Coordinate difference between two points on the curve: the second point is
/// `(x + a, y + sign * b)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OffsetWitness {
    pub a: u64,
    pub b_magnitude: u64,
    pub b_sign: i8,
}

impl OffsetWitness {
    /// `sign * b` reduced mod p.
    pub fn signed_b(&self, p: Modulus) -> u64 {
        let b = self.b_magnitude % p.get();
        if self.b_sign < 0 {
            p.neg(b)
        } else {
            b
        }
    }

    /// All pairs of curve points realising this offset, each ordered by `x`.
    pub fn realize(&self, inst: &HyperbolaInstance) -> Vec<(Point, Point)> {
        solve_offset(inst, self.a % inst.p.get(), self.signed_b(inst.p))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinBoxResult {
    pub h_star: u64,
    pub witness: (Point, Point),
    pub offset: OffsetWitness,
}

/// All `p - 1` points, sorted by `x`.
pub fn enumerate_points(inst: &HyperbolaInstance) -> Vec<Point> {
    let p = inst.p;
    (1..p.get())
        .map(|x| Point {
            x,
            y: p.mul(inst.c, p.inv(x).expect("x is nonzero")),
        })
        .collect()
}

/// `min(|u - v|, p - |u - v|)`.
#[inline]
pub fn circ_dist(u: u64, v: u64, p: Modulus) -> u64 {
    let d = u.abs_diff(v);
    d.min(p.get() - d)
}

/// Number of curve points inside the box.
pub fn box_count(inst: &HyperbolaInstance, bx: &BoxSpec) -> u64 {
    let p = inst.p;
    let mut count = 0;
    let mut x = bx.x_offset;
    for _ in 0..bx.side {
        x = p.add(x, 1);
        if x == 0 {
            continue;
        }
        let y = p.mul(inst.c, p.inv(x).expect("x is nonzero"));
        if BoxSpec::window_contains(bx.y_offset, bx.side, y, p) {
            count += 1;
        }
    }
    count
}

/// Side of the smallest cyclic box holding both points.
#[inline]
pub fn pair_box_side(a: Point, b: Point, p: Modulus) -> u64 {
    circ_dist(a.x, b.x, p).max(circ_dist(a.y, b.y, p)) + 1
}

/// A box of side `side` that holds both points, for `side >= pair_box_side`.
pub fn box_around(a: Point, b: Point, side: u64, p: Modulus) -> Result<BoxSpec> {
    if side < pair_box_side(a, b, p) {
        return Err(out_of_range(format!(
            "side {side} is too small for the pair"
        )));
    }
    // Start each window at whichever endpoint begins the short arc.
    let start = |u: u64, v: u64| {
        if p.sub(v, u) <= p.sub(u, v) {
            u
        } else {
            v
        }
    };
    let x0 = start(a.x, b.x);
    let y0 = start(a.y, b.y);
    BoxSpec::new(p, p.sub(x0, 1), p.sub(y0, 1), side)
}

/// Canonical offset between two distinct points: `a` is the forward circular
/// distance in `x` (at most `(p-1)/2`) and `b` the short signed `y` step.
pub fn offset_between(first: Point, second: Point, p: Modulus) -> OffsetWitness {
    let (base, other) = if p.sub(second.x, first.x) <= (p.get() - 1) / 2 {
        (first, second)
    } else {
        (second, first)
    };
    let a = p.sub(other.x, base.x);
    let dy = p.sub(other.y, base.y);
    let (b_magnitude, b_sign) = if dy <= (p.get() - 1) / 2 {
        (dy, 1)
    } else {
        (p.get() - dy, -1)
    };
    OffsetWitness {
        a,
        b_magnitude,
        b_sign,
    }
}

fn check_large_enough(p: Modulus) -> Result<()> {
    if p.get() < 5 {
        return Err(out_of_range(format!("minimal boxes need p >= 5, got {p}")));
    }
    Ok(())
}

fn result_from_pair(first: Point, second: Point, p: Modulus) -> MinBoxResult {
    let (first, second) = if first <= second {
        (first, second)
    } else {
        (second, first)
    };
    MinBoxResult {
        h_star: pair_box_side(first, second, p),
        witness: (first, second),
        offset: offset_between(first, second, p),
    }
}

/// Exhaustive scan over all point pairs. Ties go to the lexicographically
/// smallest `(x1, y1, x2, y2)`.
pub fn min_box_oracle(inst: &HyperbolaInstance) -> Result<MinBoxResult> {
    let p = inst.p;
    check_large_enough(p)?;
    let pts = enumerate_points(inst);
    let mut best: Option<(u64, Point, Point)> = None;
    for (i, &u) in pts.iter().enumerate() {
        for &v in &pts[i + 1..] {
            let side = pair_box_side(u, v, p);
            // Pairs arrive in lexicographic order, so strict improvement keeps
            // the smallest witness among ties.
            if best.is_none_or(|(s, _, _)| side < s) {
                best = Some((side, u, v));
            }
        }
    }
    let (_, u, v) = best.expect("p >= 5 gives at least four points");
    Ok(result_from_pair(u, v, p))
}

/// Offsets `(a, b)` with `max(a, b) = m`, ordered `(1,m), .., (m-1,m), (m,1), .., (m,m)`.
fn shell(m: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..m)
        .map(move |a| (a, m))
        .chain((1..=m).map(move |b| (m, b)))
}

/// Whether some pair of curve points differs by `(a, beta)`, i.e. whether
/// `t (t - 4c)` with `t = a * beta` is a square or zero.
#[inline]
fn offset_admissible(chi: &QuadraticCharacter, c4: u64, a: u64, beta: u64) -> bool {
    let p = chi.modulus();
    let t = p.mul(a, beta);
    let u = p.sub(t, c4);
    u == 0 || chi.chi(t) * chi.chi(u) == 1
}

/// Curve points `(x, y)` with `(x + a, y + beta)` also on the curve.
fn solve_offset(inst: &HyperbolaInstance, a: u64, beta: u64) -> Vec<(Point, Point)> {
    let p = inst.p;
    if a == 0 || beta == 0 {
        return Vec::new();
    }
    let t = p.mul(a, beta);
    let disc = p.mul(t, p.sub(t, p.mul(4 % p.get(), inst.c)));
    let Some(root) = p.sqrt(disc) else {
        return Vec::new();
    };
    let denom = p.inv(p.mul(2, beta)).expect("2 * beta is a unit");
    let mut xs = vec![p.mul(p.sub(root, t), denom)];
    if root != 0 {
        xs.push(p.mul(p.sub(p.neg(root), t), denom));
    }
    xs.into_iter()
        .map(|x| {
            let first = inst.point_at(x).expect("roots are nonzero");
            let second = Point {
                x: p.add(x, a),
                y: p.add(first.y, beta),
            };
            debug_assert!(inst.contains(second));
            if first <= second {
                (first, second)
            } else {
                (second, first)
            }
        })
        .collect()
}

fn check_side(inst: &HyperbolaInstance, h: u64) -> Result<()> {
    if h < 2 || h > inst.p.get() {
        return Err(out_of_range(format!(
            "box side H = {h} outside [2, {}]",
            inst.p
        )));
    }
    Ok(())
}

/// Decides whether some box of side `h` holds two points of the curve. On
/// success returns the first admissible offset, scanning `max(a, b)` upward.
pub fn criterion_decide(inst: &HyperbolaInstance, h: u64) -> Result<Option<OffsetWitness>> {
    criterion_decide_with(&QuadraticCharacter::direct(inst.p), inst, h)
}

/// [`criterion_decide`] with a caller-supplied character, for loops over many
/// `c` or `H` at one prime.
pub fn criterion_decide_with(
    chi: &QuadraticCharacter,
    inst: &HyperbolaInstance,
    h: u64,
) -> Result<Option<OffsetWitness>> {
    check_side(inst, h)?;
    let p = inst.p;
    let c4 = p.mul(4 % p.get(), inst.c);
    for m in 1..h {
        for (a, b) in shell(m) {
            for sign in [1i8, -1] {
                let beta = if sign > 0 {
                    b % p.get()
                } else {
                    p.neg(b % p.get())
                };
                if offset_admissible(chi, c4, a, beta) {
                    return Ok(Some(OffsetWitness {
                        a,
                        b_magnitude: b,
                        b_sign: sign,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The sufficient condition restricted to even offsets `a = 2a'`, `b = 2b'`:
/// `(a'b'/p)((a'b' - c)/p) = 1` for some `1 <= a', b' <= (H-1)/2`. The witness
/// is reported as the doubled offset.
pub fn criterion_even(inst: &HyperbolaInstance, h: u64) -> Result<Option<OffsetWitness>> {
    check_side(inst, h)?;
    let p = inst.p;
    let half = (h - 1) / 2;
    for a in 1..=half {
        for b in 1..=half {
            let ab = p.mul(a, b);
            if p.legendre(ab) * p.legendre(p.sub(ab, inst.c)) == 1 {
                return Ok(Some(OffsetWitness {
                    a: 2 * a,
                    b_magnitude: 2 * b,
                    b_sign: 1,
                }));
            }
        }
    }
    Ok(None)
}

/// Minimal box side through the offset criterion, without any pair scan. The
/// witness follows the same tie-breaking as [`min_box_oracle`].
pub fn min_box_fast(inst: &HyperbolaInstance) -> Result<MinBoxResult> {
    min_box_fast_with(&QuadraticCharacter::direct(inst.p), inst)
}

pub fn min_box_fast_with(
    chi: &QuadraticCharacter,
    inst: &HyperbolaInstance,
) -> Result<MinBoxResult> {
    let p = inst.p;
    check_large_enough(p)?;
    let c4 = p.mul(4, inst.c);
    // Any two points sit within (p-1)/2 of each other on both axes.
    for m in 1..=(p.get() - 1) / 2 {
        let mut best: Option<(Point, Point)> = None;
        for (a, b) in shell(m) {
            for beta in [b, p.neg(b)] {
                if !offset_admissible(chi, c4, a, beta) {
                    continue;
                }
                for pair in solve_offset(inst, a, beta) {
                    if best.is_none_or(|cur| pair < cur) {
                        best = Some(pair);
                    }
                }
            }
        }
        if let Some((u, v)) = best {
            let res = result_from_pair(u, v, p);
            debug_assert_eq!(res.h_star, m + 1);
            return Ok(res);
        }
    }
    unreachable!("a curve with at least four points has a pair within (p-1)/2")
}

/// Worst case of the minimal side over all `c`, with the smallest maximising `c`.
pub fn max_min_box(p: Modulus) -> Result<(u64, u64)> {
    check_large_enough(p)?;
    let chi = QuadraticCharacter::new(p);
    let mut worst = (0, 0);
    for c in 1..p.get() {
        let inst = HyperbolaInstance { p, c };
        let h = min_box_fast_with(&chi, &inst)?.h_star;
        if h > worst.0 {
            worst = (h, c);
        }
    }
    Ok(worst)
}
