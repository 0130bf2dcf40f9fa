//! Smallest box holding two points of xy = c (mod p), by exhaustive pair scan
//! and by the shell search over offsets.
//!
//!     cargo run --example min_box -- 101

use modhyp::hyperbola::{
    box_around, box_count, enumerate_points, max_min_box, min_box_fast, min_box_oracle,
    HyperbolaInstance,
};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let p: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(101);
    let m = Modulus::new(p)?;

    let inst = HyperbolaInstance::new(Modulus::new(7)?, 3)?;
    let pts: Vec<String> = enumerate_points(&inst)
        .iter()
        .map(|q| format!("({},{})", q.x, q.y))
        .collect();
    println!("xy = 3 mod 7: {}", pts.join(" "));
    let r = min_box_oracle(&inst)?;
    let (u, v) = r.witness;
    let bx = box_around(u, v, r.h_star, inst.modulus())?;
    println!(
        "h* = {} via ({},{}),({},{}); box at ({}, {}) holds {} points",
        r.h_star,
        u.x,
        u.y,
        v.x,
        v.y,
        bx.x_offset(),
        bx.y_offset(),
        box_count(&inst, &bx)
    );

    println!("\nc  h*  witness");
    for c in 1..p.min(16) {
        let inst = HyperbolaInstance::new(m, c as i64)?;
        let fast = min_box_fast(&inst)?;
        if p < 2000 {
            assert_eq!(fast, min_box_oracle(&inst)?);
        }
        let (u, v) = fast.witness;
        println!(
            "{c:<2} {:<3} ({},{}),({},{})",
            fast.h_star, u.x, u.y, v.x, v.y
        );
    }
    let (worst, at) = max_min_box(m)?;
    println!("\nworst case over all c mod {p}: h* = {worst} at c = {at}");
    Ok(())
}
