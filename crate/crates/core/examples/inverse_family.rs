//! The points -c / b for 1 <= b <= H. Two of them within H of each other
//! put two curve points in a box of side about H.
//!
//!     cargo run --example inverse_family -- 211 5

use modhyp::charsum::{inverse_family, min_circular_gap};
use modhyp::hyperbola::{min_box_oracle, HyperbolaInstance};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>());
    let p = args.next().and_then(|r| r.ok()).unwrap_or(211);
    let c = args.next().and_then(|r| r.ok()).unwrap_or(5);
    let inst = HyperbolaInstance::new(Modulus::new(p)?, c as i64)?;
    let h_star = min_box_oracle(&inst)?.h_star;
    println!("p={p} c={c} h*={h_star}");

    println!("H   gap  forces small box");
    for h in 2..=(p / 2).min(24) {
        let family = inverse_family(&inst, h)?;
        if family.len() < 2 {
            continue;
        }
        let gap = min_circular_gap(&family)?;
        let close = gap <= h;
        if close {
            assert!(h_star <= h + 1);
        }
        println!("{h:<3} {gap:<4} {close}");
    }
    Ok(())
}
