//! Deciding "does some box of side H hold two points?" without enumerating the
//! curve: an offset (a, b) is realised iff t(t - 4c) is a square, t = ab.
//!
//!     cargo run --example criterion -- 7 3

use modhyp::hyperbola::{criterion_decide, criterion_even, HyperbolaInstance};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>());
    let p = args.next().and_then(|r| r.ok()).unwrap_or(7);
    let c = args.next().and_then(|r| r.ok()).unwrap_or(3);
    let inst = HyperbolaInstance::new(Modulus::new(p)?, c as i64)?;

    for h in 2..=p.min(8) {
        match criterion_decide(&inst, h)? {
            Some(w) => {
                let (u, v) = w
                    .realize(&inst)
                    .into_iter()
                    .min()
                    .expect("witness realises");
                println!(
                    "H={h}: yes, offset (a, b) = ({}, {:+}) realised by ({},{}),({},{})",
                    w.a,
                    w.b_sign as i64 * w.b_magnitude as i64,
                    u.x,
                    u.y,
                    v.x,
                    v.y
                );
            }
            None => println!("H={h}: no"),
        }
    }

    // The even-offset variant only sees (2a', 2b'): weaker, never wrong.
    for h in [3, 5, 9] {
        if h <= p {
            let even = criterion_even(&inst, h)?.is_some();
            let full = criterion_decide(&inst, h)?.is_some();
            println!("H={h}: even-offset {even}, full {full}");
        }
    }
    Ok(())
}
