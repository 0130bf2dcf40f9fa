//! Two moment statistics and their reference sizes: the mean value over a
//! spaced family of windows, and sum_n |sum_{u <= U} (u/p)((un - 4c)/p)|^{2r}.
//!
//!     cargo run --example moments -- 1009

use modhyp::charsum::{build_table, shao_statistic, weil_moment, weil_moment_naive, SpacedFamily};
use modhyp::sweep::default_window;
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let p: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1009);
    let m = Modulus::new(p)?;
    let table = build_table(m)?;

    println!("r  H   J    value            bound      ratio");
    for r in 1..=3 {
        let h = default_window(p, r);
        let family = SpacedFamily::arithmetic(m, h)?;
        let rep = shao_statistic(&table, &family, h, r)?;
        println!(
            "{r}  {h:<3} {:<4} {:<16} {:<10.1} {:.3}",
            family.len(),
            rep.value,
            rep.bound,
            rep.ratio
        );
    }

    println!("\nr  U   value            bound      ratio");
    for r in 1..=3 {
        let u = default_window(p, r);
        let rep = weil_moment(m, 1, u, r)?;
        if p < 3000 {
            assert_eq!(rep.value, weil_moment_naive(m, 1, u, r)?);
        }
        println!(
            "{r}  {u:<3} {:<16} {:<10.1} {:.3}",
            rep.value, rep.bound, rep.ratio
        );
    }
    Ok(())
}
