//! Short sums S(N; h) = sum_{N < n <= N + h} (n/p) from a prefix table, and
//! how they compare with sqrt(p) log p.
//!
//!     cargo run --example char_sums -- 1009

use modhyp::charsum::{build_table, char_sum, max_partial};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let p: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1009);
    let table = build_table(Modulus::new(p)?)?;

    for (n, h) in [(0, 10), (0, p / 2), (p / 3, 50), (0, p - 1)] {
        println!(
            "S({n}; {h}) = {:>4}  max partial = {}",
            char_sum(&table, n, h)?,
            max_partial(&table, n, h)?
        );
    }

    let prefix = table.prefix();
    let hi = *prefix.iter().max().unwrap();
    let lo = *prefix.iter().min().unwrap();
    let pv = (p as f64).sqrt() * (p as f64).ln();
    println!(
        "largest |S| over all windows = {} ({:.1}% of sqrt(p) log p = {pv:.1})",
        hi - lo,
        100.0 * (hi - lo) as f64 / pv
    );
    Ok(())
}
