//! n_p for a range of primes, the smooth-number count Psi(x, y), and the lower
//! bound S(0; x) >= 2 Psi(x, y) - x that holds while y < n_p.
//!
//!     cargo run --example least_nonresidue -- 100000

use modhyp::charsum::{build_table, char_sum};
use modhyp::modarith::primes_in;
use modhyp::nqr::{least_nonresidue, smooth_count, vinogradov_lower_bound};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let limit: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);

    // Record-setting n_p as p grows.
    let mut best = 0;
    println!("p          n_p");
    for p in primes_in(3, limit) {
        let n = least_nonresidue(Modulus::new(p)?).n_p;
        if n > best {
            best = n;
            println!("{p:<10} {n}");
        }
    }

    println!("\nPsi(22, 3) = {}", smooth_count(22, 3)?.psi);

    let m = Modulus::new(7)?;
    let table = build_table(m)?;
    let n_p = least_nonresidue(m).n_p;
    for y in 1..n_p {
        println!(
            "p=7 x=6 y={y}: S = {} >= {}",
            char_sum(&table, 0, 6)?,
            vinogradov_lower_bound(m, 6, y)?
        );
    }
    Ok(())
}
