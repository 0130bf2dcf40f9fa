//! Per prime: is n_p below C p^(1/(6 sqrt e) + eps), and is the worst box side
//! below C p^(1/6 + eps)?
//!
//!     cargo run --release --example dichotomy -- 500

use modhyp::modarith::primes_in;
use modhyp::nqr::{dichotomy_check, nonresidue_exponent, BOX_EXPONENT};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let limit: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let (eps, constant) = (0.1, 2.0);
    println!(
        "exponents {:.6} and {:.6}, eps = {eps}, C = {constant}",
        nonresidue_exponent(),
        BOX_EXPONENT
    );

    let (mut total, mut either) = (0, 0);
    println!("p     n_p  A      max h*  B");
    for p in primes_in(5, limit) {
        let d = dichotomy_check(Modulus::new(p)?, eps, constant)?;
        total += 1;
        either += d.either() as usize;
        if !d.branch_a || !d.branch_b {
            println!(
                "{p:<5} {:<4} {:<6} {:<7} {}",
                d.n_p, d.branch_a, d.max_h_star, d.branch_b
            );
        }
    }
    println!("{either} of {total} primes satisfy at least one branch");
    Ok(())
}
