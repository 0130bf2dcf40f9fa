//! Quadratic character mod p: reciprocity descent, Euler's criterion, square
//! roots and the lookup table.
//!
//!     cargo run --example legendre_symbols -- 23

use modhyp::modarith::{euler_criterion, is_prime, legendre, QuadraticCharacter};
use modhyp::Modulus;

fn main() -> modhyp::Result<()> {
    let p: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(23);
    let m = Modulus::new(p)?;
    let chi = QuadraticCharacter::new(m);

    println!("a   (a/p) euler sqrt");
    for a in 0..p.min(30) {
        let root = m.sqrt(a).map_or("-".to_string(), |r| r.to_string());
        println!(
            "{a:<3} {:>5} {:>5} {root:>4}",
            legendre(a as i64, m),
            euler_criterion(a as i64, m)
        );
        assert_eq!(chi.chi(a), legendre(a as i64, m));
    }

    let residues = (1..p).filter(|&a| chi.chi(a) == 1).count();
    println!("{residues} of {} nonzero classes are squares", p - 1);

    // Works just as well near the top of the supported range.
    let big = Modulus::new((1 << 61) - 1)?;
    println!(
        "2^61 - 1 prime: {}, (3/p) = {}, (-1/p) = {}",
        is_prime(big.get()),
        big.legendre(3),
        legendre(-1, big)
    );
    Ok(())
}
