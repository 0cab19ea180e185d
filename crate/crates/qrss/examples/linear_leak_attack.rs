//! Mount the share-combination attack on the coefficient-coded baseline:
//! two shares of the four admit a linear combination that evaluates one
//! secret coordinate exactly, so an unqualified pair reads it off with a
//! single measurement.
//!
//! Run with: cargo run --example linear_leak_attack

use qrss::audit::{find_linear_leak, run_attack, run_attack_mixed_complement};
use qrss::scheme::OgawaParams;

fn main() -> qrss::Result<()> {
    let p = OgawaParams::new(7, 3, 2, &[2, 3, 1, 6])?;

    for j in [vec![1usize, 2], vec![3, 4]] {
        match find_linear_leak(&p, &j)? {
            None => println!("shares {:?}: no randomness-free combination", j),
            Some(leak) => {
                let lambda: Vec<u64> = leak.lambda.iter().map(|e| e.value()).collect();
                println!(
                    "shares {:?}: λ = {:?} reveals secret coordinate {}",
                    j,
                    lambda,
                    leak.revealed_coordinate().unwrap()
                );
                for secret in [[3u64, 6], [0, 0], [2, 4]] {
                    let out = run_attack(&p, &leak, &secret)?;
                    println!(
                        "  secret {:?} → measured {} with probability {:.3}",
                        secret, out.recovered, out.probability
                    );
                }
                // the leak is oblivious to everything it does not reveal:
                // mix the other coordinate completely and attack again
                let out = run_attack_mixed_complement(&p, &leak, 6)?;
                println!(
                    "  with the other coordinate fully mixed → measured {} with probability {:.3}",
                    out.recovered, out.probability
                );
            }
        }
    }
    Ok(())
}
