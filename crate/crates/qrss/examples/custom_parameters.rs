//! The construction is not tied to the 7-element field: pick any prime q,
//! any threshold k and secret length L with n = 2k − L distinct points to
//! spare, and everything — encoding, reconstruction, hiding — carries over.
//!
//! Run with: cargo run --example custom_parameters

use qrss::audit::{audit_case, AuditCase, SecretGenerator, TestSecret};
use qrss::scheme::{decode, encode, AnyParams, Params};

fn main() -> qrss::Result<()> {
    // 4-of-6 sharing of 2-digit secrets over F_11
    let p = Params::new(11, 4, 2, &[0, 1], &[2, 3, 4, 5, 6, 7])?;
    println!(
        "q={} k={} L={} n={}",
        p.q(),
        p.k(),
        p.l(),
        p.n()
    );

    let mut gen = SecretGenerator::new(1);
    let secret = gen.pure_state(p.q(), p.l());
    let state = encode(&p, &secret)?;
    println!(
        "random secret ({} terms) encoded into {} terms on {} qudits",
        secret.num_terms(),
        state.num_terms(),
        state.m()
    );

    let outcome = decode(&p, &state, &[1, 3, 4, 6])?;
    println!(
        "decode from shares [1,3,4,6]: residual entangled = {}",
        outcome.residual_is_max_entangled()
    );

    // an unqualified pair learns nothing about coordinate 2 even with
    // coordinate 1 unknown (k − |I| = 3 ≥ |J| = 2)
    let case = AuditCase::new(vec![2], vec![2, 5], TestSecret::Pure(gen.pure_state(11, 1)));
    let rec = audit_case(&AnyParams::Strong(p), &case, 1e-9)?;
    println!("hiding check: {}", rec.to_line());
    Ok(())
}
