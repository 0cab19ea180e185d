//! Reconstruction works from every size-k share set, even for superposed
//! secrets, and the leftover qudits always end up in the same
//! secret-independent entangled state.
//!
//! Run with: cargo run --example any_k_shares

use num_complex::Complex64;
use qrss::qsim::{fidelity_pure, PureState};
use qrss::scheme::{decode, encode, Params};

fn main() -> qrss::Result<()> {
    let p = Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5])?;

    // (|1,5❭ + i|4,2❭)/√2 — a genuinely quantum secret
    let secret = PureState::superpose(
        7,
        &[
            (vec![1, 5], Complex64::new(1.0, 0.0)),
            (vec![4, 2], Complex64::new(0.0, 1.0)),
        ],
    )?;
    let state = encode(&p, &secret)?;
    println!(
        "secret has {} terms; encoded state has {}",
        secret.num_terms(),
        state.num_terms()
    );

    for j in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
        let outcome = decode(&p, &state, &j)?;
        let f = fidelity_pure(&outcome.secret, &secret)?;
        println!(
            "shares {:?}: fidelity {:.15}, residual entangled: {}",
            j,
            f,
            outcome.residual_is_max_entangled()
        );
    }
    Ok(())
}
