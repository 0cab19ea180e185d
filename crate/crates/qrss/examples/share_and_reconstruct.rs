//! Encode a two-digit secret into four shares, then rebuild it from three.
//!
//! Run with: cargo run --example share_and_reconstruct

use qrss::scheme::{decode, encode_basis, Params};

fn main() -> qrss::Result<()> {
    // 7 field elements, 3-of-4 reconstruction, 2-digit secrets
    let p = Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5])?;
    let secret = [1u64, 5];

    let state = encode_basis(&p, &secret)?;
    println!("encoded |{}❭ into {} share qudits:", join(&secret), p.n());
    print!("{}", state.to_text());

    // any k = 3 of the n = 4 shares suffice; take the last three
    let j = [2usize, 3, 4];
    let outcome = decode(&p, &state, &j)?;

    println!("\ndecoded from shares {:?}:", j);
    print!("{}", outcome.secret.to_text());
    println!(
        "residual on the leftover qudits is maximally entangled: {}",
        outcome.residual_is_max_entangled()
    );
    println!("factorization fidelity: {:.12}", outcome.factor_fidelity);
    Ok(())
}

fn join(vals: &[u64]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
