//! Treating part of the secret as unknown: purify the non-critical
//! coordinates against a reference system, encode, and check what an
//! unqualified share pair can see — exactly nothing.
//!
//! Run with: cargo run --example purified_secret

use qrss::audit::purify_and_encode;
use qrss::qsim::{DensityOperator, PureState};
use qrss::scheme::Params;

fn main() -> qrss::Result<()> {
    let p = Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5])?;

    // protect coordinate 2, value |5❭; coordinate 1 is purified away
    let secret = PureState::basis_state(7, &[5])?;
    let state = purify_and_encode(&p, &[2], &secret)?;
    println!(
        "composite state: 1 reference qudit + {} shares, {} terms",
        p.n(),
        state.num_terms()
    );

    // per reference value d, the share block is the encoding of (d, 5)
    let mut block = Vec::new();
    for (tuple, _) in state.terms() {
        if tuple[0] == 1 {
            block.push(tuple[1..].to_vec());
        }
    }
    println!("block at reference value 1 has {} share tuples:", block.len());
    for t in &block {
        println!("  {:?}", t);
    }

    // any two shares: fully mixed, distance 0 up to rounding
    for pair in [[1usize, 2], [2, 3], [3, 4]] {
        let rho = state.reduced_density(&[pair[0] + 1, pair[1] + 1])?;
        let mixed = DensityOperator::fully_mixed(7, 2)?;
        println!(
            "shares {:?}: trace distance from I/49 = {:.3e}",
            pair,
            rho.trace_distance(&mixed)?
        );
    }

    // three shares are qualified, so they are allowed to (and do) carry
    // information: the reduction is no longer fully mixed
    let rho = state.reduced_density(&[2, 3, 4])?;
    let mixed = DensityOperator::fully_mixed(7, 3)?;
    println!(
        "shares [1, 2, 3]: trace distance from I/343 = {:.3}",
        rho.trace_distance(&mixed)?
    );
    Ok(())
}
