//! Command-line front end: file-based encode/decode/audit/attack flows with
//! deterministic, diffable output.
//!
//! Exit codes: 0 success (or audit PASS), 1 audit FAIL / no leak found,
//! 2 usage or validation error, 3 decode integrity failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::{
    audit_case, audit_scheme_filtered, find_linear_leak, purify_and_encode, run_attack,
    AuditCase, SecretGenerator, TestSecret,
};
use crate::codec::enumerate_coeffs;
use crate::error::{Error, Result};
use crate::qsim::{fidelity_pure, DensityOperator, PureState};
use crate::scheme::{
    decode, encode, encode_basis, first_decoding_map, ogawa_encode, ogawa_encode_basis,
    second_decoding_map, AnyParams, OgawaParams, Params,
};

#[derive(Parser)]
#[command(
    name = "qrss",
    version,
    about = "Ramp secret sharing over qudits: encode, decode, audit, attack"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeKind {
    Strong,
    Ogawa,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a parameter file and print what it declares.
    ParamsCheck {
        #[arg(long)]
        params: PathBuf,
    },
    /// Encode a secret (basis tuple or state file) into the share state.
    Encode {
        #[arg(long)]
        params: PathBuf,
        /// Secret as a comma-separated tuple of field digits.
        #[arg(long)]
        secret: Option<String>,
        /// Secret as a QRSS-STATE file (for superpositions).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Must match the parameter file header when given.
        #[arg(long)]
        scheme: Option<SchemeKind>,
        /// Output state file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the secret from k shares of an encoded state file.
    Decode {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// The k share positions to decode from, comma-separated.
        #[arg(long)]
        set_j: String,
        /// Write the full post-decode state here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the extracted secret state here.
        #[arg(long)]
        out_secret: Option<PathBuf>,
    },
    /// Sweep the hiding property; exit 0 iff every case passes.
    Audit {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict the sweep to one critical coordinate set.
        #[arg(long)]
        set_i: Option<String>,
        /// Restrict the sweep to one share set.
        #[arg(long)]
        set_j: Option<String>,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search a share set for a linear leak and run it against a secret.
    Attack {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        set_j: String,
        /// Basis secret to attack, comma-separated.
        #[arg(long)]
        secret: Option<String>,
    },
    /// Run the embedded worked examples and property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::DecodeIntegrity(_) => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::ParamsCheck { params } => cmd_params_check(&params),
        Command::Encode {
            params,
            secret,
            state,
            scheme,
            out,
        } => cmd_encode(&params, secret.as_deref(), state.as_deref(), scheme, out.as_deref()),
        Command::Decode {
            params,
            state,
            set_j,
            out,
            out_secret,
        } => cmd_decode(&params, &state, &set_j, out.as_deref(), out_secret.as_deref()),
        Command::Audit {
            params,
            tol,
            seed,
            set_i,
            set_j,
            out,
        } => cmd_audit(&params, tol, seed, set_i.as_deref(), set_j.as_deref(), out.as_deref()),
        Command::Attack {
            params,
            set_j,
            secret,
        } => cmd_attack(&params, &set_j, secret.as_deref()),
        Command::Selftest { seed } => cmd_selftest(seed),
    }
}

fn parse_digit_tuple(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("'{}' is not a field digit", tok.trim())))
        })
        .collect()
}

fn parse_index_set(text: &str) -> Result<Vec<usize>> {
    let mut set: Vec<usize> = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("'{}' is not an index", tok.trim())))
        })
        .collect::<Result<_>>()?;
    set.sort_unstable();
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse(format!("duplicate index in '{}'", text)));
    }
    Ok(set)
}

fn read_params(path: &Path) -> Result<AnyParams> {
    AnyParams::from_text(&std::fs::read_to_string(path)?)
}

fn read_state(path: &Path) -> Result<PureState> {
    PureState::from_text(&std::fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn join_u64(vals: &[u64]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn format_set(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_params_check(path: &Path) -> Result<i32> {
    let params = read_params(path)?;
    match &params {
        AnyParams::Strong(p) => {
            println!("scheme=strong q={} k={} L={} n={}", p.q(), p.k(), p.l(), p.n());
            println!("x={}", join_u64(&p.x().iter().map(|e| e.value()).collect::<Vec<_>>()));
            println!("y={}", join_u64(&p.y().iter().map(|e| e.value()).collect::<Vec<_>>()));
        }
        AnyParams::Ogawa(p) => {
            println!("scheme=ogawa q={} k={} L={} n={}", p.q(), p.k(), p.l(), p.n());
            println!("x={}", join_u64(&p.x().iter().map(|e| e.value()).collect::<Vec<_>>()));
        }
    }
    println!("params OK");
    Ok(0)
}

fn check_scheme_flag(params: &AnyParams, flag: Option<SchemeKind>) -> Result<()> {
    let Some(flag) = flag else { return Ok(()) };
    let wanted = match flag {
        SchemeKind::Strong => "strong",
        SchemeKind::Ogawa => "ogawa",
    };
    if params.scheme_name() != wanted {
        return Err(Error::InvalidParams(format!(
            "--scheme {} does not match {} params file",
            wanted,
            params.scheme_name()
        )));
    }
    Ok(())
}

fn cmd_encode(
    params_path: &Path,
    secret: Option<&str>,
    state_path: Option<&Path>,
    scheme: Option<SchemeKind>,
    out: Option<&Path>,
) -> Result<i32> {
    let params = read_params(params_path)?;
    check_scheme_flag(&params, scheme)?;
    let encoded = match (secret, state_path) {
        (Some(tuple), None) => {
            let s = parse_digit_tuple(tuple)?;
            match &params {
                AnyParams::Strong(p) => encode_basis(p, &s)?,
                AnyParams::Ogawa(p) => ogawa_encode_basis(p, &s)?,
            }
        }
        (None, Some(path)) => {
            let input = read_state(path)?;
            match &params {
                AnyParams::Strong(p) => encode(p, &input)?,
                AnyParams::Ogawa(p) => ogawa_encode(p, &input)?,
            }
        }
        _ => {
            return Err(Error::InvalidParams(
                "provide the secret as either --secret or --state".into(),
            ))
        }
    };
    emit(out, &encoded.to_text())?;
    Ok(0)
}

fn cmd_decode(
    params_path: &Path,
    state_path: &Path,
    set_j: &str,
    out: Option<&Path>,
    out_secret: Option<&Path>,
) -> Result<i32> {
    let params = read_params(params_path)?;
    let AnyParams::Strong(p) = params else {
        return Err(Error::InvalidParams(
            "decoding is only defined for the strong codec".into(),
        ));
    };
    let shares = read_state(state_path)?;
    let j = parse_index_set(set_j)?;
    let outcome = decode(&p, &shares, &j)?;
    println!("J={}", format_set(&j));
    if outcome.secret.num_terms() == 1 {
        let (tuple, _) = outcome.secret.terms().next().expect("single term");
        println!("secret {}", join_u64(tuple));
    } else {
        println!("secret state: {} terms", outcome.secret.num_terms());
    }
    if outcome.residual_is_max_entangled() {
        println!("residual maximally entangled, OK");
    } else {
        println!(
            "residual check FAILED (fidelity {:.3e})",
            outcome.residual_fidelity
        );
    }
    if let Some(path) = out {
        std::fs::write(path, outcome.state.to_text())?;
    }
    if let Some(path) = out_secret {
        std::fs::write(path, outcome.secret.to_text())?;
    }
    Ok(0)
}

fn cmd_audit(
    params_path: &Path,
    tol: f64,
    seed: u64,
    set_i: Option<&str>,
    set_j: Option<&str>,
    out: Option<&Path>,
) -> Result<i32> {
    let params = read_params(params_path)?;
    let want_i = set_i.map(parse_index_set).transpose()?;
    let want_j = set_j.map(parse_index_set).transpose()?;
    let mut gen = SecretGenerator::new(seed);
    let report = audit_scheme_filtered(
        &params,
        &mut gen,
        tol,
        want_i.as_deref(),
        want_j.as_deref(),
    )?;
    emit(out, &report.to_text())?;
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_attack(params_path: &Path, set_j: &str, secret: Option<&str>) -> Result<i32> {
    let params = read_params(params_path)?;
    let j = parse_index_set(set_j)?;
    let leak = match &params {
        AnyParams::Strong(p) => find_linear_leak(p, &j)?,
        AnyParams::Ogawa(p) => find_linear_leak(p, &j)?,
    };
    let Some(leak) = leak else {
        println!("no linear leak on J={}", format_set(&j));
        return Ok(1);
    };
    let lambda: Vec<u64> = leak.lambda.iter().map(|e| e.value()).collect();
    let coord = leak
        .revealed_coordinate()
        .expect("finder only returns unit functionals");
    println!(
        "leak J={} lambda=({}) reveals s_{}",
        format_set(&leak.j_set),
        join_u64(&lambda),
        coord
    );
    let Some(secret) = secret else {
        return Ok(0);
    };
    let AnyParams::Ogawa(p) = &params else {
        return Err(Error::InvalidParams(
            "running the attack needs baseline-coded params".into(),
        ));
    };
    let s = parse_digit_tuple(secret)?;
    let outcome = run_attack(p, &leak, &s)?;
    println!("matrix:");
    for row in outcome.matrix.value_rows() {
        println!("{}", join_u64(&row));
    }
    println!("leak qudit: share {}", outcome.leak_position);
    println!("recovered {} p={:.3}", outcome.recovered, outcome.probability);
    Ok(0)
}

// ---------------------------------------------------------------------------
// selftest: the worked examples and small property sweeps, embedded so a
// fresh build can vouch for itself without fixture files.

struct Check {
    name: &'static str,
    run: fn(u64) -> std::result::Result<(), String>,
}

fn fail(msg: impl Into<String>) -> std::result::Result<(), String> {
    Err(msg.into())
}

fn example_params() -> Params {
    Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5]).expect("example params are valid")
}

fn small_params() -> Params {
    Params::new(5, 2, 1, &[0], &[1, 2, 3]).expect("small params are valid")
}

fn baseline_params() -> OgawaParams {
    OgawaParams::new(7, 3, 2, &[2, 3, 1, 6]).expect("baseline params are valid")
}

const ENCODED_EXAMPLE: [[u64; 4]; 7] = [
    [4, 3, 0, 2],
    [5, 2, 3, 3],
    [6, 1, 6, 4],
    [0, 0, 2, 5],
    [1, 6, 5, 6],
    [2, 5, 1, 0],
    [3, 4, 4, 1],
];

const COEFF_SET_EXAMPLE: [[u64; 3]; 7] = [
    [6, 2, 0],
    [2, 5, 1],
    [5, 1, 2],
    [1, 4, 3],
    [4, 0, 4],
    [0, 3, 5],
    [3, 6, 6],
];

const STAGE1_EXAMPLE: [[u64; 4]; 7] = [
    [6, 2, 0, 2],
    [2, 5, 1, 3],
    [5, 1, 2, 4],
    [1, 4, 3, 5],
    [4, 0, 4, 6],
    [0, 3, 5, 0],
    [3, 6, 6, 1],
];

fn check_params_validation(_seed: u64) -> std::result::Result<(), String> {
    if Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5]).is_err() {
        return fail("valid params rejected");
    }
    if Params::new(7, 3, 2, &[1, 3], &[1, 2, 4, 5]).is_ok() {
        return fail("duplicate point accepted");
    }
    if Params::new(7, 3, 2, &[1, 3], &[6, 2, 4]).is_ok() {
        return fail("share count off the 2k−L line accepted");
    }
    Ok(())
}

fn check_golden_share_state(_seed: u64) -> std::result::Result<(), String> {
    let state = encode_basis(&example_params(), &[1, 5]).map_err(|e| e.to_string())?;
    if state.num_terms() != 7 {
        return fail(format!("expected 7 terms, got {}", state.num_terms()));
    }
    let want = 1.0 / 7.0f64.sqrt();
    for tuple in ENCODED_EXAMPLE {
        let a = state.amp(&tuple);
        if (a.re - want).abs() > 1e-12 || a.im.abs() > 1e-12 {
            return fail(format!("tuple {:?} has amplitude {}", tuple, a));
        }
    }
    Ok(())
}

fn check_golden_coefficient_set(_seed: u64) -> std::result::Result<(), String> {
    let p = example_params();
    let s = [p.ctx().element(1), p.ctx().element(5)];
    let got = enumerate_coeffs(3, p.x(), &s).map_err(|e| e.to_string())?;
    let mut got: Vec<Vec<u64>> = got.iter().map(|c| c.values()).collect();
    got.sort();
    let mut want: Vec<Vec<u64>> = COEFF_SET_EXAMPLE.iter().map(|r| r.to_vec()).collect();
    want.sort();
    if got != want {
        return fail(format!("coefficient set mismatch: {:?}", got));
    }
    Ok(())
}

fn check_golden_decode_matrices(_seed: u64) -> std::result::Result<(), String> {
    let p = example_params();
    let first = first_decoding_map(&p, &[1, 2, 3]).map_err(|e| e.to_string())?;
    // the map applies the inverse of the power matrix of the chosen points
    let power = first.inverse();
    if power.matrix().value_rows() != vec![vec![1, 1, 1], vec![6, 2, 4], vec![1, 4, 2]] {
        return fail("stage-1 power matrix mismatch");
    }
    if first.matrix().value_rows() != vec![vec![1, 1, 1], vec![3, 4, 1], vec![4, 2, 5]] {
        return fail("stage-1 inverse mismatch");
    }
    let second = second_decoding_map(&p, &[1, 2, 3]).map_err(|e| e.to_string())?;
    if second.matrix().value_rows() != vec![vec![1, 1, 1], vec![1, 3, 5], vec![1, 2, 4]] {
        return fail("stage-2 matrix mismatch");
    }
    Ok(())
}

fn check_golden_share_permutation(_seed: u64) -> std::result::Result<(), String> {
    let p = example_params();
    let state = encode_basis(&p, &[1, 5]).map_err(|e| e.to_string())?;
    let map = first_decoding_map(&p, &[1, 2, 3]).map_err(|e| e.to_string())?;
    let mid = state.apply_index_map(&map).map_err(|e| e.to_string())?;
    let want = 1.0 / 7.0f64.sqrt();
    for tuple in STAGE1_EXAMPLE {
        let a = mid.amp(&tuple);
        if (a.re - want).abs() > 1e-12 || a.im.abs() > 1e-12 {
            return fail(format!("stage-1 tuple {:?} has amplitude {}", tuple, a));
        }
    }
    Ok(())
}

fn check_golden_reconstruction(_seed: u64) -> std::result::Result<(), String> {
    let p = example_params();
    let state = encode_basis(&p, &[1, 5]).map_err(|e| e.to_string())?;
    for j in [vec![1, 2, 3], vec![2, 3, 4]] {
        let outcome = decode(&p, &state, &j).map_err(|e| e.to_string())?;
        if outcome.secret.num_terms() != 1 || outcome.secret.amp(&[1, 5]).re < 0.999 {
            return fail(format!("J={:?} did not recover the tuple", j));
        }
        if !outcome.residual_is_max_entangled() {
            return fail(format!("J={:?} residual check failed", j));
        }
    }
    Ok(())
}

fn check_golden_purified_state(_seed: u64) -> std::result::Result<(), String> {
    let p = example_params();
    let secret = PureState::basis_state(7, &[5]).map_err(|e| e.to_string())?;
    let state = purify_and_encode(&p, &[2], &secret).map_err(|e| e.to_string())?;
    if state.num_terms() != 49 {
        return fail(format!("expected 49 terms, got {}", state.num_terms()));
    }
    for (tuple, a) in state.terms() {
        if (a.re - 1.0 / 7.0).abs() > 1e-12 || a.im.abs() > 1e-12 {
            return fail(format!("tuple {:?} has amplitude {}", tuple, a));
        }
    }
    // reference value 1 must carry exactly the plain encoding of (1, 5)
    for tuple in ENCODED_EXAMPLE {
        let mut t = vec![1u64];
        t.extend_from_slice(&tuple);
        if (state.amp(&t).re - 1.0 / 7.0).abs() > 1e-12 {
            return fail(format!("block tuple {:?} missing", t));
        }
    }
    let rho = state
        .reduced_density(&[4, 5])
        .map_err(|e| e.to_string())?;
    let mixed = DensityOperator::fully_mixed(7, 2).map_err(|e| e.to_string())?;
    let dist = rho.trace_distance(&mixed).map_err(|e| e.to_string())?;
    if dist > 1e-10 {
        return fail(format!("share pair {{3,4}} distance {}", dist));
    }
    Ok(())
}

fn check_golden_baseline_encode(_seed: u64) -> std::result::Result<(), String> {
    let p = baseline_params();
    let (s1, s2) = (3u64, 6u64);
    let state = ogawa_encode_basis(&p, &[s1, s2]).map_err(|e| e.to_string())?;
    if state.num_terms() != 7 {
        return fail(format!("expected 7 terms, got {}", state.num_terms()));
    }
    let want = 1.0 / 7.0f64.sqrt();
    for r in 0..7u64 {
        let tuple = [
            (s1 + 2 * s2 + 4 * r) % 7,
            (s1 + 3 * s2 + 2 * r) % 7,
            (s1 + s2 + r) % 7,
            (s1 + 6 * s2 + r) % 7,
        ];
        let a = state.amp(&tuple);
        if (a.re - want).abs() > 1e-12 || a.im.abs() > 1e-12 {
            return fail(format!("share tuple {:?} has amplitude {}", tuple, a));
        }
    }
    Ok(())
}

fn check_golden_attack(_seed: u64) -> std::result::Result<(), String> {
    let p = baseline_params();
    let leak = find_linear_leak(&p, &[3, 4])
        .map_err(|e| e.to_string())?
        .ok_or("no leak found on {3,4}")?;
    let lambda: Vec<u64> = leak.lambda.iter().map(|e| e.value()).collect();
    if lambda != vec![4, 3] || leak.revealed_coordinate() != Some(2) {
        return fail(format!("unexpected leak λ={:?}", lambda));
    }
    let outcome = run_attack(&p, &leak, &[3, 6]).map_err(|e| e.to_string())?;
    if outcome.recovered != 6 || outcome.probability < 1.0 - 1e-10 {
        return fail(format!(
            "recovered {} with p={}",
            outcome.recovered, outcome.probability
        ));
    }
    Ok(())
}

fn roundtrip(p: &Params, seed: u64, share_sets: &[Vec<usize>]) -> std::result::Result<(), String> {
    let mut gen = SecretGenerator::new(seed);
    for trial in 0..3 {
        let secret = gen.pure_state(p.q(), p.l());
        let state = encode(p, &secret).map_err(|e| e.to_string())?;
        for j in share_sets {
            let outcome = decode(p, &state, j).map_err(|e| e.to_string())?;
            let f = fidelity_pure(&outcome.secret, &secret).map_err(|e| e.to_string())?;
            if f < 1.0 - 1e-10 {
                return fail(format!("trial {} J={:?} fidelity {}", trial, j, f));
            }
            if !outcome.residual_is_max_entangled() {
                return fail(format!("trial {} J={:?} residual check failed", trial, j));
            }
        }
    }
    Ok(())
}

fn check_roundtrip_example(seed: u64) -> std::result::Result<(), String> {
    roundtrip(
        &example_params(),
        seed,
        &[vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]],
    )
}

fn check_roundtrip_small(seed: u64) -> std::result::Result<(), String> {
    roundtrip(
        &small_params(),
        seed,
        &[vec![1, 2], vec![1, 3], vec![2, 3]],
    )
}

fn check_audit_small_sweep(seed: u64) -> std::result::Result<(), String> {
    let p = AnyParams::Strong(small_params());
    let mut gen = SecretGenerator::new_light(seed);
    let report = audit_scheme_filtered(&p, &mut gen, 1e-9, None, None)
        .map_err(|e| e.to_string())?;
    if !report.pass {
        let first = report.first_failure().expect("failing report has a record");
        return fail(format!("sweep failed at {}", first.to_line()));
    }
    Ok(())
}

fn check_audit_detects_the_baseline_leak(seed: u64) -> std::result::Result<(), String> {
    let strong = AnyParams::Strong(example_params());
    let case = AuditCase::new(vec![2], vec![3, 4], TestSecret::Basis(vec![5]));
    let rec = audit_case(&strong, &case, 1e-9).map_err(|e| e.to_string())?;
    if !rec.pass {
        return fail(format!("strong case unexpectedly failed: {}", rec.to_line()));
    }
    let mut gen = SecretGenerator::new(seed);
    let (label, secret) = gen.case_secrets(7, 1).swap_remove(6); // first pure secret
    let rec = audit_case(
        &strong,
        &AuditCase {
            i_set: vec![2],
            j_set: vec![3, 4],
            label,
            secret,
        },
        1e-9,
    )
    .map_err(|e| e.to_string())?;
    if !rec.pass {
        return fail(format!("strong pure case failed: {}", rec.to_line()));
    }
    let baseline = AnyParams::Ogawa(baseline_params());
    let case = AuditCase::new(vec![2], vec![3, 4], TestSecret::Basis(vec![5]));
    let rec = audit_case(&baseline, &case, 1e-9).map_err(|e| e.to_string())?;
    if rec.pass || rec.distance < 0.1 {
        return fail(format!("auditor missed the baseline leak: {}", rec.to_line()));
    }
    Ok(())
}

fn cmd_selftest(seed: u64) -> Result<i32> {
    let checks: &[Check] = &[
        Check { name: "params-validation", run: check_params_validation },
        Check { name: "golden-share-state", run: check_golden_share_state },
        Check { name: "golden-coefficient-set", run: check_golden_coefficient_set },
        Check { name: "golden-decode-matrices", run: check_golden_decode_matrices },
        Check { name: "golden-share-permutation", run: check_golden_share_permutation },
        Check { name: "golden-reconstruction", run: check_golden_reconstruction },
        Check { name: "golden-purified-state", run: check_golden_purified_state },
        Check { name: "golden-baseline-encode", run: check_golden_baseline_encode },
        Check { name: "golden-attack", run: check_golden_attack },
        Check { name: "roundtrip-7-3-2-4", run: check_roundtrip_example },
        Check { name: "roundtrip-5-2-1-3", run: check_roundtrip_small },
        Check { name: "audit-sweep-5-2-1-3", run: check_audit_small_sweep },
        Check { name: "audit-leak-detection", run: check_audit_detects_the_baseline_leak },
    ];
    let mut failures = 0usize;
    for check in checks {
        match (check.run)(seed) {
            Ok(()) => println!("ok {}", check.name),
            Err(msg) => {
                println!("FAIL {}: {}", check.name, msg);
                failures += 1;
            }
        }
    }
    if failures == 0 {
        println!("selftest PASS ({} checks)", checks.len());
        Ok(0)
    } else {
        println!("selftest FAIL ({}/{} checks failed)", failures, checks.len());
        Ok(1)
    }
}
