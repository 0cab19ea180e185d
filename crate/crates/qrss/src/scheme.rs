//! The two ramp secret sharing codecs.
//!
//! The strong scheme stores a length-L secret tuple as the value list of a
//! degree-<k polynomial at L public points x⃗ and hands out evaluations at n
//! further points y⃗, superposed over every polynomial consistent with the
//! secret. Decoding from any k shares is a pair of basis permutations: first
//! back to coefficients, then forward to (secret values | leftover
//! evaluations), after which the state factorizes.
//!
//! The baseline scheme ("coefficient-coded") instead puts the secret directly
//! into the first L polynomial coefficients. It reconstructs fine but leaks
//! linear combinations of the secret to small share sets, which is what the
//! audit module demonstrates.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::codec::{enumerate_coeffs, invert, vandermonde, CoeffVector};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::qsim::{fidelity_pure, IndexMap, PureState};

/// Public parameters of the strong scheme: secret points x⃗ (length L) and
/// share points y⃗ (length n), all pairwise distinct, with n = 2k − L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    ctx: FieldCtx,
    k: usize,
    l: usize,
    n: usize,
    x: Vec<FieldElement>,
    y: Vec<FieldElement>,
}

impl Params {
    pub fn new(q: u64, k: usize, l: usize, x: &[u64], y: &[u64]) -> Result<Self> {
        let ctx = FieldCtx::new(q)?;
        let n = y.len();
        if l == 0 || l >= k || k >= n {
            return Err(Error::InvalidParams(format!(
                "need 0 < L < k < n, got k={} L={} n={}",
                k, l, n
            )));
        }
        if n != 2 * k - l {
            return Err(Error::InvalidParams(format!(
                "need n = 2k − L, got n={} for k={} L={}",
                n, k, l
            )));
        }
        if x.len() != l {
            return Err(Error::InvalidParams(format!(
                "expected {} secret points, got {}",
                l,
                x.len()
            )));
        }
        let x: Vec<FieldElement> = x.iter().map(|&v| ctx.element(v)).collect();
        let y: Vec<FieldElement> = y.iter().map(|&v| ctx.element(v)).collect();
        let mut all: Vec<u64> = x.iter().chain(y.iter()).map(|e| e.value()).collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        Ok(Self { ctx, k, l, n, x, y })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.modulus()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[FieldElement] {
        &self.x
    }

    pub fn y(&self) -> &[FieldElement] {
        &self.y
    }

    /// Share points selected by 1-based indices.
    pub fn y_points(&self, indices: &[usize]) -> Vec<FieldElement> {
        indices.iter().map(|&j| self.y[j - 1]).collect()
    }

    pub fn to_text(&self) -> String {
        let xs: Vec<String> = self.x.iter().map(|e| e.value().to_string()).collect();
        let ys: Vec<String> = self.y.iter().map(|e| e.value().to_string()).collect();
        format!(
            "QRSS-PARAMS v1\nq={} k={} L={} n={}\nx={}\ny={}\n",
            self.q(),
            self.k,
            self.l,
            self.n,
            xs.join(","),
            ys.join(",")
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let fields = parse_params_text(text, "QRSS-PARAMS")?;
        Params::new(fields.q, fields.k, fields.l, &fields.x, fields.y.as_deref().ok_or_else(
            || Error::Parse("missing y= line".into()),
        )?)
        .and_then(|p| {
            if p.n != fields.n {
                return Err(Error::Parse(format!(
                    "declared n={} but y has {} points",
                    fields.n, p.n
                )));
            }
            Ok(p)
        })
    }
}

/// Public parameters of the coefficient-coded baseline: n distinct share
/// points, secret carried in the first L polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OgawaParams {
    ctx: FieldCtx,
    k: usize,
    l: usize,
    n: usize,
    x: Vec<FieldElement>,
}

impl OgawaParams {
    pub fn new(q: u64, k: usize, l: usize, x: &[u64]) -> Result<Self> {
        let ctx = FieldCtx::new(q)?;
        let n = x.len();
        if l == 0 || l >= k || k >= n {
            return Err(Error::InvalidParams(format!(
                "need 0 < L < k < n, got k={} L={} n={}",
                k, l, n
            )));
        }
        let x: Vec<FieldElement> = x.iter().map(|&v| ctx.element(v)).collect();
        let mut all: Vec<u64> = x.iter().map(|e| e.value()).collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints);
        }
        Ok(Self { ctx, k, l, n, x })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.modulus()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[FieldElement] {
        &self.x
    }

    pub fn to_text(&self) -> String {
        let xs: Vec<String> = self.x.iter().map(|e| e.value().to_string()).collect();
        format!(
            "QRSS-OGAWA-PARAMS v1\nq={} k={} L={} n={}\nx={}\n",
            self.q(),
            self.k,
            self.l,
            self.n,
            xs.join(",")
        )
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let fields = parse_params_text(text, "QRSS-OGAWA-PARAMS")?;
        if fields.y.is_some() {
            return Err(Error::Parse("unexpected y= line".into()));
        }
        let p = OgawaParams::new(fields.q, fields.k, fields.l, &fields.x)?;
        if p.n != fields.n {
            return Err(Error::Parse(format!(
                "declared n={} but x has {} points",
                fields.n, p.n
            )));
        }
        Ok(p)
    }
}

struct ParamsFields {
    q: u64,
    k: usize,
    l: usize,
    n: usize,
    x: Vec<u64>,
    y: Option<Vec<u64>>,
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad field element {:?}", t)))
        })
        .collect()
}

fn parse_params_text(text: &str, magic: &str) -> Result<ParamsFields> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty params file".into()))?;
    if header.trim() != format!("{} v1", magic) {
        return Err(Error::Parse(format!("bad params header: {:?}", header)));
    }
    let (mut q, mut k, mut l, mut n) = (None, None, None, None);
    let (mut x, mut y) = (None, None);
    for line in lines {
        for token in line.split_whitespace() {
            if let Some(v) = token.strip_prefix("q=") {
                q = Some(v.parse::<u64>().map_err(|_| Error::Parse(format!("bad q={:?}", v)))?);
            } else if let Some(v) = token.strip_prefix("k=") {
                k = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad k={:?}", v)))?);
            } else if let Some(v) = token.strip_prefix("L=") {
                l = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad L={:?}", v)))?);
            } else if let Some(v) = token.strip_prefix("n=") {
                n = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad n={:?}", v)))?);
            } else if let Some(v) = token.strip_prefix("x=") {
                x = Some(parse_u64_list(v)?);
            } else if let Some(v) = token.strip_prefix("y=") {
                y = Some(parse_u64_list(v)?);
            } else {
                return Err(Error::Parse(format!("unrecognized token {:?}", token)));
            }
        }
    }
    Ok(ParamsFields {
        q: q.ok_or_else(|| Error::Parse("missing q=".into()))?,
        k: k.ok_or_else(|| Error::Parse("missing k=".into()))?,
        l: l.ok_or_else(|| Error::Parse("missing L=".into()))?,
        n: n.ok_or_else(|| Error::Parse("missing n=".into()))?,
        x: x.ok_or_else(|| Error::Parse("missing x=".into()))?,
        y,
    })
}

/// Either parameter flavor, dispatched on the file header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyParams {
    Strong(Params),
    Ogawa(OgawaParams),
}

impl AnyParams {
    pub fn from_text(text: &str) -> Result<Self> {
        let first = text
            .lines()
            .find(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::Parse("empty params file".into()))?;
        if first.trim().starts_with("QRSS-OGAWA-PARAMS") {
            Ok(AnyParams::Ogawa(OgawaParams::from_text(text)?))
        } else {
            Ok(AnyParams::Strong(Params::from_text(text)?))
        }
    }

    pub fn scheme_name(&self) -> &'static str {
        match self {
            AnyParams::Strong(_) => "strong",
            AnyParams::Ogawa(_) => "ogawa",
        }
    }
}

/// Common linear structure of both codecs, as functionals on the length-k
/// coefficient vector: what each share reads, and what each secret
/// coordinate reads. Used by the leak finder.
pub trait RampScheme {
    fn field(&self) -> FieldCtx;
    fn k(&self) -> usize;
    fn secret_len(&self) -> usize;
    fn share_count(&self) -> usize;
    /// Length-k column v with share_j(c) = c · v, 1-based j.
    fn share_column(&self, j: usize) -> Result<Vec<FieldElement>>;
    /// Length-k column v with s_i(c) = c · v, 1-based i.
    fn secret_column(&self, i: usize) -> Result<Vec<FieldElement>>;
}

fn power_column(point: FieldElement, k: usize) -> Vec<FieldElement> {
    let mut col = Vec::with_capacity(k);
    let mut pw = point.ctx().one();
    for _ in 0..k {
        col.push(pw);
        pw = pw * point;
    }
    col
}

impl RampScheme for Params {
    fn field(&self) -> FieldCtx {
        self.ctx
    }

    fn k(&self) -> usize {
        self.k
    }

    fn secret_len(&self) -> usize {
        self.l
    }

    fn share_count(&self) -> usize {
        self.n
    }

    fn share_column(&self, j: usize) -> Result<Vec<FieldElement>> {
        if j == 0 || j > self.n {
            return Err(Error::InvalidIndexSet(format!("share index {}", j)));
        }
        Ok(power_column(self.y[j - 1], self.k))
    }

    fn secret_column(&self, i: usize) -> Result<Vec<FieldElement>> {
        if i == 0 || i > self.l {
            return Err(Error::InvalidIndexSet(format!("secret index {}", i)));
        }
        Ok(power_column(self.x[i - 1], self.k))
    }
}

impl RampScheme for OgawaParams {
    fn field(&self) -> FieldCtx {
        self.ctx
    }

    fn k(&self) -> usize {
        self.k
    }

    fn secret_len(&self) -> usize {
        self.l
    }

    fn share_count(&self) -> usize {
        self.n
    }

    fn share_column(&self, j: usize) -> Result<Vec<FieldElement>> {
        if j == 0 || j > self.n {
            return Err(Error::InvalidIndexSet(format!("share index {}", j)));
        }
        Ok(power_column(self.x[j - 1], self.k))
    }

    fn secret_column(&self, i: usize) -> Result<Vec<FieldElement>> {
        if i == 0 || i > self.l {
            return Err(Error::InvalidIndexSet(format!("secret index {}", i)));
        }
        let mut col = vec![self.ctx.zero(); self.k];
        col[i - 1] = self.ctx.one();
        Ok(col)
    }
}

fn check_secret_tuple(ctx: FieldCtx, l: usize, s: &[u64]) -> Result<Vec<FieldElement>> {
    if s.len() != l {
        return Err(Error::DimensionMismatch(format!(
            "secret tuple of length {}, expected {}",
            s.len(),
            l
        )));
    }
    for &d in s {
        if d >= ctx.modulus() {
            return Err(Error::DigitOutOfRange {
                digit: d,
                q: ctx.modulus(),
            });
        }
    }
    Ok(s.iter().map(|&v| ctx.element(v)).collect())
}

/// Share tuples of every polynomial consistent with the basis secret `s`,
/// in the deterministic enumeration order.
fn strong_expansion(p: &Params, s: &[u64]) -> Result<Vec<Vec<u64>>> {
    let s = check_secret_tuple(p.ctx, p.l, s)?;
    let coeffs = enumerate_coeffs(p.k, &p.x, &s)?;
    coeffs
        .iter()
        .map(|c| Ok(c.eval_many(&p.y)?.value_tuple()))
        .collect()
}

fn ogawa_expansion(p: &OgawaParams, s: &[u64]) -> Result<Vec<Vec<u64>>> {
    let s = check_secret_tuple(p.ctx, p.l, s)?;
    let q = p.q();
    let free = p.k - p.l;
    let mut out = Vec::with_capacity((q as usize).pow(free as u32));
    let mut digits = vec![0u64; free];
    loop {
        let mut coeffs: Vec<FieldElement> = s.clone();
        coeffs.extend(digits.iter().map(|&v| p.ctx.element(v)));
        let c = CoeffVector::new(coeffs)?;
        out.push(c.eval_many(&p.x)?.value_tuple());
        let mut pos = free;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Linear extension of a basis expansion over the last `register_len` qudits
/// of `input`; any prefix qudits ride along untouched. Amplitudes are
/// carried as `a / √(expansion size)` so already-normalized inputs stay
/// normalized without a rescaling pass.
fn encode_register(
    input: &PureState,
    register_len: usize,
    share_len: usize,
    expand: &mut dyn FnMut(&[u64]) -> Result<Vec<Vec<u64>>>,
) -> Result<PureState> {
    if input.m() < register_len {
        return Err(Error::DimensionMismatch(format!(
            "secret register of {} qudits inside a {}-qudit state",
            register_len,
            input.m()
        )));
    }
    let prefix_len = input.m() - register_len;
    let mut amps: BTreeMap<Vec<u64>, Complex64> = BTreeMap::new();
    for (tuple, a) in input.terms() {
        let (prefix, s) = tuple.split_at(prefix_len);
        let shares = expand(s)?;
        let scale = 1.0 / (shares.len() as f64).sqrt();
        for share_tuple in shares {
            let mut t = Vec::with_capacity(prefix_len + share_len);
            t.extend_from_slice(prefix);
            t.extend_from_slice(&share_tuple);
            *amps.entry(t).or_insert(Complex64::ZERO) += a * scale;
        }
    }
    PureState::from_amplitudes(input.q(), prefix_len + share_len, amps)
}

/// Encodes a basis secret tuple into the n-qudit share state.
pub fn encode_basis(p: &Params, s: &[u64]) -> Result<PureState> {
    let tuples = strong_expansion(p, s)?;
    let terms: Vec<(Vec<u64>, Complex64)> = tuples
        .into_iter()
        .map(|t| (t, Complex64::new(1.0, 0.0)))
        .collect();
    PureState::superpose(p.q(), &terms)
}

/// Encodes an arbitrary L-qudit secret state (linear extension of
/// [`encode_basis`]).
pub fn encode(p: &Params, secret: &PureState) -> Result<PureState> {
    if secret.q() != p.q() || secret.m() != p.l {
        return Err(Error::DimensionMismatch(format!(
            "secret is ({},{}) but params need ({},{})",
            secret.q(),
            secret.m(),
            p.q(),
            p.l
        )));
    }
    encode_register(secret, p.l, p.n, &mut |s| strong_expansion(p, s))
}

/// Encodes the last L qudits of a larger state, leaving prefix qudits (for
/// example reference systems) untouched.
pub(crate) fn encode_with_prefix(p: &Params, state: &PureState) -> Result<PureState> {
    if state.q() != p.q() {
        return Err(Error::ContextMismatch(p.q(), state.q()));
    }
    encode_register(state, p.l, p.n, &mut |s| strong_expansion(p, s))
}

/// Basis encoder of the coefficient-coded baseline.
pub fn ogawa_encode_basis(p: &OgawaParams, s: &[u64]) -> Result<PureState> {
    let tuples = ogawa_expansion(p, s)?;
    let terms: Vec<(Vec<u64>, Complex64)> = tuples
        .into_iter()
        .map(|t| (t, Complex64::new(1.0, 0.0)))
        .collect();
    PureState::superpose(p.q(), &terms)
}

/// Linear extension of [`ogawa_encode_basis`].
pub fn ogawa_encode(p: &OgawaParams, secret: &PureState) -> Result<PureState> {
    if secret.q() != p.q() || secret.m() != p.l {
        return Err(Error::DimensionMismatch(format!(
            "secret is ({},{}) but params need ({},{})",
            secret.q(),
            secret.m(),
            p.q(),
            p.l
        )));
    }
    encode_register(secret, p.l, p.n, &mut |s| ogawa_expansion(p, s))
}

/// Encodes the last L qudits of a larger state with the baseline codec.
pub(crate) fn ogawa_encode_with_prefix(p: &OgawaParams, state: &PureState) -> Result<PureState> {
    if state.q() != p.q() {
        return Err(Error::ContextMismatch(p.q(), state.q()));
    }
    encode_register(state, p.l, p.n, &mut |s| ogawa_expansion(p, s))
}

/// Validates a 1-based share index set and returns it sorted ascending.
fn validated_subset(indices: &[usize], n: usize) -> Result<Vec<usize>> {
    let mut j = indices.to_vec();
    j.sort_unstable();
    if j.iter().any(|&v| v == 0 || v > n) || j.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidIndexSet(format!(
            "{:?} is not a subset of 1..={}",
            indices, n
        )));
    }
    Ok(j)
}

fn complement(j: &[usize], n: usize) -> Vec<usize> {
    (1..=n).filter(|p| !j.contains(p)).collect()
}

/// Stage-1 permutation: on the shares indexed by `j` (ascending), the
/// inverse of the power matrix of their points — shares become polynomial
/// coefficients.
pub fn first_decoding_map(p: &Params, j: &[usize]) -> Result<IndexMap> {
    let j = validated_subset(j, p.n)?;
    if j.len() != p.k {
        return Err(Error::InvalidIndexSet(format!(
            "decoding needs exactly k={} shares, got {}",
            p.k,
            j.len()
        )));
    }
    let m = vandermonde(0, (p.k - 1) as u64, &p.y_points(&j))?;
    IndexMap::linear(j, invert(&m)?)
}

/// Stage-2 permutation: coefficients become (secret values | evaluations at
/// the unused share points), via the concatenated power matrix of x⃗ and
/// y⃗ restricted to the complement of `j`.
pub fn second_decoding_map(p: &Params, j: &[usize]) -> Result<IndexMap> {
    let j = validated_subset(j, p.n)?;
    if j.len() != p.k {
        return Err(Error::InvalidIndexSet(format!(
            "decoding needs exactly k={} shares, got {}",
            p.k,
            j.len()
        )));
    }
    let jbar = complement(&j, p.n);
    let left = vandermonde(0, (p.k - 1) as u64, &p.x)?;
    let right = vandermonde(0, (p.k - 1) as u64, &p.y_points(&jbar))?;
    IndexMap::linear(j, left.hconcat(&right)?)
}

/// Result of decoding: the extracted secret, the residual state on the
/// remaining qudits, and the numerical evidence for both.
#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    /// Extracted L-qudit secret state.
    pub secret: PureState,
    /// State on the other n−L qudits (global ascending position order).
    pub residual: PureState,
    /// Full n-qudit state after both decoding permutations.
    pub state: PureState,
    /// Fidelity of secret ⊗ residual against the actual post-decode state.
    pub factor_fidelity: f64,
    /// Fidelity of the residual against the uniform |v,v⟩ pairing of the
    /// leftover share qudits with the unused ones.
    pub residual_fidelity: f64,
    /// 1-based positions (ascending) of the qudits carrying the secret.
    pub secret_positions: Vec<usize>,
}

impl DecodeOutcome {
    /// Whether the residual matches the expected maximally entangled pairing.
    pub fn residual_is_max_entangled(&self) -> bool {
        self.residual_fidelity >= 1.0 - 1e-10
    }
}

const FACTOR_TOL: f64 = 1e-10;

/// Recovers the secret from the shares indexed by `j` (any k of the n).
///
/// Applies the two decoding permutations, then checks that the global state
/// factorizes as (secret on the first L positions of j) ⊗ (rest); a failed
/// check means the input was not a codeword and yields a decode-integrity
/// error rather than a garbage secret.
pub fn decode(p: &Params, shares: &PureState, j: &[usize]) -> Result<DecodeOutcome> {
    if shares.q() != p.q() || shares.m() != p.n {
        return Err(Error::DimensionMismatch(format!(
            "share state is ({},{}) but params need ({},{})",
            shares.q(),
            shares.m(),
            p.q(),
            p.n
        )));
    }
    let j = validated_subset(j, p.n)?;
    if j.len() != p.k {
        return Err(Error::InvalidIndexSet(format!(
            "decoding needs exactly k={} shares, got {}",
            p.k,
            j.len()
        )));
    }
    let stage1 = first_decoding_map(p, &j)?;
    let stage2 = second_decoding_map(p, &j)?;
    let state = shares.apply_index_map(&stage1)?.apply_index_map(&stage2)?;

    let secret_positions: Vec<usize> = j[..p.l].to_vec();
    let rest_positions: Vec<usize> =
        (1..=p.n).filter(|pos| !secret_positions.contains(pos)).collect();

    // Group amplitudes by the digits on the rest positions; the state is a
    // product iff all groups are proportional as vectors over secret digits.
    let mut groups: BTreeMap<Vec<u64>, Vec<(Vec<u64>, Complex64)>> = BTreeMap::new();
    for (tuple, a) in state.terms() {
        let rest: Vec<u64> = rest_positions.iter().map(|&pos| tuple[pos - 1]).collect();
        let sec: Vec<u64> = secret_positions.iter().map(|&pos| tuple[pos - 1]).collect();
        groups.entry(rest).or_default().push((sec, a));
    }

    // Reference group: largest norm, ties broken by lexicographic rest tuple.
    let mut best: Option<(&Vec<u64>, f64)> = None;
    for (rest, terms) in &groups {
        let norm_sqr: f64 = terms.iter().map(|(_, a)| a.norm_sqr()).sum();
        if best.map_or(true, |(_, b)| norm_sqr > b) {
            best = Some((rest, norm_sqr));
        }
    }
    let (ref_rest, ref_norm_sqr) = best.ok_or(Error::ZeroState)?;
    let ref_norm = ref_norm_sqr.sqrt();

    let mut secret_amps: BTreeMap<Vec<u64>, Complex64> = groups[ref_rest]
        .iter()
        .map(|(sec, a)| (sec.clone(), a / ref_norm))
        .collect();
    // Fix the global phase: make the largest secret amplitude real positive.
    let phase = secret_amps
        .values()
        .fold((Complex64::ZERO, 0.0), |(best_a, best_n), &a| {
            if a.norm() > best_n {
                (a, a.norm())
            } else {
                (best_a, best_n)
            }
        })
        .0;
    let phase = phase / phase.norm();
    for a in secret_amps.values_mut() {
        *a /= phase;
    }
    let secret = PureState::from_amplitudes(p.q(), p.l, secret_amps)
        .map_err(|e| Error::DecodeIntegrity(format!("secret extraction failed: {}", e)))?;

    // Residual coefficients: projection of each group onto the secret vector.
    let mut residual_amps: BTreeMap<Vec<u64>, Complex64> = BTreeMap::new();
    for (rest, terms) in &groups {
        let mut c = Complex64::ZERO;
        for (sec, a) in terms {
            c += secret.amp(sec).conj() * a;
        }
        if c.norm() >= crate::qsim::PRUNE_EPS {
            residual_amps.insert(rest.clone(), c);
        }
    }
    let residual = PureState::from_amplitudes(p.q(), p.n - p.l, residual_amps)
        .map_err(|e| Error::DecodeIntegrity(format!("residual extraction failed: {}", e)))?;

    // Reassemble secret ⊗ residual on the original positions and compare.
    let mut product_amps: BTreeMap<Vec<u64>, Complex64> = BTreeMap::new();
    for (sec, sa) in secret.terms() {
        for (rest, ra) in residual.terms() {
            let mut t = vec![0u64; p.n];
            for (&pos, &d) in secret_positions.iter().zip(sec) {
                t[pos - 1] = d;
            }
            for (&pos, &d) in rest_positions.iter().zip(rest) {
                t[pos - 1] = d;
            }
            product_amps.insert(t, sa * ra);
        }
    }
    let product = PureState::from_amplitudes(p.q(), p.n, product_amps)
        .map_err(|e| Error::DecodeIntegrity(format!("reassembly failed: {}", e)))?;
    let factor_fidelity = fidelity_pure(&product, &state)?;
    if factor_fidelity < 1.0 - FACTOR_TOL {
        return Err(Error::DecodeIntegrity(format!(
            "state does not factor into secret and residual (fidelity {})",
            factor_fidelity
        )));
    }

    // Expected residual: uniform pairing of the extra decode qudits with the
    // untouched ones, in matching point order.
    let extras = &j[p.l..];
    let jbar = complement(&j, p.n);
    let local = |pos: usize| rest_positions.iter().position(|&r| r == pos).unwrap();
    let q = p.q();
    let width = extras.len();
    let mut expected_terms: Vec<(Vec<u64>, Complex64)> = Vec::new();
    let mut v = vec![0u64; width];
    loop {
        let mut t = vec![0u64; rest_positions.len()];
        for (idx, &val) in v.iter().enumerate() {
            t[local(extras[idx])] = val;
            t[local(jbar[idx])] = val;
        }
        expected_terms.push((t, Complex64::new(1.0, 0.0)));
        let mut pos = width;
        loop {
            if pos == 0 {
                let expected = PureState::superpose(q, &expected_terms)?;
                let residual_fidelity = fidelity_pure(&residual, &expected)?;
                return Ok(DecodeOutcome {
                    secret,
                    residual,
                    state,
                    factor_fidelity,
                    residual_fidelity,
                    secret_positions,
                });
            }
            pos -= 1;
            v[pos] += 1;
            if v[pos] < q {
                break;
            }
            v[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_params() -> Params {
        Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5]).unwrap()
    }

    fn small_params() -> Params {
        Params::new(5, 2, 1, &[0], &[1, 2, 3]).unwrap()
    }

    fn example_ogawa() -> OgawaParams {
        OgawaParams::new(7, 3, 2, &[2, 3, 1, 6]).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn encoded_example_tuples() -> Vec<Vec<u64>> {
        vec![
            vec![4, 3, 0, 2],
            vec![5, 2, 3, 3],
            vec![6, 1, 6, 4],
            vec![0, 0, 2, 5],
            vec![1, 6, 5, 6],
            vec![2, 5, 1, 0],
            vec![3, 4, 4, 1],
        ]
    }

    #[test]
    fn params_validation() {
        assert!(Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 5]).is_ok());
        assert!(Params::new(5, 2, 1, &[0], &[1, 2, 3]).is_ok());
        // n ≠ 2k−L
        assert!(matches!(
            Params::new(7, 3, 2, &[1, 3], &[6, 2, 4]),
            Err(Error::InvalidParams(_))
        ));
        // L ≥ k
        assert!(Params::new(7, 2, 2, &[1, 3], &[6, 2]).is_err());
        // duplicate across x and y
        assert!(matches!(
            Params::new(7, 3, 2, &[1, 3], &[6, 2, 4, 1]),
            Err(Error::DuplicatePoints)
        ));
        // field too small: 6 ≡ 1 (mod 5)
        assert!(matches!(
            Params::new(5, 3, 2, &[1, 3], &[6, 2, 4, 0]),
            Err(Error::DuplicatePoints)
        ));
        // composite modulus
        assert!(Params::new(6, 3, 2, &[1, 3], &[0, 2, 4, 5]).is_err());
    }

    #[test]
    fn params_text_round_trip() {
        let p = example_params();
        let text = p.to_text();
        assert_eq!(text, "QRSS-PARAMS v1\nq=7 k=3 L=2 n=4\nx=1,3\ny=6,2,4,5\n");
        assert_eq!(Params::from_text(&text).unwrap(), p);

        assert!(Params::from_text("QRSS-PARAMS v2\nq=7 k=3 L=2 n=4\nx=1,3\ny=6,2,4,5\n").is_err());
        assert!(Params::from_text("QRSS-PARAMS v1\nq=7 k=3 L=2 n=5\nx=1,3\ny=6,2,4,5\n").is_err());
        assert!(Params::from_text("QRSS-PARAMS v1\nq=7 k=3 L=2 n=4\nx=1,3\n").is_err());
    }

    #[test]
    fn ogawa_params_round_trip() {
        let p = example_ogawa();
        let text = p.to_text();
        assert_eq!(text, "QRSS-OGAWA-PARAMS v1\nq=7 k=3 L=2 n=4\nx=2,3,1,6\n");
        assert_eq!(OgawaParams::from_text(&text).unwrap(), p);
        assert!(OgawaParams::new(7, 3, 2, &[2, 3, 1, 1]).is_err());

        match AnyParams::from_text(&text).unwrap() {
            AnyParams::Ogawa(q) => assert_eq!(q, p),
            _ => panic!("wrong dispatch"),
        }
        match AnyParams::from_text(&example_params().to_text()).unwrap() {
            AnyParams::Strong(q) => assert_eq!(q, example_params()),
            _ => panic!("wrong dispatch"),
        }
    }

    #[test]
    fn encode_basis_matches_golden_superposition() {
        let p = example_params();
        let state = encode_basis(&p, &[1, 5]).unwrap();
        assert_eq!(state.num_terms(), 7);
        let want = 1.0 / 7.0f64.sqrt();
        for tuple in encoded_example_tuples() {
            let a = state.amp(&tuple);
            assert!((a - c(want)).norm() <= 1e-12, "tuple {:?} amp {}", tuple, a);
        }
    }

    #[test]
    fn encode_basis_term_count_and_zero_secret() {
        let p = example_params();
        for s1 in 0..7u64 {
            for s2 in 0..7u64 {
                let state = encode_basis(&p, &[s1, s2]).unwrap();
                assert_eq!(state.num_terms(), 7);
            }
        }
        // the zero polynomial sits in the zero secret's coefficient set
        let state = encode_basis(&p, &[0, 0]).unwrap();
        assert!(state.amp(&[0, 0, 0, 0]).norm() > 0.1);
    }

    #[test]
    fn encode_basis_supports_are_disjoint_across_secrets() {
        let p = small_params();
        let supports: Vec<Vec<Vec<u64>>> = (0..5u64)
            .map(|s| {
                encode_basis(&p, &[s])
                    .unwrap()
                    .terms()
                    .map(|(t, _)| t.to_vec())
                    .collect()
            })
            .collect();
        for a in 0..supports.len() {
            for b in (a + 1)..supports.len() {
                for t in &supports[a] {
                    assert!(!supports[b].contains(t), "{:?} in both {} and {}", t, a, b);
                }
            }
        }
    }

    #[test]
    fn encode_extends_encode_basis_linearly() {
        let p = example_params();
        let basis = PureState::basis_state(7, &[1, 5]).unwrap();
        assert_eq!(encode(&p, &basis).unwrap(), encode_basis(&p, &[1, 5]).unwrap());

        let sup = PureState::superpose(7, &[(vec![1, 5], c(1.0)), (vec![0, 2], c(1.0))]).unwrap();
        let enc = encode(&p, &sup).unwrap();
        let want = 1.0 / (2.0f64).sqrt();
        let e1 = encode_basis(&p, &[1, 5]).unwrap();
        let e2 = encode_basis(&p, &[0, 2]).unwrap();
        for (t, a) in e1.terms() {
            assert!((enc.amp(t) - a * want).norm() < 1e-12);
        }
        for (t, a) in e2.terms() {
            assert!((enc.amp(t) - a * want).norm() < 1e-12);
        }
        assert!((enc.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encode_is_an_isometry() {
        let p = example_params();
        let pairs = [
            (vec![(vec![1, 5], c(0.6)), (vec![0, 2], c(0.8))],
             vec![(vec![1, 5], c(1.0)), (vec![3, 3], Complex64::new(0.0, 1.0))]),
            (vec![(vec![2, 2], Complex64::new(0.5, 0.5)), (vec![6, 0], c(-1.0))],
             vec![(vec![2, 2], c(1.0))]),
        ];
        for (ta, tb) in pairs {
            let a = PureState::superpose(7, &ta).unwrap();
            let b = PureState::superpose(7, &tb).unwrap();
            let lhs = encode(&p, &a).unwrap().inner(&encode(&p, &b).unwrap()).unwrap();
            let rhs = a.inner(&b).unwrap();
            assert!((lhs - rhs).norm() < 1e-10, "{} vs {}", lhs, rhs);
        }
    }

    #[test]
    fn decoding_matrices_match_worked_example() {
        let p = example_params();
        let stage1 = first_decoding_map(&p, &[1, 2, 3]).unwrap();
        assert_eq!(
            stage1.matrix().value_rows(),
            vec![vec![1, 1, 1], vec![3, 4, 1], vec![4, 2, 5]]
        );
        let stage2 = second_decoding_map(&p, &[1, 2, 3]).unwrap();
        assert_eq!(
            stage2.matrix().value_rows(),
            vec![vec![1, 1, 1], vec![1, 3, 5], vec![1, 2, 4]]
        );
    }

    #[test]
    fn decode_stage1_restores_coefficient_register() {
        let p = example_params();
        let state = encode_basis(&p, &[1, 5]).unwrap();
        let mid = state.apply_index_map(&first_decoding_map(&p, &[1, 2, 3]).unwrap()).unwrap();
        let want_tuples = [
            [6, 2, 0, 2],
            [2, 5, 1, 3],
            [5, 1, 2, 4],
            [1, 4, 3, 5],
            [4, 0, 4, 6],
            [0, 3, 5, 0],
            [3, 6, 6, 1],
        ];
        assert_eq!(mid.num_terms(), 7);
        let amp = 1.0 / 7.0f64.sqrt();
        for t in want_tuples {
            assert!((mid.amp(&t) - c(amp)).norm() <= 1e-12, "missing {:?}", t);
        }
    }

    #[test]
    fn decode_recovers_basis_secret_and_pairs_residual() {
        let p = example_params();
        let state = encode_basis(&p, &[1, 5]).unwrap();
        let out = decode(&p, &state, &[1, 2, 3]).unwrap();

        assert_eq!(out.secret_positions, vec![1, 2]);
        let want_secret = PureState::basis_state(7, &[1, 5]).unwrap();
        assert!(fidelity_pure(&out.secret, &want_secret).unwrap() >= 1.0 - 1e-10);
        // extraction is exact on the basis path
        assert_eq!(out.secret.amp(&[1, 5]), c(1.0));

        assert!(out.factor_fidelity >= 1.0 - 1e-10);
        assert!(out.residual_is_max_entangled());

        // final state is |1,5⟩ ⊗ (1/√7) Σ_e |e,e⟩
        let amp = 1.0 / 7.0f64.sqrt();
        for e in 0..7u64 {
            assert!((out.state.amp(&[1, 5, e, e]) - c(amp)).norm() <= 1e-12);
        }
        assert_eq!(out.state.num_terms(), 7);
    }

    #[test]
    fn decode_works_from_any_k_shares() {
        let p = example_params();
        let secrets = [
            PureState::basis_state(7, &[4, 0]).unwrap(),
            PureState::superpose(7, &[(vec![1, 5], c(1.0)), (vec![2, 3], c(-2.0))]).unwrap(),
            PureState::superpose(
                7,
                &[
                    (vec![0, 0], Complex64::new(0.3, 0.4)),
                    (vec![6, 6], c(1.0)),
                    (vec![2, 5], Complex64::new(0.0, -1.0)),
                ],
            )
            .unwrap(),
        ];
        for j in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
            for secret in &secrets {
                let enc = encode(&p, secret).unwrap();
                let out = decode(&p, &enc, &j).unwrap();
                let f = fidelity_pure(&out.secret, secret).unwrap();
                assert!(f >= 1.0 - 1e-10, "J={:?} fidelity {}", j, f);
                assert!(out.residual_is_max_entangled());
            }
        }
    }

    #[test]
    fn decode_residual_is_secret_independent() {
        let p = example_params();
        let a = decode(&p, &encode_basis(&p, &[1, 5]).unwrap(), &[2, 3, 4]).unwrap();
        let b = decode(&p, &encode_basis(&p, &[6, 2]).unwrap(), &[2, 3, 4]).unwrap();
        assert!(fidelity_pure(&a.residual, &b.residual).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn decode_rejects_bad_share_sets() {
        let p = example_params();
        let state = encode_basis(&p, &[1, 5]).unwrap();
        assert!(matches!(
            decode(&p, &state, &[1, 2]),
            Err(Error::InvalidIndexSet(_))
        ));
        assert!(matches!(
            decode(&p, &state, &[1, 2, 3, 4]),
            Err(Error::InvalidIndexSet(_))
        ));
        assert!(matches!(
            decode(&p, &state, &[1, 2, 5]),
            Err(Error::InvalidIndexSet(_))
        ));
    }

    #[test]
    fn decode_flags_non_codeword_states() {
        let p = example_params();
        // An entangled state that is not in the code's image: the two
        // branches disagree on both the secret and the residual register.
        let bogus = PureState::superpose(
            7,
            &[(vec![0, 0, 0, 0], c(1.0)), (vec![1, 1, 1, 1], c(1.0))],
        )
        .unwrap();
        assert!(matches!(
            decode(&p, &bogus, &[1, 2, 3]),
            Err(Error::DecodeIntegrity(_))
        ));
    }

    #[test]
    fn any_single_share_of_the_example_state_is_fully_mixed() {
        let p = example_params();
        for s in [[1u64, 5], [0, 0], [3, 6]] {
            let enc = encode_basis(&p, &s).unwrap();
            for pos in 1..=4usize {
                let rho = enc.reduced_density(&[pos]).unwrap();
                assert!(rho.is_fully_mixed(1e-10).unwrap(), "s={:?} pos={}", s, pos);
            }
        }
        let p = small_params();
        for s in 0..5u64 {
            let enc = encode_basis(&p, &[s]).unwrap();
            for pos in 1..=3usize {
                let rho = enc.reduced_density(&[pos]).unwrap();
                assert!(rho.is_fully_mixed(1e-10).unwrap());
            }
        }
    }

    #[test]
    fn ogawa_encode_matches_share_equations() {
        let p = example_ogawa();
        for (s1, s2) in [(3u64, 6u64), (0, 0), (1, 5)] {
            let state = ogawa_encode_basis(&p, &[s1, s2]).unwrap();
            assert_eq!(state.num_terms(), 7);
            let amp = 1.0 / 7.0f64.sqrt();
            for r in 0..7u64 {
                let t = vec![
                    (s1 + 2 * s2 + 4 * r) % 7,
                    (s1 + 3 * s2 + 2 * r) % 7,
                    (s1 + s2 + r) % 7,
                    (s1 + 6 * s2 + r) % 7,
                ];
                assert!((state.amp(&t) - c(amp)).norm() <= 1e-12, "r={} tuple {:?}", r, t);
            }
        }
    }

    #[test]
    fn ogawa_encode_agrees_with_brute_force_filter() {
        let p = example_ogawa();
        let ctx = p.ctx();
        for (s1, s2) in [(3u64, 6u64), (2, 0)] {
            let state = ogawa_encode_basis(&p, &[s1, s2]).unwrap();
            let mut want: Vec<Vec<u64>> = Vec::new();
            for c1 in 0..7u64 {
                for c2 in 0..7u64 {
                    for c3 in 0..7u64 {
                        if c1 == s1 && c2 == s2 {
                            let cv = CoeffVector::from_values(ctx, &[c1, c2, c3]).unwrap();
                            want.push(cv.eval_many(p.x()).unwrap().value_tuple());
                        }
                    }
                }
            }
            want.sort();
            let mut got: Vec<Vec<u64>> = state.terms().map(|(t, _)| t.to_vec()).collect();
            got.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn share_and_secret_columns_describe_the_codecs() {
        // For every coefficient vector, the column functionals must agree
        // with the actual share values and secret coordinates.
        let p = example_params();
        let ctx = p.ctx();
        let cvec = CoeffVector::from_values(ctx, &[2, 5, 1]).unwrap();
        for j in 1..=4usize {
            let col = p.share_column(j).unwrap();
            let dot = cvec
                .coeffs()
                .iter()
                .zip(&col)
                .fold(ctx.zero(), |acc, (&a, &b)| acc + a * b);
            assert_eq!(dot, cvec.eval(p.y()[j - 1]));
        }
        for i in 1..=2usize {
            let col = p.secret_column(i).unwrap();
            let dot = cvec
                .coeffs()
                .iter()
                .zip(&col)
                .fold(ctx.zero(), |acc, (&a, &b)| acc + a * b);
            assert_eq!(dot, cvec.eval(p.x()[i - 1]));
        }

        let po = example_ogawa();
        for i in 1..=2usize {
            let col = po.secret_column(i).unwrap();
            let values: Vec<u64> = col.iter().map(|e| e.value()).collect();
            let mut want = vec![0u64; 3];
            want[i - 1] = 1;
            assert_eq!(values, want);
        }
    }
}
