//! Sparse simulation of m-qudit pure states with local dimension q.
//!
//! States are maps from basis tuples to complex amplitudes; the only
//! unitaries we ever need are basis permutations induced by invertible
//! classical maps on a subset of qudit positions ([`IndexMap`]), so applying
//! a "gate" never touches amplitude values. Density operators are dense and
//! deliberately capped in dimension: reductions onto a few qudits are the
//! only large objects this crate materializes.
//!
//! Basis order is lexicographic with position 1 most significant, fixed for
//! deterministic serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::codec::{row_times_matrix, MatrixFq};
use crate::error::{Error, Result};
use crate::gf::FieldElement;

/// Amplitudes with modulus below this are dropped from sparse states.
pub const PRUNE_EPS: f64 = 1e-14;

/// Largest allowed dense dimension q^m for density operators.
pub const DENSITY_DIM_CAP: usize = 1 << 16;

const NORM_TOL: f64 = 1e-9;

fn checked_dim(q: u64, m: usize) -> Result<usize> {
    let mut dim: usize = 1;
    for _ in 0..m {
        dim = dim
            .checked_mul(q as usize)
            .filter(|&d| d <= DENSITY_DIM_CAP)
            .ok_or(Error::DensityTooLarge {
                dim: (q as u128).pow(m as u32).min(u64::MAX as u128) as u64,
                cap: DENSITY_DIM_CAP as u64,
            })?;
    }
    Ok(dim)
}

fn check_digits(q: u64, digits: &[u64]) -> Result<()> {
    for &d in digits {
        if d >= q {
            return Err(Error::DigitOutOfRange { digit: d, q });
        }
    }
    Ok(())
}

/// Validates a 1-based, strictly ascending, in-range position subset.
fn check_positions_ascending(positions: &[usize], m: usize) -> Result<()> {
    if positions.is_empty() {
        return Err(Error::InvalidPositions("empty position set".into()));
    }
    for w in positions.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidPositions(format!(
                "positions must be strictly ascending, got {:?}",
                positions
            )));
        }
    }
    if positions[0] < 1 || *positions.last().unwrap() > m {
        return Err(Error::InvalidPositions(format!(
            "positions {:?} out of range 1..={}",
            positions, m
        )));
    }
    Ok(())
}

/// Pure state of `m` qudits of local dimension `q`, stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    q: u64,
    m: usize,
    amps: BTreeMap<Vec<u64>, Complex64>,
}

impl PureState {
    /// |t⟩ for a basis tuple `t`.
    pub fn basis_state(q: u64, tuple: &[u64]) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("local dimension {} < 2", q)));
        }
        check_digits(q, tuple)?;
        let mut amps = BTreeMap::new();
        amps.insert(tuple.to_vec(), Complex64::new(1.0, 0.0));
        Ok(Self {
            q,
            m: tuple.len(),
            amps,
        })
    }

    /// Normalized superposition of weighted terms. Duplicate tuples have
    /// their weights summed before normalization; exact cancellation of
    /// everything is an error.
    pub fn superpose(q: u64, terms: &[(Vec<u64>, Complex64)]) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("local dimension {} < 2", q)));
        }
        let first = terms.first().ok_or(Error::ZeroState)?;
        let m = first.0.len();
        let mut amps: BTreeMap<Vec<u64>, Complex64> = BTreeMap::new();
        for (tuple, w) in terms {
            if tuple.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "tuple of length {} in a superposition of length-{} tuples",
                    tuple.len(),
                    m
                )));
            }
            check_digits(q, tuple)?;
            *amps.entry(tuple.clone()).or_insert(Complex64::ZERO) += w;
        }
        let norm_sqr: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        if norm_sqr < PRUNE_EPS * PRUNE_EPS {
            return Err(Error::ZeroState);
        }
        let scale = 1.0 / norm_sqr.sqrt();
        let amps = amps
            .into_iter()
            .map(|(t, a)| (t, a * scale))
            .filter(|(_, a)| a.norm() >= PRUNE_EPS)
            .collect();
        Ok(Self { q, m, amps })
    }

    /// Exact builder from already-normalized amplitudes; validates the norm
    /// instead of rescaling so callers that carry amplitudes bit-for-bit
    /// (permutations, term-by-term isometries) stay reproducible.
    pub fn from_amplitudes(q: u64, m: usize, amps: BTreeMap<Vec<u64>, Complex64>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("local dimension {} < 2", q)));
        }
        let mut pruned = BTreeMap::new();
        for (tuple, a) in amps {
            if tuple.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "tuple of length {} in a state of {} qudits",
                    tuple.len(),
                    m
                )));
            }
            check_digits(q, &tuple)?;
            if a.norm() >= PRUNE_EPS {
                pruned.insert(tuple, a);
            }
        }
        if pruned.is_empty() {
            return Err(Error::ZeroState);
        }
        let norm_sqr: f64 = pruned.values().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParams(format!(
                "state norm² = {} is not 1",
                norm_sqr
            )));
        }
        Ok(Self { q, m, amps: pruned })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of stored basis terms.
    pub fn num_terms(&self) -> usize {
        self.amps.len()
    }

    /// Terms in lexicographic tuple order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u64], Complex64)> {
        self.amps.iter().map(|(t, &a)| (t.as_slice(), a))
    }

    /// Amplitude of a basis tuple (zero if absent).
    pub fn amp(&self, tuple: &[u64]) -> Complex64 {
        self.amps.get(tuple).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Tensor product; `self`'s qudits come first.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if self.q != other.q {
            return Err(Error::DimensionMismatch(format!(
                "tensor of q={} state with q={} state",
                self.q, other.q
            )));
        }
        let mut amps = BTreeMap::new();
        for (t1, a1) in self.terms() {
            for (t2, a2) in other.terms() {
                let mut t = Vec::with_capacity(t1.len() + t2.len());
                t.extend_from_slice(t1);
                t.extend_from_slice(t2);
                let a = a1 * a2;
                if a.norm() >= PRUNE_EPS {
                    amps.insert(t, a);
                }
            }
        }
        if amps.is_empty() {
            return Err(Error::ZeroState);
        }
        Ok(PureState {
            q: self.q,
            m: self.m + other.m,
            amps,
        })
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.q != other.q || self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "inner product of ({},{}) state with ({},{}) state",
                self.q, self.m, other.q, other.m
            )));
        }
        let (small, big, conj_small) = if self.amps.len() <= other.amps.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex64::ZERO;
        for (t, a) in small.terms() {
            let b = big.amp(t);
            acc += if conj_small { a.conj() * b } else { b.conj() * a };
        }
        Ok(acc)
    }

    /// Applies the basis permutation induced by an invertible classical map
    /// on the tuple entries at `map.positions()`. Amplitude values are
    /// carried unchanged, so the norm is preserved exactly.
    pub fn apply_index_map(&self, map: &IndexMap) -> Result<PureState> {
        let ctx = map.matrix.ctx();
        if ctx.modulus() != self.q {
            return Err(Error::ContextMismatch(self.q, ctx.modulus()));
        }
        for &p in &map.positions {
            if p < 1 || p > self.m {
                return Err(Error::InvalidPositions(format!(
                    "map position {} out of range 1..={}",
                    p, self.m
                )));
            }
        }
        let mut amps = BTreeMap::new();
        for (tuple, a) in self.terms() {
            let sub: Vec<FieldElement> = map
                .positions
                .iter()
                .map(|&p| ctx.element(tuple[p - 1]))
                .collect();
            let mut image = row_times_matrix(&sub, &map.matrix)?;
            for (v, off) in image.iter_mut().zip(&map.offset) {
                *v = *v + *off;
            }
            let mut t = tuple.to_vec();
            for (&p, v) in map.positions.iter().zip(&image) {
                t[p - 1] = v.value();
            }
            let prev = amps.insert(t, a);
            debug_assert!(prev.is_none(), "index map image collided");
        }
        Ok(PureState {
            q: self.q,
            m: self.m,
            amps,
        })
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.m];
        for i in (0..self.m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.q as usize;
        }
        strides
    }

    /// Dense |ψ⟩⟨ψ| on all m qudits; refuses dimensions above the cap.
    pub fn density(&self) -> Result<DensityOperator> {
        let dim = checked_dim(self.q, self.m)?;
        let strides = self.strides();
        let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
        let indices: Vec<(usize, Complex64)> = self
            .terms()
            .map(|(t, a)| {
                let idx: usize = t.iter().zip(&strides).map(|(&d, &s)| d as usize * s).sum();
                (idx, a)
            })
            .collect();
        for &(r, ar) in &indices {
            for &(c, ac) in &indices {
                matrix[(r, c)] = ar * ac.conj();
            }
        }
        Ok(DensityOperator {
            q: self.q,
            m: self.m,
            matrix,
        })
    }

    /// Reduced density operator on `keep` (1-based, ascending), computed
    /// directly from the sparse state by grouping terms on the traced-out
    /// digits — never materializing the full q^m density matrix.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityOperator> {
        check_positions_ascending(keep, self.m)?;
        let dim = checked_dim(self.q, keep.len())?;
        let kept_strides: Vec<usize> = {
            let mut s = vec![1usize; keep.len()];
            for i in (0..keep.len().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * self.q as usize;
            }
            s
        };
        let traced: Vec<usize> = (1..=self.m).filter(|p| !keep.contains(p)).collect();

        let mut groups: BTreeMap<Vec<u64>, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (tuple, a) in self.terms() {
            let env: Vec<u64> = traced.iter().map(|&p| tuple[p - 1]).collect();
            let idx: usize = keep
                .iter()
                .zip(&kept_strides)
                .map(|(&p, &s)| tuple[p - 1] as usize * s)
                .sum();
            groups.entry(env).or_default().push((idx, a));
        }

        let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
        for group in groups.values() {
            for &(r, ar) in group {
                for &(c, ac) in group {
                    matrix[(r, c)] += ar * ac.conj();
                }
            }
        }
        Ok(DensityOperator {
            q: self.q,
            m: keep.len(),
            matrix,
        })
    }

    /// Canonical line-oriented serialization.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "QRSS-STATE v1 q={} m={}", self.q, self.m);
        for (tuple, a) in self.terms() {
            if a.norm() < PRUNE_EPS {
                continue;
            }
            for d in tuple {
                let _ = write!(out, "{} ", d);
            }
            let _ = writeln!(out, "{:.16e} {:.16e}", a.re, a.im);
        }
        out
    }

    /// Parses the canonical serialization produced by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty state file".into()))?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 4 || tokens[0] != "QRSS-STATE" || tokens[1] != "v1" {
            return Err(Error::Parse(format!("bad state header: {:?}", header)));
        }
        let q: u64 = tokens[2]
            .strip_prefix("q=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad q field: {:?}", tokens[2])))?;
        let m: usize = tokens[3]
            .strip_prefix("m=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad m field: {:?}", tokens[3])))?;

        let mut amps = BTreeMap::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != m + 2 {
                return Err(Error::Parse(format!(
                    "expected {} digits and 2 amplitude fields, got {} tokens: {:?}",
                    m,
                    tokens.len(),
                    line
                )));
            }
            let mut tuple = Vec::with_capacity(m);
            for tok in &tokens[..m] {
                let d: u64 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad digit {:?}", tok)))?;
                tuple.push(d);
            }
            let re: f64 = tokens[m]
                .parse()
                .map_err(|_| Error::Parse(format!("bad amplitude {:?}", tokens[m])))?;
            let im: f64 = tokens[m + 1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad amplitude {:?}", tokens[m + 1])))?;
            if amps.insert(tuple, Complex64::new(re, im)).is_some() {
                return Err(Error::Parse(format!("duplicate tuple line: {:?}", line)));
            }
        }
        Self::from_amplitudes(q, m, amps)
    }
}

/// |⟨a|b⟩|².
pub fn fidelity_pure(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Basis permutation specified by an invertible classical affine map
/// `v ↦ v·M + b` (row convention) on a list of qudit positions.
#[derive(Clone, Debug)]
pub struct IndexMap {
    positions: Vec<usize>,
    matrix: MatrixFq,
    offset: Vec<FieldElement>,
    inverse_matrix: MatrixFq,
}

impl IndexMap {
    /// Linear map `v ↦ v·M` on the given 1-based positions.
    pub fn linear(positions: Vec<usize>, matrix: MatrixFq) -> Result<Self> {
        let zero = vec![matrix.ctx().zero(); positions.len()];
        Self::affine(positions, matrix, zero)
    }

    /// Affine map `v ↦ v·M + b`.
    pub fn affine(positions: Vec<usize>, matrix: MatrixFq, offset: Vec<FieldElement>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::InvalidPositions("empty position set".into()));
        }
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        if sorted[0] < 1 || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPositions(format!(
                "positions must be distinct and ≥ 1, got {:?}",
                positions
            )));
        }
        if matrix.rows() != positions.len() || matrix.cols() != positions.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on {} positions",
                matrix.rows(),
                matrix.cols(),
                positions.len()
            )));
        }
        if offset.len() != positions.len() {
            return Err(Error::DimensionMismatch(format!(
                "offset of length {} on {} positions",
                offset.len(),
                positions.len()
            )));
        }
        for o in &offset {
            if o.ctx() != matrix.ctx() {
                return Err(Error::ContextMismatch(
                    matrix.ctx().modulus(),
                    o.ctx().modulus(),
                ));
            }
        }
        let inverse_matrix = crate::codec::invert(&matrix).map_err(|e| match e {
            Error::SingularMatrix(_) => Error::NotUnitary,
            other => other,
        })?;
        Ok(Self {
            positions,
            matrix,
            offset,
            inverse_matrix,
        })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn matrix(&self) -> &MatrixFq {
        &self.matrix
    }

    /// The inverse permutation: `w ↦ (w − b)·M⁻¹`.
    pub fn inverse(&self) -> IndexMap {
        let neg_offset: Vec<FieldElement> = row_times_matrix(&self.offset, &self.inverse_matrix)
            .expect("offset length matches by construction")
            .into_iter()
            .map(|v| -v)
            .collect();
        IndexMap {
            positions: self.positions.clone(),
            matrix: self.inverse_matrix.clone(),
            offset: neg_offset,
            inverse_matrix: self.matrix.clone(),
        }
    }
}

/// Dense density operator on m qudits, basis indexed lexicographically.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    q: u64,
    m: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// I/q^m.
    pub fn fully_mixed(q: u64, m: usize) -> Result<Self> {
        let dim = checked_dim(q, m)?;
        let matrix = DMatrix::<Complex64>::identity(dim, dim) / Complex64::new(dim as f64, 0.0);
        Ok(Self { q, m, matrix })
    }

    /// Wraps an explicitly constructed matrix, validating shape, hermiticity
    /// and unit trace.
    pub fn from_matrix(q: u64, m: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = checked_dim(q, m)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for {} qudits of dimension {}",
                matrix.nrows(),
                matrix.ncols(),
                m,
                q
            )));
        }
        let op = Self { q, m, matrix };
        if !op.is_hermitian(1e-12) {
            return Err(Error::InvalidParams("matrix is not Hermitian".into()));
        }
        if (op.trace() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "matrix trace {} is not 1",
                op.trace()
            )));
        }
        Ok(op)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.matrix[(r, c)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|d| d.re).sum()
    }

    /// Diagonal in lexicographic basis order (measurement probabilities).
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|d| d.re).collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.matrix.nrows();
        for r in 0..n {
            for c in r..n {
                if (self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Partial trace keeping the 1-based ascending positions `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        check_positions_ascending(keep, self.m)?;
        let q = self.q as usize;
        let mut strides = vec![1usize; self.m];
        for i in (0..self.m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * q;
        }
        let traced: Vec<usize> = (1..=self.m).filter(|p| !keep.contains(p)).collect();

        let offsets = |positions: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &p in positions {
                let stride = strides[p - 1];
                let mut next = Vec::with_capacity(out.len() * q);
                for &base in &out {
                    for d in 0..q {
                        next.push(base + d * stride);
                    }
                }
                out = next;
            }
            out
        };
        let kept_offsets = offsets(keep);
        let traced_offsets = offsets(&traced);

        let dim = kept_offsets.len();
        let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
        for (r, &ro) in kept_offsets.iter().enumerate() {
            for (c, &co) in kept_offsets.iter().enumerate() {
                let mut acc = Complex64::ZERO;
                for &t in &traced_offsets {
                    acc += self.matrix[(ro + t, co + t)];
                }
                matrix[(r, c)] = acc;
            }
        }
        Ok(DensityOperator {
            q: self.q,
            m: keep.len(),
            matrix,
        })
    }

    /// ½‖a − b‖₁ via the eigenvalues of the Hermitian difference.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.q != other.q || self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "trace distance of ({},{}) operator vs ({},{})",
                self.q, self.m, other.q, other.m
            )));
        }
        let diff = &self.matrix - &other.matrix;
        let eig = diff.symmetric_eigen();
        Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
    }

    /// Whether this operator is I/q^m within `tol` in trace distance.
    pub fn is_fully_mixed(&self, tol: f64) -> Result<bool> {
        let mixed = Self::fully_mixed(self.q, self.m)?;
        Ok(self.trace_distance(&mixed)? <= tol)
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_entry_diff(&self, other: &DensityOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "entry diff of dim {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut max = 0.0f64;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                max = max.max((self.matrix[(r, c)] - other.matrix[(r, c)]).norm());
            }
        }
        Ok(max)
    }
}
