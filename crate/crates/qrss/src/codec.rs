//! Polynomials over `F_q` and the linear algebra behind the share codecs.
//!
//! The central objects are coefficient vectors `c = (c_1, ..., c_k)` for
//! `p_c(x) = c_1 + c_2 x + ... + c_k x^{k-1}` and the power matrices
//! [`vandermonde`] whose rows are consecutive powers of a point list. All
//! vector/matrix products use the row convention `v * M`; the column
//! convention is never used anywhere in this crate.

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Coefficients of a polynomial of degree `< len`, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoeffVector {
    coeffs: Vec<FieldElement>,
}

impl CoeffVector {
    /// Wraps a coefficient list. All entries must share one field context.
    pub fn new(coeffs: Vec<FieldElement>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidParams("empty coefficient vector".into()))?;
        for c in &coeffs {
            if c.ctx() != first.ctx() {
                return Err(Error::ContextMismatch(
                    first.ctx().modulus(),
                    c.ctx().modulus(),
                ));
            }
        }
        Ok(Self { coeffs })
    }

    /// Builds a coefficient vector from raw values in one context.
    pub fn from_values(ctx: FieldCtx, values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| ctx.element(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn ctx(&self) -> FieldCtx {
        self.coeffs[0].ctx()
    }

    /// Canonical values of the coefficients, constant term first.
    pub fn values(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.value()).collect()
    }

    /// Horner evaluation of the polynomial at `u`.
    pub fn eval(&self, u: FieldElement) -> FieldElement {
        let mut acc = self.ctx().zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + *c;
        }
        acc
    }

    /// Componentwise evaluation at pairwise distinct points.
    pub fn eval_many(&self, points: &[FieldElement]) -> Result<EvalVector> {
        check_distinct(points)?;
        let values = points.iter().map(|&u| self.eval(u)).collect();
        Ok(EvalVector {
            points: points.to_vec(),
            values,
        })
    }
}

/// A polynomial's values at a list of pairwise distinct points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalVector {
    points: Vec<FieldElement>,
    values: Vec<FieldElement>,
}

impl EvalVector {
    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    /// Canonical values in point order.
    pub fn value_tuple(&self) -> Vec<u64> {
        self.values.iter().map(|v| v.value()).collect()
    }
}

fn check_distinct(points: &[FieldElement]) -> Result<()> {
    let mut seen = points.iter().map(|p| p.value()).collect::<Vec<_>>();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicatePoints);
    }
    Ok(())
}

/// Rectangular matrix over `F_q`, entries in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    ctx: FieldCtx,
    entries: Vec<FieldElement>,
}

impl MatrixFq {
    /// All-zero matrix of the given shape.
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            ctx,
            entries: vec![ctx.zero(); rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    /// Builds a matrix from row slices of equal length.
    pub fn from_rows(ctx: FieldCtx, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(height * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::DimensionMismatch("ragged matrix rows".into()));
            }
            for e in row {
                if e.ctx() != ctx {
                    return Err(Error::ContextMismatch(ctx.modulus(), e.ctx().modulus()));
                }
                entries.push(*e);
            }
        }
        Ok(Self {
            rows: height,
            cols: width,
            ctx,
            entries,
        })
    }

    /// Builds a matrix from raw row-major values in one context.
    pub fn from_values(ctx: FieldCtx, rows: &[&[u64]]) -> Result<Self> {
        let converted: Vec<Vec<FieldElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| ctx.element(v)).collect())
            .collect();
        Self::from_rows(ctx, &converted)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        self.entries[r * self.cols + c] = v;
    }

    /// Row-major canonical values, for golden comparisons.
    pub fn value_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).value()).collect())
            .collect()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &MatrixFq) -> Result<MatrixFq> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatrixFq::zeros(self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ctx.zero();
                for t in 0..self.cols {
                    acc = acc + self.get(i, t) * other.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hconcat(&self, other: &MatrixFq) -> Result<MatrixFq> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hconcat {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatrixFq::zeros(self.ctx, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }
}

/// Power matrix with rows `points[j]^e` for `e = lo ..= hi`.
///
/// With `lo = 0`, `hi = k-1` this is the square or rectangular Vandermonde
/// matrix mapping coefficients to evaluations under the row convention:
/// `c * vandermonde(0, k-1, points) = (p_c(points[0]), ...)`.
pub fn vandermonde(lo: u64, hi: u64, points: &[FieldElement]) -> Result<MatrixFq> {
    if lo > hi {
        return Err(Error::InvalidExponentRange { lo, hi });
    }
    if points.is_empty() {
        return Err(Error::InvalidParams("empty point list".into()));
    }
    let ctx = points[0].ctx();
    for p in points {
        if p.ctx() != ctx {
            return Err(Error::ContextMismatch(ctx.modulus(), p.ctx().modulus()));
        }
    }
    let height = (hi - lo + 1) as usize;
    let mut m = MatrixFq::zeros(ctx, height, points.len());
    for (j, &p) in points.iter().enumerate() {
        let mut pw = p.pow(lo);
        for r in 0..height {
            m.set(r, j, pw);
            if r + 1 < height {
                pw = pw * p;
            }
        }
    }
    Ok(m)
}

/// Gauss-Jordan inverse over `F_q`. The product with the input is the
/// identity exactly; arithmetic is exact so no pivot scaling is needed
/// beyond picking the first nonzero entry.
pub fn invert(m: &MatrixFq) -> Result<MatrixFq> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "cannot invert {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let ctx = m.ctx();
    let mut a = m.clone();
    let mut inv = MatrixFq::identity(ctx, n);

    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !a.get(r, col).is_zero())
            .ok_or_else(|| Error::SingularMatrix(ctx.modulus()))?;
        if pivot_row != col {
            for c in 0..n {
                let (x, y) = (a.get(col, c), a.get(pivot_row, c));
                a.set(col, c, y);
                a.set(pivot_row, c, x);
                let (x, y) = (inv.get(col, c), inv.get(pivot_row, c));
                inv.set(col, c, y);
                inv.set(pivot_row, c, x);
            }
        }
        let scale = a.get(col, col).inv()?;
        for c in 0..n {
            a.set(col, c, a.get(col, c) * scale);
            inv.set(col, c, inv.get(col, c) * scale);
        }
        for r in 0..n {
            if r == col || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col);
            for c in 0..n {
                let new_a = a.get(r, c) - factor * a.get(col, c);
                a.set(r, c, new_a);
                let new_inv = inv.get(r, c) - factor * inv.get(col, c);
                inv.set(r, c, new_inv);
            }
        }
    }
    Ok(inv)
}

/// Row-vector times matrix, `v * M`.
pub fn row_times_matrix(v: &[FieldElement], m: &MatrixFq) -> Result<Vec<FieldElement>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "row of length {} times {}x{} matrix",
            v.len(),
            m.rows(),
            m.cols()
        )));
    }
    let ctx = m.ctx();
    let mut out = vec![ctx.zero(); m.cols()];
    for (i, &vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = *slot + vi * m.get(i, j);
        }
    }
    Ok(out)
}

/// Unique coefficient vector of length `points.len()` whose evaluations at
/// `points` equal `values`; computed as `values * M^{-1}` where `M` is the
/// square power matrix of the points.
pub fn interpolate(points: &[FieldElement], values: &[FieldElement]) -> Result<CoeffVector> {
    if points.len() != values.len() || points.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "interpolate {} points against {} values",
            points.len(),
            values.len()
        )));
    }
    check_distinct(points)?;
    let m = vandermonde(0, (points.len() - 1) as u64, points)?;
    let inv = invert(&m)?;
    CoeffVector::new(row_times_matrix(values, &inv)?)
}

/// The `degree < k` auxiliary points used to enumerate coefficient sets:
/// the smallest field elements not already used as constraint points.
fn auxiliary_points(ctx: FieldCtx, used: &[FieldElement], count: usize) -> Result<Vec<FieldElement>> {
    let used_values: Vec<u64> = used.iter().map(|p| p.value()).collect();
    let mut aux = Vec::with_capacity(count);
    for v in 0..ctx.modulus() {
        if aux.len() == count {
            break;
        }
        if !used_values.contains(&v) {
            aux.push(ctx.element(v));
        }
    }
    if aux.len() < count {
        return Err(Error::InvalidParams(format!(
            "field F_{} too small for {} constraint plus {} auxiliary points",
            ctx.modulus(),
            used.len(),
            count
        )));
    }
    Ok(aux)
}

/// Iterates tuples in `F_q^len` in lexicographic order (first digit most
/// significant), invoking `f` on each.
fn for_each_tuple(q: u64, len: usize, mut f: impl FnMut(&[u64]) -> Result<()>) -> Result<()> {
    let mut digits = vec![0u64; len];
    loop {
        f(&digits)?;
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(());
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

/// All coefficient vectors `c` of length `k` whose evaluations at `x` equal
/// the secret tuple `s`; there are exactly `q^(k - x.len())` of them.
///
/// Enumeration goes by interpolation through the constraint points plus
/// auxiliary points, sweeping the auxiliary values lexicographically, so the
/// order is deterministic and the cost is `q^(k-L)` interpolations rather
/// than a `q^k` filter.
pub fn enumerate_coeffs(
    k: usize,
    x: &[FieldElement],
    s: &[FieldElement],
) -> Result<Vec<CoeffVector>> {
    if x.is_empty() || x.len() > k {
        return Err(Error::InvalidParams(format!(
            "need 1..=k constraint points, got {} with k={}",
            x.len(),
            k
        )));
    }
    if s.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "secret tuple of length {} against {} points",
            s.len(),
            x.len()
        )));
    }
    check_distinct(x)?;
    let ctx = x[0].ctx();
    let free = k - x.len();
    let aux = auxiliary_points(ctx, x, free)?;
    let all_points: Vec<FieldElement> = x.iter().chain(aux.iter()).copied().collect();

    let mut out = Vec::with_capacity((ctx.modulus() as usize).pow(free as u32));
    for_each_tuple(ctx.modulus(), free, |r| {
        let mut values: Vec<FieldElement> = s.to_vec();
        values.extend(r.iter().map(|&v| ctx.element(v)));
        out.push(interpolate(&all_points, &values)?);
        Ok(())
    })?;
    Ok(out)
}

/// All coefficient vectors of length `k` whose evaluations at the points
/// `x[i-1]` for `i` in the 1-based index set `indices` equal `s_i`;
/// cardinality `q^(k - |indices|)`.
pub fn enumerate_coeffs_partial(
    k: usize,
    x: &[FieldElement],
    indices: &[usize],
    s_i: &[FieldElement],
) -> Result<Vec<CoeffVector>> {
    if s_i.len() != indices.len() {
        return Err(Error::DimensionMismatch(format!(
            "partial secret of length {} against {} indices",
            s_i.len(),
            indices.len()
        )));
    }
    let mut seen = Vec::new();
    for &i in indices {
        if i == 0 || i > x.len() || seen.contains(&i) {
            return Err(Error::InvalidIndexSet(format!(
                "index {} invalid for {} points",
                i,
                x.len()
            )));
        }
        seen.push(i);
    }
    let selected: Vec<FieldElement> = indices.iter().map(|&i| x[i - 1]).collect();
    if selected.is_empty() {
        // Empty constraint: every coefficient vector qualifies.
        let ctx = x
            .first()
            .ok_or_else(|| Error::InvalidParams("empty point list".into()))?
            .ctx();
        let mut out = Vec::new();
        for_each_tuple(ctx.modulus(), k, |digits| {
            out.push(CoeffVector::from_values(ctx, digits)?);
            Ok(())
        })?;
        return Ok(out);
    }
    enumerate_coeffs(k, &selected, s_i)
}
