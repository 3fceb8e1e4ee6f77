//! Dense matrices over GF(q).
//!
//! Eigenvectors are always *left* (row) eigenvectors: `ξ M = λ ξ`, and the
//! kernel of a square matrix is the space of rows `ξ` with `ξ M = 0`.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    field: Field,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElement {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElement {
        assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Eigenspace dimensions of a square matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenProfile {
    /// Nondecreasing dimensions of the nonzero left eigenspaces.
    pub dims: Vec<usize>,
    /// Eigenvalue of each entry of `dims`.
    pub eigenvalues: Vec<FieldElement>,
    /// Number of nonzero left eigenvectors, `Σ (q^g - 1)`.
    pub nu: u64,
    /// Number of projective points spanned by left eigenvectors, `nu / (q-1)`.
    pub theta: u64,
    pub diagonalizable: bool,
}

impl EigenProfile {
    fn from_dims(mut pairs: Vec<(usize, FieldElement)>, q: u32, order: usize) -> Self {
        pairs.sort();
        let dims: Vec<usize> = pairs.iter().map(|&(g, _)| g).collect();
        let eigenvalues = pairs.iter().map(|&(_, l)| l).collect();
        let nu: u64 = dims.iter().map(|&g| (q as u64).pow(g as u32) - 1).sum();
        let theta = nu / (q as u64 - 1);
        let diagonalizable = dims.iter().sum::<usize>() == order;
        EigenProfile {
            dims,
            eigenvalues,
            nu,
            theta,
            diagonalizable,
        }
    }
}

/// Reduced row echelon form of `rows` in place; returns the pivot columns.
///
/// Pivots are taken left to right, each from the first remaining row with a
/// nonzero entry in that column.
pub(crate) fn rref_rows(field: &Field, rows: &mut [Vec<FieldElement>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]);
        if inv != 1 {
            for x in rows[r].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(tail.iter_mut()) {
            let factor = other[c];
            if factor == 0 {
                continue;
            }
            for (x, &y) in other.iter_mut().zip(pivot_row.iter()).skip(c) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a list of row vectors of length `cols`.
pub fn rank_of_rows(field: &Field, rows: &[Vec<FieldElement>], cols: usize) -> usize {
    let mut work = rows.to_vec();
    rref_rows(field, &mut work, cols).len()
}

/// Incrementally maintained echelon basis, used when spans are grown one
/// vector at a time and may stop early.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    field: Field,
    len: usize,
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl EchelonBasis {
    pub fn new(field: &Field, len: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis and inserts it if independent.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let f = &self.field;
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let factor = v[*pc];
            if factor != 0 {
                for (x, &y) in v.iter_mut().zip(row.iter()).skip(*pc) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.rows.push((pc, v));
        true
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut probe = self.clone();
        !probe.insert(v)
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Matrix {
            rows,
            cols,
            data,
            field: field.clone(),
        })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<FieldElement>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::Shape("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &Field, order: usize) -> Self {
        Self::scalar(field, order, 1)
    }

    pub fn scalar(field: &Field, order: usize, lambda: FieldElement) -> Self {
        let mut m = Self::zeros(field, order, order);
        for i in 0..order {
            m[(i, i)] = lambda;
        }
        m
    }

    /// Elementary matrix `E_ij` (zero-based indices).
    pub fn elementary(field: &Field, order: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, order, order);
        m[(i, j)] = 1;
        m
    }

    /// Outer product `x ξ` of a column vector and a row vector.
    pub fn outer(field: &Field, x: &[FieldElement], xi: &[FieldElement]) -> Self {
        let data = x
            .iter()
            .flat_map(|&a| xi.iter().map(move |&b| (a, b)))
            .map(|(a, b)| field.mul(a, b))
            .collect();
        Matrix {
            rows: x.len(),
            cols: xi.len(),
            data,
            field: field.clone(),
        }
    }

    /// Companion matrix of the monic polynomial with ascending lower
    /// coefficients `coeffs` (the leading 1 omitted).
    pub fn companion(field: &Field, coeffs: &[FieldElement]) -> Self {
        let d = coeffs.len();
        let mut m = Self::zeros(field, d, d);
        for i in 1..d {
            m[(i, i - 1)] = 1;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            m[(i, d - 1)] = field.neg(c);
        }
        m
    }

    pub fn block_diag(a: &Matrix, b: &Matrix) -> Self {
        let (r, c) = (a.rows + b.rows, a.cols + b.cols);
        let mut m = Self::zeros(&a.field, r, c);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m[(i, j)] = a[(i, j)];
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m[(a.rows + i, a.cols + j)] = b[(i, j)];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_field(&self, other: &Matrix) -> Result<(), MatrixError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Result<Self, MatrixError> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Self, MatrixError> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: impl Fn(&Field, FieldElement, FieldElement) -> FieldElement,
    ) -> Result<Self, MatrixError> {
        self.require_same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(&self.field, a, b))
            .collect();
        Ok(Matrix {
            data,
            ..self.clone()
        })
    }

    pub fn scale(&self, lambda: FieldElement) -> Self {
        let f = &self.field;
        Matrix {
            data: self.data.iter().map(|&a| f.mul(a, lambda)).collect(),
            ..self.clone()
        }
    }

    /// `self + lambda I`.
    pub fn shift(&self, lambda: FieldElement) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] = self.field.add(m[(i, i)], lambda);
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Self, MatrixError> {
        self.require_same_field(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = f.add(out[(i, j)], f.mul(a, other[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `ξ M` for a row vector `ξ`.
    pub fn vec_mul(&self, xi: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(xi.len(), self.rows);
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (r, &a) in xi.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        out
    }

    /// `ξ M x` without forming intermediate matrices.
    pub fn bilinear(&self, xi: &[FieldElement], x: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = 0;
        for (r, &a) in xi.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = self.row(r);
            let s = row.iter().zip(x).fold(0, |s, (&m, &b)| f.add(s, f.mul(m, b)));
            acc = f.add(acc, f.mul(a, s));
        }
        acc
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.field, &self.row_vecs(), self.cols)
    }

    /// Dimension of `{ξ : ξ M = 0}`.
    pub fn left_kernel_dim(&self) -> Result<usize, MatrixError> {
        let order = self.require_square()?;
        Ok(order - self.rank())
    }

    /// Reduced row echelon basis of the left kernel `{ξ : ξ M = 0}`.
    pub fn left_kernel_basis(&self) -> Result<Vec<Vec<FieldElement>>, MatrixError> {
        self.require_square()?;
        // ξ M = 0  <=>  Mᵀ ξᵀ = 0
        let f = &self.field;
        let mut rows = self.transpose().row_vecs();
        let pivots = rref_rows(f, &mut rows, self.rows);
        let free: Vec<usize> = (0..self.rows).filter(|c| !pivots.contains(c)).collect();
        let mut basis: Vec<Vec<FieldElement>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0; self.rows];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(rows[r][fc]);
                }
                v
            })
            .collect();
        let n = self.rows;
        rref_rows(f, &mut basis, n);
        Ok(basis)
    }

    pub fn trace(&self) -> Result<FieldElement, MatrixError> {
        let order = self.require_square()?;
        Ok((0..order).fold(0, |acc, i| self.field.add(acc, self[(i, i)])))
    }

    /// The saturation form `Tr(X Y)`.
    pub fn saturation_form(&self, other: &Matrix) -> Result<FieldElement, MatrixError> {
        let order = self.require_square()?;
        other.require_square()?;
        self.require_same_field(other)?;
        if other.rows != order {
            return Err(MatrixError::Shape(format!("orders {order} and {}", other.rows)));
        }
        let f = &self.field;
        let mut acc = 0;
        for i in 0..order {
            for j in 0..order {
                acc = f.add(acc, f.mul(self[(i, j)], other[(j, i)]));
            }
        }
        Ok(acc)
    }

    pub fn eigen_profile(&self) -> Result<EigenProfile, MatrixError> {
        let order = self.require_square()?;
        let f = &self.field;
        let pairs = f
            .elements()
            .filter_map(|lambda| {
                let g = order - self.shift(f.neg(lambda)).rank();
                (g > 0).then_some((g, lambda))
            })
            .collect();
        Ok(EigenProfile::from_dims(pairs, f.q(), order))
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let order = self.require_square()?;
        let f = &self.field;
        let mut rows: Vec<Vec<FieldElement>> = (0..order)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.extend((0..order).map(|c| u32::from(c == r)));
                v
            })
            .collect();
        let pivots = rref_rows(f, &mut rows, order);
        if pivots.len() < order || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(MatrixError::Singular);
        }
        let data = rows.iter().flat_map(|r| r[order..].iter().copied()).collect();
        Matrix::new(f, order, order, data)
    }

    /// `g⁻¹ M g`.
    pub fn conjugate(&self, g: &Matrix) -> Result<Self, MatrixError> {
        self.require_square()?;
        let g_inv = g.inverse()?;
        g_inv.mul(self)?.mul(g)
    }

    pub fn is_scalar(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let d = if self.rows == 0 { 0 } else { self[(0, 0)] };
        (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { d } else { 0 }))
    }

    /// The distinguished member of the coset `M + ⟨I⟩`: the trace-zero member
    /// when the characteristic does not divide the order, otherwise the
    /// member whose (1,1) entry is zero.
    pub fn canonical_coset_rep(&self) -> Result<Self, MatrixError> {
        let order = self.require_square()?;
        let f = &self.field;
        let shift = if order as u64 % f.p() as u64 != 0 {
            let tr = self.trace()?;
            f.div(tr, f.from_int(order as u64))
        } else {
            self[(0, 0)]
        };
        Ok(self.shift(f.neg(shift)))
    }

    /// Degree of the minimal polynomial: the least `d` with `I, M, ..., M^d`
    /// linearly dependent.
    pub fn min_poly_degree(&self) -> Result<usize, MatrixError> {
        let order = self.require_square()?;
        let mut basis = EchelonBasis::new(&self.field, order * order);
        let mut power = Matrix::identity(&self.field, order);
        for d in 0..=order {
            if !basis.insert(&power.data) {
                return Ok(d);
            }
            power = power.mul(self)?;
        }
        unreachable!("Cayley-Hamilton bounds the degree by the order")
    }

    /// True iff `M` has no eigenvalue in the field and `M²x ∈ ⟨x, Mx⟩` for
    /// every nonzero column vector `x`.
    pub fn spread_criterion(&self) -> Result<bool, MatrixError> {
        let order = self.require_square()?;
        if !self.eigen_profile()?.dims.is_empty() {
            return Ok(false);
        }
        let f = &self.field;
        let q = f.q() as u64;
        let total = q.pow(order as u32);
        // one representative per projective point: leading nonzero entry 1
        for code in 1..total {
            let x = crate::flags::digits_of(code, q, order);
            if x.iter().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            let mx = self.mul_vec(&x);
            let mmx = self.mul_vec(&mx);
            if rank_of_rows(f, &[x, mx, mmx], order) > 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses the text format: a header `rows cols p e` followed by `rows`
    /// lines of `cols` whitespace-separated element codes.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| MatrixError::Parse("empty input".into()))?;
        let nums: Vec<u64> = parse_ints(header)?;
        let [rows, cols, p, e] = nums[..] else {
            return Err(MatrixError::Parse(format!("bad header {header:?}")));
        };
        let field = Field::new(p, e as u32)?;
        let mut data = Vec::with_capacity((rows * cols) as usize);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| MatrixError::Parse(format!("missing row {r}")))?;
            let vals = parse_ints(line)?;
            if vals.len() as u64 != cols {
                return Err(MatrixError::Parse(format!(
                    "row {r} has {} entries, expected {cols}",
                    vals.len()
                )));
            }
            for v in vals {
                data.push(u32::try_from(v).map_err(|_| MatrixError::Parse(format!("entry {v}")))?);
            }
        }
        if lines.next().is_some() {
            return Err(MatrixError::Parse("trailing rows".into()));
        }
        Matrix::new(&field, rows as usize, cols as usize, data)
    }

    /// Inverse of [`Matrix::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.rows, self.cols, self.field.p(), self.field.e());
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_ints(line: &str) -> Result<Vec<u64>, MatrixError> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| MatrixError::Parse(format!("not an integer: {t:?}"))))
        .collect()
}
