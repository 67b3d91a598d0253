use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::Field;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Dense row-major matrix over an exact field.
///
/// A linear map `X -> Y` is stored as a `dim Y × dim X` matrix acting on
/// column vectors, so composition `g ∘ f` is `g.mul(&f)`.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { data: vec![field.zero(); rows * cols], field: field.clone(), rows, cols }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_data(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Build from small integers, reduced into the field.
    pub fn from_i64(field: &F, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols, "entry count");
        Matrix { field: field.clone(), rows, cols, data: vals.iter().map(|&v| field.from_i64(v)).collect() }
    }

    /// A matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let cols = columns.len();
        Self::from_fn(field, rows, cols, |r, c| columns[c][r].clone())
    }

    pub fn from_rows(field: &F, cols: usize, rows: &[Vec<F::Elem>]) -> Self {
        let nrows = rows.len();
        Self::from_fn(field, nrows, cols, |r, c| rows[r][c].clone())
    }

    pub fn random(field: &F, rows: usize, cols: usize, rng: &mut SplitMix64) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    /// Functional update of a single entry.
    pub fn with_entry(&self, r: usize, c: usize, v: F::Elem) -> Self {
        let mut m = self.clone();
        m.data[r * self.cols + c] = v;
        m
    }

    pub(crate) fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if f.is_zero(a) {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !f.is_zero(b) {
                        *o = f.mul_add(o, a, b);
                    }
                }
            }
        }
        Matrix { field: f.clone(), rows: self.rows, cols: other.cols, data: out }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.mul_add(&acc, a, b);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| self.field.neg(x))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map(|x| self.field.mul(s, x))
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: &F::Elem, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.mul_add(a, s, b))
    }

    fn map(&self, op: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(op).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Kronecker product with `(i, j) ↦ i * cols(b) + j` block ordering.
    pub fn kron(&self, b: &Self) -> Result<Self> {
        if self.field != b.field {
            return Err(Error::FieldMismatch);
        }
        let (br, bc) = (b.rows, b.cols);
        Ok(Self::from_fn(&self.field, self.rows * br, self.cols * bc, |r, c| {
            self.field.mul(self.get(r / br, c / bc), b.get(r % br, c % bc))
        }))
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack rows {} vs {}", self.rows, other.rows)));
        }
        Ok(Self::from_fn(&self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        }))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack cols {} vs {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Block matrix from a grid of blocks (each block row shares a height,
    /// each block column a width).
    pub fn block(field: &F, row_dims: &[usize], col_dims: &[usize], blocks: &[Vec<Option<&Self>>]) -> Self {
        let rows: usize = row_dims.iter().sum();
        let cols: usize = col_dims.iter().sum();
        let mut m = Self::zeros(field, rows, cols);
        let mut r0 = 0;
        for (bi, &h) in row_dims.iter().enumerate() {
            let mut c0 = 0;
            for (bj, &w) in col_dims.iter().enumerate() {
                if let Some(b) = blocks[bi][bj] {
                    assert_eq!((b.rows, b.cols), (h, w), "block ({bi},{bj}) shape");
                    m.paste(r0, c0, b);
                }
                c0 += w;
            }
            r0 += h;
        }
        m
    }

    pub fn block_diag(field: &F, blocks: &[&Self]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub(crate) fn paste(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = b.get(r, c).clone();
            }
        }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(&self.field, r1 - r0, c1 - c0, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(&self.field, idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..m.cols {
            if prow == m.rows {
                break;
            }
            let Some(r) = (prow..m.rows).find(|&r| !f.is_zero(m.get(r, c))) else {
                continue;
            };
            m.swap_rows(r, prow);
            let inv = f.inv(m.get(prow, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let idx = prow * m.cols + j;
                m.data[idx] = f.mul(&m.data[idx], &inv);
            }
            for r in 0..m.rows {
                if r == prow {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let nf = f.neg(&factor);
                for j in c..m.cols {
                    let p = m.data[prow * m.cols + j].clone();
                    if !f.is_zero(&p) {
                        let idx = r * m.cols + j;
                        m.data[idx] = f.mul_add(&m.data[idx], &nf, &p);
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of the right null space.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// Rows form a basis of the left null space (`y · m = 0`).
    pub fn left_kernel_basis(&self) -> Self {
        self.transpose().kernel_basis().transpose()
    }

    /// Columns form a basis of the column space (a subset of the original columns).
    pub fn image_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Some `x` with `self · x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &Self) -> Result<Option<Self>> {
        if self.field != b.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!("solve: {} rows vs {} rows", self.rows, b.rows)));
        }
        let f = &self.field;
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(f, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Self::identity(&self.field, self.rows)).ok()??;
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Whether every column of `v` lies in the column space of `self`.
    pub fn spans(&self, v: &Self) -> bool {
        matches!(self.solve(v), Ok(Some(_)))
    }

    /// Entrywise linear combination `Σ cᵢ mᵢ` of equally shaped matrices.
    pub fn lin_comb(field: &F, rows: usize, cols: usize, terms: &[(F::Elem, &Self)]) -> Self {
        let mut acc = Self::zeros(field, rows, cols);
        for (c, m) in terms {
            if !field.is_zero(c) {
                acc = acc.add_scaled(c, m);
            }
        }
        acc
    }

    /// Row-major flattening, used as a coordinate vector for hom spaces.
    pub fn to_vec(&self) -> Vec<F::Elem> {
        self.data.clone()
    }
}

/// Incrementally maintained reduced row echelon basis of a row space.
///
/// Rows are kept fully reduced against each other's pivots, so the null
/// space of the accumulated system can be read off directly.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    width: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(field: &F, width: usize) -> Self {
        EchelonBasis { field: field.clone(), width, rows: Vec::new(), pivots: Vec::new(), pivot_row: vec![None; width] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Remainder of `v` after elimination against the current basis.
    pub fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let factor = f.neg(&v[p]);
            for (x, y) in v.iter_mut().zip(row) {
                if !f.is_zero(y) {
                    *x = f.mul_add(x, &factor, y);
                }
            }
        }
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.width, "echelon row width");
        if self.is_full() {
            return false;
        }
        self.reduce(&mut v);
        let f = &self.field;
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero pivot");
        for x in v.iter_mut() {
            if !f.is_zero(x) {
                *x = f.mul(x, &inv);
            }
        }
        for row in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let factor = f.neg(&row[p]);
            for (x, y) in row.iter_mut().zip(&v) {
                if !f.is_zero(y) {
                    *x = f.mul_add(x, &factor, y);
                }
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Columns span the vectors annihilated by every inserted row.
    pub fn null_space(&self) -> Matrix<F> {
        let f = &self.field;
        let free: Vec<usize> = (0..self.width).filter(|&c| self.pivot_row[c].is_none()).collect();
        let mut k = Matrix::zeros(f, self.width, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, f.one());
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !f.is_zero(&row[fc]) {
                    k.set(p, j, f.neg(&row[fc]));
                }
            }
        }
        k
    }

    /// Null space as a list of vectors.
    pub fn null_vectors(&self) -> Vec<Vec<F::Elem>> {
        self.null_space().columns()
    }

    /// Pivot column of each basis row, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn basis_rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::super::field::PrimeField;
    use super::*;

    fn gf() -> PrimeField {
        PrimeField::gf101()
    }

    #[test]
    fn identity_kernel_is_empty() {
        let k = Matrix::identity(&gf(), 2).kernel_basis();
        assert_eq!((k.rows(), k.cols()), (2, 0));
    }

    #[test]
    fn row_of_ones_kernel() {
        let m = Matrix::from_i64(&gf(), 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![100, 1]);
    }

    #[test]
    fn solve_trivial_cases() {
        let f = gf();
        let b = Matrix::from_i64(&f, 2, 1, &[3, 4]);
        assert_eq!(Matrix::identity(&f, 2).solve(&b).unwrap().unwrap(), b);
        assert!(Matrix::zeros(&f, 2, 2).solve(&b).unwrap().is_none());
        assert!(Matrix::zeros(&f, 3, 2).solve(&b).is_err());
    }

    #[test]
    fn kron_identities() {
        let f = gf();
        let i6 = Matrix::identity(&f, 2).kron(&Matrix::identity(&f, 3)).unwrap();
        assert!(i6.is_identity() && i6.rows() == 6);
        let a = Matrix::from_i64(&f, 2, 3, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(a.kron(&Matrix::identity(&f, 1)).unwrap(), a);
        let g = PrimeField::gf32003();
        assert_eq!(a.kron(&Matrix::identity(&g, 1)), Err(Error::FieldMismatch));
    }

    #[test]
    fn echelon_matches_rref_kernel() {
        let f = gf();
        let mut rng = SplitMix64::new(5);
        let m = Matrix::random(&f, 4, 7, &mut rng);
        let mut e = EchelonBasis::new(&f, 7);
        for r in 0..4 {
            e.insert(m.row(r).to_vec());
        }
        assert_eq!(e.rank(), m.rank());
        let k = e.null_space();
        assert!(m.mul(&k).is_zero());
        assert_eq!(k.cols(), m.kernel_basis().cols());
    }
}
