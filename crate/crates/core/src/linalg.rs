//! Dense matrices over GF(p), reduced row-echelon forms, canonical subspaces,
//! complements, and Jordan chains of nilpotent operators.
//!
//! Operators act on column vectors: column `j` of an operator matrix is the
//! image of the basis vector `e_j`.

use crate::field::{Field, Scalar};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inner subspace is not contained in the outer subspace")]
    NotContained,
    #[error("operator is not nilpotent of order at most {0}")]
    NotNilpotent(u8),
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from row-major data; panics if the length is wrong.
    pub fn from_flat(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "flat data has wrong length");
        debug_assert!(data.iter().all(|&a| a < field.p()));
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// Builds from signed integers, reducing mod p.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column has wrong length");
            for (i, &v) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = v;
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }
    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [Scalar] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    fn check_same_shape(&self, other: &Matrix) {
        assert!(
            self.rows == other.rows && self.cols == other.cols && self.field == other.field,
            "matrix shape or field mismatch"
        );
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        Matrix { data: self.field.add_vec(&self.data, &other.data), ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same_shape(other);
        Matrix { data: self.field.sub_vec(&self.data, &other.data), ..*self }
    }

    pub fn scale(&self, c: Scalar) -> Matrix {
        Matrix { data: self.field.scaled(&self.data, c), ..*self }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1))
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: Scalar, other: &Matrix) {
        self.check_same_shape(other);
        self.field.axpy(&mut self.data, c, &other.data);
    }

    /// Matrix product. Zero entries of `self` are skipped, so sparse left
    /// factors are cheap.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert_eq!(self.field, other.field, "field mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    self.field.axpy(orow, a, &other.data[k * n..(k + 1) * n]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect()
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u32) -> Matrix {
        assert!(self.is_square());
        let mut r = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.row_mut(i)[..n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let (r, piv) = rref(&aug);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            inv.row_mut(i).copy_from_slice(&r.row(i)[n..]);
        }
        Some(inv)
    }

    /// Stacks the rows of `self` above the rows of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }
}

/// Reduced row-echelon form and the pivot columns. The returned matrix has the
/// same shape as the input, with zero rows at the bottom.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let f = m.field;
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a.get(i, c) != 0) else { continue };
        if pr != r {
            for j in c..cols {
                a.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.get(r, c));
        f.scale(&mut a.data[r * cols + c..(r + 1) * cols], inv);
        let pivot_row: Vec<Scalar> = a.data[r * cols + c..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i != r {
                let v = a.get(i, c);
                if v != 0 {
                    f.axpy(&mut a.data[i * cols + c..(i + 1) * cols], f.neg(v), &pivot_row);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Canonical right kernel `{v : m v = 0}`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let (r, pivots) = rref(m);
    let cols = m.cols;
    let f = m.field;
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut vecs = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; cols];
        v[free] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(i, free));
        }
        vecs.push(v);
    }
    Subspace::from_vectors(f, cols, vecs)
}

/// Incremental echelon basis. Rows are kept in insertion order, each with a
/// leading 1 at its pivot and zeros at the pivots of earlier rows, which is all
/// that reduction of new candidates needs.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, ambient: usize) -> Echelon {
        Echelon { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduces `v` in place against the current rows.
    pub fn reduce(&self, v: &mut [Scalar]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                f.axpy(&mut v[pc..], f.neg(c), &row[pc..]);
            }
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&a| a == 0)
    }

    /// Inserts `v`; returns whether the span grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length differs from ambient dimension");
        self.reduce(&mut v);
        self.push_reduced(v)
    }

    /// Adds an already reduced vector; returns whether it was nonzero.
    pub fn push_reduced(&mut self, mut v: Vec<Scalar>) -> bool {
        let Some(pc) = v.iter().position(|&a| a != 0) else { return false };
        let inv = self.field.inv(v[pc]);
        self.field.scale(&mut v[pc..], inv);
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn into_subspace(self) -> Subspace {
        let f = self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(order.len());
        let mut pivots = Vec::with_capacity(order.len());
        let mut src = self.rows;
        for &i in &order {
            rows.push(std::mem::take(&mut src[i]));
            pivots.push(self.pivots[i]);
        }
        for r in (0..rows.len()).rev() {
            let pc = pivots[r];
            let (upper, lower) = rows.split_at_mut(r);
            let pr = &lower[0];
            for row in upper.iter_mut() {
                let c = row[pc];
                if c != 0 {
                    f.axpy(&mut row[pc..], f.neg(c), &pr[pc..]);
                }
            }
        }
        let basis = Matrix::from_rows(f, self.ambient, &rows);
        Subspace { basis, pivots }
    }
}

/// A subspace of GF(p)^n held by its canonical reduced row-echelon basis, so
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { basis: Matrix::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    pub fn from_vectors<I, V>(field: Field, ambient: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<Scalar>>,
    {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            if e.is_full() {
                break;
            }
            e.insert(v.into());
        }
        e.into_subspace()
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Subspace {
        Subspace::from_vectors(m.field(), m.cols(), m.row_vectors().map(|r| r.to_vec()))
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn vector(&self, i: usize) -> &[Scalar] {
        self.basis.row(i)
    }
    pub fn vectors(&self) -> impl Iterator<Item = &[Scalar]> {
        self.basis.row_vectors()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn to_echelon(&self) -> Echelon {
        Echelon {
            field: self.field(),
            ambient: self.ambient_dim(),
            rows: self.vectors().map(|r| r.to_vec()).collect(),
            pivots: self.pivots.clone(),
        }
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside.
    /// For an RREF basis the coordinates are the entries of `v` at the pivots.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient_dim(), "vector length differs from ambient dimension");
        let c: Vec<Scalar> = self.pivots.iter().map(|&pc| v[pc]).collect();
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0 {
                f.axpy(&mut w, f.neg(ci), self.vector(i));
            }
        }
        w.iter().all(|&a| a == 0).then_some(c)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let mut v = vec![0; self.ambient_dim()];
        for (i, &c) in coords.iter().enumerate() {
            f.axpy(&mut v, c, self.vector(i));
        }
        v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.vectors().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut e = self.to_echelon();
        for v in other.vectors() {
            e.insert(v.to_vec());
        }
        e.into_subspace()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // kernel of [A; -B]^T pairs (a, b) with a·A = b·B
        let f = self.field();
        let (k, l, n) = (self.dim(), other.dim(), self.ambient_dim());
        let mut m = Matrix::zeros(f, n, k + l);
        for i in 0..k {
            for j in 0..n {
                m.set(j, i, self.basis.get(i, j));
            }
        }
        for i in 0..l {
            for j in 0..n {
                m.set(j, k + i, f.neg(other.basis.get(i, j)));
            }
        }
        let ker = kernel_basis(&m);
        Subspace::from_vectors(f, n, ker.vectors().map(|c| self.combine(&c[..k])))
    }

    /// Image of the subspace under an operator (acting on column vectors).
    pub fn image(&self, op: &Matrix) -> Subspace {
        Subspace::from_vectors(op.field(), op.rows(), self.vectors().map(|v| op.mul_vec(v)))
    }
}

/// The complement of `inner` in `outer` spanned by the canonical basis rows of
/// `outer` whose pivots are not pivots of `inner`.
pub fn canonical_complement(inner: &Subspace, outer: &Subspace) -> Result<Subspace, LinalgError> {
    if inner.ambient_dim() != outer.ambient_dim() {
        return Err(LinalgError::DimensionMismatch("ambient dimensions differ".into()));
    }
    if !inner.is_subspace_of(outer) {
        return Err(LinalgError::NotContained);
    }
    let covered: std::collections::HashSet<usize> = inner.pivots().iter().copied().collect();
    let rows: Vec<Vec<Scalar>> = outer
        .pivots()
        .iter()
        .enumerate()
        .filter(|(_, pc)| !covered.contains(pc))
        .map(|(i, _)| outer.vector(i).to_vec())
        .collect();
    let pivots = outer.pivots().iter().copied().filter(|pc| !covered.contains(pc)).collect();
    // rows of an RREF matrix restricted to a subset of pivots are still in RREF
    Ok(Subspace { basis: Matrix::from_rows(outer.field(), outer.ambient_dim(), &rows), pivots })
}

/// Solves `m x = b`, returning one solution if any exists.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows(), b.len());
    let f = m.field();
    let mut aug = Matrix::zeros(f, m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        aug.row_mut(i)[..m.cols()].copy_from_slice(m.row(i));
        aug.set(i, m.cols(), b[i]);
    }
    let (r, piv) = rref(&aug);
    if piv.last() == Some(&m.cols()) {
        return None;
    }
    let mut x = vec![0; m.cols()];
    for (i, &pc) in piv.iter().enumerate() {
        x[pc] = r.get(i, m.cols());
    }
    Some(x)
}

/// Jordan chains `(v, δv, …, δ^{ℓ−1}v)` of a nilpotent operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanChains {
    pub p: u8,
    pub chains: Vec<Vec<Vec<Scalar>>>,
}

impl JordanChains {
    /// `multiplicities()[ℓ]` is the number of chains of length ℓ (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.p as usize + 1];
        for c in &self.chains {
            m[c.len()] += 1;
        }
        m
    }

    /// All vectors of all chains of length `len`, chain by chain.
    pub fn vectors_of_length(&self, len: usize) -> Vec<Vec<Scalar>> {
        self.chains.iter().filter(|c| c.len() == len).flat_map(|c| c.iter().cloned()).collect()
    }
}

/// Decomposes the space into Jordan chains of `delta`, which must satisfy
/// `delta^p = 0`. For k = p down to 1 the chain tops of length k are the
/// canonical complement of `ker δ^{k−1} + δ(ker δ^{k+1})` in `ker δ^k`.
pub fn nilpotent_jordan_chains(delta: &Matrix, p: u8) -> Result<JordanChains, LinalgError> {
    if !delta.is_square() {
        return Err(LinalgError::DimensionMismatch("delta is not square".into()));
    }
    let n = delta.rows();
    let f = delta.field();
    let mut powers = vec![Matrix::identity(f, n)];
    for k in 1..=p as usize {
        let next = powers[k - 1].mul(delta);
        powers.push(next);
    }
    if !powers[p as usize].is_zero() {
        return Err(LinalgError::NotNilpotent(p));
    }
    let kernels: Vec<Subspace> = powers.iter().map(kernel_basis).collect();
    let mut chains = Vec::new();
    for k in (1..=p as usize).rev() {
        let upper = if k == p as usize { Subspace::full(f, n) } else { kernels[k + 1].clone() };
        let inner = kernels[k - 1].sum(&upper.image(delta));
        let tops = canonical_complement(&inner, &kernels[k])?;
        for top in tops.vectors() {
            let mut chain = vec![top.to_vec()];
            for _ in 1..k {
                let next = delta.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chains.push(chain);
        }
    }
    Ok(JordanChains { p, chains })
}
