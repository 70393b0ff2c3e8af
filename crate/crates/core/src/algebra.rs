//! Finite-dimensional algebras given by structure constants, multiplication
//! operators, and span closures.

use crate::check::{check_tuples, Mode, Outcome, Report};
use crate::field::{Field, Scalar};
use crate::linalg::{kernel_basis, Echelon, Matrix, Subspace};
use crate::tensor::Tensor;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("span saturation exceeded {0} iterations")]
    SaturationCap(usize),
    #[error("operators must be square and of equal size")]
    BadOperators,
}

/// An algebra over GF(p): `e_i · e_j = Σ_k c_{ijk} e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    names: Vec<String>,
    mul: Tensor,
}

impl Algebra {
    pub fn new(names: Vec<String>, mul: Tensor) -> Algebra {
        let d = names.len();
        assert_eq!(mul.in_dims(), &[d, d], "product tensor must be d×d→d");
        assert_eq!(mul.out_dim(), d, "product tensor must be d×d→d");
        Algebra { names, mul }
    }

    /// From entries `(i, j, k, c)`: `e_i e_j` contains `c e_k`.
    pub fn from_entries<I>(field: Field, names: Vec<String>, entries: I) -> Algebra
    where
        I: IntoIterator<Item = (usize, usize, usize, Scalar)>,
    {
        let d = names.len();
        let mul = Tensor::from_entries(field, &[d, d], d, entries.into_iter().map(|(i, j, k, c)| (vec![i, j], k, c)));
        Algebra { names, mul }
    }

    /// Builds the table by evaluating `f(i, j) = e_i e_j` as a dense vector.
    pub fn from_fn<F>(field: Field, names: Vec<String>, mut f: F) -> Algebra
    where
        F: FnMut(usize, usize) -> Vec<Scalar>,
    {
        let d = names.len();
        let mul = Tensor::from_fn(field, &[d, d], d, |ij| f(ij[0], ij[1]));
        Algebra { names, mul }
    }

    pub fn field(&self) -> Field {
        self.mul.field()
    }
    pub fn dim(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn table(&self) -> &Tensor {
        &self.mul
    }

    fn check_len(&self, v: &[Scalar]) -> Result<(), AlgebraError> {
        if v.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// Bilinear product; panics on length mismatch (see [`Algebra::try_multiply`]).
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mul.apply(&[x, y])
    }

    pub fn try_multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.multiply(x, y))
    }

    /// `e_i e_j` as a dense vector.
    pub fn product(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.mul.at_dense(&[i, j])
    }

    /// `(xy)z − x(yz)`.
    pub fn associator(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
        let a = self.multiply(&self.multiply(x, y), z);
        let b = self.multiply(x, &self.multiply(y, z));
        self.field().sub_vec(&a, &b)
    }

    /// `L_x`, columns `x e_j`.
    pub fn left_mul(&self, x: &[Scalar]) -> Matrix {
        let f = self.field();
        let d = self.dim();
        let mut m = Matrix::zeros(f, d, d);
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &self.mul.partial_operator(&[i]));
            }
        }
        m
    }

    /// `R_x`, columns `e_j x`.
    pub fn right_mul(&self, x: &[Scalar]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..d).map(|j| self.multiply(&self.field().unit_vec(d, j), x)).collect();
        Matrix::from_columns(self.field(), d, &cols)
    }

    /// The two-sided unit, if one exists.
    pub fn unit(&self) -> Option<Vec<Scalar>> {
        let d = self.dim();
        let f = self.field();
        // u e_j = e_j and e_j u = e_j for all j: linear in u
        let mut m = Matrix::zeros(f, 2 * d * d, d);
        let mut rhs = vec![0; 2 * d * d];
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.product(i, j).into_iter().enumerate() {
                    // coefficient of u_i in (u e_j)_k and of u_j in (e_i u)_k
                    let r1 = j * d + k;
                    m.set(r1, i, f.add(m.get(r1, i), c));
                    let r2 = d * d + i * d + k;
                    m.set(r2, j, f.add(m.get(r2, j), c));
                }
            }
        }
        for j in 0..d {
            rhs[j * d + j] = 1;
            rhs[d * d + j * d + j] = 1;
        }
        crate::linalg::solve(&m, &rhs)
    }

    /// `d(e_i e_j) = d(e_i) e_j + e_i d(e_j)` on all basis pairs.
    pub fn is_derivation(&self, d: &Matrix) -> bool {
        let n = self.dim();
        let f = self.field();
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| d.column(j)).collect();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = d.mul_vec(&self.product(i, j));
                let unit_i = f.unit_vec(n, i);
                let unit_j = f.unit_vec(n, j);
                let rhs = f.add_vec(&self.multiply(&cols[i], &unit_j), &self.multiply(&unit_i, &cols[j]));
                lhs == rhs
            })
        })
    }

    /// `{x : x e_j = 0 for all basis e_j}`; for an anticommutative product this is the center.
    pub fn center(&self) -> Subspace {
        let f = self.field();
        let d = self.dim();
        let mut cur = Subspace::full(f, d);
        for j in 0..d {
            if cur.is_zero() {
                break;
            }
            let r = self.right_mul(&f.unit_vec(d, j));
            let images: Vec<Vec<Scalar>> = cur.vectors().map(|v| r.mul_vec(v)).collect();
            let m = Matrix::from_columns(f, d, &images);
            let ker = kernel_basis(&m);
            cur = Subspace::from_vectors(f, d, ker.vectors().map(|c| cur.combine(c)));
        }
        cur
    }

    /// Span of all products `e_i e_j`.
    pub fn derived(&self) -> Subspace {
        let d = self.dim();
        let mut e = Echelon::new(self.field(), d);
        'outer: for i in 0..d {
            for j in 0..d {
                if e.is_full() {
                    break 'outer;
                }
                e.insert(self.product(i, j));
            }
        }
        e.into_subspace()
    }

    /// Smallest two-sided ideal containing `s`.
    pub fn ideal_generated(&self, s: &Subspace) -> Result<Subspace, AlgebraError> {
        let d = self.dim();
        let f = self.field();
        let mut e = Echelon::new(f, d);
        let mut queue: Vec<Vec<Scalar>> = Vec::new();
        for v in s.vectors() {
            if e.insert(v.to_vec()) {
                queue.push(v.to_vec());
            }
        }
        let cap = d * d + 1;
        let mut steps = 0;
        while let Some(v) = queue.pop() {
            steps += 1;
            if steps > cap {
                return Err(AlgebraError::SaturationCap(cap));
            }
            for j in 0..d {
                if e.is_full() {
                    return Ok(e.into_subspace());
                }
                let ej = f.unit_vec(d, j);
                for w in [self.multiply(&v, &ej), self.multiply(&ej, &v)] {
                    if e.insert(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        Ok(e.into_subspace())
    }

    /// Smallest subalgebra containing the given vectors.
    pub fn subalgebra_generated(&self, gens: &[Vec<Scalar>]) -> Result<Subspace, AlgebraError> {
        let d = self.dim();
        let mut e = Echelon::new(self.field(), d);
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        for g in gens {
            self.check_len(g)?;
            if e.insert(g.clone()) {
                basis.push(g.clone());
            }
        }
        let cap = d * d + 1;
        let mut next = 0;
        while next < basis.len() {
            if next > cap {
                return Err(AlgebraError::SaturationCap(cap));
            }
            let v = basis[next].clone();
            for k in 0..=next {
                let w = basis[k].clone();
                for prod in [self.multiply(&v, &w), self.multiply(&w, &v)] {
                    if e.insert(prod.clone()) {
                        basis.push(prod);
                    }
                }
            }
            next += 1;
        }
        Ok(e.into_subspace())
    }

    /// Anticommutativity `[e_i,e_i] = 0`, `[e_i,e_j] = −[e_j,e_i]` and the Jacobi identity.
    pub fn check_lie(&self, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let mut r = Report::new();
        r.push(check_tuples("anticommutativity", &[d, d], d, Mode::Exhaustive, |t| {
            let a = self.mul.at(&[t[0], t[1]]);
            let b = self.mul.at(&[t[1], t[0]]);
            a.0 == b.0 && a.1.iter().zip(b.1).all(|(&x, &y)| f.add(x, y) == 0)
        }));
        r.push(check_tuples("jacobi", &[d, d, d], d, mode, |t| self.jacobi_zero(t[0], t[1], t[2])));
        r
    }

    fn jacobi_zero(&self, i: usize, j: usize, k: usize) -> bool {
        let mut acc = vec![0; self.dim()];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let (outs, coeffs) = self.mul.at(&[a, b]);
            for (&l, &x) in outs.iter().zip(coeffs) {
                self.mul.accumulate(&mut acc, &[l as usize, c], x);
            }
        }
        acc.iter().all(|&v| v == 0)
    }

    /// Whether `T(e_i e_j) = T(e_i) T(e_j)` for a linear map `T` (as a matrix)
    /// into `other`; used to verify explicit isomorphisms.
    pub fn is_homomorphism_to(&self, other: &Algebra, map: &Matrix) -> Outcome {
        let d = self.dim();
        let imgs: Vec<Vec<Scalar>> = (0..d).map(|j| map.column(j)).collect();
        check_tuples("homomorphism", &[d, d], other.dim(), Mode::Exhaustive, |t| {
            map.mul_vec(&self.product(t[0], t[1])) == other.multiply(&imgs[t[0]], &imgs[t[1]])
        })
    }
}

/// Canonical span of operators flattened row-major.
pub fn operator_span(field: Field, n: usize, ops: &[Matrix]) -> Subspace {
    Subspace::from_vectors(field, n * n, ops.iter().map(|m| m.data().to_vec()))
}

/// Operator with row-major data `v`.
pub fn unflatten(field: Field, n: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_flat(field, n, n, v.to_vec())
}

/// Span of all words in `gens` (plus the identity when `unital`), by repeatedly
/// left-multiplying new basis elements by generators until the span stabilises.
pub fn assoc_subalgebra_generated(
    field: Field,
    n: usize,
    gens: &[Matrix],
    unital: bool,
) -> Result<Subspace, AlgebraError> {
    if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
        return Err(AlgebraError::BadOperators);
    }
    let ambient = n * n;
    let mut e = Echelon::new(field, ambient);
    let mut queue: Vec<Matrix> = Vec::new();
    let mut seeds: Vec<Matrix> = gens.to_vec();
    if unital {
        seeds.insert(0, Matrix::identity(field, n));
    }
    for g in seeds {
        if e.insert(g.data().to_vec()) {
            queue.push(g);
        }
    }
    let cap = ambient * ambient + 1;
    let mut head = 0;
    while head < queue.len() && !e.is_full() {
        if head > cap {
            return Err(AlgebraError::SaturationCap(cap));
        }
        let x = queue[head].clone();
        head += 1;
        for g in gens {
            if e.is_full() {
                break;
            }
            let prod = g.mul(&x);
            let mut v = prod.data().to_vec();
            e.reduce(&mut v);
            if e.push_reduced(v) {
                queue.push(prod);
            }
        }
    }
    Ok(e.into_subspace())
}

/// `Mat_n` with matrix units `e_ij` at index `i·n + j`.
pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
    let names = (0..n * n).map(|ij| format!("e{}{}", ij / n + 1, ij % n + 1)).collect();
    Algebra::from_fn(field, names, |p, q| {
        let mut v = vec![0; n * n];
        if p % n == q / n {
            v[(p / n) * n + q % n] = 1;
        }
        v
    })
}

/// Basis names `prefix0, prefix1, …`.
pub fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::three()
    }

    /// 2×2 matrices with matrix units e11, e12, e21, e22.
    fn mat2() -> Algebra {
        let names = ["e11", "e12", "e21", "e22"].iter().map(|s| s.to_string()).collect();
        Algebra::from_fn(f3(), names, |i, j| {
            let (a, b) = (i / 2, i % 2);
            let (c, d) = (j / 2, j % 2);
            let mut v = vec![0; 4];
            if b == c {
                v[a * 2 + d] = 1;
            }
            v
        })
    }

    /// sl2 with basis e, h, f: [e,f]=h, [h,e]=2e, [h,f]=−2f.
    fn sl2() -> Algebra {
        let f = f3();
        let entries = vec![
            (0, 2, 1, 1),
            (2, 0, 1, f.neg(1)),
            (1, 0, 0, 2),
            (0, 1, 0, f.neg(2)),
            (1, 2, 2, f.neg(2)),
            (2, 1, 2, 2),
        ];
        Algebra::from_entries(f, vec!["e".into(), "h".into(), "f".into()], entries)
    }

    #[test]
    fn matrix_unit_products_and_unit() {
        let a = mat2();
        assert_eq!(a.product(1, 2), vec![1, 0, 0, 0]);
        assert_eq!(a.unit(), Some(vec![1, 0, 0, 1]));
        let u = a.unit().unwrap();
        assert!(a.left_mul(&u).is_identity());
        assert!(a.left_mul(&[0; 4]).is_zero());
        assert_eq!(a.multiply(&[0; 4], &[1, 2, 0, 1]), vec![0; 4]);
    }

    #[test]
    fn associative_algebra_has_zero_associator() {
        let a = mat2();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let u = |t| f3().unit_vec(4, t);
                    assert_eq!(a.associator(&u(i), &u(j), &u(k)), vec![0; 4]);
                }
            }
        }
    }

    #[test]
    fn sl2_structure() {
        let l = sl2();
        assert!(l.check_lie(Mode::Exhaustive).passed());
        assert!(l.center().is_zero());
        assert!(l.derived().is_full());
        for i in 0..3 {
            assert!(l.is_derivation(&l.left_mul(&f3().unit_vec(3, i))));
        }
    }

    #[test]
    fn transpose_is_not_a_derivation() {
        let a = mat2();
        let t =
            Matrix::from_columns(f3(), 4, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]);
        assert!(!a.is_derivation(&t));
        assert!(a.is_derivation(&Matrix::zeros(f3(), 4, 4)));
    }

    #[test]
    fn abelian_center_and_derived() {
        let a = Algebra::from_entries(f3(), numbered("x", 3), vec![]);
        assert!(a.center().is_full());
        assert!(a.derived().is_zero());
    }

    #[test]
    fn generated_associative_algebras() {
        let f = f3();
        assert_eq!(assoc_subalgebra_generated(f, 3, &[], true).unwrap().dim(), 1);
        let n = Matrix::from_i64(f, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(assoc_subalgebra_generated(f, 3, std::slice::from_ref(&n), true).unwrap().dim(), 3);
        assert_eq!(assoc_subalgebra_generated(f, 3, &[n], false).unwrap().dim(), 2);
    }

    #[test]
    fn operator_span_counts() {
        let f = f3();
        assert_eq!(operator_span(f, 3, &[]).dim(), 0);
        assert_eq!(operator_span(f, 3, &[Matrix::identity(f, 3)]).dim(), 1);
    }

    #[test]
    fn ideal_of_sl2_element_is_everything() {
        let l = sl2();
        let s = Subspace::from_vectors(f3(), 3, [vec![1u8, 0, 0]]);
        assert!(l.ideal_generated(&s).unwrap().is_full());
        assert_eq!(l.subalgebra_generated(&[vec![1, 0, 0]]).unwrap().dim(), 1);
    }
}
