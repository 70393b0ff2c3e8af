//! Split unital composition algebras of dimension 1, 2, 4 and 8.
//!
//! Basis orders:
//! - d = 1: `1`
//! - d = 2: `e1, e2` (orthogonal idempotents of GF(p)×GF(p))
//! - d = 4: `e11, e12, e21, e22` (matrix units of Mat₂)
//! - d = 8: `e1, e2, u1, u2, u3, v1, v2, v3` (Zorn vector matrices
//!   `[[a, u], [v, b]]`)

use crate::algebra::Algebra;
use crate::field::{Field, Scalar};
use crate::linalg::{kernel_basis, Matrix, Subspace};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompositionError {
    #[error("no split composition algebra of dimension {0} (expected 1, 2, 4 or 8)")]
    BadDimension(usize),
}

#[derive(Clone, Debug)]
pub struct CompositionAlgebra {
    alg: Algebra,
    conj: Matrix,
    one: Vec<Scalar>,
    gram: Matrix,
}

fn zorn_mul(x: &[i64], y: &[i64]) -> [i64; 8] {
    let (a, u, v, b) = (x[0], &x[2..5], &x[5..8], x[1]);
    let (a2, u2, v2, b2) = (y[0], &y[2..5], &y[5..8], y[1]);
    let dot = |p: &[i64], q: &[i64]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let cross =
        |p: &[i64], q: &[i64]| [p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]];
    let vv = cross(v, v2);
    let uu = cross(u, u2);
    let mut out = [0i64; 8];
    out[0] = a * a2 + dot(u, v2);
    out[1] = b * b2 + dot(v, u2);
    for i in 0..3 {
        out[2 + i] = a * u2[i] + b2 * u[i] - vv[i];
        out[5 + i] = a2 * v[i] + b * v2[i] + uu[i];
    }
    out
}

/// The split composition algebra of dimension `d` over `field`.
pub fn split_composition(d: usize, field: Field) -> Result<CompositionAlgebra, CompositionError> {
    let f = field;
    let names: Vec<String> = match d {
        1 => vec!["1"],
        2 => vec!["e1", "e2"],
        4 => vec!["e11", "e12", "e21", "e22"],
        8 => vec!["e1", "e2", "u1", "u2", "u3", "v1", "v2", "v3"],
        _ => return Err(CompositionError::BadDimension(d)),
    }
    .into_iter()
    .map(String::from)
    .collect();
    let alg = Algebra::from_fn(f, names, |i, j| match d {
        1 => vec![1],
        2 => {
            let mut v = vec![0; 2];
            if i == j {
                v[i] = 1;
            }
            v
        }
        4 => {
            let mut v = vec![0; 4];
            if i % 2 == j / 2 {
                v[(i / 2) * 2 + j % 2] = 1;
            }
            v
        }
        _ => {
            let mut x = [0i64; 8];
            let mut y = [0i64; 8];
            x[i] = 1;
            y[j] = 1;
            zorn_mul(&x, &y).iter().map(|&c| f.from_i64(c)).collect()
        }
    });
    let m1 = f.neg(1);
    let conj_cols: Vec<Vec<Scalar>> = match d {
        1 => vec![vec![1]],
        2 => vec![vec![0, 1], vec![1, 0]],
        4 => vec![vec![0, 0, 0, 1], vec![0, m1, 0, 0], vec![0, 0, m1, 0], vec![1, 0, 0, 0]],
        _ => (0..8)
            .map(|j| {
                let mut c = vec![0; 8];
                match j {
                    0 => c[1] = 1,
                    1 => c[0] = 1,
                    _ => c[j] = m1,
                }
                c
            })
            .collect(),
    };
    let conj = Matrix::from_columns(f, d, &conj_cols);
    let one: Vec<Scalar> = match d {
        1 => vec![1],
        2 => vec![1, 1],
        4 => vec![1, 0, 0, 1],
        _ => vec![1, 1, 0, 0, 0, 0, 0, 0],
    };
    let mut c = CompositionAlgebra { alg, conj, one, gram: Matrix::zeros(f, d, d) };
    // polar form from n(x,y)·1 = x ȳ + y x̄
    let mut gram = Matrix::zeros(f, d, d);
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (f.unit_vec(d, i), f.unit_vec(d, j));
            let s = f.add_vec(&c.alg.multiply(&x, &c.conjugate(&y)), &c.alg.multiply(&y, &c.conjugate(&x)));
            gram.set(i, j, c.scalar_part(&s).expect("polar form is not scalar"));
        }
    }
    c.gram = gram;
    Ok(c)
}

impl CompositionAlgebra {
    pub fn alg(&self) -> &Algebra {
        &self.alg
    }
    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn conj(&self) -> &Matrix {
        &self.conj
    }
    pub fn one(&self) -> &[Scalar] {
        &self.one
    }
    /// Gram matrix of the polar form `n(x,y) = n(x+y) − n(x) − n(y)`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn conjugate(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.conj.mul_vec(x)
    }

    /// `λ` when `v = λ·1`, otherwise `None`.
    pub fn scalar_part(&self, v: &[Scalar]) -> Option<Scalar> {
        let k = self.one.iter().position(|&c| c != 0).unwrap();
        let lambda = self.field().mul(v[k], self.field().inv(self.one[k]));
        (self.field().scaled(&self.one, lambda) == v).then_some(lambda)
    }

    pub fn polar(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let f = self.field();
        f.dot(x, &self.gram.mul_vec(y))
    }

    /// `n(x)`, with `x x̄ = n(x)·1`.
    pub fn norm(&self, x: &[Scalar]) -> Scalar {
        let f = self.field();
        f.mul(f.inv2(), self.polar(x, x))
    }

    /// `t(x)`, with `x + x̄ = t(x)·1`.
    pub fn trace(&self, x: &[Scalar]) -> Scalar {
        self.polar(x, &self.one)
    }

    /// Skew elements `{x : x̄ = −x}` (the trace-zero subspace).
    pub fn skew_subspace(&self) -> Subspace {
        kernel_basis(&self.conj.add(&Matrix::identity(self.field(), self.dim())))
    }
}
