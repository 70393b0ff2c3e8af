//! Matrix Lie superalgebras `gl(m|n)`, `sl(m|n)`, `psl(m|n)` and
//! `osp(m|2r)`, and explicit isomorphisms from the superalgebras of the two
//! families of prototypical J-ternary systems onto them.

use crate::algebra::Algebra;
use crate::field::{Field, Scalar};
use crate::jternary::{osp_system, psl_system, symplectic, JTernaryError, TripleSystem};
use crate::linalg::{kernel_basis, solve, Echelon, Matrix, Subspace};
use crate::semisimplify::{direct_from_jternary, SemisimplifyError};
use crate::superalgebra::{LieSuperalgebra, SuperError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReferenceError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("map is not a bracket isomorphism: {0}")]
    NotIsomorphism(String),
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    JTernary(#[from] JTernaryError),
    #[error(transparent)]
    Semisimplify(#[from] SemisimplifyError),
}

/// A superalgebra of `(m+n)×(m+n)` matrices (flattened row-major), possibly
/// modulo a central subspace.
#[derive(Clone, Debug)]
pub struct MatrixSuperalgebra {
    pub sup: LieSuperalgebra,
    pub m: usize,
    pub n: usize,
    /// matrices representing the basis of `sup`
    pub basis: Vec<Vec<Scalar>>,
    /// subspace of matrices divided out (zero unless projective)
    pub modulo: Subspace,
}

impl MatrixSuperalgebra {
    pub fn size(&self) -> usize {
        self.m + self.n
    }

    /// Coordinates of a matrix (flattened) in `sup`, modulo `modulo`.
    pub fn coords(&self, mat: &[Scalar]) -> Option<Vec<Scalar>> {
        let f = self.sup.field();
        let nn = self.size() * self.size();
        let mut cols = self.basis.clone();
        cols.extend(self.modulo.vectors().map(|v| v.to_vec()));
        let sol = solve(&Matrix::from_columns(f, nn, &cols), mat)?;
        Some(sol[..self.basis.len()].to_vec())
    }
}

fn gl_parity(m: usize, i: usize, j: usize) -> u8 {
    ((i < m) != (j < m)) as u8
}

/// Supercommutator of homogeneous matrices `E_ij`, `E_kl` of `gl(m|n)`.
fn gl_bracket(f: Field, m: usize, s: usize, a: (usize, usize), b: (usize, usize)) -> Vec<Scalar> {
    let mut out = vec![0; s * s];
    if a.1 == b.0 {
        out[a.0 * s + b.1] = f.add(out[a.0 * s + b.1], 1);
    }
    if b.1 == a.0 {
        let sign = gl_parity(m, a.0, a.1) & gl_parity(m, b.0, b.1);
        let c = if sign == 1 { 1 } else { f.neg(1) };
        out[b.0 * s + a.1] = f.add(out[b.0 * s + a.1], c);
    }
    out
}

fn gl_table(f: Field, m: usize, n: usize) -> Algebra {
    let s = m + n;
    let names = (0..s * s).map(|k| format!("E{}_{}", k / s + 1, k % s + 1)).collect();
    Algebra::from_fn(f, names, |i, j| gl_bracket(f, m, s, (i / s, i % s), (j / s, j % s)))
}

/// `gl(m|n)` on the matrix units `E_ij` (index `i·(m+n)+j`).
pub fn gl(f: Field, m: usize, n: usize) -> MatrixSuperalgebra {
    let s = m + n;
    let alg = gl_table(f, m, n);
    let parity = (0..s * s).map(|k| gl_parity(m, k / s, k % s)).collect();
    let basis = (0..s * s).map(|k| f.unit_vec(s * s, k)).collect();
    MatrixSuperalgebra {
        sup: LieSuperalgebra::new(alg, parity).expect("parity length"),
        m,
        n,
        basis,
        modulo: Subspace::zero(f, s * s),
    }
}

/// The subsuperalgebra of `gl(m|n)` spanned by a homogeneous subspace given
/// by its canonical basis.
fn matrix_subalgebra(f: Field, m: usize, n: usize, span: &Subspace) -> Result<MatrixSuperalgebra, ReferenceError> {
    let s = m + n;
    let g = gl(f, m, n);
    let basis: Vec<Vec<Scalar>> = span.vectors().map(|v| v.to_vec()).collect();
    let parity: Vec<u8> = basis
        .iter()
        .map(|v| {
            let ps: Vec<u8> = (0..s * s).filter(|&k| v[k] != 0).map(|k| g.sup.parity[k]).collect();
            if ps.iter().all(|&p| p == ps[0]) {
                Ok(ps[0])
            } else {
                Err(ReferenceError::Invalid("subspace is not homogeneous".into()))
            }
        })
        .collect::<Result<_, _>>()?;
    let mut bad = None;
    let names: Vec<String> = basis
        .iter()
        .map(|v| {
            let k = v.iter().position(|&c| c != 0).unwrap();
            format!("b{}_{}", k / s + 1, k % s + 1)
        })
        .collect();
    let alg = Algebra::from_fn(f, names, |i, j| match span.coords(&g.sup.bracket(&basis[i], &basis[j])) {
        Some(c) => c,
        None => {
            bad.get_or_insert((i, j));
            vec![0; basis.len()]
        }
    });
    if let Some((i, j)) = bad {
        return Err(ReferenceError::Invalid(format!("subspace not closed at ({i},{j})")));
    }
    Ok(MatrixSuperalgebra { sup: LieSuperalgebra::new(alg, parity)?, m, n, basis, modulo: Subspace::zero(f, s * s) })
}

/// `sl(m|n)`: supertrace zero.
pub fn sl(f: Field, m: usize, n: usize) -> Result<MatrixSuperalgebra, ReferenceError> {
    if m + n == 0 {
        return Err(ReferenceError::Invalid("m + n must be positive".into()));
    }
    let s = m + n;
    let mut str_row = vec![0; s * s];
    for i in 0..s {
        str_row[i * s + i] = if i < m { 1 } else { f.neg(1) };
    }
    let span = kernel_basis(&Matrix::from_rows(f, s * s, &[str_row]));
    matrix_subalgebra(f, m, n, &span)
}

/// `psl(m|n)`: `sl(m|n)` modulo its center, computed exactly.
pub fn psl(f: Field, m: usize, n: usize) -> Result<MatrixSuperalgebra, ReferenceError> {
    let s = sl(f, m, n)?;
    let center = s.sup.center();
    let q = s.sup.quotient(&center)?;
    let keep = crate::linalg::canonical_complement(&center, &Subspace::full(f, s.sup.dim()))
        .expect("center lies in sl")
        .pivots()
        .to_vec();
    let basis = keep.iter().map(|&k| s.basis[k].clone()).collect();
    let size = m + n;
    let modulo = Subspace::from_vectors(
        f,
        size * size,
        center.vectors().map(|c| {
            let mut v = vec![0; size * size];
            for (t, &x) in c.iter().enumerate() {
                f.axpy(&mut v, x, &s.basis[t]);
            }
            v
        }),
    );
    Ok(MatrixSuperalgebra { sup: q, m, n, basis, modulo })
}

/// Gram matrix of the even supersymmetric form on `F^{m|2r}`: identity (or
/// antidiagonal when `split`) on the even part, `sign·[[0, I], [−I, 0]]` on
/// the odd part.
fn osp_gram(f: Field, m: usize, two_r: usize, sign: Scalar, split: bool) -> Matrix {
    let s = m + two_r;
    let mut g = Matrix::zeros(f, s, s);
    for i in 0..m {
        g.set(i, if split { m - 1 - i } else { i }, 1);
    }
    for a in 0..two_r {
        for b in 0..two_r {
            g.set(m + a, m + b, f.mul(sign, symplectic(f, two_r, a, b)));
        }
    }
    g
}

/// `Λ_{u,v} = u b(v,·) − (−1)^{|u||v|} v b(u,·)` on basis vectors.
fn lambda(f: Field, m: usize, gram: &Matrix, u: usize, v: usize) -> Vec<Scalar> {
    let s = gram.rows();
    let sign = if u >= m && v >= m { 1 } else { f.neg(1) };
    let mut out = vec![0; s * s];
    for k in 0..s {
        // (u b(v, ·))_{u,k} = b(v, e_k)
        out[u * s + k] = f.add(out[u * s + k], gram.get(v, k));
        out[v * s + k] = f.add(out[v * s + k], f.mul(sign, gram.get(u, k)));
    }
    out
}

fn osp_with_form(
    f: Field,
    m: usize,
    two_r: usize,
    sign: Scalar,
    split: bool,
) -> Result<MatrixSuperalgebra, ReferenceError> {
    if !two_r.is_multiple_of(2) {
        return Err(ReferenceError::Invalid("odd part of osp must be even-dimensional".into()));
    }
    let s = m + two_r;
    let gram = osp_gram(f, m, two_r, sign, split);
    let mut ech = Echelon::new(f, s * s);
    for u in 0..s {
        for v in 0..s {
            ech.insert(lambda(f, m, &gram, u, v));
        }
    }
    matrix_subalgebra(f, m, two_r, &ech.into_subspace())
}

/// `osp(m|2r)` for the identity form on `F^m` and the standard symplectic
/// form on `F^{2r}`, spanned by the operators `Λ_{u,v}`.
pub fn osp(f: Field, m: usize, two_r: usize) -> Result<MatrixSuperalgebra, ReferenceError> {
    osp_with_form(f, m, two_r, 1, false)
}

/// `osp(m|2r)` for a split (maximal Witt index) form on `F^m`. Over GF(3) the
/// identity form on `F²` is anisotropic, so `osp(2|2)` differs between the
/// two; for `m = 4` they agree.
pub fn osp_split(f: Field, m: usize, two_r: usize) -> Result<MatrixSuperalgebra, ReferenceError> {
    osp_with_form(f, m, two_r, 1, true)
}

/// A verified isomorphism from the superalgebra of a prototypical system onto
/// a matrix superalgebra: columns are images of the basis vectors.
#[derive(Clone, Debug)]
pub struct VerifiedIsomorphism {
    pub source: LieSuperalgebra,
    pub target: MatrixSuperalgebra,
    pub map: Matrix,
}

/// Extends an odd identification `odd_images` (target coordinates of the
/// images of the odd basis vectors) to the even part by
/// `S(x,y) ↦ [φ(x), φ(y)]` and verifies the result is a parity-preserving
/// bijective bracket homomorphism.
fn extend_and_verify(
    source: LieSuperalgebra,
    target: MatrixSuperalgebra,
    odd_images: Vec<Vec<Scalar>>,
) -> Result<VerifiedIsomorphism, ReferenceError> {
    let f = source.field();
    let (even_dim, odd_dim) = source.superdim();
    let src_dim = source.dim();
    let tgt = &target.sup;
    // even basis vectors come first in the source
    let mut ech = Echelon::new(f, src_dim);
    let mut chosen: Vec<(usize, usize, Vec<Scalar>)> = Vec::new();
    'outer: for x in 0..odd_dim {
        for y in x..odd_dim {
            if ech.is_full() || chosen.len() == even_dim {
                break 'outer;
            }
            let b = source.alg.product(even_dim + x, even_dim + y);
            if ech.insert(b.clone()) {
                chosen.push((x, y, b));
            }
        }
    }
    if chosen.len() != even_dim {
        return Err(ReferenceError::NotIsomorphism("[odd, odd] does not span the even part".into()));
    }
    let span_matrix = Matrix::from_columns(f, src_dim, &chosen.iter().map(|c| c.2.clone()).collect::<Vec<_>>());
    let images: Vec<Vec<Scalar>> =
        chosen.iter().map(|&(x, y, _)| tgt.bracket(&odd_images[x], &odd_images[y])).collect();
    let mut cols = Vec::with_capacity(src_dim);
    for e in 0..even_dim {
        let c = solve(&span_matrix, &f.unit_vec(src_dim, e)).expect("chosen brackets span the even part");
        let mut img = vec![0; tgt.dim()];
        for (k, &ck) in c.iter().enumerate() {
            f.axpy(&mut img, ck, &images[k]);
        }
        cols.push(img);
    }
    cols.extend(odd_images);
    let map = Matrix::from_columns(f, tgt.dim(), &cols);
    if map.rank() != src_dim || src_dim != tgt.dim() {
        return Err(ReferenceError::NotIsomorphism("map is not bijective".into()));
    }
    for (j, col) in cols.iter().enumerate() {
        if col.iter().enumerate().any(|(k, &c)| c != 0 && tgt.parity[k] != source.parity[j]) {
            return Err(ReferenceError::NotIsomorphism(format!("basis vector {j} changes parity")));
        }
    }
    let hom = source.alg.is_homomorphism_to(&tgt.alg, &map);
    if !hom.passed {
        return Err(ReferenceError::NotIsomorphism(hom.to_string()));
    }
    Ok(VerifiedIsomorphism { source, target, map })
}

/// For `T = X⊗Y` with `X = F^n` (identity form) and `Y = F^m` (symplectic),
/// maps `x⊗y ↦ Λ_{x,y}` into `osp(X|Y)` with `b|_X = b_X`, `b|_Y = −b_Y`, and
/// the even part accordingly.
pub fn proto_osp_isomorphism(f: Field, n: usize, m: usize) -> Result<VerifiedIsomorphism, ReferenceError> {
    let ts = osp_system(f, n, m)?;
    let source = direct_from_jternary(&ts)?;
    let target = osp_with_form(f, n, m, f.neg(1), false)?;
    let gram = osp_gram(f, n, m, f.neg(1), false);
    let odd_images = (0..n * m)
        .map(|t| {
            let (x, y) = (t / m, t % m);
            target.coords(&lambda(f, n, &gram, x, n + y)).expect("Λ lies in osp")
        })
        .collect::<Vec<_>>();
    extend_and_verify(source, target, odd_images)
}

/// For the second-kind system on `(X⊗Y*) ⊕ (Y⊗X*)`, maps `x⊗ω ↦ E_{x,n+ω}`
/// and `y⊗φ ↦ E_{n+y,φ}` into `psl(n|m)`.
pub fn proto_psl_isomorphism(f: Field, n: usize, m: usize) -> Result<VerifiedIsomorphism, ReferenceError> {
    let ts: TripleSystem = psl_system(f, n, m)?;
    let source = direct_from_jternary(&ts)?;
    let target = psl(f, n, m)?;
    let s = n + m;
    let unit = |r: usize, c: usize| f.unit_vec(s * s, r * s + c);
    let mut odd_images = Vec::with_capacity(2 * n * m);
    for x in 0..n {
        for w in 0..m {
            odd_images.push(target.coords(&unit(x, n + w)).expect("odd unit lies in psl"));
        }
    }
    for y in 0..m {
        for p in 0..n {
            odd_images.push(target.coords(&unit(n + y, p)).expect("odd unit lies in psl"));
        }
    }
    extend_and_verify(source, target, odd_images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::Mode;

    fn f3() -> Field {
        Field::three()
    }

    #[test]
    fn gl_and_sl_dims() {
        assert_eq!(gl(f3(), 1, 1).sup.superdim(), (2, 2));
        assert_eq!(gl(f3(), 2, 3).sup.superdim(), (13, 12));
        assert_eq!(sl(f3(), 2, 1).unwrap().sup.superdim(), (4, 4));
        assert!(gl(f3(), 2, 1).sup.is_lie());
    }

    #[test]
    fn psl_dims_follow_the_center() {
        // center of sl(m|n) is nonzero iff m ≡ n mod 3
        for (m, n, sd) in [(1, 1, (0, 2)), (2, 1, (4, 4)), (2, 2, (6, 8)), (4, 1, (15, 8))] {
            let p = psl(f3(), m, n).unwrap();
            assert_eq!(p.sup.superdim(), sd, "psl({m}|{n})");
            assert!(p.sup.check_super(Mode::Exhaustive).passed());
        }
    }

    #[test]
    fn osp_dims() {
        for (m, r2, sd) in [(1, 2, (3, 2)), (3, 2, (6, 6)), (2, 2, (4, 4)), (4, 4, (16, 16)), (2, 4, (11, 8))] {
            let o = osp(f3(), m, r2).unwrap();
            assert_eq!(o.sup.superdim(), sd, "osp({m}|{r2})");
            assert!(o.sup.is_lie());
        }
        assert!(osp(f3(), 1, 3).is_err());
    }

    #[test]
    fn supertrace_zero_on_sl_even_part() {
        let s = sl(f3(), 3, 1).unwrap();
        let size = 4;
        for (v, &par) in s.basis.iter().zip(&s.sup.parity) {
            if par == 0 {
                let st = (0..size).fold(0, |acc, i| {
                    let d = v[i * size + i];
                    f3().add(acc, if i < 3 { d } else { f3().neg(d) })
                });
                assert_eq!(st, 0);
            }
        }
    }

    #[test]
    fn prototypical_isomorphisms() {
        for (n, m) in [(1, 2), (3, 2), (2, 4)] {
            let iso = proto_osp_isomorphism(f3(), n, m).unwrap();
            assert_eq!(iso.source.superdim(), iso.target.sup.superdim());
        }
        for (n, m) in [(2, 1), (2, 2), (4, 1)] {
            let iso = proto_psl_isomorphism(f3(), n, m).unwrap();
            assert_eq!(iso.source.superdim(), iso.target.sup.superdim());
        }
    }
}
