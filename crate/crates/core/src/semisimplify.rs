//! Superalgebras from a Lie algebra with a nilpotent derivation `δ`, `δ^p = 0`.
//!
//! `L` splits into Jordan chains of `δ`. The even part is spanned by the
//! chains of length 1; the odd part is a complement of `δ(L_{p−1})` in the
//! span `L_{p−1}` of the chains of length `p−1`. Brackets are projections:
//! even-even and odd-even brackets land in their own parts, and
//! `[x, y] = proj_even [x, δ^{p−2} y]` for odd `x, y`.

use crate::algebra::{numbered, unflatten, Algebra};
use crate::check::{Mode, Report};
use crate::field::{Field, Scalar};
use crate::jternary::{JTernaryPackage, TripleSystem};
use crate::lie::{build_lt, lt_delta, LieError};
use crate::linalg::{canonical_complement, nilpotent_jordan_chains, LinalgError, Matrix, Subspace};
use crate::superalgebra::LieSuperalgebra;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemisimplifyError {
    #[error("input is not a Lie algebra: {0}")]
    NotLie(String),
    #[error("delta is not a derivation")]
    NotDerivation,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("S(x,y) does not lie in the span of S(T,T)")]
    NotInS,
}

/// The superalgebra together with the vectors of `L` its basis came from.
#[derive(Clone, Debug)]
pub struct Semisimplified {
    pub sup: LieSuperalgebra,
    pub even_basis: Vec<Vec<Scalar>>,
    pub odd_basis: Vec<Vec<Scalar>>,
}

/// Runs the recipe after verifying that `l` is Lie (under `mode`), that
/// `delta` is a derivation and that `delta^p = 0`.
pub fn semisimplify(l: &Algebra, delta: &Matrix, mode: Mode) -> Result<Semisimplified, SemisimplifyError> {
    if let Some(o) = l.check_lie(mode).first_failure() {
        return Err(SemisimplifyError::NotLie(o.to_string()));
    }
    if !l.is_derivation(delta) {
        return Err(SemisimplifyError::NotDerivation);
    }
    semisimplify_unchecked(l, delta)
}

/// The recipe without the Lie and derivation checks; nilpotency is still
/// required by the chain decomposition.
pub fn semisimplify_unchecked(l: &Algebra, delta: &Matrix) -> Result<Semisimplified, SemisimplifyError> {
    let f = l.field();
    let p = f.p();
    let n = l.dim();
    let chains = nilpotent_jordan_chains(delta, p)?;
    let len = |k: usize| chains.vectors_of_length(k);
    let even_basis = len(1);
    let top = (p - 1) as usize;
    let l_top = Subspace::from_vectors(f, n, len(top));
    let delta_top = l_top.image(delta);
    let odd_sub = canonical_complement(&delta_top, &l_top)?;
    let odd_basis: Vec<Vec<Scalar>> = odd_sub.vectors().map(|v| v.to_vec()).collect();

    // change of basis: even, odd, chains of length 2..p−2, δ(L_{p−1}), length p
    let mut cols: Vec<Vec<Scalar>> = even_basis.clone();
    cols.extend(odd_basis.iter().cloned());
    for k in 2..top {
        cols.extend(len(k));
    }
    cols.extend(delta_top.vectors().map(|v| v.to_vec()));
    cols.extend(len(p as usize));
    let basis = Matrix::from_columns(f, n, &cols);
    let inv = basis.inverse().expect("Jordan chains give a basis");
    let (a, b) = (even_basis.len(), odd_basis.len());
    let delta_pow = delta.pow(p as u32 - 2);
    let odd_shifted: Vec<Vec<Scalar>> = odd_basis.iter().map(|y| delta_pow.mul_vec(y)).collect();

    let mut names = numbered("e", a);
    names.extend(numbered("o", b));
    let alg = Algebra::from_fn(f, names, |i, j| {
        let (x, y, target) = match (i < a, j < a) {
            (true, true) => (&even_basis[i], &even_basis[j], 0..a),
            (true, false) => (&even_basis[i], &odd_basis[j - a], a..a + b),
            (false, true) => (&odd_basis[i - a], &even_basis[j], a..a + b),
            (false, false) => (&odd_basis[i - a], &odd_shifted[j - a], 0..a),
        };
        let c = inv.mul_vec(&l.multiply(x, y));
        let mut out = vec![0; a + b];
        for k in target {
            out[k] = c[k];
        }
        out
    });
    let mut parity = vec![0u8; a];
    parity.extend(std::iter::repeat_n(1, b));
    let sup = LieSuperalgebra::new(alg, parity).expect("parity matches dimension");
    Ok(Semisimplified { sup, even_basis, odd_basis })
}

/// The superalgebra with even part `S(T,T)` (canonical operator basis) and
/// odd part `T`: `[d,d'] = dd' − d'd`, `[d,x] = d(x)`, `[x,y] = S(x,y)`.
pub fn direct_from_jternary(ts: &TripleSystem) -> Result<LieSuperalgebra, SemisimplifyError> {
    let f = ts.field();
    let n = ts.dim();
    let span = ts.s_span();
    let m = span.dim();
    let ops: Vec<Matrix> = span.vectors().map(|v| unflatten(f, n, v)).collect();
    let lops = ts.l_basis_ops();
    let coords = |mm: &Matrix| span.coords(mm.data()).ok_or(SemisimplifyError::NotInS);
    let dim = m + n;
    let mut table = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut out = vec![0; dim];
            match (i < m, j < m) {
                (true, true) => out[..m].copy_from_slice(&coords(&ops[i].commutator(&ops[j]))?),
                (true, false) => out[m..].copy_from_slice(&ops[i].column(j - m)),
                (false, true) => out[m..].copy_from_slice(&f.scaled(&ops[j].column(i - m), f.neg(1))),
                (false, false) => {
                    let (x, y) = (i - m, j - m);
                    out[..m].copy_from_slice(&coords(&lops[x * n + y].add(&lops[y * n + x]))?);
                }
            }
            table[i * dim + j] = out;
        }
    }
    let mut names = numbered("d", m);
    names.extend(ts.names().iter().cloned());
    let alg = Algebra::from_fn(f, names, |i, j| std::mem::take(&mut table[i * dim + j]));
    let mut parity = vec![0u8; m];
    parity.extend(std::iter::repeat_n(1, n));
    Ok(LieSuperalgebra::new(alg, parity).expect("parity matches dimension"))
}

/// Outcome of comparing the recipe on `(L(T), ad_{F⊗id})` with the direct
/// construction.
#[derive(Clone, Debug)]
pub struct Equivalence {
    /// the recipe picked exactly the `S(T,T)` and `p⊗T` unit vectors, in order
    pub bases_match: bool,
    /// identical structure constants under that identification
    pub tables_match: bool,
    pub recipe: Semisimplified,
    pub direct: LieSuperalgebra,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.bases_match && self.tables_match
    }
}

/// Builds `L(T)`, runs the recipe with `δ = ad_{F⊗id}` and compares with
/// [`direct_from_jternary`], identifying `p⊗x` with `x`.
pub fn recipe_equivalence(pkg: &JTernaryPackage, mode: Mode) -> Result<Equivalence, SemisimplifyError> {
    let lt = build_lt(pkg)?;
    let delta = lt_delta(&lt);
    let recipe = semisimplify(&lt.alg, &delta, mode)?;
    let direct = direct_from_jternary(&pkg.system)?;
    let f: Field = lt.field();
    let n = pkg.system.dim();
    let k = pkg.j_dim();
    let m = direct.dim() - n;
    let dim = lt.dim();
    let (off_p, off_s) = (3 * k, 3 * k + 2 * n);
    let bases_match = recipe.even_basis.len() == m
        && recipe.odd_basis.len() == n
        && recipe.even_basis.iter().enumerate().all(|(i, v)| *v == f.unit_vec(dim, off_s + i))
        && recipe.odd_basis.iter().enumerate().all(|(x, v)| *v == f.unit_vec(dim, off_p + x));
    let tables_match = bases_match && recipe.sup.alg.table() == direct.alg.table();
    Ok(Equivalence { bases_match, tables_match, recipe, direct })
}

/// Weak Lie superalgebra axioms of the output, plus closure of the even part
/// and its action on the odd part (implied by parity homogeneity).
pub fn verify_output(s: &Semisimplified, mode: Mode) -> Report {
    s.sup.check_weak(mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jternary::{jordanize, jordanize_unchecked, osp_system, psl_system, weak_counterexample, zero_system};

    fn f3() -> Field {
        Field::three()
    }

    #[test]
    fn zero_derivation_keeps_everything_even() {
        let pkg = jordanize(&osp_system(f3(), 1, 2).unwrap(), Mode::Exhaustive).unwrap();
        let lt = build_lt(&pkg).unwrap();
        let zero = Matrix::zeros(f3(), lt.dim(), lt.dim());
        let s = semisimplify(&lt.alg, &zero, Mode::Exhaustive).unwrap();
        assert_eq!(s.sup.superdim(), (lt.dim(), 0));
        assert_eq!(s.sup.alg.table(), lt.alg.table());
    }

    #[test]
    fn rejects_non_derivation_and_non_nilpotent() {
        let pkg = jordanize(&weak_counterexample(f3()), Mode::Exhaustive).unwrap();
        let lt = build_lt(&pkg).unwrap();
        let id = Matrix::identity(f3(), lt.dim());
        assert_eq!(semisimplify(&lt.alg, &id, Mode::Exhaustive).unwrap_err(), SemisimplifyError::NotDerivation);
        let h = lt.ad(&lt.sl2.as_ref().unwrap().h);
        assert!(matches!(semisimplify(&lt.alg, &h, Mode::Exhaustive), Err(SemisimplifyError::Linalg(_))));
    }

    #[test]
    fn weak_counterexample_superalgebra() {
        let pkg = jordanize(&weak_counterexample(f3()), Mode::Exhaustive).unwrap();
        let eq = recipe_equivalence(&pkg, Mode::Exhaustive).unwrap();
        assert!(eq.holds());
        let s = &eq.direct;
        assert_eq!(s.superdim(), (1, 2));
        assert!(s.check_weak(Mode::Exhaustive).passed());
        assert!(!s.is_lie());
        // cube(x) = −y with x, y the odd basis vectors
        assert_eq!(s.cube(&[0, 1, 0]), vec![0, 0, 2]);
        let q = s.quotient(&s.cube_ideal().unwrap()).unwrap();
        assert_eq!(q.superdim(), (1, 1));
        assert!(q.is_lie());
    }

    #[test]
    fn prototypical_inputs_agree_and_are_lie() {
        for ts in [osp_system(f3(), 2, 2).unwrap(), osp_system(f3(), 3, 2).unwrap(), psl_system(f3(), 2, 1).unwrap()] {
            let pkg = jordanize(&ts, Mode::Exhaustive).unwrap();
            let eq = recipe_equivalence(&pkg, Mode::Exhaustive).unwrap();
            assert!(eq.holds());
            assert!(eq.recipe.sup.is_lie());
            assert!(verify_output(&eq.recipe, Mode::Exhaustive).passed());
        }
    }

    #[test]
    fn one_dimensional_zero_system() {
        let pkg = jordanize_unchecked(&zero_system(f3(), 1));
        let eq = recipe_equivalence(&pkg, Mode::Exhaustive).unwrap();
        assert!(eq.holds());
        assert_eq!(eq.direct.superdim(), (0, 1));
    }
}
