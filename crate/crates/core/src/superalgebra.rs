//! Lie superalgebras: super-anticommutativity and super-Jacobi checks, the
//! characteristic-3 cube map `x ↦ [[x,x],x]` on the odd part, the ideal it
//! spans, quotients, direct sums and fingerprints.

use crate::algebra::Algebra;
use crate::check::{check_tuples, random_vector, rng, Mode, Outcome, Report, DEFAULT_SEED};
use crate::field::{Field, Scalar};
use crate::linalg::{canonical_complement, Echelon, Matrix, Subspace};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuperError {
    #[error("parity vector has length {0}, algebra has dimension {1}")]
    ParityLength(usize, usize),
    #[error("super-Jacobi fails ({0}); cube operations are undefined")]
    NotWeak(String),
    #[error("the cube map is only defined in characteristic 3")]
    NotCharThree,
    #[error("subspace is not graded by parity")]
    NotGraded,
    #[error("subspace is not an ideal")]
    NotIdeal,
}

#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    pub alg: Algebra,
    /// 0 for even, 1 for odd, per basis vector
    pub parity: Vec<u8>,
}

impl LieSuperalgebra {
    pub fn new(alg: Algebra, parity: Vec<u8>) -> Result<LieSuperalgebra, SuperError> {
        if parity.len() != alg.dim() {
            return Err(SuperError::ParityLength(parity.len(), alg.dim()));
        }
        Ok(LieSuperalgebra { alg, parity })
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.alg.multiply(x, y)
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == 0).collect()
    }
    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.parity[i] == 1).collect()
    }

    /// `(dim even | dim odd)`.
    pub fn superdim(&self) -> (usize, usize) {
        let odd = self.parity.iter().filter(|&&p| p == 1).count();
        (self.dim() - odd, odd)
    }

    fn sign(&self, i: usize, j: usize) -> bool {
        self.parity[i] == 1 && self.parity[j] == 1
    }

    /// Parity-homogeneous structure constants, `[x,y] = −(−1)^{|x||y|}[y,x]`
    /// and `[x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]` on basis tuples.
    pub fn check_weak(&self, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let mut r = Report::new();
        r.push(check_tuples("parity_homogeneous", &[d, d], d, Mode::Exhaustive, |t| {
            let target = self.parity[t[0]] ^ self.parity[t[1]];
            self.alg.table().at(&[t[0], t[1]]).0.iter().all(|&k| self.parity[k as usize] == target)
        }));
        r.push(check_tuples("super_anticommutativity", &[d, d], d, Mode::Exhaustive, |t| {
            let a = self.alg.product(t[0], t[1]);
            let b = self.alg.product(t[1], t[0]);
            if self.sign(t[0], t[1]) {
                a == b
            } else {
                f.add_vec(&a, &b).iter().all(|&c| c == 0)
            }
        }));
        r.push(check_tuples("super_jacobi", &[d, d, d], d, mode, |t| self.jacobi_holds(t[0], t[1], t[2])));
        r
    }

    fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let f = self.field();
        let d = self.dim();
        let tab = self.alg.table();
        let mut acc = vec![0; d];
        // [x,[y,z]] − [[x,y],z] − (−1)^{|x||y|}[y,[x,z]]
        let (outs, cs) = tab.at(&[j, k]);
        for (&l, &c) in outs.iter().zip(cs) {
            tab.accumulate(&mut acc, &[i, l as usize], c);
        }
        let (outs, cs) = tab.at(&[i, j]);
        for (&l, &c) in outs.iter().zip(cs) {
            tab.accumulate(&mut acc, &[l as usize, k], f.neg(c));
        }
        let minus_sign = if self.sign(i, j) { 1 } else { f.neg(1) };
        let (outs, cs) = tab.at(&[i, k]);
        for (&l, &c) in outs.iter().zip(cs) {
            tab.accumulate(&mut acc, &[j, l as usize], f.mul(minus_sign, c));
        }
        acc.iter().all(|&v| v == 0)
    }

    fn require_weak(&self) -> Result<(), SuperError> {
        match self.check_weak(Mode::default()).first_failure() {
            Some(o) => Err(SuperError::NotWeak(o.to_string())),
            None => Ok(()),
        }
    }

    /// `[[x,x],x]` for an odd vector `x` (full coordinates).
    pub fn cube(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.bracket(&self.bracket(x, x), x)
    }

    /// The cube map as a matrix on the odd part, columns indexed by the odd
    /// basis vectors in order. Requires characteristic 3 and super-Jacobi.
    pub fn cube_map(&self) -> Result<Matrix, SuperError> {
        if !self.field().is_three() {
            return Err(SuperError::NotCharThree);
        }
        self.require_weak()?;
        Ok(self.cube_map_unchecked())
    }

    fn cube_map_unchecked(&self) -> Matrix {
        let f = self.field();
        let odd = self.odd_indices();
        let cols: Vec<Vec<Scalar>> = odd
            .iter()
            .map(|&i| {
                let c = self.cube(&f.unit_vec(self.dim(), i));
                odd.iter().map(|&k| c[k]).collect()
            })
            .collect();
        Matrix::from_columns(f, odd.len(), &cols)
    }

    /// Embeds odd coordinates into full coordinates.
    pub fn odd_vector(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![0; self.dim()];
        for (t, &i) in self.odd_indices().iter().enumerate() {
            v[i] = coords[t];
        }
        v
    }

    /// `cube(x + y) = cube(x) + cube(y)` on seeded random odd pairs.
    pub fn cube_additivity(&self, samples: usize, seed: u64) -> Outcome {
        let f = self.field();
        let n_odd = self.odd_indices().len();
        let mut r = rng(seed);
        for s in 0..samples {
            let x = self.odd_vector(&random_vector(&mut r, f, n_odd));
            let y = self.odd_vector(&random_vector(&mut r, f, n_odd));
            let lhs = self.cube(&f.add_vec(&x, &y));
            let rhs = f.add_vec(&self.cube(&x), &self.cube(&y));
            if lhs != rhs {
                return Outcome::fail("cube_additivity", vec![s]);
            }
        }
        Outcome::pass("cube_additivity", false, samples as u64)
    }

    /// Span of `[[x,x],x]` over odd `x`, which is an ideal (verified).
    pub fn cube_ideal(&self) -> Result<Subspace, SuperError> {
        let m = self.cube_map()?;
        let f = self.field();
        let image = Subspace::from_vectors(f, self.dim(), (0..m.cols()).map(|j| self.odd_vector(&m.column(j))));
        if !self.is_ideal(&image) {
            return Err(SuperError::NotIdeal);
        }
        Ok(image)
    }

    /// Super-Jacobi and, in characteristic 3, a vanishing cube map; the first
    /// odd basis index with nonzero cube is the counterexample.
    pub fn check_super(&self, mode: Mode) -> Report {
        let mut r = self.check_weak(mode);
        if self.field().is_three() && r.passed() {
            let m = self.cube_map_unchecked();
            let odd = self.odd_indices();
            let bad = (0..m.cols()).find(|&j| m.column(j).iter().any(|&c| c != 0));
            r.push(match bad {
                Some(j) => Outcome::fail("cube", vec![odd[j]]),
                None => Outcome::pass("cube", true, m.cols() as u64),
            });
        }
        r
    }

    pub fn is_lie(&self) -> bool {
        self.check_super(Mode::default()).passed()
    }

    pub fn is_graded(&self, s: &Subspace) -> bool {
        let f = self.field();
        let n = self.dim();
        let part = |par: u8| {
            Subspace::from_vectors(
                f,
                n,
                s.vectors().map(|v| (0..n).map(|i| if self.parity[i] == par { v[i] } else { 0 }).collect::<Vec<_>>()),
            )
        };
        part(0).is_subspace_of(s) && part(1).is_subspace_of(s)
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let f = self.field();
        let n = self.dim();
        s.vectors().all(|v| (0..n).all(|j| s.contains(&self.bracket(&f.unit_vec(n, j), v))))
    }

    /// `L / I`, on the unit vectors of the canonical complement of `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<LieSuperalgebra, SuperError> {
        if !self.is_graded(ideal) {
            return Err(SuperError::NotGraded);
        }
        if !self.is_ideal(ideal) {
            return Err(SuperError::NotIdeal);
        }
        let f = self.field();
        let n = self.dim();
        let comp = canonical_complement(ideal, &Subspace::full(f, n)).expect("ideal lies in the full space");
        let keep: Vec<usize> = comp.pivots().to_vec();
        let ech = ideal.to_echelon();
        let project = |mut v: Vec<Scalar>| -> Vec<Scalar> {
            ech.reduce(&mut v);
            keep.iter().map(|&k| v[k]).collect()
        };
        let names = keep.iter().map(|&k| self.alg.names()[k].clone()).collect();
        let alg = Algebra::from_fn(f, names, |i, j| project(self.alg.product(keep[i], keep[j])));
        let parity = keep.iter().map(|&k| self.parity[k]).collect();
        Ok(LieSuperalgebra { alg, parity })
    }

    /// Center `{z : [z, e_j] = 0 for all j}`.
    pub fn center(&self) -> Subspace {
        self.alg.center()
    }

    /// `(dim S ∩ L₀̄, dim S ∩ L₁̄)` for a graded subspace.
    pub fn superdim_of(&self, s: &Subspace) -> (usize, usize) {
        let f = self.field();
        let n = self.dim();
        let even = Subspace::from_vectors(f, n, self.even_indices().into_iter().map(|i| f.unit_vec(n, i)));
        let e = s.intersection(&even).dim();
        (e, s.dim() - e)
    }

    /// `ad(x)` restricted to the odd part, for each even basis vector `x`.
    fn even_action_on_odd(&self) -> Vec<Matrix> {
        let f = self.field();
        let odd = self.odd_indices();
        let m = odd.len();
        self.even_indices()
            .into_iter()
            .map(|e| {
                let cols: Vec<Vec<Scalar>> = odd
                    .iter()
                    .map(|&j| {
                        let v = self.alg.product(e, j);
                        odd.iter().map(|&k| v[k]).collect()
                    })
                    .collect();
                Matrix::from_columns(f, m, &cols)
            })
            .collect()
    }

    /// The `L₀̄`-submodule of the odd part generated by `v`, both in odd
    /// coordinates.
    pub fn odd_submodule(&self, v: &[Scalar]) -> Subspace {
        submodule(self.field(), &self.even_action_on_odd(), v.to_vec()).into_subspace()
    }

    /// Whether the odd part is generated under `ad(L₀̄)` by each odd basis
    /// vector and by `samples` seeded random odd vectors. Evidence of
    /// irreducibility, not a proof.
    pub fn odd_irreducible_heuristic(&self, samples: usize, seed: u64) -> bool {
        let f = self.field();
        let m = self.odd_indices().len();
        if m == 0 {
            return true;
        }
        let ops = self.even_action_on_odd();
        let generates = |v: Vec<Scalar>| submodule(f, &ops, v).is_full();
        if !(0..m).all(|j| generates(f.unit_vec(m, j))) {
            return false;
        }
        let mut r = rng(seed);
        (0..samples).all(|_| {
            let v = random_vector(&mut r, f, m);
            v.iter().all(|&c| c == 0) || generates(v)
        })
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let f = self.field();
        let n = self.dim();
        let odd = self.odd_indices();
        let mut oo = Echelon::new(f, n);
        for &i in &odd {
            for &j in &odd {
                oo.insert(self.alg.product(i, j));
            }
        }
        let cube_ideal_dim = if f.is_three() && self.check_weak(Mode::default()).passed() {
            Some(self.cube_map_unchecked().rank())
        } else {
            None
        };
        Fingerprint {
            superdim: self.superdim(),
            center: self.superdim_of(&self.center()),
            derived: self.superdim_of(&self.alg.derived()),
            odd_odd: oo.dim(),
            cube_ideal_dim,
            odd_irreducible_heuristic: self.odd_irreducible_heuristic(100, DEFAULT_SEED),
        }
    }
}

/// Closure of `start` under `ops`, stopping early once everything is reached.
fn submodule(f: Field, ops: &[Matrix], start: Vec<Scalar>) -> Echelon {
    let mut ech = Echelon::new(f, start.len());
    let mut queue = Vec::new();
    if ech.insert(start.clone()) {
        queue.push(start);
    }
    while let Some(v) = queue.pop() {
        for op in ops {
            if ech.is_full() {
                return ech;
            }
            let w = op.mul_vec(&v);
            if ech.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    ech
}

/// `L ⊕ M` with `L` first.
pub fn direct_sum(a: &LieSuperalgebra, b: &LieSuperalgebra) -> LieSuperalgebra {
    let f = a.field();
    let (na, nb) = (a.dim(), b.dim());
    let mut names: Vec<String> = a.alg.names().iter().map(|s| format!("{s}'")).collect();
    names.extend(b.alg.names().iter().map(|s| format!("{s}''")));
    let alg = Algebra::from_fn(f, names, |i, j| {
        let mut out = vec![0; na + nb];
        if i < na && j < na {
            out[..na].copy_from_slice(&a.alg.product(i, j));
        } else if i >= na && j >= na {
            out[na..].copy_from_slice(&b.alg.product(i - na, j - na));
        }
        out
    });
    let mut parity = a.parity.clone();
    parity.extend_from_slice(&b.parity);
    LieSuperalgebra { alg, parity }
}

/// Isomorphism evidence for a Lie superalgebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub superdim: (usize, usize),
    pub center: (usize, usize),
    pub derived: (usize, usize),
    pub odd_odd: usize,
    /// `None` outside characteristic 3 or when super-Jacobi fails
    pub cube_ideal_dim: Option<usize>,
    pub odd_irreducible_heuristic: bool,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sd = |(e, o): (usize, usize)| format!("({e}|{o})");
        writeln!(f, "superdim               {}", sd(self.superdim))?;
        writeln!(f, "center                 {}", sd(self.center))?;
        writeln!(f, "derived                {}", sd(self.derived))?;
        writeln!(f, "dim [odd,odd]          {}", self.odd_odd)?;
        match self.cube_ideal_dim {
            Some(c) => writeln!(f, "cube ideal dim         {c}")?,
            None => writeln!(f, "cube ideal dim         n/a")?,
        }
        write!(f, "odd irreducible        {} (heuristic)", self.odd_irreducible_heuristic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::three()
    }

    fn abelian(even: usize, odd: usize) -> LieSuperalgebra {
        let n = even + odd;
        let alg = Algebra::from_fn(f3(), crate::algebra::numbered("a", n), |_, _| vec![0; n]);
        let mut parity = vec![0; even];
        parity.extend(std::iter::repeat_n(1, odd));
        LieSuperalgebra::new(alg, parity).unwrap()
    }

    /// `(1|2)` with `[x,x] = d`, `[d,x] = y`, so `[[x,x],x] = y`.
    fn cube_example() -> LieSuperalgebra {
        let alg = Algebra::from_entries(
            f3(),
            vec!["d".into(), "x".into(), "y".into()],
            [(0, 1, 2, 1), (1, 0, 2, 2), (1, 1, 0, 1)],
        );
        LieSuperalgebra::new(alg, vec![0, 1, 1]).unwrap()
    }

    #[test]
    fn abelian_is_lie() {
        let a = abelian(1, 2);
        assert!(a.is_lie());
        let fp = a.fingerprint();
        assert_eq!(fp.center, (1, 2));
        assert_eq!(fp.derived, (0, 0));
        assert_eq!(fp.cube_ideal_dim, Some(0));
        assert!(!fp.odd_irreducible_heuristic);
    }

    #[test]
    fn weak_but_not_lie() {
        let a = cube_example();
        assert!(a.check_weak(Mode::Exhaustive).passed());
        assert_eq!(a.cube(&[0, 1, 0]), vec![0, 0, 1]);
        let r = a.check_super(Mode::Exhaustive);
        assert_eq!(r.get("cube").unwrap().counterexample, Some(vec![1]));
        let i = a.cube_ideal().unwrap();
        assert_eq!(i.dim(), 1);
        let q = a.quotient(&i).unwrap();
        assert_eq!(q.superdim(), (1, 1));
        assert!(q.is_lie());
        assert!(a.cube_additivity(10_000, DEFAULT_SEED).passed);
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let a = cube_example();
        let q = a.quotient(&Subspace::zero(f3(), 3)).unwrap();
        assert_eq!(q.alg.table(), a.alg.table());
    }

    #[test]
    fn rejects_bad_ideals() {
        let a = cube_example();
        let f = f3();
        let mixed = Subspace::from_vectors(f, 3, [vec![1, 1, 0]]);
        assert_eq!(a.quotient(&mixed).unwrap_err(), SuperError::NotGraded);
        let x = Subspace::from_vectors(f, 3, [vec![0, 1, 0]]);
        assert_eq!(a.quotient(&x).unwrap_err(), SuperError::NotIdeal);
    }

    #[test]
    fn detects_super_anticommutativity_failure() {
        // odd-odd bracket must be symmetric
        let alg = Algebra::from_entries(f3(), vec!["d".into(), "x".into(), "y".into()], [(1, 2, 0, 1), (2, 1, 0, 2)]);
        let a = LieSuperalgebra::new(alg, vec![0, 1, 1]).unwrap();
        assert!(!a.check_weak(Mode::Exhaustive).passed());
        assert!(matches!(a.cube_map(), Err(SuperError::NotWeak(_))));
    }

    #[test]
    fn direct_sum_dims() {
        let s = direct_sum(&cube_example(), &abelian(0, 2));
        assert_eq!(s.superdim(), (1, 4));
        assert!(s.check_weak(Mode::Exhaustive).passed());
    }
}
