//! Graded Lie algebras built from triple systems: `L(T)` with its short
//! `sl₂`-structure, the Lie triple system `KT(A)` and its standard embedding,
//! the Kantor algebra `K(A,−)` in two normalizations, and the checks on
//! 5-graded algebras with an `sl₂`-triple.

use crate::algebra::{numbered, operator_span, unflatten, Algebra};
use crate::check::{check_tuples, Mode, Outcome, Report};
use crate::field::{Field, Scalar};
use crate::jternary::{JTernaryPackage, TripleSystem};
use crate::linalg::{kernel_basis, Matrix, Subspace};
use crate::structurable::StructurableAlgebra;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("{0} does not lie in the expected subspace")]
    NotInSubspace(String),
    #[error("identity {0} fails with counterexample {1:?}")]
    AxiomFailure(String, Vec<usize>),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// An `sl₂`-triple `(E, H, F)` given by coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: Vec<Scalar>,
    pub h: Vec<Scalar>,
    pub f: Vec<Scalar>,
}

/// A Lie algebra whose basis vectors are homogeneous for a grading. When
/// `modulus` is set the degrees are taken modulo it.
#[derive(Clone, Debug)]
pub struct GradedLieAlgebra {
    pub alg: Algebra,
    pub grading: Vec<i8>,
    pub modulus: Option<u8>,
    pub sl2: Option<Sl2Triple>,
}

impl GradedLieAlgebra {
    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.alg.multiply(x, y)
    }

    /// `ad_x`, columns `[x, e_j]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        self.alg.left_mul(x)
    }

    /// Basis indices of degree `i`.
    pub fn degree_indices(&self, i: i8) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.same_degree(self.grading[j], i)).collect()
    }

    /// Coordinate subspace of degree `i`.
    pub fn degree_subspace(&self, i: i8) -> Subspace {
        let f = self.field();
        let n = self.dim();
        Subspace::from_vectors(f, n, self.degree_indices(i).into_iter().map(|j| f.unit_vec(n, j)))
    }

    fn same_degree(&self, a: i8, b: i8) -> bool {
        match self.modulus {
            Some(m) => (a as i32 - b as i32).rem_euclid(m as i32) == 0,
            None => a == b,
        }
    }

    fn degree_in_range(&self, a: i8) -> bool {
        self.modulus.is_some() || self.grading.contains(&a)
    }

    /// Anticommutativity, Jacobi, `[L_i, L_j] ⊆ L_{i+j}` and, with an
    /// `sl₂`-triple, its relations and `L_i = {X : [H,X] = iX}`.
    pub fn check(&self, mode: Mode) -> Report {
        let n = self.dim();
        let mut r = self.alg.check_lie(mode);
        r.push(check_tuples("grading", &[n, n], n, Mode::Exhaustive, |t| {
            let target = self.grading[t[0]] + self.grading[t[1]];
            let (outs, _) = self.alg.table().at(&[t[0], t[1]]);
            outs.is_empty()
                || (self.degree_in_range(target)
                    && outs.iter().all(|&k| self.same_degree(self.grading[k as usize], target)))
        }));
        if let Some(s) = &self.sl2 {
            r.extend(self.check_sl2(s));
        }
        r
    }

    fn check_sl2(&self, s: &Sl2Triple) -> Report {
        let f = self.field();
        let n = self.dim();
        let mut r = Report::new();
        let ok = self.bracket(&s.e, &s.f) == s.h
            && self.bracket(&s.h, &s.e) == f.scaled(&s.e, 2)
            && self.bracket(&s.h, &s.f) == f.scaled(&s.f, f.neg(2));
        r.push(Outcome::fact("sl2_relations", ok));
        let adh = self.ad(&s.h);
        r.push(check_tuples("h_eigenspaces", &[n], n, Mode::Exhaustive, |t| {
            adh.column(t[0]) == f.scaled(&f.unit_vec(n, t[0]), f.from_i64(self.grading[t[0]] as i64))
        }));
        r
    }
}

fn fail_on(r: &Report) -> Result<(), LieError> {
    match r.first_failure() {
        Some(o) => Err(LieError::AxiomFailure(o.name.clone(), o.counterexample.clone().unwrap_or_default())),
        None => Ok(()),
    }
}

fn coords_or(sub: &Subspace, v: &[Scalar], what: &str) -> Result<Vec<Scalar>, LieError> {
    sub.coords(v).ok_or_else(|| LieError::NotInSubspace(what.into()))
}

/// `sl(V)` on `V = span{p, q}` in the basis `H, E, F`.
const SL_NAMES: [&str; 3] = ["H", "E", "F"];

/// `[f, g]` in `sl(V)` as signed multiples of a basis element.
fn sl_bracket(f: usize, g: usize) -> Option<(usize, i64)> {
    match (f, g) {
        (0, 1) => Some((1, 2)),
        (1, 0) => Some((1, -2)),
        (0, 2) => Some((2, -2)),
        (2, 0) => Some((2, 2)),
        (1, 2) => Some((0, 1)),
        (2, 1) => Some((0, -1)),
        _ => None,
    }
}

/// `tr(fg)`.
fn sl_trace(f: usize, g: usize) -> i64 {
    match (f, g) {
        (0, 0) => 2,
        (1, 2) | (2, 1) => 1,
        _ => 0,
    }
}

/// `f(u)` for `u ∈ {p, q}` (0 for `p`, 1 for `q`).
fn sl_apply(f: usize, u: usize) -> Option<(usize, i64)> {
    match (f, u) {
        (0, 0) => Some((0, 1)),
        (0, 1) => Some((1, -1)),
        (1, 1) => Some((0, 1)),
        (2, 0) => Some((1, 1)),
        _ => None,
    }
}

/// `γ_{u,v}(w) = (u|w)v + (v|w)u` in the basis `H, E, F`:
/// `γ_{p,p} = 2E`, `γ_{q,q} = −2F`, `γ_{p,q} = γ_{q,p} = −H`.
fn gamma(u: usize, v: usize) -> (usize, i64) {
    match (u, v) {
        (0, 0) => (1, 2),
        (1, 1) => (2, -2),
        _ => (0, -1),
    }
}

/// `(u|v)` with `(p|q) = 1`.
fn symp(u: usize, v: usize) -> i64 {
    match (u, v) {
        (0, 1) => 1,
        (1, 0) => -1,
        _ => 0,
    }
}

/// `L(T) = sl(V)⊗J ⊕ V⊗T ⊕ S(T,T)`, with basis `f⊗a_i` (index `f·dim J + i`,
/// `f` in `H, E, F`), then `p⊗e_i`, `q⊗e_i`, then the canonical basis of
/// `S(T,T)`. Brackets:
/// - `[f⊗a, g⊗b] = [f,g]⊗½(ab+ba) + ½tr(fg)[a,b]`
/// - `[f⊗a, u⊗x] = f(u)⊗a(x)`
/// - `[u⊗x, v⊗y] = γ_{u,v}⊗K(x,y) + (u|v)S(x,y)`
/// - `[d, f⊗a] = f⊗[d,a]`, `[d, u⊗x] = u⊗d(x)`
///
/// Graded by `ad(H⊗id)`, with `sl₂`-triple `(E⊗id, H⊗id, F⊗id)`.
pub fn build_lt(pkg: &JTernaryPackage) -> Result<GradedLieAlgebra, LieError> {
    let ts = &pkg.system;
    let f = ts.field();
    let n = ts.dim();
    let jops = pkg.j_ops();
    let k = jops.len();
    let s_span = ts.s_span();
    let m = s_span.dim();
    let sops: Vec<Matrix> = s_span.vectors().map(|v| unflatten(f, n, v)).collect();
    let dim = 3 * k + 2 * n + m;
    let (off_p, off_s) = (3 * k, 3 * k + 2 * n);

    let half = f.inv2();
    let units: Vec<Vec<Scalar>> = (0..n).map(|i| f.unit_vec(n, i)).collect();
    // J products and commutators
    let mut jordan = vec![Vec::new(); k * k];
    let mut comm = vec![Vec::new(); k * k];
    for a in 0..k {
        for b in 0..k {
            let (ab, ba) = (jops[a].mul(&jops[b]), jops[b].mul(&jops[a]));
            jordan[a * k + b] = coords_or(&pkg.j, ab.add(&ba).scale(half).data(), "a·b")?;
            comm[a * k + b] = coords_or(&s_span, ab.sub(&ba).data(), "[a,b]")?;
        }
    }
    // K(x,y) in J, S(x,y) in S(T,T)
    let lops = ts.l_basis_ops();
    let mut kxy = vec![Vec::new(); n * n];
    let mut sxy = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            kxy[x * n + y] = coords_or(&pkg.j, ts.k_op(&units[x], &units[y]).data(), "K(x,y)")?;
            sxy[x * n + y] = coords_or(&s_span, lops[x * n + y].add(&lops[y * n + x]).data(), "S(x,y)")?;
        }
    }
    // [d, a] in J, [d, d'] in S(T,T)
    let mut da = vec![Vec::new(); m * k];
    let mut dd = vec![Vec::new(); m * m];
    for d in 0..m {
        for a in 0..k {
            da[d * k + a] = coords_or(&pkg.j, sops[d].commutator(&jops[a]).data(), "[d,a]")?;
        }
        for e in 0..m {
            dd[d * m + e] = coords_or(&s_span, sops[d].commutator(&sops[e]).data(), "[d,d']")?;
        }
    }

    enum Part {
        Sl(usize, usize),
        V(usize, usize),
        D(usize),
    }
    let part = |i: usize| -> Part {
        if i < off_p {
            Part::Sl(i / k, i % k)
        } else if i < off_s {
            Part::V((i - off_p) / n, (i - off_p) % n)
        } else {
            Part::D(i - off_s)
        }
    };
    let put = |out: &mut Vec<Scalar>, offset: usize, coords: &[Scalar], c: i64| {
        let c = f.from_i64(c);
        for (t, &x) in coords.iter().enumerate() {
            out[offset + t] = f.add(out[offset + t], f.mul(c, x));
        }
    };
    let alg = Algebra::from_fn(f, lt_names(k, n, m), |i, j| {
        let mut out = vec![0; dim];
        match (part(i), part(j)) {
            (Part::Sl(fi, a), Part::Sl(gi, b)) => {
                if let Some((h, c)) = sl_bracket(fi, gi) {
                    put(&mut out, h * k, &jordan[a * k + b], c);
                }
                let tr = sl_trace(fi, gi);
                if tr != 0 {
                    let c = f.mul(f.from_i64(tr), half);
                    put(&mut out, off_s, &comm[a * k + b], f.to_signed(c));
                }
            }
            (Part::Sl(fi, a), Part::V(u, x)) => {
                if let Some((w, c)) = sl_apply(fi, u) {
                    put(&mut out, off_p + w * n, &jops[a].column(x), c);
                }
            }
            (Part::V(u, x), Part::Sl(fi, a)) => {
                if let Some((w, c)) = sl_apply(fi, u) {
                    put(&mut out, off_p + w * n, &jops[a].column(x), -c);
                }
            }
            (Part::V(u, x), Part::V(v, y)) => {
                let (g, c) = gamma(u, v);
                put(&mut out, g * k, &kxy[x * n + y], c);
                let c = symp(u, v);
                if c != 0 {
                    put(&mut out, off_s, &sxy[x * n + y], c);
                }
            }
            (Part::D(d), Part::Sl(fi, a)) => put(&mut out, fi * k, &da[d * k + a], 1),
            (Part::Sl(fi, a), Part::D(d)) => put(&mut out, fi * k, &da[d * k + a], -1),
            (Part::D(d), Part::V(u, x)) => put(&mut out, off_p + u * n, &sops[d].column(x), 1),
            (Part::V(u, x), Part::D(d)) => put(&mut out, off_p + u * n, &sops[d].column(x), -1),
            (Part::D(d), Part::D(e)) => put(&mut out, off_s, &dd[d * m + e], 1),
        }
        out
    });
    let mut grading = Vec::with_capacity(dim);
    grading.extend(std::iter::repeat_n(0, k));
    grading.extend(std::iter::repeat_n(2, k));
    grading.extend(std::iter::repeat_n(-2, k));
    grading.extend(std::iter::repeat_n(1, n));
    grading.extend(std::iter::repeat_n(-1, n));
    grading.extend(std::iter::repeat_n(0, m));
    let id = coords_or(&pkg.j, Matrix::identity(f, n).data(), "id")?;
    let embed = |fi: usize| {
        let mut v = vec![0; dim];
        v[fi * k..(fi + 1) * k].copy_from_slice(&id);
        v
    };
    let sl2 = Sl2Triple { e: embed(1), h: embed(0), f: embed(2) };
    Ok(GradedLieAlgebra { alg, grading, modulus: None, sl2: Some(sl2) })
}

fn lt_names(k: usize, n: usize, m: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(3 * k + 2 * n + m);
    for s in SL_NAMES {
        names.extend((0..k).map(|a| format!("{s}⊗j{a}")));
    }
    names.extend((0..n).map(|x| format!("p⊗t{x}")));
    names.extend((0..n).map(|x| format!("q⊗t{x}")));
    names.extend(numbered("d", m));
    names
}

/// `δ = ad_{F⊗id}` on `L(T)`.
pub fn lt_delta(l: &GradedLieAlgebra) -> Matrix {
    let s = l.sl2.as_ref().expect("L(T) carries its sl2-triple");
    l.ad(&s.f)
}

/// `KT(A) = A₊ ⊕ A₋` (basis `A₊` then `A₋`) with `{a,b,c} = V_{a,b}(c)`:
/// - `[a_δ, b_{−δ}, c_δ] = {a,b,c}_δ`
/// - `[a_δ, b_δ, c_δ] = 0`
/// - `[a_{−δ}, b_δ, c_δ] = −{b,a,c}_δ`
/// - `[a_δ, b_δ, c_{−δ}] = {a,c,b}_δ − {b,c,a}_δ`
pub fn kt_triple_system(a: &StructurableAlgebra) -> TripleSystem {
    let f = a.field();
    let n = a.dim();
    let vt = a.v_tensor();
    let mut names: Vec<String> = a.alg().names().iter().map(|s| format!("{s}+")).collect();
    names.extend(a.alg().names().iter().map(|s| format!("{s}-")));
    TripleSystem::from_fn(f, names, |i, j, l| {
        let (si, sj, sl) = (i >= n, j >= n, l >= n);
        let (x, y, z) = (i % n, j % n, l % n);
        let mut out = vec![0; 2 * n];
        let v = |p: usize, q: usize, r: usize| vt.at_dense(&[p, q, r]);
        let (val, sign) = if si != sj && si == sl {
            (v(x, y, z), si)
        } else if si == sj && sj == sl {
            return out;
        } else if si != sj && sj == sl {
            (f.scaled(&v(y, x, z), f.neg(1)), sj)
        } else {
            (f.sub_vec(&v(x, z, y), &v(y, z, x)), si)
        };
        let off = if sign { n } else { 0 };
        out[off..off + n].copy_from_slice(&val);
        out
    })
}

/// Lie triple system identities:
/// - `lts1`: `[u,u,v] = 0` (checked as `[x,y,z] + [y,x,z] = 0`)
/// - `lts2`: `[u,v,w] + [v,w,u] + [w,u,v] = 0`
/// - `lts3`: `[a,b,[u,v,w]] = [[a,b,u],v,w] + [u,[a,b,v],w] + [u,v,[a,b,w]]`
pub fn check_lts(ts: &TripleSystem, mode: Mode) -> Report {
    let d = ts.dim();
    let f = ts.field();
    let bp = |i: usize, j: usize, k: usize| ts.basis_product(i, j, k);
    let e: Vec<Vec<Scalar>> = (0..d).map(|i| f.unit_vec(d, i)).collect();
    let mut r = Report::new();
    r.push(check_tuples("lts1", &[d; 3], d, mode, |t| {
        f.add_vec(&bp(t[0], t[1], t[2]), &bp(t[1], t[0], t[2])).iter().all(|&c| c == 0)
    }));
    r.push(check_tuples("lts2", &[d; 3], d, mode, |t| {
        let v = f.add_vec(&f.add_vec(&bp(t[0], t[1], t[2]), &bp(t[1], t[2], t[0])), &bp(t[2], t[0], t[1]));
        v.iter().all(|&c| c == 0)
    }));
    r.push(check_tuples("lts3", &[d; 5], d, mode, |t| {
        let (a, b, u, v, w) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
        let lhs = ts.product(a, b, &bp(t[2], t[3], t[4]));
        let mut rhs = ts.product(&bp(t[0], t[1], t[2]), v, w);
        ts.tensor().apply_into(&mut rhs, &[u, &bp(t[0], t[1], t[3]), w], 1);
        ts.tensor().apply_into(&mut rhs, &[u, v, &bp(t[0], t[1], t[4])], 1);
        lhs == rhs
    }));
    r
}

/// Standard embedding `L(T,T) ⊕ T` with
/// `[A+x, B+y] = ([A,B] + L(x,y)) + (A(y) − B(x))`.
///
/// With `degrees` (one per basis vector of `T`) the operator part is spanned
/// degree by degree, `L(e_i,e_j)` having degree `deg i + deg j`, so the basis
/// is homogeneous; the basis lists `L(T,T)` in increasing degree, then `T`.
/// Without degrees the result is `ℤ/2`-graded.
pub fn standard_embedding(ts: &TripleSystem, degrees: Option<&[i8]>) -> Result<GradedLieAlgebra, LieError> {
    let f = ts.field();
    let n = ts.dim();
    let lops = ts.l_basis_ops();
    let deg_of = |i: usize| degrees.map_or(0, |d| d[i]);
    let mut by_degree: std::collections::BTreeMap<i8, Vec<Matrix>> = Default::default();
    for i in 0..n {
        for j in 0..n {
            by_degree.entry(deg_of(i) + deg_of(j)).or_default().push(lops[i * n + j].clone());
        }
    }
    let mut ops: Vec<Matrix> = Vec::new();
    let mut grading: Vec<i8> = Vec::new();
    for (deg, list) in &by_degree {
        let span = operator_span(f, n, list);
        for v in span.vectors() {
            ops.push(unflatten(f, n, v));
            grading.push(*deg);
        }
    }
    let span = Subspace::from_vectors(f, n * n, ops.iter().map(|o| o.data().to_vec()));
    if span.dim() != ops.len() {
        return Err(LieError::Precondition("degree pieces of L(T,T) are not independent".into()));
    }
    // coordinates relative to the homogeneous basis `ops`
    let basis_matrix = Matrix::from_columns(f, n * n, &ops.iter().map(|o| o.data().to_vec()).collect::<Vec<_>>());
    let to_ops = |m: &Matrix| -> Result<Vec<Scalar>, LieError> {
        crate::linalg::solve(&basis_matrix, m.data()).ok_or_else(|| LieError::NotInSubspace("L(T,T) bracket".into()))
    };
    let k = ops.len();
    let dim = k + n;
    let mut table: Vec<Vec<Scalar>> = vec![Vec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut out = vec![0; dim];
            match (i < k, j < k) {
                (true, true) => out[..k].copy_from_slice(&to_ops(&ops[i].commutator(&ops[j]))?),
                (true, false) => out[k..].copy_from_slice(&ops[i].column(j - k)),
                (false, true) => out[k..].copy_from_slice(&f.scaled(&ops[j].column(i - k), f.neg(1))),
                (false, false) => out[..k].copy_from_slice(&to_ops(&lops[(i - k) * n + (j - k)])?),
            }
            table[i * dim + j] = out;
        }
    }
    let mut names = numbered("l", k);
    names.extend(ts.names().iter().cloned());
    let alg = Algebra::from_fn(f, names, |i, j| std::mem::take(&mut table[i * dim + j]));
    match degrees {
        Some(d) => {
            grading.extend_from_slice(d);
            Ok(GradedLieAlgebra { alg, grading, modulus: None, sl2: None })
        }
        None => {
            grading.extend(std::iter::repeat_n(1, n));
            Ok(GradedLieAlgebra { alg, grading, modulus: Some(2), sl2: None })
        }
    }
}

/// Standard embedding of `KT(A)` with `A₊` in degree 1 and `A₋` in degree −1.
pub fn kt_standard_embedding(a: &StructurableAlgebra) -> Result<GradedLieAlgebra, LieError> {
    let n = a.dim();
    let mut deg = vec![1i8; n];
    deg.extend(std::iter::repeat_n(-1, n));
    standard_embedding(&kt_triple_system(a), Some(&deg))
}

/// Normalization of the Kantor bracket: `V1` has `[(x,s),(y,t)] = (0, xȳ − yx̄)`
/// and `V_{x,y} + L_sL_t` in the mixed bracket; `V2` doubles both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KantorVariant {
    V1,
    V2,
}

/// Layout of `K(A,−) = Ñ ⊕ instrl ⊕ N`, `N = A × S`. Basis order and degrees:
/// `(0,s)~` (−2), `(x,0)~` (−1), `instrl` (0), `(x,0)` (1), `(0,s)` (2), with
/// `s` over the canonical skew basis and `instrl` over its canonical basis.
#[derive(Clone, Debug)]
pub struct KantorAlgebra {
    pub lie: GradedLieAlgebra,
    pub variant: KantorVariant,
    pub instrl: Subspace,
    pub n: usize,
    pub k: usize,
    pub m: usize,
}

impl KantorAlgebra {
    pub fn st_offset(&self) -> usize {
        0
    }
    pub fn at_offset(&self) -> usize {
        self.k
    }
    pub fn instrl_offset(&self) -> usize {
        self.k + self.n
    }
    pub fn ax_offset(&self) -> usize {
        self.k + self.n + self.m
    }
    pub fn sx_offset(&self) -> usize {
        self.k + 2 * self.n + self.m
    }

    /// `(x, 0)` as a coordinate vector.
    pub fn embed_x(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![0; self.lie.dim()];
        v[self.ax_offset()..self.ax_offset() + self.n].copy_from_slice(x);
        v
    }

    /// `(x, 0)~`.
    pub fn embed_x_tilde(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![0; self.lie.dim()];
        v[self.at_offset()..self.at_offset() + self.n].copy_from_slice(x);
        v
    }

    /// `(0, s)` from skew coordinates.
    pub fn embed_s(&self, s: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![0; self.lie.dim()];
        v[self.sx_offset()..].copy_from_slice(s);
        v
    }

    /// `(0, s)~` from skew coordinates.
    pub fn embed_s_tilde(&self, s: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![0; self.lie.dim()];
        v[..self.k].copy_from_slice(s);
        v
    }

    /// An operator of `instrl`.
    pub fn embed_op(&self, t: &Matrix) -> Option<Vec<Scalar>> {
        let c = self.instrl.coords(t.data())?;
        let mut v = vec![0; self.lie.dim()];
        v[self.instrl_offset()..self.instrl_offset() + self.m].copy_from_slice(&c);
        Some(v)
    }
}

/// `K(A,−)` with brackets (`c = 1` for `V1`, `2` for `V2`):
/// - `[T,(x,s)] = (T(x), T^δ(s))`, `[T,(x,s)~] = (T^ε(x), T^{εδ}(s))~`
/// - `[(x,s),(y,t)] = (0, c(xȳ − yx̄))`, and the same on `Ñ`
/// - `[(x,s),(y,t)~] = −(tx,0)~ + (cV_{x,y} + L_sL_t) + (sy,0)`
pub fn build_kantor(a: &StructurableAlgebra, variant: KantorVariant) -> Result<KantorAlgebra, LieError> {
    let f = a.field();
    let n = a.dim();
    let skew = a.skew().clone();
    let k = skew.dim();
    let instrl = a.instrl();
    let m = instrl.dim();
    let c: Scalar = match variant {
        KantorVariant::V1 => 1,
        KantorVariant::V2 => 2,
    };
    let sb: Vec<Vec<Scalar>> = skew.vectors().map(|v| v.to_vec()).collect();
    let ls: Vec<Matrix> = sb.iter().map(|s| a.left_mul(s)).collect();
    let ops: Vec<Matrix> = instrl.vectors().map(|v| unflatten(f, n, v)).collect();
    let eps: Vec<Matrix> = ops.iter().map(|t| a.t_eps(t)).collect();
    let delta: Vec<Matrix> = ops.iter().map(|t| a.t_delta(t)).collect();
    let eps_delta: Vec<Matrix> = eps.iter().map(|t| a.t_delta(t)).collect();
    let units: Vec<Vec<Scalar>> = (0..n).map(|i| f.unit_vec(n, i)).collect();
    let conj: Vec<Vec<Scalar>> = units.iter().map(|u| a.conj(u)).collect();

    let (o_at, o_ins, o_ax, o_sx) = (k, k + n, k + n + m, k + 2 * n + m);
    let dim = 2 * k + 2 * n + m;
    #[derive(Clone, Copy)]
    enum P {
        St(usize),
        At(usize),
        Ins(usize),
        Ax(usize),
        Sx(usize),
    }
    let part = |i: usize| {
        if i < o_at {
            P::St(i)
        } else if i < o_ins {
            P::At(i - o_at)
        } else if i < o_ax {
            P::Ins(i - o_ins)
        } else if i < o_sx {
            P::Ax(i - o_ax)
        } else {
            P::Sx(i - o_sx)
        }
    };
    let skew_c = |v: &[Scalar]| coords_or(&skew, v, "skew part");
    let ins_c = |mm: &Matrix| coords_or(&instrl, mm.data(), "instrl part");
    // canonical-order bracket for (i, j) with part(i) ≤ part(j) in the order
    // Ins < Ax < Sx < At < St; `None` means zero
    let mut table: Vec<Vec<Scalar>> = vec![Vec::new(); dim * dim];
    let rank = |p: P| match p {
        P::Ins(_) => 0,
        P::Ax(_) => 1,
        P::Sx(_) => 2,
        P::At(_) => 3,
        P::St(_) => 4,
    };
    for i in 0..dim {
        for j in 0..dim {
            let (pi, pj) = (part(i), part(j));
            let swapped = rank(pi) > rank(pj);
            let (p, q) = if swapped { (pj, pi) } else { (pi, pj) };
            let mut out = vec![0; dim];
            match (p, q) {
                (P::Ins(x), P::Ins(y)) => {
                    out[o_ins..o_ax].copy_from_slice(&ins_c(&ops[x].commutator(&ops[y]))?);
                }
                (P::Ins(x), P::Ax(y)) => out[o_ax..o_sx].copy_from_slice(&ops[x].column(y)),
                (P::Ins(x), P::Sx(y)) => out[o_sx..].copy_from_slice(&skew_c(&delta[x].mul_vec(&sb[y]))?),
                (P::Ins(x), P::At(y)) => out[o_at..o_ins].copy_from_slice(&eps[x].column(y)),
                (P::Ins(x), P::St(y)) => out[..o_at].copy_from_slice(&skew_c(&eps_delta[x].mul_vec(&sb[y]))?),
                (P::Ax(x), P::Ax(y)) => {
                    let v = f.sub_vec(&a.mul(&units[x], &conj[y]), &a.mul(&units[y], &conj[x]));
                    out[o_sx..].copy_from_slice(&skew_c(&f.scaled(&v, c))?);
                }
                (P::At(x), P::At(y)) => {
                    let v = f.sub_vec(&a.mul(&units[x], &conj[y]), &a.mul(&units[y], &conj[x]));
                    out[..o_at].copy_from_slice(&skew_c(&f.scaled(&v, c))?);
                }
                (P::Ax(x), P::At(y)) => {
                    out[o_ins..o_ax].copy_from_slice(&ins_c(&a.v_basis(x, y).scale(c))?);
                }
                (P::Ax(x), P::St(y)) => {
                    out[o_at..o_ins].copy_from_slice(&f.scaled(&ls[y].column(x), f.neg(1)));
                }
                (P::Sx(x), P::At(y)) => out[o_ax..o_sx].copy_from_slice(&ls[x].column(y)),
                (P::Sx(x), P::St(y)) => out[o_ins..o_ax].copy_from_slice(&ins_c(&ls[x].mul(&ls[y]))?),
                // brackets inside N or inside Ñ involving an s-part vanish
                _ => {}
            }
            if swapped {
                out = f.scaled(&out, f.neg(1));
            }
            table[i * dim + j] = out;
        }
    }
    let names = kantor_names(a, &skew, m);
    let alg = Algebra::from_fn(f, names, |i, j| std::mem::take(&mut table[i * dim + j]));
    let mut grading = Vec::with_capacity(dim);
    for (deg, cnt) in [(-2i8, k), (-1, n), (0, m), (1, n), (2, k)] {
        grading.extend(std::iter::repeat_n(deg, cnt));
    }
    let lie = GradedLieAlgebra { alg, grading, modulus: None, sl2: None };
    Ok(KantorAlgebra { lie, variant, instrl, n, k, m })
}

fn kantor_names(a: &StructurableAlgebra, skew: &Subspace, m: usize) -> Vec<String> {
    let an = a.alg().names();
    let mut names: Vec<String> = (0..skew.dim()).map(|i| format!("(0,s{i})~")).collect();
    names.extend(an.iter().map(|x| format!("({x},0)~")));
    names.extend(numbered("T", m));
    names.extend(an.iter().map(|x| format!("({x},0)")));
    names.extend((0..skew.dim()).map(|i| format!("(0,s{i})")));
    names
}

/// Attaches the triple `E = (0,t)`, `F = (0,s)~`, `H = [E,F] = L_tL_s`, for
/// skew `s, t` with `L_tL_s = id`.
pub fn attach_kantor_sl2(
    kan: &mut KantorAlgebra,
    a: &StructurableAlgebra,
    s: &[Scalar],
    t: &[Scalar],
) -> Result<(), LieError> {
    let sc = coords_or(a.skew(), s, "s")?;
    let tc = coords_or(a.skew(), t, "t")?;
    let e = kan.embed_s(&tc);
    let fv = kan.embed_s_tilde(&sc);
    let h = kan.lie.bracket(&e, &fv);
    let id = kan
        .embed_op(&Matrix::identity(a.field(), a.dim()))
        .ok_or_else(|| LieError::NotInSubspace("id in instrl".into()))?;
    if h != id {
        return Err(LieError::Precondition("L_t L_s is not the identity".into()));
    }
    kan.lie.sl2 = Some(Sl2Triple { e, h, f: fv });
    Ok(())
}

/// The map `φ` from the standard embedding of `KT(A)` (as built by
/// [`kt_standard_embedding`]) to `K(A,−)` (`V1`): `x₊ ↦ (x,0)`, `x₋ ↦ (x,0)~`,
/// `diag(T, T^ε) ↦ T`, `[[0, L_s], [0, 0]] ↦ (0,s)`, `[[0, 0], [L_s, 0]] ↦ (0,s)~`.
/// Errors if an operator of degree 0 is not of the form `diag(T, T^ε)`.
pub fn kt_to_kantor_map(
    a: &StructurableAlgebra,
    emb: &GradedLieAlgebra,
    kan: &KantorAlgebra,
) -> Result<Matrix, LieError> {
    let f = a.field();
    let n = a.dim();
    let two_n = 2 * n;
    let k_ops = emb.dim() - two_n;
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(emb.dim());
    for i in 0..emb.dim() {
        if i >= k_ops {
            let j = i - k_ops;
            let x = f.unit_vec(n, j % n);
            cols.push(if j < n { kan.embed_x(&x) } else { kan.embed_x_tilde(&x) });
            continue;
        }
        let d = operator_of(emb, i, two_n);
        let block = |r0: usize, c0: usize| -> Matrix {
            let mut b = Matrix::zeros(f, n, n);
            for r in 0..n {
                for c in 0..n {
                    b.set(r, c, d.get(r0 + r, c0 + c));
                }
            }
            b
        };
        let col = match emb.grading[i] {
            0 => {
                let t = block(0, 0);
                if block(n, n) != a.t_eps(&t) || !block(0, n).is_zero() || !block(n, 0).is_zero() {
                    return Err(LieError::Precondition(format!("degree-0 operator {i} is not diag(T, T^ε)")));
                }
                kan.embed_op(&t).ok_or_else(|| LieError::NotInSubspace("T in instrl".into()))?
            }
            2 => {
                let s = block(0, n).mul_vec(a.one());
                kan.embed_s(&coords_or(a.skew(), &s, "L_s(1)")?)
            }
            -2 => {
                let s = block(n, 0).mul_vec(a.one());
                kan.embed_s_tilde(&coords_or(a.skew(), &s, "L_s(1)")?)
            }
            g => return Err(LieError::Precondition(format!("unexpected operator degree {g}"))),
        };
        cols.push(col);
    }
    Ok(Matrix::from_columns(f, kan.lie.dim(), &cols))
}

/// The operator on `T` of basis element `i` of a standard embedding: its
/// action `y ↦ [D, y]` on the `T` part.
fn operator_of(emb: &GradedLieAlgebra, i: usize, t_dim: usize) -> Matrix {
    let f = emb.field();
    let k = emb.dim() - t_dim;
    let mut d = Matrix::zeros(f, t_dim, t_dim);
    for y in 0..t_dim {
        let v = emb.alg.product(i, k + y);
        for r in 0..t_dim {
            d.set(r, y, v[k + r]);
        }
    }
    d
}

/// `(y,t)~ + T + (x,s) ↦ (y,½t)~ + T + (2x,2s)` from `V2` to `V1`.
pub fn kantor_v2_to_v1(kan: &KantorAlgebra) -> Matrix {
    let f = kan.lie.field();
    let dim = kan.lie.dim();
    let mut m = Matrix::zeros(f, dim, dim);
    for i in 0..dim {
        let c = if i < kan.k {
            f.inv2()
        } else if i < kan.ax_offset() {
            1
        } else {
            2
        };
        m.set(i, i, c);
    }
    m
}

/// Pieces of a 5-graded algebra with an `sl₂`-triple.
#[derive(Clone, Debug)]
pub struct Sl2Decomposition {
    /// centralizer of the triple
    pub centralizer: Subspace,
    /// `[F, L₂]`
    pub f_of_l2: Subspace,
    /// `L₂ ⊕ [F,L₂] ⊕ L₋₂`, a sum of adjoint modules
    pub adjoint_part: Subspace,
    /// `L₁ ⊕ L₋₁`, a sum of natural modules
    pub natural_part: Subspace,
    pub report: Report,
}

/// Decomposes a 5-graded algebra under its `sl₂`-triple and verifies:
/// - `5graded_i`: `ad_F: L₁ → L₋₁` is inverse to `ad_E`, and
///   `X ↦ [F,[F,X]]` on `L₂` is inverse to `Y ↦ ¼[E,[E,Y]]`
/// - `5graded_ii`: the centralizer is `{X ∈ L₀ : [F,X] = 0} = {X ∈ L₀ : [E,X] = 0}`
/// - `5graded_iii`: `L₀ = Cent ⊕ [F,L₂]`
/// - `5graded_iv`: `dim L = 3 dim L₂ + 2 dim L₁ + dim Cent`
/// - `5graded_v`: when `L₂ = [L₁,L₁]` and `L₀ = [L₁,L₋₁]`, the centralizer
///   and `[F,L₂]` are spanned by `[X,[F,Y]] ± [Y,[F,X]]`
pub fn sl2_utilities(l: &GradedLieAlgebra) -> Result<Sl2Decomposition, LieError> {
    let s = l.sl2.as_ref().ok_or_else(|| LieError::Precondition("no sl2-triple".into()))?;
    let f = l.field();
    let n = l.dim();
    let ade = l.ad(&s.e);
    let adf = l.ad(&s.f);
    let adh = l.ad(&s.h);
    let idx: Vec<Vec<usize>> = (-2..=2).map(|i| l.degree_indices(i)).collect();
    let deg = |i: i8| &idx[(i + 2) as usize];
    let unit = |j: usize| f.unit_vec(n, j);
    let quarter = f.mul(f.inv2(), f.inv2());
    let mut report = Report::new();

    let i_ok = deg(1).iter().all(|&j| ade.mul_vec(&adf.column(j)) == unit(j))
        && deg(-1).iter().all(|&j| adf.mul_vec(&ade.column(j)) == unit(j))
        && deg(2).iter().all(|&j| {
            let y = adf.mul_vec(&adf.column(j));
            f.scaled(&ade.mul_vec(&ade.mul_vec(&y)), quarter) == unit(j)
        })
        && deg(-2).iter().all(|&j| {
            let x = f.scaled(&ade.mul_vec(&ade.column(j)), quarter);
            adf.mul_vec(&adf.mul_vec(&x)) == unit(j)
        });
    report.push(Outcome::fact("5graded_i", i_ok));

    // kernels of ad_F, ad_E restricted to L₀, and the full centralizer
    let restricted_kernel = |ops: &[&Matrix], cols: &[usize]| -> Subspace {
        let mut stacked: Option<Matrix> = None;
        for op in ops {
            let m = Matrix::from_columns(f, n, &cols.iter().map(|&j| op.column(j)).collect::<Vec<_>>());
            stacked = Some(match stacked {
                None => m,
                Some(s) => s.vstack(&m),
            });
        }
        let ker = kernel_basis(&stacked.expect("at least one operator"));
        Subspace::from_vectors(
            f,
            n,
            ker.vectors().map(|c| {
                let mut v = vec![0; n];
                for (t, &j) in cols.iter().enumerate() {
                    v[j] = c[t];
                }
                v
            }),
        )
    };
    let all: Vec<usize> = (0..n).collect();
    let centralizer = restricted_kernel(&[&ade, &adf, &adh], &all);
    let ker_f0 = restricted_kernel(&[&adf], deg(0));
    let ker_e0 = restricted_kernel(&[&ade], deg(0));
    report.push(Outcome::fact("5graded_ii", centralizer == ker_f0 && centralizer == ker_e0));

    let f_of_l2 = Subspace::from_vectors(f, n, deg(2).iter().map(|&j| adf.column(j)));
    let l0 = l.degree_subspace(0);
    let iii = centralizer.intersection(&f_of_l2).is_zero() && centralizer.sum(&f_of_l2) == l0;
    report.push(Outcome::fact("5graded_iii", iii));

    let iv = n == 3 * deg(2).len() + 2 * deg(1).len() + centralizer.dim();
    report.push(Outcome::fact("5graded_iv", iv));

    let l1: Vec<Vec<Scalar>> = deg(1).iter().map(|&j| unit(j)).collect();
    let fl1: Vec<Vec<Scalar>> = l1.iter().map(|x| adf.mul_vec(x)).collect();
    let mut pairs_l1 = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut mixed = Vec::new();
    for a in 0..l1.len() {
        for b in 0..l1.len() {
            if a < b {
                pairs_l1.push(l.bracket(&l1[a], &l1[b]));
            }
            let xy = l.bracket(&l1[a], &fl1[b]);
            let yx = l.bracket(&l1[b], &fl1[a]);
            plus.push(f.add_vec(&xy, &yx));
            minus.push(f.sub_vec(&xy, &yx));
            mixed.push(xy);
        }
    }
    let hyp =
        Subspace::from_vectors(f, n, pairs_l1) == l.degree_subspace(2) && Subspace::from_vectors(f, n, mixed) == l0;
    let v_ok =
        !hyp || (Subspace::from_vectors(f, n, plus) == centralizer && Subspace::from_vectors(f, n, minus) == f_of_l2);
    report.push(Outcome::fact("5graded_v", v_ok));

    let l2 = l.degree_subspace(2);
    let lm2 = l.degree_subspace(-2);
    let adjoint_part = l2.sum(&f_of_l2).sum(&lm2);
    let natural_part = l.degree_subspace(1).sum(&l.degree_subspace(-1));
    Ok(Sl2Decomposition { centralizer, f_of_l2, adjoint_part, natural_part, report })
}

/// The triple product `½[[X,[F,Y]],Z]` on `L₁` of a 5-graded algebra, on
/// the basis of `L₁` (in the order of [`GradedLieAlgebra::degree_indices`]).
pub fn five_graded_triple(l: &GradedLieAlgebra) -> Result<TripleSystem, LieError> {
    let s = l.sl2.as_ref().ok_or_else(|| LieError::Precondition("no sl2-triple".into()))?;
    let f = l.field();
    let n = l.dim();
    let l1 = l.degree_indices(1);
    let d = l1.len();
    let half = f.inv2();
    let adf = l.ad(&s.f);
    let names = l1.iter().map(|&j| l.alg.names()[j].clone()).collect();
    Ok(TripleSystem::from_fn(f, names, |x, y, z| {
        let fy = adf.column(l1[y]);
        let inner = l.bracket(&f.unit_vec(n, l1[x]), &fy);
        let v = l.bracket(&inner, &f.unit_vec(n, l1[z]));
        (0..d).map(|t| f.mul(half, v[l1[t]])).collect()
    }))
}

/// Runs the checks of a graded algebra and fails on the first failure.
pub fn verify(l: &GradedLieAlgebra, mode: Mode) -> Result<(), LieError> {
    fail_on(&l.check(mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::split_composition;
    use crate::jternary::{jordanize, jordanize_unchecked, osp_system, weak_counterexample, zero_system, Sign};
    use crate::structurable::{albert_data, choose_invertible_skew, tensor_structurable_unchecked};

    fn f3() -> Field {
        Field::three()
    }

    fn tensor(d1: usize, d2: usize) -> StructurableAlgebra {
        let f = f3();
        tensor_structurable_unchecked(&split_composition(d1, f).unwrap(), &split_composition(d2, f).unwrap()).unwrap()
    }

    #[test]
    fn lt_of_zero_system_is_sl2_plus_natural() {
        let pkg = jordanize_unchecked(&zero_system(f3(), 1));
        let l = build_lt(&pkg).unwrap();
        assert_eq!(l.dim(), 5);
        assert_eq!(l.alg.derived().dim(), 5);
        assert!(l.check(Mode::Exhaustive).passed());
        let dec = sl2_utilities(&l).unwrap();
        assert!(dec.centralizer.is_zero());
        assert!(dec.report.passed(), "{}", dec.report);
    }

    #[test]
    fn lt_of_weak_counterexample() {
        let pkg = jordanize(&weak_counterexample(f3()), Mode::Exhaustive).unwrap();
        let l = build_lt(&pkg).unwrap();
        assert_eq!(l.dim(), 8);
        let r = l.check(Mode::Exhaustive);
        assert!(r.passed(), "{r}");
        let d = lt_delta(&l);
        assert!(d.pow(3).is_zero() && !d.pow(2).is_zero());
        assert!(l.alg.is_derivation(&d));
    }

    #[test]
    fn lt_of_prototypical_and_structurable() {
        let pkg = jordanize(&osp_system(f3(), 2, 2).unwrap(), Mode::Exhaustive).unwrap();
        let l = build_lt(&pkg).unwrap();
        assert_eq!(l.dim(), 3 * pkg.j_dim() + 2 * 4 + pkg.system.s_span().dim());
        assert!(l.check(Mode::Exhaustive).passed());
        assert!(sl2_utilities(&l).unwrap().report.passed());

        let a = tensor(4, 1);
        let s = choose_invertible_skew(&a).unwrap();
        let ts = crate::jternary::from_structurable(&a, &s).unwrap();
        let pkg = jordanize(&ts, Mode::Exhaustive).unwrap();
        let l = build_lt(&pkg).unwrap();
        let r = l.check(Mode::Exhaustive);
        assert!(r.passed(), "{r}");
        let dec = sl2_utilities(&l).unwrap();
        assert!(dec.report.passed(), "{}", dec.report);
        assert_eq!(dec.centralizer.dim(), ts.s_span().dim());
    }

    #[test]
    fn kt_of_ground_field_is_sl2() {
        let a = tensor(1, 1);
        let ts = kt_triple_system(&a);
        assert!(check_lts(&ts, Mode::Exhaustive).passed());
        let l = kt_standard_embedding(&a).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(l.check(Mode::Exhaustive).passed());
        assert!(l.alg.center().is_zero() && l.alg.derived().is_full());
    }

    #[test]
    fn kt_block_form() {
        let a = tensor(2, 1);
        let ts = kt_triple_system(&a);
        let f = f3();
        let n = a.dim();
        // L(a₊, b₊) has L_{ab̄ − bā} in the upper right block
        let (x, y) = (f.unit_vec(2 * n, 0), f.unit_vec(2 * n, 1));
        let op = ts.l_op(&x, &y);
        let (ax, ay) = (f.unit_vec(n, 0), f.unit_vec(n, 1));
        let s = f.sub_vec(&a.mul(&ax, &a.conj(&ay)), &a.mul(&ay, &a.conj(&ax)));
        let ls = a.left_mul(&s);
        for r in 0..2 * n {
            for c in 0..2 * n {
                let expected = if r < n && c >= n { ls.get(r, c - n) } else { 0 };
                assert_eq!(op.get(r, c), expected);
            }
        }
        assert!(ts.basis_product(0, 1, 0).iter().all(|&c| c == 0));
    }

    #[test]
    fn zero_lts_embedding_is_abelian() {
        let ts = zero_system(f3(), 3);
        let l = standard_embedding(&ts, None).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(l.alg.derived().is_zero());
    }

    #[test]
    fn kantor_small_cases() {
        // in characteristic 3, V_{x,y} = L_{−(xȳ+yx̄)} on a commutative
        // associative algebra, so instrl(F×F) is only the scalars
        for (d1, d2, dim) in [(1, 1, 3), (2, 1, 7), (4, 1, 21)] {
            let a = tensor(d1, d2);
            for v in [KantorVariant::V1, KantorVariant::V2] {
                let kan = build_kantor(&a, v).unwrap();
                assert_eq!(kan.lie.dim(), kan.m + 2 * a.dim() + 2 * a.skew().dim());
                assert_eq!(kan.lie.dim(), dim, "({d1},{d2})");
                let r = kan.lie.check(Mode::Exhaustive);
                assert!(r.passed(), "({d1},{d2}) {v:?}: {r}");
            }
        }
    }

    #[test]
    fn kantor_matches_standard_embedding_and_variants() {
        for (d1, d2) in [(2, 1), (4, 1), (2, 2)] {
            let a = tensor(d1, d2);
            let kan = build_kantor(&a, KantorVariant::V1).unwrap();
            let emb = kt_standard_embedding(&a).unwrap();
            let phi = kt_to_kantor_map(&a, &emb, &kan).unwrap();
            assert_eq!(phi.rank(), kan.lie.dim());
            assert!(emb.alg.is_homomorphism_to(&kan.lie.alg, &phi).passed);
            let kan2 = build_kantor(&a, KantorVariant::V2).unwrap();
            let psi = kantor_v2_to_v1(&kan2);
            assert!(kan2.lie.alg.is_homomorphism_to(&kan.lie.alg, &psi).passed);
            // the identity is not a homomorphism between the variants
            let id = Matrix::identity(f3(), kan.lie.dim());
            assert!(!kan2.lie.alg.is_homomorphism_to(&kan.lie.alg, &id).passed);
        }
    }

    #[test]
    fn kantor_sl2_and_five_graded_triple() {
        let a = tensor(4, 2);
        let q = albert_data(&a).unwrap();
        let s = choose_invertible_skew(&a).unwrap();
        let t = q.t_for(&s);
        let mut kan = build_kantor(&a, KantorVariant::V2).unwrap();
        attach_kantor_sl2(&mut kan, &a, &s, &t).unwrap();
        let r = kan.lie.check(Mode::default());
        assert!(r.passed(), "{r}");
        let dec = sl2_utilities(&kan.lie).unwrap();
        assert!(dec.report.passed(), "{}", dec.report);
        let ts = crate::jternary::from_structurable(&a, &s).unwrap();
        assert_eq!(dec.centralizer.dim(), ts.s_span().dim());
        let five = five_graded_triple(&kan.lie).unwrap();
        assert_eq!(five.tensor(), ts.tensor());
        assert!(five.check_hein(Mode::default()).passed());
        assert!(five.check_fk(Sign::Plus, Sign::Plus, Mode::default()).passed());
    }
}
