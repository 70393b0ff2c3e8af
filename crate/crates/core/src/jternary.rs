//! Triple systems `xyz`: the derived operators `L`, `K`, `S`, `T`, the Hein,
//! Freudenthal-Kantor and Allison axiom checks, the Jordan algebra
//! `J = 𝔽id + K(T,T)`, and the constructions of J-ternary algebras.
//!
//! Identities in operators are checked column by column: an operator identity
//! in k vector variables becomes a pointwise identity in k + 1 basis variables.

use crate::algebra::{matrix_algebra, numbered, operator_span, unflatten, Algebra};
use crate::check::{check_tuples, Mode, Outcome, Report};
use crate::field::{Field, Scalar};
use crate::linalg::{solve, Matrix, Subspace};
use crate::structurable::{check_associative, check_module, InvolutiveAlgebra, StructurableAlgebra, StructurableError};
use crate::tensor::Tensor;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JTernaryError {
    #[error("identity {0} fails with counterexample {1:?}")]
    AxiomFailure(String, Vec<usize>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Structurable(#[from] StructurableError),
}

/// A sign `±1`, used for the parameters `ε` and `δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn scalar(self, f: Field) -> Scalar {
        match self {
            Sign::Plus => 1,
            Sign::Minus => f.neg(1),
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// A trilinear product `e_i e_j e_k = Σ_l c_{ijkl} e_l`.
#[derive(Clone, Debug)]
pub struct TripleSystem {
    names: Vec<String>,
    triple: Tensor,
    l_ops: OnceLock<Vec<Matrix>>,
}

impl PartialEq for TripleSystem {
    fn eq(&self, other: &TripleSystem) -> bool {
        self.names == other.names && self.triple == other.triple
    }
}

impl Eq for TripleSystem {}

impl TripleSystem {
    pub fn new(names: Vec<String>, triple: Tensor) -> TripleSystem {
        let d = names.len();
        assert_eq!(triple.in_dims(), &[d, d, d], "triple tensor must be d×d×d→d");
        assert_eq!(triple.out_dim(), d, "triple tensor must be d×d×d→d");
        TripleSystem { names, triple, l_ops: OnceLock::new() }
    }

    /// From entries `(i, j, k, l, c)`: `e_i e_j e_k` contains `c e_l`.
    pub fn from_entries<I>(field: Field, names: Vec<String>, entries: I) -> TripleSystem
    where
        I: IntoIterator<Item = (usize, usize, usize, usize, Scalar)>,
    {
        let d = names.len();
        let t = Tensor::from_entries(
            field,
            &[d, d, d],
            d,
            entries.into_iter().map(|(i, j, k, l, c)| (vec![i, j, k], l, c)),
        );
        TripleSystem::new(names, t)
    }

    pub fn from_fn<F>(field: Field, names: Vec<String>, mut f: F) -> TripleSystem
    where
        F: FnMut(usize, usize, usize) -> Vec<Scalar>,
    {
        let d = names.len();
        let t = Tensor::from_fn(field, &[d, d, d], d, |ijk| f(ijk[0], ijk[1], ijk[2]));
        TripleSystem::new(names, t)
    }

    pub fn field(&self) -> Field {
        self.triple.field()
    }
    pub fn dim(&self) -> usize {
        self.names.len()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn tensor(&self) -> &Tensor {
        &self.triple
    }

    /// `xyz` for arbitrary vectors.
    pub fn product(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Vec<Scalar> {
        self.triple.apply(&[x, y, z])
    }

    /// `e_i e_j e_k`.
    pub fn basis_product(&self, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        self.triple.at_dense(&[i, j, k])
    }

    /// `L(e_i, e_j)` for all pairs, index `i·d + j`.
    pub fn l_basis_ops(&self) -> &[Matrix] {
        self.l_ops.get_or_init(|| {
            let d = self.dim();
            (0..d * d).map(|ij| self.triple.partial_operator(&[ij / d, ij % d])).collect()
        })
    }

    fn combine_ops<G>(&self, x: &[Scalar], y: &[Scalar], op: G) -> Matrix
    where
        G: Fn(usize, usize) -> Matrix,
    {
        let f = self.field();
        let d = self.dim();
        let mut m = Matrix::zeros(f, d, d);
        for (i, &a) in x.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in y.iter().enumerate().filter(|(_, &b)| b != 0) {
                m.add_scaled(f.mul(a, b), &op(i, j));
            }
        }
        m
    }

    /// `L(x,y)z = xyz`.
    pub fn l_op(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let ops = self.l_basis_ops();
        let d = self.dim();
        self.combine_ops(x, y, |i, j| ops[i * d + j].clone())
    }

    /// `K(x,y)z = xzy − δ yzx`.
    pub fn k_op_delta(&self, x: &[Scalar], y: &[Scalar], delta: Sign) -> Matrix {
        let f = self.field();
        let d = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..d).map(|k| self.k_apply(x, y, &f.unit_vec(d, k), delta)).collect();
        Matrix::from_columns(f, d, &cols)
    }

    /// `K(x,y)` with `δ = 1`.
    pub fn k_op(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.k_op_delta(x, y, Sign::Plus)
    }

    /// `S(x,y) = L(x,y) + εL(y,x)` with `ε = 1`.
    pub fn s_op(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.l_op(x, y).add(&self.l_op(y, x))
    }

    /// `T(x,y) = L(y,x) − εL(x,y)` with `ε = 1`.
    pub fn t_op(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.l_op(y, x).sub(&self.l_op(x, y))
    }

    /// `K(x,y)z` without forming the operator.
    pub fn k_apply(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar], delta: Sign) -> Vec<Scalar> {
        let f = self.field();
        let mut v = self.product(x, z, y);
        self.triple.apply_into(&mut v, &[y, z, x], f.neg(delta.scalar(f)));
        v
    }

    /// `S(x,y)z = xyz + ε yxz`.
    pub fn s_apply(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar], eps: Sign) -> Vec<Scalar> {
        let mut v = self.product(x, y, z);
        self.triple.apply_into(&mut v, &[y, x, z], eps.scalar(self.field()));
        v
    }

    /// `T(x,y)z = yxz − ε xyz`.
    pub fn t_apply(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar], eps: Sign) -> Vec<Scalar> {
        let f = self.field();
        let mut v = self.product(y, x, z);
        self.triple.apply_into(&mut v, &[x, y, z], f.neg(eps.scalar(f)));
        v
    }

    /// Span of all `S(x,y)`, `ε = 1`, as flattened operators.
    pub fn s_span(&self) -> Subspace {
        let d = self.dim();
        let ops = self.l_basis_ops();
        let mut sym = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                sym.push(ops[i * d + j].add(&ops[j * d + i]));
            }
        }
        operator_span(self.field(), d, &sym)
    }

    /// Span of all `K(x,y)`, `δ = 1`, as flattened operators.
    pub fn k_span(&self) -> Subspace {
        let d = self.dim();
        let f = self.field();
        let mut ops = Vec::with_capacity(d * d.saturating_sub(1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                ops.push(self.k_op(&f.unit_vec(d, i), &f.unit_vec(d, j)));
            }
        }
        operator_span(f, d, &ops)
    }

    fn units(&self) -> Vec<Vec<Scalar>> {
        let d = self.dim();
        (0..d).map(|i| self.field().unit_vec(d, i)).collect()
    }

    /// The two defining identities:
    /// - `hein1`: `xy(uvz) = (xyu)vz + u(yxv)z + uv(xyz)`
    /// - `hein2`: `xyz − zyx = zxy − xzy`
    pub fn check_hein(&self, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let e = self.units();
        let tp = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| self.product(a, b, c);
        let mut r = Report::new();
        r.push(check_tuples("hein1", &[d; 5], d, mode, |t| {
            let (x, y, u, v, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let lhs = tp(x, y, &self.basis_product(t[2], t[3], t[4]));
            let mut rhs = tp(&self.basis_product(t[0], t[1], t[2]), v, z);
            self.triple.apply_into(&mut rhs, &[u, &self.basis_product(t[1], t[0], t[3]), z], 1);
            self.triple.apply_into(&mut rhs, &[u, v, &self.basis_product(t[0], t[1], t[4])], 1);
            lhs == rhs
        }));
        r.push(check_tuples("hein2", &[d; 3], d, mode, |t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            let lhs = f.sub_vec(&self.basis_product(x, y, z), &self.basis_product(z, y, x));
            let rhs = f.sub_vec(&self.basis_product(z, x, y), &self.basis_product(x, z, y));
            lhs == rhs
        }));
        r
    }

    /// The `(ε,δ)` Freudenthal-Kantor identities:
    /// - `fk1`: `[L(u,v),L(x,y)] = L(L(u,v)x,y) + εL(x,L(v,u)y)`
    /// - `fk2`: `K(K(u,v)x,y) = L(y,x)K(u,v) − εK(u,v)L(x,y)`
    pub fn check_fk(&self, eps: Sign, delta: Sign, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let es = eps.scalar(f);
        let e = self.units();
        let tp = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| self.product(a, b, c);
        let mut r = Report::new();
        r.push(check_tuples("fk1", &[d; 5], d, mode, |t| {
            let (u, v, x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let lhs = f.sub_vec(
                &tp(u, v, &self.basis_product(t[2], t[3], t[4])),
                &tp(x, y, &self.basis_product(t[0], t[1], t[4])),
            );
            let mut rhs = tp(&self.basis_product(t[0], t[1], t[2]), y, z);
            self.triple.apply_into(&mut rhs, &[x, &self.basis_product(t[1], t[0], t[3]), z], es);
            lhs == rhs
        }));
        r.push(check_tuples("fk2", &[d; 5], d, mode, |t| {
            let (u, v, x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let w = self.k_apply(u, v, x, delta);
            let lhs = self.k_apply(&w, y, z, delta);
            let mut rhs = tp(y, x, &self.k_apply(u, v, z, delta));
            let kxyz = self.k_apply(u, v, &self.basis_product(t[2], t[3], t[4]), delta);
            f.axpy(&mut rhs, f.neg(es), &kxyz);
            lhs == rhs
        }));
        r
    }

    /// `special`: `K(x,y) = εδL(y,x) − εL(x,y)`.
    pub fn check_special(&self, eps: Sign, delta: Sign, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let (es, ds) = (eps.scalar(f), delta.scalar(f));
        let e = self.units();
        let mut r = Report::new();
        r.push(check_tuples("special", &[d; 3], d, mode, |t| {
            let lhs = self.k_apply(&e[t[0]], &e[t[1]], &e[t[2]], delta);
            let mut rhs = f.scaled(&self.basis_product(t[1], t[0], t[2]), f.mul(es, ds));
            f.axpy(&mut rhs, f.neg(es), &self.basis_product(t[0], t[1], t[2]));
            lhs == rhs
        }));
        r
    }

    /// Consequences of `fk1` for `S(u,v)` and `T(u,v)`: the derivation and signed
    /// derivation properties and the five commutator formulas.
    pub fn check_st_identities(&self, eps: Sign, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let es = eps.scalar(f);
        let e = self.units();
        let tp = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| self.product(a, b, c);
        let s = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| self.s_apply(a, b, c, eps);
        let tt = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| self.t_apply(a, b, c, eps);
        let mut r = Report::new();
        r.push(check_tuples("s_derivation", &[d; 5], d, mode, |t| {
            let (u, v, x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let lhs = s(u, v, &tp(x, y, z));
            let mut rhs = tp(&s(u, v, x), y, z);
            self.triple.apply_into(&mut rhs, &[x, &s(u, v, y), z], 1);
            self.triple.apply_into(&mut rhs, &[x, y, &s(u, v, z)], 1);
            lhs == rhs
        }));
        r.push(check_tuples("t_signed_derivation", &[d; 5], d, mode, |t| {
            let (u, v, x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let lhs = tt(u, v, &tp(x, y, z));
            let mut rhs = tp(&tt(u, v, x), y, z);
            self.triple.apply_into(&mut rhs, &[x, &tt(u, v, y), z], f.neg(1));
            self.triple.apply_into(&mut rhs, &[x, y, &tt(u, v, z)], 1);
            lhs == rhs
        }));
        // [A(u,v), B(x,y)] = c₁·C(A(u,v)x, y) + c₂·C(x, A(u,v)y), applied to z
        type Op<'a> = &'a (dyn Fn(&[Scalar], &[Scalar], &[Scalar]) -> Vec<Scalar> + Sync);
        let l = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| tp(a, b, c);
        let m1 = f.neg(1);
        let cases: [(&str, Op, Op, Op, Scalar, Scalar); 5] = [
            ("bracket_sl", &s, &l, &l, 1, 1),
            ("bracket_tl", &tt, &l, &l, 1, m1),
            ("bracket_st", &s, &tt, &tt, 1, 1),
            ("bracket_ts", &tt, &s, &tt, f.neg(es), es),
            ("bracket_tt", &tt, &tt, &s, f.neg(es), es),
        ];
        for (name, a, b, c, c1, c2) in cases {
            r.push(check_tuples(name, &[d; 5], d, mode, |t| {
                let (u, v, x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
                let lhs = f.sub_vec(&a(u, v, &b(x, y, z)), &b(x, y, &a(u, v, z)));
                let mut rhs = f.scaled(&c(&a(u, v, x), y, z), c1);
                f.axpy(&mut rhs, c2, &c(x, &a(u, v, y), z));
                lhs == rhs
            }));
        }
        r
    }
}

/// A J-ternary algebra: the triple system, `J = 𝔽id + K(T,T)` as a subspace of
/// flattened operators on `T`, the action by operator application, and the
/// pairing `⟨x|y⟩ = −K(x,y)`.
#[derive(Clone, Debug)]
pub struct JTernaryPackage {
    pub system: TripleSystem,
    pub j: Subspace,
    j_ops: Vec<Matrix>,
}

impl JTernaryPackage {
    pub fn field(&self) -> Field {
        self.system.field()
    }

    /// Basis operators of `J`, in canonical order.
    pub fn j_ops(&self) -> &[Matrix] {
        &self.j_ops
    }

    pub fn j_dim(&self) -> usize {
        self.j.dim()
    }

    /// `⟨x|y⟩ = −K(x,y)`.
    pub fn pairing(&self, x: &[Scalar], y: &[Scalar]) -> Matrix {
        self.system.k_op(x, y).neg()
    }

    /// `a·b = ½(ab + ba)`.
    pub fn jordan_product(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let f = self.field();
        a.mul(b).add(&b.mul(a)).scale(f.inv2())
    }

    /// Coordinates of an operator in the basis of `J`.
    pub fn j_coords(&self, a: &Matrix) -> Option<Vec<Scalar>> {
        self.j.coords(a.data())
    }

    /// `J` closed under `a·b` and containing the identity.
    pub fn check_jordan_closure(&self) -> Report {
        let f = self.field();
        let n = self.system.dim();
        let k = self.j_dim();
        let mut r = Report::new();
        r.push(Outcome::fact("unit_in_j", self.j.contains(Matrix::identity(f, n).data())));
        r.push(check_tuples("jordan_closure", &[k, k], n * n, Mode::Exhaustive, |t| {
            t[0] > t[1] || self.j.contains(self.jordan_product(&self.j_ops[t[0]], &self.j_ops[t[1]]).data())
        }));
        r
    }

    /// The six J-ternary axioms, `a` over the basis of `J`, the other
    /// arguments over the basis of `T`. Operator-valued sides are compared on
    /// an extra basis argument.
    pub fn check_allison(&self, mode: Mode) -> Report {
        let ts = &self.system;
        let f = self.field();
        let d = ts.dim();
        let k = self.j_dim();
        let e = ts.units();
        let tp = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| ts.product(a, b, c);
        // ⟨x|y⟩w
        let pair = |x: &[Scalar], y: &[Scalar], w: &[Scalar]| f.scaled(&ts.k_apply(x, y, w, Sign::Plus), f.neg(1));
        let ops = &self.j_ops;
        let half = f.inv2();
        let mut r = Report::new();
        r.push(check_tuples("allison1", &[k, d, d, d], d, mode, |t| {
            let (a, x, y, w) = (&ops[t[0]], &e[t[1]], &e[t[2]], &e[t[3]]);
            // (a·⟨x|y⟩)w
            let mut lhs = a.mul_vec(&pair(x, y, w));
            f.axpy(&mut lhs, 1, &pair(x, y, &a.mul_vec(w)));
            let lhs = f.scaled(&lhs, half);
            let mut rhs = pair(&a.mul_vec(x), y, w);
            f.axpy(&mut rhs, 1, &pair(x, &a.mul_vec(y), w));
            lhs == f.scaled(&rhs, half)
        }));
        r.push(check_tuples("allison2", &[k, d, d, d], d, mode, |t| {
            let (a, x, y, z) = (&ops[t[0]], &e[t[1]], &e[t[2]], &e[t[3]]);
            let lhs = a.mul_vec(&tp(x, y, z));
            let mut rhs = tp(&a.mul_vec(x), y, z);
            ts.triple.apply_into(&mut rhs, &[x, &a.mul_vec(y), z], f.neg(1));
            ts.triple.apply_into(&mut rhs, &[x, y, &a.mul_vec(z)], 1);
            lhs == rhs
        }));
        r.push(check_tuples("allison3", &[d; 3], d, mode, |t| {
            let (x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]]);
            ts.basis_product(t[0], t[1], t[2]) == f.sub_vec(&ts.basis_product(t[2], t[1], t[0]), &pair(x, z, y))
        }));
        r.push(check_tuples("allison4", &[d; 3], d, mode, |t| {
            let (x, y, z) = (&e[t[0]], &e[t[1]], &e[t[2]]);
            ts.basis_product(t[0], t[1], t[2]) == f.add_vec(&ts.basis_product(t[1], t[0], t[2]), &pair(x, y, z))
        }));
        r.push(check_tuples("allison5", &[d; 5], d, mode, |t| {
            let (x, y, z, w, v) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let mut lhs = pair(&ts.basis_product(t[0], t[1], t[2]), w, v);
            f.axpy(&mut lhs, 1, &pair(z, &ts.basis_product(t[0], t[1], t[3]), v));
            let zw_y = pair(z, w, y);
            lhs == pair(x, &zw_y, v)
        }));
        r.push(check_tuples("allison6", &[d; 5], d, mode, |t| {
            let (x, y, z, w, v) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let lhs = tp(x, y, &ts.basis_product(t[2], t[3], t[4]));
            let mut rhs = tp(&ts.basis_product(t[0], t[1], t[2]), w, v);
            ts.triple.apply_into(&mut rhs, &[z, &ts.basis_product(t[1], t[0], t[3]), v], 1);
            ts.triple.apply_into(&mut rhs, &[z, w, &ts.basis_product(t[0], t[1], t[4])], 1);
            lhs == rhs
        }));
        r
    }

    /// `K(u,v)K(x,z) + K(x,z)K(u,v) = K(K(u,v)x,z) + K(x,K(u,v)z)`.
    pub fn check_kk(&self, mode: Mode) -> Report {
        let ts = &self.system;
        let f = self.field();
        let d = ts.dim();
        let e = ts.units();
        let kk = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| ts.k_apply(a, b, c, Sign::Plus);
        let mut r = Report::new();
        r.push(check_tuples("kk_symmetrized", &[d; 5], d, mode, |t| {
            let (u, v, x, z, w) = (&e[t[0]], &e[t[1]], &e[t[2]], &e[t[3]], &e[t[4]]);
            let lhs = f.add_vec(&kk(u, v, &kk(x, z, w)), &kk(x, z, &kk(u, v, w)));
            let rhs = f.add_vec(&kk(&kk(u, v, x), z, w), &kk(x, &kk(u, v, z), w));
            lhs == rhs
        }));
        r
    }

    /// Linearized Jordan identity `D_{a·b,c} + D_{b·c,a} + D_{c·a,b} = 0` with
    /// `D_{a,b} = ¼[a,b]`, over basis triples of `J`. The sum is symmetric in
    /// `a, b, c`, so sorted triples suffice.
    pub fn check_linearized_jordan(&self) -> Report {
        let f = self.field();
        let n = self.system.dim();
        let k = self.j_dim();
        let ops = &self.j_ops;
        let quarter = f.mul(f.inv2(), f.inv2());
        // jordan products in J coordinates, commutators [a_i, a_j] as operators
        let mut jp = vec![Vec::new(); k * k];
        let mut comm = vec![Matrix::zeros(f, n, n); k * k];
        for a in 0..k {
            for b in 0..k {
                if a <= b {
                    let c = self.j_coords(&self.jordan_product(&ops[a], &ops[b]));
                    jp[a * k + b] = c.clone().unwrap_or_default();
                    jp[b * k + a] = c.unwrap_or_default();
                }
                comm[a * k + b] = ops[a].commutator(&ops[b]);
            }
        }
        let closed = jp.iter().all(|c| c.len() == k);
        let mut r = Report::new();
        if !closed {
            r.push(Outcome::fact("linearized_jordan", false));
            return r;
        }
        let d_of = |a: usize, b: usize, c: usize, acc: &mut Matrix| {
            for (l, &x) in jp[a * k + b].iter().enumerate() {
                if x != 0 {
                    acc.add_scaled(f.mul(x, quarter), &comm[l * k + c]);
                }
            }
        };
        r.push(check_tuples("linearized_jordan", &[k, k, k], n * n, Mode::Exhaustive, |t| {
            let (a, b, c) = (t[0], t[1], t[2]);
            if a > b || b > c {
                return true;
            }
            let mut acc = Matrix::zeros(f, n, n);
            d_of(a, b, c, &mut acc);
            d_of(b, c, a, &mut acc);
            d_of(c, a, b, &mut acc);
            acc.is_zero()
        }));
        r
    }
}

/// Builds the package of a triple system satisfying the Hein identities:
/// `J = span{id, K(x,y)}` with the pairing `−K`. Also requires the `K`
/// symmetrization identity, which makes `J` a Jordan subalgebra.
pub fn jordanize(ts: &TripleSystem, mode: Mode) -> Result<JTernaryPackage, JTernaryError> {
    fail_on(&ts.check_hein(mode))?;
    Ok(jordanize_unchecked(ts))
}

/// [`jordanize`] without the Hein check.
pub fn jordanize_unchecked(ts: &TripleSystem) -> JTernaryPackage {
    let f = ts.field();
    let d = ts.dim();
    let mut vecs: Vec<Vec<Scalar>> = vec![Matrix::identity(f, d).into_data()];
    vecs.extend(ts.k_span().vectors().map(|v| v.to_vec()));
    let j = Subspace::from_vectors(f, d * d, vecs);
    let j_ops = j.vectors().map(|v| unflatten(f, d, v)).collect();
    JTernaryPackage { system: ts.clone(), j, j_ops }
}

fn fail_on(r: &Report) -> Result<(), JTernaryError> {
    match r.first_failure() {
        Some(o) => Err(JTernaryError::AxiomFailure(o.name.clone(), o.counterexample.clone().unwrap_or_default())),
        None => Ok(()),
    }
}

/// The prototypical system on a module `W` for an associative algebra with
/// involution, from a skew-hermitian form `h` (`h(y,x) = −conj h(x,y)`,
/// `h(ax,y) = a h(x,y)`):
/// `xyz = h(x,y)z + h(z,x)y + h(z,y)x`.
pub fn prototypical(ainv: &InvolutiveAlgebra, action: &[Matrix], h: &Tensor) -> Result<TripleSystem, JTernaryError> {
    let f = ainv.field();
    let da = ainv.alg.dim();
    let dw = h.in_dims().first().copied().unwrap_or(0);
    if action.len() != da || action.iter().any(|m| m.rows() != dw || m.cols() != dw) {
        return Err(JTernaryError::Precondition("action matrices have wrong shape".into()));
    }
    if h.in_dims() != [dw, dw] || h.out_dim() != da {
        return Err(JTernaryError::Precondition("h must map W×W to A".into()));
    }
    check_associative(&ainv.alg)?;
    ainv.check_involution()?;
    check_module(&ainv.alg, action)?;
    for x in 0..dw {
        for y in 0..dw {
            let hxy = h.at_dense(&[x, y]);
            if h.at_dense(&[y, x]) != f.scaled(&ainv.inv.mul_vec(&hxy), f.neg(1)) {
                return Err(JTernaryError::Precondition(format!("h(y,x) != −conj h(x,y) at ({x},{y})")));
            }
            for i in 0..da {
                let ax = action[i].column(x);
                let lhs = h.apply(&[&ax, &f.unit_vec(dw, y)]);
                if lhs != ainv.alg.multiply(&f.unit_vec(da, i), &hxy) {
                    return Err(JTernaryError::Precondition(format!("h(e{i}x{x}, x{y}) != e{i} h(x{x}, x{y})")));
                }
            }
        }
    }
    let act = |a: &[Scalar], w: usize| -> Vec<Scalar> {
        let mut v = vec![0; dw];
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut v, c, &action[i].column(w));
            }
        }
        v
    };
    Ok(TripleSystem::from_fn(f, numbered("w", dw), |x, y, z| {
        let mut v = act(&h.at_dense(&[x, y]), z);
        f.axpy(&mut v, 1, &act(&h.at_dense(&[z, x]), y));
        f.axpy(&mut v, 1, &act(&h.at_dense(&[z, y]), x));
        v
    }))
}

/// The system `xyz = V_{x,sy}(z)` on a structurable algebra, for a skew `s`
/// with invertible left multiplication.
pub fn from_structurable(a: &StructurableAlgebra, s: &[Scalar]) -> Result<TripleSystem, JTernaryError> {
    if !a.skew().contains(s) {
        return Err(StructurableError::NotSkew.into());
    }
    let d = a.dim();
    if a.left_mul(s).rank() != d {
        return Err(StructurableError::SingularLs.into());
    }
    let f = a.field();
    let sy: Vec<Vec<Scalar>> = (0..d).map(|j| a.mul(s, &f.unit_vec(d, j))).collect();
    let vt = a.v_tensor();
    Ok(TripleSystem::from_fn(f, a.alg().names().to_vec(), |x, y, z| {
        let (ex, ez) = (f.unit_vec(d, x), f.unit_vec(d, z));
        vt.apply(&[&ex, &sy[y], &ez])
    }))
}

/// The Jordan data attached to a structurable algebra and `s`, on the skew
/// part `S`: `a·b = ½(a(sb) + b(sa))`, `a•x = a(sx)`, `⟨x|y⟩ = yx̄ − xȳ`.
pub struct SkewJordanData<'a> {
    pub alg: &'a StructurableAlgebra,
    pub s: Vec<Scalar>,
}

impl SkewJordanData<'_> {
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let a = self.alg;
        let f = a.field();
        let v = f.add_vec(&a.mul(x, &a.mul(&self.s, y)), &a.mul(y, &a.mul(&self.s, x)));
        f.scaled(&v, f.inv2())
    }

    pub fn action(&self, x: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
        self.alg.mul(x, &self.alg.mul(&self.s, w))
    }

    pub fn pairing(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let a = self.alg;
        a.field().sub_vec(&a.mul(y, &a.conj(x)), &a.mul(x, &a.conj(y)))
    }

    /// `a ↦ L_a L_s`.
    pub fn to_operator(&self, x: &[Scalar]) -> Matrix {
        self.alg.left_mul(x).mul(&self.alg.left_mul(&self.s))
    }

    /// Cross-checks against the package of `from_structurable(A, s)`:
    /// - `phi_onto_j`: `a ↦ L_a L_s` maps `S` bijectively onto `J`
    /// - `phi_jordan`: it carries `a·b` to the symmetrized operator product
    /// - `phi_pairing`: it carries `yx̄ − xȳ` to `−K(x,y)`
    /// - `s_tt_stabilizer`: `S(T,T) = {T ∈ instrl : T^δ(t) = 0}` with `st = 1`
    pub fn check_against(&self, pkg: &JTernaryPackage) -> Report {
        let a = self.alg;
        let f = a.field();
        let d = a.dim();
        let skew: Vec<Vec<Scalar>> = a.skew().vectors().map(|v| v.to_vec()).collect();
        let imgs: Vec<Matrix> = skew.iter().map(|x| self.to_operator(x)).collect();
        let span = operator_span(f, d, &imgs);
        let mut r = Report::new();
        r.push(Outcome::fact("phi_onto_j", span == pkg.j && span.dim() == skew.len()));
        let k = skew.len();
        r.push(check_tuples("phi_jordan", &[k, k], d * d, Mode::Exhaustive, |t| {
            self.to_operator(&self.product(&skew[t[0]], &skew[t[1]])) == pkg.jordan_product(&imgs[t[0]], &imgs[t[1]])
        }));
        r.push(check_tuples("phi_action", &[k, d], d, Mode::Exhaustive, |t| {
            let w = f.unit_vec(d, t[1]);
            self.action(&skew[t[0]], &w) == imgs[t[0]].mul_vec(&w)
        }));
        r.push(check_tuples("phi_pairing", &[d, d], d * d, Mode::Exhaustive, |t| {
            let (x, y) = (f.unit_vec(d, t[0]), f.unit_vec(d, t[1]));
            let p = self.pairing(&x, &y);
            a.skew().contains(&p) && self.to_operator(&p) == pkg.pairing(&x, &y)
        }));
        r.push(Outcome::fact("s_tt_stabilizer", self.stabilizer() == Some(pkg.system.s_span())));
        r
    }

    /// `{T ∈ instrl : T^δ(t) = 0}` where `st = 1`.
    pub fn stabilizer(&self) -> Option<Subspace> {
        let a = self.alg;
        let f = a.field();
        let d = a.dim();
        let t = solve(&a.left_mul(&self.s), a.one())?;
        let instrl = a.instrl();
        let ops: Vec<Matrix> = instrl.vectors().map(|v| unflatten(f, d, v)).collect();
        let cols: Vec<Vec<Scalar>> = ops.iter().map(|op| a.t_delta(op).mul_vec(&t)).collect();
        let ker = crate::linalg::kernel_basis(&Matrix::from_columns(f, d, &cols));
        Some(Subspace::from_vectors(f, d * d, ker.vectors().map(|c| instrl.combine(c))))
    }
}

/// `Mat_n` with the transpose acting on `T = X⊗Y` (`dim X = n`, `dim Y = m`
/// even) through the first factor, and `h(x₁⊗y₁, x₂⊗y₂) = b(y₁,y₂) x₁x₂ᵀ`
/// with `b` the standard symplectic form `[[0, I], [−I, 0]]`. Basis of `T`:
/// `x⊗y` at index `x·m + y`.
pub fn osp_system(field: Field, n: usize, m: usize) -> Result<TripleSystem, JTernaryError> {
    if !m.is_multiple_of(2) {
        return Err(JTernaryError::Precondition("dim Y must be even".into()));
    }
    let f = field;
    let alg = matrix_algebra(f, n);
    let mut inv = Matrix::zeros(f, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            inv.set(j * n + i, i * n + j, 1);
        }
    }
    let dw = n * m;
    let action: Vec<Matrix> = (0..n * n)
        .map(|ij| {
            let (a, b) = (ij / n, ij % n);
            let mut op = Matrix::zeros(f, dw, dw);
            for y in 0..m {
                op.set(a * m + y, b * m + y, 1);
            }
            op
        })
        .collect();
    let h = Tensor::from_fn(f, &[dw, dw], n * n, |t| {
        let (x1, y1, x2, y2) = (t[0] / m, t[0] % m, t[1] / m, t[1] % m);
        let mut v = vec![0; n * n];
        v[x1 * n + x2] = symplectic(f, m, y1, y2);
        v
    });
    let ainv = InvolutiveAlgebra { alg, inv };
    let mut ts = prototypical(&ainv, &action, &h)?;
    ts.names = (0..dw).map(|i| format!("x{}⊗y{}", i / m, i % m)).collect();
    Ok(ts)
}

/// Standard symplectic form `[[0, I], [−I, 0]]` on basis indices.
pub fn symplectic(f: Field, m: usize, a: usize, b: usize) -> Scalar {
    let r = m / 2;
    if a < r && b == a + r {
        1
    } else if a >= r && b + r == a {
        f.neg(1)
    } else {
        0
    }
}

/// `B ⊕ Bᵒᵖ` with `B = End(X)`, `dim X = n`, the exchange involution, acting
/// on `T = (X⊗Y*) ⊕ (Y⊗X*)` (`dim Y = m`): `B` on the first summand,
/// `Bᵒᵖ` on the second through the covectors. The form is
/// `h(x⊗ω, y⊗φ) = ω(y) xφᵀ`, `h(y⊗φ, x⊗ω) = −ω(y) (xφᵀ)ᵒᵖ`, zero otherwise.
///
/// Bases: `B` at `i·n + j`, `Bᵒᵖ` at `n² + i·n + j`; `x⊗ω` at `x·m + ω`,
/// `y⊗φ` at `nm + y·n + φ`.
pub fn psl_system(field: Field, n: usize, m: usize) -> Result<TripleSystem, JTernaryError> {
    let f = field;
    let nn = n * n;
    let alg = Algebra::from_fn(f, numbered("b", 2 * nn), |p, q| {
        let mut v = vec![0; 2 * nn];
        match (p < nn, q < nn) {
            (true, true) => {
                let (i, j, k, l) = (p / n, p % n, q / n, q % n);
                if j == k {
                    v[i * n + l] = 1;
                }
            }
            (false, false) => {
                let (i, j, k, l) = ((p - nn) / n, (p - nn) % n, (q - nn) / n, (q - nn) % n);
                if l == i {
                    v[nn + k * n + j] = 1;
                }
            }
            _ => {}
        }
        v
    });
    let mut inv = Matrix::zeros(f, 2 * nn, 2 * nn);
    for p in 0..nn {
        inv.set(nn + p, p, 1);
        inv.set(p, nn + p, 1);
    }
    let dm = n * m;
    let dw = 2 * dm;
    let action: Vec<Matrix> = (0..2 * nn)
        .map(|p| {
            let mut op = Matrix::zeros(f, dw, dw);
            let (i, j) = ((p % nn) / n, (p % nn) % n);
            for w in 0..m {
                if p < nn {
                    // e_ij (x⊗ω) = δ_jx e_i⊗ω
                    op.set(i * m + w, j * m + w, 1);
                } else {
                    // y⊗e_i* ↦ y⊗(e_i*∘e_ij) = y⊗e_j*
                    op.set(dm + w * n + j, dm + w * n + i, 1);
                }
            }
            op
        })
        .collect();
    let h = Tensor::from_fn(f, &[dw, dw], 2 * nn, |t| {
        let mut v = vec![0; 2 * nn];
        match (t[0] < dm, t[1] < dm) {
            (true, false) => {
                let (x, w) = (t[0] / m, t[0] % m);
                let (y, phi) = ((t[1] - dm) / n, (t[1] - dm) % n);
                if w == y {
                    v[x * n + phi] = 1;
                }
            }
            (false, true) => {
                let (y, phi) = ((t[0] - dm) / n, (t[0] - dm) % n);
                let (x, w) = (t[1] / m, t[1] % m);
                if w == y {
                    v[nn + x * n + phi] = f.neg(1);
                }
            }
            _ => {}
        }
        v
    });
    let ainv = InvolutiveAlgebra { alg, inv };
    let mut ts = prototypical(&ainv, &action, &h)?;
    let mut names: Vec<String> = (0..dm).map(|i| format!("x{}⊗w{}", i / m, i % m)).collect();
    names.extend((0..dm).map(|i| format!("y{}⊗φ{}", i / n, i % n)));
    ts.names = names;
    Ok(ts)
}

/// The two-dimensional system on `{x, y}` with `xxx = y` and all other basis
/// products zero.
pub fn weak_counterexample(field: Field) -> TripleSystem {
    TripleSystem::from_entries(field, vec!["x".into(), "y".into()], [(0, 0, 0, 1, 1)])
}

/// `xyz = x`, which fails the first Hein identity.
pub fn first_argument_system(field: Field, d: usize) -> TripleSystem {
    TripleSystem::from_fn(field, numbered("x", d), |i, _, _| field.unit_vec(d, i))
}

/// The zero product on `d` basis vectors.
pub fn zero_system(field: Field, d: usize) -> TripleSystem {
    TripleSystem::from_entries(field, numbered("x", d), std::iter::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::split_composition;
    use crate::structurable::{choose_invertible_skew, tensor_structurable_unchecked};

    fn f3() -> Field {
        Field::three()
    }

    fn tensor(d1: usize, d2: usize) -> StructurableAlgebra {
        let f = f3();
        tensor_structurable_unchecked(&split_composition(d1, f).unwrap(), &split_composition(d2, f).unwrap()).unwrap()
    }

    fn mat2_column_system() -> TripleSystem {
        osp_system(f3(), 2, 2).unwrap()
    }

    #[test]
    fn weak_counterexample_values() {
        let f = f3();
        let t = weak_counterexample(f);
        assert!(t.check_hein(Mode::Exhaustive).passed());
        let x = [1, 0];
        // S(x,x) x = 2y = −y
        assert_eq!(t.s_op(&x, &x).mul_vec(&x), vec![0, 2]);
        assert!(t.k_span().is_zero());
        let pkg = jordanize(&t, Mode::Exhaustive).unwrap();
        assert_eq!(pkg.j_dim(), 1);
    }

    #[test]
    fn first_argument_system_fails_hein1_only_where_expected() {
        let t = first_argument_system(f3(), 2);
        let r = t.check_hein(Mode::Exhaustive);
        assert!(!r.get("hein1").unwrap().passed);
        assert!(matches!(jordanize(&t, Mode::Exhaustive), Err(JTernaryError::AxiomFailure(..))));
    }

    #[test]
    fn zero_system_passes_everything() {
        let t = zero_system(f3(), 3);
        for eps in [Sign::Plus, Sign::Minus] {
            for delta in [Sign::Plus, Sign::Minus] {
                assert!(t.check_fk(eps, delta, Mode::Exhaustive).passed());
                assert!(t.check_special(eps, delta, Mode::Exhaustive).passed());
            }
        }
    }

    #[test]
    fn operator_symmetries() {
        let t = mat2_column_system();
        let f = f3();
        let (x, y, z) = (vec![1, 2, 0, 1], vec![0, 1, 1, 0], f.unit_vec(4, 2));
        assert!(t.k_op(&x, &x).is_zero());
        assert_eq!(t.s_op(&x, &y), t.s_op(&y, &x));
        assert_eq!(t.t_op(&x, &y), t.t_op(&y, &x).neg());
        assert_eq!(t.k_op_delta(&x, &y, Sign::Minus).mul_vec(&z), t.k_apply(&x, &y, &z, Sign::Minus));
    }

    #[test]
    fn prototypical_column_system_is_jternary() {
        let t = mat2_column_system();
        assert!(t.check_hein(Mode::Exhaustive).passed());
        let pkg = jordanize(&t, Mode::Exhaustive).unwrap();
        assert!(pkg.check_jordan_closure().passed());
        assert!(pkg.check_allison(Mode::Exhaustive).passed());
        assert!(pkg.check_kk(Mode::Exhaustive).passed());
        assert!(pkg.check_linearized_jordan().passed());
        // J is the symmetric 2×2 matrices acting on the first factor
        assert_eq!(pkg.j_dim(), 3);
        // allison3 spot value, both sides by brute evaluation
        let (x, y, z) = ([1u8, 0, 0, 2], [1u8, 1, 0, 0], [0u8, 1, 1, 0]);
        let lhs = t.product(&x, &y, &z);
        let rhs = f3().sub_vec(&t.product(&z, &y, &x), &pkg.pairing(&x, &z).mul_vec(&y));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn psl_and_osp_systems_pass_hein() {
        for (n, m) in [(1, 2), (3, 2)] {
            assert!(osp_system(f3(), n, m).unwrap().check_hein(Mode::Exhaustive).passed());
        }
        assert!(osp_system(f3(), 2, 3).is_err());
        for (n, m) in [(2, 1), (2, 2), (1, 1)] {
            let t = psl_system(f3(), n, m).unwrap();
            assert_eq!(t.dim(), 2 * n * m);
            assert!(t.check_hein(Mode::Exhaustive).passed(), "({n},{m})");
        }
    }

    #[test]
    fn prototypical_rejects_hermitian_form() {
        let f = f3();
        let alg = Algebra::from_entries(f, vec!["1".into()], [(0, 0, 0, 1)]);
        let ainv = InvolutiveAlgebra { alg, inv: Matrix::identity(f, 1) };
        let action = vec![Matrix::identity(f, 2)];
        let h = Tensor::from_fn(f, &[2, 2], 1, |t| vec![u8::from(t[0] == t[1])]);
        assert!(matches!(prototypical(&ainv, &action, &h), Err(JTernaryError::Precondition(_))));
        let zero = Tensor::from_entries(f, &[2, 2], 1, std::iter::empty());
        assert!(prototypical(&ainv, &action, &zero).unwrap().tensor().nnz() == 0);
    }

    #[test]
    fn hein_matches_special_fk() {
        let f = f3();
        for t in [weak_counterexample(f), first_argument_system(f, 2), mat2_column_system()] {
            let hein = t.check_hein(Mode::Exhaustive).passed();
            let fk = t.check_fk(Sign::Plus, Sign::Plus, Mode::Exhaustive).passed()
                && t.check_special(Sign::Plus, Sign::Plus, Mode::Exhaustive).passed();
            assert_eq!(hein, fk);
        }
    }

    #[test]
    fn st_identities_on_jternary() {
        let t = mat2_column_system();
        assert!(t.check_st_identities(Sign::Plus, Mode::Exhaustive).passed());
    }

    #[test]
    fn structurable_systems() {
        for (d1, d2) in [(2, 1), (4, 1), (2, 2), (8, 1)] {
            let a = tensor(d1, d2);
            let s = choose_invertible_skew(&a).unwrap();
            let t = from_structurable(&a, &s).unwrap();
            assert!(t.check_hein(Mode::default()).passed(), "({d1},{d2})");
            let pkg = jordanize_unchecked(&t);
            assert_eq!(pkg.j_dim(), a.skew().dim(), "({d1},{d2})");
            let data = SkewJordanData { alg: &a, s: s.clone() };
            let r = data.check_against(&pkg);
            assert!(r.passed(), "({d1},{d2}): {r}");
        }
    }

    #[test]
    fn structurable_v_system_is_kantor() {
        let a = tensor(4, 1);
        let t = TripleSystem::new(a.alg().names().to_vec(), a.v_tensor().clone());
        assert!(t.check_fk(Sign::Minus, Sign::Plus, Mode::Exhaustive).passed());
    }

    #[test]
    fn from_structurable_rejects_bad_s() {
        let a = tensor(2, 1);
        assert!(matches!(from_structurable(&a, a.one()), Err(JTernaryError::Structurable(StructurableError::NotSkew))));
        let b = tensor(1, 1);
        let zero = vec![0; 1];
        assert!(from_structurable(&b, &zero).is_err());
    }

    #[test]
    fn octonion_s_tt_dimension() {
        let a = tensor(8, 1);
        let s = choose_invertible_skew(&a).unwrap();
        let t = from_structurable(&a, &s).unwrap();
        assert_eq!(t.s_span().dim(), 15);
    }
}
