//! Structurable algebras: constructors, axiom checks, the operators `V_{a,b}`,
//! `T^ε`, `T^δ`, the inner structure Lie algebra, and the Albert form and
//! Clifford apparatus of tensor products of composition algebras.

use crate::algebra::{assoc_subalgebra_generated, numbered, operator_span, Algebra};
use crate::check::{check_tuples, Mode, Report};
use crate::composition::CompositionAlgebra;
use crate::field::{Field, Scalar};
use crate::linalg::{kernel_basis, Matrix, Subspace};
use crate::tensor::Tensor;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructurableError {
    #[error("algebra has no unit")]
    NoUnit,
    #[error("involution invalid: {0}")]
    BadInvolution(String),
    #[error("axiom {0} fails with counterexample {1:?}")]
    AxiomFailure(String, Vec<usize>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not a tensor product of composition algebras")]
    NotTensor,
    #[error("element is not skew")]
    NotSkew,
    #[error("left multiplication by s is singular")]
    SingularLs,
}

/// An algebra with an involution (an anti-automorphism of order two).
#[derive(Clone, Debug)]
pub struct InvolutiveAlgebra {
    pub alg: Algebra,
    pub inv: Matrix,
}

impl InvolutiveAlgebra {
    pub fn field(&self) -> Field {
        self.alg.field()
    }

    /// Checks that `inv` squares to the identity and reverses products.
    pub fn check_involution(&self) -> Result<(), StructurableError> {
        let d = self.alg.dim();
        if !self.inv.mul(&self.inv).is_identity() {
            return Err(StructurableError::BadInvolution("not of order two".into()));
        }
        let cols: Vec<Vec<Scalar>> = (0..d).map(|j| self.inv.column(j)).collect();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.inv.mul_vec(&self.alg.product(i, j));
                let rhs = self.alg.multiply(&cols[j], &cols[i]);
                if lhs != rhs {
                    return Err(StructurableError::BadInvolution(format!("conj(e{i} e{j}) != conj(e{j}) conj(e{i})")));
                }
            }
        }
        Ok(())
    }

    /// Skew elements `{x : x̄ = −x}`.
    pub fn skew(&self) -> Subspace {
        kernel_basis(&self.inv.add(&Matrix::identity(self.field(), self.alg.dim())))
    }

    /// Hermitian elements `{x : x̄ = x}`.
    pub fn herm(&self) -> Subspace {
        kernel_basis(&self.inv.sub(&Matrix::identity(self.field(), self.alg.dim())))
    }
}

/// A unital algebra with involution, intended to satisfy the structurable axioms
/// (verified by [`StructurableAlgebra::check_axioms`]).
#[derive(Clone, Debug)]
pub struct StructurableAlgebra {
    alg: Algebra,
    inv: Matrix,
    one: Vec<Scalar>,
    skew: Subspace,
    herm: Subspace,
    factors: Option<(CompositionAlgebra, CompositionAlgebra)>,
    vtensor: OnceLock<Tensor>,
}

impl StructurableAlgebra {
    /// Wraps an involutive algebra after checking unit and involution. The
    /// structurable axioms are not checked here.
    pub fn new(alg: Algebra, inv: Matrix) -> Result<StructurableAlgebra, StructurableError> {
        let ia = InvolutiveAlgebra { alg, inv };
        ia.check_involution()?;
        let one = ia.alg.unit().ok_or(StructurableError::NoUnit)?;
        if ia.inv.mul_vec(&one) != one {
            return Err(StructurableError::BadInvolution("does not fix 1".into()));
        }
        let skew = ia.skew();
        let herm = ia.herm();
        Ok(StructurableAlgebra { alg: ia.alg, inv: ia.inv, one, skew, herm, factors: None, vtensor: OnceLock::new() })
    }

    pub fn alg(&self) -> &Algebra {
        &self.alg
    }
    pub fn field(&self) -> Field {
        self.alg.field()
    }
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }
    pub fn inv(&self) -> &Matrix {
        &self.inv
    }
    pub fn one(&self) -> &[Scalar] {
        &self.one
    }
    pub fn skew(&self) -> &Subspace {
        &self.skew
    }
    pub fn herm(&self) -> &Subspace {
        &self.herm
    }
    /// The composition factors when built by [`tensor_structurable`].
    pub fn factors(&self) -> Option<&(CompositionAlgebra, CompositionAlgebra)> {
        self.factors.as_ref()
    }

    pub fn conj(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.inv.mul_vec(x)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.alg.multiply(x, y)
    }

    pub fn left_mul(&self, x: &[Scalar]) -> Matrix {
        self.alg.left_mul(x)
    }

    pub fn right_mul(&self, x: &[Scalar]) -> Matrix {
        self.alg.right_mul(x)
    }

    /// Tensor `(a, b, c) ↦ V_{a,b}(c) = (ab̄)c + (cb̄)a − (cā)b`.
    pub fn v_tensor(&self) -> &Tensor {
        self.vtensor.get_or_init(|| {
            let d = self.dim();
            let f = self.field();
            let conj: Vec<Vec<Scalar>> = (0..d).map(|j| self.inv.column(j)).collect();
            let abar: Vec<Vec<Scalar>> =
                (0..d * d).map(|ij| self.alg.multiply(&f.unit_vec(d, ij / d), &conj[ij % d])).collect();
            let units: Vec<Vec<Scalar>> = (0..d).map(|i| f.unit_vec(d, i)).collect();
            Tensor::from_fn(f, &[d, d, d], d, |t| {
                let (a, b, c) = (t[0], t[1], t[2]);
                let mut v = self.alg.multiply(&abar[a * d + b], &units[c]);
                let t2 = self.alg.multiply(&abar[c * d + b], &units[a]);
                let t3 = self.alg.multiply(&abar[c * d + a], &units[b]);
                for k in 0..d {
                    v[k] = f.sub(f.add(v[k], t2[k]), t3[k]);
                }
                v
            })
        })
    }

    /// `V_{a,b}(c)` for arbitrary vectors.
    pub fn v_apply(&self, a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> Vec<Scalar> {
        self.v_tensor().apply(&[a, b, c])
    }

    /// The operator `V_{a,b}`.
    pub fn v_operator(&self, a: &[Scalar], b: &[Scalar]) -> Matrix {
        let d = self.dim();
        let f = self.field();
        let cols: Vec<Vec<Scalar>> = (0..d).map(|j| self.v_apply(a, b, &f.unit_vec(d, j))).collect();
        Matrix::from_columns(f, d, &cols)
    }

    /// `V_{e_i,e_j}`.
    pub fn v_basis(&self, i: usize, j: usize) -> Matrix {
        self.v_tensor().partial_operator(&[i, j])
    }

    /// `T^ε = T − L_{T(1) + conj(T(1))}`.
    pub fn t_eps(&self, t: &Matrix) -> Matrix {
        let t1 = t.mul_vec(&self.one);
        let s = self.field().add_vec(&t1, &self.conj(&t1));
        t.sub(&self.left_mul(&s))
    }

    /// `T^δ(x) = T(x) + x·conj(T(1))`.
    pub fn t_delta(&self, t: &Matrix) -> Matrix {
        let t1 = t.mul_vec(&self.one);
        t.add(&self.right_mul(&self.conj(&t1)))
    }

    /// `instrl = span{V_{a,b}}` as a subspace of flattened operators.
    pub fn instrl(&self) -> Subspace {
        let d = self.dim();
        let ops: Vec<Matrix> = (0..d * d).map(|ij| self.v_basis(ij / d, ij % d)).collect();
        operator_span(self.field(), d, &ops)
    }

    /// Span of `L_a L_b` for `a, b` in the skew basis.
    pub fn ls_ls_span(&self) -> Subspace {
        let ls: Vec<Matrix> = self.skew.vectors().map(|s| self.left_mul(s)).collect();
        let mut ops = Vec::new();
        for a in &ls {
            for b in &ls {
                ops.push(a.mul(b));
            }
        }
        operator_span(self.field(), self.dim(), &ops)
    }

    /// Structurable axioms: the `V`-operator bracket identity and skew-alternativity.
    pub fn check_axioms(&self, mode: Mode) -> Report {
        let d = self.dim();
        let f = self.field();
        let vt = self.v_tensor();
        let units: Vec<Vec<Scalar>> = (0..d).map(|i| f.unit_vec(d, i)).collect();
        let v = |a: &[Scalar], b: &[Scalar], c: &[Scalar]| vt.apply(&[a, b, c]);
        let mut r = Report::new();
        r.push(check_tuples("str1", &[d; 5], d, mode, |t| {
            let (a, b, c, dd, e) = (&units[t[0]], &units[t[1]], &units[t[2]], &units[t[3]], &units[t[4]]);
            let lhs = f.sub_vec(&v(a, b, &v(c, dd, e)), &v(c, dd, &v(a, b, e)));
            let rhs = f.sub_vec(&v(&v(a, b, c), dd, e), &v(c, &v(b, a, dd), e));
            lhs == rhs
        }));
        let conj: Vec<Vec<Scalar>> = (0..d).map(|j| self.inv.column(j)).collect();
        r.push(check_tuples("str2", &[d; 3], d, mode, |t| {
            let (a, b, c) = (&units[t[0]], &units[t[1]], &units[t[2]]);
            let skew = f.sub_vec(a, &conj[t[0]]);
            let neg = f.sub_vec(&conj[t[0]], a);
            self.alg.associator(&skew, b, c) == self.alg.associator(b, &neg, c)
        }));
        r
    }

    /// Whether `instrl` is closed under commutators.
    pub fn instrl_is_closed(&self, instrl: &Subspace) -> bool {
        let d = self.dim();
        let f = self.field();
        let ops: Vec<Matrix> = instrl.vectors().map(|v| crate::algebra::unflatten(f, d, v)).collect();
        ops.iter().enumerate().all(|(i, a)| ops[i + 1..].iter().all(|b| instrl.contains(a.commutator(b).data())))
    }
}

/// `C₁⊗C₂` with product `(a⊗b)(c⊗d) = ac⊗bd` and involution `ā⊗b̄`; basis
/// index `i·dim C₂ + j` for `e_i⊗f_j`. The structurable axioms are verified.
pub fn tensor_structurable(
    c1: &CompositionAlgebra,
    c2: &CompositionAlgebra,
) -> Result<StructurableAlgebra, StructurableError> {
    let a = tensor_structurable_unchecked(c1, c2)?;
    let report = a.check_axioms(Mode::default());
    if let Some(o) = report.first_failure() {
        return Err(StructurableError::AxiomFailure(o.name.clone(), o.counterexample.clone().unwrap_or_default()));
    }
    Ok(a)
}

/// [`tensor_structurable`] without the axiom check.
pub fn tensor_structurable_unchecked(
    c1: &CompositionAlgebra,
    c2: &CompositionAlgebra,
) -> Result<StructurableAlgebra, StructurableError> {
    let f = c1.field();
    if c2.field() != f {
        return Err(StructurableError::Precondition("factors over different fields".into()));
    }
    let (d1, d2) = (c1.dim(), c2.dim());
    let names: Vec<String> =
        c1.alg().names().iter().flat_map(|a| c2.alg().names().iter().map(move |b| format!("{a}⊗{b}"))).collect();
    let mut entries = Vec::new();
    for (i1, j1) in (0..d1).flat_map(|i| (0..d1).map(move |j| (i, j))) {
        let (o1, x1) = c1.alg().table().at(&[i1, j1]);
        for (i2, j2) in (0..d2).flat_map(|i| (0..d2).map(move |j| (i, j))) {
            let (o2, x2) = c2.alg().table().at(&[i2, j2]);
            for (&k1, &a) in o1.iter().zip(x1) {
                for (&k2, &b) in o2.iter().zip(x2) {
                    entries.push((i1 * d2 + i2, j1 * d2 + j2, k1 as usize * d2 + k2 as usize, f.mul(a, b)));
                }
            }
        }
    }
    let alg = Algebra::from_entries(f, names, entries);
    let inv = kron(c1.conj(), c2.conj());
    let mut a = StructurableAlgebra::new(alg, inv)?;
    a.factors = Some((c1.clone(), c2.clone()));
    Ok(a)
}

/// Kronecker product, matching the `i·dim₂ + j` index convention.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let (r1, c1, r2, c2) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut m = Matrix::zeros(f, r1 * r2, c1 * c2);
    for i in 0..r1 {
        for j in 0..c1 {
            let x = a.get(i, j);
            if x == 0 {
                continue;
            }
            for k in 0..r2 {
                for l in 0..c2 {
                    m.set(i * r2 + k, j * c2 + l, f.mul(x, b.get(k, l)));
                }
            }
        }
    }
    m
}

/// The algebra `E ⊕ W` of a hermitian form `h: W×W → E` over an associative
/// algebra with involution `E` acting on `W` by `action[i] = ρ(e_i)`. Product
/// `(e₁+x₁)(e₂+x₂) = (e₁e₂ + h(x₂,x₁)) + (ē₁∘x₂ + e₂∘x₁)`; the involution is
/// that of `E` on `E` and the identity on `W`. Basis: `E` basis then `W` basis.
pub fn hermitian_form_structurable(
    e: &InvolutiveAlgebra,
    action: &[Matrix],
    h: &Tensor,
) -> Result<StructurableAlgebra, StructurableError> {
    let f = e.field();
    let de = e.alg.dim();
    let dw = h.in_dims().first().copied().unwrap_or(0);
    if action.len() != de || action.iter().any(|m| m.rows() != dw || m.cols() != dw) {
        return Err(StructurableError::Precondition("action matrices have wrong shape".into()));
    }
    if h.in_dims() != [dw, dw] || h.out_dim() != de {
        return Err(StructurableError::Precondition("h must map W×W to E".into()));
    }
    e.check_involution()?;
    check_associative(&e.alg)?;
    check_module(&e.alg, action)?;
    let rho = |v: &[Scalar]| -> Matrix {
        let mut m = Matrix::zeros(f, dw, dw);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &action[i]);
            }
        }
        m
    };
    for x in 0..dw {
        for y in 0..dw {
            if h.at_dense(&[y, x]) != e.inv.mul_vec(&h.at_dense(&[x, y])) {
                return Err(StructurableError::Precondition(format!("h(y,x) != conj h(x,y) at ({x},{y})")));
            }
            for i in 0..de {
                let ex = action[i].column(x);
                let lhs = h.apply(&[&ex, &f.unit_vec(dw, y)]);
                let rhs = e.alg.multiply(&f.unit_vec(de, i), &h.at_dense(&[x, y]));
                if lhs != rhs {
                    return Err(StructurableError::Precondition(format!("h(e{i}∘x{x}, x{y}) != e{i} h(x{x}, x{y})")));
                }
            }
        }
    }
    let n = de + dw;
    let mut names: Vec<String> = e.alg.names().to_vec();
    names.extend(numbered("w", dw));
    let conj_cols: Vec<Vec<Scalar>> = (0..de).map(|j| e.inv.column(j)).collect();
    let alg = Algebra::from_fn(f, names, |i, j| {
        let mut v = vec![0; n];
        match (i < de, j < de) {
            (true, true) => v[..de].copy_from_slice(&e.alg.product(i, j)),
            (true, false) => {
                let img = rho(&conj_cols[i]).column(j - de);
                v[de..].copy_from_slice(&img);
            }
            (false, true) => v[de..].copy_from_slice(&action[j].column(i - de)),
            (false, false) => v[..de].copy_from_slice(&h.at_dense(&[j - de, i - de])),
        }
        v
    });
    let mut inv = Matrix::identity(f, n);
    for i in 0..de {
        for j in 0..de {
            inv.set(i, j, e.inv.get(i, j));
        }
    }
    StructurableAlgebra::new(alg, inv)
}

pub(crate) fn check_associative(a: &Algebra) -> Result<(), StructurableError> {
    let d = a.dim();
    let f = a.field();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let assoc = a.associator(&f.unit_vec(d, i), &f.unit_vec(d, j), &f.unit_vec(d, k));
                if assoc.iter().any(|&c| c != 0) {
                    return Err(StructurableError::Precondition(format!("not associative at ({i},{j},{k})")));
                }
            }
        }
    }
    Ok(())
}

/// `ρ(e_i e_j) = ρ(e_i)ρ(e_j)` and `ρ(1) = id`.
pub(crate) fn check_module(a: &Algebra, action: &[Matrix]) -> Result<(), StructurableError> {
    let d = a.dim();
    let f = a.field();
    let rho = |v: &[Scalar]| -> Matrix {
        let n = action.first().map_or(0, |m| m.rows());
        let mut m = Matrix::zeros(f, n, n);
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                m.add_scaled(c, &action[i]);
            }
        }
        m
    };
    for i in 0..d {
        for j in 0..d {
            if rho(&a.product(i, j)) != action[i].mul(&action[j]) {
                return Err(StructurableError::Precondition(format!("module axiom fails at ({i},{j})")));
            }
        }
    }
    if let Some(one) = a.unit() {
        if !rho(&one).is_identity() {
            return Err(StructurableError::Precondition("unit does not act as identity".into()));
        }
    }
    Ok(())
}

/// The 35-dimensional subalgebra of `C⊗C` (for the split octonions `C`) that is
/// the kernel of the map on symmetric tensors sending `x⊗y + y⊗x` to `n(x,y)`.
/// Basis: the canonical basis of that kernel inside `C⊗C`.
pub fn smirnov_algebra(c: &CompositionAlgebra) -> Result<InvolutiveAlgebra, StructurableError> {
    if c.dim() != 8 {
        return Err(StructurableError::Precondition("needs the 8-dimensional composition algebra".into()));
    }
    let f = c.field();
    let cc = tensor_structurable_unchecked(c, c)?;
    // symmetric tensors: e_i⊗e_i and e_i⊗e_j + e_j⊗e_i (i<j)
    let mut sym: Vec<(Vec<Scalar>, Scalar)> = Vec::new();
    for i in 0..8 {
        for j in i..8 {
            let mut v = vec![0; 64];
            v[i * 8 + j] = f.add(v[i * 8 + j], 1);
            let value = if i == j {
                c.norm(&f.unit_vec(8, i))
            } else {
                v[j * 8 + i] = 1;
                c.gram().get(i, j)
            };
            sym.push((v, value));
        }
    }
    let functional = Matrix::from_rows(f, sym.len(), &[sym.iter().map(|s| s.1).collect()]);
    let ker = kernel_basis(&functional);
    let t = Subspace::from_vectors(
        f,
        64,
        ker.vectors().map(|coef| {
            let mut v = vec![0; 64];
            for (k, &x) in coef.iter().enumerate() {
                f.axpy(&mut v, x, &sym[k].0);
            }
            v
        }),
    );
    let n = t.dim();
    let basis: Vec<Vec<Scalar>> = t.vectors().map(|v| v.to_vec()).collect();
    let mut err = None;
    let alg = Algebra::from_fn(f, numbered("t", n), |i, j| {
        let prod = cc.mul(&basis[i], &basis[j]);
        t.coords(&prod).unwrap_or_else(|| {
            err = Some(StructurableError::Precondition(format!("t{i}·t{j} leaves the subalgebra")));
            vec![0; n]
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let inv_cols: Vec<Vec<Scalar>> =
        basis.iter().map(|b| t.coords(&cc.conj(b)).expect("involution leaves the subalgebra")).collect();
    Ok(InvolutiveAlgebra { alg, inv: Matrix::from_columns(f, n, &inv_cols) })
}

/// A skew element with invertible left multiplication.
///
/// For tensor products: the first of the skew basis vectors and their pairwise
/// sums with nonzero Albert form. Otherwise: skew basis vectors, pairwise sums,
/// then every skew element in lexicographic coefficient order when there are at
/// most 10⁵ of them, else 10⁴ seeded random skew elements.
pub fn choose_invertible_skew(a: &StructurableAlgebra) -> Option<Vec<Scalar>> {
    let f = a.field();
    let basis: Vec<Vec<Scalar>> = a.skew().vectors().map(|v| v.to_vec()).collect();
    let mut candidates: Vec<Vec<Scalar>> = basis.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(f.add_vec(&basis[i], &basis[j]));
        }
    }
    if a.factors().is_some() {
        let q = albert_data(a).ok()?;
        return candidates.into_iter().find(|s| q.q(s) != 0);
    }
    let invertible = |s: &[Scalar]| a.left_mul(s).rank() == a.dim();
    if let Some(s) = candidates.iter().find(|s| invertible(s)) {
        return Some(s.clone());
    }
    let k = basis.len() as u32;
    let total = (f.p() as f64).powi(k as i32);
    if total <= 1e5 {
        enumerate_span(a.skew()).into_iter().find(|s| invertible(s))
    } else {
        let mut rng = crate::check::rng(crate::check::DEFAULT_SEED);
        (0..10_000).find_map(|_| {
            let c = crate::check::random_vector(&mut rng, f, basis.len());
            let s = a.skew().combine(&c);
            invertible(&s).then_some(s)
        })
    }
}

/// All elements of a subspace, in lexicographic order of coordinates.
pub fn enumerate_span(s: &Subspace) -> Vec<Vec<Scalar>> {
    let f = s.field();
    let k = s.dim();
    let p = f.p() as usize;
    let total = p.pow(k as u32);
    (0..total)
        .map(|mut code| {
            let mut c = vec![0u8; k];
            for t in (0..k).rev() {
                c[t] = (code % p) as u8;
                code /= p;
            }
            s.combine(&c)
        })
        .collect()
}

/// Albert form `Q(s₁+s₂) = n₁(s₁) − n₂(s₂)` and `(s₁+s₂)♯ = s₁ − s₂` on the skew
/// part of `C₁⊗C₂`.
#[derive(Clone, Debug)]
pub struct AlbertData {
    field: Field,
    skew: Subspace,
    /// split basis vectors `σ_i⊗1` then `1⊗τ_j`, as `A`-vectors
    split: Vec<Vec<Scalar>>,
    n_first: usize,
    /// canonical skew coordinates to split coordinates
    to_split: Matrix,
    /// `Q` on split coordinates: the Gram matrix of the polar form
    split_gram: Matrix,
}

/// Albert form data of a tensor product structurable algebra.
pub fn albert_data(a: &StructurableAlgebra) -> Result<AlbertData, StructurableError> {
    let (c1, c2) = a.factors().ok_or(StructurableError::NotTensor)?;
    let f = a.field();
    let d2 = c2.dim();
    let s1 = c1.skew_subspace();
    let s2 = c2.skew_subspace();
    let embed1 = |x: &[Scalar]| -> Vec<Scalar> {
        let mut v = vec![0; a.dim()];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in c2.one().iter().enumerate() {
                v[i * d2 + j] = f.mul(xi, yj);
            }
        }
        v
    };
    let embed2 = |y: &[Scalar]| -> Vec<Scalar> {
        let mut v = vec![0; a.dim()];
        for (i, &xi) in c1.one().iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                v[i * d2 + j] = f.mul(xi, yj);
            }
        }
        v
    };
    let mut split: Vec<Vec<Scalar>> = s1.vectors().map(embed1).collect();
    split.extend(s2.vectors().map(embed2));
    let n_first = s1.dim();
    let skew = a.skew().clone();
    let k = skew.dim();
    if split.len() != k {
        return Err(StructurableError::Precondition("skew part is not S₁⊗1 + 1⊗S₂".into()));
    }
    // rows: canonical coordinates of split vectors; its inverse maps canonical to split
    let mut p = Matrix::zeros(f, k, k);
    for (r, v) in split.iter().enumerate() {
        let c = skew.coords(v).ok_or(StructurableError::Precondition("split vector not skew".into()))?;
        p.row_mut(r).copy_from_slice(&c);
    }
    let to_split = p.inverse().ok_or(StructurableError::Precondition("split basis dependent".into()))?;
    let mut split_gram = Matrix::zeros(f, k, k);
    let (g1, g2) = (s1.basis(), s2.basis());
    for i in 0..n_first {
        for j in 0..n_first {
            split_gram.set(i, j, c1.polar(g1.row(i), g1.row(j)));
        }
    }
    for i in 0..k - n_first {
        for j in 0..k - n_first {
            split_gram.set(n_first + i, n_first + j, f.neg(c2.polar(g2.row(i), g2.row(j))));
        }
    }
    Ok(AlbertData { field: f, skew, split, n_first, to_split, split_gram })
}

impl AlbertData {
    pub fn skew(&self) -> &Subspace {
        &self.skew
    }

    fn split_coords(&self, s: &[Scalar]) -> Vec<Scalar> {
        let c = self.skew.coords(s).expect("element is not skew");
        // row vector c times to_split
        let k = c.len();
        (0..k)
            .map(|j| (0..k).fold(0, |acc, i| self.field.add(acc, self.field.mul(c[i], self.to_split.get(i, j)))))
            .collect()
    }

    /// Polar form `Q(a,b) = Q(a+b) − Q(a) − Q(b)`.
    pub fn q_polar(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let (x, y) = (self.split_coords(a), self.split_coords(b));
        self.field.dot(&x, &self.split_gram.mul_vec(&y))
    }

    pub fn q(&self, a: &[Scalar]) -> Scalar {
        self.field.mul(self.field.inv2(), self.q_polar(a, a))
    }

    /// `(s₁+s₂)♯ = s₁ − s₂`.
    pub fn sharp(&self, a: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let c = self.split_coords(a);
        let mut v = vec![0; self.split[0].len()];
        for (i, &x) in c.iter().enumerate() {
            let coef = if i < self.n_first { x } else { f.neg(x) };
            f.axpy(&mut v, coef, &self.split[i]);
        }
        v
    }

    /// Gram matrix of the polar form in the canonical skew basis.
    pub fn gram(&self) -> Matrix {
        let vs: Vec<&[Scalar]> = self.skew.vectors().collect();
        let k = vs.len();
        let mut g = Matrix::zeros(self.field, k, k);
        for i in 0..k {
            for j in 0..k {
                g.set(i, j, self.q_polar(vs[i], vs[j]));
            }
        }
        g
    }

    /// `♯` as a matrix on canonical skew coordinates.
    pub fn sharp_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = self.skew.vectors().map(|v| self.skew.coords(&self.sharp(v)).unwrap()).collect();
        Matrix::from_columns(self.field, self.skew.dim(), &cols)
    }

    /// Skew basis vectors followed by all pairwise sums; quadratic identities
    /// vanishing on this set vanish identically.
    pub fn polarization_set(&self) -> Vec<Vec<Scalar>> {
        let b: Vec<Vec<Scalar>> = self.skew.vectors().map(|v| v.to_vec()).collect();
        let mut out = b.clone();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                out.push(self.field.add_vec(&b[i], &b[j]));
            }
        }
        out
    }

    /// The identities relating `Q`, `♯` and left multiplications:
    /// - `allq1`: `L_a L_{a♯} = L_{a♯} L_a = −Q(a) id`
    /// - `allq2`: `a(b♯a) = (ab♯)a = Q(a)b − Q(a,b)a`
    /// - `allq3`: `L_a L_{b♯} L_a = Q(a)L_b − Q(a,b)L_a`
    /// - `allq4`: `L_a L_{b♯} L_a L_{c♯} = Q(a)L_b L_{c♯} − Q(a,b)L_a L_{c♯}`
    /// - `allq5`: `(ab♯)² + Q(a,b)ab♯ + Q(a)Q(b)1 = 0`
    ///
    /// Quadratic arguments range over [`AlbertData::polarization_set`], linear
    /// ones over the skew basis, so a pass is a proof.
    pub fn check_identities(&self, a: &StructurableAlgebra) -> Report {
        let f = self.field;
        let n = a.dim();
        let id = Matrix::identity(f, n);
        let pol = self.polarization_set();
        let basis: Vec<Vec<Scalar>> = self.skew.vectors().map(|v| v.to_vec()).collect();
        let l: Vec<Matrix> = pol.iter().map(|x| a.left_mul(x)).collect();
        let lsharp: Vec<Matrix> = pol.iter().map(|x| a.left_mul(&self.sharp(x))).collect();
        let qv: Vec<Scalar> = pol.iter().map(|x| self.q(x)).collect();
        let nb = basis.len();
        let (np, nbu) = (pol.len(), nb);
        let mut r = Report::new();
        r.push(check_tuples("allq1", &[np], n * n, Mode::Exhaustive, |t| {
            let target = id.scale(f.neg(qv[t[0]]));
            l[t[0]].mul(&lsharp[t[0]]) == target && lsharp[t[0]].mul(&l[t[0]]) == target
        }));
        r.push(check_tuples("allq2", &[np, nbu], n, Mode::Exhaustive, |t| {
            let (x, y) = (&pol[t[0]], &basis[t[1]]);
            let yb = self.sharp(y);
            let rhs = f.sub_vec(&f.scaled(y, qv[t[0]]), &f.scaled(x, self.q_polar(x, y)));
            a.mul(x, &a.mul(&yb, x)) == rhs && a.mul(&a.mul(x, &yb), x) == rhs
        }));
        r.push(check_tuples("allq3", &[np, nbu], n * n, Mode::Exhaustive, |t| {
            let (x, y) = (&pol[t[0]], &basis[t[1]]);
            let lhs = l[t[0]].mul(&lsharp[t[1]]).mul(&l[t[0]]);
            let rhs = l[t[1]].scale(qv[t[0]]).sub(&l[t[0]].scale(self.q_polar(x, y)));
            lhs == rhs
        }));
        r.push(check_tuples("allq4", &[np, nbu, nbu], n * n, Mode::Exhaustive, |t| {
            let (x, y) = (&pol[t[0]], &basis[t[1]]);
            let lc = &lsharp[t[2]];
            let lhs = l[t[0]].mul(&lsharp[t[1]]).mul(&l[t[0]]).mul(lc);
            let rhs = l[t[1]].mul(lc).scale(qv[t[0]]).sub(&l[t[0]].mul(lc).scale(self.q_polar(x, y)));
            lhs == rhs
        }));
        r.push(check_tuples("allq5", &[np, np], n, Mode::Exhaustive, |t| {
            let (x, y) = (&pol[t[0]], &pol[t[1]]);
            let w = a.mul(x, &self.sharp(y));
            let mut v = a.mul(&w, &w);
            f.axpy(&mut v, self.q_polar(x, y), &w);
            f.axpy(&mut v, f.mul(qv[t[0]], qv[t[1]]), a.one());
            v.iter().all(|&c| c == 0)
        }));
        r
    }

    /// `M_{a,b} = L_a L_{b♯} − L_b L_{a♯}`.
    pub fn m_operator(&self, a: &StructurableAlgebra, x: &[Scalar], y: &[Scalar]) -> Matrix {
        let lx = a.left_mul(x);
        let ly = a.left_mul(y);
        lx.mul(&a.left_mul(&self.sharp(y))).sub(&ly.mul(&a.left_mul(&self.sharp(x))))
    }

    /// Span of `M_{a,b}` over pairs from the given subspace of the skew part.
    pub fn m_span(&self, a: &StructurableAlgebra, sub: &Subspace) -> Subspace {
        let vs: Vec<&[Scalar]> = sub.vectors().collect();
        let mut ops = Vec::new();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                ops.push(self.m_operator(a, vs[i], vs[j]));
            }
        }
        operator_span(a.field(), a.dim(), &ops)
    }

    /// `Q(s)`-orthogonal complement `S′` of `t = −s♯/Q(s)` inside the skew part.
    pub fn s_prime(&self, s: &[Scalar]) -> Subspace {
        let f = self.field;
        let t = self.t_for(s);
        let row: Vec<Scalar> = self.skew.vectors().map(|v| self.q_polar(v, &t)).collect();
        let ker = kernel_basis(&Matrix::from_rows(f, row.len(), &[row]));
        Subspace::from_vectors(f, self.skew.ambient_dim(), ker.vectors().map(|c| self.skew.combine(c)))
    }

    /// `t = −s♯/Q(s)`, with `L_s L_t = L_t L_s = id`.
    pub fn t_for(&self, s: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let q = self.q(s);
        assert!(q != 0, "Q(s) = 0");
        f.scaled(&self.sharp(s), f.neg(f.inv(q)))
    }
}

/// Dimensions of the images of the Clifford map `a ↦ L_a L_s` on `S′`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CliffordDims {
    /// unital algebra generated by `L_a L_s`, `a` in a basis of `S′`
    pub full: usize,
    /// unital algebra generated by the products `(L_a L_s)(L_b L_s)`, `a < b`
    pub even: usize,
}

/// Clifford relations on a basis of `S′`: `Φ(a)Φ(b) + Φ(b)Φ(a) = Q̃(a,b) id` with
/// `Q̃ = −Q(s)Q`, and `Φ(a)Φ(b) − Φ(b)Φ(a) = Q(s) M_{a,b}`.
pub fn clifford_relations(a: &StructurableAlgebra, q: &AlbertData, s: &[Scalar]) -> Report {
    let f = a.field();
    let n = a.dim();
    let sp = q.s_prime(s);
    let ls = a.left_mul(s);
    let basis: Vec<Vec<Scalar>> = sp.vectors().map(|v| v.to_vec()).collect();
    let phi: Vec<Matrix> = basis.iter().map(|x| a.left_mul(x).mul(&ls)).collect();
    let qs = q.q(s);
    let id = Matrix::identity(f, n);
    let k = basis.len();
    let mut r = Report::new();
    r.push(check_tuples("clifford", &[k, k], n * n, Mode::Exhaustive, |t| {
        let lhs = phi[t[0]].mul(&phi[t[1]]).add(&phi[t[1]].mul(&phi[t[0]]));
        let qt = f.neg(f.mul(qs, q.q_polar(&basis[t[0]], &basis[t[1]])));
        lhs == id.scale(qt)
    }));
    r.push(check_tuples("clifford_commutator", &[k, k], n * n, Mode::Exhaustive, |t| {
        let lhs = phi[t[0]].commutator(&phi[t[1]]);
        lhs == q.m_operator(a, &basis[t[0]], &basis[t[1]]).scale(qs)
    }));
    r
}

/// Dimensions of the unital associative algebras generated by `Φ(S′)` and by
/// the pairwise products of a basis of `Φ(S′)`.
pub fn clifford_image_dims(a: &StructurableAlgebra, s: &[Scalar]) -> Result<CliffordDims, StructurableError> {
    let q = albert_data(a)?;
    if !a.skew().contains(s) {
        return Err(StructurableError::NotSkew);
    }
    if q.q(s) == 0 {
        return Err(StructurableError::SingularLs);
    }
    let f = a.field();
    let n = a.dim();
    let sp = q.s_prime(s);
    let ls = a.left_mul(s);
    let phi: Vec<Matrix> = sp.vectors().map(|x| a.left_mul(x).mul(&ls)).collect();
    let mut pairs = Vec::new();
    for i in 0..phi.len() {
        for j in i + 1..phi.len() {
            pairs.push(phi[i].mul(&phi[j]));
        }
    }
    let full =
        assoc_subalgebra_generated(f, n, &phi, true).map_err(|e| StructurableError::Precondition(e.to_string()))?;
    let even =
        assoc_subalgebra_generated(f, n, &pairs, true).map_err(|e| StructurableError::Precondition(e.to_string()))?;
    Ok(CliffordDims { full: full.dim(), even: even.dim() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::split_composition;

    fn tensor(d1: usize, d2: usize) -> StructurableAlgebra {
        let f = Field::three();
        let c1 = split_composition(d1, f).unwrap();
        let c2 = split_composition(d2, f).unwrap();
        tensor_structurable_unchecked(&c1, &c2).unwrap()
    }

    #[test]
    fn ground_field_instrl_is_one_dimensional() {
        let a = tensor(1, 1);
        let v = a.v_basis(0, 0);
        assert!(v.is_identity());
        assert_eq!(a.instrl().dim(), 1);
    }

    #[test]
    fn v_identities_on_small_tensor() {
        let a = tensor(2, 4);
        let f = a.field();
        let d = a.dim();
        for i in 0..d {
            for j in 0..d {
                let (x, y) = (f.unit_vec(d, i), f.unit_vec(d, j));
                let vxy = a.v_basis(i, j);
                let vyx = a.v_basis(j, i);
                // V_{x,y} + V_{y,x} = L_{xȳ + yx̄}
                let w = f.add_vec(&a.mul(&x, &a.conj(&y)), &a.mul(&y, &a.conj(&x)));
                assert_eq!(vxy.add(&vyx), a.left_mul(&w));
                // V_{x,y}^ε = −V_{y,x}
                assert_eq!(a.t_eps(&vxy), vyx.neg());
                // K_{a,b}(c) = V_{a,c}(b) − V_{b,c}(a) = L_{ab̄ − bā}(c)
                let kab: Vec<Vec<u8>> = (0..d)
                    .map(|k| {
                        let c = f.unit_vec(d, k);
                        f.sub_vec(&a.v_apply(&x, &c, &y), &a.v_apply(&y, &c, &x))
                    })
                    .collect();
                let w2 = f.sub_vec(&a.mul(&x, &a.conj(&y)), &a.mul(&y, &a.conj(&x)));
                assert_eq!(Matrix::from_columns(f, d, &kab), a.left_mul(&w2));
            }
        }
        assert!(a.v_operator(a.one(), a.one()).is_identity());
    }

    #[test]
    fn ls_lt_eps_and_product_formula() {
        let a = tensor(4, 2);
        let f = a.field();
        let sk: Vec<Vec<u8>> = a.skew().vectors().map(|v| v.to_vec()).collect();
        for s in &sk {
            for t in &sk {
                let (ls, lt) = (a.left_mul(s), a.left_mul(t));
                assert_eq!(a.t_eps(&ls.mul(&lt)), lt.mul(&ls).neg());
                // L_s L_t = ½(V_{st,1} − V_{s,t})
                let st = a.mul(s, t);
                let rhs = a.v_operator(&st, a.one()).sub(&a.v_operator(s, t)).scale(f.inv2());
                assert_eq!(ls.mul(&lt), rhs);
            }
        }
    }

    #[test]
    fn axioms_hold_exhaustively_on_small_tensors() {
        for (d1, d2) in [(1, 2), (2, 2), (4, 1), (2, 4), (4, 4)] {
            let a = tensor(d1, d2);
            let r = a.check_axioms(Mode::default());
            assert!(r.passed(), "({d1},{d2}): {r}");
            assert!(r.outcomes.iter().all(|o| o.exhaustive));
        }
    }

    #[test]
    fn octonions_fail_str1_when_involution_is_identity() {
        let f = Field::three();
        let c = split_composition(8, f).unwrap();
        // Cayley algebra with the identity map is not even an involution
        assert!(StructurableAlgebra::new(c.alg().clone(), Matrix::identity(f, 8)).is_err());
    }

    #[test]
    fn skew_dims_and_tensor_dims() {
        for (d1, d2) in [(8, 1), (8, 2), (2, 4), (8, 8)] {
            let a = tensor(d1, d2);
            assert_eq!(a.dim(), d1 * d2);
            assert_eq!(a.skew().dim(), d1 - 1 + d2 - 1);
            assert_eq!(a.skew().dim() + a.herm().dim(), a.dim());
        }
    }

    #[test]
    fn t_eps_is_involutive_on_instrl() {
        let a = tensor(8, 1);
        let f = a.field();
        let inst = a.instrl();
        assert!(a.instrl_is_closed(&inst));
        for v in inst.vectors() {
            let t = crate::algebra::unflatten(f, a.dim(), v);
            assert_eq!(a.t_eps(&a.t_eps(&t)), t);
            assert!(inst.contains(a.t_eps(&t).data()));
        }
    }

    #[test]
    fn albert_form_basics() {
        let a = tensor(8, 2);
        let q = albert_data(&a).unwrap();
        let sh = q.sharp_matrix();
        assert!(sh.mul(&sh).is_identity());
        for v in a.skew().vectors() {
            assert_eq!(q.q(&q.sharp(v)), q.q(v));
        }
        assert!(q.check_identities(&a).passed());
    }

    #[test]
    fn allq3_printed_variant_fails() {
        // the variant with Q(a,b)L_b in place of Q(a,b)L_a does not hold
        let a = tensor(8, 1);
        let q = albert_data(&a).unwrap();
        let b: Vec<Vec<u8>> = a.skew().vectors().map(|v| v.to_vec()).collect();
        let holds_everywhere = b.iter().all(|x| {
            b.iter().all(|y| {
                let lhs = a.left_mul(x).mul(&a.left_mul(&q.sharp(y))).mul(&a.left_mul(x));
                let ly = a.left_mul(y);
                lhs == ly.scale(q.q(x)).sub(&ly.scale(q.q_polar(x, y)))
            })
        });
        assert!(!holds_everywhere);
    }

    #[test]
    fn chosen_skew_is_invertible() {
        let a = tensor(8, 1);
        let q = albert_data(&a).unwrap();
        let s = choose_invertible_skew(&a).unwrap();
        let t = q.t_for(&s);
        assert!(a.skew().contains(&t));
        assert!(a.left_mul(&s).mul(&a.left_mul(&t)).is_identity());
        assert!(a.left_mul(&t).mul(&a.left_mul(&s)).is_identity());
    }

    #[test]
    fn jordan_algebra_has_no_skew_choice() {
        // the field with the identity involution: S = 0
        let a = tensor(1, 1);
        let mut b = a.clone();
        b.factors = None;
        assert!(choose_invertible_skew(&b).is_none());
    }

    #[test]
    fn m_operator_properties() {
        let a = tensor(8, 1);
        let f = a.field();
        let q = albert_data(&a).unwrap();
        let sk: Vec<Vec<u8>> = a.skew().vectors().map(|v| v.to_vec()).collect();
        for x in &sk {
            assert!(q.m_operator(&a, x, x).is_zero());
            for y in &sk {
                let md = a.t_delta(&q.m_operator(&a, x, y));
                for c in &sk {
                    let lhs = md.mul_vec(c);
                    let rhs = f.scaled(&f.sub_vec(&f.scaled(y, q.q_polar(x, c)), &f.scaled(x, q.q_polar(y, c))), 2);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn hermitian_form_over_field() {
        let f = Field::three();
        let e = InvolutiveAlgebra {
            alg: Algebra::from_entries(f, vec!["1".into()], vec![(0, 0, 0, 1)]),
            inv: Matrix::identity(f, 1),
        };
        let action = vec![Matrix::identity(f, 2)];
        let h = Tensor::from_entries(f, &[2, 2], 1, vec![(vec![0, 0], 0, 1), (vec![1, 1], 0, 1)]);
        let a = hermitian_form_structurable(&e, &action, &h).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.check_axioms(Mode::Exhaustive).passed());
        assert_eq!(a.skew().dim(), 0);
        // W = 0 gives E back
        let h0 = Tensor::from_entries(f, &[0, 0], 1, vec![]);
        let a0 = hermitian_form_structurable(&e, &[Matrix::zeros(f, 0, 0)], &h0).unwrap();
        assert_eq!(a0.dim(), 1);
    }

    #[test]
    fn hermitian_form_rejects_non_hermitian_h() {
        let f = Field::three();
        let e = InvolutiveAlgebra {
            alg: Algebra::from_entries(f, vec!["1".into()], vec![(0, 0, 0, 1)]),
            inv: Matrix::identity(f, 1),
        };
        let h = Tensor::from_entries(f, &[2, 2], 1, vec![(vec![0, 1], 0, 1)]);
        assert!(hermitian_form_structurable(&e, &[Matrix::identity(f, 2)], &h).is_err());
    }
}
