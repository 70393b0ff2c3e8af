//! A small language for multilinear identities and a checker that evaluates
//! them on basis tuples of a bound algebra or triple system.
//!
//! ```text
//! # comments run to the end of the line
//! var a : J;                       # optional sort declarations (default T)
//! A(a, T(x,y,z)) = T(A(a,x),y,z) - T(x,A(a,y),z) + T(x,y,A(a,z))
//! ```
//!
//! Terms are integer literals, `inv2` (the inverse of 2), variables, operator
//! applications `op(e, …)`, `sgn(x,y)` (the super-sign `(−1)^{|x||y|}` of two
//! variables, defined on homogeneous basis vectors), sums, differences,
//! negation and products `c * e` where at least one factor is scalar.

use crate::check::{check_tuples, random_vector, rng, Mode, Outcome};
use crate::field::{Field, Scalar};
use crate::jternary::{JTernaryPackage, Sign, TripleSystem};
use crate::structurable::StructurableAlgebra;
use crate::superalgebra::LieSuperalgebra;
use crate::tensor::Tensor;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

/// Sort of variables without a declaration.
pub const DEFAULT_SORT: &str = "T";
/// Codomain tag of scalar-valued operators.
pub const SCALAR: &str = "scalar";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown operator {0}")]
    UnknownOperator(String),
    #[error("operator {op} takes {expected} arguments, got {got}")]
    Arity { op: String, expected: usize, got: usize },
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("no dimension bound for sort {0}")]
    UnknownSort(String),
    #[error("no parities bound for sort {0}")]
    MissingParity(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Inv2,
    Var(String),
    Sgn(String, String),
    App(String, Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    /// declared sorts, in declaration order
    pub sorts: Vec<(String, String)>,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Identity {
    pub fn sort_of(&self, var: &str) -> &str {
        self.sorts.iter().find(|(v, _)| v == var).map_or(DEFAULT_SORT, |(_, s)| s)
    }

    /// Variables in order of first appearance, left to right.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for e in [&self.lhs, &self.rhs] {
            e.collect_vars(&mut out);
        }
        out
    }

    /// Operators with their arities.
    pub fn operators(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in [&self.lhs, &self.rhs] {
            e.collect_ops(&mut out);
        }
        out
    }
}

impl Expr {
    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Expr::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Expr::Neg(a) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Int(_) | Expr::Inv2 | Expr::Sgn(..) => {}
        }
    }

    fn collect_ops(&self, out: &mut BTreeMap<String, usize>) {
        match self {
            Expr::App(op, args) => {
                out.insert(op.clone(), args.len());
                args.iter().for_each(|a| a.collect_ops(out));
            }
            Expr::Neg(a) => a.collect_ops(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_ops(out);
                b.collect_ops(out);
            }
            _ => {}
        }
    }

    /// Multiset of variables of a homogeneous expression (`None` for a
    /// literal zero, which is compatible with any degree).
    fn degree(&self) -> Result<Option<BTreeMap<String, usize>>, String> {
        let merge = |a: Option<BTreeMap<String, usize>>, b: Option<BTreeMap<String, usize>>| match (a, b) {
            (None, x) | (x, None) => x,
            (Some(mut x), Some(y)) => {
                for (k, v) in y {
                    *x.entry(k).or_default() += v;
                }
                Some(x)
            }
        };
        Ok(match self {
            Expr::Int(0) => None,
            Expr::Int(_) | Expr::Inv2 | Expr::Sgn(..) => Some(BTreeMap::new()),
            Expr::Var(v) => Some(BTreeMap::from([(v.clone(), 1)])),
            Expr::App(_, args) => {
                let mut acc = Some(BTreeMap::new());
                for a in args {
                    match a.degree()? {
                        None => return Ok(None),
                        d => acc = merge(acc, d),
                    }
                }
                acc
            }
            Expr::Neg(a) => a.degree()?,
            Expr::Mul(a, b) => match (a.degree()?, b.degree()?) {
                (None, _) | (_, None) => None,
                (x, y) => merge(x, y),
            },
            Expr::Add(a, b) | Expr::Sub(a, b) => match (a.degree()?, b.degree()?) {
                (None, x) | (x, None) => x,
                (Some(x), Some(y)) if x == y => Some(x),
                (Some(x), Some(y)) => return Err(format!("summands of different degree: {x:?} and {y:?}")),
            },
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(..) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, min: u8| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Inv2 => write!(f, "inv2"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Sgn(a, b) => write!(f, "sgn({a},{b})"),
            Expr::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 3)
            }
            Expr::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " + ")?;
                wrap(f, b, 2)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " - ")?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "*")?;
                wrap(f, b, 3)
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, s) in &self.sorts {
            writeln!(f, "var {v} : {s};")?;
        }
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> IdentityError {
    IdentityError::Syntax { line, col, msg: msg.into() }
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer, IdentityError> {
        let mut toks = Vec::new();
        let (mut line, mut col) = (1, 1);
        let mut chars = src.chars().peekable();
        while let Some(&c) = chars.peek() {
            let (l0, c0) = (line, col);
            if c == '\n' {
                chars.next();
                line += 1;
                col = 1;
            } else if c.is_whitespace() {
                chars.next();
                col += 1;
            } else if c == '#' {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                let n = s.parse().map_err(|_| syntax(l0, c0, "integer literal too large"))?;
                toks.push((Tok::Int(n), l0, c0));
            } else if c.is_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                    s.push(d);
                    chars.next();
                    col += 1;
                }
                toks.push((Tok::Ident(s), l0, c0));
            } else if "()+-*=,:;".contains(c) {
                chars.next();
                col += 1;
                toks.push((Tok::Sym(c), l0, c0));
            } else {
                return Err(syntax(l0, c0, format!("unexpected character {c:?}")));
            }
        }
        toks.push((Tok::Eof, line, col));
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> IdentityError {
        let (l, c) = self.here();
        let what = match self.peek() {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("{s:?}"),
            Tok::Int(n) => n.to_string(),
            Tok::Sym(c) => format!("{c:?}"),
        };
        syntax(l, c, format!("{} at {what}", msg.into()))
    }

    fn expect(&mut self, c: char) -> Result<(), IdentityError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn ident(&mut self) -> Result<String, IdentityError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.err("expected identifier")),
        }
    }
}

struct Parser {
    lex: Lexer,
    arities: HashMap<String, usize>,
}

impl Parser {
    fn expr(&mut self) -> Result<Expr, IdentityError> {
        let mut e = self.term()?;
        loop {
            match self.lex.peek() {
                Tok::Sym('+') => {
                    self.lex.next();
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.lex.next();
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, IdentityError> {
        let mut e = self.unary()?;
        while *self.lex.peek() == Tok::Sym('*') {
            self.lex.next();
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, IdentityError> {
        if *self.lex.peek() == Tok::Sym('-') {
            self.lex.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, IdentityError> {
        let (line, col) = self.lex.here();
        match self.lex.peek().clone() {
            Tok::Int(n) => {
                self.lex.next();
                Ok(Expr::Int(n))
            }
            Tok::Sym('(') => {
                self.lex.next();
                let e = self.expr()?;
                self.lex.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.lex.next();
                if *self.lex.peek() != Tok::Sym('(') {
                    return Ok(if name == "inv2" { Expr::Inv2 } else { Expr::Var(name) });
                }
                self.lex.next();
                let mut args = vec![self.expr()?];
                while *self.lex.peek() == Tok::Sym(',') {
                    self.lex.next();
                    args.push(self.expr()?);
                }
                self.lex.expect(')')?;
                if name == "sgn" {
                    return match args.as_slice() {
                        [Expr::Var(a), Expr::Var(b)] => Ok(Expr::Sgn(a.clone(), b.clone())),
                        _ => Err(syntax(line, col, "sgn takes two variables")),
                    };
                }
                if name == "inv2" {
                    return Err(syntax(line, col, "inv2 is a constant"));
                }
                match self.arities.get(&name) {
                    Some(&a) if a != args.len() => {
                        return Err(syntax(
                            line,
                            col,
                            format!("operator {name} used with {} arguments, earlier with {a}", args.len()),
                        ))
                    }
                    _ => {
                        self.arities.insert(name.clone(), args.len());
                    }
                }
                Ok(Expr::App(name, args))
            }
            _ => Err(self.lex.err("expected a term")),
        }
    }
}

/// Parses one relation with optional `var …: Sort;` declarations. Checks that
/// both sides are homogeneous and multilinear in the same variables.
pub fn parse_identity(src: &str) -> Result<Identity, IdentityError> {
    let mut p = Parser { lex: Lexer::new(src)?, arities: HashMap::new() };
    let mut sorts: Vec<(String, String)> = Vec::new();
    while *p.lex.peek() == Tok::Ident("var".into())
        && p.lex.toks.get(p.lex.pos + 1).is_some_and(|t| t.0 != Tok::Sym('('))
    {
        p.lex.next();
        let mut names = vec![p.lex.ident()?];
        while *p.lex.peek() == Tok::Sym(',') {
            p.lex.next();
            names.push(p.lex.ident()?);
        }
        p.lex.expect(':')?;
        let sort = p.lex.ident()?;
        p.lex.expect(';')?;
        for n in names {
            if sorts.iter().any(|(v, _)| *v == n) {
                return Err(p.lex.err(format!("variable {n} declared twice")));
            }
            sorts.push((n, sort.clone()));
        }
    }
    let lhs = p.expr()?;
    p.lex.expect('=')?;
    let rhs = p.expr()?;
    if *p.lex.peek() != Tok::Eof {
        return Err(p.lex.err("expected end of input"));
    }
    let (line, col) = p.lex.here();
    let degree = |e: &Expr| e.degree().map_err(|m| syntax(line, col, m));
    let (dl, dr) = (degree(&lhs)?, degree(&rhs)?);
    let deg = match (dl, dr) {
        (Some(a), Some(b)) if a != b => return Err(syntax(line, col, "sides have different variables")),
        (a, b) => a.or(b),
    };
    if let Some(d) = deg {
        if let Some((v, _)) = d.iter().find(|(_, &n)| n > 1) {
            return Err(syntax(line, col, format!("variable {v} repeats; only multilinear identities are supported")));
        }
    }
    Ok(Identity { sorts, lhs, rhs })
}

/// A multilinear map bound to an operator name.
#[derive(Clone, Debug)]
pub struct BoundOp {
    pub in_sorts: Vec<String>,
    /// a sort name, or [`SCALAR`] for a map with one-dimensional output
    pub out_sort: String,
    pub map: Tensor,
}

/// Interpretation of sorts and operators.
#[derive(Clone, Debug)]
pub struct Binding {
    pub field: Field,
    pub dims: HashMap<String, usize>,
    pub ops: HashMap<String, BoundOp>,
    /// parities of basis vectors, needed by `sgn`
    pub parities: HashMap<String, Vec<u8>>,
}

impl Binding {
    pub fn new(field: Field) -> Binding {
        Binding { field, dims: HashMap::new(), ops: HashMap::new(), parities: HashMap::new() }
    }

    pub fn sort(mut self, name: &str, dim: usize) -> Binding {
        self.dims.insert(name.into(), dim);
        self
    }

    pub fn op(mut self, name: &str, in_sorts: &[&str], out_sort: &str, map: Tensor) -> Binding {
        let in_sorts = in_sorts.iter().map(|s| s.to_string()).collect();
        self.ops.insert(name.into(), BoundOp { in_sorts, out_sort: out_sort.into(), map });
        self
    }

    /// `T` for the triple product and `K(x,y,z) = xzy − yzx`.
    pub fn for_triple(ts: &TripleSystem) -> Binding {
        let f = ts.field();
        let d = ts.dim();
        let k = Tensor::from_fn(f, &[d, d, d], d, |idx| {
            let (x, y, z) = (f.unit_vec(d, idx[0]), f.unit_vec(d, idx[1]), f.unit_vec(d, idx[2]));
            ts.k_apply(&x, &y, &z, Sign::Plus)
        });
        Binding::new(f).sort("T", d).op("T", &["T"; 3], "T", ts.tensor().clone()).op("K", &["T"; 3], "T", k)
    }

    /// [`Binding::for_triple`] plus sort `J`, the action `A(a,x) = a(x)` and
    /// `P(x,y,z) = ⟨x|y⟩z`.
    pub fn for_package(pkg: &JTernaryPackage) -> Binding {
        let ts = &pkg.system;
        let f = ts.field();
        let d = ts.dim();
        let ops = pkg.j_ops();
        let act = Tensor::from_fn(f, &[ops.len(), d], d, |idx| ops[idx[0]].column(idx[1]));
        let pair = Tensor::from_fn(f, &[d, d, d], d, |idx| {
            let (x, y, z) = (f.unit_vec(d, idx[0]), f.unit_vec(d, idx[1]), f.unit_vec(d, idx[2]));
            f.scaled(&ts.k_apply(&x, &y, &z, Sign::Plus), f.neg(1))
        });
        Binding::for_triple(ts).sort("J", ops.len()).op("A", &["J", "T"], "T", act).op("P", &["T"; 3], "T", pair)
    }

    /// `M` for the product, `I` for the involution and `V` for `V_{x,y}z`.
    pub fn for_structurable(a: &StructurableAlgebra) -> Binding {
        let f = a.field();
        let d = a.dim();
        let inv = Tensor::from_fn(f, &[d], d, |idx| a.inv().column(idx[0]));
        Binding::new(f).sort("T", d).op("M", &["T"; 2], "T", a.alg().table().clone()).op("I", &["T"], "T", inv).op(
            "V",
            &["T"; 3],
            "T",
            a.v_tensor().clone(),
        )
    }

    /// `B` for the bracket, with parities for `sgn`.
    pub fn for_superalgebra(s: &LieSuperalgebra) -> Binding {
        let mut b = Binding::new(s.field()).sort("T", s.dim()).op("B", &["T"; 2], "T", s.alg.table().clone());
        b.parities.insert("T".into(), s.parity.clone());
        b
    }

    /// `B` for the product of an algebra (all even).
    pub fn for_algebra(alg: &crate::algebra::Algebra) -> Binding {
        let mut b = Binding::new(alg.field()).sort("T", alg.dim()).op("B", &["T"; 2], "T", alg.table().clone());
        b.parities.insert("T".into(), vec![0; alg.dim()]);
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Scalar,
    Vector(String),
    /// a literal zero, compatible with anything
    Zero,
}

fn infer(e: &Expr, id: &Identity, b: &Binding) -> Result<Kind, IdentityError> {
    let unify = |x: Kind, y: Kind, what: &str| -> Result<Kind, IdentityError> {
        match (x, y) {
            (Kind::Zero, k) | (k, Kind::Zero) => Ok(k),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(IdentityError::Sort(format!("{what}: {x:?} vs {y:?}"))),
        }
    };
    Ok(match e {
        Expr::Int(0) => Kind::Zero,
        Expr::Int(_) | Expr::Inv2 => Kind::Scalar,
        Expr::Sgn(x, y) => {
            for v in [x, y] {
                let s = id.sort_of(v);
                if !b.parities.contains_key(s) {
                    return Err(IdentityError::MissingParity(s.into()));
                }
            }
            Kind::Scalar
        }
        Expr::Var(v) => {
            let s = id.sort_of(v);
            if !b.dims.contains_key(s) {
                return Err(IdentityError::UnknownSort(s.into()));
            }
            Kind::Vector(s.into())
        }
        Expr::App(op, args) => {
            let bop = b.ops.get(op).ok_or_else(|| IdentityError::UnknownOperator(op.clone()))?;
            if bop.in_sorts.len() != args.len() {
                return Err(IdentityError::Arity { op: op.clone(), expected: bop.in_sorts.len(), got: args.len() });
            }
            for (a, s) in args.iter().zip(&bop.in_sorts) {
                unify(infer(a, id, b)?, Kind::Vector(s.clone()), &format!("argument of {op}"))?;
            }
            if bop.out_sort == SCALAR {
                Kind::Scalar
            } else {
                Kind::Vector(bop.out_sort.clone())
            }
        }
        Expr::Neg(a) => infer(a, id, b)?,
        Expr::Add(x, y) | Expr::Sub(x, y) => unify(infer(x, id, b)?, infer(y, id, b)?, "summands")?,
        Expr::Mul(x, y) => match (infer(x, id, b)?, infer(y, id, b)?) {
            (Kind::Zero, _) | (_, Kind::Zero) => Kind::Zero,
            (Kind::Scalar, k) | (k, Kind::Scalar) => k,
            (x, y) => return Err(IdentityError::Sort(format!("product of two vectors {x:?} and {y:?}"))),
        },
    })
}

enum Val {
    Scalar(Scalar),
    Vector(Vec<Scalar>),
    Zero,
}

struct Env<'a> {
    f: Field,
    b: &'a Binding,
    vars: HashMap<&'a str, (Vec<Scalar>, Option<u8>)>,
}

impl Env<'_> {
    fn eval(&self, e: &Expr) -> Val {
        let f = self.f;
        match e {
            Expr::Int(0) => Val::Zero,
            Expr::Int(n) => Val::Scalar(f.from_i64(*n)),
            Expr::Inv2 => Val::Scalar(f.inv2()),
            Expr::Sgn(x, y) => {
                let both_odd = self.vars[x.as_str()].1 == Some(1) && self.vars[y.as_str()].1 == Some(1);
                Val::Scalar(if both_odd { f.neg(1) } else { 1 })
            }
            Expr::Var(v) => Val::Vector(self.vars[v.as_str()].0.clone()),
            Expr::App(op, args) => {
                let bop = &self.b.ops[op];
                let vals: Vec<Vec<Scalar>> = args
                    .iter()
                    .zip(&bop.in_sorts)
                    .map(|(a, s)| match self.eval(a) {
                        Val::Vector(v) => v,
                        _ => vec![0; self.b.dims[s]],
                    })
                    .collect();
                let refs: Vec<&[Scalar]> = vals.iter().map(|v| v.as_slice()).collect();
                let out = bop.map.apply(&refs);
                if bop.out_sort == SCALAR {
                    Val::Scalar(out[0])
                } else {
                    Val::Vector(out)
                }
            }
            Expr::Neg(a) => match self.eval(a) {
                Val::Scalar(c) => Val::Scalar(f.neg(c)),
                Val::Vector(v) => Val::Vector(f.scaled(&v, f.neg(1))),
                Val::Zero => Val::Zero,
            },
            Expr::Add(x, y) => self.combine(self.eval(x), self.eval(y), 1),
            Expr::Sub(x, y) => self.combine(self.eval(x), self.eval(y), f.neg(1)),
            Expr::Mul(x, y) => match (self.eval(x), self.eval(y)) {
                (Val::Zero, _) | (_, Val::Zero) => Val::Zero,
                (Val::Scalar(a), Val::Scalar(c)) => Val::Scalar(f.mul(a, c)),
                (Val::Scalar(a), Val::Vector(v)) | (Val::Vector(v), Val::Scalar(a)) => Val::Vector(f.scaled(&v, a)),
                (Val::Vector(_), Val::Vector(_)) => unreachable!("rejected by inference"),
            },
        }
    }

    fn combine(&self, x: Val, y: Val, c: Scalar) -> Val {
        let f = self.f;
        match (x, y) {
            (x, Val::Zero) => x,
            (Val::Zero, Val::Scalar(b)) => Val::Scalar(f.mul(c, b)),
            (Val::Zero, Val::Vector(v)) => Val::Vector(f.scaled(&v, c)),
            (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(f.add(a, f.mul(c, b))),
            (Val::Vector(mut a), Val::Vector(b)) => {
                f.axpy(&mut a, c, &b);
                Val::Vector(a)
            }
            _ => unreachable!("rejected by inference"),
        }
    }
}

fn is_zero(v: &Val) -> bool {
    match v {
        Val::Zero => true,
        Val::Scalar(c) => *c == 0,
        Val::Vector(v) => v.iter().all(|&c| c == 0),
    }
}

/// Type-checks `id` against `b`; returns the variables with their dimensions
/// and the width of the compared values.
fn prepare(id: &Identity, b: &Binding) -> Result<(Vec<String>, Vec<usize>, usize), IdentityError> {
    let kl = infer(&id.lhs, id, b)?;
    let kr = infer(&id.rhs, id, b)?;
    let kind = match (kl, kr) {
        (Kind::Zero, k) | (k, Kind::Zero) => k,
        (x, y) if x == y => x,
        (x, y) => return Err(IdentityError::Sort(format!("sides: {x:?} vs {y:?}"))),
    };
    let width = match kind {
        Kind::Vector(s) => b.dims[&s],
        _ => 1,
    };
    let vars = id.variables();
    let dims = vars.iter().map(|v| b.dims[id.sort_of(v)]).collect();
    Ok((vars, dims, width))
}

/// Checks `lhs = rhs` on basis tuples (exhaustive or sampled per `mode`);
/// the counterexample is the first failing tuple of basis indices, one per
/// variable in order of first appearance.
pub fn check_identity(name: &str, id: &Identity, b: &Binding, mode: Mode) -> Result<Outcome, IdentityError> {
    let (vars, dims, width) = prepare(id, b)?;
    let f = b.field;
    Ok(check_tuples(name, &dims, width, mode, |t| {
        let mut env = Env { f, b, vars: HashMap::new() };
        for (k, v) in vars.iter().enumerate() {
            let s = id.sort_of(v);
            let parity = b.parities.get(s).map(|p| p[t[k]]);
            env.vars.insert(v.as_str(), (f.unit_vec(dims[k], t[k]), parity));
        }
        let l = env.eval(&id.lhs);
        let r = env.eval(&id.rhs);
        is_zero(&env.combine(l, r, f.neg(1)))
    }))
}

/// Checks the identity on `samples` seeded random vectors (not basis
/// vectors). Identities using `sgn` need homogeneous arguments and are
/// rejected.
pub fn check_identity_random_vectors(
    name: &str,
    id: &Identity,
    b: &Binding,
    samples: usize,
    seed: u64,
) -> Result<Outcome, IdentityError> {
    if format!("{}{}", id.lhs, id.rhs).contains("sgn(") {
        return Err(IdentityError::Sort("sgn needs homogeneous basis arguments".into()));
    }
    let (vars, dims, _) = prepare(id, b)?;
    let f = b.field;
    let mut r = rng(seed);
    for s in 0..samples {
        let mut env = Env { f, b, vars: HashMap::new() };
        for (k, v) in vars.iter().enumerate() {
            env.vars.insert(v.as_str(), (random_vector(&mut r, f, dims[k]), None));
        }
        let l = env.eval(&id.lhs);
        let rv = env.eval(&id.rhs);
        if !is_zero(&env.combine(l, rv, f.neg(1))) {
            return Ok(Outcome::fail(name, vec![s]));
        }
    }
    Ok(Outcome::pass(name, false, samples as u64))
}

/// The shipped identity corpus: `(name, source)`.
pub fn corpus() -> Vec<(&'static str, &'static str)> {
    macro_rules! entry {
        ($name:literal) => {
            ($name, include_str!(concat!("../corpus/", $name, ".id")))
        };
    }
    vec![
        entry!("hein1"),
        entry!("hein2"),
        entry!("fk1"),
        entry!("fk2"),
        entry!("special"),
        entry!("kk_symmetrized"),
        entry!("allison1"),
        entry!("allison2"),
        entry!("allison3"),
        entry!("allison4"),
        entry!("allison5"),
        entry!("allison6"),
        entry!("str1"),
        entry!("str2"),
        entry!("lts1"),
        entry!("lts2"),
        entry!("lts3"),
        entry!("jacobi"),
        entry!("super_anticommutativity"),
        entry!("super_jacobi"),
    ]
}

/// A corpus entry by name, parsed.
pub fn corpus_identity(name: &str) -> Option<Identity> {
    corpus().into_iter().find(|(n, _)| *n == name).map(|(_, src)| parse_identity(src).expect("corpus parses"))
}
