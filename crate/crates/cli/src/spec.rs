//! Construction specs: `name(args)` with optional prefix operators, e.g.
//! `tensor(8,4)`, `kantor tensor(8,8)`, `lt proto-osp(2,2)`.

use anyhow::{anyhow, Context};
use char3_core::composition::split_composition;
use char3_core::io::{self, Artifact};
use char3_core::jternary::{
    first_argument_system, from_structurable, jordanize, osp_system, psl_system, weak_counterexample, zero_system,
    TripleSystem,
};
use char3_core::lie::{
    attach_kantor_sl2, build_kantor, build_lt, kt_standard_embedding, kt_triple_system, KantorVariant,
};
use char3_core::reference::{gl, osp, osp_split, psl, sl};
use char3_core::semisimplify::direct_from_jternary;
use char3_core::structurable::{
    albert_data, choose_invertible_skew, smirnov_algebra, tensor_structurable, StructurableAlgebra,
};
use char3_core::superalgebra::LieSuperalgebra;
use char3_core::{Field, Mode};
use std::path::Path;

/// Why resolving a target failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    /// bad spec, unreadable or malformed file, inapplicable operation
    Usage(anyhow::Error),
    /// the named constructor ran and rejected its input
    Construction(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Construction(_) => 3,
        }
    }
    pub fn message(&self) -> String {
        match self {
            Failure::Usage(e) | Failure::Construction(e) => format!("{e:#}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

fn construction<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Construction(anyhow!("{e}"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spec {
    Base { name: String, args: Vec<usize> },
    Wrap { op: String, inner: Box<Spec> },
}

const PREFIXES: [&str; 7] = ["kantor", "kantor-v2", "kt", "lts", "jternary", "lt", "super"];

pub const HELP: &str = "\
bases: composition(d), tensor(d1,d2), smirnov, weak-counterexample, zero(d), first-argument(d),
       proto-osp(n,m), proto-psl(n,m), gl(m|n), sl(m|n), psl(m|n), osp(m|2r), osp-split(m|2r)
prefixes: jternary X (structurable to J-ternary), kantor X, kantor-v2 X, kt X, lts X (structurable),
          lt X, super X (triple system or structurable)";

pub fn parse_spec(src: &str) -> Result<Spec, Failure> {
    let words: Vec<&str> = src.split_whitespace().collect();
    let Some((last, prefixes)) = words.split_last() else {
        return Err(usage("empty construction spec"));
    };
    let mut spec = parse_base(last)?;
    for &op in prefixes.iter().rev() {
        if !PREFIXES.contains(&op) {
            return Err(usage(format!("unknown prefix {op:?}")));
        }
        spec = Spec::Wrap { op: op.into(), inner: Box::new(spec) };
    }
    Ok(spec)
}

fn parse_base(word: &str) -> Result<Spec, Failure> {
    let (name, args) = match word.split_once('(') {
        None => (word, Vec::new()),
        Some((name, rest)) => {
            let inner = rest.strip_suffix(')').ok_or_else(|| usage(format!("missing ')' in {word:?}")))?;
            let args = inner
                .split([',', '|'])
                .map(|a| a.trim().parse::<usize>().map_err(|_| usage(format!("bad argument {a:?} in {word:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            (name, args)
        }
    };
    let arity = match name {
        "smirnov" | "weak-counterexample" => 0,
        "composition" | "zero" | "first-argument" => 1,
        "tensor" | "proto-osp" | "proto-psl" | "gl" | "sl" | "psl" | "osp" | "osp-split" => 2,
        _ => return Err(usage(format!("unknown construction {name:?}"))),
    };
    if args.len() != arity {
        return Err(usage(format!("{name} takes {arity} argument(s), got {}", args.len())));
    }
    Ok(Spec::Base { name: name.into(), args })
}

fn composition_dim(d: usize) -> Result<usize, Failure> {
    if [1, 2, 4, 8].contains(&d) {
        Ok(d)
    } else {
        Err(usage(format!("composition algebras have dimension 1, 2, 4 or 8, not {d}")))
    }
}

pub fn build(spec: &Spec, f: Field) -> Result<Artifact, Failure> {
    match spec {
        Spec::Base { name, args } => build_base(name, args, f),
        Spec::Wrap { op, inner } => {
            let inner = build(inner, f)?;
            apply(op, inner)
        }
    }
}

fn build_base(name: &str, args: &[usize], f: Field) -> Result<Artifact, Failure> {
    let a = |i: usize| args[i];
    Ok(match name {
        "composition" => {
            let c = split_composition(composition_dim(a(0))?, f).map_err(construction)?;
            Artifact::Structurable(StructurableAlgebra::new(c.alg().clone(), c.conj().clone()).map_err(construction)?)
        }
        "tensor" => {
            let c1 = split_composition(composition_dim(a(0))?, f).map_err(construction)?;
            let c2 = split_composition(composition_dim(a(1))?, f).map_err(construction)?;
            Artifact::Structurable(tensor_structurable(&c1, &c2).map_err(construction)?)
        }
        "smirnov" => {
            let c = split_composition(8, f).map_err(construction)?;
            let ia = smirnov_algebra(&c).map_err(construction)?;
            Artifact::Structurable(StructurableAlgebra::new(ia.alg, ia.inv).map_err(construction)?)
        }
        "weak-counterexample" => Artifact::Triple(weak_counterexample(f)),
        "zero" => Artifact::Triple(zero_system(f, a(0))),
        "first-argument" => Artifact::Triple(first_argument_system(f, a(0))),
        "proto-osp" => Artifact::Triple(osp_system(f, a(0), a(1)).map_err(construction)?),
        "proto-psl" => Artifact::Triple(psl_system(f, a(0), a(1)).map_err(construction)?),
        "gl" => Artifact::Super(gl(f, a(0), a(1)).sup),
        "sl" => Artifact::Super(sl(f, a(0), a(1)).map_err(construction)?.sup),
        "psl" => Artifact::Super(psl(f, a(0), a(1)).map_err(construction)?.sup),
        "osp" => Artifact::Super(osp(f, a(0), a(1)).map_err(construction)?.sup),
        "osp-split" => Artifact::Super(osp_split(f, a(0), a(1)).map_err(construction)?.sup),
        _ => unreachable!("names are validated by parse_base"),
    })
}

fn expect_structurable(op: &str, x: Artifact) -> Result<StructurableAlgebra, Failure> {
    match x {
        Artifact::Structurable(a) => Ok(a),
        other => Err(usage(format!("{op} needs a structurable algebra, got {}", other.kind()))),
    }
}

/// The J-ternary system on a structurable algebra for the first invertible
/// skew element found.
pub fn jternary_of(a: &StructurableAlgebra) -> Result<TripleSystem, Failure> {
    let s = choose_invertible_skew(a).ok_or_else(|| construction("no skew element with invertible L_s"))?;
    from_structurable(a, &s).map_err(construction)
}

/// Triple systems pass through; structurable algebras go through
/// [`jternary_of`].
pub fn as_triple(x: Artifact) -> Result<TripleSystem, Failure> {
    match x {
        Artifact::Triple(t) => Ok(t),
        Artifact::Structurable(a) => jternary_of(&a),
        other => Err(usage(format!("expected a triple system, got {}", other.kind()))),
    }
}

/// Superalgebras pass through; triple systems and structurable algebras go
/// through the direct construction.
pub fn as_super(x: Artifact) -> Result<LieSuperalgebra, Failure> {
    match x {
        Artifact::Super(s) => Ok(s),
        other => direct_from_jternary(&as_triple(other)?).map_err(construction),
    }
}

fn apply(op: &str, x: Artifact) -> Result<Artifact, Failure> {
    Ok(match op {
        "jternary" => Artifact::Triple(jternary_of(&expect_structurable(op, x)?)?),
        "kantor" | "kantor-v2" => {
            let a = expect_structurable(op, x)?;
            let variant = if op == "kantor" { KantorVariant::V1 } else { KantorVariant::V2 };
            let mut kan = build_kantor(&a, variant).map_err(construction)?;
            if let (Ok(q), Some(s)) = (albert_data(&a), choose_invertible_skew(&a)) {
                if variant == KantorVariant::V1 {
                    attach_kantor_sl2(&mut kan, &a, &s, &q.t_for(&s)).map_err(construction)?;
                }
            }
            Artifact::Graded(kan.lie)
        }
        "kt" => Artifact::Graded(kt_standard_embedding(&expect_structurable(op, x)?).map_err(construction)?),
        "lts" => Artifact::Triple(kt_triple_system(&expect_structurable(op, x)?)),
        "lt" => {
            let t = as_triple(x)?;
            let pkg = jordanize(&t, Mode::default()).map_err(construction)?;
            Artifact::Graded(build_lt(&pkg).map_err(construction)?)
        }
        "super" => Artifact::Super(as_super(x)?),
        _ => unreachable!("prefixes are validated by parse_spec"),
    })
}

/// A target is a JSON file when such a path exists, otherwise a spec.
pub fn resolve(words: &[String], f: Field) -> Result<Artifact, Failure> {
    let joined = words.join(" ");
    let path = Path::new(&joined);
    if words.len() == 1 && (path.is_file() || joined.ends_with(".json")) {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {joined}")).map_err(Failure::Usage)?;
        return io::parse(&text).map_err(|e| usage(format!("{joined}: {e}")));
    }
    build(&parse_spec(&joined)?, f)
}
