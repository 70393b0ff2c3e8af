//! JSON artifacts, schema `alg/1`.
//!
//! One flat object covers every structure: `mul` carries a bilinear product,
//! `triple` a trilinear one, and the optional fields add an involution,
//! parities, a grading with an sl2-triple, or a derivation. Coefficients are
//! written as representatives in `0..p`; any integer is accepted on input.

use crate::algebra::Algebra;
use crate::field::{Field, Scalar};
use crate::jternary::TripleSystem;
use crate::lie::{GradedLieAlgebra, Sl2Triple};
use crate::linalg::Matrix;
use crate::structurable::StructurableAlgebra;
use crate::superalgebra::LieSuperalgebra;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: &str = "alg/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("invalid artifact: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgJson {
    pub schema: String,
    pub p: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul: Option<Vec<[i64; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<Vec<[i64; 5]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl2: Option<[Vec<i64>; 3]>,
    /// a derivation, for feeding the semisimplification recipe
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Vec<i64>>>,
}

/// What an [`AlgJson`] decodes to, chosen by the fields present.
#[derive(Clone, Debug)]
pub enum Artifact {
    Algebra(Algebra),
    Structurable(StructurableAlgebra),
    Triple(TripleSystem),
    Graded(GradedLieAlgebra),
    Super(LieSuperalgebra),
    /// an algebra with a derivation
    WithDerivation(Algebra, Matrix),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Algebra(_) => "algebra",
            Artifact::Structurable(_) => "structurable",
            Artifact::Triple(_) => "triple",
            Artifact::Graded(_) => "graded",
            Artifact::Super(_) => "super",
            Artifact::WithDerivation(..) => "derivation",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Artifact::Algebra(a) | Artifact::WithDerivation(a, _) => a.dim(),
            Artifact::Structurable(a) => a.dim(),
            Artifact::Triple(t) => t.dim(),
            Artifact::Graded(g) => g.dim(),
            Artifact::Super(s) => s.dim(),
        }
    }

    pub fn to_json(&self) -> AlgJson {
        match self {
            Artifact::Algebra(a) => algebra_json(a),
            Artifact::Structurable(a) => structurable_json(a),
            Artifact::Triple(t) => triple_json(t),
            Artifact::Graded(g) => graded_json(g),
            Artifact::Super(s) => super_json(s),
            Artifact::WithDerivation(a, d) => {
                let mut j = algebra_json(a);
                j.delta = Some(matrix_rows(d));
                j
            }
        }
    }
}

fn vec_i64(v: &[Scalar]) -> Vec<i64> {
    v.iter().map(|&c| c as i64).collect()
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<i64>> {
    m.row_vectors().map(vec_i64).collect()
}

fn header(f: Field, names: &[String]) -> AlgJson {
    AlgJson { schema: SCHEMA.into(), p: f.p() as u32, dim: names.len(), basis: names.to_vec(), ..AlgJson::default() }
}

pub fn algebra_json(a: &Algebra) -> AlgJson {
    let mut j = header(a.field(), a.names());
    j.mul = Some(a.table().entries().map(|(idx, k, c)| [idx[0] as i64, idx[1] as i64, k as i64, c as i64]).collect());
    j
}

pub fn structurable_json(a: &StructurableAlgebra) -> AlgJson {
    let mut j = algebra_json(a.alg());
    j.inv = Some(matrix_rows(a.inv()));
    j
}

pub fn triple_json(t: &TripleSystem) -> AlgJson {
    let mut j = header(t.field(), t.names());
    j.triple = Some(
        t.tensor()
            .entries()
            .map(|(idx, l, c)| [idx[0] as i64, idx[1] as i64, idx[2] as i64, l as i64, c as i64])
            .collect(),
    );
    j
}

pub fn graded_json(g: &GradedLieAlgebra) -> AlgJson {
    let mut j = algebra_json(&g.alg);
    j.grading = Some(g.grading.clone());
    j.sl2 = g.sl2.as_ref().map(|s| [vec_i64(&s.e), vec_i64(&s.h), vec_i64(&s.f)]);
    j
}

pub fn super_json(s: &LieSuperalgebra) -> AlgJson {
    let mut j = algebra_json(&s.alg);
    j.parity = Some(s.parity.clone());
    j
}

pub fn to_string(a: &Artifact) -> String {
    serde_json::to_string(&a.to_json()).expect("artifact serializes")
}

pub fn parse(src: &str) -> Result<Artifact, IoError> {
    let j: AlgJson = serde_json::from_str(src)?;
    decode(&j)
}

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

fn index(i: i64, n: usize) -> Result<usize, IoError> {
    usize::try_from(i).ok().filter(|&i| i < n).ok_or_else(|| invalid(format!("index {i} out of range 0..{n}")))
}

fn vector(f: Field, v: &[i64], n: usize) -> Result<Vec<Scalar>, IoError> {
    if v.len() != n {
        return Err(invalid(format!("vector of length {} where {n} expected", v.len())));
    }
    Ok(v.iter().map(|&c| f.from_i64(c)).collect())
}

fn square(f: Field, rows: &[Vec<i64>], n: usize) -> Result<Matrix, IoError> {
    if rows.len() != n {
        return Err(invalid(format!("{} matrix rows where {n} expected", rows.len())));
    }
    let rows = rows.iter().map(|r| vector(f, r, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(f, n, &rows))
}

pub fn decode(j: &AlgJson) -> Result<Artifact, IoError> {
    if j.schema != SCHEMA {
        return Err(IoError::Schema(j.schema.clone()));
    }
    let f = Field::new(j.p).map_err(|e| invalid(e.to_string()))?;
    let n = j.dim;
    if j.basis.len() != n {
        return Err(invalid(format!("{} basis names for dimension {n}", j.basis.len())));
    }
    let names = j.basis.clone();
    match (&j.mul, &j.triple) {
        (Some(_), Some(_)) => Err(invalid("both mul and triple present")),
        (None, None) => Err(invalid("neither mul nor triple present")),
        (None, Some(entries)) => {
            let entries = entries
                .iter()
                .map(|&[a, b, c, d, x]| Ok((index(a, n)?, index(b, n)?, index(c, n)?, index(d, n)?, f.from_i64(x))))
                .collect::<Result<Vec<_>, IoError>>()?;
            Ok(Artifact::Triple(TripleSystem::from_entries(f, names, entries)))
        }
        (Some(entries), None) => {
            let entries = entries
                .iter()
                .map(|&[a, b, c, x]| Ok((index(a, n)?, index(b, n)?, index(c, n)?, f.from_i64(x))))
                .collect::<Result<Vec<_>, IoError>>()?;
            let alg = Algebra::from_entries(f, names, entries);
            if let Some(inv) = &j.inv {
                let inv = square(f, inv, n)?;
                let a = StructurableAlgebra::new(alg, inv).map_err(|e| invalid(e.to_string()))?;
                return Ok(Artifact::Structurable(a));
            }
            if let Some(parity) = &j.parity {
                let s = LieSuperalgebra::new(alg, parity.clone()).map_err(|e| invalid(e.to_string()))?;
                return Ok(Artifact::Super(s));
            }
            if let Some(grading) = &j.grading {
                if grading.len() != n {
                    return Err(invalid("grading length differs from dimension"));
                }
                let sl2 = match &j.sl2 {
                    Some([e, h, ff]) => {
                        Some(Sl2Triple { e: vector(f, e, n)?, h: vector(f, h, n)?, f: vector(f, ff, n)? })
                    }
                    None => None,
                };
                return Ok(Artifact::Graded(GradedLieAlgebra { alg, grading: grading.clone(), modulus: None, sl2 }));
            }
            if let Some(d) = &j.delta {
                return Ok(Artifact::WithDerivation(alg, square(f, d, n)?));
            }
            Ok(Artifact::Algebra(alg))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::split_composition;
    use crate::jternary::weak_counterexample;
    use crate::structurable::tensor_structurable;

    #[test]
    fn structurable_round_trip() {
        let f = Field::three();
        let c4 = split_composition(4, f).unwrap();
        let c2 = split_composition(2, f).unwrap();
        let a = tensor_structurable(&c4, &c2).unwrap();
        let text = to_string(&Artifact::Structurable(a.clone()));
        let Artifact::Structurable(b) = parse(&text).unwrap() else { panic!("wrong kind") };
        assert_eq!(b.alg().table(), a.alg().table());
        assert_eq!(b.inv(), a.inv());
        assert_eq!(b.alg().names(), a.alg().names());
    }

    #[test]
    fn triple_round_trip_and_kind() {
        let t = weak_counterexample(Field::three());
        let j = triple_json(&t);
        assert!(j.mul.is_none());
        let Artifact::Triple(u) = decode(&j).unwrap() else { panic!("wrong kind") };
        assert_eq!(u.tensor(), t.tensor());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse("{"), Err(IoError::Json(_))));
        let mut j = triple_json(&weak_counterexample(Field::three()));
        j.schema = "alg/2".into();
        assert!(matches!(decode(&j), Err(IoError::Schema(_))));
        j.schema = SCHEMA.into();
        j.triple.as_mut().unwrap()[0][0] = 9;
        assert!(matches!(decode(&j), Err(IoError::Invalid(_))));
        let src = r#"{"schema":"alg/1","p":4,"dim":0,"basis":[],"mul":[]}"#;
        assert!(matches!(parse(src), Err(IoError::Invalid(_))));
    }

    #[test]
    fn negative_coefficients_reduce() {
        let src = r#"{"schema":"alg/1","p":3,"dim":1,"basis":["e"],"mul":[[0,0,0,-1]]}"#;
        let Artifact::Algebra(a) = parse(src).unwrap() else { panic!("wrong kind") };
        assert_eq!(a.product(0, 0), vec![2]);
    }
}
