//! The 4×4 table of Lie superalgebras `L^ss(C₁⊗C₂)` in characteristic 3.
//!
//! Each cell builds the tensor product of split composition algebras, picks an
//! invertible skew element `s`, forms the J-ternary system and its
//! superalgebra, and compares fingerprints. Cells with a matrix model are
//! compared against it; the Cayley cells have no model here and are checked
//! for trivial center, perfectness and an irreducible-looking odd part.

use crate::composition::split_composition;
use crate::field::Field;
use crate::jternary::from_structurable;
use crate::reference::{osp_split, psl};
use crate::semisimplify::direct_from_jternary;
use crate::structurable::{choose_invertible_skew, tensor_structurable};
use crate::superalgebra::{direct_sum, Fingerprint, LieSuperalgebra};
use rayon::prelude::*;
use serde::Serialize;

pub const DIMS: [usize; 4] = [1, 2, 4, 8];

/// How a cell's expectation is phrased.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellKind {
    /// `S = 0`, no superalgebra
    Empty,
    /// fingerprint equals that of a matrix superalgebra
    Reference,
    /// only the name is known; structural expectations are checked
    Named,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub d1: usize,
    pub d2: usize,
    pub name: String,
    pub kind: CellKind,
    pub fingerprint: Option<Fingerprint>,
    pub expected: Option<Fingerprint>,
    /// distinct dimensions of the odd submodules generated by odd basis vectors
    pub odd_submodule_dims: Vec<usize>,
    pub ok: bool,
    /// what went wrong, when `ok` is false
    pub note: Option<String>,
}

impl Cell {
    pub fn superdim(&self) -> Option<(usize, usize)> {
        self.fingerprint.as_ref().map(|f| f.superdim)
    }

    /// Table entry: the name with the superdimension, or `∅ (S = 0)`.
    pub fn label(&self) -> String {
        match (&self.kind, self.superdim()) {
            (CellKind::Empty, _) => "∅ (S = 0)".into(),
            (_, Some((e, o))) => format!("{} ({e}|{o})", self.name),
            (_, None) => format!("{} (failed)", self.name),
        }
    }
}

fn reference_model(f: Field, d1: usize, d2: usize) -> Option<(&'static str, LieSuperalgebra)> {
    let (a, b) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
    let sup = |r: Result<crate::reference::MatrixSuperalgebra, _>| r.expect("reference model builds").sup;
    Some(match (a, b) {
        (1, 2) => ("psl(1|1)", sup(psl(f, 1, 1))),
        (1, 4) => ("osp(2|2)", sup(osp_split(f, 2, 2))),
        (1, 8) => ("psl(4|1)", sup(psl(f, 4, 1))),
        (2, 2) => {
            let p = sup(psl(f, 1, 1));
            ("psl(1|1)⊕psl(1|1)", direct_sum(&p, &p))
        }
        (2, 4) => ("psl(2|2)", sup(psl(f, 2, 2))),
        (4, 4) => ("osp(4|4)", sup(osp_split(f, 4, 4))),
        _ => return None,
    })
}

fn cayley_name(d1: usize, d2: usize) -> Option<(&'static str, (usize, usize))> {
    match (d1.min(d2), d1.max(d2)) {
        (2, 8) => Some(("g(3,3)", (21, 16))),
        (4, 8) => Some(("el(5;3)", (39, 32))),
        (8, 8) => Some(("g(6,6)", (78, 64))),
        _ => None,
    }
}

/// The fingerprint fields where `got` differs from `want`, one clause each.
fn mismatches(got: &Fingerprint, want: &Fingerprint, odd_dims: &[usize]) -> String {
    let mut out = Vec::new();
    let mut field = |name: &str, g: String, w: String| {
        if g != w {
            out.push(format!("{name} {g}, expected {w}"));
        }
    };
    field("superdim", format!("{:?}", got.superdim), format!("{:?}", want.superdim));
    field("center", format!("{:?}", got.center), format!("{:?}", want.center));
    field("derived", format!("{:?}", got.derived), format!("{:?}", want.derived));
    field("dim [odd,odd]", got.odd_odd.to_string(), want.odd_odd.to_string());
    field("cube ideal dim", format!("{:?}", got.cube_ideal_dim), format!("{:?}", want.cube_ideal_dim));
    if got.odd_irreducible_heuristic != want.odd_irreducible_heuristic {
        out.push(format!(
            "odd irreducible {}, expected {} (odd basis vectors generate submodules of dims {odd_dims:?})",
            got.odd_irreducible_heuristic, want.odd_irreducible_heuristic
        ));
    }
    out.join("; ")
}

/// The superalgebra of the cell, `None` when there is no invertible skew
/// element (only `(1,1)`, where the skew part is zero).
pub fn cell_superalgebra(f: Field, d1: usize, d2: usize) -> Result<Option<LieSuperalgebra>, String> {
    let c1 = split_composition(d1, f).map_err(|e| e.to_string())?;
    let c2 = split_composition(d2, f).map_err(|e| e.to_string())?;
    let a = tensor_structurable(&c1, &c2).map_err(|e| e.to_string())?;
    let Some(s) = choose_invertible_skew(&a) else {
        return Ok(None);
    };
    let ts = from_structurable(&a, &s).map_err(|e| e.to_string())?;
    direct_from_jternary(&ts).map(Some).map_err(|e| e.to_string())
}

pub fn cell(f: Field, d1: usize, d2: usize) -> Cell {
    let mut c = Cell {
        d1,
        d2,
        name: String::new(),
        kind: CellKind::Empty,
        fingerprint: None,
        expected: None,
        odd_submodule_dims: Vec::new(),
        ok: false,
        note: None,
    };
    let sup = match cell_superalgebra(f, d1, d2) {
        Ok(s) => s,
        Err(e) => {
            c.note = Some(e);
            return c;
        }
    };
    let Some(sup) = sup else {
        c.ok = (d1, d2) == (1, 1);
        if !c.ok {
            c.note = Some("no superalgebra where one was expected".into());
        }
        return c;
    };
    let fp = sup.fingerprint();
    let n_odd = fp.superdim.1;
    let mut dims: Vec<usize> = (0..n_odd).map(|j| sup.odd_submodule(&f.unit_vec(n_odd, j)).dim()).collect();
    dims.sort_unstable();
    dims.dedup();
    c.odd_submodule_dims = dims;
    if let Some((name, model)) = reference_model(f, d1, d2) {
        let expected = model.fingerprint();
        c.name = name.into();
        c.kind = CellKind::Reference;
        c.ok = fp == expected;
        if !c.ok {
            c.note = Some(format!("differs from {name}: {}", mismatches(&fp, &expected, &c.odd_submodule_dims)));
        }
        c.expected = Some(expected);
    } else if let Some((name, superdim)) = cayley_name(d1, d2) {
        c.name = name.into();
        c.kind = CellKind::Named;
        let expected = Fingerprint {
            superdim,
            center: (0, 0),
            derived: superdim,
            odd_odd: superdim.0,
            cube_ideal_dim: Some(0),
            odd_irreducible_heuristic: true,
        };
        c.ok = fp == expected;
        if !c.ok {
            c.note = Some(mismatches(&fp, &expected, &c.odd_submodule_dims));
        }
        c.expected = Some(expected);
    } else {
        c.note = Some("unexpected nonzero cell".into());
    }
    c.fingerprint = Some(fp);
    c
}

/// All sixteen cells, row-major over [`DIMS`], computed in parallel.
pub fn magic_square(f: Field) -> Vec<Cell> {
    let pairs: Vec<(usize, usize)> = DIMS.iter().flat_map(|&a| DIMS.iter().map(move |&b| (a, b))).collect();
    pairs.into_par_iter().map(|(a, b)| cell(f, a, b)).collect()
}

/// Plain aligned text, one row per `d₁`.
pub fn render_table(cells: &[Cell]) -> String {
    let labels: Vec<String> = cells.iter().map(Cell::label).collect();
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0).max(6);
    let pad = |s: &str| format!("{s}{}", " ".repeat(width - s.chars().count()));
    let mut out = format!("{}  ", pad(""));
    out += &DIMS.iter().map(|d| pad(&d.to_string())).collect::<Vec<_>>().join("  ");
    out = out.trim_end().to_string();
    out.push('\n');
    for (r, &d) in DIMS.iter().enumerate() {
        let row: Vec<String> = labels[r * 4..r * 4 + 4].iter().map(|l| pad(l)).collect();
        out += format!("{}  {}", pad(&d.to_string()), row.join("  ")).trim_end();
        out.push('\n');
    }
    out
}
