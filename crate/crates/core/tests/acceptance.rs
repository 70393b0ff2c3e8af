//! Acceptance gate: one PASS/FAIL line per criterion, details indented below
//! failures. Exits nonzero when any criterion fails.

use char3_core::check::{Mode, DEFAULT_SAMPLES, DEFAULT_SEED};
use char3_core::composition::split_composition;
use char3_core::jternary::{
    first_argument_system, from_structurable, jordanize, osp_system, psl_system, weak_counterexample, zero_system,
    Sign, TripleSystem,
};
use char3_core::lie::{
    attach_kantor_sl2, build_kantor, build_lt, five_graded_triple, kantor_v2_to_v1, kt_standard_embedding,
    kt_to_kantor_map, lt_delta, sl2_utilities, KantorVariant,
};
use char3_core::magic::{magic_square, CellKind};
use char3_core::reference::{proto_osp_isomorphism, proto_psl_isomorphism, VerifiedIsomorphism};
use char3_core::semisimplify::{recipe_equivalence, semisimplify};
use char3_core::structurable::{
    albert_data, choose_invertible_skew, clifford_image_dims, clifford_relations, enumerate_span, smirnov_algebra,
    tensor_structurable, StructurableAlgebra,
};
use char3_core::{Field, Matrix};
use std::time::Instant;

const F: Field = Field::three();
const C2_DIMS: [usize; 4] = [1, 2, 4, 8];

/// Verdict plus a one-line summary and any detail lines.
struct Verdict {
    ok: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(summary: impl Into<String>) -> Verdict {
        Verdict { ok: true, summary: summary.into(), details: Vec::new() }
    }

    fn require(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.ok = false;
            self.details.push(detail());
        }
    }
}

fn cayley_tensor(d2: usize) -> StructurableAlgebra {
    let c1 = split_composition(8, F).unwrap();
    let c2 = split_composition(d2, F).unwrap();
    tensor_structurable(&c1, &c2).unwrap()
}

fn invertible(m: &Matrix) -> bool {
    m.is_square() && m.rank() == m.rows()
}

fn criterion_1() -> Verdict {
    let instrl: Vec<usize> = C2_DIMS.iter().map(|&d| cayley_tensor(d).instrl().dim()).collect();
    let lsls: Vec<usize> = C2_DIMS.iter().map(|&d| cayley_tensor(d).ls_ls_span().dim()).collect();
    let mut v = Verdict::new(format!("inner structure: instrl {instrl:?}, L_S L_S {lsls:?}"));
    v.require(instrl == [22, 29, 49, 92], || format!("instrl dims {instrl:?}, expected [22, 29, 49, 92]"));
    v.require(lsls == [22, 29, 46, 92], || format!("L_S L_S dims {lsls:?}, expected [22, 29, 46, 92]"));
    v
}

fn criterion_2() -> Verdict {
    let mut dims = Vec::new();
    let mut v = Verdict::new("");
    for &d in &C2_DIMS {
        let kan = build_kantor(&cayley_tensor(d), KantorVariant::V1).unwrap();
        let n = kan.lie.dim();
        dims.push(n);
        let mode =
            if d <= 2 { Mode::Exhaustive } else { Mode::Random { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES } };
        let r = kan.lie.alg.check_lie(mode);
        v.require(r.passed(), || format!("dim {n}: {}", r.first_failure().unwrap()));
        let jac = r.get("jacobi").unwrap();
        let enough = if d <= 2 { jac.exhaustive } else { jac.tuples >= 1_000_000 };
        v.require(enough, || format!("dim {n}: jacobi coverage {} tuples, exhaustive {}", jac.tuples, jac.exhaustive));
    }
    v.summary = format!("Kantor dims {dims:?}; Jacobi exhaustive at 52/77, 10^6 seeded triples at 133/248");
    v.require(dims == [52, 77, 133, 248], || format!("dims {dims:?}, expected [52, 77, 133, 248]"));
    v
}

fn criterion_3() -> Verdict {
    let mut v =
        Verdict::new("KT(A) standard embedding = K(A,-) under phi, and V2 = V1 under the rescaling, dim C2 in {1,2}");
    for d in [1, 2] {
        let a = cayley_tensor(d);
        let emb = kt_standard_embedding(&a).unwrap();
        let kan = build_kantor(&a, KantorVariant::V1).unwrap();
        let phi = kt_to_kantor_map(&a, &emb, &kan).unwrap();
        v.require(invertible(&phi), || format!("dim C2 = {d}: phi is not bijective"));
        let hom = emb.alg.is_homomorphism_to(&kan.lie.alg, &phi);
        v.require(hom.passed, || format!("dim C2 = {d}: phi breaks the bracket at {:?}", hom.counterexample));
        let kan2 = build_kantor(&a, KantorVariant::V2).unwrap();
        let psi = kantor_v2_to_v1(&kan2);
        v.require(invertible(&psi), || format!("dim C2 = {d}: V2 -> V1 map is not bijective"));
        let hom = kan2.lie.alg.is_homomorphism_to(&kan.lie.alg, &psi);
        v.require(hom.passed, || format!("dim C2 = {d}: V2 -> V1 breaks the bracket at {:?}", hom.counterexample));
    }
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new("Albert form identities allq1-allq5 on all four tensor products");
    for &d in &C2_DIMS {
        let a = cayley_tensor(d);
        let r = albert_data(&a).unwrap().check_identities(&a);
        for name in ["allq1", "allq2", "allq3", "allq4", "allq5"] {
            v.require(r.get(name).is_some_and(|o| o.passed && o.exhaustive), || {
                format!("dim C2 = {d}: {name} {:?}", r.get(name).map(|o| o.to_string()))
            });
        }
    }
    v
}

fn criterion_5() -> Verdict {
    let mut got = Vec::new();
    let mut v = Verdict::new("");
    for &d in &C2_DIMS {
        let a = cayley_tensor(d);
        let s = choose_invertible_skew(&a).unwrap();
        let q = albert_data(&a).unwrap();
        let rel = clifford_relations(&a, &q, &s);
        v.require(rel.passed(), || format!("dim C2 = {d}: {}", rel.first_failure().unwrap()));
        let dims = clifford_image_dims(&a, &s).unwrap();
        got.push(if d == 1 { dims.full } else { dims.even });
    }
    v.summary = format!("Clifford images (full at dim C2 = 1, even otherwise) {got:?}, relations on basis pairs");
    v.require(got == [64, 64, 256, 4096], || format!("dims {got:?}, expected [64, 64, 256, 4096]"));
    v
}

fn criterion_6() -> Verdict {
    let cells = magic_square(F);
    let mut v = Verdict::new("magic square superdims, reference fingerprints, Cayley cell expectations");
    let expected = |a: usize, b: usize| -> Option<(usize, usize)> {
        Some(match (a.min(b), a.max(b)) {
            (1, 1) => return None,
            (1, 2) => (0, 2),
            (1, 4) => (4, 4),
            (1, 8) => (15, 8),
            (2, 2) => (0, 4),
            (2, 4) => (6, 8),
            (2, 8) => (21, 16),
            (4, 4) => (16, 16),
            (4, 8) => (39, 32),
            _ => (78, 64),
        })
    };
    let mut reference = 0;
    for c in &cells {
        let want = expected(c.d1, c.d2);
        v.require(c.superdim() == want, || {
            format!("({},{}) superdim {:?}, expected {want:?}", c.d1, c.d2, c.superdim())
        });
        let mirror = cells.iter().find(|m| (m.d1, m.d2) == (c.d2, c.d1)).unwrap();
        v.require(mirror.fingerprint == c.fingerprint, || format!("({},{}) differs from its mirror", c.d1, c.d2));
        match c.kind {
            CellKind::Reference => {
                reference += 1;
                v.require(c.ok, || format!("({},{}) not matched to {}", c.d1, c.d2, c.name));
            }
            CellKind::Named => {
                let fp = c.fingerprint.as_ref().unwrap();
                v.require(fp.center == (0, 0), || format!("({},{}) {} center {:?}", c.d1, c.d2, c.name, fp.center));
                v.require(fp.derived == fp.superdim, || format!("({},{}) {} not perfect", c.d1, c.d2, c.name));
                v.require(fp.odd_irreducible_heuristic, || {
                    format!(
                        "({},{}) {} odd irreducibility heuristic fails: odd basis vectors generate submodules of dims {:?} in {}",
                        c.d1, c.d2, c.name, c.odd_submodule_dims, fp.superdim.1
                    )
                });
            }
            CellKind::Empty => v.require(c.ok, || "(1,1) should be empty".into()),
        }
    }
    v.require(reference == 10, || {
        format!("{reference} reference-matched cells, expected 10 (nine shapes, (2,2) included)")
    });
    v
}

fn reverify(iso: &VerifiedIsomorphism) -> bool {
    let tgt = &iso.target.sup;
    let parity_kept = (0..iso.source.dim())
        .all(|j| iso.map.column(j).iter().enumerate().all(|(k, &c)| c == 0 || tgt.parity[k] == iso.source.parity[j]));
    invertible(&iso.map) && parity_kept && iso.source.alg.is_homomorphism_to(&tgt.alg, &iso.map).passed
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new("explicit isomorphisms onto osp (1,2),(3,2),(2,4) and psl (2,1),(2,2),(4,1)");
    for (n, m) in [(1, 2), (3, 2), (2, 4)] {
        let r = proto_osp_isomorphism(F, n, m);
        v.require(r.as_ref().is_ok_and(reverify), || {
            format!("osp ({n},{m}): {}", r.as_ref().err().map_or("re-verification failed".into(), |e| e.to_string()))
        });
    }
    for (n, m) in [(2, 1), (2, 2), (4, 1)] {
        let r = proto_psl_isomorphism(F, n, m);
        v.require(r.as_ref().is_ok_and(reverify), || {
            format!("psl ({n},{m}): {}", r.as_ref().err().map_or("re-verification failed".into(), |e| e.to_string()))
        });
    }
    v
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new("weak counterexample: (1|2), cube(x) = -y, not Lie, quotient by cube ideal is Lie");
    let pkg = jordanize(&weak_counterexample(F), Mode::Exhaustive).unwrap();
    let lt = build_lt(&pkg).unwrap();
    let s = semisimplify(&lt.alg, &lt_delta(&lt), Mode::Exhaustive).unwrap().sup;
    v.require(s.superdim() == (1, 2), || format!("superdim {:?}", s.superdim()));
    v.require(s.check_weak(Mode::Exhaustive).passed(), || "weak axioms fail".into());
    // odd basis (x, y) sits at indices 1, 2
    let x = F.unit_vec(3, 1);
    let minus_y = vec![0, 0, F.neg(1)];
    v.require(s.cube(&x) == minus_y, || format!("cube(x) = {:?}", s.cube(&x)));
    v.require(!s.is_lie(), || "is_lie should be false".into());
    let q = s.quotient(&s.cube_ideal().unwrap()).unwrap();
    v.require(q.is_lie(), || format!("quotient {:?} is not Lie", q.superdim()));
    v
}

fn criterion_9() -> Verdict {
    let a = cayley_tensor(1);
    let s = choose_invertible_skew(&a).unwrap();
    let inputs: Vec<(&str, TripleSystem)> = vec![
        ("weak counterexample", weak_counterexample(F)),
        ("prototypical osp (2,2)", osp_system(F, 2, 2).unwrap()),
        ("prototypical psl (2,1)", psl_system(F, 2, 1).unwrap()),
        ("C8 (x) F", from_structurable(&a, &s).unwrap()),
    ];
    let mut v =
        Verdict::new(format!("recipe on (L(T), ad F) equals the direct construction on {} inputs", inputs.len()));
    for (name, ts) in inputs {
        let pkg = jordanize(&ts, Mode::default()).unwrap();
        let eq = recipe_equivalence(&pkg, Mode::default()).unwrap();
        v.require(eq.holds(), || format!("{name}: bases {} tables {}", eq.bases_match, eq.tables_match));
    }
    v
}

fn criterion_10() -> Verdict {
    let c = split_composition(8, F).unwrap();
    let t = smirnov_algebra(&c).unwrap();
    let skew = t.skew();
    let elements = enumerate_span(&skew);
    let n = t.alg.dim();
    let invertible_count = elements.iter().filter(|s| t.alg.left_mul(s).rank() == n).count();
    let mut v = Verdict::new(format!(
        "Smirnov algebra: dim {n}, {} skew elements, {invertible_count} with invertible L_s",
        elements.len()
    ));
    v.require(n == 35 && elements.len() == 2187, || format!("dim {n}, {} skew elements", elements.len()));
    v.require(invertible_count == 0, || format!("{invertible_count} skew elements with invertible L_s"));
    v
}

fn triple_systems() -> Vec<(String, TripleSystem)> {
    let mut out: Vec<(String, TripleSystem)> = vec![
        ("weak counterexample".into(), weak_counterexample(F)),
        ("prototypical osp (1,2)".into(), osp_system(F, 1, 2).unwrap()),
        ("prototypical osp (2,2)".into(), osp_system(F, 2, 2).unwrap()),
        ("prototypical psl (2,1)".into(), psl_system(F, 2, 1).unwrap()),
        ("prototypical psl (2,2)".into(), psl_system(F, 2, 2).unwrap()),
        ("zero (2)".into(), zero_system(F, 2)),
        ("first argument (2)".into(), first_argument_system(F, 2)),
    ];
    for d in [1, 2] {
        let a = cayley_tensor(d);
        let s = choose_invertible_skew(&a).unwrap();
        out.push((format!("C8 (x) C{d}"), from_structurable(&a, &s).unwrap()));
    }
    out
}

fn criterion_11() -> Verdict {
    let systems = triple_systems();
    let mut failing = 0;
    let mut v = Verdict::new("");
    for (name, ts) in &systems {
        let hein = ts.check_hein(Mode::default()).passed();
        let fk = ts.check_fk(Sign::Plus, Sign::Plus, Mode::default()).passed();
        let special = ts.check_special(Sign::Plus, Sign::Plus, Mode::default()).passed();
        failing += usize::from(!hein);
        v.require(hein == (fk && special), || format!("{name}: hein {hein}, fk {fk}, special {special}"));
    }
    v.summary = format!("hein iff fk(1,1) and special(1,1) on {} systems, {failing} failing", systems.len());
    v.require(systems.len() >= 6 && failing >= 1, || "need 6 systems with a failing one".into());
    v
}

fn criterion_12() -> Verdict {
    let mut v = Verdict::new("");
    let mut st_count = 0;
    for (name, ts) in triple_systems() {
        if !ts.check_hein(Mode::default()).passed() {
            continue;
        }
        st_count += 1;
        let r = ts.check_st_identities(Sign::Plus, Mode::default());
        v.require(r.passed(), || format!("{name}: {}", r.first_failure().unwrap()));
    }
    let mut centralizers = Vec::new();
    for &d in &C2_DIMS {
        let a = cayley_tensor(d);
        let q = albert_data(&a).unwrap();
        let s = choose_invertible_skew(&a).unwrap();
        let mut kan = build_kantor(&a, KantorVariant::V2).unwrap();
        attach_kantor_sl2(&mut kan, &a, &s, &q.t_for(&s)).unwrap();
        let dec = sl2_utilities(&kan.lie).unwrap();
        for item in ["i", "ii", "iii", "iv", "v"] {
            let name = format!("5graded_{item}");
            v.require(dec.report.get(&name).is_some_and(|o| o.passed), || format!("dim C2 = {d}: {name} fails"));
        }
        centralizers.push(dec.centralizer.dim());
        let ts = from_structurable(&a, &s).unwrap();
        let five = five_graded_triple(&kan.lie).unwrap();
        v.require(five.tensor() == ts.tensor(), || format!("dim C2 = {d}: L1 triple differs from the J-ternary one"));
    }
    v.summary = format!(
        "S/T operator identities on {st_count} J-ternary systems; 5-graded items (i)-(v), centralizers {centralizers:?}"
    );
    v.require(centralizers == [15, 21, 39, 78], || format!("centralizers {centralizers:?}, expected [15, 21, 39, 78]"));
    v
}

fn main() {
    let criteria: [(u8, fn() -> Verdict); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failed = Vec::new();
    for (k, run) in criteria {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        println!("[{k:>2}] {}  {}  ({secs:.1}s)", if v.ok { "PASS" } else { "FAIL" }, v.summary);
        for d in &v.details {
            println!("       {d}");
        }
        if !v.ok {
            failed.push(k);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: {} of 12 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
