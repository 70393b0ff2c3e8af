use char3_core::check::DEFAULT_SEED;
use char3_core::jternary::{osp_system, psl_system, weak_counterexample};
use char3_core::magic::{cell_superalgebra, DIMS};
use char3_core::reference::{gl, osp, osp_split, psl, sl};
use char3_core::semisimplify::direct_from_jternary;
use char3_core::superalgebra::LieSuperalgebra;
use char3_core::Field;
use rayon::prelude::*;
use std::sync::LazyLock;

const F: Field = Field::three();
const PAIRS: usize = 10_000;

static CONSTRUCTED: LazyLock<Vec<(String, LieSuperalgebra)>> = LazyLock::new(constructed);

fn constructed() -> Vec<(String, LieSuperalgebra)> {
    let mut out: Vec<(String, LieSuperalgebra)> = vec![
        ("gl(2|1)".into(), gl(F, 2, 1).sup),
        ("sl(2|1)".into(), sl(F, 2, 1).unwrap().sup),
        ("psl(2|2)".into(), psl(F, 2, 2).unwrap().sup),
        ("psl(4|1)".into(), psl(F, 4, 1).unwrap().sup),
        ("osp(1|2)".into(), osp(F, 1, 2).unwrap().sup),
        ("osp(3|2)".into(), osp(F, 3, 2).unwrap().sup),
        ("split osp(2|2)".into(), osp_split(F, 2, 2).unwrap().sup),
        ("split osp(4|4)".into(), osp_split(F, 4, 4).unwrap().sup),
        ("weak counterexample".into(), direct_from_jternary(&weak_counterexample(F)).unwrap()),
    ];
    for (n, m) in [(1, 2), (3, 2), (2, 4)] {
        out.push((format!("from proto osp({n},{m})"), direct_from_jternary(&osp_system(F, n, m).unwrap()).unwrap()));
    }
    for (n, m) in [(2, 1), (2, 2), (4, 1)] {
        out.push((format!("from proto psl({n},{m})"), direct_from_jternary(&psl_system(F, n, m).unwrap()).unwrap()));
    }
    let cells: Vec<(usize, usize)> =
        DIMS.iter().flat_map(|&a| DIMS.iter().filter(move |&&b| a <= b).map(move |&b| (a, b))).collect();
    let built: Vec<_> = cells
        .par_iter()
        .filter_map(|&(a, b)| cell_superalgebra(F, a, b).unwrap().map(|s| (format!("cell ({a},{b})"), s)))
        .collect();
    out.extend(built);
    out
}

#[test]
fn cube_map_is_additive_on_every_constructed_superalgebra() {
    assert_eq!(CONSTRUCTED.len(), 24);
    let failures: Vec<String> = CONSTRUCTED
        .par_iter()
        .filter_map(|(name, s)| {
            assert!(s.check_weak(Default::default()).passed(), "{name} violates the weak axioms");
            let o = s.cube_additivity(PAIRS, DEFAULT_SEED);
            assert_eq!(o.tuples, PAIRS as u64);
            (!o.passed).then(|| format!("{name}: pair {:?}", o.counterexample))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn only_the_weak_counterexample_has_a_cube_defect() {
    for (name, s) in CONSTRUCTED.iter() {
        let defect = s.cube_ideal().unwrap().dim();
        if name == "weak counterexample" {
            assert_eq!(defect, 1);
        } else {
            assert_eq!(defect, 0, "{name}");
        }
    }
}
