//! Budgeted evaluation of identities over basis tuples.
//!
//! An identity in k vector variables over basis ranges `d_1..d_k`, whose two sides
//! are compared as vectors of length `w`, costs `d_1⋯d_k·w` scalar operations.
//! At most [`EXHAUSTIVE_BUDGET`] it is checked on every tuple; beyond that on
//! [`DEFAULT_SAMPLES`] tuples drawn from a seeded ChaCha8 stream. Failures are
//! reported deterministically: the lexicographically first failing tuple, or the
//! first failing sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt;

pub const EXHAUSTIVE_BUDGET: f64 = 1e8;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exhaustive when within budget, otherwise seeded sampling.
    Auto {
        seed: u64,
        samples: usize,
    },
    Exhaustive,
    Random {
        seed: u64,
        samples: usize,
    },
}

impl Default for Mode {
    fn default() -> Mode {
        Mode::Auto { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

impl Mode {
    pub fn random(seed: u64) -> Mode {
        Mode::Random { seed, samples: DEFAULT_SAMPLES }
    }

    fn resolve(self, cost: f64) -> Mode {
        match self {
            Mode::Auto { seed, samples } => {
                if cost <= EXHAUSTIVE_BUDGET {
                    Mode::Exhaustive
                } else {
                    Mode::Random { seed, samples }
                }
            }
            m => m,
        }
    }
}

/// Verdict for one named identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: String,
    pub passed: bool,
    pub exhaustive: bool,
    pub tuples: u64,
    pub counterexample: Option<Vec<usize>>,
}

impl Outcome {
    pub fn pass(name: impl Into<String>, exhaustive: bool, tuples: u64) -> Outcome {
        Outcome { name: name.into(), passed: true, exhaustive, tuples, counterexample: None }
    }

    pub fn fail(name: impl Into<String>, witness: Vec<usize>) -> Outcome {
        Outcome { name: name.into(), passed: false, exhaustive: false, tuples: 0, counterexample: Some(witness) }
    }

    /// Single yes/no fact without tuples.
    pub fn fact(name: impl Into<String>, ok: bool) -> Outcome {
        Outcome {
            name: name.into(),
            passed: ok,
            exhaustive: true,
            tuples: 1,
            counterexample: if ok { None } else { Some(vec![]) },
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = if self.exhaustive { "exhaustive" } else { "sampled" };
        if self.passed {
            write!(f, "PASS  {:<28} {} over {} tuples", self.name, how, self.tuples)
        } else {
            write!(f, "FAIL  {:<28} counterexample {:?}", self.name, self.counterexample.as_deref().unwrap_or(&[]))
        }
    }
}

/// A list of outcomes from one suite.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }
    pub fn push(&mut self, o: Outcome) {
        self.outcomes.push(o);
    }
    pub fn extend(&mut self, other: Report) {
        self.outcomes.extend(other.outcomes);
    }
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
    pub fn first_failure(&self) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }
    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Checks `holds` on basis tuples `idx` with `idx[t] < dims[t]`. `width` is the
/// length of the compared values, used only for the budget.
pub fn check_tuples<F>(name: &str, dims: &[usize], width: usize, mode: Mode, holds: F) -> Outcome
where
    F: Fn(&[usize]) -> bool + Sync,
{
    if dims.contains(&0) {
        return Outcome::pass(name, true, 0);
    }
    let total: f64 = dims.iter().map(|&d| d as f64).product();
    match mode.resolve(total * width as f64) {
        Mode::Exhaustive => exhaustive(name, dims, holds),
        Mode::Random { seed, samples } => sampled(name, dims, seed, samples, holds),
        Mode::Auto { .. } => unreachable!(),
    }
}

fn exhaustive<F>(name: &str, dims: &[usize], holds: F) -> Outcome
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let total: u64 = dims.iter().map(|&d| d as u64).product();
    let k = dims.len();
    if k == 0 {
        return if holds(&[]) { Outcome::pass(name, true, 1) } else { Outcome::fail(name, vec![]) };
    }
    // parallel over the leading index; the minimum failing leading index wins,
    // and within it the scan is sequential, so the witness is lexicographically first
    let rest = &dims[1..];
    let first_fail = (0..dims[0]).into_par_iter().find_map_first(|i0| {
        let mut idx = vec![0usize; k];
        idx[0] = i0;
        let inner: u64 = rest.iter().map(|&d| d as u64).product();
        for _ in 0..inner {
            if !holds(&idx) {
                return Some(idx);
            }
            crate::tensor::advance(&mut idx[1..], rest);
        }
        None
    });
    match first_fail {
        Some(w) => Outcome::fail(name, w),
        None => Outcome::pass(name, true, total),
    }
}

fn sampled<F>(name: &str, dims: &[usize], seed: u64, samples: usize, holds: F) -> Outcome
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const CHUNK: usize = 8192;
    let mut done = 0;
    while done < samples {
        let n = CHUNK.min(samples - done);
        let batch: Vec<Vec<usize>> = (0..n).map(|_| dims.iter().map(|&d| rng.gen_range(0..d)).collect()).collect();
        if let Some(w) = batch.par_iter().find_first(|t| !holds(t)) {
            return Outcome::fail(name, w.clone());
        }
        done += n;
    }
    Outcome::pass(name, false, samples as u64)
}

/// Seeded RNG used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random vector in GF(p)^n.
pub fn random_vector(rng: &mut ChaCha8Rng, field: crate::field::Field, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.gen_range(0..field.p())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_reports_lexicographically_first_failure() {
        let o = check_tuples("t", &[4, 4, 4], 1, Mode::Exhaustive, |t| !(t[0] >= 1 && t[2] == 3));
        assert_eq!(o.counterexample, Some(vec![1, 0, 3]));
    }

    #[test]
    fn budget_switches_to_sampling() {
        let o = check_tuples("t", &[1000, 1000, 1000], 1, Mode::default(), |_| true);
        assert!(o.passed && !o.exhaustive && o.tuples == DEFAULT_SAMPLES as u64);
        let o = check_tuples("t", &[10, 10], 1, Mode::default(), |_| true);
        assert!(o.exhaustive && o.tuples == 100);
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = Mode::Random { seed: 7, samples: 10_000 };
        let a = check_tuples("t", &[50, 50], 1, m, |t| t[0] + t[1] < 95);
        let b = check_tuples("t", &[50, 50], 1, m, |t| t[0] + t[1] < 95);
        assert_eq!(a, b);
        assert!(!a.passed);
    }
}
