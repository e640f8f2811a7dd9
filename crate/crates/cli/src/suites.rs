//! Seeded verification suites for the linking lemmas and density searches.
//! Case generation is deterministic per (seed, index); cases fan out across
//! threads and collect in index order, so results never depend on the
//! thread count.

use anyhow::Result;
use rayon::prelude::*;
use serde_json::{json, Value};

use rigiditylab_core::element::{Coord, LineElement};
use rigiditylab_core::linking::{
    detect_ordering_via_words, find_element_near, find_element_with_pair, find_unlinked_witness,
    linked, scan_words_fixed, SearchBudget,
};
use rigiditylab_core::models::{self, suite_rng as seeded_rng, UnlinkedKinds};
use rigiditylab_core::rat::{self, Rat};
use rigiditylab_core::reps::Representation;

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
    /// Deterministic work counter (fixed-point solves, scans, or searches).
    pub work: u64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "first_counterexample": self.first_counterexample,
            "work": self.work,
        })
    }
}

fn collect_outcome(
    name: &'static str,
    results: Vec<(bool, u64, Option<String>)>,
) -> SuiteOutcome {
    let cases = results.len();
    let failures = results.iter().filter(|(ok, _, _)| !ok).count();
    let work = results.iter().map(|(_, w, _)| w).sum();
    let first_counterexample = results
        .iter()
        .find(|(ok, _, _)| !ok)
        .and_then(|(_, _, c)| c.clone());
    SuiteOutcome {
        name,
        cases,
        failures,
        first_counterexample,
        work,
    }
}

/// One case of the linked-words suite: generate a pair (linked for even
/// indices, cycling unlinked patterns otherwise), cross-check the linking
/// verdict against the exhaustive scan, and certify a witness when unlinked.
fn linked_case(seed: u64, index: usize, scan_n: i64) -> (bool, u64, Option<String>) {
    let mut rng = seeded_rng(seed, index as u64);
    let patterns = [
        UnlinkedKinds::lemma_pattern(),
        UnlinkedKinds::lemma_pattern_inverse(),
        UnlinkedKinds {
            a_plus_first: true,
            b_plus_first: true,
        },
        UnlinkedKinds {
            a_plus_first: false,
            b_plus_first: false,
        },
    ];
    let (a, b) = if index % 2 == 0 {
        models::random_linked_pair(&mut rng)
    } else {
        models::random_unlinked_pair(&mut rng, patterns[(index / 2) % 4])
    };
    let a = LineElement::Pl(a);
    let b = LineElement::Pl(b);
    let mut work = 0u64;
    let verdict = match linked(&a, &b) {
        Ok(v) => v,
        Err(e) => return (false, work, Some(format!("case {index}: {e}"))),
    };
    let table = match scan_words_fixed(&a, &b, scan_n) {
        Ok(t) => t,
        Err(e) => return (false, work, Some(format!("case {index}: {e}"))),
    };
    work += table.cells.len() as u64;
    if verdict.counts_as_linked() {
        if !table.all_true() {
            let bad = table.false_entries();
            return (
                false,
                work,
                Some(format!(
                    "case {index}: linked pair but scan found empty Fix at {:?}",
                    bad.first()
                )),
            );
        }
        (true, work, None)
    } else {
        // Unlinked: the scan may or may not show a failure inside the box,
        // but an outward search must find a certified witness.
        match find_unlinked_witness(&a, &b, 32) {
            Ok(w) => {
                work += 1;
                if w.certificate.excludes_zero() {
                    (true, work, None)
                } else {
                    (
                        false,
                        work,
                        Some(format!(
                            "case {index}: witness a^{} b^{} lacks a separating certificate",
                            w.n, w.m
                        )),
                    )
                }
            }
            Err(e) => (false, work, Some(format!("case {index}: {e}"))),
        }
    }
}

pub fn suite_linked(seed: u64, cases: usize, scan_n: i64) -> SuiteOutcome {
    let results: Vec<_> = (0..cases)
        .into_par_iter()
        .map(|i| linked_case(seed, i, scan_n))
        .collect();
    collect_outcome("lemma_linked", results)
}

fn unlinked_case(seed: u64, index: usize, n_max: u32) -> (bool, u64, Option<String>) {
    let mut rng = seeded_rng(seed, index as u64);
    let patterns = [
        UnlinkedKinds::lemma_pattern(),
        UnlinkedKinds::lemma_pattern_inverse(),
        UnlinkedKinds {
            a_plus_first: true,
            b_plus_first: true,
        },
        UnlinkedKinds {
            a_plus_first: false,
            b_plus_first: false,
        },
    ];
    let (a, b) = models::random_unlinked_pair(&mut rng, patterns[index % 4]);
    let mut a = LineElement::Pl(a);
    let mut b = LineElement::Pl(b);
    // Odd cases run on simultaneous inverses, which must behave identically.
    if index % 8 >= 4 {
        a = a.invert();
        b = b.invert();
    }
    match detect_ordering_via_words(&a, &b, n_max) {
        Ok(report) => {
            let work = report.witness_n.unwrap_or(n_max) as u64;
            if report.consistent {
                (true, work, None)
            } else {
                (
                    false,
                    work,
                    Some(format!(
                        "case {index}: word detection {} but ordering {}",
                        report.matches_lemma_pattern, report.ordering
                    )),
                )
            }
        }
        Err(e) => (false, 0, Some(format!("case {index}: {e}"))),
    }
}

pub fn suite_unlinked_ordering(seed: u64, cases: usize, n_max: u32) -> SuiteOutcome {
    let results: Vec<_> = (0..cases)
        .into_par_iter()
        .map(|i| unlinked_case(seed, i, n_max))
        .collect();
    collect_outcome("lemma_unlinked", results)
}

fn near_case(
    rep: &Representation,
    seed: u64,
    index: usize,
    eps: &Rat,
) -> (bool, u64, Option<String>) {
    use rand::Rng;
    let mut rng = seeded_rng(seed, 0x10000 + index as u64);
    let x = rng.gen_range(0..65536u32) as f64 / 65536.0;
    let budget = SearchBudget::default();
    match find_element_near(rep, &Coord::Real(x), eps, &budget) {
        Ok(w) => {
            let work = w.word.symbol_len() as u64;
            if !w.fixed_points.is_hyperbolic_like() {
                return (
                    false,
                    work,
                    Some(format!("target {x}: result not hyperbolic-like")),
                );
            }
            let xr = rat::from_f64(x).unwrap();
            for p in &w.fixed_points.points {
                let d = rat::circle_dist(&p.location.to_rational(), &xr);
                if &d > eps {
                    return (
                        false,
                        work,
                        Some(format!(
                            "target {x}: fixed point off by {}",
                            rat::to_f64(&d)
                        )),
                    );
                }
            }
            (true, work, None)
        }
        Err(e) => (false, 0, Some(format!("target {x}: {e}"))),
    }
}

pub fn suite_dense(rep: &Representation, seed: u64, cases: usize, eps: &Rat) -> SuiteOutcome {
    let results: Vec<_> = (0..cases)
        .into_par_iter()
        .map(|i| near_case(rep, seed, i, eps))
        .collect();
    collect_outcome("lemma_dense", results)
}

fn pair_case(
    rep: &Representation,
    seed: u64,
    index: usize,
    eps: &Rat,
) -> (bool, u64, Option<String>) {
    use rand::Rng;
    let mut rng = seeded_rng(seed, 0x20000 + index as u64);
    let eps_f = rat::to_f64(eps);
    let x = rng.gen_range(0..65536u32) as f64 / 65536.0;
    // Separate y from x by at least 4 eps so the precondition holds.
    let margin = (4.0 * eps_f).max(0.05);
    let y = x + margin + rng.gen_range(0..32768u32) as f64 / 65536.0 * (1.0 - 2.0 * margin);
    let budget = SearchBudget::default();
    match find_element_with_pair(rep, &Coord::Real(x), &Coord::Real(y), eps, &budget) {
        Ok(w) => {
            let work = w.word.symbol_len() as u64;
            let xr = rat::from_f64(x).unwrap();
            let yr = rat::from_f64(y).unwrap();
            let rp = w
                .fixed_points
                .repelling()
                .unwrap()
                .location
                .to_rational();
            let att = w
                .fixed_points
                .attracting()
                .unwrap()
                .location
                .to_rational();
            if &rat::circle_dist(&rp, &xr) > eps || &rat::circle_dist(&att, &yr) > eps {
                return (
                    false,
                    work,
                    Some(format!("targets ({x}, {y}): fixed points out of range")),
                );
            }
            (true, work, None)
        }
        Err(e) => (false, 0, Some(format!("targets ({x}, {y}): {e}"))),
    }
}

pub fn suite_pairs(rep: &Representation, seed: u64, cases: usize, eps: &Rat) -> SuiteOutcome {
    let results: Vec<_> = (0..cases)
        .into_par_iter()
        .map(|i| pair_case(rep, seed, i, eps))
        .collect();
    collect_outcome("lemma_pairs_dense", results)
}

/// All four suites with shared configuration.
pub fn run_all(
    rep: &Representation,
    seed: u64,
    cases: usize,
    scan_n: i64,
    n_max: u32,
    eps: &Rat,
    density_cases: usize,
) -> Result<Vec<SuiteOutcome>> {
    Ok(vec![
        suite_linked(seed, cases, scan_n),
        suite_unlinked_ordering(seed, cases, n_max),
        suite_dense(rep, seed, density_cases, eps),
        suite_pairs(rep, seed, density_cases, eps),
    ])
}
