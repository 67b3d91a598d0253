//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use pladder_core::algcore::{catalog, CATALOG};
use pladder_core::exactlin::PrimeField;
use pladder_core::laddercalc::{
    builtin_bare, builtin_compact_i, builtin_preprojective, derive_closure, ladder_height_with, replay, ttf_sequence,
    Direction, Height, DEFAULT_BUDGET,
};
use pladder_core::perfcx::{ladder_verify_derived, ttf_check};
use pladder_core::recfun::{
    flip_equivalence_check, verify_adjunction, verify_hom_embedding, verify_nakayama_identity, verify_recollement,
    Functors, Pair, Which,
};
use pladder_core::report::Report;

const SEED: u64 = 20_240_601;
const SELFINJECTIVE: [&str; 2] = ["k", "dual"];
const BASES: [&str; 3] = ["k", "dual", "pathA2"];

struct Outcome {
    passed: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn from_reports(reports: &[(String, Report)], extra: &str) -> Self {
        let mut failures = Vec::new();
        let mut checks = 0;
        for (ctx, r) in reports {
            for c in &r.checks {
                checks += c.total;
                if !c.failures.is_empty() {
                    failures.push(format!("{ctx}: {} [{}] {}", r.title, c.name, c.failures[0]));
                }
            }
        }
        Outcome {
            passed: failures.is_empty(),
            summary: format!("{checks} checks{extra}"),
            failures,
        }
    }
}

fn functors(name: &str, n: usize) -> Functors<PrimeField> {
    let fld = PrimeField::gf101();
    Functors::new(&Arc::new(catalog(name, &fld).expect("catalog algebra")), n).expect("functors")
}

fn recollement_suite() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for n in 2..=4 {
        for lam in BASES {
            let fs = functors(lam, n);
            for w in [Which::First, Which::Second] {
                reports.push((format!("n = {n}, Λ = {lam}, {w:?}"), verify_recollement(&fs, w, 50, SEED)));
            }
        }
    }
    let elapsed = start.elapsed();
    let mut out = Outcome::from_reports(&reports, &format!(", {:.1} s", elapsed.as_secs_f64()));
    if elapsed > Duration::from_secs(120) {
        out.passed = false;
        out.failures.push(format!("runtime {:.1} s exceeds 120 s", elapsed.as_secs_f64()));
    }
    out
}

fn period_four_cycle() -> Outcome {
    let mut reports = Vec::new();
    for n in [2, 3] {
        for lam in BASES {
            let fs = functors(lam, n);
            for (k, p) in Pair::CYCLE.iter().enumerate() {
                reports.push((format!("n = {n}, Λ = {lam}"), verify_adjunction(&fs, *p, 20, SEED + k as u64)));
            }
            reports.push((format!("n = {n}, Λ = {lam}"), ladder_verify_derived(&fs, 20, SEED, 4)));
        }
    }
    let mut closing = Report::new("cycle closes");
    for k in 0..4 {
        let (a, b) = (Pair::CYCLE[k], Pair::CYCLE[(k + 1) % 4]);
        closing.record("consecutive pairs share a functor", a.right() == b.left(), || a.label());
    }
    reports.push(("symbolic".into(), closing));
    Outcome::from_reports(&reports, "")
}

fn flip_equivalence() -> Outcome {
    let reports: Vec<_> = BASES
        .iter()
        .flat_map(|lam| [2, 3].map(|n| (format!("n = {n}, Λ = {lam}"), flip_equivalence_check(&functors(lam, n), 100, SEED))))
        .collect();
    Outcome::from_reports(&reports, "")
}

fn nakayama_identity() -> Outcome {
    let reports: Vec<_> = SELFINJECTIVE
        .iter()
        .map(|lam| (format!("Λ = {lam}"), verify_nakayama_identity(&functors(lam, 2), 30, SEED)))
        .collect();
    let mut out = Outcome::from_reports(&reports, "");
    let gated = verify_nakayama_identity(&functors("pathA2", 2), 30, SEED);
    let fired = gated
        .checks
        .iter()
        .any(|c| c.name == "Λ selfinjective" && !c.failures.is_empty());
    if fired {
        out.summary.push_str(", gate fires for pathA2");
    } else {
        out.passed = false;
        out.failures.push("selfinjectivity gate did not fire for pathA2".into());
    }
    out
}

fn ttf_compact() -> Outcome {
    let fs = functors("k", 2);
    Outcome::from_reports(&[("Π2(k)".into(), ttf_check(&fs, 20, SEED, 4))], "")
}

fn homological_embedding() -> Outcome {
    let reports: Vec<_> = CATALOG
        .iter()
        .flat_map(|lam| [2, 3].map(|n| (format!("n = {n}, Λ = {lam}"), verify_hom_embedding(&functors(lam, n), 10, 4, SEED))))
        .collect();
    Outcome::from_reports(&reports, "")
}

fn inference_engine() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |ok: bool, what: String| {
        if !ok {
            failures.push(what);
        }
    };
    let run = |fb| {
        let (c, d) = derive_closure(fb, DEFAULT_BUDGET);
        let r = ladder_height_with(&c, d.exhausted).expect("anchor present");
        (c, d, r)
    };
    let pre = builtin_preprojective();
    let (c, d, r) = run(&pre);
    let p4 = Height::Infinite { period: 4 };
    expect(r.height_down == p4 && r.height_up == p4, format!("preprojective: {} / {}", r.height_down, r.height_up));
    for dir in [Direction::Down, Direction::Up] {
        let t = ttf_sequence(&r, &c, dir);
        expect(t.entries.len() == 6 && t.wraparound.is_some(), format!("preprojective TTF {dir:?}: {:?}", t.entries));
    }
    expect(replay(&pre, &d.steps).ok() == Some(c.clone()), "preprojective trace does not replay".into());
    expect(run(&pre).1 == d, "preprojective derivation is not deterministic".into());

    let bare = builtin_bare();
    let (c, d, r) = run(&bare);
    expect(r.height_down == Height::Finite(1) && r.height_up == Height::Finite(1), format!("bare: {}", r.height_down));
    expect(ttf_sequence(&r, &c, Direction::Down).entries.len() == 3, "bare TTF length".into());
    expect(replay(&bare, &d.steps).ok() == Some(c), "bare trace does not replay".into());

    let ci = builtin_compact_i();
    let (c, d, r) = run(&ci);
    expect(r.height_down == Height::Finite(2), format!("compact-i: {}", r.height_down));
    let t = ttf_sequence(&r, &c, Direction::Down);
    expect(t.entries.len() == 4 && t.triples.len() == 2, format!("compact-i TTF: {:?}", t.entries));
    expect(replay(&ci, &d.steps).ok() == Some(c), "compact-i trace does not replay".into());

    Outcome {
        passed: failures.is_empty(),
        summary: "preprojective (infinite, period 4) both ways, bare 1, compact-i 2".into(),
        failures,
    }
}

fn structural_oracles() -> Outcome {
    let mut failures = common::preprojective_dimension_mismatches();
    let mut instances = 0;
    for n in [2, 3] {
        let (k, bad) = common::gf2_hom_agreement(n, 4);
        instances += k;
        failures.extend(bad);
    }
    for fld in [PrimeField::gf101(), PrimeField::gf32003()] {
        if !common::morita_matches(&fld) {
            failures.push(format!("Morita table mismatch over GF({})", fld.modulus()));
        }
    }
    Outcome {
        passed: failures.is_empty(),
        summary: format!("dims 1, 4, 10, 20, 35; {instances} GF(2) hom instances; Morita table"),
        failures,
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("recollement suite", recollement_suite),
        ("period-four cycle", period_four_cycle),
        ("flip equivalence", flip_equivalence),
        ("Nakayama identity", nakayama_identity),
        ("TTF at compact level", ttf_compact),
        ("homological embedding", homological_embedding),
        ("inference engine", inference_engine),
        ("structural oracles", structural_oracles),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        all &= out.passed;
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag}  {name} ({})", k + 1, out.summary);
        for f in out.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    if !all {
        std::process::exit(1);
    }
}
