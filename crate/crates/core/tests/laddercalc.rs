use std::sync::Arc;

use pladder_core::algcore::catalog;
use pladder_core::exactlin::PrimeField;
use pladder_core::laddercalc::*;
use pladder_core::recfun::{verify_adjunction, FunctorName, Functors, Pair};

fn closure(fb: &FactBase) -> (FactBase, Derivation, LadderReport) {
    let (c, d) = derive_closure(fb, DEFAULT_BUDGET);
    let r = ladder_height_with(&c, d.exhausted).unwrap();
    (c, d, r)
}

fn bare_with_cg() -> FactBase {
    let mut fb = builtin_bare();
    for c in ["U", "T", "V"] {
        fb.insert(Atom::compactly_generated(c)).unwrap();
    }
    fb
}

#[test]
fn preprojective_is_periodic_both_ways() {
    let (c, d, r) = closure(&builtin_preprojective());
    assert!(!d.exhausted);
    assert_eq!(r.height_down, Height::Infinite { period: 4 });
    assert_eq!(r.height_up, Height::Infinite { period: 4 });
    assert_eq!(r.height_down.to_string(), "(infinite, period 4)");
    let down = ttf_sequence(&r, &c, Direction::Down);
    assert_eq!(down.entries.len(), 6);
    assert_eq!(down.entries[..2], down.entries[4..]);
    assert!(down.wraparound.is_some());
    let up = ttf_sequence(&r, &c, Direction::Up);
    assert_eq!(up.entries.len(), 6);
    assert_eq!(up.entries[..2], up.entries[4..]);
}

#[test]
fn bare_recollement_has_height_one() {
    let (c, d, r) = closure(&builtin_bare());
    assert_eq!(r.height_down, Height::Finite(1));
    assert_eq!(r.height_up, Height::Finite(1));
    assert!(d.steps.iter().all(|s| s.fresh.is_empty()));
    assert_eq!(c.recollements().count(), 1);
    let t = ttf_sequence(&r, &c, Direction::Down);
    assert_eq!(t.entries.len(), 3);
    assert_eq!(t.triples, vec![[0, 1, 2]]);
}

#[test]
fn compact_i_gives_height_two_down() {
    let (c, _, r) = closure(&builtin_compact_i());
    assert_eq!(r.height_down, Height::Finite(2));
    let t = ttf_sequence(&r, &c, Direction::Down);
    assert_eq!(t.entries.len(), 4);
    assert_eq!(t.triples.len(), 2);
    assert_eq!(t.entries, vec!["l(V)", "i(U)", "r(V)", "p¹(U)"]);
}

#[test]
fn height_two_triggers_are_equivalent() {
    // Each of the four conditions alone yields the same closure facts.
    let triggers = [
        Atom::flag(FunctorFlag::PreservesCompacts, "i"),
        Atom::flag(FunctorFlag::PreservesCompacts, "e"),
    ];
    let mut reports = Vec::new();
    for t in &triggers {
        let (c, _, r) = closure(&bare_with_cg().add_fact(t.clone()).unwrap());
        for other in &triggers {
            assert!(c.contains(other), "{t} should yield {other}");
        }
        assert!(c.right_adjoint("p").is_some() && c.right_adjoint("r").is_some());
        reports.push(r.height_down);
    }
    for (f, g) in [("p", "p¹"), ("r", "r¹")] {
        let mut fb = bare_with_cg();
        let (d, cd) = {
            let s = fb.functor(f).unwrap();
            (s.codomain.clone(), s.domain.clone())
        };
        fb.declare_functor(g, &d, &cd).unwrap();
        fb.insert(Atom::adjoint(f, g)).unwrap();
        let (c, _, r) = closure(&fb);
        for t in &triggers {
            assert!(c.contains(t), "right adjoint of {f} should yield {t}");
        }
        reports.push(r.height_down);
    }
    assert!(reports.iter().all(|h| *h == Height::Finite(2)), "{reports:?}");
}

#[test]
fn height_two_needs_compact_generation() {
    let fb = builtin_bare().add_fact(Atom::flag(FunctorFlag::PreservesCompacts, "i")).unwrap();
    let (_, _, r) = closure(&fb);
    assert_eq!(r.height_down, Height::Finite(1));
}

#[test]
fn heights_are_invariant_under_renaming() {
    for fb in [builtin_preprojective(), builtin_compact_i(), builtin_bare()] {
        let (_, _, r) = closure(&fb);
        let renamed = fb.rename(|s| format!("x{s}")).unwrap();
        let (_, _, r2) = closure(&renamed);
        assert_eq!(r.height_down, r2.height_down);
        assert_eq!(r.height_up, r2.height_up);
    }
}

#[test]
fn traces_replay_deterministically() {
    for fb in [builtin_preprojective(), builtin_compact_i(), builtin_bare()] {
        let (c1, d1) = derive_closure(&fb, DEFAULT_BUDGET);
        let (c2, d2) = derive_closure(&fb, DEFAULT_BUDGET);
        assert_eq!(d1, d2);
        assert_eq!(c1, c2);
        let replayed = replay(&fb, &d1.steps).unwrap();
        assert_eq!(replayed, c1);
    }
}

#[test]
fn explanations_replay_on_their_own() {
    let fb = builtin_preprojective();
    let (c, d) = derive_closure(&fb, DEFAULT_BUDGET);
    for atom in c.atoms() {
        let steps = explain(&c, &d, atom).unwrap();
        let sub = replay(&fb, &steps).unwrap();
        assert!(sub.contains(atom), "trace of {atom} does not rebuild it");
    }
    let missing = Atom::adjoint("i", "q");
    assert!(explain(&c, &d, &missing).is_err());
}

#[test]
fn replay_rejects_missing_premises() {
    let (_, d) = derive_closure(&builtin_compact_i(), DEFAULT_BUDGET);
    let late: Vec<Step> = d.steps.iter().skip(1).cloned().collect();
    assert!(replay(&builtin_compact_i(), &late).is_err());
}

#[test]
fn small_budget_reports_a_lower_bound() {
    let (c, d) = derive_closure(&builtin_preprojective(), 1);
    assert!(d.exhausted);
    let r = ladder_height_with(&c, d.exhausted).unwrap();
    assert!(matches!(r.height_down, Height::AtLeast(_)) || matches!(r.height_up, Height::AtLeast(_)));
}

#[test]
fn derived_adjunctions_hold_on_modules() {
    // Every adjunction the engine derives between T1, U1, T2, U2 is
    // certified at module level.
    let (c, _) = derive_closure(&builtin_preprojective(), DEFAULT_BUDGET);
    let fld = PrimeField::gf101();
    let lam = Arc::new(catalog("dual", &fld).unwrap());
    let fs = Functors::new(&lam, 2).unwrap();
    let mut checked = 0;
    for a in c.atoms() {
        if let Atom::Adjoint(f, g) = a {
            let (Ok(f), Ok(g)) = (FunctorName::parse(f), FunctorName::parse(g)) else { continue };
            let pair = Pair::from_names(f, g).expect("derived pairs lie on the cycle");
            let rep = verify_adjunction(&fs, pair, 5, 11);
            assert!(rep.passed(), "{rep}");
            checked += 1;
        }
    }
    assert_eq!(checked, 4);
}

#[test]
fn restriction_to_finite_dimensional_objects() {
    let fb = builtin_compact_i().add_fact(Atom::flag(FunctorFlag::RestrictsToFd, "l")).unwrap();
    let (c, _, _) = closure(&fb);
    for f in ["q", "i", "p", "l", "e", "r"] {
        assert!(c.holds(FunctorFlag::RestrictsToFd, f), "{f}");
    }
    let (c, _, _) = closure(&builtin_bare().add_fact(Atom::flag(FunctorFlag::RestrictsToFd, "l")).unwrap());
    assert!(!c.holds(FunctorFlag::RestrictsToFd, "q"));
}

#[test]
fn negated_flags_conflict_with_derived_ones() {
    let fb = builtin_compact_i()
        .add_fact(Atom::parse("not preserves_compacts(e)").unwrap())
        .unwrap();
    let (_, d) = derive_closure(&fb, DEFAULT_BUDGET);
    assert!(!d.conflicts.is_empty());
}

#[test]
fn atoms_round_trip_through_text() {
    let (c, _) = derive_closure(&builtin_preprojective(), DEFAULT_BUDGET);
    for a in c.atoms() {
        assert_eq!(&Atom::parse(&a.to_string()).unwrap(), a);
    }
}
