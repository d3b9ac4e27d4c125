mod common;

use common::{fixpoint_eval, formula, p};
use edgeltl_core::ast::{atoms_of, AtomSet, Formula};
use edgeltl_core::falsifier::{falsify, minimize, Counterexample, FalsifyError, SearchBounds};
use edgeltl_core::semantics::{LassoTrace, State};
use proptest::prelude::*;

fn bounds(max_stem: usize, max_loop: usize, max_unroll: usize) -> SearchBounds {
    SearchBounds { max_stem, max_loop, max_unroll, atom_cap: 3 }
}

/// Every sequence of `len` states, all-true state first, first atom as the
/// most significant bit.
fn words(width: usize, len: usize) -> Vec<Vec<State>> {
    let per_state = 1u32 << width;
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..per_state).rev().map(move |bits| {
                    let mut w = w.clone();
                    w.push(State::from_bits(bits, width));
                    w
                })
            })
            .collect();
    }
    out
}

/// The documented search order, written out with plain loops.
fn naive_falsify(f: &Formula, b: &SearchBounds) -> Option<(LassoTrace, usize)> {
    let mut atoms = atoms_of(f);
    if atoms.is_empty() {
        atoms = AtomSet::new(["a"]).unwrap();
    }
    let width = atoms.len();
    let value = |t: &LassoTrace| fixpoint_eval(f, t)[0];
    for k in 0..=b.max_unroll {
        for s in 0..=b.max_stem {
            for stem in words(width, s) {
                for l in 1..=b.max_loop {
                    for cycle in words(width, l) {
                        let base = LassoTrace::new(atoms.clone(), stem.clone(), cycle).unwrap();
                        let t = base.unroll(k);
                        let range = if k == 0 { 0..s } else { s + (k - 1) * l..s + k * l };
                        let v = value(&t);
                        for i in range {
                            if value(&t.stutter_at(i).unwrap()) != v {
                                return Some((t, i));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn tr(stem: &[&[bool]], cycle: &[&[bool]]) -> LassoTrace {
    LassoTrace::from_rows(["a"], stem, cycle).unwrap()
}

#[test]
fn next_a_example() {
    let c = falsify(&p("X a"), &SearchBounds::default()).unwrap().unwrap();
    assert_eq!(c.trace, tr(&[&[true]], &[&[false]]));
    assert_eq!(c.stutter_index, 0);
    assert!(!c.value_before && c.value_after);
    assert_eq!(c.stuttered(), tr(&[&[true], &[true]], &[&[false]]));
}

#[test]
fn rise_example_matches_brute_force() {
    let f = p("up a");
    let c = falsify(&f, &SearchBounds::default()).unwrap().unwrap();
    assert_eq!(c.trace, tr(&[&[false]], &[&[true]]));
    assert_eq!(c.stutter_index, 0);
    assert!(c.value_before && !c.value_after);
    let (t, i) = naive_falsify(&f, &bounds(1, 1, 0)).unwrap();
    assert_eq!((t, i), (c.trace, c.stutter_index));
}

#[test]
fn next_free_formula_has_no_counterexample() {
    assert_eq!(falsify(&p("G(a -> F b)"), &SearchBounds::default()).unwrap(), None);
    assert_eq!(falsify(&p("true"), &SearchBounds::default()).unwrap(), None);
}

#[test]
fn minimized_next_a_is_smallest() {
    let f = p("X a");
    let big = Counterexample {
        formula: f.clone(),
        trace: LassoTrace::from_rows(["a"], &[&[false], &[true], &[true]], &[&[false], &[true]]).unwrap(),
        stutter_index: 0,
        value_before: true,
        value_after: false,
    };
    assert!(big.validate().unwrap());
    let m = minimize(&big, &f);
    assert_eq!((m.trace.stem_len(), m.trace.loop_len(), m.stutter_index), (1, 1, 0));
    assert!(m.validate().unwrap());
    // a stem of length zero has nothing to stutter, so nothing smaller exists
    assert!(naive_falsify(&f, &bounds(0, 3, 0)).is_none());
}

#[test]
fn unrolling_finds_stutters_inside_the_loop() {
    // only stutters after the stem matter for a formula that ignores the stem
    let f = p("X X X a");
    let with = falsify(&f, &bounds(0, 2, 2)).unwrap();
    let without = falsify(&f, &bounds(0, 2, 0)).unwrap();
    assert!(without.is_none());
    let c = with.expect("counterexample after unrolling");
    assert!(c.validate().unwrap());
    assert_eq!(naive_falsify(&f, &bounds(0, 2, 2)), Some((c.trace, c.stutter_index)));
}

#[test]
fn atom_cap_and_bounds_are_enforced() {
    let f = p("X(a & b & c & d)");
    assert_eq!(falsify(&f, &SearchBounds::default()), Err(FalsifyError::AtomCap { found: 4, cap: 3 }));
    let wide = SearchBounds { atom_cap: 4, ..bounds(1, 1, 0) };
    assert!(falsify(&f, &wide).unwrap().is_some());
    assert!(matches!(falsify(&p("X a"), &bounds(2, 0, 0)), Err(FalsifyError::InvalidBounds(_))));
}

#[test]
fn counterexample_json_round_trip() {
    let c = falsify(&p("a U X b"), &SearchBounds::default()).unwrap().unwrap();
    let back = Counterexample::from_json(&c.to_json()).unwrap();
    assert_eq!(back, c);
    assert!(Counterexample::from_json(&serde_json::json!({"formula": "X a"})).is_err());
}

#[test]
fn known_non_closed_formulas_are_refuted() {
    for src in ["X a", "up a", "down a", "edge a", "a U X b", "G(a -> X b)", "F(a & X !a & X X a)", "c U (up d & f)"] {
        let c = falsify(&p(src), &SearchBounds::default()).unwrap().unwrap_or_else(|| panic!("{src}"));
        assert!(c.validate().unwrap(), "{src}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn matches_the_naive_enumeration(seed in any::<u64>(), width in 1usize..3) {
        let names = &["a", "b"][..width];
        let f = formula(seed, names, 4, false);
        let b = bounds(2, 2, 2);
        let got = falsify(&f, &b).unwrap().map(|c| (c.trace, c.stutter_index));
        prop_assert_eq!(got, naive_falsify(&f, &b));
    }

    #[test]
    fn results_validate(seed in any::<u64>()) {
        let f = formula(seed, &["a", "b"], 5, false);
        if let Some(c) = falsify(&f, &SearchBounds::default()).unwrap() {
            prop_assert!(c.validate().unwrap());
            prop_assert_eq!(&c.formula, &f);
        }
    }

    #[test]
    fn larger_bounds_keep_a_counterexample(seed in any::<u64>()) {
        let f = formula(seed, &["a", "b"], 4, false);
        if falsify(&f, &bounds(1, 1, 1)).unwrap().is_some() {
            prop_assert!(falsify(&f, &bounds(3, 2, 2)).unwrap().is_some());
        }
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let f = formula(seed, &["a", "b", "c"], 4, false);
        prop_assert_eq!(falsify(&f, &bounds(2, 2, 1)).unwrap(), falsify(&f, &bounds(2, 2, 1)).unwrap());
    }

    #[test]
    fn minimize_is_idempotent_and_no_larger(seed in any::<u64>()) {
        let f = formula(seed, &["a", "b"], 5, false);
        if let Some(c) = falsify(&f, &SearchBounds::default()).unwrap() {
            let m = minimize(&c, &f);
            prop_assert!(m.validate().unwrap());
            prop_assert!(m.trace.stem_len() <= c.trace.stem_len());
            prop_assert!(m.trace.loop_len() <= c.trace.loop_len());
            prop_assert_eq!(minimize(&m, &f), m);
        }
    }
}
