#![allow(dead_code)]

use edgeltl_core::ast::{AtomSet, Formula};
use edgeltl_core::generate::FormulaGen;
use edgeltl_core::semantics::{LassoTrace, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(s: &str) -> Formula {
    edgeltl_core::syntax::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn formula(seed: u64, atoms: &[&str], depth: usize, next_free: bool) -> Formula {
    let gen = FormulaGen::new(atoms, depth);
    let gen = if next_free { gen.next_free() } else { gen };
    gen.sample(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_trace(seed: u64, atoms: &[&str], max_stem: usize, max_loop: usize) -> LassoTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = rng.gen_range(0..=max_stem);
    let l = rng.gen_range(1..=max_loop);
    let mut state = || State((0..atoms.len()).map(|_| rng.gen_bool(0.5)).collect());
    let stem = (0..s).map(|_| state()).collect();
    let cycle = (0..l).map(|_| state()).collect();
    LassoTrace::new(AtomSet::new(atoms.iter().copied()).unwrap(), stem, cycle).unwrap()
}

/// Model checking on the lasso viewed as a graph: each of the `s + l`
/// positions has one successor, and the temporal operators are solved by
/// plain fixpoint iteration.
pub fn fixpoint_eval(f: &Formula, t: &LassoTrace) -> Vec<bool> {
    let n = t.stem_len() + t.loop_len();
    let succ = |q: usize| if q + 1 < n { q + 1 } else { t.stem_len() };
    let rec = |g: &Formula| fixpoint_eval(g, t);
    let pointwise = |a: Vec<bool>, b: Vec<bool>, op: fn(bool, bool) -> bool| -> Vec<bool> {
        a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
    };
    let iterate = |init: bool, step: &dyn Fn(&[bool], usize) -> bool| -> Vec<bool> {
        let mut v = vec![init; n];
        loop {
            let next: Vec<bool> = (0..n).map(|q| step(&v, q)).collect();
            if next == v {
                return v;
            }
            v = next;
        }
    };
    match f {
        Formula::Atom(a) => {
            let k = t.atoms().index_of(a).expect("atom in trace");
            (0..n).map(|q| t.state(q).get(k)).collect()
        }
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Not(a) => rec(a).into_iter().map(|x| !x).collect(),
        Formula::And(a, b) => pointwise(rec(a), rec(b), |x, y| x && y),
        Formula::Or(a, b) => pointwise(rec(a), rec(b), |x, y| x || y),
        Formula::Implies(a, b) => pointwise(rec(a), rec(b), |x, y| !x || y),
        Formula::Iff(a, b) => pointwise(rec(a), rec(b), |x, y| x == y),
        Formula::Next(a) => {
            let v = rec(a);
            (0..n).map(|q| v[succ(q)]).collect()
        }
        Formula::Always(a) => {
            let v = rec(a);
            iterate(true, &|cur, q| v[q] && cur[succ(q)])
        }
        Formula::Eventually(a) => {
            let v = rec(a);
            iterate(false, &|cur, q| v[q] || cur[succ(q)])
        }
        Formula::Until(a, b) => {
            let (va, vb) = (rec(a), rec(b));
            iterate(false, &|cur, q| vb[q] || (va[q] && cur[succ(q)]))
        }
        Formula::Rise(a) => {
            let v = rec(a);
            (0..n).map(|q| !v[q] && v[succ(q)]).collect()
        }
        Formula::Fall(a) => {
            let v = rec(a);
            (0..n).map(|q| v[q] && !v[succ(q)]).collect()
        }
        Formula::AnyEdge(a) => {
            let v = rec(a);
            (0..n).map(|q| v[q] != v[succ(q)]).collect()
        }
    }
}
