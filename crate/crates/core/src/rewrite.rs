//! The fixed logical rewrite set used before proof search.

use crate::ast::{resugar_edges, Formula};

/// A rewrite step label, used for proof notes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    DoubleNegation,
    EdgeDuality,
    AlwaysOverAnd,
    AlwaysDeMorgan,
    AlwaysSplitImplies,
    AlwaysImpliesDeMorgan,
    AlwaysImpliesNot,
    EventuallyOverOr,
    EventuallyDeMorgan,
    Curry,
    IfThenElse,
    AnyEdge,
    Resugar,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::DoubleNegation => "!!x = x",
            Rule::EdgeDuality => "up !x = down x, down !x = up x, edge !x = edge x",
            Rule::AlwaysOverAnd => "G(x & y) = G x & G y",
            Rule::AlwaysDeMorgan => "G !(x | y) = G(!x & !y)",
            Rule::AlwaysSplitImplies => "G(x -> y & z) = G(x -> y) & G(x -> z)",
            Rule::AlwaysImpliesDeMorgan => "G(x -> !(y | z)) = G(x -> !y & !z)",
            Rule::AlwaysImpliesNot => "G(x -> !y) = !F(x & y)",
            Rule::EventuallyOverOr => "F(x | y) = F x | F y",
            Rule::EventuallyDeMorgan => "F !(x & y) = F(!x | !y)",
            Rule::Curry => "x -> (y -> z) = (x & y) -> z",
            Rule::IfThenElse => "(c & t) | (!c & e) = (c -> t) & (!c -> e)",
            Rule::AnyEdge => "edge x = up x | down x",
            Rule::Resugar => "!x & X x = up x, x & X !x = down x",
        }
    }
}

/// Applies the logical rewrite set bottom-up until nothing changes.
pub fn rewrite_logic(f: &Formula) -> Formula {
    rewrite_logic_traced(f, &mut Vec::new())
}

/// Like [`rewrite_logic`], also recording each rule that fired.
pub fn rewrite_logic_traced(f: &Formula, fired: &mut Vec<Rule>) -> Formula {
    let mut cur = f.clone();
    loop {
        let next = pass(&cur, fired);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn pass(f: &Formula, fired: &mut Vec<Rule>) -> Formula {
    let g = f.map_children(|c| pass(c, fired));
    match step(&g) {
        Some((rule, h)) => {
            record(fired, rule);
            h
        }
        None => g,
    }
}

fn record(fired: &mut Vec<Rule>, rule: Rule) {
    if !fired.contains(&rule) {
        fired.push(rule);
    }
}

fn step(f: &Formula) -> Option<(Rule, Formula)> {
    use Formula::*;
    let not = |x: &Formula| Formula::not(x.clone());
    Some(match f {
        Not(a) => match &**a {
            Not(x) => (Rule::DoubleNegation, (**x).clone()),
            _ => return None,
        },
        Rise(a) | Fall(a) | AnyEdge(a) => {
            let Not(x) = &**a else { return None };
            let x = (**x).clone();
            let g = match f {
                Rise(_) => Formula::fall(x),
                Fall(_) => Formula::rise(x),
                _ => Formula::any_edge(x),
            };
            (Rule::EdgeDuality, g)
        }
        Always(a) => match &**a {
            And(x, y) => (
                Rule::AlwaysOverAnd,
                Formula::and(Formula::always((**x).clone()), Formula::always((**y).clone())),
            ),
            Not(n) => match &**n {
                Or(x, y) => (Rule::AlwaysDeMorgan, Formula::always(Formula::and(not(x), not(y)))),
                _ => return None,
            },
            Implies(x, c) => match &**c {
                And(y, z) => (
                    Rule::AlwaysSplitImplies,
                    Formula::and(
                        Formula::always(Formula::implies((**x).clone(), (**y).clone())),
                        Formula::always(Formula::implies((**x).clone(), (**z).clone())),
                    ),
                ),
                Not(n) => match &**n {
                    Or(y, z) => (
                        Rule::AlwaysImpliesDeMorgan,
                        Formula::always(Formula::implies((**x).clone(), Formula::and(not(y), not(z)))),
                    ),
                    y => (
                        Rule::AlwaysImpliesNot,
                        Formula::not(Formula::eventually(Formula::and((**x).clone(), y.clone()))),
                    ),
                },
                _ => return None,
            },
            _ => return None,
        },
        Eventually(a) => match &**a {
            Or(x, y) => (
                Rule::EventuallyOverOr,
                Formula::or(Formula::eventually((**x).clone()), Formula::eventually((**y).clone())),
            ),
            Not(n) => match &**n {
                And(x, y) => (Rule::EventuallyDeMorgan, Formula::eventually(Formula::or(not(x), not(y)))),
                _ => return None,
            },
            _ => return None,
        },
        Implies(x, c) => match &**c {
            Implies(y, z) => (
                Rule::Curry,
                Formula::implies(Formula::and((**x).clone(), (**y).clone()), (**z).clone()),
            ),
            _ => return None,
        },
        Or(l, r) => match (&**l, &**r) {
            (And(c, t), And(d, e)) if complementary(c, d) => (
                Rule::IfThenElse,
                Formula::and(
                    Formula::implies((**c).clone(), (**t).clone()),
                    Formula::implies((**d).clone(), (**e).clone()),
                ),
            ),
            _ => return None,
        },
        _ => return None,
    })
}

fn complementary(a: &Formula, b: &Formula) -> bool {
    matches!(a, Formula::Not(x) if **x == *b) || matches!(b, Formula::Not(x) if **x == *a)
}

/// Rewrites only the edge dualities `up !x`, `down !x` and `edge !x`.
pub fn edge_duality(f: &Formula) -> Formula {
    let g = f.map_children(edge_duality);
    match &g {
        Formula::Rise(a) | Formula::Fall(a) | Formula::AnyEdge(a) if matches!(**a, Formula::Not(_)) => {
            match step(&g) {
                Some((_, h)) => edge_duality(&h),
                None => g,
            }
        }
        _ => g,
    }
}

/// Replaces `edge x` by `up x | down x` everywhere.
pub fn expand_any_edge(f: &Formula) -> Formula {
    match f {
        Formula::AnyEdge(a) => {
            let a = expand_any_edge(a);
            Formula::or(Formula::rise(a.clone()), Formula::fall(a))
        }
        _ => f.map_children(expand_any_edge),
    }
}

/// The analyzer's normal form: resugared edges, `edge` expanded, and the
/// logical rewrite set applied, iterated to a fixpoint.
pub fn normalize(f: &Formula) -> Formula {
    normalize_traced(f, &mut Vec::new())
}

pub fn normalize_traced(f: &Formula, fired: &mut Vec<Rule>) -> Formula {
    let mut cur = f.clone();
    loop {
        let sugared = resugar_edges(&cur);
        if sugared != cur {
            record(fired, Rule::Resugar);
        }
        let expanded = expand_any_edge(&sugared);
        if expanded != sugared {
            record(fired, Rule::AnyEdge);
        }
        let next = rewrite_logic_traced(&expanded, fired);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
