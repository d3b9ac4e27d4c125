use std::collections::HashMap;

use super::{ProofTree, RuleName, Verdict};
use crate::ast::Formula;
use crate::rewrite::normalize_traced;
use crate::syntax::render;

type Outcome = Result<ProofTree, Vec<Formula>>;

/// A prover with a per-instance memo of already analyzed formulas.
#[derive(Debug, Default)]
pub struct Analyzer {
    memo: HashMap<Formula, Outcome>,
}

impl Analyzer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn analyze(&mut self, f: &Formula) -> Verdict {
        match self.prove(f) {
            Ok(p) => Verdict::Closed(p),
            Err(b) => Verdict::Unknown(b),
        }
    }

    fn prove(&mut self, f: &Formula) -> Outcome {
        if let Some(o) = self.memo.get(f) {
            return o.clone();
        }
        // a formula that needs itself is not provable along that path
        self.memo.insert(f.clone(), Err(vec![f.clone()]));
        let mut fired = Vec::new();
        let n = normalize_traced(f, &mut fired);
        let out = if n == *f {
            self.prove_normal(f)
        } else {
            let note = fired.iter().map(|r| r.describe()).collect::<Vec<_>>().join("; ");
            self.prove_normal(&n).map(|p| ProofTree {
                rule: RuleName::LogicRewrite,
                conclusion: f.clone(),
                premises: vec![p],
                note: Some(note),
            })
        };
        self.memo.insert(f.clone(), out.clone());
        out
    }

    fn prove_all(&mut self, goals: &[Formula]) -> Result<Vec<ProofTree>, Vec<Formula>> {
        let mut proofs = Vec::new();
        let mut blockers: Vec<Formula> = Vec::new();
        for g in goals {
            match self.prove(g) {
                Ok(p) => proofs.push(p),
                Err(b) => {
                    for x in b {
                        if !blockers.contains(&x) {
                            blockers.push(x);
                        }
                    }
                }
            }
        }
        if blockers.is_empty() {
            Ok(proofs)
        } else {
            Err(blockers)
        }
    }

    fn prove_normal(&mut self, f: &Formula) -> Outcome {
        use Formula as F;
        match f {
            F::Atom(_) => return Ok(ProofTree::leaf(RuleName::CusVar, f.clone())),
            F::True | F::False => return Ok(ProofTree::leaf(RuleName::CusConst, f.clone())),
            _ => {}
        }
        let mut first_blockers: Option<Vec<Formula>> = None;

        if let Some((rule, goals)) = compositional(f) {
            match self.prove_all(&goals) {
                Ok(premises) => return Ok(ProofTree { rule, conclusion: f.clone(), premises, note: None }),
                Err(b) => {
                    first_blockers.get_or_insert(b);
                }
            }
        }
        let attempts: [fn(&mut Self, &Formula) -> Option<Outcome>; 4] =
            [Self::prop_e, Self::prop_a, Self::prop_u, Self::thm_main];
        for attempt in attempts {
            match attempt(self, f) {
                Some(Ok(p)) => return Ok(p),
                Some(Err(b)) => {
                    first_blockers.get_or_insert(b);
                }
                None => {}
            }
        }
        Err(first_blockers.unwrap_or_else(|| vec![f.clone()]))
    }

    /// `F(up A & X B & C)`.
    fn prop_e(&mut self, f: &Formula) -> Option<Outcome> {
        let Formula::Eventually(body) = f else { return None };
        let n = conj_view(body).len();
        let candidates: Vec<usize> = (0..n)
            .filter(|&i| matches!(conj_view(body)[i], Formula::Rise(_) | Formula::Fall(_)))
            .collect();
        let mut first: Option<Vec<Formula>> = None;
        for i in candidates {
            let dual = matches!(conj_view(body)[i], Formula::Fall(_));
            let work = if dual { dualize(f) } else { f.clone() };
            let Formula::Eventually(wbody) = &work else { unreachable!() };
            let mut items = conj_view(wbody);
            let Formula::Rise(a) = items.remove(i) else { unreachable!("dualized trigger is a rise") };
            let (b, c) = split_conj(items);
            let (b, c) = (Formula::conj(b), Formula::conj(c));
            let goals = [(*a).clone(), b, c];
            match self.prove_all(&goals) {
                Ok(premises) => {
                    let node = ProofTree {
                        rule: RuleName::PropE,
                        conclusion: work,
                        premises,
                        note: Some(bindings("ABC", &goals)),
                    };
                    return Some(Ok(wrap_dual(f, node, dual)));
                }
                Err(bl) => {
                    first.get_or_insert(bl);
                }
            }
        }
        first.map(Err)
    }

    /// `G(up A -> X B | C)`.
    fn prop_a(&mut self, f: &Formula) -> Option<Outcome> {
        let Formula::Always(body) = f else { return None };
        let candidates: Vec<usize> = disj_view(body)
            .iter()
            .enumerate()
            .filter(|(_, x)| negated_edge(x).is_some())
            .map(|(i, _)| i)
            .collect();
        let mut first: Option<Vec<Formula>> = None;
        for i in candidates {
            let dual = matches!(negated_edge(&disj_view(body)[i]), Some(Formula::Fall(_)));
            let work = if dual { dualize(f) } else { f.clone() };
            let Formula::Always(wbody) = &work else { unreachable!() };
            let mut items = disj_view(wbody);
            let Some(Formula::Rise(a)) = negated_edge(&items.remove(i)).cloned() else {
                unreachable!("dualized trigger is a negated rise")
            };
            let (b, c) = split_disj(items);
            let goals = [(*a).clone(), Formula::disj(b), Formula::disj(c)];
            match self.prove_all(&goals) {
                Ok(premises) => {
                    let node = ProofTree {
                        rule: RuleName::PropA,
                        conclusion: work,
                        premises,
                        note: Some(bindings("ABC", &goals)),
                    };
                    return Some(Ok(wrap_dual(f, node, dual)));
                }
                Err(bl) => {
                    first.get_or_insert(bl);
                }
            }
        }
        first.map(Err)
    }

    /// `(!up A | X B | C) U (up D & X E & F)`, or `(!up A | X B | C) U F`
    /// when the right side has no next-state parts.
    fn prop_u(&mut self, f: &Formula) -> Option<Outcome> {
        let Formula::Until(l, r) = f else { return None };
        let lefts: Vec<usize> = disj_view(l)
            .iter()
            .enumerate()
            .filter(|(_, x)| negated_edge(x).is_some())
            .map(|(i, _)| i)
            .collect();
        if lefts.is_empty() {
            return None;
        }
        let mut rights: Vec<Option<usize>> = conj_view(r)
            .iter()
            .enumerate()
            .filter(|(_, x)| matches!(x, Formula::Rise(_) | Formula::Fall(_)))
            .map(|(i, _)| Some(i))
            .collect();
        rights.push(None);

        let mut first: Option<Vec<Formula>> = None;
        for &li in &lefts {
            for &ri in &rights {
                let dual = matches!(negated_edge(&disj_view(l)[li]), Some(Formula::Fall(_)))
                    || ri.is_some_and(|ri| matches!(conj_view(r)[ri], Formula::Fall(_)));
                let work = if dual { dualize(f) } else { f.clone() };
                let Formula::Until(wl, wr) = &work else { unreachable!() };
                let mut litems = disj_view(wl);
                let Some(Formula::Rise(a)) = negated_edge(&litems.remove(li)).cloned() else {
                    unreachable!("dualized trigger is a negated rise")
                };
                let (b, c) = split_disj(litems);
                let mut ritems = conj_view(wr);
                let (goals, names) = match ri {
                    Some(ri) => {
                        let Formula::Rise(d) = ritems.remove(ri) else { unreachable!() };
                        let (e, f) = split_conj(ritems);
                        let goals = vec![
                            (*a).clone(),
                            Formula::disj(b),
                            Formula::disj(c),
                            (*d).clone(),
                            Formula::conj(e),
                            Formula::conj(f),
                        ];
                        (goals, "ABCDEF")
                    }
                    None => {
                        let (e, f) = split_conj(ritems);
                        if !e.is_empty() {
                            continue;
                        }
                        (vec![(*a).clone(), Formula::disj(b), Formula::disj(c), Formula::conj(f)], "ABCF")
                    }
                };
                match self.prove_all(&goals) {
                    Ok(premises) => {
                        let node = ProofTree {
                            rule: RuleName::PropU,
                            conclusion: work,
                            premises,
                            note: Some(bindings(names, &goals)),
                        };
                        return Some(Ok(wrap_dual(f, node, dual)));
                    }
                    Err(bl) => {
                        first.get_or_insert(bl);
                    }
                }
            }
        }
        first.map(Err)
    }

    /// `F(!A & X A & X B)` in shapes that do not read as an edge, such as
    /// `F(!a & X(a & b))`.
    fn thm_main(&mut self, f: &Formula) -> Option<Outcome> {
        let Formula::Eventually(body) = f else { return None };
        let items = conj_view(body);
        let mut first: Option<Vec<Formula>> = None;
        let mut applied = false;
        for i in 0..items.len() {
            if next_body(&items[i]).is_some() {
                continue;
            }
            let a = Formula::negate(items[i].clone());
            let mut rest = Vec::new();
            let mut all_next = true;
            for (j, item) in items.iter().enumerate() {
                if j == i {
                    continue;
                }
                match next_body(item) {
                    Some(x) => rest.extend(conj_view(&x)),
                    None => all_next = false,
                }
            }
            if !all_next {
                continue;
            }
            let Some(pos) = rest.iter().position(|x| *x == a) else { continue };
            rest.remove(pos);
            applied = true;
            let goals = [a, Formula::conj(rest)];
            match self.prove_all(&goals) {
                Ok(premises) => {
                    return Some(Ok(ProofTree {
                        rule: RuleName::ThmMain,
                        conclusion: f.clone(),
                        premises,
                        note: Some(bindings("AB", &goals)),
                    }))
                }
                Err(bl) => {
                    first.get_or_insert(bl);
                }
            }
        }
        if applied {
            first.map(Err)
        } else {
            None
        }
    }
}

fn compositional(f: &Formula) -> Option<(RuleName, Vec<Formula>)> {
    use Formula as F;
    let one = |a: &Formula| vec![a.clone()];
    let two = |a: &Formula, b: &Formula| vec![a.clone(), b.clone()];
    Some(match f {
        F::Not(a) => (RuleName::CusNot, one(a)),
        F::And(a, b) => (RuleName::CusAnd, two(a, b)),
        F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b) => (RuleName::CusBinop, two(a, b)),
        F::Always(a) => (RuleName::CusAlways, one(a)),
        F::Eventually(a) => (RuleName::CusEvent, one(a)),
        F::Until(a, b) => (RuleName::CusUntil, two(a, b)),
        _ => return None,
    })
}

fn wrap_dual(original: &Formula, node: ProofTree, dual: bool) -> ProofTree {
    if !dual {
        return node;
    }
    ProofTree {
        rule: RuleName::EdgeDual,
        conclusion: original.clone(),
        premises: vec![node],
        note: Some("down x = up !x".to_string()),
    }
}

fn bindings(names: &str, goals: &[Formula]) -> String {
    names
        .chars()
        .zip(goals)
        .map(|(n, g)| format!("{n} = {}", render(g)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Rewrites every `down x` as `up !x`.
pub(super) fn dualize(f: &Formula) -> Formula {
    match f {
        Formula::Fall(a) => Formula::rise(Formula::negate(dualize(a))),
        _ => f.map_children(dualize),
    }
}

fn negated_edge(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(e) if matches!(**e, Formula::Rise(_) | Formula::Fall(_)) => Some(e),
        _ => None,
    }
}

/// The operand of `X y`, or `!y` for `!X y`.
fn next_body(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Next(y) => Some((**y).clone()),
        Formula::Not(n) => match &**n {
            Formula::Next(y) => Some(Formula::negate((**y).clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Conjuncts of `f` seen through `&`, `!(x | y)`, `!(x -> y)` and `!!x`.
fn conj_view(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    conj_into(f, &mut out);
    out
}

fn conj_into(f: &Formula, out: &mut Vec<Formula>) {
    use Formula as F;
    match f {
        F::True => {}
        F::And(a, b) => {
            conj_into(a, out);
            conj_into(b, out);
        }
        F::Not(n) => match &**n {
            F::False => {}
            F::Not(x) => conj_into(x, out),
            F::Or(a, b) => {
                conj_into(&Formula::negate((**a).clone()), out);
                conj_into(&Formula::negate((**b).clone()), out);
            }
            F::Implies(a, b) => {
                conj_into(a, out);
                conj_into(&Formula::negate((**b).clone()), out);
            }
            _ => out.push(f.clone()),
        },
        _ => out.push(f.clone()),
    }
}

/// Disjuncts of `f` seen through `|`, `x -> y`, `!(x & y)` and `!!x`.
fn disj_view(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    disj_into(f, &mut out);
    out
}

fn disj_into(f: &Formula, out: &mut Vec<Formula>) {
    use Formula as F;
    match f {
        F::False => {}
        F::Or(a, b) => {
            disj_into(a, out);
            disj_into(b, out);
        }
        F::Implies(a, b) => {
            disj_into(&Formula::negate((**a).clone()), out);
            disj_into(b, out);
        }
        F::Not(n) => match &**n {
            F::True => {}
            F::Not(x) => disj_into(x, out),
            F::And(a, b) => {
                disj_into(&Formula::negate((**a).clone()), out);
                disj_into(&Formula::negate((**b).clone()), out);
            }
            _ => out.push(f.clone()),
        },
        _ => out.push(f.clone()),
    }
}

/// Splits non-trigger conjuncts into next-state bodies (B) and the rest (C).
fn split_conj(items: Vec<Formula>) -> (Vec<Formula>, Vec<Formula>) {
    let (mut b, mut c) = (Vec::new(), Vec::new());
    for item in items {
        match item {
            Formula::Rise(z) => {
                c.push(Formula::negate((*z).clone()));
                b.push(*z);
            }
            Formula::Fall(z) => {
                b.push(Formula::negate((*z).clone()));
                c.push(*z);
            }
            other => match next_body(&other) {
                Some(y) => b.push(y),
                None => c.push(other),
            },
        }
    }
    (b, c)
}

/// Splits non-trigger disjuncts into next-state bodies (B) and the rest (C).
fn split_disj(items: Vec<Formula>) -> (Vec<Formula>, Vec<Formula>) {
    let (mut b, mut c) = (Vec::new(), Vec::new());
    for item in items {
        if let Some(y) = next_body(&item) {
            b.push(y);
            continue;
        }
        match negated_edge(&item) {
            Some(Formula::Rise(z)) => {
                b.push(Formula::negate((**z).clone()));
                c.push((**z).clone());
            }
            Some(Formula::Fall(z)) => {
                b.push((**z).clone());
                c.push(Formula::negate((**z).clone()));
            }
            _ => c.push(item),
        }
    }
    (b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn views_flatten_boolean_structure() {
        assert_eq!(conj_view(&p("a & !(b | c) & !(d -> e) & true")), vec![p("a"), p("!b"), p("!c"), p("d"), p("!e")]);
        assert_eq!(disj_view(&p("(a & b) -> c | !(d & !e) | false")), vec![p("!a"), p("!b"), p("c"), p("!d"), p("e")]);
    }

    #[test]
    fn dualize_turns_falls_into_rises() {
        assert_eq!(dualize(&p("G(down h -> down !b)")), p("G(up !h -> up b)"));
    }

    #[test]
    fn splits_follow_edge_definitions() {
        let (b, c) = split_conj(vec![p("X x"), p("!X y"), p("up z"), p("down w"), p("v")]);
        assert_eq!(b, vec![p("x"), p("!y"), p("z"), p("!w")]);
        assert_eq!(c, vec![p("!z"), p("w"), p("v")]);
        let (b, c) = split_disj(vec![p("X x"), p("!(up z)"), p("!(down w)"), p("v")]);
        assert_eq!(b, vec![p("x"), p("!z"), p("w")]);
        assert_eq!(c, vec![p("z"), p("!w"), p("v")]);
    }
}
