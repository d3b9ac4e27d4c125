//! Independent proof checker.
//!
//! Each node is checked against its rule schema using its own flattening of
//! conjunctions and disjunctions, separate from the one the prover uses to
//! find partitions.

use thiserror::Error;

use super::{ProofTree, RuleName};
use crate::ast::Formula;
use crate::rewrite::normalize;
use crate::syntax::render;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} step concluding `{conclusion}` is invalid: {reason}")]
pub struct ProofCheckError {
    pub rule: RuleName,
    pub conclusion: String,
    pub reason: String,
}

/// Checks every node of `p` against its rule.
pub fn check_proof(p: &ProofTree) -> Result<(), ProofCheckError> {
    check_node(p).map_err(|reason| ProofCheckError {
        rule: p.rule,
        conclusion: render(&p.conclusion),
        reason,
    })?;
    p.premises.iter().try_for_each(check_proof)
}

fn check_node(p: &ProofTree) -> Result<(), String> {
    use Formula as F;
    use RuleName as R;
    let prem: Vec<&Formula> = p.premises.iter().map(|q| &q.conclusion).collect();
    let arity = |n: usize| {
        if prem.len() == n {
            Ok(())
        } else {
            Err(format!("expected {n} premises, found {}", prem.len()))
        }
    };
    let same = |a: &Formula, b: &Formula| {
        if a == b {
            Ok(())
        } else {
            Err(format!("premise `{}` does not match `{}`", render(b), render(a)))
        }
    };
    let c = &p.conclusion;
    match p.rule {
        R::CusVar => {
            arity(0)?;
            matches!(c, F::Atom(_)).then_some(()).ok_or("not an atom".into())
        }
        R::CusConst => {
            arity(0)?;
            matches!(c, F::True | F::False).then_some(()).ok_or("not a constant".into())
        }
        R::CusNot | R::CusAlways | R::CusEvent => {
            arity(1)?;
            match (p.rule, c) {
                (R::CusNot, F::Not(a)) | (R::CusAlways, F::Always(a)) | (R::CusEvent, F::Eventually(a)) => {
                    same(a, prem[0])
                }
                _ => Err("conclusion has the wrong operator".into()),
            }
        }
        R::CusAnd | R::CusBinop | R::CusUntil => {
            arity(2)?;
            match (p.rule, c) {
                (R::CusAnd, F::And(a, b))
                | (R::CusBinop, F::Or(a, b) | F::Implies(a, b) | F::Iff(a, b))
                | (R::CusUntil, F::Until(a, b)) => {
                    same(a, prem[0])?;
                    same(b, prem[1])
                }
                _ => Err("conclusion has the wrong operator".into()),
            }
        }
        R::LogicRewrite => {
            arity(1)?;
            if normalize(c) == normalize(prem[0]) {
                Ok(())
            } else {
                Err("premise is not a rewrite of the conclusion".into())
            }
        }
        R::EdgeDual => {
            arity(1)?;
            if up_form(c) == up_form(prem[0]) {
                Ok(())
            } else {
                Err("premise differs from the conclusion beyond edge dualities".into())
            }
        }
        R::PropE => {
            arity(3)?;
            let F::Eventually(body) = c else { return Err("conclusion is not F(..)".into()) };
            let parts = [rise(prem[0]), next(prem[1]), prem[2].clone()];
            same_multiset(cc(body), parts.iter().flat_map(cc).collect())
        }
        R::ThmMain => {
            arity(2)?;
            let F::Eventually(body) = c else { return Err("conclusion is not F(..)".into()) };
            let parts = [Formula::not(prem[0].clone()), next(prem[0]), next(prem[1])];
            same_multiset(cc(body), parts.iter().flat_map(cc).collect())
        }
        R::PropA => {
            arity(3)?;
            let F::Always(body) = c else { return Err("conclusion is not G(..)".into()) };
            let parts = [Formula::not(rise(prem[0])), next(prem[1]), prem[2].clone()];
            same_multiset(dc(body), parts.iter().flat_map(dc).collect())
        }
        R::PropU => {
            let F::Until(l, r) = c else { return Err("conclusion is not an until".into()) };
            let left = [Formula::not(rise(prem.first().copied().unwrap_or(&F::True))), next(prem.get(1).copied().unwrap_or(&F::False))];
            match prem.len() {
                6 => {
                    let lparts = [left[0].clone(), left[1].clone(), prem[2].clone()];
                    same_multiset(dc(l), lparts.iter().flat_map(dc).collect())?;
                    let rparts = [rise(prem[3]), next(prem[4]), prem[5].clone()];
                    same_multiset(cc(r), rparts.iter().flat_map(cc).collect())
                }
                4 => {
                    let lparts = [left[0].clone(), left[1].clone(), prem[2].clone()];
                    same_multiset(dc(l), lparts.iter().flat_map(dc).collect())?;
                    same_multiset(cc(r), cc(prem[3]))
                }
                n => Err(format!("expected 4 or 6 premises, found {n}")),
            }
        }
    }
}

fn rise(a: &Formula) -> Formula {
    Formula::rise(a.clone())
}

fn next(a: &Formula) -> Formula {
    Formula::next(a.clone())
}

fn same_multiset(mut a: Vec<Formula>, mut b: Vec<Formula>) -> Result<(), String> {
    a.sort();
    b.sort();
    if a == b {
        Ok(())
    } else {
        let show = |v: &[Formula]| v.iter().map(render).collect::<Vec<_>>().join(", ");
        Err(format!("parts [{}] do not recombine into [{}]", show(&b), show(&a)))
    }
}

fn under_next(v: Vec<Formula>) -> Vec<Formula> {
    v.into_iter().map(Formula::next).collect()
}

/// Canonical conjunct multiset.
fn cc(f: &Formula) -> Vec<Formula> {
    use Formula as F;
    let not = |x: &Formula| Formula::not(x.clone());
    match f {
        F::True => vec![],
        F::And(a, b) => [cc(a), cc(b)].concat(),
        F::Next(a) => under_next(cc(a)),
        F::Rise(x) => [cc(&not(x)), under_next(cc(x))].concat(),
        F::Fall(x) => [cc(x), under_next(cc(&not(x)))].concat(),
        F::Not(h) => match &**h {
            F::Not(g) => cc(g),
            F::False => vec![],
            F::Or(a, b) => [cc(&not(a)), cc(&not(b))].concat(),
            F::Implies(a, b) => [cc(a), cc(&not(b))].concat(),
            F::Next(a) => under_next(cc(&not(a))),
            _ => vec![f.clone()],
        },
        _ => vec![f.clone()],
    }
}

/// Canonical disjunct multiset.
fn dc(f: &Formula) -> Vec<Formula> {
    use Formula as F;
    let not = |x: &Formula| Formula::not(x.clone());
    match f {
        F::False => vec![],
        F::Or(a, b) => [dc(a), dc(b)].concat(),
        F::Implies(a, b) => [dc(&not(a)), dc(b)].concat(),
        F::Next(a) => under_next(dc(a)),
        F::Not(h) => match &**h {
            F::Not(g) => dc(g),
            F::True => vec![],
            F::And(a, b) => [dc(&not(a)), dc(&not(b))].concat(),
            F::Next(a) => under_next(dc(&not(a))),
            F::Rise(x) => [dc(x), under_next(dc(&not(x)))].concat(),
            F::Fall(x) => [dc(&not(x)), under_next(dc(x))].concat(),
            _ => vec![f.clone()],
        },
        _ => vec![f.clone()],
    }
}

/// `f` with every `down x` written as `up !x` and double negations removed.
fn up_form(f: &Formula) -> Formula {
    match f {
        Formula::Fall(a) => Formula::rise(Formula::negate(up_form(a))),
        Formula::Not(a) => Formula::negate(up_form(a)),
        _ => f.map_children(up_form),
    }
}
