use super::{EvalError, LassoTrace};
use crate::ast::{AtomSet, Formula};

/// The truth of `f` at position 0 of `t`.
pub fn eval(f: &Formula, t: &LassoTrace) -> Result<bool, EvalError> {
    eval_at(f, t, 0)
}

/// The truth of `f` at position `p` of `t`.
pub fn eval_at(f: &Formula, t: &LassoTrace, p: usize) -> Result<bool, EvalError> {
    Ok(Resolved::new(f, t.atoms())?.eval_at(t, p))
}

/// A formula with atom names replaced by state indices, so that repeated
/// evaluation against traces over the same atom set skips name lookups.
#[derive(Debug, Clone)]
pub struct Resolved(Node);

#[derive(Debug, Clone)]
enum Node {
    Atom(usize),
    Const(bool),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Next(Box<Node>),
    Always(Box<Node>),
    Eventually(Box<Node>),
    Until(Box<Node>, Box<Node>),
    Rise(Box<Node>),
    Fall(Box<Node>),
    AnyEdge(Box<Node>),
}

impl Resolved {
    pub fn new(f: &Formula, atoms: &AtomSet) -> Result<Self, EvalError> {
        Ok(Resolved(resolve(f, atoms)?))
    }

    /// `t` must use the atom set given to [`Resolved::new`].
    pub fn eval_at(&self, t: &LassoTrace, p: usize) -> bool {
        let cx = Cx { t, s: t.stem_len(), l: t.loop_len() };
        cx.eval(&self.0, p)
    }
}

fn resolve(f: &Formula, atoms: &AtomSet) -> Result<Node, EvalError> {
    use Formula as F;
    let r = |g: &Formula| resolve(g, atoms).map(Box::new);
    Ok(match f {
        F::Atom(name) => Node::Atom(atoms.index_of(name).ok_or_else(|| EvalError::UnknownAtom(name.clone()))?),
        F::True => Node::Const(true),
        F::False => Node::Const(false),
        F::Not(a) => Node::Not(r(a)?),
        F::And(a, b) => Node::And(r(a)?, r(b)?),
        F::Or(a, b) => Node::Or(r(a)?, r(b)?),
        F::Implies(a, b) => Node::Implies(r(a)?, r(b)?),
        F::Iff(a, b) => Node::Iff(r(a)?, r(b)?),
        F::Next(a) => Node::Next(r(a)?),
        F::Always(a) => Node::Always(r(a)?),
        F::Eventually(a) => Node::Eventually(r(a)?),
        F::Until(a, b) => Node::Until(r(a)?, r(b)?),
        F::Rise(a) => Node::Rise(r(a)?),
        F::Fall(a) => Node::Fall(r(a)?),
        F::AnyEdge(a) => Node::AnyEdge(r(a)?),
    })
}

struct Cx<'a> {
    t: &'a LassoTrace,
    s: usize,
    l: usize,
}

impl Cx<'_> {
    fn norm(&self, p: usize) -> usize {
        if p < self.s {
            p
        } else {
            self.s + (p - self.s) % self.l
        }
    }

    /// Positions that decide a quantifier starting at normalized `p`.
    fn window(&self, p: usize) -> std::ops::Range<usize> {
        p..self.s + 2 * self.l
    }

    fn eval(&self, n: &Node, p: usize) -> bool {
        let p = self.norm(p);
        match n {
            Node::Atom(k) => self.t.state(p).get(*k),
            Node::Const(b) => *b,
            Node::Not(a) => !self.eval(a, p),
            Node::And(a, b) => self.eval(a, p) && self.eval(b, p),
            Node::Or(a, b) => self.eval(a, p) || self.eval(b, p),
            Node::Implies(a, b) => !self.eval(a, p) || self.eval(b, p),
            Node::Iff(a, b) => self.eval(a, p) == self.eval(b, p),
            Node::Next(a) => self.eval(a, p + 1),
            Node::Always(a) => self.window(p).all(|i| self.eval(a, i)),
            Node::Eventually(a) => self.window(p).any(|i| self.eval(a, i)),
            Node::Until(a, b) => {
                for i in self.window(p) {
                    if self.eval(b, i) {
                        return true;
                    }
                    if !self.eval(a, i) {
                        return false;
                    }
                }
                false
            }
            Node::Rise(a) => !self.eval(a, p) && self.eval(a, p + 1),
            Node::Fall(a) => self.eval(a, p) && !self.eval(a, p + 1),
            Node::AnyEdge(a) => self.eval(a, p) != self.eval(a, p + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    const T: bool = true;
    const F: bool = false;

    fn ev(src: &str, t: &LassoTrace) -> bool {
        eval(&parse(src).unwrap(), t).unwrap()
    }

    #[test]
    fn next_on_the_two_state_word() {
        let s = LassoTrace::from_rows(["a"], &[&[T]], &[&[F]]).unwrap();
        assert!(!ev("X a", &s));
        let stuttered = LassoTrace::from_rows(["a"], &[&[T], &[T]], &[&[F]]).unwrap();
        assert!(ev("X a", &stuttered));
    }

    #[test]
    fn until_and_always() {
        let t = LassoTrace::from_rows(["a", "b"], &[&[T, F]], &[&[F, T]]).unwrap();
        assert!(ev("a U b", &t));
        assert!(!ev("b U a", &LassoTrace::from_rows(["a", "b"], &[], &[&[F, F]]).unwrap()));
        let g = LassoTrace::from_rows(["a"], &[], &[&[T]]).unwrap();
        assert!(ev("G a", &g));
        assert!(!ev("F !a", &g));
    }

    #[test]
    fn until_witness_wraps_around_the_loop() {
        // loop positions 1..4: b only at position 1, a everywhere except 1
        let t = LassoTrace::from_rows(["a", "b"], &[&[T, F]], &[&[F, T], &[T, F], &[T, F]]).unwrap();
        assert!(eval_at(&parse("a U b").unwrap(), &t, 2).unwrap());
        assert!(eval_at(&parse("a U b").unwrap(), &t, 3).unwrap());
        assert!(!eval_at(&parse("a U (b & !a & X b)").unwrap(), &t, 3).unwrap());
    }

    #[test]
    fn edges() {
        let rise = LassoTrace::from_rows(["a"], &[&[F]], &[&[T]]).unwrap();
        assert!(ev("up a", &rise));
        assert!(!ev("down a", &rise));
        assert!(ev("edge a", &rise));
        assert!(!ev("F down a", &rise));
        let blink = LassoTrace::from_rows(["a"], &[], &[&[F], &[T]]).unwrap();
        assert!(ev("F up a", &blink));
        assert!(ev("G F down a", &blink));
    }

    #[test]
    fn periodic_suffixes_agree() {
        let t = LassoTrace::from_rows(["a"], &[&[T]], &[&[F], &[T], &[T]]).unwrap();
        let f = parse("a U X !a").unwrap();
        for p in 1..4 {
            assert_eq!(eval_at(&f, &t, p).unwrap(), eval_at(&f, &t, p + 3).unwrap());
        }
    }

    #[test]
    fn unknown_atom_is_an_error() {
        let t = LassoTrace::from_rows(["a"], &[], &[&[T]]).unwrap();
        assert_eq!(eval(&parse("a & b").unwrap(), &t), Err(EvalError::UnknownAtom("b".into())));
    }
}
