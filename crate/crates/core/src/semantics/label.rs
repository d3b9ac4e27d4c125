//! Position-labelling evaluator.
//!
//! Every subformula gets a truth value at every position `0..stemlen +
//! looplen`, children before parents. Fixpoint operators are resolved on the
//! loop with two backward passes, then swept back through the stem. The
//! engine is generic over a [`Lane`] so the falsifier can label 64 traces
//! at once with `u64` bit lanes.

use std::collections::HashMap;
use std::ops::{BitAnd, BitOr, BitXor, Not};

use super::{EvalError, LassoTrace};
use crate::ast::{AtomSet, Formula};

/// `f` at position 0 of `t`, computed by labelling rather than recursion.
pub fn eval_oracle(f: &Formula, t: &LassoTrace) -> Result<bool, EvalError> {
    Ok(LabelOracle::new(f, t.atoms())?.eval(t))
}

/// [`eval_oracle`] with the formula compiled once, for evaluating many
/// traces over the same atom set.
#[derive(Debug, Clone)]
pub struct LabelOracle(Compiled);

impl LabelOracle {
    pub fn new(f: &Formula, atoms: &AtomSet) -> Result<Self, EvalError> {
        Ok(LabelOracle(Compiled::new(f, atoms)?))
    }

    /// `t` must use the atom set given to [`LabelOracle::new`].
    pub fn eval(&self, t: &LassoTrace) -> bool {
        let states: Vec<Vec<bool>> = (0..t.stem_len() + t.loop_len()).map(|p| t.state(p).0.clone()).collect();
        self.0.label(&states, t.stem_len())[0][self.0.root()]
    }
}

pub(crate) trait Lane:
    Copy + Eq + BitAnd<Output = Self> + BitOr<Output = Self> + BitXor<Output = Self> + Not<Output = Self>
{
    const ZERO: Self;
    const ONES: Self;
}

impl Lane for bool {
    const ZERO: bool = false;
    const ONES: bool = true;
}

impl Lane for u64 {
    const ZERO: u64 = 0;
    const ONES: u64 = u64::MAX;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Op {
    Atom(usize),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Next(usize),
    Always(usize),
    Eventually(usize),
    Until(usize, usize),
    Rise(usize),
    Fall(usize),
    AnyEdge(usize),
}

/// A formula flattened into a shared post-order node list.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    ops: Vec<Op>,
}

impl Compiled {
    pub(crate) fn new(f: &Formula, atoms: &AtomSet) -> Result<Self, EvalError> {
        let mut b = Builder { ops: Vec::new(), seen: HashMap::new(), atoms };
        b.add(f)?;
        Ok(Compiled { ops: b.ops })
    }

    pub(crate) fn root(&self) -> usize {
        self.ops.len() - 1
    }

    pub(crate) fn len(&self) -> usize {
        self.ops.len()
    }

    /// Labels positions `0..states.len()`, where positions from `stem_len`
    /// on form the loop. Returns one row of node values per position.
    pub(crate) fn label<L: Lane>(&self, states: &[Vec<L>], stem_len: usize) -> Vec<Vec<L>> {
        let n = states.len();
        let s = stem_len;
        let succ = |p: usize| if p + 1 < n { p + 1 } else { s };
        let mut rows = vec![vec![L::ZERO; self.ops.len()]; n];
        for (k, op) in self.ops.iter().enumerate() {
            match *op {
                Op::Next(c) => {
                    for p in 0..n {
                        rows[p][k] = rows[succ(p)][c];
                    }
                }
                Op::Rise(c) | Op::Fall(c) | Op::AnyEdge(c) => {
                    for p in 0..n {
                        let (now, then) = (rows[p][c], rows[succ(p)][c]);
                        rows[p][k] = match op {
                            Op::Rise(_) => !now & then,
                            Op::Fall(_) => now & !then,
                            _ => now ^ then,
                        };
                    }
                }
                Op::Always(_) | Op::Eventually(_) | Op::Until(..) => {
                    let seed = if matches!(op, Op::Always(_)) { L::ONES } else { L::ZERO };
                    let mut next = seed;
                    for _pass in 0..2 {
                        for p in (s..n).rev() {
                            next = fix_step(*op, &rows[p], next);
                            rows[p][k] = next;
                        }
                        next = rows[s][k];
                    }
                    for p in (0..s).rev() {
                        next = fix_step(*op, &rows[p], next);
                        rows[p][k] = next;
                    }
                }
                _ => {
                    for p in 0..n {
                        let v = point(*op, &rows[p], &states[p]);
                        rows[p][k] = v;
                    }
                }
            }
        }
        rows
    }

    /// Recomputes one position's row from its state and the row of the
    /// following position.
    pub(crate) fn step_row<L: Lane>(&self, state: &[L], next: &[L], out: &mut [L]) {
        for (k, op) in self.ops.iter().enumerate() {
            out[k] = match *op {
                Op::Next(c) => next[c],
                Op::Rise(c) => !out[c] & next[c],
                Op::Fall(c) => out[c] & !next[c],
                Op::AnyEdge(c) => out[c] ^ next[c],
                Op::Always(_) | Op::Eventually(_) | Op::Until(..) => fix_step(*op, out, next[k]),
                _ => point(*op, out, state),
            };
        }
    }
}

fn point<L: Lane>(op: Op, row: &[L], state: &[L]) -> L {
    match op {
        Op::Atom(i) => state[i],
        Op::Const(true) => L::ONES,
        Op::Const(false) => L::ZERO,
        Op::Not(a) => !row[a],
        Op::And(a, b) => row[a] & row[b],
        Op::Or(a, b) => row[a] | row[b],
        Op::Implies(a, b) => !row[a] | row[b],
        Op::Iff(a, b) => !(row[a] ^ row[b]),
        _ => unreachable!("temporal operator in pointwise step"),
    }
}

/// One unfolding of a fixpoint operator given its value at the next position.
fn fix_step<L: Lane>(op: Op, row: &[L], next: L) -> L {
    match op {
        Op::Always(c) => row[c] & next,
        Op::Eventually(c) => row[c] | next,
        Op::Until(a, b) => row[b] | (row[a] & next),
        _ => unreachable!("not a fixpoint operator"),
    }
}

struct Builder<'a> {
    ops: Vec<Op>,
    seen: HashMap<Op, usize>,
    atoms: &'a AtomSet,
}

impl Builder<'_> {
    fn add(&mut self, f: &Formula) -> Result<usize, EvalError> {
        use Formula as F;
        let op = match f {
            F::Atom(name) => Op::Atom(self.atoms.index_of(name).ok_or_else(|| EvalError::UnknownAtom(name.clone()))?),
            F::True => Op::Const(true),
            F::False => Op::Const(false),
            F::Not(a) => Op::Not(self.add(a)?),
            F::And(a, b) => Op::And(self.add(a)?, self.add(b)?),
            F::Or(a, b) => Op::Or(self.add(a)?, self.add(b)?),
            F::Implies(a, b) => Op::Implies(self.add(a)?, self.add(b)?),
            F::Iff(a, b) => Op::Iff(self.add(a)?, self.add(b)?),
            F::Next(a) => Op::Next(self.add(a)?),
            F::Always(a) => Op::Always(self.add(a)?),
            F::Eventually(a) => Op::Eventually(self.add(a)?),
            F::Until(a, b) => Op::Until(self.add(a)?, self.add(b)?),
            F::Rise(a) => Op::Rise(self.add(a)?),
            F::Fall(a) => Op::Fall(self.add(a)?),
            F::AnyEdge(a) => Op::AnyEdge(self.add(a)?),
        };
        if let Some(&k) = self.seen.get(&op) {
            return Ok(k);
        }
        self.ops.push(op);
        self.seen.insert(op, self.ops.len() - 1);
        Ok(self.ops.len() - 1)
    }
}
