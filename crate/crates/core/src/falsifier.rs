//! Bounded search for stuttering counterexamples.
//!
//! The search visits lassos over the formula's atoms in a fixed order:
//! unroll count `k`, then stem length, stem contents, loop length, loop
//! contents, and finally the stutter position inside the unrolled stem.
//! States are ordered by their binary encoding with the first atom as the
//! most significant bit, counting down from the all-true state.
//!
//! Traces of one shape are labelled 64 at a time in `u64` bit lanes. For a
//! stutter at word position `i`, only the rows at positions `0..=i` change,
//! so they are recomputed backwards from the unchanged row of position `i`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::ast::{atoms_of, AtomSet, Formula};
use crate::semantics::label::Compiled;
use crate::semantics::{eval, EvalError, LassoTrace, State, TraceError};
use crate::syntax::{parse, render, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_stem: usize,
    pub max_loop: usize,
    pub max_unroll: usize,
    pub atom_cap: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_stem: 4, max_loop: 3, max_unroll: 2, atom_cap: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FalsifyError {
    #[error("formula has {found} atoms but the search is capped at {cap}")]
    AtomCap { found: usize, cap: usize },
    #[error("invalid bounds: {0}")]
    InvalidBounds(&'static str),
}

/// A trace on which stuttering one stem state changes the formula's value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub formula: Formula,
    /// Already unrolled, so `stutter_index` is a stem position.
    pub trace: LassoTrace,
    pub stutter_index: usize,
    pub value_before: bool,
    pub value_after: bool,
}

impl Counterexample {
    pub fn stuttered(&self) -> LassoTrace {
        self.trace.stutter_at(self.stutter_index).expect("stutter index lies in the stem")
    }

    /// Re-evaluates both traces and checks that the stored values hold and differ.
    pub fn validate(&self) -> Result<bool, EvalError> {
        if self.stutter_index >= self.trace.stem_len() {
            return Ok(false);
        }
        let before = eval(&self.formula, &self.trace)?;
        let after = eval(&self.formula, &self.stuttered())?;
        Ok(before == self.value_before && after == self.value_after && before != after)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "formula": render(&self.formula),
            "trace": self.trace.to_json(),
            "stutter_index": self.stutter_index,
            "value_before": self.value_before,
            "value_after": self.value_after,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, CounterexampleDocError> {
        let field = |name: &'static str| v.get(name).ok_or(CounterexampleDocError::Missing(name));
        let formula = field("formula")?.as_str().ok_or(CounterexampleDocError::Missing("formula"))?;
        let formula = parse(formula)?;
        let trace = LassoTrace::from_json(field("trace")?)?;
        let stutter_index = field("stutter_index")?
            .as_u64()
            .ok_or(CounterexampleDocError::Missing("stutter_index"))? as usize;
        let value_before = field("value_before")?.as_bool().ok_or(CounterexampleDocError::Missing("value_before"))?;
        let value_after = field("value_after")?.as_bool().ok_or(CounterexampleDocError::Missing("value_after"))?;
        Ok(Counterexample { formula, trace, stutter_index, value_before, value_after })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterexampleDocError {
    #[error("counterexample document lacks a valid `{0}` field")]
    Missing(&'static str),
    #[error(transparent)]
    Formula(#[from] ParseError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

/// The first stuttering counterexample in search order, if any.
pub fn falsify(f: &Formula, b: &SearchBounds) -> Result<Option<Counterexample>, FalsifyError> {
    if b.max_loop == 0 {
        return Err(FalsifyError::InvalidBounds("max_loop must be at least 1"));
    }
    let atoms = search_atoms(f, b.atom_cap)?;
    let engine = Engine::new(f, &atoms);
    let mut best: Option<Hit> = None;
    for s in 0..=b.max_stem {
        let level = (1..=b.max_loop)
            .into_par_iter()
            .filter_map(|l| engine.first_in_shape(s, l, b.max_unroll))
            .min_by(Hit::order);
        best = [best, level].into_iter().flatten().min_by(Hit::order);
        if best.is_some_and(|h| h.unroll == 0) {
            break;
        }
    }
    Ok(best.map(|h| engine.counterexample(f, &atoms, &h)))
}

/// The counterexample with the smallest (stem length, loop length, stutter
/// index), then smallest stem and loop, among lassos no larger than `c`'s
/// and without unrolling.
pub fn minimize(c: &Counterexample, f: &Formula) -> Counterexample {
    let atoms = c.trace.atoms().clone();
    let Ok(engine) = Engine::try_new(f, &atoms) else {
        return c.clone();
    };
    for s in 1..=c.trace.stem_len() {
        for l in 1..=c.trace.loop_len() {
            if let Some(h) = engine.smallest_stutter_in_shape(s, l) {
                return engine.counterexample(f, &atoms, &h);
            }
        }
    }
    c.clone()
}

fn search_atoms(f: &Formula, cap: usize) -> Result<AtomSet, FalsifyError> {
    let atoms = atoms_of(f);
    if atoms.len() > cap {
        return Err(FalsifyError::AtomCap { found: atoms.len(), cap });
    }
    if atoms.is_empty() {
        return Ok(AtomSet::new(["a"]).expect("valid atom"));
    }
    Ok(atoms)
}

// Field order is the search order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Hit {
    unroll: usize,
    stem_len: usize,
    stem_num: u64,
    loop_len: usize,
    loop_num: u64,
    stutter: usize,
}

impl Hit {
    fn order(a: &Hit, b: &Hit) -> Ordering {
        a.cmp(b)
    }
}

/// Node rows for 64 traces of one shape.
struct Batch {
    states: Vec<Vec<u64>>,
    rows: Vec<Vec<u64>>,
    valid: u64,
}

struct Engine {
    compiled: Compiled,
    width: usize,
}

impl Engine {
    fn new(f: &Formula, atoms: &AtomSet) -> Engine {
        Engine::try_new(f, atoms).expect("search atoms cover the formula")
    }

    fn try_new(f: &Formula, atoms: &AtomSet) -> Result<Engine, EvalError> {
        Ok(Engine { compiled: Compiled::new(f, atoms)?, width: atoms.len() })
    }

    fn per_state(&self) -> u64 {
        1 << self.width
    }

    fn count(&self, positions: usize) -> u64 {
        self.per_state().pow(positions as u32)
    }

    /// The state value (first atom in the top bit) at `pos` of trace `index`.
    fn state_bits(&self, index: u64, positions: usize, pos: usize) -> u64 {
        let digit = (index / self.count(positions - 1 - pos)) % self.per_state();
        self.per_state() - 1 - digit
    }

    fn batch(&self, s: usize, l: usize, base: u64) -> Batch {
        let positions = s + l;
        let total = self.count(positions);
        let n = self.width;
        let mut states = vec![vec![0u64; n]; positions];
        let mut valid = 0u64;
        for lane in 0..64u64 {
            let index = base + lane;
            if index >= total {
                break;
            }
            valid |= 1 << lane;
            for (pos, row) in states.iter_mut().enumerate() {
                let bits = self.state_bits(index, positions, pos);
                for (k, cell) in row.iter_mut().enumerate() {
                    *cell |= ((bits >> (n - 1 - k)) & 1) << lane;
                }
            }
        }
        let rows = self.compiled.label(&states, s);
        Batch { states, rows, valid }
    }

    /// Lanes whose value at position 0 changes when word position `i` is stuttered.
    fn stutter_diff(&self, b: &Batch, s: usize, l: usize, i: usize) -> u64 {
        let norm = |q: usize| if q < s { q } else { s + (q - s) % l };
        let mut next = b.rows[norm(i)].clone();
        let mut cur = vec![0u64; self.compiled.len()];
        for q in (0..=i).rev() {
            let pq = norm(q);
            self.compiled.step_row(&b.states[pq], &next, &mut cur);
            if cur == b.rows[pq] {
                return 0;
            }
            std::mem::swap(&mut next, &mut cur);
        }
        let root = self.compiled.root();
        (next[root] ^ b.rows[0][root]) & b.valid
    }

    fn hit(&self, s: usize, l: usize, index: u64, stutter: usize) -> Hit {
        let loops = self.count(l);
        let unroll = if stutter < s { 0 } else { (stutter - s) / l + 1 };
        Hit { unroll, stem_len: s, stem_num: index / loops, loop_len: l, loop_num: index % loops, stutter }
    }

    /// The first hit in search order among traces of one shape, trying word
    /// positions reachable with at most `max_unroll` unrollings.
    fn first_in_shape(&self, s: usize, l: usize, max_unroll: usize) -> Option<Hit> {
        let unroll_of = |i: usize| if i < s { 0 } else { (i - s) / l + 1 };
        let mut limit = s + max_unroll * l;
        let mut best: Option<Hit> = None;
        let total = self.count(s + l);
        let mut base = 0;
        while base < total && limit > 0 {
            let b = self.batch(s, l, base);
            let mut found = 0u64;
            let mut batch_best: Option<Hit> = None;
            for i in 0..limit {
                if batch_best.is_some_and(|h| h.unroll < unroll_of(i)) {
                    break;
                }
                let d = self.stutter_diff(&b, s, l, i) & !found;
                if d != 0 {
                    let lane = d.trailing_zeros() as u64;
                    let h = self.hit(s, l, base + lane, i);
                    batch_best = [batch_best, Some(h)].into_iter().flatten().min();
                    found |= d;
                }
                if found == b.valid {
                    break;
                }
            }
            best = [best, batch_best].into_iter().flatten().min();
            if let Some(h) = best {
                if h.unroll == 0 {
                    break;
                }
                limit = s + (h.unroll - 1) * l;
            }
            base += 64;
        }
        best
    }

    /// The smallest stutter position with any hit, and its first trace,
    /// without unrolling.
    fn smallest_stutter_in_shape(&self, s: usize, l: usize) -> Option<Hit> {
        let total = self.count(s + l);
        let batches: Vec<Batch> = (0..total).step_by(64).map(|base| self.batch(s, l, base)).collect();
        for i in 0..s {
            for (k, b) in batches.iter().enumerate() {
                let d = self.stutter_diff(b, s, l, i);
                if d != 0 {
                    return Some(self.hit(s, l, k as u64 * 64 + d.trailing_zeros() as u64, i));
                }
            }
        }
        None
    }

    fn base_trace(&self, atoms: &AtomSet, h: &Hit) -> LassoTrace {
        let positions = h.stem_len + h.loop_len;
        let index = h.stem_num * self.count(h.loop_len) + h.loop_num;
        let states: Vec<State> = (0..positions)
            .map(|pos| State::from_bits(self.state_bits(index, positions, pos) as u32, self.width))
            .collect();
        let (stem, cycle) = states.split_at(h.stem_len);
        LassoTrace::new(atoms.clone(), stem.to_vec(), cycle.to_vec()).expect("shape is well formed")
    }

    fn counterexample(&self, f: &Formula, atoms: &AtomSet, h: &Hit) -> Counterexample {
        let trace = self.base_trace(atoms, h).unroll(h.unroll);
        let stuttered = trace.stutter_at(h.stutter).expect("hit lies in the unrolled stem");
        let value_before = eval(f, &trace).expect("search atoms cover the formula");
        let value_after = eval(f, &stuttered).expect("search atoms cover the formula");
        Counterexample { formula: f.clone(), trace, stutter_index: h.stutter, value_before, value_after }
    }
}
