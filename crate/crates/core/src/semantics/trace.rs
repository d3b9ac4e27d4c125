use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ast::{AtomError, AtomSet};

/// A total assignment of booleans to the atoms of a trace, in atom order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State(pub Vec<bool>);

impl State {
    pub fn get(&self, idx: usize) -> bool {
        self.0[idx]
    }

    /// The state whose atom `k` is bit `width - 1 - k` of `bits`.
    pub fn from_bits(bits: u32, width: usize) -> State {
        State((0..width).map(|k| (bits >> (width - 1 - k)) & 1 == 1).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("the loop of a lasso trace must contain at least one state")]
    EmptyLoop,
    #[error("state {index} has {found} values but the trace has {expected} atoms")]
    StateWidth { index: usize, found: usize, expected: usize },
    #[error("stutter position {index} is outside the stem (length {stem_len})")]
    StutterOutOfRange { index: usize, stem_len: usize },
    #[error(transparent)]
    Atom(#[from] AtomError),
    #[error("malformed trace document: {0}")]
    Document(String),
}

/// The infinite word `stem . loop . loop . ...` over a fixed atom set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoTrace {
    atoms: AtomSet,
    stem: Vec<State>,
    cycle: Vec<State>,
}

impl LassoTrace {
    pub fn new(atoms: AtomSet, stem: Vec<State>, cycle: Vec<State>) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        for (index, s) in stem.iter().chain(&cycle).enumerate() {
            if s.0.len() != atoms.len() {
                return Err(TraceError::StateWidth { index, found: s.0.len(), expected: atoms.len() });
            }
        }
        Ok(LassoTrace { atoms, stem, cycle })
    }

    /// Builds a trace from per-state boolean rows.
    pub fn from_rows<S: Into<String>>(
        atoms: impl IntoIterator<Item = S>,
        stem: &[&[bool]],
        cycle: &[&[bool]],
    ) -> Result<Self, TraceError> {
        let atoms = AtomSet::new(atoms)?;
        let conv = |rows: &[&[bool]]| rows.iter().map(|r| State(r.to_vec())).collect();
        LassoTrace::new(atoms, conv(stem), conv(cycle))
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    pub fn stem(&self) -> &[State] {
        &self.stem
    }

    pub fn cycle(&self) -> &[State] {
        &self.cycle
    }

    pub fn stem_len(&self) -> usize {
        self.stem.len()
    }

    pub fn loop_len(&self) -> usize {
        self.cycle.len()
    }

    /// Maps any position to the equivalent one in `0..stem_len + loop_len`.
    pub fn normalize(&self, p: usize) -> usize {
        let s = self.stem.len();
        if p < s {
            p
        } else {
            s + (p - s) % self.cycle.len()
        }
    }

    /// The state at word position `p`.
    pub fn state(&self, p: usize) -> &State {
        let q = self.normalize(p);
        if q < self.stem.len() {
            &self.stem[q]
        } else {
            &self.cycle[q - self.stem.len()]
        }
    }

    /// Moves `k` copies of the loop into the stem; the denoted word is unchanged.
    pub fn unroll(&self, k: usize) -> LassoTrace {
        let mut stem = self.stem.clone();
        for _ in 0..k {
            stem.extend(self.cycle.iter().cloned());
        }
        LassoTrace { atoms: self.atoms.clone(), stem, cycle: self.cycle.clone() }
    }

    /// Repeats the stem state at `i`, giving `s_0..s_i, s_i, s_(i+1)..`.
    pub fn stutter_at(&self, i: usize) -> Result<LassoTrace, TraceError> {
        if i >= self.stem.len() {
            return Err(TraceError::StutterOutOfRange { index: i, stem_len: self.stem.len() });
        }
        let mut stem = self.stem.clone();
        stem.insert(i, self.stem[i].clone());
        Ok(LassoTrace { atoms: self.atoms.clone(), stem, cycle: self.cycle.clone() })
    }

    /// Every trace with the given shape, stems then loops in lexicographic
    /// order, each state ranging over all assignments with the all-true
    /// state first.
    pub fn enumerate(atoms: &AtomSet, stem_len: usize, loop_len: usize) -> impl Iterator<Item = LassoTrace> + '_ {
        let n = atoms.len();
        let per_state = 1u64 << n;
        let positions = (stem_len + loop_len) as u32;
        let total = per_state.pow(positions);
        (0..total).map(move |index| {
            let states: Vec<State> = (0..positions)
                .map(|pos| {
                    let digit = (index / per_state.pow(positions - 1 - pos)) % per_state;
                    State::from_bits((per_state - 1 - digit) as u32, n)
                })
                .collect();
            let (stem, cycle) = states.split_at(stem_len);
            LassoTrace { atoms: atoms.clone(), stem: stem.to_vec(), cycle: cycle.to_vec() }
        })
    }

    /// All traces with stem length up to `max_stem` and loop length from 1 to `max_loop`.
    pub fn enumerate_up_to(atoms: &AtomSet, max_stem: usize, max_loop: usize) -> Vec<LassoTrace> {
        let mut out = Vec::new();
        for s in 0..=max_stem {
            for l in 1..=max_loop {
                out.extend(LassoTrace::enumerate(atoms, s, l));
            }
        }
        out
    }

    pub fn to_doc(&self) -> TraceDoc {
        let rows = |v: &[State]| v.iter().map(|s| s.0.clone()).collect();
        TraceDoc {
            atoms: self.atoms.iter().map(str::to_string).collect(),
            stem: rows(&self.stem),
            cycle: rows(&self.cycle),
        }
    }

    pub fn from_doc(doc: TraceDoc) -> Result<Self, TraceError> {
        let atoms = AtomSet::new(doc.atoms)?;
        let conv = |v: Vec<Vec<bool>>| v.into_iter().map(State).collect();
        LassoTrace::new(atoms, conv(doc.stem), conv(doc.cycle))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("trace documents always serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self, TraceError> {
        let doc: TraceDoc = serde_json::from_str(text).map_err(|e| TraceError::Document(e.to_string()))?;
        LassoTrace::from_doc(doc)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, TraceError> {
        let doc = TraceDoc::deserialize(value).map_err(|e| TraceError::Document(e.to_string()))?;
        LassoTrace::from_doc(doc)
    }
}

/// The on-disk trace format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub atoms: Vec<String>,
    pub stem: Vec<Vec<bool>>,
    #[serde(rename = "loop")]
    pub cycle: Vec<Vec<bool>>,
}

impl fmt::Display for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |states: &[State], f: &mut fmt::Formatter<'_>| -> fmt::Result {
            write!(f, "[")?;
            for (i, s) in states.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{{")?;
                for (k, name) in self.atoms.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{name}:{}", if s.get(k) { 'T' } else { 'F' })?;
                }
                write!(f, "}}")?;
            }
            write!(f, "]")
        };
        write!(f, "stem ")?;
        show(&self.stem, f)?;
        write!(f, " loop ")?;
        show(&self.cycle, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: bool = true;
    const F: bool = false;

    #[test]
    fn stutter_duplicates_a_stem_state() {
        let t = LassoTrace::from_rows(["a"], &[&[T]], &[&[F]]).unwrap();
        let s = t.stutter_at(0).unwrap();
        assert_eq!(s, LassoTrace::from_rows(["a"], &[&[T], &[T]], &[&[F]]).unwrap());

        let t = LassoTrace::from_rows(["a"], &[&[T], &[F]], &[&[F]]).unwrap();
        let s = t.stutter_at(1).unwrap();
        assert_eq!(s, LassoTrace::from_rows(["a"], &[&[T], &[F], &[F]], &[&[F]]).unwrap());

        assert_eq!(t.stutter_at(2), Err(TraceError::StutterOutOfRange { index: 2, stem_len: 2 }));
    }

    #[test]
    fn unroll_copies_the_loop() {
        let x: &[bool] = &[T];
        let t = LassoTrace::from_rows(["a"], &[], &[x]).unwrap();
        assert_eq!(t.unroll(2), LassoTrace::from_rows(["a"], &[x, x], &[x]).unwrap());
        assert_eq!(t.unroll(0), t);
    }

    #[test]
    fn positions_wrap_into_the_loop() {
        let t = LassoTrace::from_rows(["a"], &[&[T]], &[&[F], &[T]]).unwrap();
        assert_eq!(t.normalize(0), 0);
        assert_eq!(t.normalize(2), 2);
        assert_eq!(t.normalize(3), 1);
        assert_eq!(t.normalize(6), 2);
        assert!(t.state(4).get(0));
        assert!(!t.state(5).get(0));
    }

    #[test]
    fn rejects_malformed_traces() {
        assert_eq!(LassoTrace::from_rows(["a"], &[&[T]], &[]), Err(TraceError::EmptyLoop));
        assert!(matches!(
            LassoTrace::from_rows(["a", "b"], &[&[T]], &[&[T, F]]),
            Err(TraceError::StateWidth { index: 0, found: 1, expected: 2 })
        ));
        assert!(matches!(LassoTrace::from_rows(["a", "a"], &[], &[&[T, F]]), Err(TraceError::Atom(_))));
    }

    #[test]
    fn enumeration_order_and_count() {
        let atoms = AtomSet::new(["a", "b"]).unwrap();
        let all: Vec<_> = LassoTrace::enumerate(&atoms, 1, 1).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].stem()[0], State(vec![T, T]));
        assert_eq!(all[1].cycle()[0], State(vec![T, F]));
        assert_eq!(all[4].stem()[0], State(vec![T, F]));
        assert_eq!(all[15].cycle()[0], State(vec![F, F]));
        let one = AtomSet::new(["a"]).unwrap();
        assert_eq!(LassoTrace::enumerate_up_to(&one, 3, 2).len(), 90);
    }

    #[test]
    fn json_round_trip() {
        let t = LassoTrace::from_rows(["a", "b"], &[&[T, F]], &[&[F, T]]).unwrap();
        let v = t.to_json();
        assert_eq!(v, serde_json::json!({"atoms": ["a", "b"], "stem": [[true, false]], "loop": [[false, true]]}));
        assert_eq!(LassoTrace::from_json(&v).unwrap(), t);
        assert!(LassoTrace::from_json_str(r#"{"atoms":["a"],"stem":[],"loop":[]}"#).is_err());
        assert!(LassoTrace::from_json_str(r#"{"atoms":["a"],"stem":[]}"#).is_err());
    }
}
