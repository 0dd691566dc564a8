//! Weighted one-counter automata, the three step semantics and path arithmetic.

mod oracle;

pub use oracle::{brute_force_decide, brute_force_search, replay, OracleBounds, OracleDecision};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{big_string, bits, json_bigint, json_usize};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: usize,
    pub weight: BigInt,
    pub dst: usize,
}

/// A one-counter automaton with integer weights and one initial and one final state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    states: usize,
    transitions: Vec<Transition>,
    initial: usize,
    final_state: usize,
}

impl WeightedAutomaton {
    pub fn new(states: usize, initial: usize, final_state: usize) -> Result<Self> {
        if states == 0 {
            return Err(Error::InvalidAutomaton("state count must be positive".into()));
        }
        for (name, q) in [("initial", initial), ("final", final_state)] {
            if q >= states {
                return Err(Error::InvalidAutomaton(format!("{name} state {q} out of range [0,{states})")));
            }
        }
        Ok(WeightedAutomaton { states, transitions: Vec::new(), initial, final_state })
    }

    /// Builds an automaton from `(src, weight, dst)` triples.
    pub fn from_edges<W: Into<BigInt>>(
        states: usize,
        initial: usize,
        final_state: usize,
        edges: impl IntoIterator<Item = (usize, W, usize)>,
    ) -> Result<Self> {
        let mut a = Self::new(states, initial, final_state)?;
        for (s, w, d) in edges {
            a.add_transition(s, w, d)?;
        }
        Ok(a)
    }

    pub fn add_transition(&mut self, src: usize, weight: impl Into<BigInt>, dst: usize) -> Result<()> {
        for q in [src, dst] {
            if q >= self.states {
                return Err(Error::InvalidAutomaton(format!(
                    "transition state {q} out of range [0,{})",
                    self.states
                )));
            }
        }
        self.transitions.push(Transition { src, weight: weight.into(), dst });
        Ok(())
    }

    /// Adds a fresh state and returns its index.
    pub fn add_state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn final_state(&self) -> usize {
        self.final_state
    }

    pub fn with_endpoints(&self, initial: usize, final_state: usize) -> Result<Self> {
        let mut a = self.clone();
        if initial >= a.states || final_state >= a.states {
            return Err(Error::InvalidAutomaton("endpoint out of range".into()));
        }
        a.initial = initial;
        a.final_state = final_state;
        Ok(a)
    }

    /// Copy with every weight transformed by `f`.
    pub fn map_weights(&self, f: impl Fn(&BigInt) -> BigInt) -> Self {
        let mut a = self.clone();
        for t in &mut a.transitions {
            t.weight = f(&t.weight);
        }
        a
    }

    /// Outgoing transition indices per state.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.src].push(i);
        }
        out
    }

    /// States reachable from `from` in the transition graph (including `from`).
    pub fn reachable_from(&self, from: usize) -> Vec<bool> {
        let out = self.out_edges();
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(q) = queue.pop_front() {
            for &e in &out[q] {
                let d = self.transitions[e].dst;
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        seen
    }

    /// States from which `to` is reachable (including `to`).
    pub fn coreachable_to(&self, to: usize) -> Vec<bool> {
        let mut seen = vec![false; self.states];
        seen[to] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for t in &self.transitions {
                if seen[t.dst] && !seen[t.src] {
                    seen[t.src] = true;
                    changed = true;
                }
            }
        }
        seen
    }

    /// A topological order of the states, or the first state found on a cycle.
    pub fn topological_order(&self) -> std::result::Result<Vec<usize>, usize> {
        let mut indeg = vec![0usize; self.states];
        for t in &self.transitions {
            indeg[t.dst] += 1;
        }
        let out = self.out_edges();
        let mut queue: VecDeque<usize> = (0..self.states).filter(|&q| indeg[q] == 0).collect();
        let mut order = Vec::with_capacity(self.states);
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &e in &out[q] {
                let d = self.transitions[e].dst;
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    queue.push_back(d);
                }
            }
        }
        if order.len() == self.states {
            Ok(order)
        } else {
            Err((0..self.states).find(|&q| indeg[q] > 0).unwrap_or(0))
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    pub fn require_acyclic(&self) -> Result<Vec<usize>> {
        self.topological_order().map_err(Error::Cyclic)
    }

    pub fn max_abs_weight(&self) -> BigInt {
        crate::arith::max_abs(self.transitions.iter().map(|t| &t.weight))
    }

    pub fn has_negative_weight(&self) -> bool {
        self.transitions.iter().any(|t| t.weight.is_negative())
    }

    /// Size of the binary encoding: one unit per state plus the bits of each transition.
    pub fn bit_size(&self) -> u64 {
        let per_state = 64 - (self.states as u64).leading_zeros() as u64;
        self.states as u64 + self.transitions.iter().map(|t| bits(&t.weight) + 2 * per_state.max(1)).sum::<u64>()
    }

    /// Keeps only states that lie on some initial-to-final path; returns `None` if there is none.
    pub fn trimmed(&self) -> Option<Self> {
        let fwd = self.reachable_from(self.initial);
        let bwd = self.coreachable_to(self.final_state);
        if !fwd[self.final_state] {
            return None;
        }
        let mut index = vec![usize::MAX; self.states];
        let mut n = 0;
        for q in 0..self.states {
            if fwd[q] && bwd[q] {
                index[q] = n;
                n += 1;
            }
        }
        let mut a = WeightedAutomaton::new(n, index[self.initial], index[self.final_state]).ok()?;
        for t in &self.transitions {
            if index[t.src] != usize::MAX && index[t.dst] != usize::MAX {
                a.transitions.push(Transition { src: index[t.src], weight: t.weight.clone(), dst: index[t.dst] });
            }
        }
        Some(a)
    }

    pub fn to_json(&self) -> Value {
        let ts: Vec<Value> =
            self.transitions.iter().map(|t| json!([t.src, big_string(&t.weight), t.dst])).collect();
        json!({
            "states": self.states,
            "initial": self.initial,
            "final": self.final_state,
            "transitions": ts,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::parse("$", "expected an object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "states" | "initial" | "final" | "transitions") {
                return Err(Error::parse(format!("$.{key}"), "unknown field"));
            }
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::parse(format!("$.{k}"), "missing field"));
        let states = json_usize(field("states")?, "$.states")?;
        let initial = json_usize(field("initial")?, "$.initial")?;
        let final_state = json_usize(field("final")?, "$.final")?;
        let mut a = Self::new(states, initial, final_state).map_err(|e| Error::parse("$", e.to_string()))?;
        let ts = field("transitions")?
            .as_array()
            .ok_or_else(|| Error::parse("$.transitions", "expected an array"))?;
        for (i, t) in ts.iter().enumerate() {
            let path = format!("$.transitions[{i}]");
            let triple = t
                .as_array()
                .filter(|x| x.len() == 3)
                .ok_or_else(|| Error::parse(&path, "expected [src, \"weight\", dst]"))?;
            let src = json_usize(&triple[0], &format!("{path}[0]"))?;
            let w = json_bigint(&triple[1], &format!("{path}[1]"))?;
            let dst = json_usize(&triple[2], &format!("{path}[2]"))?;
            a.add_transition(src, w, dst).map_err(|e| Error::parse(&path, e.to_string()))?;
        }
        Ok(a)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Self::from_json(&v)
    }
}

/// Step semantics for the counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    Integer,
    Natural,
    Vass,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Integer => "int",
            Semantics::Natural => "nat",
            Semantics::Vass => "vass",
        }
    }

    /// Whether a step from `from` with weight `w` is allowed.
    pub fn allows(self, from: &BigInt, w: &BigInt) -> bool {
        match self {
            Semantics::Integer => true,
            Semantics::Vass => !(from + w).is_negative(),
            Semantics::Natural => !w.is_negative() && !from.is_negative(),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "int" | "integer" | "z" => Ok(Semantics::Integer),
            "nat" | "natural" | "n" => Ok(Semantics::Natural),
            "vass" => Ok(Semantics::Vass),
            other => Err(Error::parse("semantics", format!("unknown semantics {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: usize,
    pub counter: BigInt,
}

impl Configuration {
    pub fn new(state: usize, counter: impl Into<BigInt>) -> Self {
        Configuration { state, counter: counter.into() }
    }
}

/// All configurations reachable in one step from `c`.
pub fn step_successors(a: &WeightedAutomaton, c: &Configuration, sem: Semantics) -> Result<BTreeSet<Configuration>> {
    if sem != Semantics::Integer && c.counter.is_negative() {
        return Err(Error::Precondition(format!("negative counter {} under {sem} semantics", c.counter)));
    }
    Ok(a.transitions
        .iter()
        .filter(|t| t.src == c.state && sem.allows(&c.counter, &t.weight))
        .map(|t| Configuration { state: t.dst, counter: &c.counter + &t.weight })
        .collect())
}

/// Total effect if every prefix sum is nonnegative, otherwise the minimum prefix sum.
pub fn path_amplitude(weights: &[BigInt]) -> BigInt {
    let mut sum = BigInt::zero();
    let mut min = BigInt::zero();
    for w in weights {
        sum += w;
        if sum < min {
            min = sum.clone();
        }
    }
    if min.is_negative() {
        min
    } else {
        sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: &'static str,
    pub message: String,
}

/// Checks the requested structural requirements and lists every violation.
pub fn validate_automaton(
    a: &WeightedAutomaton,
    require_nonneg_weights: bool,
    require_acyclic: bool,
) -> std::result::Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    if require_nonneg_weights {
        for (i, t) in a.transitions.iter().enumerate() {
            if t.weight.is_negative() {
                diags.push(Diagnostic {
                    kind: "negative weight",
                    message: format!("transition {i} ({} -> {}) has negative weight {}", t.src, t.dst, t.weight),
                });
            }
        }
    }
    if require_acyclic {
        if let Err(q) = a.topological_order() {
            diags.push(Diagnostic { kind: "cycle at state", message: format!("cycle at state {q}") });
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn two_edge() -> WeightedAutomaton {
        WeightedAutomaton::from_edges(2, 0, 1, [(0, -1, 1), (0, 2, 1)]).unwrap()
    }

    #[test]
    fn successors_per_semantics() {
        let a = two_edge();
        let c = Configuration::new(0, 0);
        let z = step_successors(&a, &c, Semantics::Integer).unwrap();
        assert_eq!(z, BTreeSet::from([Configuration::new(1, -1), Configuration::new(1, 2)]));
        let v = step_successors(&a, &c, Semantics::Vass).unwrap();
        assert_eq!(v, BTreeSet::from([Configuration::new(1, 2)]));
        let n = step_successors(&a, &c, Semantics::Natural).unwrap();
        assert_eq!(n, BTreeSet::from([Configuration::new(1, 2)]));
    }

    #[test]
    fn negative_source_counter_is_rejected_outside_integer_semantics() {
        let a = two_edge();
        let c = Configuration::new(0, -1);
        assert!(step_successors(&a, &c, Semantics::Vass).is_err());
        assert!(step_successors(&a, &c, Semantics::Natural).is_err());
        assert!(step_successors(&a, &c, Semantics::Integer).is_ok());
    }

    #[test]
    fn amplitude_examples() {
        assert_eq!(path_amplitude(&[]), b(0));
        assert_eq!(path_amplitude(&[b(3), b(-5), b(1)]), b(-2));
        assert_eq!(path_amplitude(&[b(2), b(3)]), b(5));
    }

    #[test]
    fn validation_reports_each_violation() {
        let chain = WeightedAutomaton::from_edges(2, 0, 1, [(0, -1, 1)]).unwrap();
        let d = validate_automaton(&chain, true, true).unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, "negative weight");

        let looped = WeightedAutomaton::from_edges(1, 0, 0, [(0, 1, 0)]).unwrap();
        let d = validate_automaton(&looped, false, true).unwrap_err();
        assert_eq!(d[0].kind, "cycle at state");

        let dag = WeightedAutomaton::from_edges(3, 0, 2, [(0, 1, 1), (1, 0, 2)]).unwrap();
        assert!(validate_automaton(&dag, true, true).is_ok());
    }

    #[test]
    fn json_round_trip_and_diagnostics() {
        let a = WeightedAutomaton::from_edges(3, 0, 2, [(0, 5, 1), (1, -7, 2)]).unwrap();
        let back = WeightedAutomaton::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        let bad = r#"{"states": 2, "initial": 0, "final": 1, "transitions": [[0, "x", 1]]}"#;
        match WeightedAutomaton::from_json_str(bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "$.transitions[0][1]"),
            other => panic!("unexpected {other:?}"),
        }
        let big = r#"{"states": 1, "initial": 0, "final": 0, "transitions": [[0, "123456789012345678901234567890", 0]]}"#;
        assert!(WeightedAutomaton::from_json_str(big).is_ok());
    }

    #[test]
    fn trimming_drops_useless_states() {
        let a = WeightedAutomaton::from_edges(4, 0, 2, [(0, 1, 2), (0, 1, 3), (1, 1, 2)]).unwrap();
        let t = a.trimmed().unwrap();
        assert_eq!(t.state_count(), 2);
        assert_eq!(t.transitions().len(), 1);
    }
}
