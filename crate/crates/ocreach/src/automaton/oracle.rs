//! Bounded breadth-first exploration used as ground truth by the tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Configuration, Semantics, WeightedAutomaton};
use crate::targets::ConcreteIntervalSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub counter: BigInt,
    pub length: usize,
}

impl OracleBounds {
    pub fn new(counter: impl Into<BigInt>, length: usize) -> Self {
        OracleBounds { counter: counter.into(), length }
    }

    /// lengthBound = states * 8 and counterBound = (states + 1) * (max|w| + 1) * lengthBound.
    pub fn default_for(a: &WeightedAutomaton) -> Self {
        let length = a.state_count() * 8;
        let counter = BigInt::from(a.state_count() + 1) * (a.max_abs_weight() + 1) * BigInt::from(length);
        OracleBounds { counter, length }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleDecision {
    /// `run` lists transition indices; `value` is the final counter.
    Reachable { run: Vec<usize>, value: BigInt },
    NotReachableWithinBounds,
}

impl OracleDecision {
    pub fn is_reachable(&self) -> bool {
        matches!(self, OracleDecision::Reachable { .. })
    }
}

/// Explores configurations from `(initial, start)` with |counter| ≤ bound and run length ≤ bound,
/// stopping at the first configuration accepted by `accept`.
pub fn brute_force_search(
    a: &WeightedAutomaton,
    sem: Semantics,
    start: &BigInt,
    accept: impl Fn(&Configuration) -> bool,
    bounds: &OracleBounds,
) -> OracleDecision {
    let root = Configuration { state: a.initial(), counter: start.clone() };
    if sem != Semantics::Integer && root.counter.is_negative() {
        return OracleDecision::NotReachableWithinBounds;
    }
    let out = a.out_edges();
    let mut nodes: Vec<(Configuration, usize, usize)> = vec![(root.clone(), usize::MAX, usize::MAX)];
    let mut seen: HashMap<Configuration, ()> = HashMap::from([(root, ())]);
    let mut frontier = vec![0usize];
    let mut depth = 0usize;
    let check = |idx: usize, nodes: &Vec<(Configuration, usize, usize)>| -> Option<OracleDecision> {
        if accept(&nodes[idx].0) {
            let mut run = Vec::new();
            let mut cur = idx;
            while nodes[cur].1 != usize::MAX {
                run.push(nodes[cur].2);
                cur = nodes[cur].1;
            }
            run.reverse();
            return Some(OracleDecision::Reachable { run, value: nodes[idx].0.counter.clone() });
        }
        None
    };
    if let Some(d) = check(0, &nodes) {
        return d;
    }
    while depth < bounds.length && !frontier.is_empty() {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (state, counter) = (nodes[idx].0.state, nodes[idx].0.counter.clone());
            for &e in &out[state] {
                let t = &a.transitions()[e];
                if !sem.allows(&counter, &t.weight) {
                    continue;
                }
                let value = &counter + &t.weight;
                if value.abs() > bounds.counter {
                    continue;
                }
                let c = Configuration { state: t.dst, counter: value };
                if seen.contains_key(&c) {
                    continue;
                }
                seen.insert(c.clone(), ());
                nodes.push((c, idx, e));
                let id = nodes.len() - 1;
                if let Some(d) = check(id, &nodes) {
                    return d;
                }
                next.push(id);
            }
        }
        frontier = next;
        depth += 1;
    }
    OracleDecision::NotReachableWithinBounds
}

/// Reachability of a final-state configuration whose counter lies in `target`, from counter 0.
pub fn brute_force_decide(
    a: &WeightedAutomaton,
    sem: Semantics,
    target: &ConcreteIntervalSet,
    bounds: &OracleBounds,
) -> OracleDecision {
    let fin = a.final_state();
    brute_force_search(a, sem, &BigInt::zero(), |c| c.state == fin && target.contains(&c.counter), bounds)
}

/// Replays a run from `(initial, start)`; `None` if some step is not allowed.
pub fn replay(a: &WeightedAutomaton, sem: Semantics, start: &BigInt, run: &[usize]) -> Option<Configuration> {
    let mut cur = Configuration { state: a.initial(), counter: start.clone() };
    for &e in run {
        let t = a.transitions().get(e)?;
        if t.src != cur.state || !sem.allows(&cur.counter, &t.weight) {
            return None;
        }
        cur = Configuration { state: t.dst, counter: &cur.counter + &t.weight };
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::{gadget_automaton, SubsetSumInstance};
    use crate::targets::ConcreteIntervalSet;

    #[test]
    fn empty_run_reaches_zero() {
        let a = WeightedAutomaton::new(1, 0, 0).unwrap();
        let d = brute_force_decide(&a, Semantics::Integer, &ConcreteIntervalSet::point(0), &OracleBounds::default_for(&a));
        assert_eq!(d, OracleDecision::Reachable { run: vec![], value: BigInt::zero() });
    }

    #[test]
    fn subset_sum_gadget_examples() {
        let pos = SubsetSumInstance::new([3, 5, 7], 12);
        let a = gadget_automaton(&pos, &BigInt::zero());
        let bounds = OracleBounds::new(15, 16);
        let d = brute_force_decide(&a, Semantics::Vass, &ConcreteIntervalSet::point(0), &bounds);
        let OracleDecision::Reachable { run, value } = d else { panic!("expected reachable") };
        let end = replay(&a, Semantics::Vass, &BigInt::zero(), &run).unwrap();
        assert_eq!(end.state, a.final_state());
        assert_eq!(end.counter, value);

        let neg = SubsetSumInstance::new([3, 5, 7], 4);
        let a = gadget_automaton(&neg, &BigInt::zero());
        for sem in [Semantics::Integer, Semantics::Vass] {
            let d = brute_force_decide(&a, sem, &ConcreteIntervalSet::point(0), &bounds);
            assert_eq!(d, OracleDecision::NotReachableWithinBounds);
        }
    }

    #[test]
    fn larger_bounds_never_lose_reachability() {
        let a = WeightedAutomaton::from_edges(2, 0, 1, [(0, 3, 0), (0, -2, 1), (1, -2, 1)]).unwrap();
        let target = ConcreteIntervalSet::point(5);
        let mut prev = false;
        for len in 0..12 {
            for cb in [5, 10, 20] {
                let r = brute_force_decide(&a, Semantics::Vass, &target, &OracleBounds::new(cb, len)).is_reachable();
                if cb == 20 {
                    assert!(r || !prev);
                    prev = r;
                }
            }
        }
        assert!(prev);
    }
}
