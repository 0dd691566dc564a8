//! Subset sum, the chain gadget and reductions from subset sum to reachability.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::arith::big_string;
use crate::automaton::{Semantics, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::targets::{classify, hard_pair, unbounded_gap_witness, LinearIntervalSystem, Side};

/// Items `x_1 … x_n` and target `y`, all nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub items: Vec<BigInt>,
    pub target: BigInt,
}

impl SubsetSumInstance {
    pub fn new<I: Into<BigInt>>(items: impl IntoIterator<Item = I>, target: impl Into<BigInt>) -> Self {
        SubsetSumInstance { items: items.into_iter().map(Into::into).collect(), target: target.into() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.items.iter().chain([&self.target]).any(Signed::is_negative) {
            return Err(Error::Precondition("subset-sum numbers must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn total(&self) -> BigInt {
        self.items.iter().sum()
    }
}

/// Indices of a subset summing to the target, found by dynamic programming over reachable sums.
pub fn subset_sum_solve(inst: &SubsetSumInstance) -> Option<Vec<usize>> {
    // layers[i] maps each sum reachable with items[..i] (and ≤ target) to whether item i−1 was taken.
    let mut layers: Vec<HashMap<BigInt, bool>> = vec![HashMap::from([(BigInt::zero(), false)])];
    for x in &inst.items {
        let prev = layers.last().expect("nonempty");
        let mut next: HashMap<BigInt, bool> = prev.keys().map(|s| (s.clone(), false)).collect();
        for s in prev.keys() {
            let t = s + x;
            if t <= inst.target {
                next.entry(t).or_insert(true);
            }
        }
        layers.push(next);
    }
    if !layers.last()?.contains_key(&inst.target) {
        return None;
    }
    let mut out = Vec::new();
    let mut sum = inst.target.clone();
    for i in (1..layers.len()).rev() {
        if layers[i][&sum] {
            out.push(i - 1);
            sum -= &inst.items[i - 1];
        }
    }
    out.reverse();
    Some(out)
}

/// Chain `0 → 1 → … → n` with parallel edges `x_i` and `0`, then `−y`, then `v`; final state `n+2`.
pub fn gadget_automaton(inst: &SubsetSumInstance, v: &BigInt) -> WeightedAutomaton {
    let n = inst.items.len();
    let mut a = WeightedAutomaton::new(n + 3, 0, n + 2).expect("valid shape");
    for (i, x) in inst.items.iter().enumerate() {
        a.add_transition(i, x.clone(), i + 1).expect("valid state");
        a.add_transition(i, 0, i + 1).expect("valid state");
    }
    a.add_transition(n, -&inst.target, n + 1).expect("valid state");
    a.add_transition(n + 1, v.clone(), n + 2).expect("valid state");
    a
}

/// Multiplies every weight by `B` and appends a `+b` edge to a fresh final state.
pub fn scale_and_shift(a: &WeightedAutomaton, modulus: u64, b: u64) -> WeightedAutomaton {
    let mb = BigInt::from(modulus);
    let mut out = a.map_weights(|w| w * &mb);
    if b != 0 {
        let f = out.add_state();
        out.add_transition(a.final_state(), b, f).expect("valid state");
        out = out.with_endpoints(a.initial(), f).expect("valid state");
    }
    out
}

/// A reachability instance produced from a subset-sum instance.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub automaton: WeightedAutomaton,
    pub t: Vec<BigInt>,
    pub semantics: Semantics,
    /// Subset-sum verdict, which the reachability instance must reproduce.
    pub expected: bool,
    pub subset: Option<Vec<usize>>,
}

impl Reduction {
    pub fn sidecar(&self) -> Value {
        json!({
            "t": self.t.iter().map(big_string).collect::<Vec<_>>(),
            "semantics": self.semantics.name(),
            "expected_equivalence": "reachable iff the subset-sum instance is positive",
            "dp_verdict": self.expected,
            "subset": self.subset,
        })
    }
}

/// Builds a gadget automaton and parameters such that `S[t]` is reachable iff `inst` is positive.
pub fn reduce_to_gadget(inst: &SubsetSumInstance, s: &LinearIntervalSystem, sem: Semantics) -> Result<Reduction> {
    inst.validate()?;
    let cls = classify(s, sem)?;
    if cls.side != Side::NpHard {
        return Err(Error::Precondition(format!("the target is on the tractable side for {sem} semantics")));
    }
    let sum_a = inst.total();
    let b = &inst.target;
    let (class_automaton, modulus, residue, t) = match sem {
        Semantics::Integer | Semantics::Natural => {
            // The window width ℓ does not change when the witness is scaled, so read it off first.
            let ell = hard_pair(&cls, &BigInt::from(1))?.ell;
            let need = |ell: &BigInt| {
                if sem == Semantics::Integer {
                    (ell * &sum_a).max(ell * b)
                } else {
                    ell * &sum_a + ell * b + BigInt::from(cls.modulus())
                }
            };
            let mut w = hard_pair(&cls, &need(&ell).max(BigInt::from(1)))?;
            for _ in 0..4 {
                let delta = need(&w.ell).max(BigInt::from(1));
                if w.ell == ell {
                    break;
                }
                w = hard_pair(&cls, &delta)?;
            }
            let scaled = SubsetSumInstance {
                items: inst.items.iter().map(|x| x * &w.ell).collect(),
                target: if sem == Semantics::Integer { b * &w.ell } else { BigInt::zero() },
            };
            let v = if sem == Semantics::Integer { &w.x + &w.k } else { &w.x + &w.k - b * &w.ell };
            if sem == Semantics::Natural && v.is_negative() {
                return Err(Error::Internal("natural reduction produced a negative weight".into()));
            }
            (gadget_automaton(&scaled, &v), w.modulus, w.b, w.t)
        }
        Semantics::Vass => {
            let g = sum_a.clone().max(BigInt::from(1));
            let w = unbounded_gap_witness(&cls, &g)?;
            (gadget_automaton(inst, &w.u), w.modulus, w.b, w.t)
        }
    };
    let subset = subset_sum_solve(inst);
    Ok(Reduction {
        automaton: scale_and_shift(&class_automaton, modulus, residue),
        t,
        semantics: sem,
        expected: subset.is_some(),
        subset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{brute_force_decide, OracleBounds};
    use crate::targets::catalog;
    use proptest::prelude::*;

    #[test]
    fn dp_examples() {
        assert_eq!(subset_sum_solve(&SubsetSumInstance::new([3, 5, 7], 12)), Some(vec![1, 2]));
        assert_eq!(subset_sum_solve(&SubsetSumInstance::new([3, 5, 7], 4)), None);
        assert_eq!(subset_sum_solve(&SubsetSumInstance::new(Vec::<i64>::new(), 0)), Some(vec![]));
    }

    fn exact(a: &WeightedAutomaton, sem: Semantics, set: &crate::targets::ConcreteIntervalSet) -> bool {
        let bound = a.max_abs_weight() * BigInt::from(a.state_count() + 1);
        brute_force_decide(a, sem, set, &OracleBounds::new(bound, a.state_count())).is_reachable()
    }

    #[test]
    fn gadget_examples() {
        let set = crate::targets::ConcreteIntervalSet::point(0);
        let pos = gadget_automaton(&SubsetSumInstance::new([3, 5, 7], 12), &BigInt::zero());
        assert!(exact(&pos, Semantics::Vass, &set));
        let one = gadget_automaton(&SubsetSumInstance::new([1], 1), &BigInt::from(7));
        assert!(exact(&one, Semantics::Vass, &crate::targets::ConcreteIntervalSet::point(7)));
        let neg = gadget_automaton(&SubsetSumInstance::new([2], 1), &BigInt::zero());
        assert!(!exact(&neg, Semantics::Vass, &set));
        assert_eq!(pos.state_count(), 6);
    }

    fn check(inst: &SubsetSumInstance, s: &LinearIntervalSystem, sem: Semantics) -> (bool, bool) {
        let r = reduce_to_gadget(inst, s, sem).unwrap();
        let set = s.instantiate(&r.t).unwrap();
        (exact(&r.automaton, sem, &set), r.expected)
    }

    #[test]
    fn reduction_examples() {
        let pos = SubsetSumInstance::new([3, 5, 7], 12);
        let neg = SubsetSumInstance::new([3, 5, 7], 4);
        for (s, sem) in [
            (catalog::int_s5(), Semantics::Integer),
            (catalog::int_s2(), Semantics::Integer),
            (catalog::vass_zero_or_above(), Semantics::Vass),
            (catalog::int_s5(), Semantics::Natural),
        ] {
            assert_eq!(check(&pos, &s, sem), (true, true));
            assert_eq!(check(&neg, &s, sem), (false, false));
        }
        assert!(reduce_to_gadget(&pos, &catalog::int_s4(), Semantics::Integer).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn dp_witness_sums_to_target(items in prop::collection::vec(0i64..20, 0..8), y in 0i64..60) {
            let inst = SubsetSumInstance::new(items.clone(), y);
            if let Some(idx) = subset_sum_solve(&inst) {
                prop_assert_eq!(idx.iter().map(|&i| items[i]).sum::<i64>(), y);
            } else {
                for mask in 0u32..(1 << items.len()) {
                    let s: i64 = (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).sum();
                    prop_assert_ne!(s, y);
                }
            }
        }

        #[test]
        fn reductions_round_trip(items in prop::collection::vec(0i64..12, 1..5), y in 0i64..30, which in 0usize..5) {
            let inst = SubsetSumInstance::new(items, y);
            let (s, sem) = [
                (catalog::int_s5(), Semantics::Integer),
                (catalog::int_s2(), Semantics::Integer),
                (catalog::nat_point(), Semantics::Natural),
                (catalog::vass_above_plus_point(), Semantics::Vass),
                (catalog::vass_even_plus_one(), Semantics::Vass),
            ][which].clone();
            let (got, want) = check(&inst, &s, sem);
            prop_assert_eq!(got, want);
        }
    }
}
