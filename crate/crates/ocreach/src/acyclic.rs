//! Reduction from arbitrary automata to acyclic ones that keeps every effect of a run of length
//! at most `ℓ` and adds no effect that no run has.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::pow2;
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::targets::LinearIntervalSystem;

/// Multiplier `c` (and `c′`) in `ℓ = 2^(c·bits(a) + c′·bits(s))`.
pub const LENGTH_BOUND_FACTOR: u64 = 2;
/// Largest automaton `acyclicize` builds.
pub const MAX_ACYCLIC_STATES: usize = 2_000_000;
/// Largest set of short-cycle effects enumerated per state.
const MAX_CYCLE_EFFECTS: usize = 100_000;

/// Conservative bound on the length of a shortest run reaching a target of `s`.
pub fn length_bound(a: &WeightedAutomaton, s: &LinearIntervalSystem) -> BigInt {
    pow2(LENGTH_BOUND_FACTOR * a.bit_size() + LENGTH_BOUND_FACTOR * s.bit_size())
}

/// Effects of closed walks at `q` of length `1..=n`.
pub fn short_cycle_effects(a: &WeightedAutomaton, q: usize) -> Result<BTreeSet<BigInt>> {
    let n = a.state_count();
    let out = a.out_edges();
    let mut layer: Vec<BTreeSet<BigInt>> = vec![BTreeSet::new(); n];
    layer[q].insert(BigInt::zero());
    let mut effects = BTreeSet::new();
    for _ in 0..n {
        let mut next: Vec<BTreeSet<BigInt>> = vec![BTreeSet::new(); n];
        let mut total = 0usize;
        for s in 0..n {
            for &ti in &out[s] {
                let t = &a.transitions()[ti];
                for e in &layer[s] {
                    if next[t.dst].insert(e + &t.weight) {
                        total += 1;
                    }
                }
            }
        }
        if total > MAX_CYCLE_EFFECTS {
            return Err(Error::SizeGuard(format!("more than {MAX_CYCLE_EFFECTS} short-cycle effects")));
        }
        effects.extend(next[q].iter().cloned());
        layer = next;
    }
    Ok(effects)
}

/// Block count and multiplicity bound for the gadget at a state with the given cycle effects.
///
/// With `D` distinct nonzero effects of absolute value at most `M`, an effect of at most `ℓ`
/// cycles needs at most `r = 2·⌈log₂(4M)⌉` distinct cycles.
pub fn gadget_parameters(effects: &BTreeSet<BigInt>, ell: &BigInt) -> (usize, BigInt) {
    let nonzero: Vec<&BigInt> = effects.iter().filter(|e| !e.is_zero()).collect();
    let d = nonzero.len();
    if d == 0 {
        return (0, BigInt::zero());
    }
    let max_abs = nonzero.iter().map(|e| e.abs()).max().expect("nonempty");
    let r_es = (ceil_log2(&(max_abs * 4u32)) * 2) as usize;
    let min_ld = if ell < &BigInt::from(d) { ell.to_usize().expect("ell < d") } else { d };
    let blocks = min_ld.min(r_es);
    let m = if blocks == min_ld { ell.clone() } else { ell * pow2((d - r_es) as u64) };
    (blocks, m)
}

fn ceil_log2(x: &BigInt) -> u64 {
    if x <= &BigInt::one() {
        0
    } else {
        (x - 1u32).bits()
    }
}

/// Appends a copy of the gadget for `q` between `entry` and a fresh exit state, returning the exit.
fn append_gadget(out: &mut WeightedAutomaton, a: &WeightedAutomaton, q: usize, blocks: usize, m: &BigInt, entry: usize) -> Result<usize> {
    let n = a.state_count();
    let levels = ceil_log2(m) + 1;
    let mut cur = entry;
    for _ in 0..blocks {
        for j in 0..levels {
            let factor = pow2(j);
            let exit = out.add_state();
            out.add_transition(cur, 0, exit)?;
            // layer[k][s]: after k steps of the simulated cycle at state s
            let base = out.state_count();
            for _ in 0..n * n {
                out.add_state();
            }
            let at = |k: usize, s: usize| base + (k - 1) * n + s;
            for t in a.transitions() {
                let w = &t.weight * &factor;
                if t.src == q {
                    out.add_transition(cur, w.clone(), at(1, t.dst))?;
                }
                for k in 1..n {
                    out.add_transition(at(k, t.src), w.clone(), at(k + 1, t.dst))?;
                }
            }
            for k in 1..=n {
                out.add_transition(at(k, q), 0, exit)?;
            }
            if out.state_count() > MAX_ACYCLIC_STATES {
                return Err(Error::SizeGuard(format!("acyclic automaton exceeds {MAX_ACYCLIC_STATES} states")));
            }
            cur = exit;
        }
    }
    Ok(cur)
}

/// An acyclic automaton whose effects lie between `ℓ`-bounded sums of short `q`-cycle effects
/// and arbitrary sums of them.
pub fn cycle_gadget(a: &WeightedAutomaton, q: usize, ell: &BigInt) -> Result<WeightedAutomaton> {
    if ell < &BigInt::one() {
        return Err(Error::Precondition("the length bound must be at least 1".into()));
    }
    let effects = short_cycle_effects(a, q)?;
    let (blocks, m) = gadget_parameters(&effects, ell);
    let mut out = WeightedAutomaton::new(1, 0, 0)?;
    let exit = append_gadget(&mut out, a, q, blocks, &m, 0)?;
    out.with_endpoints(0, exit)
}

/// Layered `n²`-step skeleton whose states are replaced by their cycle gadgets.
pub fn acyclicize(a: &WeightedAutomaton, ell: &BigInt) -> Result<WeightedAutomaton> {
    if ell < &BigInt::one() {
        return Err(Error::Precondition("the length bound must be at least 1".into()));
    }
    let n = a.state_count();
    let mut params = Vec::with_capacity(n);
    for q in 0..n {
        let effects = short_cycle_effects(a, q)?;
        params.push(gadget_parameters(&effects, ell));
    }
    let layers = n * n + 1;
    let mut out = WeightedAutomaton::new(1, 0, 0)?;
    let mut entries = vec![vec![usize::MAX; n]; layers];
    let mut exits = vec![vec![usize::MAX; n]; layers];
    let reach = a.reachable_from(a.initial());
    for i in 0..layers {
        for q in 0..n {
            if !reach[q] || i > 0 && !a.transitions().iter().any(|t| t.dst == q) {
                continue;
            }
            let entry = if i == 0 && q == a.initial() { 0 } else { out.add_state() };
            entries[i][q] = entry;
            let (blocks, m) = &params[q];
            exits[i][q] = append_gadget(&mut out, a, q, *blocks, m, entry)?;
        }
    }
    for i in 0..layers - 1 {
        for t in a.transitions() {
            if exits[i][t.src] != usize::MAX && entries[i + 1][t.dst] != usize::MAX {
                out.add_transition(exits[i][t.src], t.weight.clone(), entries[i + 1][t.dst])?;
            }
        }
    }
    let sink = out.add_state();
    for row in &exits {
        let e = row[a.final_state()];
        if e != usize::MAX {
            out.add_transition(e, 0, sink)?;
        }
    }
    let result = out.with_endpoints(0, sink)?;
    debug_assert!(result.is_acyclic());
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{exact_effects, IntervalPolynomial};
    use crate::targets::catalog;
    use proptest::prelude::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// Effects of runs of length ≤ ℓ from the initial to the final state.
    fn run_effects(a: &WeightedAutomaton, ell: usize) -> BTreeSet<BigInt> {
        let n = a.state_count();
        let mut layer: Vec<BTreeSet<BigInt>> = vec![BTreeSet::new(); n];
        layer[a.initial()].insert(BigInt::zero());
        let mut out: BTreeSet<BigInt> = layer[a.final_state()].clone();
        for _ in 0..ell {
            let mut next = vec![BTreeSet::new(); n];
            for t in a.transitions() {
                for e in &layer[t.src] {
                    next[t.dst].insert(e + &t.weight);
                }
            }
            out.extend(next[a.final_state()].iter().cloned());
            layer = next;
        }
        out
    }

    fn effects_of(a: &WeightedAutomaton) -> IntervalPolynomial {
        exact_effects(a, 1_000_000).unwrap()
    }

    #[test]
    fn length_bound_examples() {
        let a = WeightedAutomaton::new(1, 0, 0).unwrap();
        let s = catalog::int_s3();
        assert!(length_bound(&a, &s) >= BigInt::one());
        let mut b = a.clone();
        b.add_transition(0, 3, 0).unwrap();
        assert!(length_bound(&b, &s) >= length_bound(&a, &s));
    }

    #[test]
    fn gadget_examples() {
        let a = WeightedAutomaton::from_edges(1, 0, 0, [(0, 1, 0)]).unwrap();
        let g = effects_of(&cycle_gadget(&a, 0, &big(5)).unwrap());
        for k in 0..=5 {
            assert!(g.contains(&big(k)));
        }
        assert!(g.min().unwrap() >= &BigInt::zero());
        let none = WeightedAutomaton::from_edges(2, 0, 1, [(0, 4, 1)]).unwrap();
        assert_eq!(effects_of(&cycle_gadget(&none, 0, &big(5)).unwrap()), IntervalPolynomial::one());
        let two = WeightedAutomaton::from_edges(1, 0, 0, [(0, 2, 0), (0, -3, 0)]).unwrap();
        let g = effects_of(&cycle_gadget(&two, 0, &big(3)).unwrap());
        for k in [0, 2, 4, -3, -1, -6, 1, 6] {
            assert!(g.contains(&big(k)), "{k}");
        }
    }

    #[test]
    fn acyclicize_examples() {
        let dag = WeightedAutomaton::from_edges(3, 0, 2, [(0, 1, 1), (1, 2, 2), (0, -4, 2)]).unwrap();
        assert_eq!(effects_of(&acyclicize(&dag, &big(3)).unwrap()), effects_of(&dag));
        let loop1 = WeightedAutomaton::from_edges(1, 0, 0, [(0, 1, 0)]).unwrap();
        let e = effects_of(&acyclicize(&loop1, &big(4)).unwrap());
        for k in 0..=4 {
            assert!(e.contains(&big(k)));
        }
        let mixed = WeightedAutomaton::from_edges(2, 0, 1, [(0, -1, 0), (0, 5, 1)]).unwrap();
        let e = effects_of(&acyclicize(&mixed, &big(6)).unwrap());
        for x in run_effects(&mixed, 6) {
            assert!(e.contains(&x), "{x}");
        }
    }

    fn small_automaton() -> impl Strategy<Value = WeightedAutomaton> {
        (1usize..=3).prop_flat_map(|n| {
            (prop::collection::vec((0..n, -3i64..=3, 0..n), 0..5), 0..n, 0..n)
                .prop_map(move |(edges, i, f)| WeightedAutomaton::from_edges(n, i, f, edges).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn inclusions_hold(a in small_automaton(), ell in 1usize..=4) {
            let acyc = acyclicize(&a, &BigInt::from(ell)).unwrap();
            prop_assert!(acyc.is_acyclic());
            let e = effects_of(&acyc);
            for x in run_effects(&a, ell) {
                prop_assert!(e.contains(&x));
            }
            // Every small output effect is realised by some run; 150 steps reach all of [-60, 60] here.
            let runs = run_effects(&a, 150);
            for x in -60i64..=60 {
                if e.contains(&big(x)) {
                    prop_assert!(runs.contains(&big(x)), "{}", x);
                }
            }
        }
    }
}
