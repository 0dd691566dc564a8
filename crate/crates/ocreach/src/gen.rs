//! Seeded random automata for tests, the acceptance suite and benchmarks.

use num_bigint::BigInt;
use rand::Rng;

use crate::automaton::WeightedAutomaton;

/// An automaton on `n` states with `edges` random transitions (self-loops allowed), weights in
/// `[lo, hi]`, initial state 0 and a random final state.
pub fn random_automaton<R: Rng>(rng: &mut R, n: usize, edges: usize, lo: i64, hi: i64) -> WeightedAutomaton {
    let fin = rng.random_range(0..n);
    let list: Vec<(usize, i64, usize)> =
        (0..edges).map(|_| (rng.random_range(0..n), rng.random_range(lo..=hi), rng.random_range(0..n))).collect();
    WeightedAutomaton::from_edges(n, 0, fin, list).expect("states in range")
}

/// An acyclic automaton on `n` states: every edge goes from a lower to a higher index, each state
/// gets up to `out_degree` successors, initial 0, final `n−1`.
pub fn random_acyclic<R: Rng>(rng: &mut R, n: usize, out_degree: usize, lo: i64, hi: i64) -> WeightedAutomaton {
    let mut a = WeightedAutomaton::new(n, 0, n - 1).expect("n ≥ 1");
    for s in 0..n.saturating_sub(1) {
        let k = rng.random_range(0..=out_degree);
        for _ in 0..k {
            let d = rng.random_range(s + 1..n);
            a.add_transition(s, rng.random_range(lo..=hi), d).expect("states in range");
        }
    }
    a
}

/// An acyclic automaton with a spine `i → i+1` plus `extra` forward edges per state, with weights
/// drawn uniformly from the 64-bit range.
pub fn random_wide_acyclic<R: Rng>(rng: &mut R, n: usize, extra: usize) -> WeightedAutomaton {
    let mut a = WeightedAutomaton::new(n, 0, n - 1).expect("n ≥ 1");
    for s in 0..n.saturating_sub(1) {
        a.add_transition(s, BigInt::from(rng.random::<i64>()), s + 1).expect("states in range");
        for _ in 0..extra {
            let d = rng.random_range(s + 1..n);
            a.add_transition(s, BigInt::from(rng.random::<i64>()), d).expect("states in range");
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn generated_shapes() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_acyclic(&mut rng, 6, 3, -4, 4);
            assert!(a.is_acyclic());
            assert!(a.max_abs_weight() <= BigInt::from(4));
            let b = random_automaton(&mut rng, 4, 6, -8, 8);
            assert_eq!(b.transitions().len(), 6);
        }
        let w = random_wide_acyclic(&mut rng, 30, 2);
        assert!(w.is_acyclic());
        assert_eq!(w.transitions().len(), 29 * 3);
    }
}
