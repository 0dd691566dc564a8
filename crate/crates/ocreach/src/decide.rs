//! One entry point for all three semantics: classify, dispatch, optionally cross-check.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::automaton::{brute_force_decide, OracleBounds, OracleDecision, Semantics, WeightedAutomaton};
use crate::cover::reach_vass_decide;
use crate::error::{Error, Result};
use crate::laurent::{reach_integer_with, reach_natural_with, IntervalPolynomial, Method, ReachOptions};
use crate::targets::{classify, Classification, LinearIntervalSystem, Side};

/// How the answer was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionMethod {
    Fast,
    ExactFallback,
    /// Bounded exhaustive search (NP-hard VASS targets on cyclic automata).
    Oracle,
}

impl DecisionMethod {
    pub fn name(self) -> &'static str {
        match self {
            DecisionMethod::Fast => "fast",
            DecisionMethod::ExactFallback => "exact-fallback",
            DecisionMethod::Oracle => "oracle",
        }
    }
}

impl From<Method> for DecisionMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Fast => DecisionMethod::Fast,
            Method::ExactFallback => DecisionMethod::ExactFallback,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DecideOptions {
    pub reach: ReachOptions,
    /// Cross-check against the bounded oracle.
    pub verify: bool,
    /// Oracle bounds; `OracleBounds::default_for` when absent.
    pub oracle_bounds: Option<OracleBounds>,
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub agrees: bool,
    /// Transition indices of an oracle run, when it found one.
    pub run: Option<Vec<usize>>,
    pub value: Option<BigInt>,
    pub bounds: OracleBounds,
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub semantics: Semantics,
    pub reachable: bool,
    pub method: DecisionMethod,
    pub side: Side,
    pub verification: Option<Verification>,
}

impl Decision {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "semantics": self.semantics.name(),
            "reachable": self.reachable,
            "method": self.method.name(),
            "classification": self.side.to_string(),
        });
        if let Some(ver) = &self.verification {
            v["verification"] = json!({
                "agrees": ver.agrees,
                "run": ver.run,
                "value": ver.value.as_ref().map(|x| x.to_string()),
                "counter_bound": ver.bounds.counter.to_string(),
                "length_bound": ver.bounds.length,
            });
        }
        v
    }
}

/// Counter values reachable at the final state of an acyclic automaton under VASS semantics.
pub fn exact_vass_values(a: &WeightedAutomaton, guard: usize) -> Result<IntervalPolynomial> {
    let order = a.require_acyclic()?;
    let out = a.out_edges();
    let naturals = |p: IntervalPolynomial| {
        IntervalPolynomial::from_intervals(
            p.intervals().iter().filter(|(_, b)| !b.is_negative()).map(|(a, b)| (a.clone().max(BigInt::zero()), b.clone())).collect(),
        )
    };
    let mut row = vec![IntervalPolynomial::zero(); a.state_count()];
    row[a.initial()] = IntervalPolynomial::one();
    let mut held = 1usize;
    for &s in &order {
        for &ti in &out[s] {
            let t = &a.transitions()[ti];
            let moved = naturals(row[s].shift(&t.weight));
            let before = row[t.dst].len();
            row[t.dst] = crate::laurent::poly_add(&row[t.dst], &moved);
            held = held + row[t.dst].len() - before;
            if held > guard {
                return Err(Error::SizeGuard(format!("exact propagation exceeded {guard} intervals")));
            }
        }
        if s != a.final_state() {
            held -= row[s].len();
            row[s] = IntervalPolynomial::zero();
        }
    }
    Ok(row[a.final_state()].clone())
}

fn decide_vass(a: &WeightedAutomaton, s: &LinearIntervalSystem, t: &[BigInt], cls: &Classification, opts: &DecideOptions) -> Result<(bool, DecisionMethod)> {
    if cls.side == Side::Tractable {
        return Ok((reach_vass_decide(a, cls, t)?.reachable, DecisionMethod::Fast));
    }
    let set = s.instantiate(t)?;
    if a.is_acyclic() {
        let values = exact_vass_values(a, opts.reach.exact_guard)?;
        return Ok((values.meets(&set), DecisionMethod::ExactFallback));
    }
    let bounds = opts.oracle_bounds.clone().unwrap_or_else(|| OracleBounds::default_for(a));
    Ok((brute_force_decide(a, Semantics::Vass, &set, &bounds).is_reachable(), DecisionMethod::Oracle))
}

/// Decides whether some run from counter 0 ends at the final state with a value in `S[t]`.
pub fn decide(a: &WeightedAutomaton, s: &LinearIntervalSystem, t: &[BigInt], sem: Semantics, opts: &DecideOptions) -> Result<Decision> {
    let cls = classify(s, sem)?;
    decide_with(a, s, t, &cls, opts)
}

/// As [`decide`] with a precomputed classification of `s` under its semantics.
pub fn decide_with(a: &WeightedAutomaton, s: &LinearIntervalSystem, t: &[BigInt], cls: &Classification, opts: &DecideOptions) -> Result<Decision> {
    let sem = cls.semantics;
    let (reachable, method) = match sem {
        Semantics::Integer => {
            let out = reach_integer_with(a, s, t, cls, &opts.reach)?;
            (out.reachable, out.method.into())
        }
        Semantics::Natural => {
            let out = reach_natural_with(a, s, t, &opts.reach)?;
            (out.reachable, out.method.into())
        }
        Semantics::Vass => decide_vass(a, s, t, cls, opts)?,
    };
    let verification = if opts.verify {
        let bounds = opts.oracle_bounds.clone().unwrap_or_else(|| OracleBounds::default_for(a));
        let set = s.instantiate(t)?;
        let found = brute_force_decide(a, sem, &set, &bounds);
        // A bounded search can miss long runs, so only a found run that the decision denies is a disagreement.
        let (run, value) = match found {
            OracleDecision::Reachable { run, value } => (Some(run), Some(value)),
            OracleDecision::NotReachableWithinBounds => (None, None),
        };
        let agrees = run.is_none() || reachable;
        Some(Verification { agrees, run, value, bounds })
    } else {
        None
    };
    Ok(Decision { semantics: sem, reachable, method, side: cls.side, verification })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::{catalog, params};

    fn effects_automaton(effects: &[i64]) -> WeightedAutomaton {
        WeightedAutomaton::from_edges(2, 0, 1, effects.iter().map(|&w| (0, w, 1))).unwrap()
    }

    #[test]
    fn dispatches_per_semantics() {
        let opts = DecideOptions { verify: true, ..DecideOptions::default() };
        let d = decide(&effects_automaton(&[2, 7]), &catalog::int_s3(), &params(&[5]), Semantics::Integer, &opts).unwrap();
        assert!(d.reachable);
        assert_eq!(d.method, DecisionMethod::Fast);
        assert!(d.verification.unwrap().agrees);
        let d = decide(&effects_automaton(&[3]), &catalog::int_s2(), &[], Semantics::Integer, &opts).unwrap();
        assert!(!d.reachable);
        assert_eq!(d.method, DecisionMethod::ExactFallback);
        let d = decide(&effects_automaton(&[5]), &catalog::nat_interval(), &params(&[4]), Semantics::Natural, &opts).unwrap();
        assert!(d.reachable);
        let d = decide(&effects_automaton(&[0, 9]), &catalog::vass_zero_or_above(), &params(&[5]), Semantics::Vass, &opts).unwrap();
        assert!(d.reachable);
        assert_eq!(d.method, DecisionMethod::ExactFallback);
        let cyc = WeightedAutomaton::from_edges(2, 0, 1, [(0, 2, 0), (0, 1, 1)]).unwrap();
        let d = decide(&cyc, &catalog::vass_zero_or_above(), &params(&[4]), Semantics::Vass, &opts).unwrap();
        assert_eq!(d.method, DecisionMethod::Oracle);
        assert!(d.reachable);
    }

    #[test]
    fn vass_values_respect_nonnegativity() {
        let a = WeightedAutomaton::from_edges(3, 0, 2, [(0, -1, 1), (0, 2, 1), (1, -2, 2)]).unwrap();
        assert_eq!(exact_vass_values(&a, 1000).unwrap(), IntervalPolynomial::from_small(&[(0, 0)]));
    }
}
