//! Integer and natural reachability: residue split, acyclicization, harbor-chain building blocks.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{exact_effects, reach_building_block, BuildingBlockInstance, DEFAULT_EXACT_GUARD};
use crate::acyclic::{acyclicize, length_bound};
use crate::automaton::{Semantics, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::targets::{
    classify, harbor_chains_concrete, unwrap_modulo_automaton, Classification, HarborChain, LinearIntervalSystem, Side,
};

/// How a decision was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Building blocks and graph reachability only.
    Fast,
    /// Exact effect propagation (NP-hard side, or a residue class without harbor chains).
    ExactFallback,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Fast => "fast",
            Method::ExactFallback => "exact-fallback",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReachOptions {
    /// Cap on intervals held by exact propagation.
    pub exact_guard: usize,
    /// Overrides the default length bound used to acyclicize cyclic automata.
    pub length_bound: Option<BigInt>,
}

impl Default for ReachOptions {
    fn default() -> Self {
        ReachOptions { exact_guard: DEFAULT_EXACT_GUARD, length_bound: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReachOutcome {
    pub reachable: bool,
    pub method: Method,
}

fn prepared(a: &WeightedAutomaton, ell: &BigInt) -> Result<WeightedAutomaton> {
    if a.is_acyclic() {
        Ok(a.clone())
    } else {
        acyclicize(a, ell)
    }
}

fn reach_chain(a: &WeightedAutomaton, chain: &HarborChain) -> Result<bool> {
    let (auto, intervals) = if chain.negated {
        (a.map_weights(|w| -w), super::negate_chain(&chain.intervals))
    } else {
        (a.clone(), chain.intervals.clone())
    };
    let inst = BuildingBlockInstance::from_intervals(chain.rho.clone(), intervals)?;
    if let Err(v) = inst.chain_check() {
        return Err(Error::Internal(format!("harbor chain is not a chain: {v}")));
    }
    reach_building_block(&auto, &inst)
}

/// Decides `∃ x ∈ S[t]` reachable from counter 0 under integer semantics, reporting the method.
pub fn reach_integer_with(
    a: &WeightedAutomaton,
    s: &LinearIntervalSystem,
    t: &[BigInt],
    cls: &Classification,
    opts: &ReachOptions,
) -> Result<ReachOutcome> {
    if cls.semantics == Semantics::Vass {
        return Err(Error::ClassificationMismatch("integer reachability needs an integer or natural classification".into()));
    }
    let ell = opts.length_bound.clone().unwrap_or_else(|| length_bound(a, s));
    let set = s.instantiate(t)?;
    if cls.side == Side::NpHard {
        let effects = exact_effects(&prepared(a, &ell)?, opts.exact_guard)?;
        return Ok(ReachOutcome { reachable: effects.meets(&set), method: Method::ExactFallback });
    }
    let modulus = cls.modulus();
    let set = set.with_modulus(modulus)?;
    let mut method = Method::Fast;
    for b in 0..modulus {
        let class = set.class(b);
        if class.is_empty() {
            continue;
        }
        let unwrapped = unwrap_modulo_automaton(a, modulus, b)?;
        if class.is_all() {
            if unwrapped.reachable_from(unwrapped.initial())[unwrapped.final_state()] {
                return Ok(ReachOutcome { reachable: true, method });
            }
            continue;
        }
        let acyclic = prepared(&unwrapped, &ell)?;
        match harbor_chains_concrete(class) {
            Some(chains) => {
                for chain in &chains {
                    if reach_chain(&acyclic, chain)? {
                        return Ok(ReachOutcome { reachable: true, method });
                    }
                }
            }
            None => {
                method = Method::ExactFallback;
                if exact_effects(&acyclic, opts.exact_guard)?.intersects(class) {
                    return Ok(ReachOutcome { reachable: true, method });
                }
            }
        }
    }
    Ok(ReachOutcome { reachable: false, method })
}

/// Decides `∃ x ∈ S[t]` reachable from counter 0 under integer semantics.
pub fn reach_integer(a: &WeightedAutomaton, s: &LinearIntervalSystem, t: &[BigInt], cls: &Classification) -> Result<bool> {
    Ok(reach_integer_with(a, s, t, cls, &ReachOptions::default())?.reachable)
}

/// Natural semantics for automata with nonnegative weights, via the system extended by negatives.
pub fn reach_natural_with(
    a: &WeightedAutomaton,
    s: &LinearIntervalSystem,
    t: &[BigInt],
    opts: &ReachOptions,
) -> Result<ReachOutcome> {
    if let Some(tr) = a.transitions().iter().find(|tr| tr.weight.is_negative()) {
        return Err(Error::InvalidAutomaton(format!(
            "natural reachability needs nonnegative weights; edge {} -> {} has weight {}",
            tr.src, tr.dst, tr.weight
        )));
    }
    let cls = classify(s, Semantics::Natural)?;
    reach_integer_with(a, &cls.system.clone(), t, &cls, opts)
}

pub fn reach_natural(a: &WeightedAutomaton, s: &LinearIntervalSystem, t: &[BigInt]) -> Result<bool> {
    Ok(reach_natural_with(a, s, t, &ReachOptions::default())?.reachable)
}
