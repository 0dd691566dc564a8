//! Residue classes `[S]_{B,b}` of parametric systems and the matching automaton rewrite.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::system::{AffineForm, Bound, Branch, LinearIntervalSystem, Slot};
use crate::arith::{ceil_div, floor_div, modulo};
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};

/// Largest number of period offsets `ρ ∈ [0,B)^k` enumerated for one branch.
const MAX_OFFSETS: u64 = 1 << 16;

/// Residues `(r_1, …, r_p, b)` of the parameters and of `x`.
pub type ResidueKey = Vec<u64>;

/// `[S]_{B,(r,b)} = { (s, z) : (B·s + r, B·z + b) ∈ S }` as a stride-free system of canonical branches.
pub fn residue_class(s: &LinearIntervalSystem, modulus: u64, r: &[u64], b: u64) -> Result<LinearIntervalSystem> {
    if modulus == 0 {
        return Err(Error::Precondition("residue modulus must be positive".into()));
    }
    if r.len() != s.p || r.iter().chain([&b]).any(|&x| x >= modulus) {
        return Err(Error::Precondition(format!("residue vector must have {} entries below {modulus}", s.p + 1)));
    }
    let mb = BigInt::from(modulus);
    let mut out = Vec::new();
    for (idx, br) in s.branches.iter().enumerate() {
        let (bx, c) = br.stride;
        if modulus % bx != 0 {
            return Err(Error::Precondition(format!(
                "modulus {modulus} is not a multiple of the stride {bx} of branch {idx}"
            )));
        }
        if b % bx != c {
            continue;
        }
        let count = (modulus as u128).checked_pow(br.vars as u32).filter(|&c| c <= MAX_OFFSETS as u128);
        let Some(count) = count else {
            return Err(Error::Unsupported(format!(
                "residue split of branch {idx} needs {modulus}^{} period offsets",
                br.vars
            )));
        };
        for code in 0..count as u64 {
            let rho: Vec<BigInt> = (0..br.vars)
                .map(|j| BigInt::from((code / modulus.pow(j as u32)) % modulus))
                .collect();
            let t0 = br.params(&rho);
            if t0.iter().zip(r).any(|(t, &ri)| modulo(t, modulus) != ri) {
                continue;
            }
            let base = t0.iter().zip(r).map(|(t, &ri)| (t - BigInt::from(ri)) / &mb).collect();
            let bb = BigInt::from(b);
            let quotient = |f: &AffineForm, up: bool| {
                let shifted = f.eval(&rho) - &bb;
                let constant = if up { ceil_div(&shifted, &mb) } else { floor_div(&shifted, &mb) };
                AffineForm { constant, coeffs: f.coeffs.clone() }
            };
            let slots = br
                .slots
                .iter()
                .map(|sl| Slot {
                    left: match &sl.left {
                        Bound::At(f) => Bound::At(quotient(f, true)),
                        other => other.clone(),
                    },
                    right: match &sl.right {
                        Bound::At(f) => Bound::At(quotient(f, false)),
                        other => other.clone(),
                    },
                })
                .collect();
            let piece = Branch { base, periods: br.periods.clone(), vars: br.vars, slots, stride: (1, 0) };
            out.extend(piece.canonical_pieces()?);
        }
    }
    Ok(LinearIntervalSystem { p: s.p, branches: out })
}

/// Every residue class of `s` modulo `B`, keyed by `(r_1, …, r_p, b)`.
pub fn residue_split_set(s: &LinearIntervalSystem, modulus: u64) -> Result<BTreeMap<ResidueKey, LinearIntervalSystem>> {
    if modulus == 0 {
        return Err(Error::Precondition("residue modulus must be positive".into()));
    }
    let keys = (modulus as u128).checked_pow(s.p as u32 + 1).filter(|&k| k <= MAX_OFFSETS as u128);
    let Some(keys) = keys else {
        return Err(Error::Unsupported(format!("{modulus}^{} residue classes", s.p + 1)));
    };
    let mut out = BTreeMap::new();
    for code in 0..keys as u64 {
        let key: ResidueKey = (0..=s.p).map(|j| (code / modulus.pow(j as u32)) % modulus).collect();
        let class = residue_class(s, modulus, &key[..s.p], key[s.p])?;
        out.insert(key, class);
    }
    Ok(out)
}

/// Product automaton with effects `{ z : B·z + b ∈ Eff(a) }`.
///
/// State `(q, i)` has index `q·B + i` and records the counter residue `i`; an edge of weight `w`
/// leaving residue `i` moves to residue `(i + w) mod B` with weight `⌊(i + w)/B⌋`.
pub fn unwrap_modulo_automaton(a: &WeightedAutomaton, modulus: u64, b: u64) -> Result<WeightedAutomaton> {
    if modulus == 0 || b >= modulus {
        return Err(Error::Precondition(format!("residue {b} is not in [0, {modulus})")));
    }
    let m = modulus as usize;
    let mb = BigInt::from(modulus);
    let mut out = WeightedAutomaton::new(a.state_count() * m, a.initial() * m, a.final_state() * m + b as usize)?;
    for t in a.transitions() {
        for i in 0..m {
            let shifted = &t.weight + BigInt::from(i);
            let j = modulo(&shifted, modulus) as usize;
            out.add_transition(t.src * m + i, floor_div(&shifted, &mb), t.dst * m + j)?;
        }
    }
    Ok(out)
}

/// `B·s + r` componentwise.
pub(crate) fn lift_params(s: &[BigInt], modulus: u64, r: &[u64]) -> Vec<BigInt> {
    s.iter().zip(r).map(|(x, &ri)| x * BigInt::from(modulus) + BigInt::from(ri)).collect()
}

/// `(s, r)` with `t = B·s + r` and `r ∈ [0,B)`.
#[cfg(test)]
pub(crate) fn split_params(t: &[BigInt], modulus: u64) -> (Vec<BigInt>, Vec<u64>) {
    let r: Vec<u64> = t.iter().map(|x| modulo(x, modulus)).collect();
    let s = t
        .iter()
        .zip(&r)
        .map(|(x, &ri)| (x - BigInt::from(ri)) / BigInt::from(modulus))
        .collect();
    (s, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{brute_force_decide, OracleBounds, Semantics};
    use crate::targets::{catalog, params, ConcreteIntervalSet, Interval, IntervalList};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn effects(a: &WeightedAutomaton) -> std::collections::BTreeSet<BigInt> {
        let order = a.topological_order().expect("acyclic");
        let mut sets = vec![std::collections::BTreeSet::new(); a.state_count()];
        sets[a.initial()].insert(BigInt::zero());
        for &q in &order {
            let cur = sets[q].clone();
            for t in a.transitions().iter().filter(|t| t.src == q) {
                for v in &cur {
                    sets[t.dst].insert(v + &t.weight);
                }
            }
        }
        sets[a.final_state()].clone()
    }

    #[test]
    fn s1_classes() {
        let s = catalog::int_s1();
        let split = residue_split_set(&s, 2).unwrap();
        let c0 = split[&vec![0]].instantiate(&[]).unwrap();
        let c1 = split[&vec![1]].instantiate(&[]).unwrap();
        assert_eq!(c0.to_string(), "(-inf,0]");
        assert_eq!(c1.to_string(), "[0,inf)");
    }

    #[test]
    fn s2_odd_class_is_a_point() {
        let s = catalog::int_s2();
        let c = residue_class(&s, 2, &[], 1).unwrap();
        assert_eq!(c.instantiate(&[]).unwrap().to_string(), "[0,0]");
    }

    #[test]
    fn modulus_one_is_identity() {
        for ex in catalog::all() {
            let split = residue_class(&ex.system, 1, &vec![0; ex.system.p], 0);
            let Ok(split) = split else { continue };
            for t in ex.sample_params() {
                assert_eq!(
                    split.instantiate(&t).unwrap().as_stride_free(),
                    ex.system.instantiate(&t).unwrap().as_stride_free(),
                    "{}",
                    ex.name
                );
            }
        }
    }

    #[test]
    fn unwrap_examples() {
        let a = WeightedAutomaton::from_edges(2, 0, 1, [(0, 5, 1)]).unwrap();
        let odd = unwrap_modulo_automaton(&a, 2, 1).unwrap();
        assert_eq!(effects(&odd).into_iter().collect::<Vec<_>>(), vec![BigInt::from(2)]);
        let even = unwrap_modulo_automaton(&a, 2, 0).unwrap();
        assert!(effects(&even).is_empty());
        let same = unwrap_modulo_automaton(&a, 1, 0).unwrap();
        assert_eq!(effects(&same), effects(&a));
    }

    #[test]
    fn unwrap_keeps_vass_runs() {
        // 0 →(+3) 1 →(−2) 2: counter 3 then 1 under VASS.
        let a = WeightedAutomaton::from_edges(3, 0, 2, [(0, 3, 1), (1, -2, 2)]).unwrap();
        let u = unwrap_modulo_automaton(&a, 2, 1).unwrap();
        let target = ConcreteIntervalSet::point(0);
        let d = brute_force_decide(&u, Semantics::Vass, &target, &OracleBounds::new(10, 10));
        assert!(d.is_reachable());
    }

    fn small_dag() -> impl Strategy<Value = WeightedAutomaton> {
        (2usize..=5, prop::collection::vec((0usize..5, -6i64..=6, 0usize..5), 0..9)).prop_map(|(n, edges)| {
            let mut a = WeightedAutomaton::new(n, 0, n - 1).unwrap();
            for (x, w, y) in edges {
                let (x, y) = (x % n, y % n);
                if x < y {
                    a.add_transition(x, w, y).unwrap();
                }
            }
            a
        })
    }

    proptest! {
        #[test]
        fn unwrap_effects_are_the_quotient(a in small_dag(), m in 1u64..4, b in 0u64..4) {
            let b = b % m;
            let u = unwrap_modulo_automaton(&a, m, b).unwrap();
            let expect: std::collections::BTreeSet<BigInt> = effects(&a)
                .into_iter()
                .filter(|x| modulo(x, m) == b)
                .map(|x| (x - BigInt::from(b)) / BigInt::from(m))
                .collect();
            prop_assert_eq!(effects(&u), expect);
        }

        #[test]
        fn residue_transfer(idx in 0usize..6, t0 in -3i64..12, t1 in 0i64..12, x in -30i64..60, m in 1u64..4) {
            let ex = &catalog::integer_examples()[idx];
            let s = &ex.system;
            let t: Vec<BigInt> = params(&[t0, t1])[..s.p].to_vec();
            let m = m * s.stride_lcm();
            let (sq, r) = split_params(&t, m);
            let b = modulo(&BigInt::from(x), m);
            let z = (BigInt::from(x) - BigInt::from(b)) / BigInt::from(m);
            let class = residue_class(s, m, &r, b).unwrap();
            let lhs = s.instantiate(&t).unwrap().contains(&BigInt::from(x));
            let rhs = class.instantiate(&sq).unwrap().contains(&z);
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(lift_params(&sq, m, &r), t);
        }
    }

    #[test]
    fn residue_classes_are_stride_free_lists() {
        let s = catalog::int_s2();
        let c = residue_class(&s, 2, &[], 0).unwrap();
        assert_eq!(c.instantiate(&[]).unwrap().as_stride_free(), Some(&IntervalList::from_intervals([Interval::all()])));
    }
}
