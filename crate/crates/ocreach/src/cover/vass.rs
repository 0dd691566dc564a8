//! Coverability under VASS semantics and the tractable VASS reachability procedure.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{cf_add, cf_compose, cover_iterate, table_from, CoverFunction, Simple};
use crate::arith::{modulo, primes_up_to};
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::targets::{unwrap_modulo_automaton, Classification, Evidence, Interval, Side};

/// Largest layered automaton handled by the tripling iteration; bigger ones use row propagation.
const LAYERED_TRIPLING_LIMIT: usize = 160;
/// Largest product automaton built by the exceptional-point construction.
const PRODUCT_STATE_LIMIT: usize = 4096;
/// Largest number of prime tuples tried per residue.
const TUPLE_LIMIT: usize = 4096;

/// `tables[p][ℓ][q]`: the table of paths of length exactly `ℓ ∈ [0, n]` from `p` to `q`.
type LayeredTables = Vec<Vec<Vec<CoverFunction>>>;

fn layered_automaton(a: &WeightedAutomaton) -> Result<WeightedAutomaton> {
    let n = a.state_count();
    let mut l = WeightedAutomaton::new(n * (n + 1), 0, 0)?;
    for layer in 0..n {
        for t in a.transitions() {
            l.add_transition(layer * n + t.src, t.weight.clone(), (layer + 1) * n + t.dst)?;
        }
    }
    Ok(l)
}

fn layered_by_tripling(a: &WeightedAutomaton, sources: &[usize]) -> Result<LayeredTables> {
    let n = a.state_count();
    let ak = cover_iterate(&layered_automaton(a)?)?;
    Ok(sources
        .iter()
        .map(|&p| (0..=n).map(|layer| (0..n).map(|q| table_from(&ak, p, layer * n + q)).collect()).collect())
        .collect())
}

fn layered_by_rows(a: &WeightedAutomaton, sources: &[usize]) -> LayeredTables {
    let n = a.state_count();
    let edges: Vec<(usize, CoverFunction, usize)> =
        a.transitions().iter().map(|t| (t.src, Simple::of_weight(t.weight.clone()).to_fn(), t.dst)).collect();
    sources
        .iter()
        .map(|&p| {
            let mut rows = Vec::with_capacity(n + 1);
            let mut cur = vec![CoverFunction::empty(); n];
            cur[p] = CoverFunction::identity();
            for _ in 0..n {
                let mut next = vec![CoverFunction::empty(); n];
                for (s, e, d) in &edges {
                    if !cur[*s].is_empty() {
                        next[*d] = cf_add(&next[*d], &cf_compose(&cur[*s], e));
                    }
                }
                rows.push(std::mem::replace(&mut cur, next));
            }
            rows.push(cur);
            rows
        })
        .collect()
}

fn layered_tables(a: &WeightedAutomaton, sources: &[usize]) -> Result<LayeredTables> {
    let n = a.state_count();
    if n * (n + 1) <= LAYERED_TRIPLING_LIMIT {
        layered_by_tripling(a, sources)
    } else {
        Ok(layered_by_rows(a, sources))
    }
}

fn covers(f: &CoverFunction, u: &BigInt, v: &BigInt) -> bool {
    f.eval(u).is_some_and(|y| &y >= v)
}

fn vass_cover_with(tables: &LayeredTables, reach: &[Vec<bool>], p: usize, u: &BigInt, q: usize, v: &BigInt) -> bool {
    let n = reach.len();
    let from_p = &tables[p];
    if (0..=n).any(|l| covers(&from_p[l][q], u, v)) {
        return true;
    }
    for r in 0..n {
        if !reach[r][q] {
            continue;
        }
        for l in 1..=n {
            for (uc, vc) in tables[r][l][r].points() {
                if vc > uc && (0..=n).any(|k| covers(&from_p[k][r], u, uc)) {
                    return true;
                }
            }
        }
    }
    false
}

fn check_cover_args(a: &WeightedAutomaton, p: usize, u: &BigInt, q: usize, v: &BigInt) -> Result<()> {
    let n = a.state_count();
    if p >= n || q >= n {
        return Err(Error::Precondition(format!("state out of range (automaton has {n} states)")));
    }
    if u.is_negative() || v.is_negative() {
        return Err(Error::Precondition("coverability needs u, v ≥ 0".into()));
    }
    Ok(())
}

/// Whether some VASS run from `(p, u)` reaches `(q, v′)` with `v′ ≥ v`.
pub fn vass_cover(a: &WeightedAutomaton, p: usize, u: &BigInt, q: usize, v: &BigInt) -> Result<bool> {
    check_cover_args(a, p, u, q, v)?;
    let n = a.state_count();
    let tables = layered_tables(a, &(0..n).collect::<Vec<_>>())?;
    let reach: Vec<Vec<bool>> = (0..n).map(|r| a.reachable_from(r)).collect();
    Ok(vass_cover_with(&tables, &reach, p, u, q, v))
}

/// Outcome of [`reach_vass_decide`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VassDecision {
    pub reachable: bool,
    /// Residue `b` (counter mod δ) of a successful class.
    pub residue: Option<u64>,
    /// Exceptional points `F` of that class, in quotient coordinates.
    pub exceptions: usize,
}

/// Exceptional points `{z ≥ μ} ∖ C` and `μ = min C` of an upward-closed class.
fn exceptional_points(c: &crate::targets::IntervalList) -> Result<(BigInt, Vec<BigInt>)> {
    let last = c.intervals().last().expect("nonempty");
    if last.hi.is_some() {
        return Err(Error::ClassificationMismatch(
            "a residue class of the instantiated target is bounded above".into(),
        ));
    }
    let mu = c.min().expect("bounded below after intersecting with ℕ").clone();
    let mut f = Vec::new();
    for g in c.gaps() {
        let (Some(lo), Some(hi)) = (&g.lo, &g.hi) else { continue };
        if lo < &mu {
            continue;
        }
        let mut x = lo.clone();
        while &x <= hi {
            f.push(x.clone());
            if f.len() > TUPLE_LIMIT {
                return Err(Error::SizeGuard(format!("more than {TUPLE_LIMIT} exceptional points")));
            }
            x += 1;
        }
    }
    Ok((mu, f))
}

/// Primes whose product exceeds `max_f`, starting from all primes up to `2⌈log₂(max_f+2)⌉ + 8`.
fn prime_pool(max_f: &BigInt) -> Vec<u64> {
    let bound = 2 * (max_f + BigInt::from(2)).bits() + 8;
    let mut ps = primes_up_to(bound);
    let mut limit = bound;
    while ps.iter().fold(BigInt::one(), |acc, &p| acc * p) <= *max_f {
        limit *= 2;
        ps = primes_up_to(limit);
    }
    ps
}

/// Product of `a` with counters modulo the distinct primes of `tuple`; the last state is a sink
/// reached by 0-edges from final states whose counter avoids `f_i mod p_i` for every `i`.
fn residue_product(a: &WeightedAutomaton, tuple: &[u64], f: &[BigInt]) -> Result<Option<WeightedAutomaton>> {
    let mut primes: Vec<u64> = tuple.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let combos: usize = primes.iter().map(|&p| p as usize).product();
    let n = a.state_count();
    if n * combos + 1 > PRODUCT_STATE_LIMIT {
        return Ok(None);
    }
    let decode = |mut idx: usize| -> Vec<u64> {
        primes
            .iter()
            .map(|&p| {
                let r = (idx % p as usize) as u64;
                idx /= p as usize;
                r
            })
            .collect()
    };
    let encode = |rs: &[u64]| -> usize {
        let mut idx = 0usize;
        for (r, &p) in rs.iter().zip(&primes).rev() {
            idx = idx * p as usize + *r as usize;
        }
        idx
    };
    let sink = n * combos;
    let mut out = WeightedAutomaton::new(sink + 1, a.initial() * combos, sink)?;
    for t in a.transitions() {
        let steps: Vec<u64> = primes.iter().map(|&p| modulo(&t.weight, p)).collect();
        for c in 0..combos {
            let rs = decode(c);
            let moved: Vec<u64> = rs.iter().zip(&steps).zip(&primes).map(|((r, s), p)| (r + s) % p).collect();
            out.add_transition(t.src * combos + c, t.weight.clone(), t.dst * combos + encode(&moved))?;
        }
    }
    for c in 0..combos {
        let rs = decode(c);
        let ok = tuple.iter().zip(f).all(|(&p, fi)| {
            let k = primes.binary_search(&p).expect("prime in pool");
            rs[k] != modulo(fi, p)
        });
        if ok {
            out.add_transition(a.final_state() * combos + c, 0, sink)?;
        }
    }
    Ok(Some(out))
}

/// Whether some run of `a` (VASS semantics, from counter 0) ends at the final state with a value in
/// `[μ, max F] ∖ F`.
fn avoids_exceptions(a: &WeightedAutomaton, mu: &BigInt, f: &[BigInt]) -> Result<bool> {
    let max_f = f.iter().max().expect("nonempty");
    let pool = prime_pool(max_f);
    let total = pool.len().checked_pow(f.len() as u32).unwrap_or(usize::MAX);
    if total > TUPLE_LIMIT {
        return Err(Error::SizeGuard(format!("{total} prime tuples exceed the limit {TUPLE_LIMIT}")));
    }
    let mut idx = vec![0usize; f.len()];
    loop {
        let tuple: Vec<u64> = idx.iter().map(|&i| pool[i]).collect();
        match residue_product(a, &tuple, f)? {
            Some(prod) => {
                if vass_cover(&prod, prod.initial(), &BigInt::zero(), prod.final_state(), mu)? {
                    return Ok(true);
                }
            }
            None => return Err(Error::SizeGuard(format!("product automaton for primes {tuple:?} is too large"))),
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(false);
            }
            idx[k] += 1;
            if idx[k] < pool.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Decides `∃ x ∈ S[t]` reachable from counter 0 under VASS semantics for a tractable target.
pub fn reach_vass_decide(a: &WeightedAutomaton, cls: &Classification, t: &[BigInt]) -> Result<VassDecision> {
    if cls.semantics != crate::automaton::Semantics::Vass || cls.side != Side::Tractable {
        return Err(Error::ClassificationMismatch("reach_vass_decide needs a tractable VASS classification".into()));
    }
    let Evidence::Vass { delta, .. } = &cls.evidence else {
        return Err(Error::ClassificationMismatch("classification carries no VASS evidence".into()));
    };
    let delta = *delta;
    let set = cls.system.instantiate(t)?.with_modulus(delta)?;
    let naturals = Interval::at_least(0);
    for b in 0..delta {
        let c = set.class(b).intersect_interval(&naturals);
        if c.is_empty() {
            continue;
        }
        let (mu, f) = exceptional_points(&c)?;
        let unwrapped = unwrap_modulo_automaton(a, delta, b)?;
        let (init, fin) = (unwrapped.initial(), unwrapped.final_state());
        let above = match f.iter().max() {
            Some(m) => m + 1,
            None => mu.clone(),
        };
        let hit = vass_cover(&unwrapped, init, &BigInt::zero(), fin, &above)?
            || (!f.is_empty() && avoids_exceptions(&unwrapped, &mu, &f)?);
        if hit {
            return Ok(VassDecision { reachable: true, residue: Some(b), exceptions: f.len() });
        }
    }
    Ok(VassDecision { reachable: false, residue: None, exceptions: 0 })
}
