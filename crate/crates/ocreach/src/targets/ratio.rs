//! Gap-to-interval ratios of branches and concrete sets, ω-constellations and harbor chains.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{Interval, IntervalList};
use super::system::{AffineForm, Bound, Branch};
use crate::arith::ceil_div;
use crate::error::{Error, Result};

/// One entry `⌈|K_i| / |I_j|⌉` of a ratio matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioEntry {
    Finite(BigInt),
    Omega,
}

impl fmt::Display for RatioEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioEntry::Finite(v) => write!(f, "{v}"),
            RatioEntry::Omega => f.write_str("w"),
        }
    }
}

/// Rows index the gaps of `a` and columns its intervals.
pub fn ratio_matrix(a: &IntervalList) -> Result<Vec<Vec<RatioEntry>>> {
    if a.is_empty() {
        return Err(Error::InvalidTarget("ratio matrix of the empty set".into()));
    }
    let gaps = a.gaps();
    Ok(gaps
        .iter()
        .map(|k| {
            a.intervals()
                .iter()
                .map(|i| match (k.length(), i.length()) {
                    (None, _) => RatioEntry::Omega,
                    (Some(_), None) => RatioEntry::Finite(BigInt::zero()),
                    (Some(kl), Some(il)) => RatioEntry::Finite(ceil_div(&kl, &il.max(BigInt::one()))),
                })
                .collect()
        })
        .collect())
}

/// Outcome of comparing a gap-length form with an interval-length form over `λ ∈ ℕ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ratio {
    Bounded(BigInt),
    /// Growing along `λ = c·direction` while the interval stays fixed.
    Unbounded(Vec<BigInt>),
}

/// `|K_g|` for gap `g` (below slot `g`); `None` for an infinite gap.
fn gap_length_form(br: &Branch, g: usize) -> Result<Option<AffineForm>> {
    let m = br.slots.len();
    let missing = || Error::Precondition(format!("branch has no gap at index {g}"));
    if m == 0 || g > m {
        return Err(missing());
    }
    if g == 0 {
        return match br.slots[0].left {
            Bound::At(_) => Ok(None),
            _ => Err(missing()),
        };
    }
    if g == m {
        return match br.slots[m - 1].right {
            Bound::At(_) => Ok(None),
            _ => Err(missing()),
        };
    }
    Ok(Some(br.gap_distance_form(g - 1).add_const(&BigInt::from(-2))))
}

/// Gap indices that exist in the branch: gap `g` lies below slot `g`, gap `m` above the last slot.
pub(crate) fn gap_indices(br: &Branch) -> Vec<usize> {
    (0..=br.slots.len()).filter(|&g| gap_length_form(br, g).is_ok()).collect()
}

fn require_monotone(f: &AffineForm, what: &str) -> Result<()> {
    if f.is_monotone() {
        Ok(())
    } else {
        Err(Error::NonMonotone(format!("{what} form {f} has a negative coefficient")))
    }
}

/// Whether `|K_gap| / |I_interval|` stays bounded over all `λ`.
pub fn ratio_boundedness(br: &Branch, gap: usize, interval: usize) -> Result<Ratio> {
    let slot = br
        .slots
        .get(interval)
        .ok_or_else(|| Error::Precondition(format!("interval index {interval} out of range")))?;
    let Some(g) = gap_length_form(br, gap)? else {
        return Ok(Ratio::Unbounded(vec![BigInt::zero(); br.vars]));
    };
    let Some(h) = slot.length_form() else {
        return Ok(Ratio::Bounded(BigInt::zero()));
    };
    require_monotone(&g, "gap length")?;
    require_monotone(&h, "interval length")?;
    let growing: Vec<BigInt> = g
        .coeffs
        .iter()
        .zip(&h.coeffs)
        .map(|(gj, hj)| if gj.is_positive() && hj.is_zero() { BigInt::one() } else { BigInt::zero() })
        .collect();
    if growing.iter().any(|x| !x.is_zero()) {
        return Ok(Ratio::Unbounded(growing));
    }
    let g0 = g.constant.clone().max(BigInt::zero());
    let per_var = g
        .coeffs
        .iter()
        .zip(&h.coeffs)
        .filter(|(_, hj)| hj.is_positive())
        .map(|(gj, hj)| BigRational::new(gj.clone(), hj.clone()))
        .max()
        .unwrap_or_else(BigRational::zero);
    let bound = if h.constant >= BigInt::one() {
        BigRational::new(g0, h.constant.clone()).max(per_var)
    } else {
        BigRational::from_integer(g0) + per_var
    };
    Ok(Ratio::Bounded(bound.ceil().to_integer()))
}

/// Two gaps that grow together against every interval between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaConstellation {
    pub gap_lo: usize,
    pub gap_hi: usize,
    /// Slots strictly between the two gaps.
    pub intervals: Vec<usize>,
    pub direction: Vec<BigInt>,
}

/// The pair of gaps with the fewest intervals between them, if any.
pub fn detect_omega_constellation(br: &Branch) -> Result<Option<OmegaConstellation>> {
    for s in &br.slots {
        if let Some(h) = s.length_form() {
            require_monotone(&h, "interval length")?;
        }
    }
    let gaps = gap_indices(br);
    let forms: Vec<Option<AffineForm>> = gaps.iter().map(|&g| gap_length_form(br, g)).collect::<Result<_>>()?;
    for f in forms.iter().flatten() {
        require_monotone(f, "gap length")?;
    }
    let mut best: Option<OmegaConstellation> = None;
    for (a, &g1) in gaps.iter().enumerate() {
        for (b, &g2) in gaps.iter().enumerate().skip(a + 1) {
            if best.as_ref().is_some_and(|c| c.gap_hi - c.gap_lo <= g2 - g1) {
                continue;
            }
            let between: Vec<usize> = (g1..g2).collect();
            let mut free = vec![true; br.vars];
            let mut bounded_interval = false;
            for &j in &between {
                match br.slots[j].length_form() {
                    None => bounded_interval = true,
                    Some(h) => {
                        for (v, c) in h.coeffs.iter().enumerate() {
                            if !c.is_zero() {
                                free[v] = false;
                            }
                        }
                    }
                }
            }
            if bounded_interval {
                continue;
            }
            let grows = |f: &Option<AffineForm>| match f {
                None => true,
                Some(f) => f.coeffs.iter().zip(&free).any(|(c, &z)| z && c.is_positive()),
            };
            if !grows(&forms[a]) || !grows(&forms[b]) {
                continue;
            }
            let direction = (0..br.vars)
                .map(|v| {
                    let pos = |f: &Option<AffineForm>| f.as_ref().is_some_and(|f| f.coeffs[v].is_positive());
                    if free[v] && (pos(&forms[a]) || pos(&forms[b])) {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect();
            best = Some(OmegaConstellation { gap_lo: g1, gap_hi: g2, intervals: between, direction });
        }
    }
    Ok(best)
}

/// A chain of intervals, each followed by its harbor, ending in a one-sided infinite interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarborChain {
    /// Interval indices in the concrete set.
    pub indices: Vec<usize>,
    pub intervals: Vec<Interval>,
    /// Smallest ρ ≥ 1 for which the chain is a ρ-chain.
    pub rho: BigRational,
    /// True when the chain ends in an interval unbounded to the left.
    pub negated: bool,
}

/// `max(|I|, 1)` for finite intervals.
pub(crate) fn eff_len(i: &Interval) -> Option<BigInt> {
    i.effective_length()
}

/// Nearest strictly longer interval on either side (smaller distance wins, left on ties).
fn harbor(items: &[Interval], i: usize) -> Option<usize> {
    let len = items[i].length()?;
    let longer = |j: &usize| items[*j].length().is_none_or(|l| l > len);
    let left = (0..i).rev().find(longer);
    let right = (i + 1..items.len()).find(longer);
    match (left, right) {
        (Some(l), Some(r)) => {
            let dl = items[l].distance(&items[i]).expect("disjoint");
            let dr = items[i].distance(&items[r]).expect("disjoint");
            Some(if dl <= dr { l } else { r })
        }
        (l, r) => l.or(r),
    }
}

/// Smallest `ρ ≥ 1` with `d(I_i, I_{i+1}) ≤ ρ·max(|I_i|, 1)` along the chain.
pub(crate) fn tight_rho(chain: &[Interval]) -> BigRational {
    let mut rho = BigRational::one();
    for w in chain.windows(2) {
        if let (Some(len), Some(d)) = (eff_len(&w[0]), w[0].distance(&w[1])) {
            rho = rho.max(BigRational::new(d, len));
        }
    }
    rho
}

/// Harbor chains of a concrete stride-free set: one per finite interval not already inside a
/// longer chain, plus lone chains for infinite intervals not reached by any chain.
/// Returns `None` when some finite interval has no harbor (the set has no infinite interval).
pub fn harbor_chains_concrete(a: &IntervalList) -> Option<Vec<HarborChain>> {
    let items = a.intervals();
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for i in 0..items.len() {
        let mut chain = vec![i];
        let mut cur = i;
        while items[cur].is_finite() {
            cur = harbor(items, cur)?;
            chain.push(cur);
        }
        chains.push(chain);
    }
    let keep: Vec<&Vec<usize>> = chains
        .iter()
        .filter(|c| !chains.iter().any(|o| o.len() > c.len() && o.ends_with(c)))
        .collect();
    Some(
        keep.into_iter()
            .map(|c| {
                let intervals: Vec<Interval> = c.iter().map(|&j| items[j].clone()).collect();
                let negated = intervals.last().is_some_and(|l| l.lo.is_none() && l.hi.is_some());
                HarborChain { indices: c.clone(), rho: tight_rho(&intervals), intervals, negated }
            })
            .collect(),
    )
}

/// Harbor chains of the branch's set at parameters `t`.
pub fn harbor_chains(br: &Branch, t: &[BigInt]) -> Result<Vec<HarborChain>> {
    let lambda = br
        .solve(t)
        .ok_or_else(|| Error::Precondition("parameters outside the branch image".into()))?;
    let set = IntervalList::from_intervals(br.slot_intervals(&lambda));
    harbor_chains_concrete(&set).ok_or_else(|| Error::Internal("a finite interval has no harbor".into()))
}
