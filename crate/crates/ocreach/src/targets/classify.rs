//! The three dichotomy classifiers and their constructive witnesses.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::ratio::{detect_omega_constellation, gap_indices, ratio_boundedness, OmegaConstellation, Ratio};
use super::residue::{lift_params, residue_split_set, ResidueKey};
use super::system::{AffineForm, Bound, Branch, LinearIntervalSystem};
use super::interval::{Interval, IntervalList};
use crate::arith::big_string;
use crate::automaton::Semantics;
use crate::error::{Error, Result};

/// Largest power of two tried when scaling a witness direction.
const MAX_SCALE_BITS: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Tractable,
    NpHard,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Tractable => "tractable",
            Side::NpHard => "np-hard",
        })
    }
}

/// Per-branch data of a tractable integer classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TractableBranch {
    pub key: ResidueKey,
    pub branch: usize,
    pub m: usize,
    /// Largest bounded gap-to-interval ratio of the branch.
    pub ratio_cap: BigInt,
    /// `2·max(R,1)·(m+1)`.
    pub rho: BigInt,
}

/// A residue-class branch with an ω-constellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationCandidate {
    pub key: ResidueKey,
    pub branch: Branch,
    pub constellation: OmegaConstellation,
}

/// A residue-class branch whose slot `slot` can be followed by an arbitrarily large gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VassGapCandidate {
    pub key: ResidueKey,
    pub branch: Branch,
    pub slot: usize,
    pub direction: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Tractable under integer or natural semantics.
    Integer { modulus: u64, branches: Vec<TractableBranch> },
    /// Tractable under VASS semantics: every class is `(δ, M)`-upward closed.
    Vass { delta: u64, m_bound: BigInt },
    /// NP-hard under integer or natural semantics.
    Isolation { modulus: u64, candidates: Vec<IsolationCandidate> },
    /// NP-hard under VASS semantics.
    UnboundedGap { modulus: u64, candidates: Vec<VassGapCandidate> },
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub semantics: Semantics,
    pub side: Side,
    /// Set when branch images may overlap; verdicts are then best effort.
    pub union_mode: bool,
    pub evidence: Evidence,
    /// The system that was classified (`S′ = S ∪ negatives` under natural semantics).
    pub system: LinearIntervalSystem,
    classes: BTreeMap<ResidueKey, LinearIntervalSystem>,
}

impl Classification {
    /// Stride lcm used for the residue split.
    pub fn modulus(&self) -> u64 {
        match &self.evidence {
            Evidence::Integer { modulus, .. }
            | Evidence::Isolation { modulus, .. }
            | Evidence::UnboundedGap { modulus, .. } => *modulus,
            Evidence::Vass { delta, .. } => *delta,
        }
    }

    /// `[S]_{B,key}` for the classification modulus.
    pub fn class_system(&self, key: &[u64]) -> Option<&LinearIntervalSystem> {
        self.classes.get(key)
    }

    pub fn to_json(&self) -> Value {
        let evidence = match &self.evidence {
            Evidence::Integer { modulus, branches } => json!({
                "kind": "harbor-chains",
                "modulus": modulus,
                "branches": branches.iter().map(|b| json!({
                    "residues": b.key, "branch": b.branch, "m": b.m,
                    "ratio_cap": big_string(&b.ratio_cap), "rho": big_string(&b.rho),
                })).collect::<Vec<_>>(),
            }),
            Evidence::Vass { delta, m_bound } => json!({
                "kind": "upward-closed",
                "delta": delta,
                "M": big_string(m_bound),
            }),
            Evidence::Isolation { modulus, candidates } => json!({
                "kind": "unbounded-isolation",
                "modulus": modulus,
                "candidates": candidates.iter().map(|c| json!({
                    "residues": c.key,
                    "gaps": [c.constellation.gap_lo, c.constellation.gap_hi],
                    "intervals": c.constellation.intervals,
                    "direction": c.constellation.direction.iter().map(big_string).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
            Evidence::UnboundedGap { modulus, candidates } => json!({
                "kind": "unbounded-gap",
                "modulus": modulus,
                "candidates": candidates.iter().map(|c| json!({
                    "residues": c.key,
                    "slot": c.slot,
                    "direction": c.direction.iter().map(big_string).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
        };
        json!({
            "semantics": self.semantics.name(),
            "side": self.side.to_string(),
            "union_mode": self.union_mode,
            "evidence": evidence,
        })
    }
}

/// Decides on which side of the dichotomy for `sem` the system lies.
pub fn classify(s: &LinearIntervalSystem, sem: Semantics) -> Result<Classification> {
    s.validate()?;
    match sem {
        Semantics::Integer => classify_integer(s.clone(), sem),
        Semantics::Natural => classify_integer(with_negatives(s)?, sem),
        Semantics::Vass => classify_vass(s),
    }
}

/// `S′ = S ∪ (ℤ^p × ℤ_{<0})` on the parameter images of the branches.
pub(crate) fn with_negatives(s: &LinearIntervalSystem) -> Result<LinearIntervalSystem> {
    let mut branches = Vec::new();
    for b in &s.branches {
        branches.extend(b.with_negatives()?);
    }
    Ok(LinearIntervalSystem { p: s.p, branches })
}

fn classify_integer(sys: LinearIntervalSystem, sem: Semantics) -> Result<Classification> {
    let modulus = sys.stride_lcm();
    let classes = residue_split_set(&sys, modulus)?;
    let union_mode = sys.union_mode();
    let mut candidates = Vec::new();
    let mut tractable = Vec::new();
    for (key, class) in &classes {
        for (idx, br) in class.branches.iter().enumerate() {
            match detect_omega_constellation(br)? {
                Some(c) => candidates.push(IsolationCandidate { key: key.clone(), branch: br.clone(), constellation: c }),
                None => {
                    let mut cap = BigInt::zero();
                    for g in gap_indices(br) {
                        for j in 0..br.slots.len() {
                            if let Ratio::Bounded(r) = ratio_boundedness(br, g, j)? {
                                cap = cap.max(r);
                            }
                        }
                    }
                    let m = br.slots.len();
                    let rho = BigInt::from(2) * cap.clone().max(BigInt::one()) * BigInt::from(m + 1);
                    tractable.push(TractableBranch { key: key.clone(), branch: idx, m, ratio_cap: cap, rho });
                }
            }
        }
    }
    let mut cls = Classification {
        semantics: sem,
        side: Side::Tractable,
        union_mode,
        evidence: Evidence::Integer { modulus, branches: tractable },
        system: sys,
        classes,
    };
    if candidates.is_empty() {
        return Ok(cls);
    }
    let verified: Vec<IsolationCandidate> =
        candidates.iter().filter(|c| isolation_from(&cls, c, &BigInt::from(2)).is_some()).cloned().collect();
    if verified.is_empty() {
        if union_mode {
            return Ok(cls);
        }
        return Err(Error::Internal("an isolation candidate failed verification".into()));
    }
    cls.side = Side::NpHard;
    cls.evidence = Evidence::Isolation { modulus, candidates: verified };
    Ok(cls)
}

/// True when the form is negative for every `λ ∈ ℕ^k`.
fn always_negative(f: &AffineForm) -> bool {
    f.constant.is_negative() && f.coeffs.iter().all(|c| !c.is_positive())
}

/// Variables with a positive coefficient in any of the forms.
fn positive_support(forms: &[&AffineForm], vars: usize) -> Vec<BigInt> {
    (0..vars)
        .map(|v| if forms.iter().any(|f| f.coeffs[v].is_positive()) { BigInt::one() } else { BigInt::zero() })
        .collect()
}

fn classify_vass(s: &LinearIntervalSystem) -> Result<Classification> {
    let modulus = s.stride_lcm();
    let classes = residue_split_set(s, modulus)?;
    let union_mode = s.union_mode();
    let mut candidates = Vec::new();
    let mut m_bound = BigInt::zero();
    for (key, class) in &classes {
        for br in &class.branches {
            let relevant: Vec<usize> = (0..br.slots.len())
                .filter(|&j| !br.slots[j].right.form().is_some_and(always_negative))
                .collect();
            let Some(&last) = relevant.last() else { continue };
            if let Bound::At(r) = &br.slots[last].right {
                let direction = if r.constant.is_negative() { positive_support(&[r], br.vars) } else { vec![BigInt::zero(); br.vars] };
                candidates.push(VassGapCandidate { key: key.clone(), branch: br.clone(), slot: last, direction });
            }
            for &j in relevant.iter().filter(|&&j| j + 1 < br.slots.len()) {
                let g = br.gap_distance_form(j);
                if g.is_constant() {
                    m_bound += &g.constant - 1;
                } else {
                    let r = br.slots[j].right.form().expect("inner slot");
                    let direction = positive_support(&[&g, r], br.vars);
                    candidates.push(VassGapCandidate { key: key.clone(), branch: br.clone(), slot: j, direction });
                }
            }
        }
    }
    let mut cls = Classification {
        semantics: Semantics::Vass,
        side: Side::Tractable,
        union_mode,
        evidence: Evidence::Vass { delta: modulus, m_bound },
        system: s.clone(),
        classes,
    };
    if candidates.is_empty() {
        return Ok(cls);
    }
    let verified: Vec<VassGapCandidate> =
        candidates.iter().filter(|c| gap_from(&cls, c, &BigInt::from(2)).is_some()).cloned().collect();
    if verified.is_empty() {
        if union_mode {
            return Ok(cls);
        }
        return Err(Error::Internal("an unbounded-gap candidate failed verification".into()));
    }
    cls.side = Side::NpHard;
    cls.evidence = Evidence::UnboundedGap { modulus, candidates: verified };
    Ok(cls)
}

/// Smallest `c ≥ 0` satisfying a predicate that is monotone in `c`.
fn minimal_scale(pred: impl Fn(&BigInt) -> bool) -> Option<BigInt> {
    if pred(&BigInt::zero()) {
        return Some(BigInt::zero());
    }
    let mut hi = BigInt::one();
    let mut bits = 0;
    while !pred(&hi) {
        bits += 1;
        if bits > MAX_SCALE_BITS {
            return None;
        }
        hi <<= 1;
    }
    let mut lo = &hi >> 1u32;
    // pred(lo) false (or lo = 0), pred(hi) true
    while &hi - &lo > BigInt::one() {
        let mid = (&lo + &hi) >> 1u32;
        if pred(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn scaled(direction: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    direction.iter().map(|d| d * c).collect()
}

/// Number of integers strictly inside gap `g` at `λ`; `None` when the gap is infinite.
fn gap_points(br: &Branch, g: usize, lambda: &[BigInt]) -> Option<BigInt> {
    if g == 0 || g == br.slots.len() {
        return None;
    }
    Some(br.gap_distance_form(g - 1).eval(lambda) - 1)
}

fn at_least(v: Option<BigInt>, bound: &BigInt) -> bool {
    v.is_none_or(|v| &v >= bound)
}

/// `(t, x, k, ℓ)` with `S[t] ∩ [x, x+ℓ−1] ∋ x+k` and empty `δ`-neighbourhoods on both sides.
///
/// `x` and `ℓ` are in the coordinates of the residue class `[S]_{B,(r,b)}`; `x_original = B·x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationWitness {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub b: u64,
    pub class_params: Vec<BigInt>,
    pub t: Vec<BigInt>,
    pub x: BigInt,
    pub k: BigInt,
    pub ell: BigInt,
    pub x_original: BigInt,
}

impl IsolationWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t.iter().map(big_string).collect::<Vec<_>>(),
            "x": big_string(&self.x_original),
            "k": big_string(&self.k),
            "ell": big_string(&self.ell),
            "modulus": self.modulus,
            "class_x": big_string(&self.x),
        })
    }
}

/// Checks the three isolation conditions on a concrete class set.
pub(crate) fn check_isolation(c: &IntervalList, x: &BigInt, k: &BigInt, ell: &BigInt, delta: &BigInt) -> bool {
    let one = BigInt::one();
    c.contains(&(x + k))
        && k < ell
        && !k.is_negative()
        && c.count_within(&(x - delta), &(x - &one)).is_zero()
        && c.count_within(&(x + ell), &(x + ell + delta)).is_zero()
}

fn class_set(cls: &Classification, key: &[u64], s: &[BigInt]) -> Option<IntervalList> {
    let set = cls.classes.get(key)?.instantiate(s).ok()?;
    set.as_stride_free().cloned()
}

fn isolation_from(cls: &Classification, cand: &IsolationCandidate, delta: &BigInt) -> Option<IsolationWitness> {
    let br = &cand.branch;
    let c = &cand.constellation;
    let dir = &c.direction;
    let wide = |k: &BigInt| {
        let lam = scaled(dir, k);
        at_least(gap_points(br, c.gap_lo, &lam), delta) && at_least(gap_points(br, c.gap_hi, &lam), &(delta + 1))
    };
    let scale = minimal_scale(wide)?;
    let lam = scaled(dir, &scale);
    let x = br.slots[c.gap_lo].left.form()?.eval(&lam);
    let last = br.slots[c.gap_hi - 1].right.form()?.eval(&lam);
    let ell = &last - &x + 1;
    let s = br.params(&lam);
    let p = s.len();
    let set = class_set(cls, &cand.key, &s)?;
    let k = BigInt::zero();
    if !check_isolation(&set, &x, &k, &ell, delta) {
        return None;
    }
    let modulus = cls.modulus();
    let b = cand.key[p];
    Some(IsolationWitness {
        modulus,
        residues: cand.key[..p].to_vec(),
        b,
        t: lift_params(&s, modulus, &cand.key[..p]),
        class_params: s,
        x_original: &x * BigInt::from(modulus) + BigInt::from(b),
        x,
        k,
        ell,
    })
}

/// An isolation witness for `δ`, scaled along the stored direction and verified.
pub fn isolation_witness(cls: &Classification, delta: &BigInt) -> Result<IsolationWitness> {
    if !delta.is_positive() {
        return Err(Error::Precondition("delta must be positive".into()));
    }
    let Evidence::Isolation { candidates, .. } = &cls.evidence else {
        return Err(Error::Precondition("isolation witnesses exist only on the NP-hard side".into()));
    };
    candidates
        .iter()
        .find_map(|c| isolation_from(cls, c, delta))
        .ok_or_else(|| Error::Internal(format!("no verified isolation witness for delta {delta}")))
}

/// A hard pair for `δ`: the isolation witness with its conditions re-checked on the instantiated set.
pub fn hard_pair(cls: &Classification, delta: &BigInt) -> Result<IsolationWitness> {
    let w = isolation_witness(cls, delta)?;
    let key: Vec<u64> = w.residues.iter().copied().chain([w.b]).collect();
    let set = class_set(cls, &key, &w.class_params).ok_or_else(|| Error::Internal("class set unavailable".into()))?;
    if !check_isolation(&set, &w.x, &w.k, &w.ell, delta) {
        return Err(Error::Internal("hard pair failed verification".into()));
    }
    Ok(w)
}

/// `(t, u, g)` with `[u, u+g] ∩ S[t] = {u}` and `u ≥ 0`, in residue-class coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWitness {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub b: u64,
    pub class_params: Vec<BigInt>,
    pub t: Vec<BigInt>,
    pub u: BigInt,
    pub g: BigInt,
    pub u_original: BigInt,
}

pub(crate) fn check_gap(c: &IntervalList, u: &BigInt, g: &BigInt) -> bool {
    !u.is_negative()
        && c.contains(u)
        && c.intersect_interval(&Interval::finite(u.clone(), u + g)) == IntervalList::from_intervals([Interval::point(u.clone())])
}

fn gap_from(cls: &Classification, cand: &VassGapCandidate, g: &BigInt) -> Option<GapWitness> {
    let br = &cand.branch;
    let right = br.slots[cand.slot].right.form()?;
    let ok = |k: &BigInt| {
        let lam = scaled(&cand.direction, k);
        !right.eval(&lam).is_negative() && at_least(gap_points(br, cand.slot + 1, &lam), g)
    };
    let scale = minimal_scale(ok)?;
    let lam = scaled(&cand.direction, &scale);
    let u = right.eval(&lam);
    let s = br.params(&lam);
    let p = s.len();
    let set = class_set(cls, &cand.key, &s)?;
    if !check_gap(&set, &u, g) {
        return None;
    }
    let modulus = cls.modulus();
    let b = cand.key[p];
    Some(GapWitness {
        modulus,
        residues: cand.key[..p].to_vec(),
        b,
        t: lift_params(&s, modulus, &cand.key[..p]),
        class_params: s,
        u_original: &u * BigInt::from(modulus) + BigInt::from(b),
        u,
        g: g.clone(),
    })
}

/// An unbounded-gap witness with gap at least `g`.
pub fn unbounded_gap_witness(cls: &Classification, g: &BigInt) -> Result<GapWitness> {
    let Evidence::UnboundedGap { candidates, .. } = &cls.evidence else {
        return Err(Error::Precondition("gap witnesses exist only on the NP-hard VASS side".into()));
    };
    candidates
        .iter()
        .find_map(|c| gap_from(cls, c, g))
        .ok_or_else(|| Error::Internal(format!("no verified gap witness for g = {g}")))
}
