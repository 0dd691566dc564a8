//! Concrete integer interval sets, their canonical decomposition and local densities.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{big_string, ceil_div, floor_div, lcm_u64, modulo};
use crate::error::{Error, Result};

/// A nonempty integer interval; `None` endpoints stand for −∞ (`lo`) and +∞ (`hi`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Option<BigInt>,
    pub hi: Option<BigInt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalType {
    Finite,
    LeftInfinite,
    RightInfinite,
    Full,
}

impl fmt::Display for IntervalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalType::Finite => "1",
            IntervalType::LeftInfinite => "-inf",
            IntervalType::RightInfinite => "inf",
            IntervalType::Full => "2inf",
        })
    }
}

/// Compares lower endpoints, −∞ first.
fn cmp_lo(a: &Option<BigInt>, b: &Option<BigInt>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Compares upper endpoints, +∞ last.
fn cmp_hi(a: &Option<BigInt>, b: &Option<BigInt>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

impl Interval {
    pub fn new(lo: Option<BigInt>, hi: Option<BigInt>) -> Self {
        Interval { lo, hi }
    }

    pub fn finite(lo: impl Into<BigInt>, hi: impl Into<BigInt>) -> Self {
        Interval { lo: Some(lo.into()), hi: Some(hi.into()) }
    }

    pub fn point(x: impl Into<BigInt>) -> Self {
        let x = x.into();
        Interval { lo: Some(x.clone()), hi: Some(x) }
    }

    pub fn at_least(lo: impl Into<BigInt>) -> Self {
        Interval { lo: Some(lo.into()), hi: None }
    }

    pub fn at_most(hi: impl Into<BigInt>) -> Self {
        Interval { lo: None, hi: Some(hi.into()) }
    }

    pub fn all() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn is_empty(&self) -> bool {
        matches!((&self.lo, &self.hi), (Some(l), Some(h)) if l > h)
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn kind(&self) -> IntervalType {
        match (&self.lo, &self.hi) {
            (Some(_), Some(_)) => IntervalType::Finite,
            (None, Some(_)) => IntervalType::LeftInfinite,
            (Some(_), None) => IntervalType::RightInfinite,
            (None, None) => IntervalType::Full,
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.lo.as_ref().is_none_or(|l| l <= x) && self.hi.as_ref().is_none_or(|h| x <= h)
    }

    /// Largest minus smallest element; `None` when infinite.
    pub fn length(&self) -> Option<BigInt> {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => Some(h - l),
            _ => None,
        }
    }

    /// Length with singletons counted as 1.
    pub fn effective_length(&self) -> Option<BigInt> {
        self.length().map(|l| l.max(BigInt::one()))
    }

    pub fn negate(&self) -> Self {
        Interval { lo: self.hi.as_ref().map(|h| -h), hi: self.lo.as_ref().map(|l| -l) }
    }

    pub fn shift(&self, c: &BigInt) -> Self {
        Interval { lo: self.lo.as_ref().map(|l| l + c), hi: self.hi.as_ref().map(|h| h + c) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if cmp_lo(&self.lo, &other.lo) == Ordering::Less { other.lo.clone() } else { self.lo.clone() };
        let hi = if cmp_hi(&self.hi, &other.hi) == Ordering::Greater { other.hi.clone() } else { self.hi.clone() };
        let r = Interval { lo, hi };
        (!r.is_empty()).then_some(r)
    }

    /// True if every element of `self` is smaller than every element of `other`.
    pub fn is_left_of(&self, other: &Interval) -> bool {
        match (&self.hi, &other.lo) {
            (Some(h), Some(l)) => h < l,
            _ => false,
        }
    }

    /// Distance between disjoint intervals: smallest element of the right one minus largest of the left one.
    pub fn distance(&self, other: &Interval) -> Option<BigInt> {
        if self.is_left_of(other) {
            Some(other.lo.as_ref()? - self.hi.as_ref()?)
        } else if other.is_left_of(self) {
            Some(self.lo.as_ref()? - other.hi.as_ref()?)
        } else {
            None
        }
    }

    /// Number of elements in `self ∩ [lo, hi]`.
    pub fn count_within(&self, lo: &BigInt, hi: &BigInt) -> BigInt {
        let a = self.lo.as_ref().map_or(lo.clone(), |l| l.max(lo).clone());
        let b = self.hi.as_ref().map_or(hi.clone(), |h| h.min(hi).clone());
        if a > b {
            BigInt::zero()
        } else {
            b - a + 1
        }
    }

    pub fn to_json(&self) -> Value {
        let e = |x: &Option<BigInt>, inf: &str| x.as_ref().map_or(json!(inf), big_string);
        json!([e(&self.lo, "-inf"), e(&self.hi, "+inf")])
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => write!(f, "[{l},{h}]"),
            (None, Some(h)) => write!(f, "(-inf,{h}]"),
            (Some(l), None) => write!(f, "[{l},inf)"),
            (None, None) => write!(f, "(-inf,inf)"),
        }
    }
}

/// A union of integer intervals kept sorted, disjoint and maximal (consecutive distance ≥ 2).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalList {
    items: Vec<Interval>,
}

impl IntervalList {
    pub fn empty() -> Self {
        IntervalList { items: Vec::new() }
    }

    pub fn all() -> Self {
        IntervalList { items: vec![Interval::all()] }
    }

    pub fn from_intervals(items: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = items.into_iter().filter(|i| !i.is_empty()).collect();
        v.sort_by(|a, b| cmp_lo(&a.lo, &b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            if let Some(last) = out.last_mut() {
                let touches = match (&last.hi, &iv.lo) {
                    (None, _) | (_, None) => true,
                    (Some(h), Some(l)) => l <= &(h + 1),
                };
                if touches {
                    if cmp_hi(&iv.hi, &last.hi) == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntervalList { items: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_all(&self) -> bool {
        self.items.len() == 1 && self.items[0].kind() == IntervalType::Full
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        let idx = self.items.partition_point(|iv| iv.hi.as_ref().is_some_and(|h| h < x));
        self.items.get(idx).is_some_and(|iv| iv.contains(x))
    }

    pub fn union(&self, other: &IntervalList) -> IntervalList {
        IntervalList::from_intervals(self.items.iter().chain(other.items.iter()).cloned())
    }

    pub fn intersect_interval(&self, w: &Interval) -> IntervalList {
        IntervalList { items: self.items.iter().filter_map(|iv| iv.intersect(w)).collect() }
    }

    pub fn intersect(&self, other: &IntervalList) -> IntervalList {
        let mut out = Vec::new();
        for a in &self.items {
            for b in &other.items {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalList::from_intervals(out)
    }

    pub fn intersects_interval(&self, w: &Interval) -> bool {
        self.items.iter().any(|iv| iv.intersect(w).is_some())
    }

    pub fn negate(&self) -> IntervalList {
        IntervalList::from_intervals(self.items.iter().rev().map(Interval::negate))
    }

    pub fn shift(&self, c: &BigInt) -> IntervalList {
        IntervalList { items: self.items.iter().map(|iv| iv.shift(c)).collect() }
    }

    /// The complement, as maximal intervals.
    pub fn gaps(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut prev_hi: Option<BigInt> = None;
        for (i, iv) in self.items.iter().enumerate() {
            if let Some(l) = &iv.lo {
                let lo = if i == 0 { None } else { prev_hi.as_ref().map(|h| h + 1) };
                out.push(Interval { lo, hi: Some(l - 1) });
            }
            match &iv.hi {
                None => return out,
                Some(h) => prev_hi = Some(h.clone()),
            }
        }
        match prev_hi {
            None => vec![Interval::all()],
            Some(h) => {
                out.push(Interval::at_least(h + 1));
                out
            }
        }
    }

    pub fn complement(&self) -> IntervalList {
        IntervalList::from_intervals(self.gaps())
    }

    /// Number of elements in `[lo, hi]`.
    pub fn count_within(&self, lo: &BigInt, hi: &BigInt) -> BigInt {
        self.items.iter().map(|iv| iv.count_within(lo, hi)).sum()
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.items.first().and_then(|iv| iv.lo.as_ref())
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.items.last().and_then(|iv| iv.hi.as_ref())
    }

    /// The preimage `{ u : k·u + d ∈ self }` for `k > 0`.
    pub fn preimage_affine(&self, k: &BigInt, d: &BigInt) -> IntervalList {
        IntervalList::from_intervals(self.items.iter().map(|iv| Interval {
            lo: iv.lo.as_ref().map(|l| ceil_div(&(l - d), k)),
            hi: iv.hi.as_ref().map(|h| floor_div(&(h - d), k)),
        }))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.items.iter().map(Interval::to_json).collect())
    }
}

impl fmt::Display for IntervalList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.items.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(" u "))
    }
}

/// `(intervals, gaps, type tuple)` of a stride-free set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalDecomposition {
    pub intervals: Vec<Interval>,
    pub gaps: Vec<Interval>,
    pub types: Vec<IntervalType>,
}

pub fn canonical_decomposition(a: &IntervalList) -> CanonicalDecomposition {
    let intervals = a.intervals().to_vec();
    let gaps = if a.is_empty() { Vec::new() } else { a.gaps() };
    let types = intervals.iter().map(Interval::kind).collect();
    CanonicalDecomposition { intervals, gaps, types }
}

/// A concrete set `{ B·u + c : u ∈ classes[c] }` over residues `c` modulo `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteIntervalSet {
    modulus: u64,
    classes: Vec<IntervalList>,
}

impl ConcreteIntervalSet {
    pub fn stride_free(list: IntervalList) -> Self {
        ConcreteIntervalSet { modulus: 1, classes: vec![list] }
    }

    pub fn empty() -> Self {
        Self::stride_free(IntervalList::empty())
    }

    pub fn point(x: impl Into<BigInt>) -> Self {
        Self::stride_free(IntervalList::from_intervals([Interval::point(x)]))
    }

    pub fn from_intervals(items: impl IntoIterator<Item = Interval>) -> Self {
        Self::stride_free(IntervalList::from_intervals(items))
    }

    /// The set `{ B·u + c : u ∈ list }`.
    pub fn strided(modulus: u64, residue: u64, list: IntervalList) -> Result<Self> {
        if modulus == 0 || residue >= modulus {
            return Err(Error::InvalidTarget(format!("bad stride ({modulus},{residue})")));
        }
        let mut classes = vec![IntervalList::empty(); modulus as usize];
        classes[residue as usize] = list;
        Ok(ConcreteIntervalSet { modulus, classes })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The quotient set `{ u : B·u + c ∈ self }` for the current modulus `B`.
    pub fn class(&self, c: u64) -> &IntervalList {
        &self.classes[c as usize]
    }

    /// The set itself when the modulus is 1.
    pub fn as_stride_free(&self) -> Option<&IntervalList> {
        (self.modulus == 1).then(|| &self.classes[0])
    }

    pub fn is_empty(&self) -> bool {
        self.classes.iter().all(IntervalList::is_empty)
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        let c = modulo(x, self.modulus);
        let u = (x - BigInt::from(c)) / BigInt::from(self.modulus);
        self.classes[c as usize].contains(&u)
    }

    /// Re-expresses the set over a modulus that is a multiple of the current one.
    pub fn with_modulus(&self, target: u64) -> Result<Self> {
        if target == 0 || target % self.modulus != 0 {
            return Err(Error::Precondition(format!("modulus {target} is not a multiple of {}", self.modulus)));
        }
        let k = BigInt::from(target / self.modulus);
        let b = BigInt::from(self.modulus);
        let classes = (0..target)
            .map(|c2| {
                let c = c2 % self.modulus;
                let d = (BigInt::from(c2) - BigInt::from(c)) / &b;
                self.classes[c as usize].preimage_affine(&k, &d)
            })
            .collect();
        Ok(ConcreteIntervalSet { modulus: target, classes })
    }

    pub fn union(&self, other: &ConcreteIntervalSet) -> ConcreteIntervalSet {
        let m = lcm_u64(self.modulus, other.modulus);
        let a = self.with_modulus(m).expect("lcm is a multiple");
        let b = other.with_modulus(m).expect("lcm is a multiple");
        let classes = a.classes.iter().zip(&b.classes).map(|(x, y)| x.union(y)).collect();
        ConcreteIntervalSet { modulus: m, classes }
    }

    /// Elements in the window `[lo, hi]` (for small windows).
    pub fn points_within(&self, lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut x = lo.clone();
        while &x <= hi {
            if self.contains(&x) {
                out.push(x.clone());
            }
            x += 1;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "modulus": self.modulus,
            "classes": self.classes.iter().map(IntervalList::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for ConcreteIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 1 {
            return write!(f, "{}", self.classes[0]);
        }
        let parts: Vec<String> = self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(c, l)| format!("{}*({l})+{c}", self.modulus))
            .collect();
        f.write_str(&parts.join(" u "))
    }
}

/// Number of `j ∈ [−n, n]` with `x + k·j ∈ a`.
fn progression_count(a: &ConcreteIntervalSet, x: &BigInt, k: &BigInt, n: &BigInt) -> BigInt {
    let b = a.modulus();
    let bb = BigInt::from(b);
    let mut total = BigInt::zero();
    for j0 in 0..b {
        let start = x + k * BigInt::from(j0);
        let c = modulo(&start, b);
        let u0 = (&start - BigInt::from(c)) / &bb;
        // j = j0 + B·i with |j| ≤ n, and u = u0 + k·i.
        let i_lo = ceil_div(&(-n - BigInt::from(j0)), &bb);
        let i_hi = floor_div(&(n - BigInt::from(j0)), &bb);
        if i_lo > i_hi {
            continue;
        }
        for iv in a.class(c).intervals() {
            let lo = iv.lo.as_ref().map_or(i_lo.clone(), |l| ceil_div(&(l - &u0), k).max(i_lo.clone()));
            let hi = iv.hi.as_ref().map_or(i_hi.clone(), |h| floor_div(&(h - &u0), k).min(i_hi.clone()));
            if lo <= hi {
                total += hi - lo + 1;
            }
        }
    }
    total
}

/// `|a ∩ (x + k·[−n, n])| / (2n + 1)` as an exact rational.
pub fn density_at(a: &ConcreteIntervalSet, x: &BigInt, k: &BigInt, n: &BigInt) -> Result<BigRational> {
    if k <= &BigInt::zero() || n <= &BigInt::zero() {
        return Err(Error::Precondition("density needs k ≥ 1 and n ≥ 1".into()));
    }
    let count = progression_count(a, x, k, n);
    Ok(BigRational::new(count, BigInt::from(2) * n + 1))
}

/// The same fraction for progressions that stay inside ℕ (requires `x − k·n ≥ 0`).
pub fn density_plus_at(a: &ConcreteIntervalSet, x: &BigInt, k: &BigInt, n: &BigInt) -> Result<BigRational> {
    if k <= &BigInt::zero() || n < &BigInt::zero() {
        return Err(Error::Precondition("density needs k ≥ 1 and n ≥ 0".into()));
    }
    if x - k * n < BigInt::zero() {
        return Err(Error::Precondition("progression leaves the natural numbers (x − k·n < 0)".into()));
    }
    let count = progression_count(a, x, k, n);
    Ok(BigRational::new(count, BigInt::from(2) * n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn s3_at_5() -> ConcreteIntervalSet {
        ConcreteIntervalSet::from_intervals([Interval::at_most(0), Interval::finite(5, 10)])
    }

    #[test]
    fn canonical_decomposition_examples() {
        let a = IntervalList::from_intervals([Interval::at_most(0), Interval::finite(3, 6), Interval::finite(8, 10)]);
        let d = canonical_decomposition(&a);
        assert_eq!(d.gaps, vec![Interval::finite(1, 2), Interval::point(7), Interval::at_least(11)]);
        assert_eq!(d.types, vec![IntervalType::LeftInfinite, IntervalType::Finite, IntervalType::Finite]);

        let z = canonical_decomposition(&IntervalList::all());
        assert_eq!(z.types, vec![IntervalType::Full]);
        assert!(z.gaps.is_empty());

        let merged = IntervalList::from_intervals([Interval::finite(0, 2), Interval::finite(3, 4)]);
        assert_eq!(merged.intervals(), &[Interval::finite(0, 4)]);
    }

    #[test]
    fn gaps_of_one_sided_sets() {
        let a = IntervalList::from_intervals([Interval::at_least(0)]);
        assert_eq!(a.gaps(), vec![Interval::at_most(-1)]);
        let e = IntervalList::empty();
        assert_eq!(e.gaps(), vec![Interval::all()]);
    }

    #[test]
    fn density_examples() {
        let a = s3_at_5();
        assert_eq!(density_at(&a, &b(10), &b(1), &b(10)).unwrap(), BigRational::new(b(7), b(21)));
        assert_eq!(density_at(&a, &b(0), &b(1), &b(4)).unwrap(), BigRational::new(b(5), b(9)));
        let z = ConcreteIntervalSet::stride_free(IntervalList::all());
        assert_eq!(density_at(&z, &b(-3), &b(7), &b(11)).unwrap(), BigRational::one());
    }

    #[test]
    fn density_plus_examples() {
        let a = ConcreteIntervalSet::from_intervals([Interval::finite(5, 10)]);
        assert_eq!(density_plus_at(&a, &b(5), &b(1), &b(5)).unwrap(), BigRational::new(b(6), b(11)));
        let t4 = ConcreteIntervalSet::from_intervals([Interval::finite(4, 8)]);
        assert_eq!(density_plus_at(&t4, &b(4), &b(1), &b(4)).unwrap(), BigRational::new(b(5), b(9)));
        assert_eq!(density_plus_at(&t4, &b(6), &b(3), &b(0)).unwrap(), BigRational::one());
        assert!(density_plus_at(&t4, &b(1), &b(1), &b(2)).is_err());
    }

    #[test]
    fn strided_counting_matches_membership() {
        let odd = ConcreteIntervalSet::strided(2, 1, IntervalList::from_intervals([Interval::at_least(0)])).unwrap();
        let evens_neg = ConcreteIntervalSet::strided(2, 0, IntervalList::from_intervals([Interval::at_most(0)])).unwrap();
        let s1 = odd.union(&evens_neg);
        for x in -6..7 {
            for k in 1..4 {
                for n in 1..6 {
                    let direct = (-n..=n).filter(|j| s1.contains(&b(x + k * j))).count();
                    let got = density_at(&s1, &b(x), &b(k), &b(n)).unwrap();
                    assert_eq!(got, BigRational::new(b(direct as i64), b(2 * n + 1)));
                }
            }
        }
    }

    #[test]
    fn modulus_refinement_preserves_membership() {
        let s = ConcreteIntervalSet::strided(2, 1, IntervalList::from_intervals([Interval::finite(-3, 4)])).unwrap();
        let r = s.with_modulus(6).unwrap();
        for x in -20..20 {
            assert_eq!(s.contains(&b(x)), r.contains(&b(x)), "x = {x}");
        }
    }
}
