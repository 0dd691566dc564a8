//! Boolean Laurent polynomials `𝔹[X, X⁻¹]` as interval lists, the congruence `≡_{ρ,t}` of a
//! building-block instance, and the integer and natural reachability pipelines.

mod pipeline;

pub use pipeline::{reach_integer, reach_integer_with, reach_natural, reach_natural_with, Method, ReachOptions, ReachOutcome};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::big_string;
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::targets::{ConcreteIntervalSet, Interval, IntervalList};

/// Default cap on the total number of intervals held by exact propagation.
pub const DEFAULT_EXACT_GUARD: usize = 1_000_000;
/// Automata up to this many states use repeated squaring; larger ones use row propagation.
const SQUARING_LIMIT: usize = 64;

/// A finite set of integers stored as sorted maximal intervals (gaps of at least 2).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalPolynomial {
    parts: Vec<(BigInt, BigInt)>,
}

impl IntervalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `X⁰`.
    pub fn one() -> Self {
        Self::monomial(BigInt::zero())
    }

    pub fn monomial(k: BigInt) -> Self {
        IntervalPolynomial { parts: vec![(k.clone(), k)] }
    }

    /// `X^{[i,j]}` (zero when `i > j`).
    pub fn range(i: BigInt, j: BigInt) -> Self {
        Self::from_intervals(vec![(i, j)])
    }

    /// Canonical form of an arbitrary list of (possibly empty or overlapping) intervals.
    pub fn from_intervals(mut items: Vec<(BigInt, BigInt)>) -> Self {
        items.retain(|(a, b)| a <= b);
        items.sort();
        let mut parts: Vec<(BigInt, BigInt)> = Vec::with_capacity(items.len());
        for (a, b) in items {
            match parts.last_mut() {
                Some((_, hi)) if a <= &*hi + 1 => {
                    if b > *hi {
                        *hi = b;
                    }
                }
                _ => parts.push((a, b)),
            }
        }
        IntervalPolynomial { parts }
    }

    pub fn from_points(points: impl IntoIterator<Item = BigInt>) -> Self {
        Self::from_intervals(points.into_iter().map(|p| (p.clone(), p)).collect())
    }

    pub fn from_small(items: &[(i64, i64)]) -> Self {
        Self::from_intervals(items.iter().map(|&(a, b)| (BigInt::from(a), BigInt::from(b))).collect())
    }

    pub fn intervals(&self) -> &[(BigInt, BigInt)] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        let idx = self.parts.partition_point(|(a, _)| a <= x);
        idx > 0 && x <= &self.parts[idx - 1].1
    }

    /// Largest element `≤ x`.
    fn max_at_most(&self, x: &BigInt) -> Option<BigInt> {
        let idx = self.parts.partition_point(|(a, _)| a <= x);
        (idx > 0).then(|| self.parts[idx - 1].1.clone().min(x.clone()))
    }

    pub fn min(&self) -> Option<&BigInt> {
        self.parts.first().map(|p| &p.0)
    }

    pub fn max(&self) -> Option<&BigInt> {
        self.parts.last().map(|p| &p.1)
    }

    pub fn negate(&self) -> Self {
        IntervalPolynomial { parts: self.parts.iter().rev().map(|(a, b)| (-b, -a)).collect() }
    }

    pub fn shift(&self, c: &BigInt) -> Self {
        IntervalPolynomial { parts: self.parts.iter().map(|(a, b)| (a + c, b + c)).collect() }
    }

    pub fn to_interval_list(&self) -> IntervalList {
        IntervalList::from_intervals(self.parts.iter().map(|(a, b)| Interval::finite(a.clone(), b.clone())))
    }

    pub fn intersects(&self, target: &IntervalList) -> bool {
        self.parts.iter().any(|(a, b)| target.intersects_interval(&Interval::finite(a.clone(), b.clone())))
    }

    /// Whether some element lies in a (possibly strided) concrete set.
    pub fn meets(&self, set: &ConcreteIntervalSet) -> bool {
        let m = BigInt::from(set.modulus());
        self.parts.iter().any(|(a, b)| {
            (0..set.modulus()).any(|c| {
                let cb = BigInt::from(c);
                let lo = crate::arith::ceil_div(&(a - &cb), &m);
                let hi = crate::arith::floor_div(&(b - &cb), &m);
                lo <= hi && set.class(c).intersects_interval(&Interval::finite(lo, hi))
            })
        })
    }

    /// Number of elements.
    pub fn point_count(&self) -> BigInt {
        self.parts.iter().map(|(a, b)| b - a + 1).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.parts.iter().map(|(a, b)| json!([big_string(a), big_string(b)])).collect())
    }
}

impl fmt::Display for IntervalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let items: Vec<String> = self.parts.iter().map(|(a, b)| format!("X^[{a},{b}]")).collect();
        f.write_str(&items.join(" + "))
    }
}

/// Union.
pub fn poly_add(f: &IntervalPolynomial, g: &IntervalPolynomial) -> IntervalPolynomial {
    IntervalPolynomial::from_intervals(f.parts.iter().chain(&g.parts).cloned().collect())
}

/// Minkowski sum.
pub fn poly_mul(f: &IntervalPolynomial, g: &IntervalPolynomial) -> IntervalPolynomial {
    let mut items = Vec::with_capacity(f.len() * g.len());
    for (a, b) in &f.parts {
        for (c, d) in &g.parts {
            items.push((a + c, b + d));
        }
    }
    IntervalPolynomial::from_intervals(items)
}

/// The condition of the chain definition that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainViolation {
    /// The sequence is empty or its last interval is not one-sided infinite.
    LastNotOneSidedInfinite,
    /// A finite interval other than the last one is empty or infinite.
    BadFiniteInterval(usize),
    /// Intervals `i` and `j` (0-based) intersect.
    Overlap(usize, usize),
    /// Length of interval `i` exceeds the length of interval `i+1`.
    Sizes(usize),
    /// `d(I_i, I_{i+1}) > ρ·|I_i|` at `i`.
    Distance(usize),
    /// Interval `i` lies neither left nor right of all its predecessors.
    Sides(usize),
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::LastNotOneSidedInfinite => write!(f, "the last interval must be one-sided infinite"),
            ChainViolation::BadFiniteInterval(i) => write!(f, "interval {i} must be finite and nonempty"),
            ChainViolation::Overlap(i, j) => write!(f, "(A1) intervals {i} and {j} intersect"),
            ChainViolation::Sizes(i) => write!(f, "(A2) interval {i} is longer than interval {}", i + 1),
            ChainViolation::Distance(i) => write!(f, "(A3) distance from interval {i} to the next exceeds rho times its length"),
            ChainViolation::Sides(i) => write!(f, "(A4) interval {i} is not on one side of all earlier intervals"),
        }
    }
}

fn len_of(i: &Interval) -> Option<BigInt> {
    i.effective_length()
}

/// Checks the chain conditions (A1)–(A4); singletons count as length 1.
pub fn check_rho_chain(intervals: &[Interval], rho: &BigRational) -> std::result::Result<(), ChainViolation> {
    let Some(last) = intervals.last() else { return Err(ChainViolation::LastNotOneSidedInfinite) };
    if last.lo.is_some() == last.hi.is_some() {
        return Err(ChainViolation::LastNotOneSidedInfinite);
    }
    let m = intervals.len() - 1;
    for (i, iv) in intervals[..m].iter().enumerate() {
        if !iv.is_finite() || iv.is_empty() {
            return Err(ChainViolation::BadFiniteInterval(i));
        }
    }
    for i in 0..intervals.len() {
        for j in 0..i {
            if intervals[i].intersect(&intervals[j]).is_some() {
                return Err(ChainViolation::Overlap(j, i));
            }
        }
    }
    for i in 0..m.saturating_sub(1) {
        if intervals[i].length() > intervals[i + 1].length() {
            return Err(ChainViolation::Sizes(i));
        }
    }
    for i in 0..m {
        let d = intervals[i].distance(&intervals[i + 1]).expect("disjoint");
        let len = len_of(&intervals[i]).expect("finite");
        if BigRational::from_integer(d) > rho * BigRational::from_integer(len) {
            return Err(ChainViolation::Distance(i));
        }
    }
    for i in 1..intervals.len() {
        let right = (0..i).all(|j| intervals[j].is_left_of(&intervals[i]));
        let left = (0..i).all(|j| intervals[i].is_left_of(&intervals[j]));
        if !right && !left {
            return Err(ChainViolation::Sides(i));
        }
    }
    Ok(())
}

/// Smallest `ρ ≥ 1` making the sequence satisfy (A3).
fn tight_rho(intervals: &[Interval]) -> BigRational {
    let mut rho = BigRational::one();
    for w in intervals.windows(2) {
        if let (Some(len), Some(d)) = (len_of(&w[0]), w[0].distance(&w[1])) {
            rho = rho.max(BigRational::new(d, len));
        }
    }
    rho
}

/// Target `I_1 ∪ ⋯ ∪ I_{m+1}` with `I_i = [s_i, t_i]` and `I_{m+1} = [s_{m+1}, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingBlockInstance {
    pub rho: BigRational,
    intervals: Vec<Interval>,
}

impl BuildingBlockInstance {
    /// From `(s₁, t₁, …, s_m, t_m, s_{m+1})`.
    pub fn new(rho: BigRational, endpoints: &[BigInt]) -> Result<Self> {
        if endpoints.len() % 2 == 0 {
            return Err(Error::InvalidTarget(format!("expected 2m+1 endpoints, got {}", endpoints.len())));
        }
        let m = endpoints.len() / 2;
        let mut intervals: Vec<Interval> =
            (0..m).map(|i| Interval::new(Some(endpoints[2 * i].clone()), Some(endpoints[2 * i + 1].clone()))).collect();
        intervals.push(Interval::at_least(endpoints[2 * m].clone()));
        Ok(BuildingBlockInstance { rho, intervals })
    }

    pub fn from_small(rho: (i64, i64), endpoints: &[i64]) -> Result<Self> {
        let e: Vec<BigInt> = endpoints.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(BigRational::new(rho.0.into(), rho.1.into()), &e)
    }

    /// From a chain whose last interval is `[s, ∞)`.
    pub fn from_intervals(rho: BigRational, intervals: Vec<Interval>) -> Result<Self> {
        match intervals.last() {
            Some(l) if l.lo.is_some() && l.hi.is_none() => Ok(BuildingBlockInstance { rho, intervals }),
            _ => Err(Error::InvalidTarget("the last interval must have the form [s, inf)".into())),
        }
    }

    /// Number of finite intervals.
    pub fn m(&self) -> usize {
        self.intervals.len() - 1
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn endpoints(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            out.push(iv.lo.clone().expect("bounded below"));
            if let Some(h) = &iv.hi {
                out.push(h.clone());
            }
        }
        out
    }

    pub fn chain_check(&self) -> std::result::Result<(), ChainViolation> {
        check_rho_chain(&self.intervals, &self.rho)
    }

    pub fn admissible(&self) -> bool {
        self.chain_check().is_ok()
    }

    /// `u_i = max_{j ≤ i} d(I_j, I_i)` (0-based `i`).
    pub fn u(&self, i: usize) -> BigInt {
        (0..i).filter_map(|j| self.intervals[j].distance(&self.intervals[i])).max().unwrap_or_else(BigInt::zero)
    }

    /// `v_i = |I_i|` with singletons counted as 1; `None` for the infinite interval.
    pub fn v(&self, i: usize) -> Option<BigInt> {
        len_of(&self.intervals[i])
    }

    /// First `(j, i)` with `|I_i| < 2·d(I_j, I_i)`.
    fn growth_violation(&self) -> Option<(usize, usize)> {
        for i in 1..self.m() {
            let len = self.v(i).expect("finite");
            for j in 0..i {
                if let Some(d) = self.intervals[j].distance(&self.intervals[i]) {
                    if len < BigInt::from(2) * d {
                        return Some((j, i));
                    }
                }
            }
        }
        None
    }

    pub fn is_growing(&self) -> bool {
        self.growth_violation().is_none()
    }

    /// The target set (empty for an inadmissible instance).
    pub fn target(&self) -> IntervalList {
        if self.admissible() {
            IntervalList::from_intervals(self.intervals.iter().cloned())
        } else {
            IntervalList::empty()
        }
    }

    /// `⌈(mρ + 2m)^m⌉`.
    pub fn size_bound(&self) -> BigInt {
        let m = BigRational::from_integer(BigInt::from(self.m()));
        let base = &m * &self.rho + &m * BigRational::from_integer(BigInt::from(2));
        let mut acc = BigRational::one();
        for _ in 0..self.m() {
            acc *= &base;
        }
        acc.ceil().to_integer()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rho": format!("{}/{}", self.rho.numer(), self.rho.denom()),
            "m": self.m(),
            "endpoints": self.endpoints().iter().map(big_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { path: "$".into(), msg: msg.into() };
        let rho_text = v.get("rho").and_then(Value::as_str).ok_or_else(|| bad("missing string field rho"))?;
        let rho: BigRational = match rho_text.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad("rho numerator is not an integer"))?;
                let q: BigInt = q.trim().parse().map_err(|_| bad("rho denominator is not an integer"))?;
                if q.is_zero() {
                    return Err(bad("rho has a zero denominator"));
                }
                BigRational::new(p, q)
            }
            None => BigRational::from_integer(rho_text.trim().parse().map_err(|_| bad("rho is not a rational"))?),
        };
        let arr = v.get("endpoints").and_then(Value::as_array).ok_or_else(|| bad("missing array field endpoints"))?;
        let mut e = Vec::new();
        for (i, x) in arr.iter().enumerate() {
            e.push(crate::arith::json_bigint(x, &format!("$.endpoints[{i}]"))?);
        }
        let inst = Self::new(rho, &e)?;
        if let Some(m) = v.get("m") {
            if m.as_u64() != Some(inst.m() as u64) {
                return Err(Error::Parse { path: "$.m".into(), msg: "m does not match the number of endpoints".into() });
            }
        }
        Ok(inst)
    }
}

/// `f ∪` fills `[i, j]` for `i ∈ f ∩ (f ⊕ [u, v])` and `j ∈ f ∩ [i, i+v]`.
fn eq_right(f: &IntervalPolynomial, u: &BigInt, v: &Option<BigInt>) -> IntervalPolynomial {
    let Some(fmax) = f.max() else { return f.clone() };
    let shifted = IntervalList::from_intervals(f.parts.iter().map(|(a, b)| match v {
        Some(v) => Interval::finite(a + u, b + v),
        None => Interval::at_least(a + u),
    }));
    let active = f.to_interval_list().intersect(&shifted);
    let mut fills = Vec::new();
    for piece in active.intervals() {
        let a = piece.lo.clone().expect("finite");
        let b = piece.hi.clone().expect("finite");
        let reach = match v {
            Some(v) => f.max_at_most(&(&b + v)).expect("b is in f"),
            None => fmax.clone(),
        };
        if reach > b {
            fills.push((a, reach));
        }
    }
    if fills.is_empty() {
        return f.clone();
    }
    fills.extend(f.parts.iter().cloned());
    IntervalPolynomial::from_intervals(fills)
}

fn eq_left(f: &IntervalPolynomial, u: &BigInt, v: &Option<BigInt>) -> IntervalPolynomial {
    eq_right(&f.negate(), u, v).negate()
}

/// Saturates `f` under both equation families of every level of a growing admissible instance.
pub fn normalize(f: &IntervalPolynomial, inst: &BuildingBlockInstance) -> Result<IntervalPolynomial> {
    if let Err(v) = inst.chain_check() {
        return Err(Error::Precondition(format!("instance is not admissible: {v}")));
    }
    if !inst.is_growing() {
        return Err(Error::Precondition("instance is not growing; split it with make_growing first".into()));
    }
    let levels: Vec<(bool, BigInt, Option<BigInt>)> = (0..inst.intervals.len())
        .map(|l| {
            let left = l == 0 || inst.intervals[0].is_left_of(&inst.intervals[l]);
            (left, inst.u(l), inst.v(l))
        })
        .collect();
    let mut cur = f.clone();
    loop {
        let mut next = cur.clone();
        for (left, u, v) in &levels {
            next = if *left { eq_left(&next, u, v) } else { eq_right(&next, u, v) };
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    debug_assert!(BigInt::from(cur.len()) <= inst.size_bound().max(BigInt::one()));
    Ok(cur)
}

/// Splits an admissible instance into growing instances with the same target union.
pub fn make_growing(inst: &BuildingBlockInstance) -> Vec<BuildingBlockInstance> {
    let Some((_, i)) = inst.growth_violation() else { return vec![inst.clone()] };
    let mut without = inst.intervals.clone();
    without.remove(i);
    let suffix = inst.intervals[i..].to_vec();
    let mut out = Vec::new();
    for ivs in [without, suffix] {
        let rho = inst.rho.clone().max(tight_rho(&ivs));
        let part = BuildingBlockInstance { rho, intervals: ivs };
        out.extend(make_growing(&part));
    }
    out
}

type PolyMatrix = Vec<Vec<IntervalPolynomial>>;

fn matrix_of(a: &WeightedAutomaton) -> PolyMatrix {
    let n = a.state_count();
    let mut b = vec![vec![IntervalPolynomial::zero(); n]; n];
    for t in a.transitions() {
        b[t.src][t.dst] = poly_add(&b[t.src][t.dst], &IntervalPolynomial::monomial(t.weight.clone()));
    }
    for (i, row) in b.iter_mut().enumerate() {
        row[i] = poly_add(&row[i], &IntervalPolynomial::one());
    }
    b
}

fn square(b: &PolyMatrix, inst: &BuildingBlockInstance) -> Result<PolyMatrix> {
    let n = b.len();
    let mut out = vec![vec![IntervalPolynomial::zero(); n]; n];
    for p in 0..n {
        for q in 0..n {
            let mut items = Vec::new();
            for r in 0..n {
                if b[p][r].is_zero() || b[r][q].is_zero() {
                    continue;
                }
                items.extend(poly_mul(&b[p][r], &b[r][q]).parts);
            }
            out[p][q] = normalize(&IntervalPolynomial::from_intervals(items), inst)?;
        }
    }
    Ok(out)
}

/// `(Bⁿ)_{init,final}` modulo `≡_{ρ,t}` by repeated squaring of `B = A + I`.
pub fn building_block_entry_by_squaring(a: &WeightedAutomaton, inst: &BuildingBlockInstance) -> Result<IntervalPolynomial> {
    let n = a.state_count();
    let mut b = matrix_of(a);
    for row in b.iter_mut() {
        for e in row.iter_mut() {
            *e = normalize(e, inst)?;
        }
    }
    let mut len = 1usize;
    while len < n {
        b = square(&b, inst)?;
        len *= 2;
    }
    Ok(b[a.initial()][a.final_state()].clone())
}

/// The same entry by propagation along a topological order, normalizing each row entry once.
pub fn building_block_entry_by_rows(a: &WeightedAutomaton, inst: &BuildingBlockInstance) -> Result<IntervalPolynomial> {
    let order = a.require_acyclic()?;
    let out = a.out_edges();
    let mut row = vec![IntervalPolynomial::zero(); a.state_count()];
    row[a.initial()] = IntervalPolynomial::one();
    for &s in &order {
        if row[s].is_zero() {
            continue;
        }
        row[s] = normalize(&row[s], inst)?;
        for &ti in &out[s] {
            let t = &a.transitions()[ti];
            let moved = row[s].shift(&t.weight);
            row[t.dst] = poly_add(&row[t.dst], &moved);
        }
    }
    Ok(row[a.final_state()].clone())
}

/// Whether some path of the acyclic automaton has its weight in the instance's target.
pub fn reach_building_block(a: &WeightedAutomaton, inst: &BuildingBlockInstance) -> Result<bool> {
    a.require_acyclic()?;
    if !inst.admissible() {
        return Ok(false);
    }
    let target = inst.target();
    for part in make_growing(inst) {
        let entry = if a.state_count() <= SQUARING_LIMIT {
            building_block_entry_by_squaring(a, &part)?
        } else {
            building_block_entry_by_rows(a, &part)?
        };
        if entry.intersects(&target) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All path weights from the initial to the final state of an acyclic automaton, without
/// quotienting; fails with a size guard once more than `guard` intervals are held.
pub fn exact_effects(a: &WeightedAutomaton, guard: usize) -> Result<IntervalPolynomial> {
    let order = a.require_acyclic()?;
    let out = a.out_edges();
    let mut row = vec![IntervalPolynomial::zero(); a.state_count()];
    row[a.initial()] = IntervalPolynomial::one();
    let mut held = 1usize;
    for &s in &order {
        if row[s].is_zero() {
            continue;
        }
        for &ti in &out[s] {
            let t = &a.transitions()[ti];
            let before = row[t.dst].len();
            row[t.dst] = poly_add(&row[t.dst], &row[s].shift(&t.weight));
            held = held + row[t.dst].len() - before;
            if held > guard {
                return Err(Error::SizeGuard(format!("exact propagation exceeded {guard} intervals")));
            }
        }
        // Every edge into `s` has been applied, so its row is no longer needed.
        if s != a.final_state() {
            held -= row[s].len();
            row[s] = IntervalPolynomial::zero();
        }
    }
    Ok(row[a.final_state()].clone())
}

/// Negated instance for chains ending at `−∞`.
pub(crate) fn negate_chain(intervals: &[Interval]) -> Vec<Interval> {
    intervals.iter().map(Interval::negate).collect()
}

#[cfg(test)]
mod tests;
