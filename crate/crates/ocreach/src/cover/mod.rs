//! The semiring ℱ of coverability functions, simple elements, the amplitude tripling iteration
//! and coverability tables.

mod vass;

pub use vass::{reach_vass_decide, vass_cover, VassDecision};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::arith::big_string;
use crate::automaton::WeightedAutomaton;
use crate::error::{Error, Result};

/// Number types the kernel runs on (`i128` when values fit, `BigInt` otherwise).
pub trait Weight: Clone + Ord + Hash + fmt::Debug + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T: Clone + Ord + Hash + fmt::Debug + Zero + Add<Output = T> + Sub<Output = T>> Weight for T {}

fn max0<T: Weight>(x: T) -> T {
    if x < T::zero() {
        T::zero()
    } else {
        x
    }
}

/// `X̄^i X^j`, i.e. `x ↦ x − i + j` for `x ≥ i`, composed with `(i2, j2)` applied afterwards.
fn compose_elementary<T: Weight>(a: &(T, T), b: &(T, T)) -> (T, T) {
    let (i, j) = a.clone();
    let (i2, j2) = b.clone();
    let u = i + max0(i2.clone() - j.clone());
    let v = j2 + max0(j - i2);
    (u, v)
}

/// Sorts discontinuities and keeps only genuine ones (the upper envelope).
fn canonicalize<T: Weight>(mut pts: Vec<(T, T)>) -> Vec<(T, T)> {
    pts.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| (b.1.clone() - b.0.clone()).cmp(&(a.1.clone() - a.0.clone()))));
    let mut out: Vec<(T, T)> = Vec::new();
    let mut best: Option<T> = None;
    for (u, v) in pts {
        let c = v.clone() - u.clone();
        if best.as_ref().is_none_or(|b| &c > b) {
            best = Some(c);
            out.push((u, v));
        }
    }
    out
}

/// A strictly monotone function `ℕ ∪ {−∞} → ℕ ∪ {−∞}` stored by its discontinuities `(u, v)`.
///
/// `f(i) = v_j + (i − u_j)` for the largest `u_j ≤ i`, and `−∞` below `u_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverFn<T> {
    points: Vec<(T, T)>,
}

pub type CoverFunction = CoverFn<BigInt>;

impl<T: Weight> CoverFn<T> {
    /// The constant `−∞` (additive neutral).
    pub fn empty() -> Self {
        CoverFn { points: Vec::new() }
    }

    /// `x ↦ x` (multiplicative neutral).
    pub fn identity() -> Self {
        CoverFn { points: vec![(T::zero(), T::zero())] }
    }

    /// Checks the discontinuity invariants.
    pub fn new(points: Vec<(T, T)>) -> Result<Self> {
        for (i, (u, v)) in points.iter().enumerate() {
            if u < &T::zero() || v < &T::zero() {
                return Err(Error::Precondition(format!("discontinuity {i} has a negative coordinate")));
            }
            if i > 0 {
                let (pu, pv) = &points[i - 1];
                if u <= pu || v.clone() <= pv.clone() + (u.clone() - pu.clone()) {
                    return Err(Error::Precondition(format!("entry {i} is not a genuine discontinuity")));
                }
            }
        }
        Ok(CoverFn { points })
    }

    /// The pointwise maximum of the elementary functions `(u, v)`.
    pub fn from_points(points: Vec<(T, T)>) -> Self {
        CoverFn { points: canonicalize(points) }
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `f(i)`, with `None` for `−∞`.
    pub fn eval(&self, i: &T) -> Option<T> {
        let idx = self.points.partition_point(|(u, _)| u <= i);
        if idx == 0 {
            return None;
        }
        let (u, v) = &self.points[idx - 1];
        Some(v.clone() + (i.clone() - u.clone()))
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &CoverFn<T>) -> bool {
        // Both are piecewise of slope 1, so comparing at every discontinuity of `self` suffices.
        self.points.iter().all(|(u, v)| other.eval(u).is_some_and(|w| &w >= v))
    }
}

impl<T: Weight + fmt::Display> fmt::Display for CoverFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|(u, v)| format!("({u},{v})")).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl CoverFunction {
    pub fn to_json(&self) -> Value {
        Value::Array(self.points.iter().map(|(u, v)| Value::Array(vec![big_string(u), big_string(v)])).collect())
    }

    pub fn from_small(points: &[(i64, i64)]) -> Result<Self> {
        Self::new(points.iter().map(|&(u, v)| (BigInt::from(u), BigInt::from(v))).collect())
    }
}

/// Pointwise maximum.
pub fn cf_add<T: Weight>(f: &CoverFn<T>, g: &CoverFn<T>) -> CoverFn<T> {
    CoverFn::from_points(f.points.iter().chain(&g.points).cloned().collect())
}

/// Composition with `f` applied first.
pub fn cf_compose<T: Weight>(f: &CoverFn<T>, g: &CoverFn<T>) -> CoverFn<T> {
    let mut pts = Vec::with_capacity(f.points.len() * g.points.len());
    for a in &f.points {
        for b in &g.points {
            pts.push(compose_elementary(a, b));
        }
    }
    CoverFn::from_points(pts)
}

/// `0`, `X^j` or `X̄^i` with `i ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Simple<T> {
    Zero,
    Xpow(T),
    Xbar(T),
}

pub type SimpleElement = Simple<BigInt>;

impl<T: Weight> Simple<T> {
    /// `X^w` for `w ≥ 0`, otherwise `X̄^{−w}`; also the simple element of an amplitude.
    pub fn of_weight(w: T) -> Self {
        if w >= T::zero() {
            Simple::Xpow(w)
        } else {
            Simple::Xbar(T::zero() - w)
        }
    }

    pub fn to_fn(&self) -> CoverFn<T> {
        match self {
            Simple::Zero => CoverFn::empty(),
            Simple::Xpow(j) => CoverFn { points: vec![(T::zero(), j.clone())] },
            Simple::Xbar(i) => CoverFn { points: vec![(i.clone(), T::zero())] },
        }
    }

    fn elementary(&self) -> Option<(T, T)> {
        match self {
            Simple::Zero => None,
            Simple::Xpow(j) => Some((T::zero(), j.clone())),
            Simple::Xbar(i) => Some((i.clone(), T::zero())),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Simple::Zero)
    }

    fn rank(&self) -> u8 {
        match self {
            Simple::Zero => 0,
            Simple::Xbar(_) => 1,
            Simple::Xpow(_) => 2,
        }
    }
}

impl<T: Weight> Ord for Simple<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Simple::Xbar(a), Simple::Xbar(b)) => b.cmp(a),
            (Simple::Xpow(a), Simple::Xpow(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl<T: Weight> PartialOrd for Simple<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Weight + fmt::Display> fmt::Display for Simple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Simple::Zero => f.write_str("0"),
            Simple::Xpow(j) => write!(f, "X^{j}"),
            Simple::Xbar(i) => write!(f, "Xbar^{i}"),
        }
    }
}

/// The largest simple element below `f`.
pub fn sigma<T: Weight>(f: &CoverFn<T>) -> Simple<T> {
    match f.points.first() {
        None => Simple::Zero,
        Some((u, v)) if u.is_zero() => Simple::Xpow(v.clone()),
        Some((u, _)) => Simple::Xbar(u.clone()),
    }
}

pub type SimpleMatrix<T> = Vec<Vec<Simple<T>>>;
pub type CoverMatrix<T> = Vec<Vec<CoverFn<T>>>;

/// Order-maximum of the simple elements of parallel edges; `with_identity` adds `X^0` on the diagonal.
pub fn adjacency_matrix(a: &WeightedAutomaton, with_identity: bool) -> SimpleMatrix<BigInt> {
    adjacency_generic(a, with_identity, |w| w.clone())
}

fn adjacency_generic<T: Weight>(
    a: &WeightedAutomaton,
    with_identity: bool,
    conv: impl Fn(&BigInt) -> T,
) -> SimpleMatrix<T> {
    let n = a.state_count();
    let mut m = vec![vec![Simple::Zero; n]; n];
    for t in a.transitions() {
        let e = Simple::of_weight(conv(&t.weight));
        if e > m[t.src][t.dst] {
            m[t.src][t.dst] = e;
        }
    }
    if with_identity {
        for (i, row) in m.iter_mut().enumerate() {
            if row[i] < Simple::Xpow(T::zero()) {
                row[i] = Simple::Xpow(T::zero());
            }
        }
    }
    m
}

/// `σ(P ∘ g)` for a canonical function `P` and a simple `g`.
fn sigma_then<T: Weight>(p: &[(T, T)], g: &Simple<T>) -> Simple<T> {
    let Some((u1, v1)) = p.first() else { return Simple::Zero };
    match g {
        Simple::Zero => Simple::Zero,
        Simple::Xpow(j) => {
            if u1.is_zero() {
                Simple::Xpow(v1.clone() + j.clone())
            } else {
                Simple::Xbar(u1.clone())
            }
        }
        Simple::Xbar(b) => {
            // Smallest x with P(x) ≥ b is min_j max(u_j, b − c_j).
            let mut best: Option<T> = None;
            for (u, v) in p {
                let need = b.clone() - (v.clone() - u.clone());
                let x = if &need > u { need } else { u.clone() };
                if best.as_ref().is_none_or(|bst| &x < bst) {
                    best = Some(x);
                }
            }
            let x = best.expect("nonempty");
            if x.is_zero() {
                Simple::Xpow(v1.clone() - b.clone())
            } else {
                Simple::Xbar(x)
            }
        }
    }
}

/// One tripling round `A ↦ σ(A·A·A)`, computed as `max_s σ((A·A)_{p,s} ∘ A_{s,q})`.
fn triple_round<T: Weight>(a: &SimpleMatrix<T>) -> SimpleMatrix<T> {
    let n = a.len();
    let rows: Vec<Vec<(usize, (T, T))>> = a
        .iter()
        .map(|row| row.iter().enumerate().filter_map(|(j, e)| e.elementary().map(|x| (j, x))).collect())
        .collect();
    let mut out = vec![vec![Simple::Zero; n]; n];
    let mut buckets: Vec<Vec<(T, T)>> = vec![Vec::new(); n];
    for p in 0..n {
        for (r, e1) in &rows[p] {
            for (s, e2) in &rows[*r] {
                buckets[*s].push(compose_elementary(e1, e2));
            }
        }
        for s in 0..n {
            if buckets[s].is_empty() {
                continue;
            }
            let frontier = canonicalize(std::mem::take(&mut buckets[s]));
            for (q, _) in &rows[s] {
                let cand = sigma_then(&frontier, &a[s][*q]);
                if cand > out[p][*q] {
                    out[p][*q] = cand;
                }
            }
        }
    }
    out
}

fn rounds_for(n: usize) -> usize {
    (usize::BITS - n.max(1).saturating_sub(1).leading_zeros()) as usize + 1
}

fn iterate_generic<T: Weight>(a0: SimpleMatrix<T>, keep_history: bool) -> Vec<SimpleMatrix<T>> {
    let rounds = rounds_for(a0.len());
    let mut history = vec![a0];
    for _ in 0..rounds {
        let next = triple_round(history.last().expect("nonempty"));
        let fixed = &next == history.last().expect("nonempty");
        if keep_history {
            history.push(next);
        } else {
            history[0] = next;
        }
        if fixed && !keep_history {
            break;
        }
    }
    history
}

/// Whether every amplitude fits comfortably in `i128`.
fn fits_i128(a: &WeightedAutomaton) -> bool {
    let bound = a.max_abs_weight() * BigInt::from(a.state_count() + 1) * BigInt::from(4);
    bound.bits() < 120
}

fn to_big(m: SimpleMatrix<i128>) -> SimpleMatrix<BigInt> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|e| match e {
                    Simple::Zero => Simple::Zero,
                    Simple::Xpow(j) => Simple::Xpow(BigInt::from(j)),
                    Simple::Xbar(i) => Simple::Xbar(BigInt::from(i)),
                })
                .collect()
        })
        .collect()
}

fn all_rounds(a: &WeightedAutomaton, keep_history: bool) -> Result<Vec<SimpleMatrix<BigInt>>> {
    a.require_acyclic()?;
    if fits_i128(a) {
        let a0 = adjacency_generic(a, true, |w| w.to_i128().expect("checked range"));
        Ok(iterate_generic(a0, keep_history).into_iter().map(to_big).collect())
    } else {
        Ok(iterate_generic(adjacency_matrix(a, true), keep_history))
    }
}

/// `A_k` after `⌈log₂ n⌉ + 1` tripling rounds (stopping early at a fixed point).
pub fn cover_iterate(a: &WeightedAutomaton) -> Result<SimpleMatrix<BigInt>> {
    Ok(all_rounds(a, false)?.pop().expect("nonempty"))
}

/// `A_0, A_1, …, A_K` for every round.
pub fn cover_iterate_rounds(a: &WeightedAutomaton) -> Result<Vec<SimpleMatrix<BigInt>>> {
    all_rounds(a, true)
}

/// `Σ_r A(p,r)·A(r,q)` for a converged simple matrix.
pub fn table_from(ak: &SimpleMatrix<BigInt>, p: usize, q: usize) -> CoverFunction {
    let mut pts = Vec::new();
    for r in 0..ak.len() {
        if let (Some(x), Some(y)) = (ak[p][r].elementary(), ak[r][q].elementary()) {
            pts.push(compose_elementary(&x, &y));
        }
    }
    CoverFn::from_points(pts)
}

/// The `(p, q)` coverability table of an acyclic automaton.
pub fn cover_table(a: &WeightedAutomaton, p: usize, q: usize) -> Result<CoverFunction> {
    let n = a.state_count();
    if p >= n || q >= n {
        return Err(Error::Precondition(format!("state out of range (automaton has {n} states)")));
    }
    let ak = cover_iterate(a)?;
    Ok(table_from(&ak, p, q))
}

/// All coverability tables of an acyclic automaton.
pub fn cover_tables(a: &WeightedAutomaton) -> Result<CoverMatrix<BigInt>> {
    let ak = cover_iterate(a)?;
    let n = a.state_count();
    Ok((0..n).map(|p| (0..n).map(|q| table_from(&ak, p, q)).collect()).collect())
}

/// Matrix product over ℱ (row `p` then column `q`, composing left to right).
pub fn cf_matrix_mul<T: Weight>(a: &CoverMatrix<T>, b: &CoverMatrix<T>) -> CoverMatrix<T> {
    let n = a.len();
    (0..n)
        .map(|p| {
            (0..n)
                .map(|q| {
                    let mut pts = Vec::new();
                    for r in 0..n {
                        for x in &a[p][r].points {
                            for y in &b[r][q].points {
                                pts.push(compose_elementary(x, y));
                            }
                        }
                    }
                    CoverFn::from_points(pts)
                })
                .collect()
        })
        .collect()
}

/// `A^k` over ℱ by repeated squaring.
pub fn cf_matrix_pow<T: Weight>(a: &CoverMatrix<T>, k: u64) -> CoverMatrix<T> {
    let n = a.len();
    let mut result: CoverMatrix<T> =
        (0..n).map(|p| (0..n).map(|q| if p == q { CoverFn::identity() } else { CoverFn::empty() }).collect()).collect();
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            result = cf_matrix_mul(&result, &base);
        }
        k >>= 1;
        if k > 0 {
            base = cf_matrix_mul(&base, &base);
        }
    }
    result
}

pub fn lift<T: Weight>(m: &SimpleMatrix<T>) -> CoverMatrix<T> {
    m.iter().map(|row| row.iter().map(Simple::to_fn).collect()).collect()
}

/// Result of the exact baseline: the table and the number of elementary functions propagated.
#[derive(Clone, Debug)]
pub struct ExactCover {
    pub table: Option<CoverFunction>,
    pub entries: usize,
}

/// Exact propagation of every path's elementary function from `p` (duplicates removed, no
/// dominance pruning); gives up once more than `cap` entries are held.
pub fn exact_cover_table(a: &WeightedAutomaton, p: usize, q: usize, cap: usize) -> Result<ExactCover> {
    let order = a.require_acyclic()?;
    let n = a.state_count();
    let mut sets: Vec<HashSet<(BigInt, BigInt)>> = vec![HashSet::new(); n];
    sets[p].insert((BigInt::zero(), BigInt::zero()));
    let out = a.out_edges();
    let mut entries = 1usize;
    for &s in &order {
        if sets[s].is_empty() {
            continue;
        }
        let cur: Vec<(BigInt, BigInt)> = sets[s].iter().cloned().collect();
        for &ti in &out[s] {
            let t = &a.transitions()[ti];
            let e = if t.weight.is_negative() {
                (-&t.weight, BigInt::zero())
            } else {
                (BigInt::zero(), t.weight.clone())
            };
            for f in &cur {
                if sets[t.dst].insert(compose_elementary(f, &e)) {
                    entries += 1;
                    if entries > cap {
                        return Ok(ExactCover { table: None, entries });
                    }
                }
            }
        }
    }
    let table = CoverFn::from_points(sets[q].iter().cloned().collect());
    Ok(ExactCover { table: Some(table), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::path_amplitude;
    use proptest::prelude::*;

    fn cf(points: &[(i64, i64)]) -> CoverFn<i64> {
        CoverFn::new(points.to_vec()).unwrap()
    }

    fn fig4() -> CoverFn<i64> {
        cf(&[(4, 2), (9, 9)])
    }

    #[test]
    fn add_examples() {
        assert_eq!(cf_add(&fig4(), &CoverFn::identity()), cf(&[(0, 0)]));
        assert_eq!(cf_add(&fig4(), &CoverFn::empty()), fig4());
        assert_eq!(cf_add(&cf(&[(0, 3)]), &cf(&[(2, 0)])), cf(&[(0, 3)]));
        for i in 0..=20 {
            let got = cf_add(&fig4(), &CoverFn::identity()).eval(&i);
            let want = fig4().eval(&i).max(Some(i));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn compose_examples() {
        assert_eq!(cf_compose(&cf(&[(0, 2)]), &cf(&[(0, 3)])), cf(&[(0, 5)]));
        assert_eq!(cf_compose(&cf(&[(0, 2)]), &cf(&[(5, 0)])), cf(&[(3, 0)]));
        assert_eq!(cf_compose(&fig4(), &cf(&[(0, 1)])), cf(&[(4, 3), (9, 10)]));
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&fig4()), Simple::Xbar(4));
        assert_eq!(sigma(&cf(&[(0, 3)])), Simple::Xpow(3));
        assert_eq!(sigma::<i64>(&CoverFn::empty()), Simple::Zero);
    }

    #[test]
    fn invariants_are_checked() {
        assert!(CoverFn::new(vec![(0i64, 0), (1, 1)]).is_err());
        assert!(CoverFn::new(vec![(2i64, 0), (1, 5)]).is_err());
        assert!(CoverFn::new(vec![(0i64, 0), (1, 2)]).is_ok());
    }

    fn chain(weights: &[i64]) -> WeightedAutomaton {
        let n = weights.len() + 1;
        WeightedAutomaton::from_edges(n, 0, n - 1, weights.iter().enumerate().map(|(i, &w)| (i, w, i + 1))).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let a = WeightedAutomaton::from_edges(2, 0, 1, [(0, -3, 1)]).unwrap();
        assert_eq!(adjacency_matrix(&a, false)[0][1], Simple::Xbar(BigInt::from(3)));
        let b = WeightedAutomaton::from_edges(2, 0, 1, [(0, 2, 1), (0, -1, 1)]).unwrap();
        assert_eq!(adjacency_matrix(&b, false)[0][1], Simple::Xpow(BigInt::from(2)));
        assert_eq!(adjacency_matrix(&b, false)[1][0], Simple::Zero);
    }

    #[test]
    fn iterate_examples() {
        let big = |x: i64| BigInt::from(x);
        assert_eq!(cover_iterate(&chain(&[-3])).unwrap()[0][1], Simple::Xbar(big(3)));
        assert_eq!(cover_iterate(&chain(&[2, -5])).unwrap()[0][2], Simple::Xbar(big(3)));
        let rounds = cover_iterate_rounds(&chain(&[1, 1, 1, 1])).unwrap();
        assert_eq!(rounds[2][0][4], Simple::Xpow(big(4)));
        let cyclic = WeightedAutomaton::from_edges(1, 0, 0, [(0, 1, 0)]).unwrap();
        assert!(matches!(cover_iterate(&cyclic), Err(Error::Cyclic(_))));
    }

    #[test]
    fn table_examples() {
        let diamond = WeightedAutomaton::from_edges(4, 0, 3, [(0, -2, 1), (1, 4, 3), (0, 1, 2), (2, -1, 3)]).unwrap();
        assert_eq!(cover_table(&diamond, 0, 3).unwrap(), CoverFunction::from_small(&[(0, 0), (2, 4)]).unwrap());
        assert_eq!(cover_table(&chain(&[-3]), 0, 1).unwrap(), CoverFunction::from_small(&[(3, 0)]).unwrap());
        assert!(cover_table(&chain(&[-3]), 1, 0).unwrap().is_empty());
    }

    fn small_fn() -> impl Strategy<Value = CoverFn<i64>> {
        prop::collection::vec((0i64..=8, 0i64..=8), 0..4).prop_map(CoverFn::from_points)
    }

    fn simple() -> impl Strategy<Value = Simple<i64>> {
        prop_oneof![Just(Simple::Zero), (0i64..=6).prop_map(Simple::Xpow), (1i64..=6).prop_map(Simple::Xbar)]
    }

    proptest! {
        #[test]
        fn semiring_laws(f in small_fn(), g in small_fn(), h in small_fn()) {
            prop_assert_eq!(cf_add(&f, &g), cf_add(&g, &f));
            prop_assert_eq!(cf_add(&cf_add(&f, &g), &h), cf_add(&f, &cf_add(&g, &h)));
            prop_assert_eq!(cf_add(&f, &f), f.clone());
            prop_assert_eq!(cf_compose(&cf_compose(&f, &g), &h), cf_compose(&f, &cf_compose(&g, &h)));
            prop_assert_eq!(cf_compose(&f, &CoverFn::identity()), f.clone());
            prop_assert_eq!(cf_compose(&CoverFn::identity(), &f), f.clone());
            prop_assert_eq!(cf_compose(&f, &cf_add(&g, &h)), cf_add(&cf_compose(&f, &g), &cf_compose(&f, &h)));
            prop_assert_eq!(cf_compose(&cf_add(&f, &g), &h), cf_add(&cf_compose(&f, &h), &cf_compose(&g, &h)));
        }

        #[test]
        fn compose_is_function_composition(f in small_fn(), g in small_fn()) {
            let c = cf_compose(&f, &g);
            for i in 0..30 {
                let want = f.eval(&i).and_then(|y| g.eval(&y));
                prop_assert_eq!(c.eval(&i), want);
            }
        }

        #[test]
        fn sigma_is_an_additive_homomorphism_below_f(f in small_fn(), g in small_fn()) {
            prop_assert_eq!(sigma(&cf_add(&f, &g)), sigma(&f).max(sigma(&g)));
            prop_assert!(sigma(&f).to_fn().le(&f));
        }

        #[test]
        fn simple_order_matches_pointwise_order(a in simple(), b in simple()) {
            prop_assert_eq!(a <= b, a.to_fn().le(&b.to_fn()));
        }

        #[test]
        fn amplitude_matches_sigma(ws in prop::collection::vec(-8i64..=8, 0..6)) {
            let prod = ws.iter().fold(CoverFn::<i64>::identity(), |acc, &w| cf_compose(&acc, &Simple::of_weight(w).to_fn()));
            let amp = path_amplitude(&ws.iter().map(|&w| BigInt::from(w)).collect::<Vec<_>>());
            prop_assert_eq!(Simple::of_weight(amp.to_i64().unwrap()), sigma(&prod));
        }

        #[test]
        fn minimal_decomposition(seq in prop::collection::vec(simple(), 2..=5)) {
            let prod = |s: &[Simple<i64>]| s.iter().fold(CoverFn::identity(), |acc, e| cf_compose(&acc, &e.to_fn()));
            let whole = prod(&seq);
            let mut sum = CoverFn::empty();
            for i in 1..seq.len() {
                let left = sigma(&prod(&seq[..i])).to_fn();
                let right = sigma(&prod(&seq[i..])).to_fn();
                sum = cf_add(&sum, &cf_compose(&left, &right));
            }
            prop_assert_eq!(whole, sum);
        }
    }
}
