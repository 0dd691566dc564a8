use super::*;
use crate::automaton::Semantics;
use crate::targets::{catalog, classify, params};
use proptest::prelude::*;

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn poly(items: &[(i64, i64)]) -> IntervalPolynomial {
    IntervalPolynomial::from_small(items)
}

fn iv(lo: i64, hi: i64) -> Interval {
    Interval::finite(lo, hi)
}

fn rho(p: i64) -> BigRational {
    BigRational::from_integer(big(p))
}

#[test]
fn add_and_mul_examples() {
    assert_eq!(poly_add(&poly(&[(0, 2)]), &poly(&[(2, 5)])), poly(&[(0, 5)]));
    assert_eq!(poly_add(&poly(&[(0, 2)]), &IntervalPolynomial::zero()), poly(&[(0, 2)]));
    assert_eq!(poly_add(&poly(&[(0, 1)]), &poly(&[(3, 4)])).len(), 2);
    assert_eq!(poly_mul(&poly(&[(0, 1)]), &poly(&[(3, 4)])), poly(&[(3, 5)]));
    assert_eq!(poly_mul(&poly(&[(2, 9)]), &IntervalPolynomial::one()), poly(&[(2, 9)]));
    let prod = poly_mul(&poly(&[(0, 0), (10, 10)]), &poly(&[(0, 0), (3, 3)]));
    assert_eq!(prod, poly(&[(0, 0), (3, 3), (10, 10), (13, 13)]));
    assert_eq!(prod.len(), 4);
}

#[test]
fn chain_examples() {
    assert_eq!(check_rho_chain(&[iv(5, 10), Interval::at_most(0)], &rho(1)), Ok(()));
    assert_eq!(check_rho_chain(&[iv(0, 1), Interval::at_least(100)], &rho(2)), Err(ChainViolation::Distance(0)));
    assert_eq!(check_rho_chain(&[Interval::at_least(0)], &rho(1)), Ok(()));
    assert_eq!(check_rho_chain(&[iv(0, 5)], &rho(1)), Err(ChainViolation::LastNotOneSidedInfinite));
    assert_eq!(check_rho_chain(&[iv(0, 5), iv(3, 9), Interval::at_least(20)], &rho(9)), Err(ChainViolation::Overlap(0, 1)));
    assert_eq!(check_rho_chain(&[iv(0, 5), iv(7, 8), Interval::at_least(20)], &rho(9)), Err(ChainViolation::Sizes(0)));
    let sides = [iv(10, 11), iv(20, 22), iv(14, 17), Interval::at_least(40)];
    assert_eq!(check_rho_chain(&sides, &rho(9)), Err(ChainViolation::Sides(2)));
}

#[test]
fn normalize_examples() {
    let inst = BuildingBlockInstance::from_small((3, 1), &[10, 20, 50]).unwrap();
    assert_eq!(inst.u(1), big(30));
    assert_eq!(inst.v(0), Some(big(10)));
    assert_eq!(normalize(&poly(&[(0, 0), (5, 5), (12, 12)]), &inst).unwrap(), poly(&[(0, 12)]));
    assert_eq!(normalize(&poly(&[(3, 7)]), &inst).unwrap(), poly(&[(3, 7)]));
    assert_eq!(normalize(&IntervalPolynomial::zero(), &inst).unwrap(), IntervalPolynomial::zero());
    let not_growing = BuildingBlockInstance::from_small((90, 1), &[0, 1, 10, 11, 100]).unwrap();
    assert!(matches!(normalize(&poly(&[(0, 0)]), &not_growing), Err(Error::Precondition(_))));
}

fn window_hits(list: &IntervalList, lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).filter(|x| list.contains(&big(*x))).collect()
}

#[test]
fn make_growing_examples() {
    let inst = BuildingBlockInstance::from_small((90, 1), &[0, 1, 10, 11, 100]).unwrap();
    assert!(inst.admissible());
    assert!(!inst.is_growing());
    let parts = make_growing(&inst);
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0].endpoints(), vec![big(0), big(1), big(100)]);
    assert_eq!(parts[1].endpoints(), vec![big(10), big(11), big(100)]);
    let mut union = IntervalList::empty();
    for p in &parts {
        assert!(p.is_growing() && p.admissible());
        assert!(p.rho <= &inst.rho * &inst.rho * BigRational::from_integer(big(5)));
        union = union.union(&p.target());
    }
    assert_eq!(window_hits(&union, -5, 120), window_hits(&inst.target(), -5, 120));
    let single = BuildingBlockInstance::from_small((2, 1), &[0, 9, 12]).unwrap();
    assert_eq!(make_growing(&single), vec![single.clone()]);
}

fn two_paths() -> WeightedAutomaton {
    WeightedAutomaton::from_edges(3, 0, 2, [(0, 0, 1), (1, 0, 2), (0, 7, 2)]).unwrap()
}

#[test]
fn building_block_examples() {
    let yes = BuildingBlockInstance::from_small((8, 1), &[5, 10, 50]).unwrap();
    assert!(reach_building_block(&two_paths(), &yes).unwrap());
    let no = BuildingBlockInstance::from_small((8, 1), &[20, 30, 50]).unwrap();
    assert!(!reach_building_block(&two_paths(), &no).unwrap());
    let bad = BuildingBlockInstance::from_small((1, 1), &[0, 1, 100]).unwrap();
    assert!(!bad.admissible());
    assert!(!reach_building_block(&two_paths(), &bad).unwrap());
}

#[test]
fn instance_json_round_trip() {
    let inst = BuildingBlockInstance::from_small((7, 2), &[5, 10, 50]).unwrap();
    let back = BuildingBlockInstance::from_json(&inst.to_json()).unwrap();
    assert_eq!(back, inst);
}

fn effects_automaton(effects: &[i64]) -> WeightedAutomaton {
    WeightedAutomaton::from_edges(2, 0, 1, effects.iter().map(|&w| (0, w, 1))).unwrap()
}

#[test]
fn integer_examples() {
    let s3 = catalog::int_s3();
    let cls = classify(&s3, Semantics::Integer).unwrap();
    assert!(reach_integer(&effects_automaton(&[2, 7]), &s3, &params(&[5]), &cls).unwrap());
    let s2 = catalog::int_s2();
    let cls2 = classify(&s2, Semantics::Integer).unwrap();
    let out = reach_integer_with(&effects_automaton(&[3]), &s2, &params(&[]), &cls2, &ReachOptions::default()).unwrap();
    assert!(!out.reachable);
    assert_eq!(out.method, Method::ExactFallback);
    let empty = WeightedAutomaton::new(1, 0, 0).unwrap();
    assert!(reach_integer(&empty, &s3, &params(&[0]), &cls).unwrap());
}

#[test]
fn natural_examples() {
    let s = catalog::nat_interval();
    assert!(reach_natural(&effects_automaton(&[5]), &s, &params(&[4])).unwrap());
    assert!(!reach_natural(&effects_automaton(&[9]), &s, &params(&[4])).unwrap());
    assert!(!reach_natural(&effects_automaton(&[1]), &s, &params(&[-3])).unwrap());
    assert!(matches!(reach_natural(&effects_automaton(&[-1]), &s, &params(&[4])), Err(Error::InvalidAutomaton(_))));
}

#[test]
fn cyclic_automata_are_acyclicized() {
    let s3 = catalog::int_s3();
    let cls = classify(&s3, Semantics::Integer).unwrap();
    let loop3 = WeightedAutomaton::from_edges(2, 0, 1, [(0, 3, 0), (0, 0, 1)]).unwrap();
    let opts = ReachOptions { length_bound: Some(big(16)), ..ReachOptions::default() };
    assert!(reach_integer_with(&loop3, &s3, &params(&[7]), &cls, &opts).unwrap().reachable);
}

fn small_poly() -> impl Strategy<Value = IntervalPolynomial> {
    prop::collection::vec((-6i64..=6, 0i64..=3), 0..=3)
        .prop_map(|v| IntervalPolynomial::from_intervals(v.into_iter().map(|(a, l)| (big(a), big((a + l).min(6)))).collect()))
}

/// A random admissible instance with `m ≤ 3` and `ρ ≤ 4`.
pub(crate) fn admissible_instance() -> impl Strategy<Value = BuildingBlockInstance> {
    (1usize..=3, 1i64..=4, -30i64..=30, prop::collection::vec((any::<bool>(), 0i64..=6, 0i64..=100), 3))
        .prop_map(|(m, r, start, steps)| {
            let mut ivs = vec![iv(start, start + steps[0].1)];
            let (mut lo, mut hi) = (start, start + steps[0].1);
            let mut len = steps[0].1;
            for (left, extra, dfrac) in steps.iter().take(m).skip(1) {
                let prev_len = len.max(1);
                len += extra;
                let d = 1 + dfrac * (r * prev_len - 1).max(0) / 100;
                if *left {
                    let h = lo - d;
                    ivs.push(iv(h - len, h));
                    lo = h - len;
                } else {
                    let l = hi + d;
                    ivs.push(iv(l, l + len));
                    hi = l + len;
                }
            }
            let prev_len = len.max(1);
            let d = 1 + steps[m - 1].2 * (r * prev_len - 1).max(0) / 100;
            let mut all = ivs;
            let last_hi = all.iter().map(|i| i.hi.clone().unwrap()).max().unwrap();
            all.push(Interval::at_least(last_hi + d));
            // The distance from the last finite interval to the infinite one must respect ρ too.
            BuildingBlockInstance::from_intervals(tight_rho(&all).max(rho(r)), all).unwrap()
        })
}

fn small_dag() -> impl Strategy<Value = WeightedAutomaton> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, -16i64..=16), 0..=14).prop_map(move |raw| {
            let edges = raw.into_iter().filter(|(a, b, _)| a < b).map(|(a, b, w)| (a, w, b));
            WeightedAutomaton::from_edges(n, 0, n - 1, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn polynomial_semiring_laws(f in small_poly(), g in small_poly(), h in small_poly()) {
        prop_assert_eq!(poly_add(&f, &g), poly_add(&g, &f));
        prop_assert_eq!(poly_mul(&f, &g), poly_mul(&g, &f));
        prop_assert_eq!(poly_add(&poly_add(&f, &g), &h), poly_add(&f, &poly_add(&g, &h)));
        prop_assert_eq!(poly_mul(&poly_mul(&f, &g), &h), poly_mul(&f, &poly_mul(&g, &h)));
        prop_assert_eq!(poly_mul(&f, &poly_add(&g, &h)), poly_add(&poly_mul(&f, &g), &poly_mul(&f, &h)));
        prop_assert_eq!(poly_mul(&f, &IntervalPolynomial::one()), f.clone());
        prop_assert_eq!(poly_mul(&f, &IntervalPolynomial::zero()), IntervalPolynomial::zero());
        prop_assert_eq!(poly_add(&f, &IntervalPolynomial::zero()), f.clone());
    }

    #[test]
    fn admissibility_is_monotone_in_rho(inst in admissible_instance(), extra in 0i64..5) {
        prop_assert!(inst.admissible());
        let bigger = BuildingBlockInstance { rho: &inst.rho + rho(extra), ..inst.clone() };
        prop_assert!(bigger.admissible());
    }

    #[test]
    fn normalize_is_sound_and_small(inst in admissible_instance(), pts in prop::collection::vec(-150i64..=150, 0..12)) {
        let f = IntervalPolynomial::from_points(pts.into_iter().map(BigInt::from));
        let target = inst.target();
        for part in make_growing(&inst) {
            let g = normalize(&f, &part).unwrap();
            let pt = part.target();
            prop_assert_eq!(f.intersects(&pt), g.intersects(&pt));
            prop_assert!(BigInt::from(g.len()) <= part.size_bound());
            prop_assert!(part.is_growing());
        }
        let union = make_growing(&inst).iter().fold(IntervalList::empty(), |acc, p| acc.union(&p.target()));
        prop_assert_eq!(window_hits(&union, -400, 400), window_hits(&target, -400, 400));
    }

    #[test]
    fn building_block_matches_exact(a in small_dag(), inst in admissible_instance()) {
        let exact = exact_effects(&a, DEFAULT_EXACT_GUARD).unwrap().intersects(&inst.target());
        prop_assert_eq!(reach_building_block(&a, &inst).unwrap(), exact);
        for part in make_growing(&inst) {
            prop_assert_eq!(
                building_block_entry_by_rows(&a, &part).unwrap().intersects(&part.target()),
                building_block_entry_by_squaring(&a, &part).unwrap().intersects(&part.target())
            );
        }
    }
}
