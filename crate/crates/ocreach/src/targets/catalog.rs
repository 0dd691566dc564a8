//! Named example target sets with their expected classification.

use num_bigint::BigInt;

use super::system::{branch, form, params, Bound, LinearIntervalSystem};
use crate::automaton::Semantics;

/// A named system with the verdict expected under `semantics`.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub semantics: Semantics,
    pub np_hard: bool,
    pub system: LinearIntervalSystem,
}

impl Example {
    /// A grid of parameter vectors used by tests.
    pub fn sample_params(&self) -> Vec<Vec<BigInt>> {
        match self.system.p {
            0 => vec![Vec::new()],
            1 => (-2..=12).map(|t| params(&[t])).collect(),
            _ => {
                let mut out = Vec::new();
                for t in -1..=6 {
                    for s in -1..=6 {
                        let mut v = vec![t, s];
                        v.resize(self.system.p, 0);
                        out.push(params(&v));
                    }
                }
                out
            }
        }
    }
}

fn system(p: usize, branches: Vec<super::system::Branch>) -> LinearIntervalSystem {
    LinearIntervalSystem::new(p, branches).expect("catalog systems are valid")
}

/// Nonpositive even integers and positive odd integers.
pub fn int_s1() -> LinearIntervalSystem {
    system(
        0,
        vec![
            branch(&[], &[], vec![(Bound::NegInf, form(0, &[]))], (2, 0)),
            branch(&[], &[], vec![(form(1, &[]), Bound::PosInf)], (2, 1)),
        ],
    )
}

/// Even integers and the point 1.
pub fn int_s2() -> LinearIntervalSystem {
    system(
        0,
        vec![
            branch(&[], &[], vec![(Bound::NegInf, Bound::PosInf)], (2, 0)),
            branch(&[], &[], vec![(form(1, &[]), form(1, &[]))], (1, 0)),
        ],
    )
}

/// `S[t] = (−∞,0] ∪ [t,2t]` for `t ≥ 0`.
pub fn int_s3() -> LinearIntervalSystem {
    system(1, vec![branch(&[0], &[&[1]], vec![(Bound::NegInf, form(0, &[0])), (form(0, &[1]), form(0, &[2]))], (1, 0))])
}

/// `S[t,s] = (−∞,0] ∪ [t+s,2t+2s] ∪ [3t+2s,4t+2s]` for `t, s ≥ 0`.
pub fn int_s4() -> LinearIntervalSystem {
    system(
        2,
        vec![branch(
            &[0, 0],
            &[&[1, 0], &[0, 1]],
            vec![
                (Bound::NegInf, form(0, &[0, 0])),
                (form(0, &[1, 1]), form(0, &[2, 2])),
                (form(0, &[3, 2]), form(0, &[4, 2])),
            ],
            (1, 0),
        )],
    )
}

/// `S[t,s] = (−∞,0] ∪ [3t+2s,4t+2s]` for `t, s ≥ 0`.
pub fn int_s5() -> LinearIntervalSystem {
    system(
        2,
        vec![branch(
            &[0, 0],
            &[&[1, 0], &[0, 1]],
            vec![(Bound::NegInf, form(0, &[0, 0])), (form(0, &[3, 2]), form(0, &[4, 2]))],
            (1, 0),
        )],
    )
}

/// `S[t] = [t,2t]` for `t ≥ 0`.
pub fn nat_interval() -> LinearIntervalSystem {
    system(1, vec![branch(&[0], &[&[1]], vec![(form(0, &[1]), form(0, &[2]))], (1, 0))])
}

/// `S[t] = (−∞,0] ∪ {t}` for `t ≥ 0`: an isolated point above the negatives.
pub fn nat_point() -> LinearIntervalSystem {
    system(1, vec![branch(&[0], &[&[1]], vec![(Bound::NegInf, form(0, &[0])), (form(0, &[1]), form(0, &[1]))], (1, 0))])
}

/// `S[t] = {0} ∪ [t,∞)` for `t ≥ 0`.
pub fn vass_zero_or_above() -> LinearIntervalSystem {
    system(1, vec![branch(&[0], &[&[1]], vec![(form(0, &[0]), form(0, &[0])), (form(0, &[1]), Bound::PosInf)], (1, 0))])
}

/// `S[t1,t2] = [t1,∞) ∖ {t2}` for `t1 ≥ 0`.
pub fn vass_above_minus_point() -> LinearIntervalSystem {
    system(
        2,
        vec![
            // t2 = t1 + λ2
            branch(
                &[0, 0],
                &[&[1, 0], &[1, 1]],
                vec![(form(0, &[1, 0]), form(-1, &[1, 1])), (form(1, &[1, 1]), Bound::PosInf)],
                (1, 0),
            ),
            // 0 ≤ t2 < t1
            branch(&[1, 0], &[&[1, 1], &[0, 1]], vec![(form(1, &[1, 1]), Bound::PosInf)], (1, 0)),
            // t2 < 0
            branch(&[0, -1], &[&[1, 0], &[0, -1]], vec![(form(0, &[1, 0]), Bound::PosInf)], (1, 0)),
        ],
    )
}

/// `S[t1,t2] = [t1,∞) ∪ {t2}` for `t1 ≥ 0`.
pub fn vass_above_plus_point() -> LinearIntervalSystem {
    system(
        2,
        vec![
            // t1 ≥ t2 + 2 with t2 ≥ 0: the point sits below a gap of size t1 − t2 − 1
            branch(
                &[2, 0],
                &[&[1, 1], &[0, 1]],
                vec![(form(0, &[0, 1]), form(0, &[0, 1])), (form(2, &[1, 1]), Bound::PosInf)],
                (1, 0),
            ),
            // t2 = t1 − 1 with t2 ≥ 0
            branch(&[1, 0], &[&[1], &[1]], vec![(form(0, &[1]), Bound::PosInf)], (1, 0)),
            // t2 ≥ t1
            branch(&[0, 0], &[&[1, 0], &[1, 1]], vec![(form(0, &[1, 0]), Bound::PosInf)], (1, 0)),
            // t2 < 0
            branch(&[0, -1], &[&[1, 0], &[0, -1]], vec![(form(0, &[1, 0]), Bound::PosInf)], (1, 0)),
        ],
    )
}

/// `S[t] = 2ℕ ∪ {1}`, independent of `t`.
pub fn vass_even_plus_one() -> LinearIntervalSystem {
    system(
        1,
        vec![
            branch(&[0], &[&[1]], vec![(form(0, &[0]), Bound::PosInf)], (2, 0)),
            branch(&[0], &[&[1]], vec![(form(1, &[0]), form(1, &[0]))], (1, 0)),
            branch(&[-1], &[&[-1]], vec![(form(0, &[0]), Bound::PosInf)], (2, 0)),
            branch(&[-1], &[&[-1]], vec![(form(1, &[0]), form(1, &[0]))], (1, 0)),
        ],
    )
}

fn example(name: &'static str, semantics: Semantics, np_hard: bool, system: LinearIntervalSystem) -> Example {
    Example { name, semantics, np_hard, system }
}

/// The integer-semantics regression set plus the interval family used with natural semantics.
pub fn integer_examples() -> Vec<Example> {
    vec![
        example("S1", Semantics::Integer, false, int_s1()),
        example("S2", Semantics::Integer, true, int_s2()),
        example("S3", Semantics::Integer, false, int_s3()),
        example("S4", Semantics::Integer, false, int_s4()),
        example("S5", Semantics::Integer, true, int_s5()),
        example("interval", Semantics::Natural, false, nat_interval()),
    ]
}

/// Every example with its expected verdict.
pub fn all() -> Vec<Example> {
    let mut out = integer_examples();
    out.extend([
        example("S5-nat", Semantics::Natural, true, int_s5()),
        example("point-nat", Semantics::Natural, true, nat_point()),
        example("zero-or-above", Semantics::Vass, true, vass_zero_or_above()),
        example("above-minus-point", Semantics::Vass, false, vass_above_minus_point()),
        example("above-plus-point", Semantics::Vass, true, vass_above_plus_point()),
        example("even-plus-one", Semantics::Vass, true, vass_even_plus_one()),
    ]);
    out
}

/// Looks up an example by name.
pub fn by_name(name: &str) -> Option<Example> {
    all().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::Interval;

    fn concrete(s: &LinearIntervalSystem, t: &[i64]) -> String {
        s.instantiate(&params(t)).unwrap().to_string()
    }

    #[test]
    fn examples_instantiate_as_described() {
        assert_eq!(concrete(&int_s5(), &[1, 49]), "(-inf,0] u [101,102]");
        assert_eq!(concrete(&vass_zero_or_above(), &[5]), "[0,0] u [5,inf)");
        assert_eq!(concrete(&vass_above_minus_point(), &[3, 5]), "[3,4] u [6,inf)");
        assert_eq!(concrete(&vass_above_minus_point(), &[3, 3]), "[4,inf)");
        assert_eq!(concrete(&vass_above_minus_point(), &[3, 1]), "[3,inf)");
        assert_eq!(concrete(&vass_above_minus_point(), &[3, -4]), "[3,inf)");
        assert_eq!(concrete(&vass_above_plus_point(), &[6, 2]), "[2,2] u [6,inf)");
        assert_eq!(concrete(&vass_above_plus_point(), &[3, 2]), "[2,inf)");
        assert_eq!(concrete(&vass_above_plus_point(), &[3, 9]), "[3,inf)");
        assert_eq!(concrete(&nat_point(), &[4]), "(-inf,0] u [4,4]");
        let s = vass_even_plus_one().instantiate(&params(&[7])).unwrap();
        for x in 0..12i64 {
            assert_eq!(s.contains(&BigInt::from(x)), x % 2 == 0 || x == 1, "x={x}");
        }
        let s1 = int_s1().instantiate(&[]).unwrap();
        for x in -10..10i64 {
            let expect = (x <= 0 && x % 2 == 0) || (x > 0 && x % 2 == 1);
            assert_eq!(s1.contains(&BigInt::from(x)), expect);
        }
        assert!(int_s2().instantiate(&[]).unwrap().contains(&BigInt::from(1)));
        assert!(Interval::point(0).is_finite());
    }

    #[test]
    fn branch_images_do_not_overlap_where_intended() {
        assert!(!vass_above_minus_point().union_mode());
        assert!(!vass_above_plus_point().union_mode());
        assert!(by_name("S5").is_some());
    }
}
