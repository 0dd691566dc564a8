//! Exact rational linear algebra for parameter maps.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

fn to_q(rows: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect()
}

/// Row-echelon form in place; returns the pivot columns.
fn echelon(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let src = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(src) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Column rank of a `rows × cols` integer matrix.
pub fn column_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut m = to_q(rows);
    echelon(&mut m, cols).len()
}

/// The unique rational solution of `P·λ = rhs` for a full-column-rank `P`, if consistent.
pub fn solve_unique(p: &[Vec<BigInt>], cols: usize, rhs: &[BigInt]) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = p
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.push(BigRational::from_integer(b.clone()));
            r
        })
        .collect();
    let pivots = echelon(&mut m, cols);
    // Inconsistent rows: all-zero coefficients with nonzero right-hand side.
    for r in &m {
        if r[..cols].iter().all(Zero::is_zero) && !r[cols].is_zero() {
            return None;
        }
    }
    if pivots.len() < cols {
        return None;
    }
    let mut sol = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = m[r][cols].clone();
    }
    Some(sol)
}

/// Whether `A·x = b` has a rational solution with `x ≥ 0` (Fourier–Motzkin elimination).
pub fn feasible_nonneg(a: &[Vec<BigInt>], b: &[BigInt], vars: usize) -> bool {
    // Constraints in the form coeffs · x ≤ bound.
    let mut cons: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for (row, rhs) in a.iter().zip(b) {
        let q: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let r = BigRational::from_integer(rhs.clone());
        cons.push((q.clone(), r.clone()));
        cons.push((q.iter().map(|x| -x).collect(), -r));
    }
    for j in 0..vars {
        let mut c = vec![BigRational::zero(); vars];
        c[j] = BigRational::from_integer(BigInt::from(-1));
        cons.push((c, BigRational::zero()));
    }
    for j in 0..vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in cons {
            if c.0[j].is_positive() {
                pos.push(c);
            } else if c.0[j].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for (pc, pb) in &pos {
            for (nc, nb) in &neg {
                let fp = -&nc[j];
                let fnn = pc[j].clone();
                let coeffs: Vec<BigRational> = pc.iter().zip(nc).map(|(x, y)| x * &fp + y * &fnn).collect();
                let bound = pb * &fp + nb * &fnn;
                rest.push((coeffs, bound));
            }
        }
        rest.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
        rest.dedup_by(|x, y| x.0 == y.0 && x.1 >= y.1);
        cons = rest;
        if cons.iter().any(|(c, bnd)| c.iter().all(Zero::is_zero) && bnd.is_negative()) {
            return false;
        }
    }
    cons.iter().all(|(_, bnd)| !bnd.is_negative())
}
