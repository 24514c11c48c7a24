//! Exact phase-one simplex over an ordered field.

use std::fmt::Debug;

use num_traits::{Num, Signed};

/// Ordered field usable by the simplex.
pub trait Scalar: Clone + Num + Signed + PartialOrd + Debug {}

impl<T: Clone + Num + Signed + PartialOrd + Debug> Scalar for T {}

/// Whether `{x >= 0 : A x = b}` is nonempty.
///
/// Phase-one simplex with artificial variables and Bland's rule, so it
/// terminates without cycling and is exact for exact scalars.
pub fn feasible<T: Scalar>(a: &[Vec<T>], b: &[T]) -> bool {
    let m = a.len();
    assert_eq!(m, b.len());
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m;
    // rows: [A | I | b], made to have b >= 0
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut r: Vec<T> = Vec::with_capacity(width + 1);
        for v in &a[i] {
            r.push(if flip { -v.clone() } else { v.clone() });
        }
        for k in 0..m {
            r.push(if k == i { T::one() } else { T::zero() });
        }
        r.push(if flip { -b[i].clone() } else { b[i].clone() });
        rows.push(r);
    }
    let mut basis: Vec<usize> = (n..width).collect();
    // reduced costs of "minimize sum of artificials", last entry = -objective
    let mut cost = vec![T::zero(); width + 1];
    for r in &rows {
        for j in 0..n {
            cost[j] = cost[j].clone() - r[j].clone();
        }
        cost[width] = cost[width].clone() - r[width].clone();
    }
    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, T)> = None;
        for (i, r) in rows.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = r[width].clone() / r[enter].clone();
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            break;
        };
        let pv = rows[pr][enter].clone();
        for v in rows[pr].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        let pivot_row = rows[pr].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == pr || r[enter].is_zero() {
                continue;
            }
            let c = r[enter].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - c.clone() * p.clone();
                }
            }
        }
        let c = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v = v.clone() - c.clone() * p.clone();
            }
        }
        basis[pr] = enter;
    }
    cost[width].is_zero()
}
