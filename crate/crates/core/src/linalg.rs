//! Dense linear algebra over a finite field.

use crate::field::{Field, FieldElem};

/// Basis of `{x : A x = 0}` for a row-major matrix `A` with `cols` columns.
pub fn nullspace(field: &Field, mut a: Vec<Vec<FieldElem>>, cols: usize) -> Vec<Vec<FieldElem>> {
    let f = field;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = f.inv(a[row][col]);
        for v in a[row].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for r in 0..a.len() {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let c = a[r][col];
            for k in 0..cols {
                let s = f.mul(c, a[row][k]);
                a[r][k] = f.sub(a[r][k], s);
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![FieldElem::ZERO; cols];
            v[fc] = FieldElem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a[r][fc]);
            }
            v
        })
        .collect()
}

/// Determinant by Gaussian elimination, pivoting on the first nonzero entry in row order.
pub fn determinant(field: &Field, mut a: Vec<Vec<FieldElem>>) -> FieldElem {
    let f = field;
    let n = a.len();
    let mut det = FieldElem::ONE;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return FieldElem::ZERO;
        };
        if pr != col {
            a.swap(pr, col);
            det = f.neg(det);
        }
        let pv = a[col][col];
        det = f.mul(det, pv);
        let inv = f.inv(pv);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let c = f.mul(a[r][col], inv);
            for k in col..n {
                let s = f.mul(c, a[col][k]);
                a[r][k] = f.sub(a[r][k], s);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn nullspace_vectors_annihilate() {
        let f = make_field(5, 1).unwrap();
        let m: Vec<Vec<FieldElem>> = [[1, 2, 3, 4], [2, 4, 1, 3], [3, 1, 4, 2]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
            .collect();
        let ns = nullspace(&f, m.clone(), 4);
        assert_eq!(ns.len(), 3);
        for v in &ns {
            for row in &m {
                let s = row.iter().zip(v).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn determinant_small() {
        let f = make_field(7, 1).unwrap();
        let m = vec![vec![f.from_int(0), f.from_int(1)], vec![f.from_int(1), f.from_int(0)]];
        assert_eq!(determinant(&f, m), f.from_int(-1));
    }
}
