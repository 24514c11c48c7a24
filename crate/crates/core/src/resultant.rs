//! Sylvester resultants of univariate polynomials and of projections.

use crate::error::{Error, Result};
use crate::field::{FieldElem};
use crate::linalg::determinant;
use crate::sparsepoly::SparsePoly;
use crate::unipoly::UniPoly;

/// `(d+e) x (d+e)` matrix whose first `e` columns hold shifted coefficient
/// vectors of `f` (highest degree first) and whose last `d` columns hold those of `g`.
pub fn sylvester_matrix(f: &UniPoly, g: &UniPoly) -> Result<Vec<Vec<FieldElem>>> {
    let (Some(d), Some(e)) = (f.degree(), g.degree()) else {
        return Err(Error::DegreeZero);
    };
    if d == 0 || e == 0 {
        return Err(Error::DegreeZero);
    }
    let n = d + e;
    let mut m = vec![vec![FieldElem::ZERO; n]; n];
    for col in 0..e {
        for i in 0..=d {
            m[col + i][col] = f.coeff(d - i);
        }
    }
    for col in 0..d {
        for i in 0..=e {
            m[col + i][e + col] = g.coeff(e - i);
        }
    }
    Ok(m)
}

/// `Res_y(f, g)`; zero exactly when `f` and `g` share a nonconstant factor.
pub fn resultant_univariate(f: &UniPoly, g: &UniPoly) -> Result<FieldElem> {
    let m = sylvester_matrix(f, g)?;
    Ok(determinant(f.field(), m))
}

/// `Res_y(f(y, a), g(y, a))` for `f, g` monic in `y = x_0`.
pub fn resultant_at_point(f: &SparsePoly, g: &SparsePoly, a: &[FieldElem]) -> Result<FieldElem> {
    if !f.is_monic_in(0) || !g.is_monic_in(0) {
        return Err(Error::NotMonic);
    }
    if a.len() + 1 != f.nvars() || f.nvars() != g.nvars() {
        return Err(Error::ShapeMismatch("point does not match x variables".into()));
    }
    resultant_univariate(&f.project_to_y(a), &g.project_to_y(a))
}
