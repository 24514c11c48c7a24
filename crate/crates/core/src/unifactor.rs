//! Deterministic complete factorization of univariate polynomials over `F_q`.
//!
//! Square-free decomposition (with the Frobenius rewrite in characteristic
//! `p`), distinct-degree splitting, then Berlekamp equal-degree splitting.
//! Splitting uses traces `Tr(c * v)` of Berlekamp basis vectors against an
//! `F_p`-basis of `F_q`, which only requires enumerating `F_p`.

use crate::field::{Field, FieldElem};
use crate::linalg::nullspace;
use crate::unipoly::UniPoly;

/// `unit * prod factor^mult`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniFactorization {
    pub unit: FieldElem,
    pub factors: Vec<(UniPoly, u32)>,
}

impl UniFactorization {
    pub fn expand(&self, field: &Field) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(field, self.unit), |acc, (g, e)| &acc * &g.pow(*e as u64))
    }

    /// Irreducible factors listed with multiplicity, in canonical order.
    pub fn flattened(&self) -> Vec<UniPoly> {
        self.factors
            .iter()
            .flat_map(|(g, e)| std::iter::repeat_n(g.clone(), *e as usize))
            .collect()
    }
}

/// `f(y) = u(y^p)`, returns `u` with coefficients replaced by their p-th roots.
fn frobenius_root(f: &UniPoly) -> UniPoly {
    let field = f.field();
    let p = field.characteristic() as usize;
    let coeffs = f.coeffs().iter().step_by(p).map(|&c| field.pth_root(c)).collect();
    UniPoly::new(field, coeffs)
}

/// Square-free decomposition of a nonconstant polynomial.
///
/// Returns monic, square-free, pairwise coprime parts with their
/// multiplicities; `f = lc(f) * prod part^mult`.
pub fn squarefree_decompose(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    sqf_rec(&f.monic(), 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    out
}

fn sqf_rec(f: &UniPoly, scale: u32, out: &mut Vec<(UniPoly, u32)>) {
    let p = f.field().characteristic();
    let d = f.derivative();
    if d.is_zero() {
        sqf_rec(&frobenius_root(f), scale * p, out);
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        sqf_rec(&frobenius_root(&c), scale * p, out);
    }
}

/// Split a monic square-free polynomial into `(product, degree)` pieces where
/// every irreducible factor of `product` has exactly that degree.
pub fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let field = f.field();
    let q = field.size() as u64;
    let y = UniPoly::monomial(field, FieldElem::ONE, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = y.rem(&rest);
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &rest);
        let g = rest.gcd(&(&h - &y));
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let dr = rest.deg();
        out.push((rest, dr));
    }
    out
}

/// `Tr_{F_q/F_p}(v) mod m`
fn trace_mod(v: &UniPoly, m: &UniPoly) -> UniPoly {
    let field = v.field();
    let p = field.characteristic() as u64;
    let mut acc = v.rem(m);
    let mut cur = acc.clone();
    for _ in 1..field.degree() {
        cur = cur.powmod(p, m);
        acc = &acc + &cur;
    }
    acc
}

/// Berlekamp basis of `{v : v^q = v mod f}` for monic square-free `f`.
fn berlekamp_basis(f: &UniPoly) -> Vec<UniPoly> {
    let field = f.field();
    let n = f.deg();
    let q = field.size() as u64;
    let y = UniPoly::monomial(field, FieldElem::ONE, 1);
    let yq = y.powmod(q, f);
    // Column i of (Q - I)^T is y^{iq} mod f minus e_i.
    let mut rows = vec![vec![FieldElem::ZERO; n]; n];
    let mut cur = UniPoly::one(field);
    for i in 0..n {
        for (j, row) in rows.iter_mut().enumerate() {
            row[i] = cur.coeff(j);
        }
        rows[i][i] = field.sub(rows[i][i], FieldElem::ONE);
        cur = cur.mulmod(&yq, f);
    }
    nullspace(field, rows, n).into_iter().map(|v| UniPoly::new(field, v)).collect()
}

/// Irreducible factors of a monic square-free `f` whose factors all have degree `d`.
pub fn equal_degree(f: &UniPoly, d: usize) -> Vec<UniPoly> {
    let count = f.deg() / d;
    if count <= 1 {
        return vec![f.clone()];
    }
    let field = f.field();
    let basis = berlekamp_basis(f);
    debug_assert_eq!(basis.len(), count);
    let p = field.characteristic();
    let pw: Vec<FieldElem> = (0..field.degree()).map(|i| field.nth(p.pow(i))).collect();
    let mut parts = vec![f.clone()];
    'outer: for v in basis.iter().filter(|v| v.deg() > 0) {
        for &c in &pw {
            let w = trace_mod(&v.scale(c), f);
            let mut next = Vec::new();
            for u in parts.drain(..) {
                if u.deg() == d {
                    next.push(u);
                    continue;
                }
                let mut rest = u.clone();
                for s in 0..p {
                    if rest.deg() == 0 {
                        break;
                    }
                    let shifted = &w - &UniPoly::constant(field, field.from_int(s as i64));
                    let g = rest.gcd(&shifted.rem(&rest));
                    if !g.is_one() && g.deg() > 0 {
                        rest = rest.div_exact(&g).expect("gcd divides");
                        next.push(g);
                    }
                }
                if rest.deg() > 0 {
                    next.push(rest);
                }
            }
            parts = next;
            if parts.len() == count {
                break 'outer;
            }
        }
    }
    parts.sort();
    parts
}

/// Complete factorization into monic irreducibles; unit is the leading coefficient.
pub fn factor_univariate(f: &UniPoly) -> UniFactorization {
    let field = f.field();
    if f.is_zero() {
        return UniFactorization { unit: FieldElem::ZERO, factors: Vec::new() };
    }
    let unit = f.lc();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decompose(f) {
        for (piece, d) in distinct_degree(&part) {
            for g in equal_degree(&piece, d) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    debug_assert!({
        let r = UniFactorization { unit, factors: factors.clone() };
        r.expand(field) == *f
    });
    UniFactorization { unit, factors }
}
