//! Complete factorization of bivariate polynomials over `F_q`.
//!
//! Content removal, splitting by `gcd(f, df/dy)`, a squarefree specialisation
//! `t = t0`, Hensel lifting of the univariate factors modulo `(t - t0)^N`,
//! and recombination of lifted factors by exact division.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::sparsepoly::{ExpVec, SparsePoly};
use crate::unifactor::factor_univariate;
use crate::unipoly::UniPoly;

/// Polynomial in `(y, t)`, stored as coefficients of `y^j` in `F[t]`.
#[derive(Clone)]
pub struct BiPoly {
    field: Field,
    rows: Vec<UniPoly>,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for BiPoly {}

impl std::hash::Hash for BiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

impl PartialOrd for BiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rows
            .len()
            .cmp(&other.rows.len())
            .then_with(|| self.rows.iter().rev().cmp(other.rows.iter().rev()))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sparse().fmt_with(&["y".into(), "t".into()]))
    }
}

impl BiPoly {
    pub fn new(field: &Field, mut rows: Vec<UniPoly>) -> BiPoly {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { field: field.clone(), rows }
    }

    pub fn zero(field: &Field) -> BiPoly {
        BiPoly { field: field.clone(), rows: Vec::new() }
    }

    pub fn constant(field: &Field, c: FieldElem) -> BiPoly {
        BiPoly::new(field, vec![UniPoly::constant(field, c)])
    }

    /// Polynomial in `y` only.
    pub fn from_y(u: &UniPoly) -> BiPoly {
        let f = u.field();
        BiPoly::new(f, u.coeffs().iter().map(|&c| UniPoly::constant(f, c)).collect())
    }

    /// Polynomial in `t` only.
    pub fn from_t(u: &UniPoly) -> BiPoly {
        BiPoly::new(u.field(), vec![u.clone()])
    }

    /// From a two-variable sparse polynomial (`y` = variable 0, `t` = variable 1).
    pub fn from_sparse(p: &SparsePoly) -> Result<BiPoly> {
        if p.nvars() != 2 {
            return Err(Error::ShapeMismatch("expected a bivariate polynomial".into()));
        }
        let field = p.field();
        let mut rows: Vec<Vec<FieldElem>> =
            vec![vec![FieldElem::ZERO; p.degree_in(1) as usize + 1]; p.degree_in(0) as usize + 1];
        for (e, &c) in p.terms() {
            rows[e.get(0) as usize][e.get(1) as usize] = c;
        }
        Ok(BiPoly::new(field, rows.into_iter().map(|r| UniPoly::new(field, r)).collect()))
    }

    pub fn to_sparse(&self) -> SparsePoly {
        let terms = self.rows.iter().enumerate().flat_map(|(j, r)| {
            r.coeffs()
                .iter()
                .enumerate()
                .map(move |(k, &c)| (ExpVec::new(&[j as u32, k as u32]), c))
        });
        SparsePoly::from_terms(&self.field, 2, terms)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> &[UniPoly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_y(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_t(&self) -> usize {
        self.rows.iter().map(|r| r.deg()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.rows.len() <= 1 && self.rows.first().is_none_or(|r| r.is_constant())
    }

    /// Coefficient of the highest power of `y`, in `F[t]`.
    pub fn lc_y(&self) -> UniPoly {
        self.rows.last().cloned().unwrap_or_else(|| UniPoly::zero(&self.field))
    }

    /// Leading coefficient for the lexicographic order `y > t`.
    pub fn leading_coeff(&self) -> FieldElem {
        self.rows.last().map(|r| r.lc()).unwrap_or(FieldElem::ZERO)
    }

    pub fn scale(&self, c: FieldElem) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.scale(c)).collect())
    }

    /// Scalar multiple with leading coefficient 1.
    pub fn normalized(&self) -> BiPoly {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(self.field.inv(lc))
    }

    pub fn eval_t(&self, t0: FieldElem) -> UniPoly {
        UniPoly::new(&self.field, self.rows.iter().map(|r| r.eval(t0)).collect())
    }

    pub fn derivative_y(&self) -> BiPoly {
        let f = &self.field;
        BiPoly::new(
            f,
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.scale(f.from_int(j as i64)))
                .collect(),
        )
    }

    pub fn derivative_t(&self) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.derivative()).collect())
    }

    /// Exchange `y` and `t`.
    pub fn swap(&self) -> BiPoly {
        let f = &self.field;
        let dt = self.deg_t();
        let mut rows = vec![vec![FieldElem::ZERO; self.rows.len()]; dt + 1];
        for (j, r) in self.rows.iter().enumerate() {
            for (k, &c) in r.coeffs().iter().enumerate() {
                rows[k][j] = c;
            }
        }
        BiPoly::new(f, rows.into_iter().map(|r| UniPoly::new(f, r)).collect())
    }

    /// `self(y, t + c)`
    pub fn shift_t(&self, c: FieldElem) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.taylor_shift(c)).collect())
    }

    /// `gcd` of the coefficients in `F[t]` (monic).
    pub fn content(&self) -> UniPoly {
        let mut g = UniPoly::zero(&self.field);
        for r in &self.rows {
            g = g.gcd(r);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Exact division of every coefficient by `u(t)`.
    pub fn div_t(&self, u: &UniPoly) -> Option<BiPoly> {
        let rows: Option<Vec<UniPoly>> = self.rows.iter().map(|r| r.div_exact(u)).collect();
        Some(BiPoly::new(&self.field, rows?))
    }

    pub fn primitive_part(&self) -> BiPoly {
        let c = self.content();
        if c.is_one() || c.is_zero() {
            return self.clone();
        }
        self.div_t(&c).expect("content divides")
    }

    /// Exact quotient in `F[t][y]`, if any.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(BiPoly::zero(&self.field));
        }
        if d.deg_y() > self.deg_y() {
            return None;
        }
        let f = &self.field;
        let dl = d.lc_y();
        let dn = d.deg_y();
        let mut r = self.rows.clone();
        let mut q = vec![UniPoly::zero(f); self.deg_y() - dn + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dn];
            if top.is_zero() {
                continue;
            }
            let c = top.div_exact(&dl)?;
            for (j, dr) in d.rows.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dr);
            }
            q[i] = c;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(BiPoly::new(f, q))
    }

    /// `lc(b)^k * self mod b` in `F[t][y]`, with `k = deg_y(self) - deg_y(b) + 1`.
    fn prem(&self, b: &BiPoly) -> BiPoly {
        let f = &self.field;
        let bn = b.deg_y();
        let bl = b.lc_y();
        let mut r = self.rows.clone();
        while r.len() > bn && !r.is_empty() {
            let top = r.pop().unwrap();
            let shift = r.len() - bn;
            for x in r.iter_mut() {
                *x = &*x * &bl;
            }
            for (j, br) in b.rows.iter().enumerate().take(bn) {
                r[shift + j] = &r[shift + j] - &(&top * br);
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        BiPoly::new(f, r)
    }

    /// Greatest common divisor, normalized to leading coefficient 1.
    pub fn gcd(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() && b.deg_y() > 0 {
            let r = a.prem(&b);
            a = b;
            b = r.primitive_part();
        }
        let g = if b.is_zero() { a } else { BiPoly::constant(&self.field, FieldElem::ONE) };
        (&g * &BiPoly::from_t(&c)).normalized()
    }

    /// `r` with `r^p = self`, assuming both partial derivatives vanish.
    fn pth_root(&self) -> BiPoly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let rows = self
            .rows
            .iter()
            .step_by(p)
            .map(|r| UniPoly::new(f, r.coeffs().iter().step_by(p).map(|&c| f.pth_root(c)).collect()))
            .collect();
        BiPoly::new(f, rows)
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut r = BiPoly::constant(&self.field, FieldElem::ONE);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl std::ops::Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero(f);
        }
        let mut rows = vec![UniPoly::zero(f); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BiPoly::new(f, rows)
    }
}

impl std::ops::Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let f = &self.field;
        let n = self.rows.len().max(rhs.rows.len());
        let z = UniPoly::zero(f);
        BiPoly::new(
            f,
            (0..n)
                .map(|i| self.rows.get(i).unwrap_or(&z) - rhs.rows.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

/// `unit * prod factor^mult` with factors of leading coefficient 1, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiFactorization {
    pub unit: FieldElem,
    pub factors: Vec<(BiPoly, u32)>,
}

impl BiFactorization {
    pub fn expand(&self, field: &Field) -> BiPoly {
        self.factors
            .iter()
            .fold(BiPoly::constant(field, self.unit), |acc, (g, e)| &acc * &g.pow(*e))
    }
}

// ---------------------------------------------------------------------------
// Truncated power series in s with coefficients in F[y]: index = power of s.

type Series = Vec<UniPoly>;

fn to_series(f: &BiPoly, n: usize) -> Series {
    let field = f.field();
    (0..n)
        .map(|k| UniPoly::new(field, f.rows.iter().map(|r| r.coeff(k)).collect()))
        .collect()
}

fn from_series(s: &Series) -> BiPoly {
    let field = s[0].field();
    let dy = s.iter().map(|u| u.deg()).max().unwrap_or(0);
    let rows = (0..=dy)
        .map(|j| UniPoly::new(field, s.iter().map(|u| u.coeff(j)).collect()))
        .collect();
    BiPoly::new(field, rows)
}

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let field = a[0].field();
    (0..n)
        .map(|k| {
            let mut acc = UniPoly::zero(field);
            for i in 0..=k {
                if i < a.len() && k - i < b.len() && !a[i].is_zero() && !b[k - i].is_zero() {
                    acc = &acc + &(&a[i] * &b[k - i]);
                }
            }
            acc
        })
        .collect()
}

/// Inverse of a power series in `F[[s]]` with nonzero constant term.
fn inverse_series(u: &UniPoly, n: usize) -> Vec<FieldElem> {
    let f = u.field();
    let c0 = f.inv(u.coeff(0));
    let mut inv = vec![FieldElem::ZERO; n];
    inv[0] = c0;
    for k in 1..n {
        let mut acc = FieldElem::ZERO;
        for i in 1..=k {
            acc = f.add(acc, f.mul(u.coeff(i), inv[k - i]));
        }
        inv[k] = f.neg(f.mul(acc, c0));
    }
    inv
}

/// Lift `F = g0 * h0 mod s` to `F = G * H mod s^n` for `F` monic in `y`.
fn lift_pair(fs: &Series, g0: &UniPoly, h0: &UniPoly, n: usize) -> Result<(Series, Series)> {
    let field = g0.field();
    let (g, _, b) = g0.ext_gcd(h0);
    if !g.is_one() {
        return Err(Error::NotCoprime);
    }
    let mut gs: Series = vec![UniPoly::zero(field); n];
    let mut hs: Series = vec![UniPoly::zero(field); n];
    gs[0] = g0.clone();
    hs[0] = h0.clone();
    for k in 1..n {
        let mut e = fs.get(k).cloned().unwrap_or_else(|| UniPoly::zero(field));
        for i in 0..=k {
            if !gs[i].is_zero() && !hs[k - i].is_zero() {
                e = &e - &(&gs[i] * &hs[k - i]);
            }
        }
        if e.is_zero() {
            continue;
        }
        let dg = (&e * &b).rem(g0);
        let dh = (&e - &(&dg * h0)).div_exact(g0).ok_or_else(|| Error::Internal("lift step".into()))?;
        gs[k] = dg;
        hs[k] = dh;
    }
    Ok((gs, hs))
}

fn lift_all(fs: &Series, factors: &[UniPoly], n: usize) -> Result<Vec<Series>> {
    if factors.len() == 1 {
        return Ok(vec![fs.clone()]);
    }
    let rest = factors[1..].iter().fold(UniPoly::one(fs[0].field()), |acc, u| &acc * u);
    let (g, h) = lift_pair(fs, &factors[0], &rest, n)?;
    let mut out = vec![g];
    out.extend(lift_all(&h, &factors[1..], n)?);
    Ok(out)
}

/// Hensel lift of `f(y, t0) = g0 * h0` to `G * H = f mod (t - t0)^precision`.
pub fn hensel_lift(
    f: &BiPoly,
    g0: &UniPoly,
    h0: &UniPoly,
    t0: FieldElem,
    precision: usize,
) -> Result<(BiPoly, BiPoly)> {
    if f.lc_y().deg() != 0 || !f.lc_y().is_one() || !g0.is_monic() || !h0.is_monic() {
        return Err(Error::NotMonic);
    }
    if g0 * h0 != f.eval_t(t0) {
        return Err(Error::ShapeMismatch("g0 * h0 does not match f(y, t0)".into()));
    }
    let n = precision.max(1);
    let shifted = f.shift_t(t0);
    let fs = to_series(&shifted, n);
    let (gs, hs) = lift_pair(&fs, g0, h0, n)?;
    let neg = f.field().neg(t0);
    Ok((from_series(&gs).shift_t(neg), from_series(&hs).shift_t(neg)))
}

/// Complete factorization of a bivariate polynomial.
pub fn factor_bivariate(f: &BiPoly) -> Result<BiFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut irreducible = Vec::new();
    if !f.is_constant() {
        collect_irreducible(f, &mut irreducible)?;
    }
    let mut distinct: Vec<BiPoly> = irreducible.into_iter().map(|g| g.normalized()).collect();
    distinct.sort();
    distinct.dedup();
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for g in distinct {
        let mut e = 0;
        while let Some(q) = rest.div_exact(&g) {
            rest = q;
            e += 1;
        }
        if e == 0 {
            return Err(Error::Internal("bivariate factor does not divide".into()));
        }
        factors.push((g, e));
    }
    if !rest.is_constant() {
        return Err(Error::Internal("bivariate cofactor is not constant".into()));
    }
    factors.sort();
    Ok(BiFactorization { unit: rest.leading_coeff(), factors })
}

fn collect_irreducible(f: &BiPoly, out: &mut Vec<BiPoly>) -> Result<()> {
    if f.deg_y() == 0 {
        for (u, _) in factor_univariate(&f.lc_y()).factors {
            out.push(BiPoly::from_t(&u));
        }
        return Ok(());
    }
    let c = f.content();
    let f = if c.is_constant() {
        f.clone()
    } else {
        for (u, _) in factor_univariate(&c).factors {
            out.push(BiPoly::from_t(&u));
        }
        f.div_t(&c).expect("content divides")
    };
    if f.deg_y() == 1 {
        out.push(f);
        return Ok(());
    }
    if f.deg_t() == 0 {
        for (u, _) in factor_univariate(&f.eval_t(FieldElem::ZERO)).factors {
            out.push(BiPoly::from_y(&u));
        }
        return Ok(());
    }
    let fy = f.derivative_y();
    if fy.is_zero() {
        if f.derivative_t().is_zero() {
            return collect_irreducible(&f.pth_root(), out);
        }
        let mut swapped = Vec::new();
        collect_irreducible(&f.swap(), &mut swapped)?;
        out.extend(swapped.iter().map(|g| g.swap()));
        return Ok(());
    }
    let field = f.field();
    let q = field.size() as usize;
    let bound = 2 * f.deg_y() * f.deg_t() + 1;
    let lc = f.lc_y();
    let t0 = (0..q.min(bound) as u32).map(|i| field.nth(i)).find(|&t0| {
        !lc.eval(t0).is_zero() && f.eval_t(t0).is_squarefree()
    });
    if let Some(t0) = t0 {
        return lift_and_recombine(&f, t0, out);
    }
    let g = f.gcd(&fy);
    if g.deg_y() > 0 {
        collect_irreducible(&g, out)?;
        let cof = f.div_exact(&g).ok_or_else(|| Error::Internal("gcd does not divide".into()))?;
        return collect_irreducible(&cof, out);
    }
    Err(Error::FieldTooSmall { required: bound as u64, available: q as u64 })
}

/// Factor a primitive `f` whose specialisation at `t0` is squarefree of full degree.
fn lift_and_recombine(f: &BiPoly, t0: FieldElem, out: &mut Vec<BiPoly>) -> Result<()> {
    let field = f.field();
    let uni = factor_univariate(&f.eval_t(t0));
    let locals: Vec<UniPoly> = uni.factors.iter().map(|(u, _)| u.clone()).collect();
    if locals.len() == 1 {
        out.push(f.clone());
        return Ok(());
    }
    let shifted = f.shift_t(t0);
    let n = 2 * f.deg_t() + 1;
    let lc_inv = inverse_series(&shifted.lc_y(), n);
    let lc_series: Series = lc_inv.iter().map(|&c| UniPoly::constant(field, c)).collect();
    let monic = series_mul(&lc_series, &to_series(&shifted, n), n);
    let lifted = lift_all(&monic, &locals, n)?;

    let mut rest = shifted;
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let mut hit = None;
        for subset in combinations(&remaining, k) {
            let lc = rest.lc_y();
            let mut cand: Series = (0..n).map(|i| UniPoly::constant(field, lc.coeff(i))).collect();
            for &i in &subset {
                cand = series_mul(&cand, &lifted[i], n);
            }
            let cand = from_series(&cand).primitive_part();
            if let Some(q) = rest.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                rest = q;
                remaining.retain(|i| !subset.contains(i));
            }
            None => k += 1,
        }
    }
    if !rest.is_constant() {
        found.push(rest);
    }
    let back = field.neg(t0);
    out.extend(found.iter().map(|g| g.shift_t(back)));
    Ok(())
}

/// `k`-subsets of `items` in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let m = items.len();
    if k > m {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
