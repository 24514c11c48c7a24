//! Sparse multivariate polynomials over `F_q`.
//!
//! Terms live in a map from exponent vectors to nonzero coefficients, ordered
//! graded-lexicographically (total degree first, then the exponent of the
//! lowest-index variable). The largest key is the leading term.
//!
//! Polynomials that single out a main variable use the `(y, x1, ..., xn)`
//! layout: `y` is variable 0 and `x_i` is variable `i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, RejectReason, Result};
use crate::field::{Field, FieldElem};
use crate::unipoly::UniPoly;

/// Exponent vector with graded-lex ordering.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpVec {
    total: u32,
    exps: SmallVec<[u16; 8]>,
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

impl ExpVec {
    pub fn new(exps: &[u32]) -> ExpVec {
        let exps: SmallVec<[u16; 8]> = exps.iter().map(|&e| e as u16).collect();
        ExpVec { total: exps.iter().map(|&e| e as u32).sum(), exps }
    }

    pub fn zero(n: usize) -> ExpVec {
        ExpVec { total: 0, exps: SmallVec::from_elem(0, n) }
    }

    pub fn unit(n: usize, i: usize, e: u32) -> ExpVec {
        let mut v = ExpVec::zero(n);
        v.exps[i] = e as u16;
        v.total = e;
        v
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.exps.iter().map(|&e| e as u32).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.exps.iter().map(|&e| e as u32)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec {
            total: self.total + other.total,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &ExpVec) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other - self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &ExpVec) -> ExpVec {
        ExpVec {
            total: other.total - self.total,
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn with(&self, i: usize, e: u32) -> ExpVec {
        let mut v = self.clone();
        v.total = v.total - v.exps[i] as u32 + e;
        v.exps[i] = e as u16;
        v
    }

    fn from_small(exps: SmallVec<[u16; 8]>) -> ExpVec {
        ExpVec { total: exps.iter().map(|&e| e as u32).sum(), exps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineKind {
    Add,
    Mul,
}

#[derive(Clone)]
pub struct SparsePoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<ExpVec, FieldElem>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl PartialOrd for SparsePoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares term sequences from the leading term down.
impl Ord for SparsePoly {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.nvars
            .cmp(&other.nvars)
            .then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl std::hash::Hash for SparsePoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        for (e, c) in &self.terms {
            e.hash(state);
            c.hash(state);
        }
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = x_names(self.nvars);
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// `x1, ..., xn`
pub fn x_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `y, x1, ..., x(n-1)`
pub fn y_names(n: usize) -> Vec<String> {
    std::iter::once("y".to_string()).chain((1..n).map(|i| format!("x{i}"))).collect()
}

impl SparsePoly {
    pub fn zero(field: &Field, nvars: usize) -> SparsePoly {
        SparsePoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, nvars: usize, c: FieldElem) -> SparsePoly {
        let mut p = SparsePoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(ExpVec::zero(nvars), c);
        }
        p
    }

    pub fn one(field: &Field, nvars: usize) -> SparsePoly {
        SparsePoly::constant(field, nvars, FieldElem::ONE)
    }

    /// `c * x_i^e`
    pub fn monomial(field: &Field, nvars: usize, exps: ExpVec, c: FieldElem) -> SparsePoly {
        let mut p = SparsePoly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> SparsePoly {
        SparsePoly::monomial(field, nvars, ExpVec::unit(nvars, i, 1), FieldElem::ONE)
    }

    /// Sum of terms, merging repeated exponent vectors and dropping zeros.
    pub fn from_terms<I>(field: &Field, nvars: usize, terms: I) -> SparsePoly
    where
        I: IntoIterator<Item = (ExpVec, FieldElem)>,
    {
        let mut p = SparsePoly::zero(field, nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: ExpVec, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Embed a univariate polynomial as a polynomial in variable `var`.
    pub fn from_uni(u: &UniPoly, nvars: usize, var: usize) -> SparsePoly {
        SparsePoly::from_terms(
            u.field(),
            nvars,
            u.coeffs().iter().enumerate().map(|(i, &c)| (ExpVec::unit(nvars, var, i as u32), c)),
        )
    }

    /// View as univariate in `var`; `None` if another variable occurs.
    pub fn to_uni(&self, var: usize) -> Option<UniPoly> {
        let mut v = vec![FieldElem::ZERO; self.degree_in(var) as usize + 1];
        for (e, &c) in &self.terms {
            if e.iter().enumerate().any(|(i, x)| i != var && x > 0) {
                return None;
            }
            v[e.get(var) as usize] = c;
        }
        Some(UniPoly::new(&self.field, v))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of nonzero terms.
    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.total == 0)
    }

    pub fn constant_value(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return Some(FieldElem::ZERO);
        }
        if self.is_constant() {
            return self.terms.values().next().copied();
        }
        None
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &FieldElem)> {
        self.terms.iter().rev()
    }

    pub fn coeff_of(&self, e: &ExpVec) -> FieldElem {
        self.terms.get(e).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|e| e.to_vec()).collect()
    }

    pub fn leading_term(&self) -> Option<(&ExpVec, FieldElem)> {
        self.terms.iter().next_back().map(|(e, &c)| (e, c))
    }

    /// Coefficient of the leading term (zero for the zero polynomial).
    pub fn leading_coeff(&self) -> FieldElem {
        self.leading_term().map(|t| t.1).unwrap_or(FieldElem::ZERO)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.get(i)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.nvars).map(|i| self.degree_in(i)).collect()
    }

    /// Maximum degree of any single variable.
    pub fn individual_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total).max().unwrap_or(0)
    }

    /// Indices of variables that occur.
    pub fn present_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.degree_in(i) > 0).collect()
    }

    pub fn scale(&self, c: FieldElem) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        SparsePoly {
            field: f.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))).collect(),
        }
    }

    /// Scalar multiple whose leading coefficient is 1, with the removed scalar.
    pub fn normalized(&self) -> (FieldElem, SparsePoly) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return (FieldElem::ONE, self.clone());
        }
        (lc, self.scale(self.field.inv(lc)))
    }

    pub fn pow(&self, mut e: u32) -> SparsePoly {
        let mut r = SparsePoly::one(&self.field, self.nvars);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    fn check_shape(&self, other: &SparsePoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if *self.field != *other.field {
            return Err(Error::ShapeMismatch("different fields".into()));
        }
        Ok(())
    }

    pub fn combine(&self, other: &SparsePoly, kind: CombineKind) -> Result<SparsePoly> {
        self.check_shape(other)?;
        Ok(match kind {
            CombineKind::Add => self + other,
            CombineKind::Mul => self * other,
        })
    }

    /// Full substitution.
    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[FieldElem]) -> FieldElem {
        let f = &self.field;
        let mut acc = FieldElem::ZERO;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, x) in e.iter().enumerate() {
                if x > 0 {
                    t = f.mul(t, f.pow(point[i], x as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitute `values[j]` for variable `vars[j]`; arity is unchanged and the
    /// substituted variables no longer occur.
    pub fn partial_evaluate(&self, vars: &[usize], values: &[FieldElem]) -> Result<SparsePoly> {
        if vars.len() != values.len() || vars.iter().any(|&v| v >= self.nvars) {
            return Err(Error::ShapeMismatch("substitution does not match variables".into()));
        }
        let f = &self.field;
        let mut out = SparsePoly::zero(f, self.nvars);
        for (e, &c) in &self.terms {
            let mut t = c;
            let mut ne = e.clone();
            for (&v, &a) in vars.iter().zip(values) {
                let x = e.get(v);
                if x > 0 {
                    t = f.mul(t, f.pow(a, x as u64));
                    ne = ne.with(v, 0);
                }
            }
            out.add_term(ne, t);
        }
        Ok(out)
    }

    /// `f = sum_j f_j * x_i^j`; returns `[f_0, f_1, ...]` with `x_i` absent.
    pub fn coefficients_in(&self, i: usize) -> Vec<SparsePoly> {
        let k = self.degree_in(i) as usize;
        let mut out = vec![SparsePoly::zero(&self.field, self.nvars); k + 1];
        for (e, &c) in &self.terms {
            out[e.get(i) as usize].terms.insert(e.with(i, 0), c);
        }
        out
    }

    /// Leading coefficient and degree with respect to `x_i`.
    pub fn lead_and_degree(&self, i: usize) -> Result<(SparsePoly, u32)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if i >= self.nvars {
            return Err(Error::ShapeMismatch(format!("no variable {i}")));
        }
        let mut coeffs = self.coefficients_in(i);
        let k = coeffs.len() - 1;
        Ok((coeffs.swap_remove(k), k as u32))
    }

    pub fn is_monic_in(&self, i: usize) -> bool {
        self.lead_and_degree(i).map(|(lc, _)| lc.constant_value() == Some(FieldElem::ONE)).unwrap_or(false)
    }

    /// Univariate in `y = x_0` with coefficients given by a full evaluation of the rest.
    pub fn project_to_y(&self, a: &[FieldElem]) -> UniPoly {
        let f = &self.field;
        let mut v = vec![FieldElem::ZERO; self.degree_in(0) as usize + 1];
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, x) in e.iter().enumerate().skip(1) {
                if x > 0 {
                    t = f.mul(t, f.pow(a[i - 1], x as u64));
                }
            }
            let j = e.get(0) as usize;
            v[j] = f.add(v[j], t);
        }
        UniPoly::new(f, v)
    }

    /// `f(y, (1-t) a + t b)` as coefficients of `y^j`, each a polynomial in `t`.
    pub fn restrict_to_line_dense(&self, a: &[FieldElem], b: &[FieldElem]) -> Result<Vec<UniPoly>> {
        let n = self.nvars.saturating_sub(1);
        if a.len() != n || b.len() != n || self.nvars == 0 {
            return Err(Error::ShapeMismatch("line endpoints do not match x variables".into()));
        }
        let f = &self.field;
        let degs = self.degrees();
        // powers[i][e] = (a_i + t (b_i - a_i))^e
        let powers: Vec<Vec<UniPoly>> = (0..n)
            .map(|i| {
                let lin = UniPoly::new(f, vec![a[i], f.sub(b[i], a[i])]);
                let mut v = vec![UniPoly::one(f)];
                for e in 1..=degs[i + 1] as usize {
                    let next = &v[e - 1] * &lin;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = vec![UniPoly::zero(f); degs[0] as usize + 1];
        for (e, &c) in &self.terms {
            let mut t = UniPoly::constant(f, c);
            for i in 0..n {
                let x = e.get(i + 1) as usize;
                if x > 0 {
                    t = &t * &powers[i][x];
                }
            }
            let j = e.get(0) as usize;
            out[j] = &out[j] + &t;
        }
        while out.len() > 1 && out.last().is_some_and(|u| u.is_zero()) {
            out.pop();
        }
        Ok(out)
    }

    /// `f(y, (1-t) a + t b)` as a polynomial in `(y, t)`.
    pub fn restrict_to_line(&self, a: &[FieldElem], b: &[FieldElem]) -> Result<SparsePoly> {
        let rows = self.restrict_to_line_dense(a, b)?;
        let terms = rows.iter().enumerate().flat_map(|(j, u)| {
            u.coeffs()
                .iter()
                .enumerate()
                .map(move |(k, &c)| (ExpVec::new(&[j as u32, k as u32]), c))
        });
        Ok(SparsePoly::from_terms(&self.field, 2, terms))
    }

    /// Rename variables: variable `i` becomes `map[i]` in a polynomial of arity `nvars`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> SparsePoly {
        let terms = self.terms.iter().map(|(e, &c)| {
            let mut v = vec![0u32; nvars];
            for (i, x) in e.iter().enumerate() {
                if x > 0 {
                    v[map[i]] += x;
                }
            }
            (ExpVec::new(&v), c)
        });
        SparsePoly::from_terms(&self.field, nvars, terms)
    }

    /// Drop absent variables; returns the compressed polynomial and, for each
    /// new index, the original variable.
    pub fn compress(&self) -> (SparsePoly, Vec<usize>) {
        let present = self.present_vars();
        let mut map = vec![0; self.nvars];
        for (new, &old) in present.iter().enumerate() {
            map[old] = new;
        }
        let terms = self.terms.iter().map(|(e, &c)| {
            let v: Vec<u32> = present.iter().map(|&i| e.get(i)).collect();
            (ExpVec::new(&v), c)
        });
        (SparsePoly::from_terms(&self.field, present.len(), terms), present)
    }

    /// Inverse of [`compress`](Self::compress).
    pub fn expand(&self, nvars: usize, present: &[usize]) -> SparsePoly {
        self.remap(nvars, present)
    }

    /// Apply a coefficient map into another field.
    pub fn map_coeffs(&self, field: &Field, m: impl Fn(FieldElem) -> FieldElem) -> SparsePoly {
        SparsePoly::from_terms(field, self.nvars, self.terms.iter().map(|(e, &c)| (e.clone(), m(c))))
    }

    /// Map coefficients partially; `None` if some coefficient has no image.
    pub fn try_map_coeffs(
        &self,
        field: &Field,
        m: impl Fn(FieldElem) -> Option<FieldElem>,
    ) -> Option<SparsePoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, &c) in &self.terms {
            terms.push((e.clone(), m(c)?));
        }
        Some(SparsePoly::from_terms(field, self.nvars, terms))
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let parts: Vec<String> = self
            .terms()
            .map(|(e, &c)| {
                let mut factors = Vec::new();
                for (i, x) in e.iter().enumerate() {
                    match x {
                        0 => {}
                        1 => factors.push(names[i].clone()),
                        _ => factors.push(format!("{}^{}", names[i], x)),
                    }
                }
                if factors.is_empty() {
                    f.fmt_elem(c)
                } else if c.is_one() {
                    factors.join("*")
                } else {
                    format!("{}*{}", f.fmt_elem(c), factors.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Display using the `(y, x1, ...)` layout.
    pub fn fmt_y(&self) -> String {
        self.fmt_with(&y_names(self.nvars))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self + &(-rhs)
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(self.field.neg(FieldElem::ONE))
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch");
        let f = &self.field;
        let mut acc: HashMap<ExpVec, FieldElem> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e = ExpVec::from_small(ea.exps.iter().zip(&eb.exps).map(|(x, y)| x + y).collect());
                let c = f.mul(ca, cb);
                acc.entry(e).and_modify(|v| *v = f.add(*v, c)).or_insert(c);
            }
        }
        SparsePoly {
            field: f.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// Exact quotient `f / g` if it exists with at most `cap` terms.
///
/// Long division by leading terms in graded-lex order; a quotient term whose
/// exponents exceed the degree gap of `f` and `g` cannot belong to an exact
/// quotient, which bounds the work on non-divisible inputs.
pub fn sparse_divide(f: &SparsePoly, g: &SparsePoly, cap: usize) -> Result<SparsePoly> {
    f.check_shape(g)?;
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = &f.field;
    let n = f.nvars;
    let mut q = SparsePoly::zero(field, n);
    if f.is_zero() {
        return Ok(q);
    }
    let fd = f.degrees();
    let gd = g.degrees();
    if fd.iter().zip(&gd).any(|(a, b)| b > a) || g.total_degree() > f.total_degree() {
        return Err(Error::Reject(RejectReason::NotDivisible));
    }
    let gap: Vec<u32> = fd.iter().zip(&gd).map(|(a, b)| a - b).collect();
    let (glt, glc) = g.leading_term().map(|(e, c)| (e.clone(), c)).unwrap();
    let ginv = field.inv(glc);
    let mut r = f.clone();
    while let Some((rlt, rlc)) = r.leading_term().map(|(e, c)| (e.clone(), c)) {
        if !glt.divides(&rlt) {
            return Err(Error::Reject(RejectReason::NotDivisible));
        }
        let m = glt.quotient_of(&rlt);
        if m.iter().zip(&gap).any(|(a, &b)| a > b) {
            return Err(Error::Reject(RejectReason::NotDivisible));
        }
        let c = field.mul(rlc, ginv);
        q.terms.insert(m.clone(), c);
        if q.sparsity() > cap {
            return Err(Error::Reject(RejectReason::CapExceeded));
        }
        for (e, &gc) in &g.terms {
            r.add_term(m.add(e), field.neg(field.mul(c, gc)));
        }
    }
    if &(&q * g) != f {
        return Err(Error::Internal("sparse division failed re-multiplication".into()));
    }
    Ok(q)
}

/// Refinement score `2 * sum(e) - len(e)`.
pub fn phi_score(mults: &[u32]) -> Result<i64> {
    if mults.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(2 * mults.iter().map(|&e| e as i64).sum::<i64>() - mults.len() as i64)
}

/// `unit * prod factor^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub factors: Vec<(SparsePoly, u32)>,
}

impl Factorization {
    pub fn trivial(f: &SparsePoly) -> Factorization {
        Factorization { unit: FieldElem::ONE, factors: vec![(f.clone(), 1)] }
    }

    pub fn expand(&self, field: &Field, nvars: usize) -> SparsePoly {
        let mut acc = SparsePoly::constant(field, nvars, self.unit);
        for (g, e) in &self.factors {
            acc = &acc * &g.pow(*e);
        }
        acc
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, e)| *e).collect()
    }

    /// Scale every factor to leading coefficient 1, merge equal factors and
    /// sort; the unit absorbs the removed scalars.
    pub fn normalize(&self) -> Factorization {
        let field_unit = self.unit;
        let mut unit = field_unit;
        let mut merged: BTreeMap<SparsePoly, u32> = BTreeMap::new();
        for (g, e) in &self.factors {
            let f = g.field().clone();
            if let Some(c) = g.constant_value() {
                unit = f.mul(unit, f.pow(c, *e as u64));
                continue;
            }
            let (lc, n) = g.normalized();
            unit = f.mul(unit, f.pow(lc, *e as u64));
            *merged.entry(n).or_insert(0) += e;
        }
        Factorization { unit, factors: merged.into_iter().collect() }
    }

    /// Structured record `{field: {p, ext}, unit, factors: [{poly, multiplicity}]}`.
    pub fn to_json(&self, field: &Field, names: &[String]) -> serde_json::Value {
        serde_json::json!({
            "field": {"p": field.characteristic(), "ext": field.degree()},
            "unit": field.to_json(self.unit),
            "factors": self.factors.iter().map(|(g, e)| serde_json::json!({
                "poly": g.fmt_with(names),
                "multiplicity": e,
            })).collect::<Vec<_>>(),
        })
    }

    /// One line per factor after a unit line.
    pub fn to_text(&self, field: &Field, names: &[String]) -> String {
        let mut out = format!("unit: {}\n", field.fmt_elem(self.unit));
        for (g, e) in &self.factors {
            out.push_str(&format!("({})^{}\n", g.fmt_with(names), e));
        }
        out
    }
}

/// Result of the make-monic transform.
#[derive(Clone, Debug)]
pub struct MonicTransform {
    /// `f_k^{k-1} f(x, y / f_k)` in the `(y, others)` layout.
    pub fhat: SparsePoly,
    /// Leading coefficient of `f` in the eliminated variable (original layout).
    pub lead: SparsePoly,
    pub degree: u32,
    /// Eliminated variable (original index).
    pub var: usize,
}

impl MonicTransform {
    /// Original variable index of each non-`y` slot of `fhat`.
    pub fn others(&self) -> Vec<usize> {
        (0..self.lead.nvars()).filter(|&i| i != self.var).collect()
    }

    /// Map a polynomial in the original layout (without the eliminated
    /// variable) into the `(y, others)` layout.
    pub fn to_hat_layout(&self, p: &SparsePoly) -> SparsePoly {
        let n = p.nvars();
        let mut map = vec![0; n];
        for (slot, &orig) in self.others().iter().enumerate() {
            map[orig] = slot + 1;
        }
        map[self.var] = 0;
        p.remap(n, &map)
    }

    /// `hhat(f_k * x_var, x)` in the original layout.
    pub fn substitute_back(&self, hhat: &SparsePoly) -> SparsePoly {
        let field = hhat.field();
        let n = self.lead.nvars();
        let others = self.others();
        let mut lead_pows = vec![SparsePoly::one(field, n)];
        let mut out = SparsePoly::zero(field, n);
        for (e, &c) in &hhat.terms {
            let j = e.get(0) as usize;
            while lead_pows.len() <= j {
                let next = &lead_pows[lead_pows.len() - 1] * &self.lead;
                lead_pows.push(next);
            }
            let mut v = vec![0u32; n];
            v[self.var] = j as u32;
            for (slot, &orig) in others.iter().enumerate() {
                v[orig] = e.get(slot + 1);
            }
            let mono = SparsePoly::monomial(field, n, ExpVec::new(&v), c);
            out = &out + &(&mono * &lead_pows[j]);
        }
        out
    }
}

/// Make-monic transform eliminating variable `var`:
/// `fhat = y^k + sum_{j<k} f_j f_k^{k-1-j} y^j`.
pub fn make_monic(f: &SparsePoly, var: usize) -> Result<MonicTransform> {
    if var >= f.nvars() {
        return Err(Error::ShapeMismatch(format!("no variable {var}")));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = f.coefficients_in(var);
    let k = coeffs.len() - 1;
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let field = f.field();
    let n = f.nvars();
    let lead = coeffs[k].clone();
    let mut t = MonicTransform { fhat: SparsePoly::zero(field, n), lead: lead.clone(), degree: k as u32, var };
    let mut lead_pows = vec![SparsePoly::one(field, n)];
    for i in 1..k {
        let next = &lead_pows[i - 1] * &lead;
        lead_pows.push(next);
    }
    let mut fhat = SparsePoly::monomial(field, n, ExpVec::unit(n, 0, k as u32), FieldElem::ONE);
    for (j, fj) in coeffs.iter().enumerate().take(k) {
        if fj.is_zero() {
            continue;
        }
        let prod = fj * &lead_pows[k - 1 - j];
        let moved = t.to_hat_layout(&prod);
        let yj = SparsePoly::monomial(field, n, ExpVec::unit(n, 0, j as u32), FieldElem::ONE);
        fhat = &fhat + &(&moved * &yj);
    }
    t.fhat = fhat;
    let s = f.sparsity() as u128;
    let d = f.individual_degree();
    let bound = s.checked_pow(d).unwrap_or(u128::MAX);
    if (t.fhat.sparsity() as u128) > bound || t.fhat.individual_degree() > d * d {
        return Err(Error::Internal("make-monic bounds violated".into()));
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Text grammar

struct Parser<'a> {
    field: &'a Field,
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    y_layout: bool,
}

/// Parse a polynomial. If `y` occurs the `(y, x1, ...)` layout is used,
/// otherwise `x_i` is variable `i - 1`. Arity is the largest index seen.
pub fn parse_poly(field: &Field, text: &str) -> Result<SparsePoly> {
    let (y_layout, max_x) = scan_vars(text)?;
    let nvars = if y_layout { max_x + 1 } else { max_x };
    parse_with(field, text, nvars, y_layout)
}

/// Parse with a fixed arity in the `x1..xn` layout.
pub fn parse_poly_n(field: &Field, text: &str, nvars: usize) -> Result<SparsePoly> {
    let (y_layout, max_x) = scan_vars(text)?;
    if y_layout {
        return Err(Error::Parse { pos: 0, msg: "`y` not allowed with a fixed x-layout".into() });
    }
    if max_x > nvars {
        return Err(Error::Parse { pos: 0, msg: format!("x{max_x} exceeds arity {nvars}") });
    }
    parse_with(field, text, nvars, false)
}

fn scan_vars(text: &str) -> Result<(bool, usize)> {
    let b = text.as_bytes();
    let mut y = false;
    let mut max_x = 0;
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'y' => y = true,
            b'x' => {
                let start = i + 1;
                let mut j = start;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = text[start..j]
                    .parse()
                    .map_err(|_| Error::Parse { pos: i, msg: "expected variable index".into() })?;
                if idx == 0 {
                    return Err(Error::Parse { pos: i, msg: "variable indices start at 1".into() });
                }
                max_x = max_x.max(idx);
                i = j;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    Ok((y, max_x))
}

fn parse_with(field: &Field, text: &str, nvars: usize, y_layout: bool) -> Result<SparsePoly> {
    let mut p = Parser { field, src: text.as_bytes(), pos: 0, nvars, y_layout };
    let r = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "expected number".into() })
    }

    fn sum(&mut self) -> Result<SparsePoly> {
        let mut acc = SparsePoly::zero(self.field, self.nvars);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => break,
            };
            first = false;
            let t = self.product()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<SparsePoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.power()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        let f = self.field;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut coeffs = Vec::new();
                loop {
                    coeffs.push((self.number()? % f.characteristic() as u64) as u32);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected `,` or `]`")),
                    }
                }
                let c = f.from_coeffs(&coeffs).map_err(|_| self.err("bad field element"))?;
                Ok(SparsePoly::constant(f, self.nvars, c))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(SparsePoly::var(f, self.nvars, 0))
            }
            Some(b'x') => {
                self.pos += 1;
                let idx = self.number()? as usize;
                let var = if self.y_layout { idx } else { idx - 1 };
                Ok(SparsePoly::var(f, self.nvars, var))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.number()?;
                let c = f.from_int((v % f.characteristic() as u64) as i64);
                Ok(SparsePoly::constant(f, self.nvars, c))
            }
            _ => Err(self.err("expected term")),
        }
    }
}
