//! Factorization of sparse multivariate polynomials.
//!
//! [`factor_monic`] handles inputs monic in `y = x_0`: for each anchor `a`
//! it factors `f(y, a)`, enumerates guesses of how the univariate pieces
//! group into factors, evaluates the guessed factors on an interpolation grid
//! through bivariate factorizations of line restrictions, reconstructs them
//! and keeps the verified candidate of largest score. [`factor`] reduces the
//! general case to the monic one and recovers the factors of the leading
//! coefficient recursively.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bifactor::{factor_bivariate, BiFactorization, BiPoly};
use crate::error::{Error, RejectReason, Result};
use crate::field::{Embedding, Field, FieldElem};
use crate::hitting::{anchor_field_size, anchor_params, gen_hitting_set, HitStrategy};
use crate::polytope::{sparsity_cap, SbConfig};
use crate::sparsepoly::{make_monic, phi_score, sparse_divide, ExpVec, Factorization, SparsePoly};
use crate::unifactor::{factor_univariate, UniFactorization};
use crate::unipoly::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExtensionPolicy {
    /// Move to the smallest large-enough extension when the field is too
    /// small, and map the factors back.
    #[default]
    Auto,
    /// Report `FieldTooSmall` instead.
    Forbid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorConfig {
    pub sb: SbConfig,
    pub strategy: HitStrategy,
    pub extension: ExtensionPolicy,
    /// Anchors examined before settling for the best verified candidate.
    pub max_anchors: usize,
    pub parallel: bool,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            sb: SbConfig::default(),
            strategy: HitStrategy::Grid,
            extension: ExtensionPolicy::Auto,
            max_anchors: 32,
            parallel: false,
        }
    }
}

/// One guess: an anchor, the monic irreducible factors of `f(y, a)` listed
/// with multiplicity, disjoint index sets and their exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guess {
    pub anchor: Vec<FieldElem>,
    pub uni_factors: Vec<UniPoly>,
    pub parts: Vec<Vec<usize>>,
    pub exps: Vec<u32>,
}

impl Guess {
    /// Checks that `prod_i (prod_{j in A_i} g_j)^{e_i}` uses every listed
    /// factor exactly once.
    pub fn new(
        anchor: Vec<FieldElem>,
        uni_factors: Vec<UniPoly>,
        parts: Vec<Vec<usize>>,
        exps: Vec<u32>,
    ) -> Result<Guess> {
        let g = Guess { anchor, uni_factors, parts, exps };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<()> {
        if self.parts.is_empty() || self.parts.len() != self.exps.len() {
            return Err(Error::GuessInvalid("parts and exponents disagree"));
        }
        let mut seen = vec![false; self.uni_factors.len()];
        let mut used: BTreeMap<&UniPoly, u32> = BTreeMap::new();
        for (part, &e) in self.parts.iter().zip(&self.exps) {
            if part.is_empty() || e == 0 {
                return Err(Error::GuessInvalid("empty part or zero exponent"));
            }
            for &j in part {
                if j >= seen.len() || seen[j] {
                    return Err(Error::GuessInvalid("parts are not disjoint"));
                }
                seen[j] = true;
                *used.entry(&self.uni_factors[j]).or_insert(0) += e;
            }
        }
        let mut listed: BTreeMap<&UniPoly, u32> = BTreeMap::new();
        for g in &self.uni_factors {
            *listed.entry(g).or_insert(0) += 1;
        }
        if used != listed {
            return Err(Error::GuessInvalid("guess does not reproduce f(y, a)"));
        }
        Ok(())
    }

    pub fn phi(&self) -> i64 {
        phi_score(&self.exps).unwrap_or(0)
    }

    fn part_product(&self, i: usize) -> UniPoly {
        let one = UniPoly::one(self.uni_factors[0].field());
        self.parts[i].iter().fold(one, |acc, &j| &acc * &self.uni_factors[j])
    }

    fn is_trivial(&self) -> bool {
        self.parts.len() == 1 && self.exps[0] == 1
    }
}

/// Set partitions of `0..u` as restricted growth strings.
fn set_partitions(u: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; u];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == rgs.len() {
            let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
            let mut parts = vec![Vec::new(); blocks];
            for (j, &b) in rgs.iter().enumerate() {
                parts[b].push(j);
            }
            out.push(parts);
            return;
        }
        for b in 0..=max {
            rgs[i] = b;
            rec(i + 1, if b == max { max + 1 } else { max }, rgs, out);
        }
    }
    if u == 0 {
        return out;
    }
    rec(1, 1, &mut rgs, &mut out);
    out
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// All consistent guesses at an anchor, ordered by decreasing score and
/// otherwise by enumeration order.
pub fn enumerate_guesses(anchor: &[FieldElem], uni: &UniFactorization) -> Vec<Guess> {
    let listed = uni.flattened();
    let distinct: Vec<(usize, u32)> = {
        let mut start = 0;
        uni.factors
            .iter()
            .map(|(_, m)| {
                let s = start;
                start += *m as usize;
                (s, *m)
            })
            .collect()
    };
    let mut out = Vec::new();
    for blocks in set_partitions(distinct.len()) {
        let choices: Vec<Vec<u32>> = blocks
            .iter()
            .map(|b| divisors(b.iter().fold(0, |g, &j| num_integer::gcd(g, distinct[j].1))))
            .collect();
        let mut pick = vec![0usize; blocks.len()];
        loop {
            let exps: Vec<u32> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            let parts: Vec<Vec<usize>> = blocks
                .iter()
                .zip(&exps)
                .map(|(b, &e)| {
                    b.iter()
                        .flat_map(|&j| {
                            let (s, m) = distinct[j];
                            s..s + (m / e) as usize
                        })
                        .collect()
                })
                .collect();
            out.push(Guess { anchor: anchor.to_vec(), uni_factors: listed.clone(), parts, exps });
            let mut i = pick.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || pick.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    out.sort_by_key(|g| std::cmp::Reverse(g.phi()));
    out
}

/// Group the factors of `f~(y, t)` into the guessed parts; returns `h~_i(y, t)`.
fn assign_line_factors(guess: &Guess, line: &BiFactorization) -> Result<Vec<BiPoly>> {
    let field = guess.uni_factors[0].field();
    let mut acc: Vec<BiPoly> = vec![BiPoly::constant(field, FieldElem::ONE); guess.parts.len()];
    for (fk, vk) in &line.factors {
        if fk.deg_y() == 0 {
            return Err(Error::GuessInvalid("line factor free of y"));
        }
        let fk = fk.scale(field.inv(fk.lc_y().lc()));
        let at0 = fk.eval_t(FieldElem::ZERO);
        let mut owner = None;
        for (i, part) in guess.parts.iter().enumerate() {
            if part.iter().any(|&j| guess.uni_factors[j].divides(&at0)) {
                if owner.is_some() {
                    return Err(Error::GuessInvalid("line factor matches several parts"));
                }
                owner = Some(i);
            }
        }
        let i = owner.ok_or(Error::GuessInvalid("line factor matches no part"))?;
        let e = guess.exps[i];
        if vk % e != 0 {
            return Err(Error::GuessInvalid("multiplicity not divisible by exponent"));
        }
        acc[i] = &acc[i] * &fk.pow(vk / e);
    }
    for (i, h) in acc.iter().enumerate() {
        let want = guess.part_product(i);
        if h.deg_y() != want.deg() || h.eval_t(FieldElem::ZERO) != want {
            return Err(Error::GuessInvalid("part degrees are inconsistent"));
        }
    }
    Ok(acc)
}

fn line_factorization(f: &SparsePoly, a: &[FieldElem], b: &[FieldElem]) -> Result<BiFactorization> {
    let rows = f.restrict_to_line_dense(a, b)?;
    factor_bivariate(&BiPoly::new(f.field(), rows))
}

/// Values `h_i(y, b)` of the guessed factors at `b`, through the line from
/// the anchor to `b`.
pub fn blackbox_eval(f: &SparsePoly, guess: &Guess, b: &[FieldElem]) -> Result<Vec<UniPoly>> {
    if !f.is_monic_in(0) {
        return Err(Error::NotMonic);
    }
    guess.check()?;
    let line = line_factorization(f, &guess.anchor, b)?;
    let parts = assign_line_factors(guess, &line)?;
    Ok(parts.iter().map(|h| h.eval_t(FieldElem::ONE)).collect())
}

/// Matrix taking values at `nodes` to monomial coefficients.
fn interp_matrix(field: &Field, nodes: &[FieldElem]) -> Vec<Vec<FieldElem>> {
    let m = nodes.len();
    let mut mat = vec![vec![FieldElem::ZERO; m]; m];
    for (i, &ai) in nodes.iter().enumerate() {
        let mut basis = UniPoly::one(field);
        let mut denom = FieldElem::ONE;
        for (j, &aj) in nodes.iter().enumerate() {
            if j != i {
                basis = &basis * &UniPoly::linear_root(field, aj);
                denom = field.mul(denom, field.sub(ai, aj));
            }
        }
        let inv = field.inv(denom);
        for (k, row) in mat.iter_mut().enumerate() {
            row[i] = field.mul(basis.coeff(k), inv);
        }
    }
    mat
}

/// Grid nodes `x_v in {alpha_0, ..., alpha_{degs[v]}}`, last variable fastest.
fn grid_points(field: &Field, degs: &[u32]) -> Vec<Vec<FieldElem>> {
    let mut pts = vec![Vec::new()];
    for &d in degs {
        let mut next = Vec::with_capacity(pts.len() * (d as usize + 1));
        for p in &pts {
            for i in 0..=d {
                let mut q = p.clone();
                q.push(field.nth(i));
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

/// Dense interpolation from values on [`grid_points`].
fn interpolate_grid(field: &Field, degs: &[u32], mut values: Vec<FieldElem>) -> SparsePoly {
    let n = degs.len();
    let dims: Vec<usize> = degs.iter().map(|&d| d as usize + 1).collect();
    for v in 0..n {
        let nodes: Vec<FieldElem> = (0..dims[v] as u32).map(|i| field.nth(i)).collect();
        let mat = interp_matrix(field, &nodes);
        let stride: usize = dims[v + 1..].iter().product();
        let block = stride * dims[v];
        let mut out = values.clone();
        for base in (0..values.len()).step_by(block) {
            for off in 0..stride {
                for (k, row) in mat.iter().enumerate() {
                    let mut acc = FieldElem::ZERO;
                    for (i, &m) in row.iter().enumerate() {
                        if !m.is_zero() {
                            acc = field.add(acc, field.mul(m, values[base + i * stride + off]));
                        }
                    }
                    out[base + k * stride + off] = acc;
                }
            }
        }
        values = out;
    }
    let mut terms = Vec::new();
    for (idx, &c) in values.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut rem = idx;
        let mut e = vec![0u32; n];
        for v in (0..n).rev() {
            e[v] = (rem % dims[v]) as u32;
            rem /= dims[v];
        }
        terms.push((ExpVec::new(&e), c));
    }
    SparsePoly::from_terms(field, n, terms)
}

/// Recover a polynomial of individual degree at most `d` in `n` variables
/// from an evaluation oracle, rejecting results with more than `cap` terms.
pub fn reconstruct_sparse(
    field: &Field,
    mut oracle: impl FnMut(&[FieldElem]) -> Result<FieldElem>,
    n: usize,
    d: u32,
    cap: usize,
) -> Result<SparsePoly> {
    if d as u64 + 1 > field.size() as u64 {
        return Err(Error::FieldTooSmall { required: d as u64 + 1, available: field.size() as u64 });
    }
    let degs = vec![d; n];
    let values: Result<Vec<FieldElem>> = grid_points(field, &degs).iter().map(|p| oracle(p)).collect();
    let p = interpolate_grid(field, &degs, values?);
    if p.sparsity() > cap {
        return Err(Error::Reject(RejectReason::CapExceeded));
    }
    Ok(p)
}

/// Whether `unit * prod factor^mult == f`, giving up once a partial product
/// has more than `cap^2` terms.
pub fn verify_factorization(f: &SparsePoly, candidate: &Factorization, cap: usize) -> bool {
    let limit = cap.saturating_mul(cap);
    let mut acc = SparsePoly::constant(f.field(), f.nvars(), candidate.unit);
    for (g, e) in &candidate.factors {
        if g.nvars() != f.nvars() {
            return false;
        }
        for _ in 0..*e {
            acc = &acc * g;
            if acc.sparsity() > limit {
                return false;
            }
        }
    }
    acc == *f
}

/// Field size needed to factor a `y`-monic polynomial without extension.
fn monic_field_requirement(f: &SparsePoly) -> u64 {
    let d = f.individual_degree() as u64;
    let interp = (1..f.nvars()).map(|v| f.degree_in(v) as u64 + 1).max().unwrap_or(1);
    let tdeg = f.terms().map(|(e, _)| (e.total() - e.get(0)) as u64).max().unwrap_or(0);
    let lines = 2 * f.degree_in(0) as u64 * tdeg + 1;
    anchor_field_size(d).max(interp).max(lines)
}

/// Factorization of `f` monic in `y = x_0` into `y`-monic factors.
pub fn factor_monic(f: &SparsePoly, cfg: &FactorConfig) -> Result<Factorization> {
    if !f.is_monic_in(0) {
        return Err(Error::NotMonic);
    }
    let field = f.field();
    let need = monic_field_requirement(f);
    if need <= field.size() as u64 || f.nvars() == 1 {
        return factor_monic_direct(f, cfg);
    }
    if cfg.extension == ExtensionPolicy::Forbid {
        return Err(Error::FieldTooSmall { required: need, available: field.size() as u64 });
    }
    let emb = Embedding::new(field, Embedding::degree_for(field, need)?)?;
    let lifted = f.map_coeffs(&emb.ext, |c| emb.up(c));
    let up = factor_monic_direct(&lifted, cfg)?;
    let factors = descend(&up.factors, &emb).unwrap_or_else(|| vec![(f.clone(), 1)]);
    Ok(Factorization { unit: FieldElem::ONE, factors })
}

/// Merge Frobenius orbits of extension-field factors into base-field factors.
fn descend(factors: &[(SparsePoly, u32)], emb: &Embedding) -> Option<Vec<(SparsePoly, u32)>> {
    let mut left: Vec<(SparsePoly, u32)> = factors.to_vec();
    let mut out = Vec::new();
    while let Some((h, e)) = left.pop() {
        let mut prod = h.clone();
        let mut cur = h.map_coeffs(&emb.ext, |c| emb.frobenius(c));
        while cur != h {
            let pos = left.iter().position(|(g, m)| *g == cur && *m == e)?;
            left.swap_remove(pos);
            prod = &prod * &cur;
            cur = cur.map_coeffs(&emb.ext, |c| emb.frobenius(c));
        }
        out.push((prod.try_map_coeffs(&emb.base, |c| emb.down(c))?, e));
    }
    out.sort();
    Some(out)
}

struct LineCache<'a> {
    f: &'a SparsePoly,
    anchor: &'a [FieldElem],
    grid: &'a [Vec<FieldElem>],
    lines: Vec<Option<std::result::Result<BiFactorization, Error>>>,
}

impl LineCache<'_> {
    fn get(&mut self, i: usize) -> Result<&BiFactorization> {
        if self.lines[i].is_none() {
            self.lines[i] = Some(line_factorization(self.f, self.anchor, &self.grid[i]));
        }
        match self.lines[i].as_ref().unwrap() {
            Ok(l) => Ok(l),
            Err(e) => Err(e.clone()),
        }
    }

    fn fill_parallel(&mut self) {
        let (f, a) = (self.f, self.anchor);
        let all: Vec<_> = self.grid.par_iter().map(|b| line_factorization(f, a, b)).collect();
        self.lines = all.into_iter().map(Some).collect();
    }
}

/// Reconstruct the `y`-monic parts of a guess from line factorizations.
fn reconstruct_guess(
    guess: &Guess,
    degs: &[u32],
    cache: &mut LineCache<'_>,
    cap: usize,
) -> Result<Vec<SparsePoly>> {
    let field = cache.f.field().clone();
    let n = degs.len();
    let part_degs: Vec<usize> = (0..guess.parts.len()).map(|i| guess.part_product(i).deg()).collect();
    let npts = cache.grid.len();
    let mut vals: Vec<Vec<Vec<FieldElem>>> =
        part_degs.iter().map(|&k| vec![Vec::with_capacity(npts); k]).collect();
    for p in 0..npts {
        let line = cache.get(p)?;
        let parts = assign_line_factors(guess, line)?;
        for (i, h) in parts.iter().enumerate() {
            let at1 = h.eval_t(FieldElem::ONE);
            for (j, col) in vals[i].iter_mut().enumerate() {
                col.push(at1.coeff(j));
            }
        }
    }
    let mut out = Vec::new();
    let shift: Vec<usize> = (1..=n).collect();
    for (i, &k) in part_degs.iter().enumerate() {
        let mut h = SparsePoly::monomial(&field, n + 1, ExpVec::unit(n + 1, 0, k as u32), FieldElem::ONE);
        for (j, col) in vals[i].drain(..).enumerate() {
            let c = interpolate_grid(&field, degs, col);
            if c.sparsity() > cap {
                return Err(Error::Reject(RejectReason::CapExceeded));
            }
            let yj = SparsePoly::monomial(&field, n + 1, ExpVec::unit(n + 1, 0, j as u32), FieldElem::ONE);
            h = &h + &(&c.remap(n + 1, &shift) * &yj);
        }
        if h.sparsity() > cap {
            return Err(Error::Reject(RejectReason::CapExceeded));
        }
        out.push(h);
    }
    Ok(out)
}

/// Every part is squarefree at the anchor and the parts are pairwise coprime
/// there, so the anchor separates all irreducible factors.
fn certified(best: &Factorization, anchor: &[FieldElem]) -> bool {
    let proj: Vec<UniPoly> = best.factors.iter().map(|(h, _)| h.project_to_y(anchor)).collect();
    proj.iter().all(|p| p.is_squarefree())
        && (0..proj.len()).all(|i| (i + 1..proj.len()).all(|j| proj[i].gcd(&proj[j]).is_one()))
}

fn factor_monic_direct(f: &SparsePoly, cfg: &FactorConfig) -> Result<Factorization> {
    let field = f.field();
    let k = f.degree_in(0);
    if k == 0 {
        return Ok(Factorization { unit: FieldElem::ONE, factors: Vec::new() });
    }
    let n = f.nvars() - 1;
    if n == 0 || f.present_vars() == vec![0] {
        let u = f.to_uni(0).expect("univariate");
        let r = factor_univariate(&u);
        let factors = r.factors.iter().map(|(g, e)| (SparsePoly::from_uni(g, f.nvars(), 0), *e)).collect();
        return Ok(Factorization { unit: FieldElem::ONE, factors });
    }
    let trivial = Factorization::trivial(f);
    if k == 1 {
        return Ok(trivial);
    }
    let d = f.individual_degree() as u64;
    let s = f.sparsity() as u64;
    let cap = sparsity_cap(f.nvars() as u64, s, d, &cfg.sb).clamp(1, usize::MAX as u64) as usize;
    let (sp, deg, kk) = anchor_params(n, s, d, &cfg.sb);
    let anchors = gen_hitting_set(field, n, sp, deg, kk, cfg.strategy)?;
    let degs: Vec<u32> = (1..=n).map(|v| f.degree_in(v)).collect();
    let grid = grid_points(field, &degs);

    let mut best = trivial;
    let mut best_phi = 1i64;
    let mut best_rad = 0usize;
    let mut used = 0usize;
    let scan_limit = cfg.max_anchors.saturating_mul(64);
    for a in anchors.iter_shells().take(scan_limit) {
        if used >= cfg.max_anchors {
            break;
        }
        let uni = factor_univariate(&f.project_to_y(&a));
        // an anchor whose projection has a smaller radical than one already
        // seen cannot keep the factors apart
        let rad: usize = uni.factors.iter().map(|(g, _)| g.deg()).sum();
        if rad < best_rad {
            continue;
        }
        best_rad = rad;
        used += 1;
        let guesses = enumerate_guesses(&a, &uni);
        let mut cache = LineCache { f, anchor: &a, grid: &grid, lines: vec![None; grid.len()] };
        let mut filled = false;
        for g in guesses {
            if g.phi() <= best_phi || g.is_trivial() {
                continue;
            }
            if cfg.parallel && !filled {
                cache.fill_parallel();
                filled = true;
            }
            let parts = match reconstruct_guess(&g, &degs, &mut cache, cap) {
                Ok(p) => p,
                Err(Error::GuessInvalid(_)) | Err(Error::Reject(_)) => continue,
                Err(e) => return Err(e),
            };
            let cand = Factorization {
                unit: FieldElem::ONE,
                factors: parts.into_iter().zip(g.exps.iter().copied()).collect(),
            };
            if verify_factorization(f, &cand, cap) {
                best_phi = g.phi();
                best = cand;
            }
        }
        if certified(&best, &a) {
            break;
        }
    }
    best.factors.sort();
    Ok(best)
}

/// Complete factorization of `f`.
pub fn factor(f: &SparsePoly, cfg: &FactorConfig) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    if let Some(c) = f.constant_value() {
        return Ok(Factorization { unit: c, factors: Vec::new() });
    }
    let (fc, present) = f.compress();
    let r = factor_compressed(&fc, cfg)?;
    let factors = r.factors.iter().map(|(g, e)| (g.expand(f.nvars(), &present), *e)).collect();
    let out = Factorization { unit: FieldElem::ONE, factors }.normalize();
    let bare = Factorization { unit: FieldElem::ONE, factors: out.factors };
    let lc_prod = bare.expand(field, f.nvars()).leading_coeff();
    let out = Factorization { unit: field.div(f.leading_coeff(), lc_prod), ..bare };
    if out.expand(field, f.nvars()) != *f {
        return Err(Error::Internal("factorization does not reproduce the input".into()));
    }
    Ok(out)
}

fn factor_compressed(f: &SparsePoly, cfg: &FactorConfig) -> Result<Factorization> {
    let field = f.field();
    let m = f.nvars();
    match m {
        0 => Ok(Factorization { unit: f.leading_coeff(), factors: Vec::new() }),
        1 => {
            let r = factor_univariate(&f.to_uni(0).expect("univariate"));
            Ok(Factorization {
                unit: r.unit,
                factors: r.factors.iter().map(|(g, e)| (SparsePoly::from_uni(g, 1, 0), *e)).collect(),
            })
        }
        2 => factor_two(f, cfg),
        _ => {
            let v = m - 1;
            let t = make_monic(f, v)?;
            let monic = factor_monic(&t.fhat, cfg)?;
            let k = t.degree;
            let lead = factor(&t.lead, cfg)?;
            let hs: Vec<(SparsePoly, u32)> =
                monic.factors.iter().map(|(h, e)| (t.substitute_back(h), *e)).collect();
            let mut out = Vec::new();
            let mut alpha: Vec<i64> = lead.factors.iter().map(|(_, b)| -(*b as i64) * (k as i64 - 1)).collect();
            for (h, e) in hs {
                let mut h = h;
                for (j, (w, _)) in lead.factors.iter().enumerate() {
                    let mut dij = 0u32;
                    let limit = h.total_degree() / w.total_degree().max(1);
                    while dij < limit {
                        let cap = h.degrees().iter().map(|&x| x as u64 + 1).product::<u64>();
                        let cap = cap.min(sparsity_cap(m as u64, h.sparsity() as u64, h.individual_degree() as u64, &cfg.sb));
                        match sparse_divide(&h, w, cap as usize) {
                            Ok(q) => {
                                h = q;
                                dij += 1;
                            }
                            Err(Error::Reject(_)) => break,
                            Err(e) => return Err(e),
                        }
                    }
                    alpha[j] += dij as i64 * e as i64;
                }
                if h.constant_value().is_none() {
                    out.push((h, e));
                }
            }
            for ((w, _), a) in lead.factors.iter().zip(alpha) {
                if a > 0 {
                    out.push((w.clone(), a as u32));
                }
            }
            let _ = field;
            Ok(Factorization { unit: FieldElem::ONE, factors: out })
        }
    }
}

fn factor_two(f: &SparsePoly, cfg: &FactorConfig) -> Result<Factorization> {
    let field = f.field();
    let bi = BiPoly::from_sparse(f)?;
    match factor_bivariate(&bi) {
        Ok(r) => Ok(Factorization {
            unit: r.unit,
            factors: r.factors.iter().map(|(g, e)| (g.to_sparse(), *e)).collect(),
        }),
        Err(Error::FieldTooSmall { required, available }) => {
            if cfg.extension == ExtensionPolicy::Forbid {
                return Err(Error::FieldTooSmall { required, available });
            }
            let emb = Embedding::new(field, Embedding::degree_for(field, required)?)?;
            let lifted = BiPoly::from_sparse(&f.map_coeffs(&emb.ext, |c| emb.up(c)))?;
            let r = factor_bivariate(&lifted)?;
            let ext: Vec<(SparsePoly, u32)> = r.factors.iter().map(|(g, e)| (g.to_sparse(), *e)).collect();
            let factors = descend(&ext, &emb).unwrap_or_else(|| vec![(f.clone(), 1)]);
            Ok(Factorization { unit: FieldElem::ONE, factors })
        }
        Err(e) => Err(e),
    }
}
