//! Newton polytopes of supports: exact vertex enumeration, Minkowski sums,
//! the factor-sparsity cap and its corner-point check, and the Hadamard
//! subspace construction.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{feasible, Scalar};
use crate::sparsepoly::SparsePoly;

/// Finite set of lattice points in `Z^n`, sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    n: usize,
    points: Vec<Vec<u32>>,
}

impl Support {
    pub fn new(n: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Result<Support> {
        let set: BTreeSet<Vec<u32>> = points.into_iter().collect();
        if set.iter().any(|p| p.len() != n) {
            return Err(Error::ShapeMismatch(format!("points must have dimension {n}")));
        }
        Ok(Support { n, points: set.into_iter().collect() })
    }

    pub fn of(f: &SparsePoly) -> Support {
        Support { n: f.nvars(), points: f.support().into_iter().collect::<BTreeSet<_>>().into_iter().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<u32>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.points.binary_search_by(|q| q.as_slice().cmp(p)).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub vertices: Vec<Vec<u32>>,
}

impl VertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn to_scalar<T: Scalar>(v: u32) -> T {
    let mut acc = T::zero();
    let mut bit = T::one();
    let mut v = v;
    while v > 0 {
        if v & 1 == 1 {
            acc = acc + bit.clone();
        }
        bit = bit.clone() + bit;
        v >>= 1;
    }
    acc
}

/// Whether `p` is a convex combination of `others`, decided by an exact LP.
pub fn in_convex_hull<T: Scalar>(p: &[u32], others: &[&[u32]]) -> bool {
    if others.is_empty() {
        return false;
    }
    let n = p.len();
    let mut a: Vec<Vec<T>> = (0..n)
        .map(|j| others.iter().map(|q| to_scalar::<T>(q[j])).collect())
        .collect();
    a.push(vec![T::one(); others.len()]);
    let mut b: Vec<T> = p.iter().map(|&x| to_scalar::<T>(x)).collect();
    b.push(T::one());
    feasible(&a, &b)
}

/// Exact vertex set of the convex hull of `e`.
pub fn newton_vertices(e: &Support) -> Result<VertexSet> {
    if e.is_empty() {
        return Err(Error::EmptySupport);
    }
    let pts = &e.points;
    let vertices = pts
        .par_iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<&[u32]> =
                pts.iter().enumerate().filter(|(j, _)| j != i).map(|(_, q)| q.as_slice()).collect();
            !in_convex_hull::<BigRational>(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect();
    Ok(VertexSet { vertices })
}

/// All pairwise sums `a + b`.
pub fn minkowski_sum(a: &Support, b: &Support) -> Result<Support> {
    if a.n != b.n {
        return Err(Error::ShapeMismatch(format!("dimensions {} and {}", a.n, b.n)));
    }
    let sums = a
        .points
        .iter()
        .flat_map(|p| b.points.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x + y).collect()));
    Support::new(a.n, sums)
}

/// Constant of the sparsity bound and an optional user cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SbConfig {
    /// `C = c_num / c_den`
    pub c_num: u64,
    pub c_den: u64,
    pub user_cap: Option<u64>,
}

impl Default for SbConfig {
    fn default() -> Self {
        SbConfig { c_num: 5, c_den: 1, user_cap: None }
    }
}

impl SbConfig {
    /// Parse `C` as an integer, a fraction `a/b`, or a finite decimal.
    pub fn with_constant(mut self, text: &str) -> Result<SbConfig> {
        let bad = || Error::Parse { pos: 0, msg: format!("bad constant `{text}`") };
        let (num, den) = if let Some((a, b)) = text.split_once('/') {
            (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?)
        } else if let Some((a, b)) = text.split_once('.') {
            let scale = 10u64.checked_pow(b.len() as u32).ok_or_else(bad)?;
            let ip = if a.is_empty() { 0 } else { a.parse::<u64>().map_err(|_| bad())? };
            let fp = b.parse::<u64>().map_err(|_| bad())?;
            (ip.checked_mul(scale).and_then(|v| v.checked_add(fp)).ok_or_else(bad)?, scale)
        } else {
            (text.trim().parse::<u64>().map_err(|_| bad())?, 1)
        };
        if num == 0 || den == 0 {
            return Err(bad());
        }
        let g = num_integer::gcd(num, den);
        self.c_num = num / g;
        self.c_den = den / g;
        Ok(self)
    }
}

/// `ceil(C * d^2 * log2(max(n, 2)))`, computed exactly.
pub fn sb_exponent(n: u64, d: u64, cfg: &SbConfig) -> u64 {
    let m = BigUint::from(n.max(2));
    let target = m.pow((cfg.c_num * d * d) as u32);
    let mut k = (target.bits().saturating_sub(1)) / cfg.c_den;
    while (BigUint::from(1u32) << (k * cfg.c_den) as usize) < target {
        k += 1;
    }
    while k > 0 && (BigUint::from(1u32) << ((k - 1) * cfg.c_den) as usize) >= target {
        k -= 1;
    }
    k
}

fn sat_pow(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc == u128::MAX || acc == 0 {
            break;
        }
    }
    acc
}

/// `min(s^K, (d+1)^n, user cap)` with `K = sb_exponent(n, d)`.
pub fn sparsity_cap(n: u64, s: u64, d: u64, cfg: &SbConfig) -> u64 {
    let k = sb_exponent(n, d, cfg);
    let sb = if s <= 1 { s as u128 } else { sat_pow(s, k) };
    let trivial = sat_pow(d + 1, n);
    let mut cap = sb.min(trivial);
    if let Some(u) = cfg.user_cap {
        cap = cap.min(u as u128);
    }
    cap.min(u64::MAX as u128) as u64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaratheodoryReport {
    /// `|V|`
    pub vertices: usize,
    /// `|E|`
    pub points: usize,
    pub exponent: u64,
    pub holds: bool,
    /// Smallest `k` for which every point is within `1/3` (sup norm) of a
    /// distinct `k`-uniform vertex average, when searched.
    pub uniform_k: Option<u32>,
}

/// Check `t^K >= |E|` for `E` in `{0..d}^n`; optionally search `k`-uniform
/// vertex averages up to `max_k`.
pub fn caratheodory_check(
    e: &Support,
    d: u64,
    cfg: &SbConfig,
    max_k: Option<u32>,
) -> Result<CaratheodoryReport> {
    let vs = newton_vertices(e)?;
    let t = vs.len() as u64;
    let exponent = sb_exponent(e.dim() as u64, d.max(1), cfg);
    let holds = BigUint::from(t).pow(exponent as u32) >= BigUint::from(e.len());
    if !holds {
        return Err(Error::BoundViolation { vertices: vs.len(), points: e.len(), exponent });
    }
    let uniform_k = max_k.and_then(|mk| (1..=mk).find(|&k| uniform_cover(e, &vs, k)));
    Ok(CaratheodoryReport { vertices: vs.len(), points: e.len(), exponent, holds, uniform_k, })
}

const UNIFORM_LIMIT: usize = 2_000_000;

/// Each point `p` of `e` has a multiset `M` of `k` vertices with
/// `3 * |k p - sum(M)|_inf <= k`, and the chosen multisets are distinct.
fn uniform_cover(e: &Support, vs: &VertexSet, k: u32) -> bool {
    let t = vs.len();
    let n = e.dim();
    let mut count: u128 = 1;
    for i in 0..k as u128 {
        count = count * (t as u128 + i) / (i + 1);
    }
    if count > UNIFORM_LIMIT as u128 {
        return false;
    }
    let mut chosen: Vec<Option<Vec<i64>>> = vec![None; e.len()];
    let mut sum = vec![0i64; n];
    let mut stack = Vec::new();
    fn rec(
        start: usize,
        left: u32,
        k: u32,
        vs: &VertexSet,
        e: &Support,
        sum: &mut Vec<i64>,
        stack: &mut Vec<usize>,
        chosen: &mut Vec<Option<Vec<i64>>>,
    ) {
        if left == 0 {
            for (pi, p) in e.points().iter().enumerate() {
                if chosen[pi].is_some() {
                    continue;
                }
                let ok = p
                    .iter()
                    .zip(sum.iter())
                    .all(|(&x, &s)| 3 * (k as i64 * x as i64 - s).abs() <= k as i64);
                if ok {
                    chosen[pi] = Some(sum.clone());
                }
            }
            return;
        }
        for v in start..vs.len() {
            for (s, &x) in sum.iter_mut().zip(&vs.vertices[v]) {
                *s += x as i64;
            }
            stack.push(v);
            rec(v, left - 1, k, vs, e, sum, stack, chosen);
            stack.pop();
            for (s, &x) in sum.iter_mut().zip(&vs.vertices[v]) {
                *s -= x as i64;
            }
        }
    }
    rec(0, k, k, vs, e, &mut sum, &mut stack, &mut chosen);
    if chosen.iter().any(|c| c.is_none()) {
        return false;
    }
    let distinct: BTreeSet<&Vec<i64>> = chosen.iter().flatten().collect();
    distinct.len() == e.len()
}

#[derive(Clone, Debug)]
pub struct HadamardReport {
    pub m: u32,
    pub n: usize,
    pub subspaces: usize,
    /// Indicator vectors of the annihilators, one per subspace.
    pub subspace_points: Vec<Vec<u32>>,
    /// Columns and subspace points, shifted by `+1` into `{0,1,2}^n`.
    pub support: Support,
    pub vertices: VertexSet,
    pub all_in_hull: bool,
    pub vertices_are_columns: bool,
}

/// Linear subspaces of `F_2^m`, each as a bitmask over its `2^m` elements.
pub fn subspaces_f2(m: u32) -> Vec<u32> {
    let size = 1u32 << m;
    let mut seen = BTreeSet::from([1u32]);
    let mut frontier = vec![1u32];
    while let Some(s) = frontier.pop() {
        for v in 0..size {
            if s >> v & 1 == 1 {
                continue;
            }
            let mut t = s;
            for u in 0..size {
                if s >> u & 1 == 1 {
                    t |= 1 << (u ^ v);
                }
            }
            if seen.insert(t) {
                frontier.push(t);
            }
        }
    }
    seen.into_iter().collect()
}

/// Hadamard construction for `n = 2^m`, `m <= 4`.
pub fn hadamard_example(m: u32) -> Result<HadamardReport> {
    if m > 4 {
        return Err(Error::ShapeMismatch("m must be at most 4".into()));
    }
    let n = 1usize << m;
    let h = |i: usize, j: usize| if (i & j).count_ones() % 2 == 0 { 1i64 } else { -1 };
    let columns: Vec<Vec<u32>> = (0..n).map(|j| (0..n).map(|i| (h(i, j) + 1) as u32).collect()).collect();
    let subs = subspaces_f2(m);
    let subspace_points: Vec<Vec<u32>> = subs
        .iter()
        .map(|&s| {
            (0..n)
                .map(|i| {
                    let row: i64 = (0..n).filter(|&j| s >> j & 1 == 1).map(|j| h(i, j)).sum();
                    (row != 0) as u32
                })
                .collect()
        })
        .collect();
    let shifted: Vec<Vec<u32>> = subspace_points.iter().map(|p| p.iter().map(|x| x + 1).collect()).collect();
    let col_refs: Vec<&[u32]> = columns.iter().map(|c| c.as_slice()).collect();
    let all_in_hull = shifted
        .par_iter()
        .all(|p| col_refs.contains(&p.as_slice()) || in_convex_hull::<BigRational>(p, &col_refs));
    let support = Support::new(n, columns.iter().cloned().chain(shifted))?;
    let vertices = newton_vertices(&support)?;
    let colset: BTreeSet<&Vec<u32>> = columns.iter().collect();
    let vertices_are_columns =
        vertices.len() == n && vertices.vertices.iter().all(|v| colset.contains(v));
    Ok(HadamardReport {
        m,
        n,
        subspaces: subs.len(),
        subspace_points,
        support,
        vertices,
        all_in_hull,
        vertices_are_columns,
    })
}
