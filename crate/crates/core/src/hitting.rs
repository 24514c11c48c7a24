//! Deterministic hitting sets for products of sparse polynomials, and the
//! anchor set used by the monic driver.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::polytope::{sparsity_cap, SbConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HitStrategy {
    /// Full tensor grid on the first `k*d + 1` field elements.
    #[default]
    Grid,
    /// Kronecker substitution `x_i -> t^(w_i mod r)` for a list of primes `r`.
    Ks,
}

impl std::str::FromStr for HitStrategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(HitStrategy::Grid),
            "ks" => Ok(HitStrategy::Ks),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown strategy `{s}`") }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HitParams {
    pub n: usize,
    pub s: u64,
    pub d: u64,
    pub k: u64,
    pub strategy: HitStrategy,
}

#[derive(Clone, Debug)]
enum Shape {
    Grid { axis: Vec<FieldElem> },
    Ks { blocks: Vec<KsBlock> },
}

#[derive(Clone, Debug)]
struct KsBlock {
    weights: Vec<u64>,
    points: u64,
}

/// Ordered point list, generated lazily.
#[derive(Clone, Debug)]
pub struct HittingSet {
    field: Field,
    pub params: HitParams,
    shape: Shape,
}

fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&r| (2..).take_while(|i| i * i <= r).all(|i| r % i != 0))
}

fn ceil_log2(x: u64) -> u64 {
    64 - (x.max(1) - 1).leading_zeros() as u64
}

/// Hitting set for products of `k` polynomials in `n` variables, each
/// `s`-sparse with individual degree at most `d`.
pub fn gen_hitting_set(
    field: &Field,
    n: usize,
    s: u64,
    d: u64,
    k: u64,
    strategy: HitStrategy,
) -> Result<HittingSet> {
    let q = field.size() as u64;
    let params = HitParams { n, s, d, k, strategy };
    let shape = match strategy {
        HitStrategy::Grid => {
            let deg = k.saturating_mul(d);
            let need = deg.saturating_add(1);
            if need > q {
                return Err(Error::FieldTooSmall { required: need, available: q });
            }
            Shape::Grid { axis: (0..need as u32).map(|i| field.nth(i)).collect() }
        }
        HitStrategy::Ks => {
            // A prime r is bad for one factor only if it divides one of the
            // C(s,2) Kronecker exponent differences, each below (d+1)^n.
            let pairs = s.saturating_mul(s.saturating_sub(1)) / 2;
            let bad = k
                .saturating_mul(pairs)
                .saturating_mul(n as u64)
                .saturating_mul(ceil_log2(d + 1));
            let count = bad.saturating_add(1);
            if count > 100_000 {
                return Err(Error::FieldTooSmall { required: u64::MAX, available: q });
            }
            let mut blocks = Vec::new();
            for r in primes().take(count as usize) {
                let weights: Vec<u64> = (0..n)
                    .scan(1u64, |w, _| {
                        let cur = *w;
                        *w = (*w * (d + 1)) % r;
                        Some(cur % r)
                    })
                    .collect();
                let points = k
                    .saturating_mul(n as u64)
                    .saturating_mul(d)
                    .saturating_mul(r - 1)
                    .saturating_add(1);
                if points > q {
                    return Err(Error::FieldTooSmall { required: points, available: q });
                }
                blocks.push(KsBlock { weights, points });
            }
            Shape::Ks { blocks }
        }
    };
    Ok(HittingSet { field: field.clone(), params, shape })
}

/// Anchor set: hitting set for the pairwise resultants of the factors of a
/// monic `s`-sparse polynomial with individual degree `d`.
pub fn gen_anchor_set(field: &Field, n: usize, s: u64, d: u64, cfg: &SbConfig) -> Result<HittingSet> {
    let (sp, deg, k) = anchor_params(n, s, d, cfg);
    gen_hitting_set(field, n, sp, deg, k, HitStrategy::Grid)
}

/// `((2d * SB)^(2d), 2d^2, d^2)`
pub fn anchor_params(n: usize, s: u64, d: u64, cfg: &SbConfig) -> (u64, u64, u64) {
    let sb = sparsity_cap(n.max(1) as u64, s.max(1), d.max(1), cfg);
    let base = (2 * d).saturating_mul(sb);
    let sp = (0..2 * d).fold(1u64, |acc, _| acc.saturating_mul(base));
    (sp, 2 * d * d, d * d)
}

/// Smallest field size the anchor grid needs.
pub fn anchor_field_size(d: u64) -> u64 {
    2 * d * d * d * d + 1
}

impl HittingSet {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.params.n
    }

    /// Number of points.
    pub fn len(&self) -> u128 {
        match &self.shape {
            Shape::Grid { axis } => (axis.len() as u128).saturating_pow(self.params.n as u32),
            Shape::Ks { blocks } => blocks.iter().map(|b| b.points as u128).sum(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = Vec<FieldElem>> + Send + '_> {
        let n = self.params.n;
        match &self.shape {
            Shape::Grid { axis } => {
                let m = axis.len();
                let mut idx = vec![0usize; n];
                let mut done = m == 0;
                Box::new(std::iter::from_fn(move || {
                    if done {
                        return None;
                    }
                    let p: Vec<FieldElem> = idx.iter().map(|&i| axis[i]).collect();
                    let mut j = n;
                    loop {
                        if j == 0 {
                            done = true;
                            break;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < m {
                            break;
                        }
                        idx[j] = 0;
                    }
                    Some(p)
                }))
            }
            Shape::Ks { blocks } => {
                let f = &self.field;
                Box::new(blocks.iter().flat_map(move |b| {
                    (0..b.points as u32).map(move |t| {
                        let t = f.nth(t);
                        b.weights.iter().map(|&w| f.pow(t, w)).collect()
                    })
                }))
            }
        }
    }
}

impl HittingSet {
    /// Same points as [`HittingSet::iter`]; grid points are grouped into
    /// shells by their largest axis index, lexicographic within a shell.
    pub fn iter_shells(&self) -> Box<dyn Iterator<Item = Vec<FieldElem>> + Send + '_> {
        let Shape::Grid { axis } = &self.shape else {
            return self.iter();
        };
        let n = self.params.n;
        if n == 0 {
            return self.iter();
        }
        Box::new((0..axis.len()).flat_map(move |s| {
            let mut idx = vec![0usize; n];
            let mut done = false;
            std::iter::from_fn(move || loop {
                if done {
                    return None;
                }
                let p = idx.clone();
                let mut j = n;
                loop {
                    if j == 0 {
                        done = true;
                        break;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] <= s {
                        break;
                    }
                    idx[j] = 0;
                }
                if p.contains(&s) {
                    return Some(p.iter().map(|&i| axis[i]).collect());
                }
            })
        }))
    }
}
