#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spfactor::bifactor::BiPoly;
use spfactor::sparsepoly::ExpVec;
use spfactor::{make_field, Field, FieldElem, SparsePoly, UniPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(p: u64) -> Field {
    make_field(p, 1).unwrap()
}

pub fn nonzero(f: &Field, rng: &mut ChaCha8Rng) -> FieldElem {
    f.nth(rng.random_range(1..f.size()))
}

pub fn any_elem(f: &Field, rng: &mut ChaCha8Rng) -> FieldElem {
    f.nth(rng.random_range(0..f.size()))
}

/// Smallest quadratic non-residue mod `p`.
pub fn nonresidue(p: u64) -> i64 {
    (2..p as i64).find(|&a| (1..p as i64).all(|x| (x * x - a).rem_euclid(p as i64) != 0)).unwrap()
}

/// Random irreducible drawn from three families: linear forms,
/// `x_j * B + c` with `B` free of `x_j` and `c != 0`, and `x_i^2 - r` with
/// `r` a non-residue (`x_i^2 + x_i + 1` in characteristic 2).
pub fn random_irreducible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> SparsePoly {
    match rng.random_range(0..3) {
        0 => {
            let mut p = SparsePoly::constant(f, n, any_elem(f, rng));
            let i = rng.random_range(0..n);
            p = &p + &SparsePoly::var(f, n, i).scale(nonzero(f, rng));
            if n > 1 && rng.random_bool(0.5) {
                let j = (i + 1 + rng.random_range(0..n - 1)) % n;
                p = &p + &SparsePoly::var(f, n, j).scale(nonzero(f, rng));
            }
            p
        }
        1 if n > 1 => {
            let j = rng.random_range(0..n);
            let mut b = SparsePoly::zero(f, n);
            while b.constant_value().is_some() {
                b = SparsePoly::zero(f, n);
                for _ in 0..rng.random_range(1..=2) {
                    let mut e = vec![0u32; n];
                    for (v, slot) in e.iter_mut().enumerate() {
                        if v != j && rng.random_bool(0.5) {
                            *slot = 1;
                        }
                    }
                    b = &b + &SparsePoly::monomial(f, n, ExpVec::new(&e), nonzero(f, rng));
                }
            }
            let c = SparsePoly::constant(f, n, nonzero(f, rng));
            &(&SparsePoly::var(f, n, j) * &b) + &c
        }
        _ => {
            let i = rng.random_range(0..n);
            let x = SparsePoly::var(f, n, i);
            if f.characteristic() == 2 {
                return &(&x.pow(2) + &x) + &SparsePoly::one(f, n);
            }
            let r = nonresidue(f.characteristic() as u64);
            &x.pow(2) - &SparsePoly::constant(f, n, f.from_int(r))
        }
    }
}

/// Scale to graded-lex leading coefficient 1 and merge equal factors.
pub fn canonical(factors: &[(SparsePoly, u32)]) -> Vec<(SparsePoly, u32)> {
    let mut m: BTreeMap<SparsePoly, u32> = BTreeMap::new();
    for (g, e) in factors {
        if g.constant_value().is_some() {
            continue;
        }
        *m.entry(g.normalized().1).or_insert(0) += e;
    }
    m.into_iter().collect()
}

/// Random bivariate polynomial with `deg_y <= dy`, `deg_t <= dt`.
pub fn random_bipoly(f: &Field, dy: usize, dt: usize, density: f64, rng: &mut ChaCha8Rng) -> BiPoly {
    let rows = (0..=dy)
        .map(|_| {
            let c = (0..=dt)
                .map(|_| if rng.random_bool(density) { any_elem(f, rng) } else { f.zero() })
                .collect();
            UniPoly::new(f, c)
        })
        .collect();
    BiPoly::new(f, rows)
}

fn bipoly_from_coeffs(f: &Field, a: usize, b: usize, c: &[FieldElem]) -> BiPoly {
    let rows = (0..=a).map(|i| UniPoly::new(f, c[i * (b + 1)..(i + 1) * (b + 1)].to_vec())).collect();
    BiPoly::new(f, rows)
}

/// Exhaustive search for a nonconstant proper divisor of `p`.
///
/// If `p = g h` then one of `g`, `h` fits in the smaller of the two
/// complementary degree boxes, so it suffices to enumerate those boxes up to
/// scaling.
pub fn has_proper_divisor(p: &BiPoly) -> bool {
    let f = p.field().clone();
    let (dy, dt) = (p.deg_y(), p.deg_t());
    let mut boxes = Vec::new();
    for a in 0..=dy {
        for b in 0..=dt {
            if (a, b) == (0, 0) || (a, b) == (dy, dt) {
                continue;
            }
            let (ca, cb) = (dy - a, dt - b);
            let bx = if (a + 1) * (b + 1) <= (ca + 1) * (cb + 1) { (a, b) } else { (ca, cb) };
            if !boxes.contains(&bx) {
                boxes.push(bx);
            }
        }
    }
    let q = f.size();
    for (a, b) in boxes {
        let len = (a + 1) * (b + 1);
        // first nonzero coordinate is 1
        for lead in 0..len {
            let free = len - lead - 1;
            let total = (q as u64).pow(free as u32);
            for code in 0..total {
                let mut c = vec![f.zero(); len];
                c[lead] = f.one();
                let mut r = code;
                for slot in c.iter_mut().skip(lead + 1) {
                    *slot = f.nth((r % q as u64) as u32);
                    r /= q as u64;
                }
                let g = bipoly_from_coeffs(&f, a, b, &c);
                if g.is_constant() || g.deg_y() + g.deg_t() >= dy + dt {
                    continue;
                }
                if p.div_exact(&g).is_some() {
                    return true;
                }
            }
        }
    }
    false
}

/// Resultant by the Euclidean remainder sequence.
pub fn euclid_resultant(f: &UniPoly, g: &UniPoly) -> FieldElem {
    let field = f.field().clone();
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut acc = field.one();
    loop {
        if a.is_zero() || b.is_zero() {
            return field.zero();
        }
        let (da, db) = (a.deg(), b.deg());
        if db == 0 {
            return field.mul(acc, field.pow(b.lc(), da as u64));
        }
        if da < db {
            if (da * db) % 2 == 1 {
                acc = field.neg(acc);
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // res(a, b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        let r = a.rem(&b);
        if r.is_zero() {
            return field.zero();
        }
        let dr = r.deg();
        if (da * db) % 2 == 1 {
            acc = field.neg(acc);
        }
        acc = field.mul(acc, field.pow(b.lc(), (da - dr) as u64));
        a = b;
        b = r;
    }
}

/// Symbolic `Res_y(f, g)` in the non-`y` variables by Leibniz expansion of
/// the Sylvester matrix. Small inputs only.
pub fn symbolic_resultant(f: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    let field = f.field().clone();
    let n = f.nvars();
    let fc = f.coefficients_in(0);
    let gc = g.coefficients_in(0);
    let (d, e) = (f.degree_in(0) as usize, g.degree_in(0) as usize);
    let size = d + e;
    let coeff = |cs: &[SparsePoly], k: usize| cs.get(k).cloned().unwrap_or_else(|| SparsePoly::zero(&field, n));
    let mut m: Vec<Vec<SparsePoly>> = vec![vec![SparsePoly::zero(&field, n); size]; size];
    for i in 0..e {
        for k in 0..=d {
            m[i][i + k] = coeff(&fc, d - k);
        }
    }
    for i in 0..d {
        for k in 0..=e {
            m[e + i][i + k] = coeff(&gc, e - k);
        }
    }
    let mut total = SparsePoly::zero(&field, n);
    let mut perm: Vec<usize> = (0..size).collect();
    permute(&mut perm, 0, &mut |p: &[usize]| {
        let mut term = SparsePoly::one(&field, n);
        for (r, &c) in p.iter().enumerate() {
            if m[r][c].is_zero() {
                return;
            }
            term = &term * &m[r][c];
        }
        let inversions = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        total = if inversions % 2 == 0 { &total + &term } else { &total - &term };
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Whether `p` is a convex combination of `others`, by trying every subset
/// and solving the barycentric system exactly when it is uniquely solvable.
pub fn brute_in_hull(p: &[u32], others: &[Vec<u32>]) -> bool {
    let n = p.len();
    let m = others.len();
    for mask in 1u32..(1 << m) {
        let s: Vec<&Vec<u32>> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &others[i]).collect();
        if s.len() > n + 1 {
            continue;
        }
        if let Some(lambda) = solve_barycentric(p, &s) {
            if lambda.iter().all(|l| !l.is_negative()) {
                return true;
            }
        }
    }
    false
}

fn solve_barycentric(p: &[u32], s: &[&Vec<u32>]) -> Option<Vec<BigRational>> {
    let k = s.len();
    let r = |v: i64| BigRational::from_integer(v.into());
    // rows: coordinates then the affine row
    let mut a: Vec<Vec<BigRational>> = (0..p.len())
        .map(|i| {
            let mut row: Vec<BigRational> = s.iter().map(|v| r(v[i] as i64)).collect();
            row.push(r(p[i] as i64));
            row
        })
        .collect();
    let mut ones = vec![r(1); k];
    ones.push(r(1));
    a.push(ones);
    let rows = a.len();
    let mut piv_row = 0;
    for col in 0..k {
        let Some(pr) = (piv_row..rows).find(|&i| !a[i][col].is_zero()) else {
            return None;
        };
        a.swap(piv_row, pr);
        let pv = a[piv_row][col].clone();
        for v in a[piv_row].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        for i in 0..rows {
            if i != piv_row && !a[i][col].is_zero() {
                let c = a[i][col].clone();
                for j in 0..=k {
                    let sub = c.clone() * a[piv_row][j].clone();
                    a[i][j] = a[i][j].clone() - sub;
                }
            }
        }
        piv_row += 1;
    }
    if a[piv_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| a[i][k].clone()).collect())
}

/// Vertices by the subset oracle.
pub fn brute_vertices(points: &[Vec<u32>]) -> Vec<Vec<u32>> {
    points
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<Vec<u32>> =
                points.iter().enumerate().filter(|(j, _)| j != i).map(|(_, q)| q.clone()).collect();
            !brute_in_hull(p, &others)
        })
        .map(|(_, p)| p.clone())
        .collect()
}

