//! Finite fields `F_q`, `q = p^ext`, in polynomial basis over `F_p`.
//!
//! An element is stored as its integer code `sum c_i * p^i`, where `c_i` is
//! the coefficient of `z^i` in the reduced residue. The enumeration order of a
//! field is increasing code, i.e. residue vectors compared lexicographically
//! from the highest coefficient down. Multiplication goes through discrete
//! log tables built once per context.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// An element of some [`FieldCtx`]. Meaningless without its context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Integer code of the element (its position in the field enumeration).
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub struct FieldCtx {
    p: u32,
    ext: u32,
    q: u32,
    /// Monic modulus, low to high, length `ext + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} (modulus {:?})", self.p, self.ext, self.modulus)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ext == other.ext && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Build `F_{p^ext}` with the lexicographically smallest monic irreducible modulus.
pub fn make_field(p: u64, ext: u32) -> Result<Field> {
    FieldCtx::new(p, ext).map(Arc::new)
}

// Dense polynomial helpers over F_p used only while constructing a context.
mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let li = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = (r[top] as u64 * li as u64 % p as u64) as u32;
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut r: Vec<u32> = r.into_iter().map(|v| v as u32).collect();
        trim(&mut r);
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut r: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// `z^(p^k) mod m` by repeated p-th powering.
    pub fn frob_power(m: &[u32], k: u32, p: u32) -> Vec<u32> {
        let mut x = rem(&[0, 1], m, p);
        for _ in 0..k {
            let mut r = vec![1u32];
            for _ in 0..p {
                r = mulmod(&r, &x, m, p);
            }
            x = r;
        }
        x
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        if deg == 1 {
            return true;
        }
        let z = vec![0u32, 1];
        for k in 1..=(deg / 2) as u32 {
            let zk = frob_power(m, k, p);
            let g = gcd(m, &sub(&zk, &z, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl FieldCtx {
    fn new(p: u64, ext: u32) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if ext == 0 {
            return Err(Error::ZeroExtension);
        }
        let q = (p as u128).checked_pow(ext).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge { p, ext });
        }
        let p32 = p as u32;
        let q = q as u32;
        let modulus = if ext == 1 {
            vec![0, 1]
        } else {
            let low = p32.pow(ext);
            (0..low)
                .map(|code| {
                    let mut m = digits(code, p32, ext);
                    m.push(1);
                    m
                })
                .find(|m| fp::is_irreducible(m, p32))
                .ok_or_else(|| Error::Internal("no irreducible modulus".into()))?
        };
        let mut ctx = FieldCtx { p: p32, ext, q, modulus, exp: Vec::new(), log: Vec::new() };
        ctx.build_tables();
        Ok(ctx)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = digits(a, self.p, self.ext);
        let pb = digits(b, self.p, self.ext);
        let r = fp::mulmod(&pa, &pb, &self.modulus, self.p);
        undigits(&r, self.p)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.slow_mul(r, b);
            }
            b = self.slow_mul(b, b);
            e >>= 1;
        }
        r
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let gen = (2..self.q)
            .find(|&g| factors.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .unwrap_or(1);
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..order as u32 {
            exp.push(x);
            log[x as usize] = i;
            x = self.slow_mul(x, gen);
        }
        self.exp = exp;
        self.log = log;
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.ext
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q).map(FieldElem)
    }

    /// The `i`-th element in enumeration order.
    pub fn nth(&self, i: u32) -> FieldElem {
        debug_assert!(i < self.q);
        FieldElem(i)
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 < self.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem> {
        if coeffs.len() > self.ext as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::CtxMismatch);
        }
        Ok(FieldElem(undigits(coeffs, self.p)))
    }

    /// Residue vector of length `ext`, lowest degree first.
    pub fn coeffs(&self, a: FieldElem) -> Vec<u32> {
        digits(a.0, self.p, self.ext)
    }

    pub fn in_prime_subfield(&self, a: FieldElem) -> bool {
        a.0 < self.p
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.ext == 1 {
            let s = a.0 + b.0;
            FieldElem(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            FieldElem(a.0 ^ b.0)
        } else {
            let (mut x, mut y, mut r, mut w) = (a.0, b.0, 0, 1);
            for _ in 0..self.ext {
                let d = (x % self.p + y % self.p) % self.p;
                r += d * w;
                w *= self.p;
                x /= self.p;
                y /= self.p;
            }
            FieldElem(r)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.ext == 1 {
            FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else if self.p == 2 {
            a
        } else {
            let (mut x, mut r, mut w) = (a.0, 0, 1);
            for _ in 0..self.ext {
                let d = x % self.p;
                r += ((self.p - d) % self.p) * w;
                w *= self.p;
                x /= self.p;
            }
            FieldElem(r)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        if self.ext == 1 {
            return FieldElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElem(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        self.try_inv(a).expect("inverse of zero")
    }

    pub fn try_inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElem(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElem(self.exp[((l * (e % n)) % n) as usize])
    }

    /// Unique `b` with `b^p = a` (Frobenius is bijective on a finite field).
    pub fn pth_root(&self, a: FieldElem) -> FieldElem {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// Checked arithmetic on elements that may come from elsewhere.
    pub fn arith(&self, a: FieldElem, b: FieldElem, kind: ArithKind) -> Result<FieldElem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::CtxMismatch);
        }
        Ok(match kind {
            ArithKind::Add => self.add(a, b),
            ArithKind::Sub => self.sub(a, b),
            ArithKind::Mul => self.mul(a, b),
        })
    }

    /// Text form: plain integer for prime-subfield elements, `[c0,c1,..]` otherwise.
    pub fn fmt_elem(&self, a: FieldElem) -> String {
        if self.in_prime_subfield(a) {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    /// Structured form: integer for prime fields, residue vector otherwise.
    pub fn to_json(&self, a: FieldElem) -> serde_json::Value {
        if self.ext == 1 {
            serde_json::Value::from(a.0)
        } else {
            serde_json::Value::from(self.coeffs(a))
        }
    }

    pub fn from_json(&self, v: &serde_json::Value) -> Result<FieldElem> {
        let bad = || Error::Parse { pos: 0, msg: format!("bad field element {v}") };
        match v {
            serde_json::Value::Number(n) => {
                let i = n.as_i64().ok_or_else(bad)?;
                Ok(self.from_int(i))
            }
            serde_json::Value::Array(items) => {
                let c: Option<Vec<u32>> =
                    items.iter().map(|x| x.as_u64().map(|u| u as u32)).collect();
                self.from_coeffs(&c.ok_or_else(bad)?)
            }
            _ => Err(bad()),
        }
    }
}

fn digits(mut code: u32, p: u32, len: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(len as usize);
    for _ in 0..len {
        d.push(code % p);
        code /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Embedding of a base field into an extension of degree `k` over it.
pub struct Embedding {
    pub base: Field,
    pub ext: Field,
    image: Vec<FieldElem>,
    back: HashMap<FieldElem, FieldElem>,
}

impl Embedding {
    /// Smallest extension degree `k` with `|base|^k >= needed`.
    pub fn degree_for(base: &FieldCtx, needed: u64) -> Result<u32> {
        let q = base.size() as u64;
        let mut k = 1u32;
        let mut size = q;
        while size < needed {
            k += 1;
            size = size.saturating_mul(q);
            if size > MAX_FIELD_SIZE && size < needed {
                break;
            }
        }
        if size > MAX_FIELD_SIZE {
            return Err(Error::FieldTooSmall { required: needed, available: q });
        }
        Ok(k)
    }

    pub fn new(base: &Field, k: u32) -> Result<Embedding> {
        let ext = make_field(base.p as u64, base.ext * k)?;
        // Image of the base generator z: a root of the base modulus in `ext`.
        let theta = if base.ext == 1 {
            FieldElem::ZERO
        } else {
            ext.elements()
                .find(|&x| {
                    let mut acc = FieldElem::ZERO;
                    for &c in base.modulus.iter().rev() {
                        acc = ext.add(ext.mul(acc, x), FieldElem(c));
                    }
                    acc.is_zero()
                })
                .ok_or_else(|| Error::Internal("base modulus has no root in extension".into()))?
        };
        let mut image = Vec::with_capacity(base.size() as usize);
        let mut back = HashMap::with_capacity(base.size() as usize);
        for a in base.elements() {
            let mut acc = FieldElem::ZERO;
            for &c in base.coeffs(a).iter().rev() {
                acc = ext.add(ext.mul(acc, theta), FieldElem(c));
            }
            image.push(acc);
            back.insert(acc, a);
        }
        Ok(Embedding { base: base.clone(), ext, image, back })
    }

    pub fn up(&self, a: FieldElem) -> FieldElem {
        self.image[a.0 as usize]
    }

    /// Preimage of an extension element, if it lies in the base field.
    pub fn down(&self, a: FieldElem) -> Option<FieldElem> {
        self.back.get(&a).copied()
    }

    /// Generator of `Gal(ext / base)`: `a -> a^|base|`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.ext.pow(a, self.base.size() as u64)
    }

    pub fn relative_degree(&self) -> u32 {
        self.ext.degree() / self.base.degree()
    }
}
