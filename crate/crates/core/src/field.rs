//! Finite fields `F_q`, `q = p^m`, as `F_p[z]/(f)` for a fixed monic irreducible `f`.
//!
//! The modulus is the smallest monic irreducible polynomial of degree `m` when
//! monic polynomials `z^m + c_{m-1} z^{m-1} + ... + c_0` are ordered by the
//! integer `sum c_i p^i`. This makes the field (and every coordinate derived
//! from it) reproducible across runs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 8;

/// Tables are built when `q` does not exceed this.
const TABLE_LIMIT: u64 = 1 << 16;

/// An element of `F_q` stored as its coordinates on `1, z, ..., z^{m-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub(crate) [u8; MAX_DEGREE]);

impl Fq {
    pub const ZERO: Fq = Fq([0; MAX_DEGREE]);

    pub fn coords(&self) -> &[u8; MAX_DEGREE] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        write!(f, "Fq{:?}", &self.0[..=last])
    }
}

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

/// Shared, read-only description of `F_q`.
pub type Field = Arc<FqContext>;

pub struct FqContext {
    p: u32,
    m: usize,
    q: u64,
    /// Monic modulus, low degree first, length `m + 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

struct Tables {
    /// `exp[k] = g^k` as an index, for `k < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[idx]` for nonzero indices.
    log: Vec<u32>,
}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqContext")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl FqContext {
    /// Builds `F_{p^m}` with the deterministic modulus.
    pub fn new(p: u32, m: usize) -> Result<Field> {
        if !is_prime(p as u64) || p > 251 {
            return Err(Error::Unsupported(format!("characteristic {p} must be a prime below 256")));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::Unsupported(format!("extension degree {m} outside 1..={MAX_DEGREE}")));
        }
        let modulus = smallest_irreducible(p, m);
        Ok(Arc::new(Self::with_modulus(p, m, modulus)))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Self::new(p, 1)
    }

    fn with_modulus(p: u32, m: usize, modulus: Vec<u32>) -> Self {
        let q = (p as u64).pow(m as u32);
        let mut ctx = FqContext { p, m, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .map(|i| self.from_index(i))
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, order / r) != self.one()))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = self.one();
        for k in 0..order {
            let idx = self.to_index(x);
            exp.push(idx as u32);
            log[idx as usize] = k as u32;
            x = self.mul_slow(x, generator);
        }
        let head = exp.clone();
        exp.extend(head);
        Tables { exp, log }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Monic modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        c[0] = 1;
        Fq(c)
    }

    /// The class of the integer `k` (in the prime field).
    pub fn from_int(&self, k: i64) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        c[0] = k.rem_euclid(self.p as i64) as u8;
        Fq(c)
    }

    /// The class of `z` in `F_p[z]/(f)`. For `m = 1` this is the root of the linear modulus.
    pub fn generator(&self) -> Fq {
        if self.m == 1 {
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut c = [0u8; MAX_DEGREE];
        c[1] = 1;
        Fq(c)
    }

    /// Builds an element from coordinates on `1, z, ..., z^{m-1}` (reduced mod `p`).
    pub fn from_coords(&self, coords: &[i64]) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        let mut acc = vec![0i64; coords.len().max(self.m)];
        for (i, &x) in coords.iter().enumerate() {
            acc[i] = x;
        }
        // reduce higher powers with the modulus
        let p = self.p as i64;
        for deg in (self.m..acc.len()).rev() {
            let lead = acc[deg].rem_euclid(p);
            if lead == 0 {
                continue;
            }
            for (j, &mc) in self.modulus[..self.m].iter().enumerate() {
                acc[deg - self.m + j] -= lead * mc as i64;
            }
            acc[deg] = 0;
        }
        for i in 0..self.m {
            c[i] = acc[i].rem_euclid(p) as u8;
        }
        Fq(c)
    }

    /// Bijection `F_q -> 0..q` (base-`p` digits of the coordinates).
    pub fn to_index(&self, a: Fq) -> u64 {
        let mut idx = 0u64;
        for i in (0..self.m).rev() {
            idx = idx * self.p as u64 + a.0[i] as u64;
        }
        idx
    }

    pub fn from_index(&self, mut idx: u64) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        for slot in c.iter_mut().take(self.m) {
            *slot = (idx % self.p as u64) as u8;
            idx /= self.p as u64;
        }
        Fq(c)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    /// `F_p`-basis `1, z, ..., z^{m-1}`.
    pub fn basis(&self) -> Vec<Fq> {
        (0..self.m)
            .map(|i| {
                let mut c = [0u8; MAX_DEGREE];
                c[i] = 1;
                Fq(c)
            })
            .collect()
    }

    pub fn is_in_prime_field(&self, a: Fq) -> bool {
        a.0[1..].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        let p = self.p as u16;
        for i in 0..self.m {
            let s = a.0[i] as u16 + b.0[i] as u16;
            c[i] = if s >= p { (s - p) as u8 } else { s as u8 };
        }
        Fq(c)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = if a.0[i] == 0 { 0 } else { (self.p - a.0[i] as u32) as u8 };
        }
        Fq(c)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if let Some(t) = &self.tables {
            if a.is_zero() || b.is_zero() {
                return Fq::ZERO;
            }
            let la = t.log[self.to_index(a) as usize] as usize;
            let lb = t.log[self.to_index(b) as usize] as usize;
            return self.from_index(t.exp[la + lb] as u64);
        }
        self.mul_slow(a, b)
    }

    /// Multiplication by an element of the prime field.
    #[inline]
    pub fn scale(&self, a: Fq, k: u32) -> Fq {
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..self.m {
            c[i] = ((a.0[i] as u32 * k) % self.p) as u8;
        }
        Fq(c)
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let m = self.m;
        let p = self.p as u64;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += a.0[i] as u64 * b.0[j] as u64;
            }
        }
        for deg in (m..2 * m - 1).rev() {
            let lead = prod[deg] % p;
            if lead == 0 {
                continue;
            }
            for j in 0..m {
                prod[deg - m + j] += (p - lead) * self.modulus[j] as u64;
            }
            prod[deg] = 0;
        }
        let mut c = [0u8; MAX_DEGREE];
        for i in 0..m {
            c[i] = (prod[i] % p) as u8;
        }
        Fq(c)
    }

    fn pow_slow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if let Some(t) = &self.tables {
            if e == 0 {
                return self.one();
            }
            if a.is_zero() {
                return Fq::ZERO;
            }
            let order = self.q - 1;
            let la = t.log[self.to_index(a) as usize] as u64;
            let k = ((la as u128 * e as u128) % order as u128) as usize;
            return self.from_index(t.exp[k] as u64);
        }
        self.pow_slow(a, e)
    }

    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Option<Fq> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        if self.m == 1 {
            return a;
        }
        self.pow(a, self.p as u64)
    }

    /// `a^(p^k)`; `k` may exceed `m`.
    pub fn frobenius_pow(&self, a: Fq, k: u32) -> Fq {
        let k = k as usize % self.m;
        if k == 0 {
            return a;
        }
        self.pow(a, (self.p as u64).pow(k as u32))
    }

    /// The unique `b` with `b^(p^k) = a`.
    pub fn frobenius_root(&self, a: Fq, k: u32) -> Fq {
        let k = k as usize % self.m;
        if k == 0 {
            return a;
        }
        self.frobenius_pow(a, (self.m - k) as u32)
    }

    /// Square root if one exists (Tonelli-style exhaustive fallback for small fields).
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return Some(a);
        }
        if self.p == 2 {
            return Some(self.frobenius_root(a, 1));
        }
        if self.pow(a, (self.q - 1) / 2) != self.one() {
            return None;
        }
        if self.q % 4 == 3 {
            return Some(self.pow(a, (self.q + 1) / 4));
        }
        // Tonelli-Shanks
        let mut s = 0;
        let mut t = self.q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .find(|&z| !z.is_zero() && self.pow(z, (self.q - 1) / 2) != self.one())
            .expect("non-residue exists in odd characteristic");
        let mut mm = s;
        let mut c = self.pow(z, t);
        let mut tt = self.pow(a, t);
        let mut r = self.pow(a, (t + 1) / 2);
        while tt != self.one() {
            let mut i = 0;
            let mut x = tt;
            while x != self.one() {
                x = self.mul(x, x);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(mm - i - 1) {
                b = self.mul(b, b);
            }
            mm = i;
            c = self.mul(b, b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Roots of `x^2 + b x + c` in `F_q`.
    pub fn quadratic_roots(&self, b: Fq, c: Fq) -> Vec<Fq> {
        if self.p == 2 {
            return self.elements().filter(|&x| self.add(self.mul(x, self.add(x, b)), c).is_zero()).collect();
        }
        let two_inv = self.inv(self.from_int(2)).expect("p odd");
        let disc = self.sub(self.mul(b, b), self.scale(c, 4 % self.p));
        match self.sqrt(disc) {
            None => vec![],
            Some(s) => {
                let r1 = self.mul(self.sub(s, b), two_inv);
                let r2 = self.mul(self.sub(self.neg(s), b), two_inv);
                if r1 == r2 {
                    vec![r1]
                } else {
                    let mut v = vec![r1, r2];
                    v.sort();
                    v
                }
            }
        }
    }

    pub fn format(&self, a: Fq) -> String {
        if self.is_in_prime_field(a) {
            return a.0[0].to_string();
        }
        let mut terms = Vec::new();
        for i in (0..self.m).rev() {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, _) => format!("{c}*z"),
                (_, 1) => format!("z^{i}"),
                _ => format!("{c}*z^{i}"),
            };
            terms.push(t);
        }
        terms.join("+")
    }

    /// Parses `3`, `z`, `2*z^2+z+1` style literals (`z` is the field generator).
    pub fn parse(&self, s: &str) -> Result<Fq> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut coords = vec![0i64; MAX_DEGREE * 2];
        for raw in s.split('+') {
            let term = raw.trim();
            let bad = || Error::Parse(format!("bad field element term `{term}`"));
            let (coef, power) = if let Some(pos) = term.find('z') {
                let coef_part = term[..pos].trim_end_matches('*').trim();
                let coef = if coef_part.is_empty() { 1 } else { coef_part.parse::<i64>().map_err(|_| bad())? };
                let rest = term[pos + 1..].trim();
                let power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.trim().parse::<usize>().map_err(|_| bad())?
                };
                (coef, power)
            } else {
                (term.parse::<i64>().map_err(|_| bad())?, 0)
            };
            if power >= coords.len() {
                return Err(Error::Parse(format!("power too large in `{term}`")));
            }
            coords[power] += coef;
        }
        if self.m == 1 {
            // z is the root of the linear modulus
            let z = -(self.modulus[0] as i64);
            let mut acc = 0i64;
            let p = self.p as i64;
            for c in coords.iter().rev() {
                acc = (acc * z + c).rem_euclid(p);
            }
            return Ok(self.from_int(acc));
        }
        Ok(self.from_coords(&coords))
    }
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

// --- F_p[x] helpers used for modulus selection ---

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    poly_rem(&prod.into_iter().map(|x| x as u32).collect::<Vec<_>>(), f, p)
}

/// Remainder modulo a monic polynomial.
fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap() as u64;
        let shift = r.len() - 1 - df;
        for (j, &c) in f.iter().enumerate() {
            let cur = r[shift + j] as u64;
            r[shift + j] = ((cur + (p as u64 - lead) * c as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let inv = mod_inv(*b.last().unwrap() as u64, p as u64) as u64;
        let monic: Vec<u32> = b.iter().map(|&c| ((c as u64 * inv) % p as u64) as u32).collect();
        let r = poly_rem(&a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// `x^(p^k) mod f`.
fn x_pow_pk(f: &[u32], p: u32, k: usize) -> Vec<u32> {
    let mut x = poly_rem(&[0, 1], f, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u32];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&acc, &base, f, p);
            }
            base = poly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial of degree `m >= 1`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let xm = x_pow_pk(f, p, m);
    if trim(xm) != vec![0, 1] {
        return false;
    }
    for r in prime_factors(m as u64) {
        let mut h = x_pow_pk(f, p, m / r as usize);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let total = (p as u64).pow(m as u32);
    for idx in 0..total {
        let mut f = Vec::with_capacity(m + 1);
        let mut k = idx;
        for _ in 0..m {
            f.push((k % p as u64) as u32);
            k /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive factor check: no monic factor of degree 1..=m/2.
    fn irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        for d in 1..=m / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::new();
                let mut k = idx;
                for _ in 0..d {
                    g.push((k % p as u64) as u32);
                    k /= p as u64;
                }
                g.push(1);
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn modulus_is_irreducible_and_deterministic() {
        for &p in &[2u32, 3, 5, 7, 11, 13] {
            for m in 1..=4 {
                let a = FqContext::new(p, m).unwrap();
                let b = FqContext::new(p, m).unwrap();
                assert_eq!(a.modulus(), b.modulus());
                assert!(irreducible_by_trial_division(a.modulus(), p), "p={p} m={m}");
            }
        }
        for &p in &[89u32, 97] {
            let f = FqContext::new(p, 2).unwrap();
            assert!(irreducible_by_trial_division(f.modulus(), p));
        }
    }

    #[test]
    fn known_moduli() {
        assert_eq!(FqContext::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FqContext::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FqContext::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn field_axioms_small() {
        let f = FqContext::new(3, 2).unwrap();
        let els: Vec<Fq> = f.elements().collect();
        for &a in &els {
            for &b in &els {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.add(a, b), f.add(b, a));
                if !b.is_zero() {
                    assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
                }
            }
            assert_eq!(f.frobenius_root(f.frobenius(a), 1), a);
            assert_eq!(f.pow(a, f.order()), a);
        }
    }

    #[test]
    fn large_degree_without_tables() {
        let f = FqContext::new(97, 3).unwrap();
        assert!(f.tables.is_none());
        let z = f.generator();
        assert_eq!(f.pow(z, f.order()), z);
        assert_eq!(f.mul(f.inv(z).unwrap(), z), f.one());
    }

    #[test]
    fn sqrt_and_parse() {
        let f = FqContext::new(5, 2).unwrap();
        for a in f.elements() {
            let sq = f.mul(a, a);
            let r = f.sqrt(sq).unwrap();
            assert_eq!(f.mul(r, r), sq);
        }
        let a = f.parse("2*z+3").unwrap();
        assert_eq!(f.format(a), "2*z+3");
        assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        let g = FqContext::prime(7).unwrap();
        assert_eq!(g.parse("9").unwrap(), g.from_int(2));
        assert!(f.parse("x").is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FqContext::new(4, 1).is_err());
        assert!(FqContext::new(5, 0).is_err());
        assert!(FqContext::new(5, 9).is_err());
    }
}
