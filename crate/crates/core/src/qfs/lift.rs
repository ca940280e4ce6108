//! Arithmetic in `GR(p^k, m)[t^(Z/p^(n-1))]`, the ring `W_k(F_q[t^(±1/p^∞)])` truncated to
//! exponents with denominator `p^(n-1)`.
//!
//! Exponents are stored as integers in units of `1/p^(n-1)`. Coefficients live in
//! `Z/p^k[x]/(f̂)` with `f̂` the naive lift of the `F_q` modulus, kept as `m` component
//! polynomials with entries in `0..p^k`.

use crate::field::{Fq, FqContext};
use crate::poly::Laurent;

const KARATSUBA_CUTOFF: usize = 48;

fn conv_school(a: &[i64], b: &[i64], out: &mut [i64], q: i64) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
        if i % 64 == 63 {
            for v in out.iter_mut() {
                *v %= q;
            }
        }
    }
}

/// Product of two polynomials over `Z/q`; inputs in `0..q`, output in `0..q`.
pub fn conv(a: &[i64], b: &[i64], q: i64) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    conv_into(a, b, &mut out, q);
    for v in out.iter_mut() {
        *v = v.rem_euclid(q);
    }
    out
}

fn conv_into(a: &[i64], b: &[i64], out: &mut [i64], q: i64) {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    if b.len() < KARATSUBA_CUTOFF {
        conv_school(a, b, out, q);
        for v in out.iter_mut() {
            *v %= q;
        }
        return;
    }
    if a.len() >= 2 * b.len() {
        // unbalanced: slice the longer operand
        let mut start = 0;
        while start < a.len() {
            let end = (start + b.len()).min(a.len());
            let mut part = vec![0i64; end - start + b.len() - 1];
            conv_into(&a[start..end], b, &mut part, q);
            for (k, v) in part.into_iter().enumerate() {
                out[start + k] = (out[start + k] + v) % q;
            }
            start = end;
        }
        return;
    }
    let h = b.len() / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let mut z0 = vec![0i64; a0.len() + b0.len() - 1];
    conv_into(a0, b0, &mut z0, q);
    let mut z2 = vec![0i64; a1.len() + b1.len() - 1];
    conv_into(a1, b1, &mut z2, q);
    let sa: Vec<i64> = (0..a1.len()).map(|i| (a1[i] + a0.get(i).copied().unwrap_or(0)) % q).collect();
    let sb: Vec<i64> = (0..b1.len()).map(|i| (b1[i] + b0.get(i).copied().unwrap_or(0)) % q).collect();
    let mut z1 = vec![0i64; sa.len() + sb.len() - 1];
    conv_into(&sa, &sb, &mut z1, q);
    for (k, v) in z0.iter().enumerate() {
        z1[k] -= v;
        out[k] += v;
    }
    for (k, v) in z2.iter().enumerate() {
        z1[k] -= v;
        out[k + 2 * h] += v;
    }
    for (k, v) in z1.into_iter().enumerate() {
        out[k + h] += v;
    }
    for v in out.iter_mut() {
        *v %= q;
    }
}

/// The coefficient ring `GR(p^k, m)` for a fixed `F_q`.
#[derive(Clone, Debug)]
pub struct GrContext {
    pub p: i64,
    pub m: usize,
    /// Lift of the monic modulus `x^m + sum c_i x^i`, low coefficients only.
    pub modulus_low: Vec<i64>,
    /// Stored exponent unit is `1/p^(n-1)`.
    pub n: u32,
}

/// A Laurent polynomial over `GR(p^prec, m)` in stored exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftPoly {
    pub prec: u32,
    pub lo: i64,
    /// `comps[c][k]` is the `x^c` coordinate of the coefficient at stored exponent `lo + k`.
    pub comps: Vec<Vec<i64>>,
}

impl GrContext {
    pub fn new(field: &FqContext, n: u32) -> Self {
        let m = field.degree();
        let modulus_low = field.modulus()[..m].iter().map(|&c| c as i64).collect();
        GrContext { p: field.p() as i64, m, modulus_low, n }
    }

    pub fn q(&self, prec: u32) -> i64 {
        self.p.pow(prec)
    }

    pub fn zero(&self, prec: u32) -> LiftPoly {
        LiftPoly { prec, lo: 0, comps: vec![vec![]; self.m] }
    }

    fn trim(&self, mut a: LiftPoly) -> LiftPoly {
        let len = a.comps[0].len();
        let nz = |k: usize| a.comps.iter().any(|c| c[k] != 0);
        let mut hi = len;
        while hi > 0 && !nz(hi - 1) {
            hi -= 1;
        }
        let mut lo = 0;
        while lo < hi && !nz(lo) {
            lo += 1;
        }
        if lo == hi {
            return self.zero(a.prec);
        }
        for c in a.comps.iter_mut() {
            c.truncate(hi);
            c.drain(..lo);
        }
        a.lo += lo as i64;
        a
    }

    pub fn is_zero(&self, a: &LiftPoly) -> bool {
        a.comps[0].is_empty()
    }

    pub fn span(&self, a: &LiftPoly) -> usize {
        a.comps[0].len()
    }

    /// `sum_k c_k a_k` with integer multipliers, all at the precision of the first term.
    pub fn lincomb(&self, terms: &[(i64, &LiftPoly)]) -> LiftPoly {
        let prec = terms.first().map_or(1, |t| t.1.prec);
        let live: Vec<_> = terms.iter().filter(|(_, a)| !self.is_zero(a)).collect();
        if live.is_empty() {
            return self.zero(prec);
        }
        let q = self.q(prec);
        let lo = live.iter().map(|(_, a)| a.lo).min().unwrap();
        let hi = live.iter().map(|(_, a)| a.lo + a.comps[0].len() as i64).max().unwrap();
        let mut comps = vec![vec![0i64; (hi - lo) as usize]; self.m];
        for (c, a) in live {
            let c = c.rem_euclid(q);
            if c == 0 {
                continue;
            }
            let off = (a.lo - lo) as usize;
            for (dst, src) in comps.iter_mut().zip(&a.comps) {
                for (k, &v) in src.iter().enumerate() {
                    dst[off + k] = (dst[off + k] + c * v) % q;
                }
            }
        }
        self.trim(LiftPoly { prec, lo, comps })
    }

    pub fn add(&self, a: &LiftPoly, b: &LiftPoly) -> LiftPoly {
        self.lincomb(&[(1, a), (1, b)])
    }

    pub fn sub(&self, a: &LiftPoly, b: &LiftPoly) -> LiftPoly {
        self.lincomb(&[(1, a), (-1, b)])
    }

    pub fn mul(&self, a: &LiftPoly, b: &LiftPoly) -> LiftPoly {
        debug_assert_eq!(a.prec, b.prec);
        if self.is_zero(a) || self.is_zero(b) {
            return self.zero(a.prec);
        }
        let q = self.q(a.prec);
        let len = a.comps[0].len() + b.comps[0].len() - 1;
        let m = self.m;
        let mut wide = vec![vec![0i64; len]; 2 * m - 1];
        for (i, ai) in a.comps.iter().enumerate() {
            for (j, bj) in b.comps.iter().enumerate() {
                let c = conv(ai, bj, q);
                for (d, v) in wide[i + j].iter_mut().zip(c) {
                    *d = (*d + v) % q;
                }
            }
        }
        // x^m = -sum c_i x^i
        for k in (m..2 * m - 1).rev() {
            let top = std::mem::take(&mut wide[k]);
            for (i, &ci) in self.modulus_low.iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                for (d, &v) in wide[k - m + i].iter_mut().zip(&top) {
                    *d = (*d - ci * v).rem_euclid(q);
                }
            }
        }
        wide.truncate(m);
        self.trim(LiftPoly { prec: a.prec, lo: a.lo + b.lo, comps: wide })
    }

    pub fn pow(&self, a: &LiftPoly, mut e: u64) -> LiftPoly {
        let mut acc: Option<LiftPoly> = None;
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(x) => self.mul(&x, &base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc.unwrap_or_else(|| {
            let mut one = self.zero(a.prec);
            for (c, comp) in one.comps.iter_mut().enumerate() {
                comp.push(i64::from(c == 0));
            }
            one
        })
    }

    /// Exact division by `p`; precision drops by one.
    pub fn div_p(&self, a: &LiftPoly) -> Option<LiftPoly> {
        let mut out = a.clone();
        for c in out.comps.iter_mut() {
            for v in c.iter_mut() {
                if *v % self.p != 0 {
                    return None;
                }
                *v /= self.p;
            }
        }
        out.prec -= 1;
        Some(self.trim(out))
    }

    /// Multiplication by `p^k`, raising precision by `k`.
    pub fn mul_p_pow(&self, a: &LiftPoly, k: u32) -> LiftPoly {
        let pk = self.p.pow(k);
        let mut out = a.clone();
        for c in out.comps.iter_mut() {
            for v in c.iter_mut() {
                *v *= pk;
            }
        }
        out.prec += k;
        out
    }

    /// Reduction to lower precision.
    pub fn truncate(&self, a: &LiftPoly, prec: u32) -> LiftPoly {
        let q = self.q(prec);
        let mut out = a.clone();
        out.prec = prec;
        for c in out.comps.iter_mut() {
            for v in c.iter_mut() {
                *v %= q;
            }
        }
        self.trim(out)
    }

    /// `[g^(1/p^level)]` modulo `p^(n - level)`, for a Laurent polynomial `g` with integral exponents.
    pub fn teichmuller(&self, field: &FqContext, g: &Laurent, level: u32) -> LiftPoly {
        let prec = self.n - level;
        if g.is_zero() {
            return self.zero(prec);
        }
        let lo = g.min_exp().unwrap();
        let hi = g.max_exp().unwrap();
        let mut comps = vec![vec![0i64; (hi - lo + 1) as usize]; self.m];
        for (k, c) in g.terms() {
            let root = field.frobenius_root(c, self.n - 1);
            for (d, &v) in comps.iter_mut().zip(root.coords().iter()) {
                d[(k - lo) as usize] = v as i64;
            }
        }
        let base = LiftPoly { prec, lo, comps };
        let e = (self.p as u64).pow(self.n - 1 - level);
        self.pow(&base, e)
    }

    /// Reads `a mod p` as `g^(1/p^level)` and returns `g`; `None` if an exponent is not
    /// a multiple of `p^(n-1-level)`.
    pub fn extract(&self, field: &FqContext, a: &LiftPoly, level: u32) -> Option<Laurent> {
        if self.is_zero(a) {
            return Some(Laurent::zero());
        }
        let step = self.p.pow(self.n - 1 - level);
        let mut terms: Vec<(i64, Fq)> = Vec::new();
        let mut coords = vec![0i64; self.m];
        for k in 0..a.comps[0].len() {
            let mut nz = false;
            for (c, comp) in coords.iter_mut().zip(&a.comps) {
                *c = comp[k].rem_euclid(self.p);
                nz |= *c != 0;
            }
            if !nz {
                continue;
            }
            let e = a.lo + k as i64;
            if e.rem_euclid(step) != 0 {
                return None;
            }
            let c = field.frobenius_pow(field.from_coords(&coords), level);
            terms.push((e / step, c));
        }
        let Some(&(lo, _)) = terms.first() else {
            return Some(Laurent::zero());
        };
        let hi = terms.last().unwrap().0;
        let mut dense = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for (e, c) in terms {
            dense[(e - lo) as usize] = c;
        }
        Some(Laurent::from_coeffs(lo, dense))
    }

    /// The lift `sum p^i T_i(a_i)` of the Witt vector `(a_0, .., a_(n-1))`.
    pub fn from_witt(&self, field: &FqContext, comps: &[Laurent]) -> LiftPoly {
        let mut acc = self.zero(self.n);
        for (i, a) in comps.iter().enumerate() {
            let t = self.teichmuller(field, a, i as u32);
            acc = self.add(&acc, &self.mul_p_pow(&t, i as u32));
        }
        acc
    }

    /// Witt components of a full-precision lift; `None` if some component is not a
    /// Laurent polynomial with integral exponents.
    pub fn to_witt(&self, field: &FqContext, a: &LiftPoly) -> Option<Vec<Laurent>> {
        let mut cur = a.clone();
        let mut out = Vec::new();
        for i in 0..self.n {
            let c = self.extract(field, &cur, i)?;
            cur = self.sub(&cur, &self.teichmuller(field, &c, i));
            out.push(c);
            if i + 1 < self.n {
                cur = self.div_p(&cur)?;
            }
        }
        Some(out)
    }

    /// Whether every coefficient is divisible by `p`.
    pub fn is_zero_mod_p(&self, a: &LiftPoly) -> bool {
        a.comps.iter().all(|c| c.iter().all(|v| v % self.p == 0))
    }
}
