//! Truncated Witt vectors over characteristic-`p` coefficient rings.
//!
//! The ring laws come from universal sum/product polynomials derived from the ghost map
//! `w_i(a) = sum_{j<=i} p^j a_j^(p^(i-j))`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Debug, Write as _};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::divisor::{PointP1, QDivisor};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::ratfunc::RationalFunctionElem;

/// A commutative `F_p`-algebra usable as Witt coefficients.
pub trait CoeffRing: Clone {
    type Elem: Clone + PartialEq + Debug;
    fn p(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, k: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

impl CoeffRing for Field {
    type Elem = Fq;
    fn p(&self) -> u32 {
        self.as_ref().p()
    }
    fn zero(&self) -> Fq {
        Fq::ZERO
    }
    fn one(&self) -> Fq {
        self.as_ref().one()
    }
    fn from_int(&self, k: i64) -> Fq {
        self.as_ref().from_int(k)
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        self.as_ref().add(*a, *b)
    }
    fn neg(&self, a: &Fq) -> Fq {
        self.as_ref().neg(*a)
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        self.as_ref().mul(*a, *b)
    }
    fn frobenius(&self, a: &Fq) -> Fq {
        self.as_ref().frobenius(*a)
    }
}

/// `F_q(t)` restricted to functions with poles in `F_q ∪ {∞}`.
#[derive(Clone, Debug)]
pub struct RatFuncRing(pub Field);

impl CoeffRing for RatFuncRing {
    type Elem = RationalFunctionElem;
    fn p(&self) -> u32 {
        self.0.p()
    }
    fn zero(&self) -> Self::Elem {
        RationalFunctionElem::zero()
    }
    fn one(&self) -> Self::Elem {
        RationalFunctionElem::constant(self.0.one())
    }
    fn from_int(&self, k: i64) -> Self::Elem {
        let c = self.0.from_int(k);
        if c.is_zero() {
            RationalFunctionElem::zero()
        } else {
            RationalFunctionElem::constant(c)
        }
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(b, &self.0)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.0)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b, &self.0)
    }
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        a.frobenius_pow(1, &self.0)
    }
}

/// Sparse integer polynomial; exponent vectors index variables `X_0.., Y_0..`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntPoly {
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    fn var(nvars: usize, v: usize) -> IntPoly {
        let mut e = vec![0; nvars];
        e[v] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        IntPoly { terms }
    }

    fn reduce(&mut self, modulus: Option<&BigInt>) {
        if let Some(m) = modulus {
            for c in self.terms.values_mut() {
                *c = c.mod_floor(m);
            }
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn add_scaled(&mut self, other: &IntPoly, k: &BigInt, modulus: Option<&BigInt>) {
        for (e, c) in &other.terms {
            *self.terms.entry(e.clone()).or_insert_with(BigInt::zero) += c * k;
        }
        self.reduce(modulus);
    }

    fn mul(&self, other: &IntPoly, modulus: Option<&BigInt>) -> IntPoly {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *terms.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let mut out = IntPoly { terms };
        out.reduce(modulus);
        out
    }

    fn pow(&self, mut e: u64, nvars: usize, modulus: Option<&BigInt>) -> IntPoly {
        let mut acc = IntPoly::default();
        acc.terms.insert(vec![0; nvars], BigInt::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, modulus);
            }
        }
        acc
    }

    /// Divides every coefficient by `d`, asserting exactness.
    fn div_exact(&self, d: &BigInt) -> IntPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let (q, r) = c.div_rem(d);
                assert!(r.is_zero(), "inexact division by {d} in ghost recursion");
                (e.clone(), q)
            })
            .collect();
        IntPoly { terms }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Evaluation over `Z`.
    pub fn eval_int(&self, vals: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in vals.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

/// The universal polynomials for one `(p, n)`.
#[derive(Clone, Debug)]
pub struct UniversalPolys {
    pub p: u32,
    pub n: usize,
    pub sum: Vec<IntPoly>,
    pub prod: Vec<IntPoly>,
    /// Additive inverse: `S(X, N(X)) = 0`.
    pub neg: Vec<IntPoly>,
    /// `true` when coefficients are exact over `Z`, `false` when reduced into `0..p`.
    pub exact: bool,
}

/// Limits on `(p, n)` for which universal polynomials are generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostCap {
    pub max_p: u32,
    pub max_n: usize,
    /// Bound on `p^(n-1)`, the top degree of the last slot.
    pub max_weight: u64,
}

impl Default for CostCap {
    fn default() -> Self {
        CostCap { max_p: 13, max_n: 4, max_weight: 169 }
    }
}

impl CostCap {
    pub fn check(&self, p: u32, n: usize) -> Result<()> {
        let weight = (p as u64).checked_pow(n.saturating_sub(1) as u32).unwrap_or(u64::MAX);
        if p > self.max_p || n > self.max_n || weight > self.max_weight {
            return Err(Error::Unsupported(format!("unsupported (p,n) = ({p},{n}) for universal Witt polynomials")));
        }
        Ok(())
    }
}

fn ghost_solve(
    p: u32,
    n: usize,
    nvars: usize,
    exact: bool,
    target: impl Fn(usize, Option<&BigInt>) -> IntPoly,
) -> Vec<IntPoly> {
    let pb = BigInt::from(p);
    let mut out: Vec<IntPoly> = Vec::with_capacity(n);
    for i in 0..n {
        let pi = num_traits::pow(pb.clone(), i);
        let modulus = (!exact).then(|| &pi * &pb);
        let m = modulus.as_ref();
        let mut num = target(i, m);
        for (j, s) in out.iter().enumerate() {
            let pj = num_traits::pow(pb.clone(), j);
            let power = s.pow((p as u64).pow((i - j) as u32), nvars, m);
            num.add_scaled(&power, &-pj, m);
        }
        let mut s = num.div_exact(&pi);
        if !exact {
            s.reduce(Some(&pb));
        }
        out.push(s);
    }
    out
}

fn ghost_component(p: u32, i: usize, nvars: usize, offset: usize, m: Option<&BigInt>) -> IntPoly {
    let mut g = IntPoly::default();
    for j in 0..=i {
        let pj = num_traits::pow(BigInt::from(p), j);
        let x = IntPoly::var(nvars, offset + j).pow((p as u64).pow((i - j) as u32), nvars, m);
        g.add_scaled(&x, &pj, m);
    }
    g
}

/// Generates sum, product and negation polynomials for `W_n` in characteristic `p`.
/// With `exact = false` the recursion runs modulo `p^(i+1)` and the results are reduced mod `p`.
pub fn gen_universal_polys_with(p: u32, n: usize, exact: bool, cap: &CostCap) -> Result<UniversalPolys> {
    if n == 0 || !crate::field::is_prime(p as u64) {
        return Err(Error::Invalid(format!("need prime p and n >= 1, got ({p},{n})")));
    }
    cap.check(p, n)?;
    let nv = 2 * n;
    let sum = ghost_solve(p, n, nv, exact, |i, m| {
        let mut g = ghost_component(p, i, nv, 0, m);
        g.add_scaled(&ghost_component(p, i, nv, n, m), &BigInt::one(), m);
        g
    });
    let prod = ghost_solve(p, n, nv, exact, |i, m| ghost_component(p, i, nv, 0, m).mul(&ghost_component(p, i, nv, n, m), m));
    let neg = ghost_solve(p, n, n, exact, |i, m| {
        let mut g = IntPoly::default();
        g.add_scaled(&ghost_component(p, i, n, 0, m), &-BigInt::one(), m);
        g
    });
    Ok(UniversalPolys { p, n, sum, prod, neg, exact })
}

/// Cached mod-`p` universal polynomials (default cost cap).
pub fn gen_universal_polys(p: u32, n: usize) -> Result<Arc<UniversalPolys>> {
    universal_polys_capped(p, n, &CostCap::default())
}

fn universal_polys_capped(p: u32, n: usize, cap: &CostCap) -> Result<Arc<UniversalPolys>> {
    cap.check(p, n)?;
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<UniversalPolys>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(u) = cache.lock().unwrap().get(&(p, n)) {
        return Ok(u.clone());
    }
    let u = Arc::new(gen_universal_polys_with(p, n, false, cap)?);
    cache.lock().unwrap().insert((p, n), u.clone());
    Ok(u)
}

/// Plain-text dump, one polynomial per line, coefficients in `0..p`.
pub fn dump_universal_polys(u: &UniversalPolys) -> String {
    let names: Vec<String> = (0..u.n).map(|i| format!("X{i}")).chain((0..u.n).map(|i| format!("Y{i}"))).collect();
    let render = |poly: &IntPoly, names: &[String]| -> String {
        let mut parts = Vec::new();
        for (e, c) in &poly.terms {
            let c = c.mod_floor(&BigInt::from(u.p));
            if c.is_zero() {
                continue;
            }
            let mut mono = String::new();
            for (v, &k) in e.iter().enumerate() {
                if k == 1 {
                    let _ = write!(mono, "*{}", names[v]);
                } else if k > 1 {
                    let _ = write!(mono, "*{}^{}", names[v], k);
                }
            }
            parts.push(format!("{c}{mono}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    };
    let mut out = String::new();
    for (i, s) in u.sum.iter().enumerate() {
        let _ = writeln!(out, "S{i} = {}", render(s, &names));
    }
    for (i, s) in u.prod.iter().enumerate() {
        let _ = writeln!(out, "P{i} = {}", render(s, &names));
    }
    for (i, s) in u.neg.iter().enumerate() {
        let _ = writeln!(out, "N{i} = {}", render(s, &names[..u.n]));
    }
    out
}

#[derive(Clone, PartialEq)]
pub struct WittVector<E> {
    pub comps: Vec<E>,
}

impl<E: Debug> Debug for WittVector<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("W").field(&self.comps).finish()
    }
}

impl<E> WittVector<E> {
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }
}

/// `W_n(R)` for a coefficient ring `R`.
#[derive(Clone)]
pub struct WittRingContext<R: CoeffRing> {
    ring: R,
    n: usize,
    polys: Arc<UniversalPolys>,
}

impl<R: CoeffRing> WittRingContext<R> {
    pub fn new(ring: R, n: usize) -> Result<Self> {
        Self::with_cap(ring, n, &CostCap::default())
    }

    pub fn with_cap(ring: R, n: usize, cap: &CostCap) -> Result<Self> {
        let polys = universal_polys_capped(ring.p(), n, cap)?;
        Ok(WittRingContext { ring, n, polys })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn p(&self) -> u32 {
        self.ring.p()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn polys(&self) -> &UniversalPolys {
        &self.polys
    }

    /// The context for `W_(n-1)`; needs `n >= 2`.
    pub fn shorter(&self) -> Result<Self> {
        if self.n < 2 {
            return Err(Error::Invalid("no shorter Witt ring below length 1".into()));
        }
        let polys = universal_polys_capped(self.p(), self.n - 1, &CostCap { max_p: u32::MAX, max_n: usize::MAX, max_weight: u64::MAX })?;
        Ok(WittRingContext { ring: self.ring.clone(), n: self.n - 1, polys })
    }

    pub fn zero(&self) -> WittVector<R::Elem> {
        WittVector { comps: vec![self.ring.zero(); self.n] }
    }

    pub fn one(&self) -> WittVector<R::Elem> {
        self.teichmuller(self.ring.one())
    }

    pub fn from_comps(&self, comps: Vec<R::Elem>) -> Result<WittVector<R::Elem>> {
        if comps.len() != self.n {
            return Err(Error::Invalid(format!("expected {} Witt components, got {}", self.n, comps.len())));
        }
        Ok(WittVector { comps })
    }

    pub fn teichmuller(&self, c: R::Elem) -> WittVector<R::Elem> {
        let mut comps = vec![self.ring.zero(); self.n];
        comps[0] = c;
        WittVector { comps }
    }

    fn check(&self, a: &WittVector<R::Elem>) {
        assert_eq!(a.len(), self.n, "Witt vector length does not match its context");
    }

    /// Evaluates polynomials whose variables are `vals`, sharing a power table.
    fn eval(&self, polys: &[IntPoly], vals: &[&R::Elem]) -> Vec<R::Elem> {
        let mut maxdeg = vec![0u32; vals.len()];
        for poly in polys {
            for e in poly.terms.keys() {
                for (m, &k) in maxdeg.iter_mut().zip(e) {
                    *m = (*m).max(k);
                }
            }
        }
        let powers: Vec<Vec<R::Elem>> = vals
            .iter()
            .zip(&maxdeg)
            .map(|(v, &d)| {
                let mut table = vec![self.ring.one()];
                if !self.ring.is_zero(v) {
                    for k in 1..=d as usize {
                        let next = self.ring.mul(&table[k - 1], v);
                        table.push(next);
                    }
                }
                table
            })
            .collect();
        polys
            .iter()
            .map(|poly| {
                let mut acc = self.ring.zero();
                'terms: for (e, c) in &poly.terms {
                    let c = c.mod_floor(&BigInt::from(self.p())).to_i64().unwrap();
                    if c == 0 {
                        continue;
                    }
                    let mut t = self.ring.from_int(c);
                    for (v, &k) in e.iter().enumerate() {
                        if k > 0 {
                            match powers[v].get(k as usize) {
                                Some(pw) => t = self.ring.mul(&t, pw),
                                None => continue 'terms,
                            }
                        }
                    }
                    acc = self.ring.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.check(a);
        self.check(b);
        let vals: Vec<&R::Elem> = a.comps.iter().chain(&b.comps).collect();
        WittVector { comps: self.eval(&self.polys.sum, &vals) }
    }

    pub fn mul(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.check(a);
        self.check(b);
        let vals: Vec<&R::Elem> = a.comps.iter().chain(&b.comps).collect();
        WittVector { comps: self.eval(&self.polys.prod, &vals) }
    }

    pub fn neg(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.check(a);
        let vals: Vec<&R::Elem> = a.comps.iter().collect();
        WittVector { comps: self.eval(&self.polys.neg, &vals) }
    }

    pub fn sub(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.add(a, &self.neg(b))
    }

    /// `k * a` by double-and-add.
    pub fn mul_int(&self, a: &WittVector<R::Elem>, k: u64) -> WittVector<R::Elem> {
        let mut acc = self.zero();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    pub fn frobenius(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.check(a);
        WittVector { comps: a.comps.iter().map(|c| self.ring.frobenius(c)).collect() }
    }

    /// `V`: length `n-1` in, length `n` out.
    pub fn verschiebung(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        assert_eq!(a.len() + 1, self.n, "V expects a vector one slot shorter than the context");
        let mut comps = vec![self.ring.zero()];
        comps.extend(a.comps.iter().cloned());
        WittVector { comps }
    }

    /// `V` as an endomorphism of `W_n`: `V(R(a))`.
    pub fn verschiebung_endo(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.check(a);
        let mut comps = vec![self.ring.zero()];
        comps.extend(a.comps[..self.n - 1].iter().cloned());
        WittVector { comps }
    }

    /// `R`: drops the last slot.
    pub fn restriction(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        self.check(a);
        WittVector { comps: a.comps[..self.n - 1].to_vec() }
    }
}

impl WittRingContext<RatFuncRing> {
    /// Whether slot `i` is a section of `O(⌊p^i D⌋)` on the whole line.
    /// Labeled points are not representable and make the check fail.
    pub fn satisfies_divisor(&self, a: &WittVector<RationalFunctionElem>, d: &QDivisor) -> bool {
        let f = &self.ring.0;
        let mut pi = num_rational::BigRational::one();
        let pr = num_rational::BigRational::from_integer(BigInt::from(self.p()));
        for comp in &a.comps {
            let bound = d.scale(&pi).floor_div();
            if !comp.is_zero() {
                for (pt, order) in comp.pole_orders(f) {
                    let point = match pt {
                        Some(l) => PointP1::Rational(l),
                        None => PointP1::Infinity,
                    };
                    let allowed = bound.coeff_int(&point);
                    if (order as i64) > allowed {
                        return false;
                    }
                }
                // zeros forced by negative coefficients
                for (pt, c) in bound.terms() {
                    let c = c.to_integer().to_i64().unwrap();
                    if c < 0 {
                        let ord = match pt {
                            PointP1::Rational(l) => zero_order_at(comp, *l, f),
                            PointP1::Infinity => degree_drop(comp),
                            PointP1::Labeled(_) => return false,
                        };
                        if ord < -c {
                            return false;
                        }
                    }
                }
            }
            pi *= &pr;
        }
        true
    }
}

/// Order of vanishing (negative for poles) at a finite point.
fn zero_order_at(r: &RationalFunctionElem, l: Fq, f: &crate::field::FqContext) -> i64 {
    let pole = r.pole_order_at(l) as i64;
    if pole > 0 {
        return -pole;
    }
    if l.is_zero() {
        return r.numerator().min_exp().unwrap();
    }
    let mut k = 0;
    let mut num = r.numerator().clone();
    while let Some(q) = num.div_linear_exact(l, f) {
        num = q;
        k += 1;
    }
    k
}

/// Order of vanishing at `∞`: `sum(den) - deg(num)`.
fn degree_drop(r: &RationalFunctionElem) -> i64 {
    r.denominator().values().map(|&k| k as i64).sum::<i64>() - r.numerator().max_exp().unwrap()
}

/// The ghost components of an integer Witt vector.
pub fn ghost_vector(p: u32, a: &[BigInt]) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    (0..a.len())
        .map(|i| {
            (0..=i)
                .map(|j| num_traits::pow(pb.clone(), j) * num_traits::pow(a[j].clone(), (p as usize).pow((i - j) as u32)))
                .sum()
        })
        .collect()
}

/// `W_n(F_p) ≅ Z/p^n`: the integer represented by a Witt vector with `F_p` slots.
pub fn witt_to_int(p: u32, slots: &[u32]) -> u64 {
    // sum of V^i [a_i] = p^i [a_i]; Teichmüller lift of a in Z/p^n is the limit of a^(p^k)
    let n = slots.len() as u32;
    let m = (p as u64).pow(n);
    let mut acc = 0u64;
    for (i, &a) in slots.iter().enumerate() {
        let mut t = a as u64 % m;
        for _ in 0..n {
            t = modpow(t, p as u64, m);
        }
        acc = (acc + (p as u64).pow(i as u32) % m * t) % m;
    }
    acc
}

fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    fn sum_poly_mod_p(p: u32, n: usize, i: usize) -> BTreeMap<Vec<u32>, i64> {
        let u = gen_universal_polys(p, n).unwrap();
        u.sum[i].terms.iter().map(|(e, c)| (e.clone(), c.to_i64().unwrap())).collect()
    }

    #[test]
    fn low_slot_formulas() {
        // p=2: S1 = X1 + Y1 + X0 Y0 over F_2
        let s = sum_poly_mod_p(2, 2, 1);
        let mut want = BTreeMap::new();
        want.insert(vec![0, 1, 0, 0], 1);
        want.insert(vec![0, 0, 0, 1], 1);
        want.insert(vec![1, 0, 1, 0], 1);
        assert_eq!(s, want);
        // p=3: S1 = X1 + Y1 - X0^2 Y0 - X0 Y0^2
        let s = sum_poly_mod_p(3, 2, 1);
        assert_eq!(s.get(&vec![2, 0, 1, 0]), Some(&2));
        assert_eq!(s.get(&vec![1, 0, 2, 0]), Some(&2));
        assert_eq!(s.len(), 4);
        for p in [2, 3, 5, 7] {
            let u = gen_universal_polys(p, 1).unwrap();
            assert_eq!(u.sum[0].num_terms(), 2);
            assert_eq!(u.prod[0].terms.keys().next(), Some(&vec![1, 1]));
        }
    }

    #[test]
    fn cost_cap_is_enforced() {
        assert!(matches!(gen_universal_polys(13, 4), Err(Error::Unsupported(_))));
        assert!(matches!(gen_universal_polys(17, 1), Err(Error::Unsupported(_))));
        assert!(gen_universal_polys(2, 4).is_ok());
    }

    #[test]
    fn witt_of_prime_field_is_integers_mod_pn() {
        let f = FqContext::prime(3).unwrap();
        let w = WittRingContext::new(f.clone(), 3).unwrap();
        let all: Vec<_> = (0..27u32).map(|k| [k % 3, (k / 3) % 3, k / 9]).collect();
        for a in &all {
            for b in all.iter().step_by(5) {
                let wa = w.from_comps(a.iter().map(|&x| f.from_int(x as i64)).collect()).unwrap();
                let wb = w.from_comps(b.iter().map(|&x| f.from_int(x as i64)).collect()).unwrap();
                let to = |v: &WittVector<Fq>| witt_to_int(3, &v.comps.iter().map(|c| f.to_index(*c) as u32).collect::<Vec<_>>());
                assert_eq!(to(&w.add(&wa, &wb)), (to(&wa) + to(&wb)) % 27);
                assert_eq!(to(&w.mul(&wa, &wb)), (to(&wa) * to(&wb)) % 27);
                assert_eq!(to(&w.neg(&wa)), (27 - to(&wa)) % 27);
            }
        }
    }

    #[test]
    fn p2_doubling_of_teichmuller() {
        let f = FqContext::prime(2).unwrap();
        let r = RatFuncRing(f.clone());
        let w = WittRingContext::new(r, 2).unwrap();
        let t = RationalFunctionElem::from_laurent(crate::poly::Laurent::t_pow(&f, 1));
        let a = w.teichmuller(t.clone());
        let two = w.add(&a, &a);
        assert!(two.comps[0].is_zero());
        assert_eq!(two.comps[1], t.pow(2, &f));
    }

    #[test]
    fn dump_names_variables() {
        let u = gen_universal_polys(2, 2).unwrap();
        let d = dump_universal_polys(&u);
        assert!(d.contains("S0 = "));
        assert!(d.lines().any(|l| l.starts_with("S1") && l.contains("X0*Y0")));
    }
}
