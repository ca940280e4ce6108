//! `Ȟ¹(P¹, W_n O(E))` on the cover `U0 = P¹ ∖ ∞`, `U1 = P¹ ∖ 0`, with exact normal forms.
//!
//! Every class has a unique representative `sum_i V^i[r_i]` with `r_i` in the span of the
//! monomials `t^(-j)`, `E'_0 < j < j*`, where `E' = ⌊p^i E⌋` and
//! `j* = -E'_∞ - sum_(λ ≠ 0, ∞) E'_λ`. Arithmetic happens on Witt lifts scaled by
//! `[h^M]`, `h = prod (t - λ)` over the finite nonzero support, so that every slot is a
//! Laurent polynomial.

use std::cell::{Cell, RefCell};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::ToPrimitive;

use super::lift::{GrContext, LiftPoly};
use super::membership::FilteredGroup;
use crate::divisor::{PointP1, QDivisor};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::poly::{series_inv, Laurent};

/// An integral divisor with nonnegative coefficients away from `∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDivisor {
    pub at_zero: i64,
    pub at_infinity: i64,
    /// `(λ, E'_λ)` for finite `λ ≠ 0`.
    pub finite: Vec<(Fq, i64)>,
}

impl LevelDivisor {
    /// `⌊d⌋` for a divisor supported on `F_q ∪ {∞}`.
    pub fn floor_of(d: &QDivisor) -> Result<Self> {
        let mut out = LevelDivisor { at_zero: 0, at_infinity: 0, finite: Vec::new() };
        for (pt, c) in d.terms() {
            let c = c.floor().to_integer().to_i64().ok_or_else(|| Error::Unsupported("coefficient out of range".into()))?;
            match pt {
                PointP1::Infinity => out.at_infinity = c,
                PointP1::Rational(l) if l.is_zero() => out.at_zero = c,
                PointP1::Rational(l) => out.finite.push((*l, c)),
                PointP1::Labeled(s) => return Err(Error::Invalid(format!("point @{s} has no coordinates"))),
            }
        }
        if out.at_zero < 0 || out.finite.iter().any(|&(_, c)| c < 0) {
            return Err(Error::Unsupported("direct verification needs nonnegative coefficients away from ∞".into()));
        }
        out.finite.retain(|&(_, c)| c != 0);
        Ok(out)
    }

    pub fn degree(&self) -> i64 {
        self.at_zero + self.at_infinity + self.finite.iter().map(|&(_, c)| c).sum::<i64>()
    }

    pub fn j_star(&self) -> i64 {
        -self.at_infinity - self.finite.iter().map(|&(_, c)| c).sum::<i64>()
    }

    /// Exponents `j` with `t^(-j)` in the complement basis of `H¹(O(self))`.
    pub fn complement(&self) -> std::ops::Range<i64> {
        let lo = self.at_zero + 1;
        lo..self.j_star().max(lo)
    }

    pub fn h1(&self) -> usize {
        self.complement().count()
    }
}

/// A class with its normal form and cached canonical lift.
#[derive(Clone, Debug)]
pub struct CechElem {
    /// `nf[i][k]`: coefficient of `t^(-j)` with `j = complement(i).start + k`.
    pub nf: Vec<Vec<Fq>>,
    lift: Arc<LiftPoly>,
}

impl PartialEq for CechElem {
    fn eq(&self, other: &Self) -> bool {
        self.nf == other.nf
    }
}
impl Eq for CechElem {}
impl Hash for CechElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nf.hash(state);
    }
}

impl CechElem {
    pub fn leading_level(&self) -> Option<usize> {
        self.nf.iter().position(|r| r.iter().any(|c| !c.is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.leading_level().is_none()
    }
}

struct Slot {
    level: LevelDivisor,
    /// `h^(M p^i)`.
    hpow: Laurent,
    /// `h^(M p^i) / h_E'`.
    hquot: Laurent,
    /// `h_E'(0)`.
    he0: Fq,
    /// Series of `1 / h_E'` at `0`, grown on demand.
    inv_he: RefCell<Vec<Fq>>,
    he: Laurent,
}

/// `Ȟ¹(W_n O(E))` as a filtered group.
pub struct CechWittGroup {
    field: Field,
    gr: GrContext,
    n: u32,
    m_scale: u64,
    h: Laurent,
    hm: Laurent,
    slots: Vec<Slot>,
    /// Series of `h^(-M)` at `0`, grown on demand.
    inv_h: RefCell<Vec<Fq>>,
    window_cap: usize,
    max_span: Cell<usize>,
}

fn linear_power_product(field: &Field, factors: &[(Fq, i64)]) -> Laurent {
    let mut acc = Laurent::constant(field.one());
    for &(l, k) in factors {
        let lin = Laurent::poly(vec![field.neg(l), field.one()]);
        acc = acc.mul(&lin.pow(k as u64, field), field);
    }
    acc
}

impl CechWittGroup {
    /// `margin` raises the scaling exponent `M` beyond the minimum; verdicts must not depend on it.
    pub fn new(field: &Field, e_div: &QDivisor, n: u32, margin: u64, window_cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("Witt length must be positive".into()));
        }
        let p = field.p() as i64;
        let base = LevelDivisor::floor_of(&e_div.ceil_div())?;
        let support: Vec<Fq> = base.finite.iter().map(|&(l, _)| l).collect();
        let m_scale = base.finite.iter().map(|&(_, c)| c as u64).max().unwrap_or(0) + margin;
        let h = linear_power_product(field, &support.iter().map(|&l| (l, 1)).collect::<Vec<_>>());
        let hm = h.pow(m_scale, field);
        let mut slots = Vec::new();
        for i in 0..n {
            let level = LevelDivisor::floor_of(&e_div.scale_int(p.pow(i)))?;
            if level.finite.iter().any(|(l, _)| !support.contains(l)) {
                return Err(Error::Internal("level support outside base support".into()));
            }
            let hpow = hm.frobenius_pow(i, field);
            let he = linear_power_product(field, &level.finite);
            let he_poly = Laurent::poly(he.dense_poly());
            let (hquot, rem) = hpow.div_rem(&he_poly, field);
            if !rem.is_zero() {
                return Err(Error::Internal("scaling does not clear level poles".into()));
            }
            let he0 = he.coeff(0);
            slots.push(Slot { level, hpow, hquot, he0, inv_he: RefCell::new(Vec::new()), he });
        }
        Ok(CechWittGroup {
            field: field.clone(),
            gr: GrContext::new(field, n),
            n,
            m_scale,
            h,
            hm,
            slots,
            inv_h: RefCell::new(Vec::new()),
            window_cap,
            max_span: Cell::new(0),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn scale_exponent(&self) -> u64 {
        self.m_scale
    }

    pub fn level(&self, i: usize) -> &LevelDivisor {
        &self.slots[i].level
    }

    /// Largest lift span seen so far, in stored exponents.
    pub fn max_span(&self) -> usize {
        self.max_span.get()
    }

    fn grown(cell: &RefCell<Vec<Fq>>, base: &Laurent, len: usize, field: &Field) -> Vec<Fq> {
        let mut s = cell.borrow_mut();
        if s.len() < len {
            *s = series_inv(&base.dense_poly(), len.max(2 * s.len()), field);
        }
        s[..len].to_vec()
    }

    /// Series of `h^(-M p^i)` to `len` terms, by spreading the `i = 0` series.
    fn inv_hpow_series(&self, i: u32, len: usize) -> Vec<Fq> {
        let f = &self.field;
        let step = (f.p() as usize).pow(i);
        let base_len = len.div_ceil(step);
        let base = Self::grown(&self.inv_h, &self.hm, base_len, f);
        let mut out = vec![Fq::ZERO; len];
        for (k, c) in base.into_iter().enumerate() {
            if k * step < len {
                out[k * step] = f.frobenius_pow(c, i);
            }
        }
        out
    }

    /// Splits a scaled slot value `ã = h^(M p^i) a` into `(s̃0, s̃1, r̃, r)` with `s0`, `s1`
    /// chart sections and `r` the complement coefficients.
    fn decompose(&self, i: usize, a: &Laurent) -> (Laurent, Laurent, Laurent, Vec<Fq>) {
        let f = &self.field;
        let slot = &self.slots[i];
        let comp = slot.level.complement();
        let mut r = vec![Fq::ZERO; comp.clone().count()];
        let lmax = match a.min_exp() {
            Some(lo) if lo < 0 => -lo,
            _ => return (a.clone(), Laurent::zero(), Laurent::zero(), r),
        };
        let l = lmax as usize;
        // principal part of a at 0: c[k] = coefficient of t^(-k), k = 1..=l
        let inv = self.inv_hpow_series(i as u32, l);
        let mut c = vec![Fq::ZERO; l + 1];
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            let mut acc = Fq::ZERO;
            for (j, &s) in inv.iter().enumerate().take(l - k + 1) {
                if !s.is_zero() {
                    acc = f.add(acc, f.mul(a.coeff(-(k as i64) - j as i64), s));
                }
            }
            *ck = acc;
        }
        // remove t^(-j)/h_E' for j >= max(j*, E'_0 + 1), top down
        let bottom = slot.level.j_star().max(slot.level.at_zero + 1).max(1);
        let mut d = Vec::new();
        if bottom <= lmax {
            let inv_he = Self::grown(&slot.inv_he, &slot.he, l, f);
            let s0 = slot.he0;
            for j in (bottom..=lmax).rev() {
                let cj = c[j as usize];
                if cj.is_zero() {
                    continue;
                }
                let dj = f.mul(cj, s0);
                d.push((j, dj));
                for (k, &s) in inv_he.iter().enumerate().take(j as usize) {
                    if !s.is_zero() {
                        let idx = j as usize - k;
                        c[idx] = f.sub(c[idx], f.mul(dj, s));
                    }
                }
            }
        }
        let mut rpoly = Laurent::zero();
        for (k, j) in comp.enumerate() {
            if j >= 1 && j <= lmax {
                r[k] = c[j as usize];
                if !r[k].is_zero() {
                    rpoly = rpoly.add(&Laurent::monomial(r[k], -j), f);
                }
            }
        }
        let mut dpoly = Laurent::zero();
        if let (Some(&(top, _)), Some(&(low, _))) = (d.first(), d.last()) {
            let mut dense = vec![Fq::ZERO; (top - low + 1) as usize];
            for &(j, dj) in &d {
                dense[(top - j) as usize] = dj;
            }
            dpoly = Laurent::from_coeffs(-top, dense);
        }
        let s1 = slot.hquot.mul(&dpoly, f);
        let rt = slot.hpow.mul(&rpoly, f);
        let s0 = a.sub(&s1, f).sub(&rt, f);
        (s0, s1, rt, r)
    }

    fn check_span(&self, z: &LiftPoly) -> Result<()> {
        let s = self.gr.span(z);
        if s > self.max_span.get() {
            self.max_span.set(s);
        }
        if s > self.window_cap {
            return Err(Error::WindowOverflow(format!("lift span {s} exceeds cap {}; raise QFS_WINDOW_CAP", self.window_cap)));
        }
        Ok(())
    }

    /// Reduces `p^start · z` to normal form; `z` has precision `n - start`.
    fn reduce_from(&self, start: usize, mut cur: LiftPoly) -> Result<CechElem> {
        let n = self.n as usize;
        let f = &self.field;
        let mut nf: Vec<Vec<Fq>> = self.slots.iter().map(|s| vec![Fq::ZERO; s.level.h1()]).collect();
        let mut canon = self.gr.zero(self.n);
        for i in start..n {
            if self.gr.is_zero(&cur) {
                break;
            }
            self.check_span(&cur)?;
            let a = self
                .gr
                .extract(f, &cur, i as u32)
                .ok_or_else(|| Error::Internal(format!("lift at level {i} is not a Witt vector of Laurent polynomials")))?;
            if !a.is_zero() {
                let (s0, s1, rt, r) = self.decompose(i, &a);
                // chart parts are removed separately: [s0 + s1] - [s0] - [s1] is not a coboundary
                for s in [&s0, &s1] {
                    if !s.is_zero() {
                        let ts = self.gr.teichmuller(f, s, i as u32);
                        cur = self.gr.sub(&cur, &ts);
                    }
                }
                if !rt.is_zero() {
                    let tr = self.gr.teichmuller(f, &rt, i as u32);
                    cur = self.gr.sub(&cur, &tr);
                    canon = self.gr.add(&canon, &self.gr.mul_p_pow(&tr, i as u32));
                }
                nf[i] = r;
            }
            if i + 1 < n {
                cur = self.gr.div_p(&cur).ok_or_else(|| Error::Internal(format!("residue at level {i} not divisible by p")))?;
            } else if !self.gr.is_zero(&cur) {
                return Err(Error::Internal("nonzero residue after the last level".into()));
            }
        }
        Ok(CechElem { nf, lift: Arc::new(canon) })
    }

    /// The class of a cocycle given by its scaled lift `[h^M]·w` at full precision.
    pub fn reduce(&self, z: &LiftPoly) -> Result<CechElem> {
        self.reduce_from(0, z.clone())
    }

    /// The class of `V^i[x]` for a Laurent polynomial `x` in `t`.
    pub fn v_teichmuller(&self, i: usize, x: &Laurent) -> Result<CechElem> {
        let f = &self.field;
        if i >= self.n as usize || x.is_zero() {
            return Ok(self.zero());
        }
        let a = self.slots[i].hpow.mul(x, f);
        let t = self.gr.teichmuller(f, &a, i as u32);
        self.reduce_from(i, t)
    }

    /// Canonical lift of an element, `sum p^i T_i(h^(M p^i) r_i)`.
    pub fn lift(&self, g: &CechElem) -> LiftPoly {
        (*g.lift).clone()
    }

    /// The complement monomials of level `i` as Laurent polynomials with coefficient 1.
    pub fn level_monomials(&self, i: usize) -> Vec<Laurent> {
        self.slots[i].level.complement().map(|j| Laurent::t_pow(&self.field, -j)).collect()
    }

    /// Every `V^i[c t^(-j)]` with `c` in the `F_p`-basis of `F_q`: a generating set of the group.
    pub fn basis_elements(&self) -> Result<Vec<CechElem>> {
        let f = &self.field;
        let mut out = Vec::new();
        for i in 0..self.n as usize {
            for mono in self.level_monomials(i) {
                for b in f.basis() {
                    out.push(self.v_teichmuller(i, &mono.scale(b, f))?);
                }
            }
        }
        Ok(out)
    }

    #[doc(hidden)]
    pub fn scaling_poly(&self) -> &Laurent {
        &self.h
    }
}

impl FilteredGroup for CechWittGroup {
    type Elem = CechElem;

    fn p(&self) -> u32 {
        self.field.p()
    }

    fn depth(&self) -> usize {
        self.n as usize
    }

    fn zero(&self) -> CechElem {
        CechElem { nf: self.slots.iter().map(|s| vec![Fq::ZERO; s.level.h1()]).collect(), lift: Arc::new(self.gr.zero(self.n)) }
    }

    fn is_zero(&self, g: &CechElem) -> bool {
        g.is_zero()
    }

    fn level_dim(&self, i: usize) -> usize {
        self.slots[i].level.h1() * self.field.degree()
    }

    fn coords(&self, g: &CechElem, i: usize) -> Vec<u32> {
        let m = self.field.degree();
        g.nf[i].iter().flat_map(|c| c.coords()[..m].iter().map(|&x| x as u32).collect::<Vec<_>>()).collect()
    }

    fn leading_level(&self, g: &CechElem) -> Option<usize> {
        g.leading_level()
    }

    fn combine(&self, terms: &[(i64, &CechElem)]) -> Result<CechElem> {
        let p = self.field.p() as i64;
        let n = self.n as usize;
        let q = p.pow(self.n);
        let mut lifted: Vec<(i64, &LiftPoly)> = Vec::new();
        let mut start = n;
        for &(c, g) in terms {
            let c = c.rem_euclid(q);
            let Some(mut lead) = g.leading_level() else { continue };
            if c == 0 {
                continue;
            }
            let mut k = c;
            while k % p == 0 {
                k /= p;
                lead += 1;
            }
            if lead < n {
                start = start.min(lead);
                lifted.push((c, &*g.lift));
            }
        }
        if lifted.is_empty() {
            return Ok(self.zero());
        }
        let mut z = self.gr.lincomb(&lifted);
        for _ in 0..start {
            z = self.gr.div_p(&z).ok_or_else(|| Error::Internal("combination not divisible by its filtration level".into()))?;
        }
        self.reduce_from(start, z)
    }
}
