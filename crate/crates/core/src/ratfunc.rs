//! Rational functions in `t` over `F_q` whose poles lie in `F_q ∪ {∞}`.

use std::collections::BTreeMap;

use crate::field::{Fq, FqContext};
use crate::poly::{series_inv, series_mul, Laurent};

/// `numerator / prod_{λ} (t - λ)^{k_λ}` with every `λ != 0` and no cancellable factor.
/// Poles at `0` and `∞` live in the Laurent numerator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RationalFunctionElem {
    num: Laurent,
    den: BTreeMap<Fq, u32>,
}

/// Partial-fraction normal form: `laurent + sum_λ sum_j principal[λ][j-1] (t - λ)^-j`.
/// Poles are ordered by field index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialFractions {
    pub laurent: Laurent,
    pub poles: Vec<(Fq, Vec<Fq>)>,
}

impl PartialFractions {
    /// `(min, max)` t-exponent of the Laurent part.
    pub fn window(&self) -> Option<(i64, i64)> {
        Some((self.laurent.min_exp()?, self.laurent.max_exp()?))
    }
}

impl RationalFunctionElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_laurent(num: Laurent) -> Self {
        RationalFunctionElem { num, den: BTreeMap::new() }
    }

    pub fn constant(c: Fq) -> Self {
        Self::from_laurent(Laurent::constant(c))
    }

    /// `(t - λ)^(-k)` for `λ != 0`; `t^(-k)` for `λ = 0`.
    pub fn pole(lambda: Fq, k: u32, f: &FqContext) -> Self {
        if lambda.is_zero() {
            return Self::from_laurent(Laurent::t_pow(f, -(k as i64)));
        }
        let mut den = BTreeMap::new();
        if k > 0 {
            den.insert(lambda, k);
        }
        RationalFunctionElem { num: Laurent::constant(f.one()), den }
    }

    pub fn new(num: Laurent, den: BTreeMap<Fq, u32>, f: &FqContext) -> Self {
        assert!(!den.contains_key(&Fq::ZERO), "use negative t-exponents for poles at 0");
        let mut r = RationalFunctionElem { num, den };
        r.canonicalize(f);
        r
    }

    fn canonicalize(&mut self, f: &FqContext) {
        self.den.retain(|_, k| *k > 0);
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (lambda, k) in self.den.iter_mut() {
            while *k > 0 {
                match self.num.div_linear_exact(*lambda, f) {
                    Some(q) => {
                        self.num = q;
                        *k -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|_, k| *k > 0);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Fq, u32> {
        &self.den
    }

    /// Returns the Laurent polynomial if there are no poles outside `{0, ∞}`.
    pub fn as_laurent(&self) -> Option<&Laurent> {
        self.den.is_empty().then_some(&self.num)
    }

    fn den_poly(&self, f: &FqContext) -> Laurent {
        let mut h = Laurent::constant(f.one());
        for (&lambda, &k) in &self.den {
            let lin = Laurent::poly(vec![f.neg(lambda), f.one()]);
            h = h.mul(&lin.pow(k as u64, f), f);
        }
        h
    }

    fn rescale(&self, target: &BTreeMap<Fq, u32>, f: &FqContext) -> Laurent {
        let mut n = self.num.clone();
        for (&lambda, &k) in target {
            let extra = k - self.den.get(&lambda).copied().unwrap_or(0);
            if extra > 0 {
                let lin = Laurent::poly(vec![f.neg(lambda), f.one()]);
                n = n.mul(&lin.pow(extra as u64, f), f);
            }
        }
        n
    }

    pub fn add(&self, other: &Self, f: &FqContext) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (&l, &k) in &other.den {
            let e = den.entry(l).or_insert(0);
            *e = (*e).max(k);
        }
        let num = self.rescale(&den, f).add(&other.rescale(&den, f), f);
        Self::new(num, den, f)
    }

    pub fn neg(&self, f: &FqContext) -> Self {
        RationalFunctionElem { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self, f: &FqContext) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn mul(&self, other: &Self, f: &FqContext) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (&l, &k) in &other.den {
            *den.entry(l).or_insert(0) += k;
        }
        Self::new(self.num.mul(&other.num, f), den, f)
    }

    pub fn scale(&self, c: Fq, f: &FqContext) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunctionElem { num: self.num.scale(c, f), den: self.den.clone() }
    }

    pub fn pow(&self, e: u64, f: &FqContext) -> Self {
        if self.is_zero() {
            return if e == 0 { Self::constant(f.one()) } else { Self::zero() };
        }
        let den = self.den.iter().map(|(&l, &k)| (l, k * e as u32)).collect();
        RationalFunctionElem { num: self.num.pow(e, f), den }
    }

    /// The `p^k`-th power.
    pub fn frobenius_pow(&self, k: u32, f: &FqContext) -> Self {
        let pk = f.p().pow(k);
        let num = self.num.frobenius_pow(k, f);
        let den = self.den.iter().map(|(&l, &e)| (l, e * pk)).collect();
        RationalFunctionElem { num, den }
    }

    /// Order of the pole at a finite point (`λ = 0` included); zero if regular.
    pub fn pole_order_at(&self, lambda: Fq) -> u32 {
        if self.is_zero() {
            return 0;
        }
        if lambda.is_zero() {
            (-self.num.min_exp().unwrap()).max(0) as u32
        } else {
            self.den.get(&lambda).copied().unwrap_or(0)
        }
    }

    /// Order of the pole at `∞`.
    pub fn pole_order_at_infinity(&self) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let d = self.num.max_exp().unwrap() - self.den.values().map(|&k| k as i64).sum::<i64>();
        d.max(0) as u32
    }

    /// All poles, `None` standing for `∞`, in a fixed order (0, then by field index, then ∞).
    pub fn pole_orders(&self, f: &FqContext) -> Vec<(Option<Fq>, u32)> {
        let mut out = Vec::new();
        let z = self.pole_order_at(Fq::ZERO);
        if z > 0 {
            out.push((Some(Fq::ZERO), z));
        }
        let mut finite: Vec<_> = self.den.iter().map(|(&l, &k)| (l, k)).collect();
        finite.sort_by_key(|(l, _)| f.to_index(*l));
        out.extend(finite.into_iter().map(|(l, k)| (Some(l), k)));
        let inf = self.pole_order_at_infinity();
        if inf > 0 {
            out.push((None, inf));
        }
        out
    }

    pub fn partial_fractions(&self, f: &FqContext) -> PartialFractions {
        if self.is_zero() {
            return PartialFractions { laurent: Laurent::zero(), poles: vec![] };
        }
        let h = self.den_poly(f);
        // polynomial part: quotient of the nonnegative part of the numerator by h
        let top = self.num.max_exp().unwrap();
        let pos = if top >= 0 { self.num.window(0, top) } else { Laurent::zero() };
        let (poly_part, _) = pos.div_rem(&h, f);
        // principal part at 0
        let mut laurent = poly_part;
        let lo = self.num.min_exp().unwrap();
        if lo < 0 {
            let len = (-lo) as usize;
            let hinv = series_inv(&h.dense_poly(), len, f);
            let mut pp = vec![Fq::ZERO; len];
            // coefficient of t^(lo + k) for k < len
            for k in 0..len {
                let mut acc = Fq::ZERO;
                for j in 0..=k {
                    acc = f.add(acc, f.mul(self.num.coeff(lo + (k - j) as i64), hinv[j]));
                }
                pp[k] = acc;
            }
            laurent = laurent.add(&Laurent::from_coeffs(lo, pp), f);
        }
        let mut poles = Vec::new();
        for (&lambda, &k) in &self.den {
            let len = k as usize;
            let mut rest = Laurent::constant(f.one());
            for (&mu, &km) in &self.den {
                if mu != lambda {
                    let lin = Laurent::poly(vec![f.neg(mu), f.one()]);
                    rest = rest.mul(&lin.pow(km as u64, f), f);
                }
            }
            let g = series_mul(&self.num.taylor(lambda, len, f), &series_inv(&rest.taylor(lambda, len, f), len, f), len, f);
            // coefficient of (t-λ)^(-j) is g[k - j]
            let principal: Vec<Fq> = (1..=len).map(|j| g[len - j]).collect();
            poles.push((lambda, principal));
        }
        poles.sort_by_key(|(l, _)| f.to_index(*l));
        PartialFractions { laurent, poles }
    }

    pub fn from_partial_fractions(pf: &PartialFractions, f: &FqContext) -> Self {
        let mut acc = Self::from_laurent(pf.laurent.clone());
        for (lambda, principal) in &pf.poles {
            for (j, &c) in principal.iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&Self::pole(*lambda, j as u32 + 1, f).scale(c, f), f);
                }
            }
        }
        acc
    }

    pub fn eval(&self, x: Fq, f: &FqContext) -> Option<Fq> {
        let n = self.num.eval(x, f)?;
        let d = self.den_poly(f).eval(x, f)?;
        f.div(n, d)
    }
}
