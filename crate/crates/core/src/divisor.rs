//! `Q`-divisors on the projective line and the arithmetic built on them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Fq, FqContext};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PointP1 {
    Labeled(String),
    Rational(Fq),
    Infinity,
}

impl PointP1 {
    pub fn format(&self, f: &FqContext) -> String {
        match self {
            PointP1::Labeled(s) => format!("@{s}"),
            PointP1::Rational(a) => f.format(*a),
            PointP1::Infinity => "inf".into(),
        }
    }

    pub fn parse(s: &str, f: &FqContext) -> Result<PointP1> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            Ok(PointP1::Infinity)
        } else if let Some(label) = s.strip_prefix('@') {
            if label.is_empty() || !label.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Parse(format!("bad point label {s:?}")));
            }
            Ok(PointP1::Labeled(label.to_string()))
        } else {
            Ok(PointP1::Rational(f.parse(s)?))
        }
    }
}

/// A finite `Q`-linear combination of points; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QDivisor {
    coeffs: BTreeMap<PointP1, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl QDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (PointP1, BigRational)>>(terms: I) -> Self {
        let mut d = Self::zero();
        for (pt, c) in terms {
            d.add_term(pt, c);
        }
        d
    }

    /// The canonical divisor `-2·∞`.
    pub fn canonical() -> Self {
        Self::from_terms([(PointP1::Infinity, rat(-2, 1))])
    }

    pub fn add_term(&mut self, pt: PointP1, c: BigRational) {
        let e = self.coeffs.entry(pt.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&pt);
        }
    }

    pub fn coeff(&self, pt: &PointP1) -> BigRational {
        self.coeffs.get(pt).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `⌊coeff⌋` at a point.
    pub fn coeff_int(&self, pt: &PointP1) -> i64 {
        self.coeff(pt).floor().to_integer().to_i64().expect("coefficient out of range")
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PointP1, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<PointP1> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> BigRational {
        self.coeffs.values().fold(BigRational::zero(), |a, c| a + c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| !c.is_negative())
    }

    fn map(&self, g: impl Fn(&BigRational) -> BigRational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(p, c)| (p.clone(), g(c))))
    }

    pub fn floor_div(&self) -> Self {
        self.map(|c| c.floor())
    }

    pub fn ceil_div(&self) -> Self {
        self.map(|c| c.ceil())
    }

    pub fn frac_div(&self) -> Self {
        self.map(|c| c - c.floor())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.map(|c| c * r)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&rat(k, 1))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_int(-1))
    }

    /// Coefficientwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        other.sub(self).is_effective()
    }

    /// The part of `self` supported on `pts`.
    pub fn restrict(&self, pts: &[PointP1]) -> Self {
        Self::from_terms(self.coeffs.iter().filter(|(p, _)| pts.contains(p)).map(|(p, c)| (p.clone(), c.clone())))
    }

    pub fn degree_int(&self) -> i64 {
        let d = self.degree();
        assert!(d.is_integer(), "degree of a non-integral divisor");
        d.to_integer().to_i64().unwrap()
    }

    /// `lcm` of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::one(), |a, c| a.lcm(c.denom()))
    }

    pub fn format(&self, f: &FqContext) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(|(p, c)| format!("{c}:{}", p.format(f))).collect::<Vec<_>>().join(",")
    }

    /// Parses `coeff:point,...` with coefficients like `2/3`, `-1`, `1/2`.
    pub fn parse(s: &str, f: &FqContext) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Self::zero());
        }
        let mut d = Self::zero();
        let mut seen = Vec::new();
        for term in s.split(',') {
            let (c, p) = term.split_once(':').ok_or_else(|| Error::Parse(format!("expected coeff:point, got {term:?}")))?;
            let c = parse_rational(c)?;
            let p = PointP1::parse(p, f)?;
            if seen.contains(&p) {
                return Err(Error::Parse(format!("point {} repeated in divisor literal", p.format(f))));
            }
            seen.push(p.clone());
            d.add_term(p, c);
        }
        Ok(d)
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| match p {
                PointP1::Labeled(s) => format!("{c}:@{s}"),
                PointP1::Rational(a) => format!("{c}:{:?}", a.coords()),
                PointP1::Infinity => format!("{c}:inf"),
            })
            .collect();
        write!(fm, "{}", parts.join(","))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn h0_dim(d: i64) -> u64 {
    (d + 1).max(0) as u64
}

pub fn h1_dim(d: i64) -> u64 {
    (-d - 1).max(0) as u64
}

/// Multiplicative order of `p` modulo `m` (`m` coprime to `p`).
pub fn mult_order(p: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = p % m;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * p as u128 % m as u128) as u64;
        k += 1;
    }
    k
}

/// Least `s >= 1` with `(p^s - 1)·D` integral.
pub fn cartier_power_exists(d: &QDivisor, p: u32) -> Option<u32> {
    let l = d.denominator_lcm();
    if (&l % BigInt::from(p)).is_zero() {
        return None;
    }
    Some(mult_order(p as u64, l.to_u64()?) as u32)
}

fn floor_scaled_degree(d: &QDivisor, s: &BigInt) -> i64 {
    let sr = BigRational::from_integer(s.clone());
    d.coeffs.values().map(|c| (c * &sr).floor().to_integer().to_i64().unwrap()).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingRow {
    pub r: u32,
    /// `deg ⌊p^r (K + Δ)⌋`.
    pub degree: i64,
    pub h1: u64,
}

pub fn vanishing_table(delta: &QDivisor, p: u32, r_max: u32) -> Vec<VanishingRow> {
    (1..=r_max)
        .map(|r| {
            let pr = num_traits::pow(BigInt::from(p), r as usize);
            let degree = -2 * pr.to_i64().unwrap() + floor_scaled_degree(delta, &pr);
            VanishingRow { r, degree, h1: h1_dim(degree) }
        })
        .collect()
}

/// `(preperiod, period)` of `f ↦ {p^f D}`.
pub fn frac_periodicity(d: &QDivisor, p: u32) -> (u32, u32) {
    let pb = BigInt::from(p);
    let mut pre = 0;
    let mut period = 1u64;
    for c in d.coeffs.values() {
        let mut den = c.denom().clone();
        let mut nu = 0;
        while (&den % &pb).is_zero() {
            den /= &pb;
            nu += 1;
        }
        pre = pre.max(nu);
        period = period.lcm(&mult_order(p as u64, den.to_u64().expect("denominator too large")));
    }
    (pre, period as u32)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaConditions {
    /// The exponents `f` checked, starting at `e`.
    pub fs: Vec<u32>,
    pub cond2: Vec<bool>,
    pub cond3: Vec<bool>,
    pub preperiod: u32,
    pub period: u32,
}

impl LemmaConditions {
    pub fn all_hold(&self) -> bool {
        self.cond2.iter().chain(&self.cond3).all(|&b| b)
    }
}

/// Condition (3) on `P¹`: `⌊p·{p^f Δ}⌋` is zero or a single reduced point.
fn frac_cond(delta: &QDivisor, p: u32, f: u32) -> bool {
    let pf = BigRational::from_integer(num_traits::pow(BigInt::from(p), f as usize));
    let e = delta.scale(&pf).frac_div().scale_int(p as i64).floor_div();
    let big: Vec<_> = e.coeffs.values().filter(|c| !c.is_zero()).collect();
    big.len() <= 1 && big.iter().all(|c| **c == BigRational::one())
}

/// Evaluates the two inductive conditions for `f = e, e+1, ..` through one full period
/// past the preperiod of `{p^f Δ}`.
///
/// Condition (2) is `h0(⌊p^f (K+Δ)⌋) = 0`. When `deg(K+Δ) <= 0` its degree is
/// `p^f deg(K+Δ) - deg{p^f Δ}`, so the checked range certifies all `f >= e`.
pub fn lemma_e_step_conditions(delta: &QDivisor, p: u32, e: u32) -> LemmaConditions {
    let (pre, period) = frac_periodicity(delta, p);
    let last = e.max(pre) + period;
    let fs: Vec<u32> = (e..=last).collect();
    let cond2 = fs
        .iter()
        .map(|&f| {
            let pf = num_traits::pow(BigInt::from(p), f as usize);
            let deg = -2 * pf.to_i64().unwrap() + floor_scaled_degree(delta, &pf);
            h0_dim(deg) == 0
        })
        .collect();
    let cond3 = fs.iter().map(|&f| frac_cond(delta, p, f)).collect();
    LemmaConditions { fs, cond2, cond3, preperiod: pre, period }
}

/// Certificate that `(P¹, Δ + εE)` is quasi-`F^e`-split for every `e >= ν`.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub nu: u32,
    pub delta_prime: QDivisor,
    pub e1: QDivisor,
    pub e2: QDivisor,
    pub mus: Vec<u32>,
    pub e2_bar: QDivisor,
    pub epsilon: BigRational,
    /// `Δ' + Ē₂`, the pair whose base case and induction steps are checked.
    pub target: QDivisor,
    /// `(n, e)` pairs for the base case, tried in order; `e = ν`.
    pub base_checks: Vec<(u32, u32)>,
    pub conditions: LemmaConditions,
}

fn p_adic_valuation(mut x: BigInt, p: u32) -> u32 {
    let pb = BigInt::from(p);
    let mut v = 0;
    while !x.is_zero() && (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    v
}

/// Builds the perturbation schedule for a log Fano pair `(P¹, Δ)` whose coefficient
/// denominators are powers of `p`, and an effective `E`.
pub fn fano_perturbation_schedule(delta: &QDivisor, e: &QDivisor, p: u32, n_max: u32) -> Result<Schedule> {
    if !delta.is_effective() || !delta.floor_div().is_zero() {
        return Err(Error::Invalid("need an effective boundary with ⌊Δ⌋ = 0".into()));
    }
    if delta.degree() >= rat(2, 1) {
        return Err(Error::Invalid("not log Fano: deg(K+Δ) >= 0".into()));
    }
    if !e.is_effective() {
        return Err(Error::Invalid("E must be effective".into()));
    }
    let mut nu = 1;
    for c in delta.coeffs.values() {
        let den = c.denom().clone();
        let v = p_adic_valuation(den.clone(), p);
        if num_traits::pow(BigInt::from(p), v as usize) != den {
            return Err(Error::Invalid("coefficients of Δ must have p-power denominators".into()));
        }
        nu = nu.max(v);
    }
    let supp = delta.support();
    let e1 = e.restrict(&supp);
    let e2 = e.sub(&e1);
    let q_pts = e2.support();
    loop {
        let pnu = num_traits::pow(BigInt::from(p), nu as usize);
        let pnu_r = BigRational::from_integer(pnu.clone());
        let delta_prime = QDivisor::from_terms(
            delta.coeffs.iter().map(|(pt, c)| (pt.clone(), ((c * &pnu_r).ceil() + BigRational::one()) / &pnu_r)),
        );
        let mus: Vec<u32> = (1..=q_pts.len() as u32).map(|j| nu + j).collect();
        let e2_bar = QDivisor::from_terms(
            q_pts.iter().zip(&mus).map(|(q, &mu)| (q.clone(), BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), mu as usize)))),
        );
        let target = delta_prime.add(&e2_bar);
        if !target.floor_div().is_zero() || target.degree() >= rat(2, 1) {
            nu += 1;
            if nu > 64 {
                return Err(Error::Internal("perturbation exponent did not stabilize".into()));
            }
            continue;
        }
        let mut epsilon: Option<BigRational> = None;
        let mut take = |x: BigRational| {
            epsilon = Some(match epsilon.take() {
                Some(y) if y < x => y,
                _ => x,
            })
        };
        for (pt, c) in e1.terms() {
            take((delta_prime.coeff(pt) - delta.coeff(pt)) / c);
        }
        for (q, &mu) in q_pts.iter().zip(&mus) {
            take(BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), mu as usize)) / e2.coeff(q));
        }
        let epsilon = epsilon.unwrap_or_else(BigRational::one);
        let conditions = lemma_e_step_conditions(&target, p, nu);
        return Ok(Schedule {
            nu,
            delta_prime,
            e1,
            e2,
            mus,
            e2_bar,
            epsilon,
            target,
            base_checks: (1..=n_max).map(|n| (n, nu)).collect(),
            conditions,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;

    fn lbl(s: &str) -> PointP1 {
        PointP1::Labeled(s.into())
    }

    #[test]
    fn rounding_degrees() {
        let d = QDivisor::from_terms([(lbl("a"), rat(1, 2)), (lbl("b"), rat(2, 3)), (lbl("c"), rat(5, 6))]);
        assert_eq!(d.scale_int(4).floor_div().degree_int(), 7);
        assert_eq!(d.scale_int(3).floor_div().degree_int(), 5);
        assert!(d.scale_int(6).frac_div().is_zero());
        assert_eq!(d.floor_div().degree() + d.frac_div().degree(), d.degree());
    }

    #[test]
    fn riemann_roch_small() {
        assert_eq!((h0_dim(-1), h1_dim(-1)), (0, 0));
        assert_eq!(h1_dim(-2), 1);
        for d in -20..20 {
            assert_eq!(h0_dim(d) as i64 - h1_dim(d) as i64, d + 1);
        }
    }

    #[test]
    fn cartier_exponents() {
        let d = QDivisor::from_terms([(lbl("a"), rat(2, 3)), (lbl("b"), rat(2, 3)), (lbl("c"), rat(2, 3))]);
        assert_eq!(cartier_power_exists(&d, 7), Some(1));
        assert_eq!(cartier_power_exists(&d, 3), None);
        assert_eq!(cartier_power_exists(&d, 5), Some(2));
        assert_eq!(cartier_power_exists(&QDivisor::zero(), 5), Some(1));
    }

    #[test]
    fn literal_roundtrip() {
        let f = FqContext::new(5, 2).unwrap();
        let d = QDivisor::parse("2/3:0, 2/3:1,2/3:inf,1/2:@P", &f).unwrap();
        assert_eq!(d.degree(), rat(5, 2));
        assert_eq!(QDivisor::parse(&d.format(&f), &f).unwrap(), d);
        assert!(QDivisor::parse("1/2:0,1/2:0", &f).is_err());
        assert!(QDivisor::parse("1/0:0", &f).is_err());
        assert!(QDivisor::parse("x", &f).is_err());
    }

    #[test]
    fn schedule_for_two_halves() {
        let d = QDivisor::from_terms([(lbl("a"), rat(1, 2)), (lbl("b"), rat(1, 2))]);
        let e = QDivisor::from_terms([(lbl("q"), rat(1, 1))]);
        let s = fano_perturbation_schedule(&d, &e, 2, 3).unwrap();
        assert!(s.mus[0] > s.nu);
        assert!(s.conditions.all_hold());
        assert!(d.add(&e.scale(&s.epsilon)).le(&s.target));
        assert!(fano_perturbation_schedule(&QDivisor::from_terms([(lbl("a"), rat(1, 3))]), &e, 2, 3).is_err());
    }
}
