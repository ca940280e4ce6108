//! Elliptic curves over `F_q`: Hasse invariants and the ordinary/supersingular split.

use crate::dieudonne::abelian_height;
use crate::divisor::PointP1;
use crate::error::{Error, Result};
use crate::field::{Field, Fq, FqContext};
use crate::height::HeightResult;
use crate::poly::Laurent;

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Clone, Debug)]
pub struct WeierstrassCurve {
    field: Field,
    pub a1: Fq,
    pub a3: Fq,
    pub a2: Fq,
    pub a4: Fq,
    pub a6: Fq,
}

impl WeierstrassCurve {
    /// `y² = x³ + a x² + b x + c`, odd characteristic.
    pub fn new(field: &Field, a: Fq, b: Fq, c: Fq) -> Result<Self> {
        if field.p() == 2 {
            return Err(Error::Unsupported("short form y² = f(x) is singular in characteristic 2".into()));
        }
        Self::general(field, Fq::ZERO, Fq::ZERO, a, b, c)
    }

    pub fn general(field: &Field, a1: Fq, a3: Fq, a2: Fq, a4: Fq, a6: Fq) -> Result<Self> {
        let c = WeierstrassCurve { field: field.clone(), a1, a3, a2, a4, a6 };
        if c.discriminant().is_zero() {
            return Err(Error::Invalid("singular curve (discriminant 0)".into()));
        }
        Ok(c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn discriminant(&self) -> Fq {
        let f = &self.field;
        let k = |n: i64| f.from_int(n);
        let (a1, a2, a3, a4, a6) = (self.a1, self.a2, self.a3, self.a4, self.a6);
        let b2 = f.add(f.mul(a1, a1), f.mul(k(4), a2));
        let b4 = f.add(f.mul(k(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(k(4), a6));
        let b8 = {
            let t1 = f.mul(f.mul(a1, a1), a6);
            let t2 = f.mul(k(4), f.mul(a2, a6));
            let t3 = f.mul(a1, f.mul(a3, a4));
            let t4 = f.mul(a2, f.mul(a3, a3));
            let t5 = f.mul(a4, a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        let d1 = f.neg(f.mul(f.mul(b2, b2), b8));
        let d2 = f.mul(k(8), f.pow(b4, 3));
        let d3 = f.mul(k(27), f.mul(b6, b6));
        let d4 = f.mul(k(9), f.mul(b2, f.mul(b4, b6)));
        f.add(f.sub(f.sub(d1, d2), d3), d4)
    }

    /// The right-hand cubic `x³ + a2 x² + a4 x + a6` (odd characteristic, `a1 = a3 = 0`).
    fn cubic(&self) -> Laurent {
        Laurent::poly(vec![self.a6, self.a4, self.a2, self.field.one()])
    }
}

/// Zero iff the curve is supersingular. In odd characteristic this is the coefficient of
/// `x^(p-1)` in `f^((p-1)/2)` after completing the square; in characteristic 2 it is `a1`.
pub fn hasse_invariant(c: &WeierstrassCurve) -> Fq {
    let f = &c.field;
    let p = f.p();
    if p == 2 {
        return c.a1;
    }
    // complete the square: (y + (a1 x + a3)/2)² = f(x) + (a1 x + a3)²/4
    let cubic = if c.a1.is_zero() && c.a3.is_zero() {
        c.cubic()
    } else {
        let quarter = f.inv(f.from_int(4)).unwrap();
        let lin = Laurent::poly(vec![c.a3, c.a1]);
        c.cubic().add(&lin.mul(&lin, f).scale(quarter, f), f)
    };
    cubic.pow(((p - 1) / 2) as u64, f).coeff(p as i64 - 1)
}

pub fn p_rank(c: &WeierstrassCurve) -> u32 {
    u32::from(!hasse_invariant(c).is_zero())
}

pub fn elliptic_height(c: &WeierstrassCurve, e: u32) -> Result<HeightResult> {
    abelian_height(1, p_rank(c), e)
}

/// `y² = x(x-1)(x-λ)`.
pub fn legendre_curve(field: &Field, lambda: Fq) -> Result<WeierstrassCurve> {
    if lambda.is_zero() || lambda == field.one() {
        return Err(Error::Invalid("Legendre parameter must avoid 0 and 1".into()));
    }
    let a = field.neg(field.add(field.one(), lambda));
    WeierstrassCurve::new(field, a, lambda, Fq::ZERO)
}

/// `sum_i C(k,i)^2 λ^i` with `k = (p-1)/2`, coefficients reduced mod `p`.
pub fn legendre_hasse_poly(p: u32) -> Vec<u64> {
    let k = ((p - 1) / 2) as u64;
    let p = p as u64;
    let mut out = Vec::with_capacity(k as usize + 1);
    // C(k, i) < p for k < p, so the recurrence stays exact over Z before reduction
    let mut binom: u128 = 1;
    for i in 0..=k {
        let b = (binom % p as u128) as u64;
        out.push(b * b % p);
        binom = binom * (k - i) as u128 / (i + 1) as u128;
    }
    out
}

pub fn eval_int_poly(coeffs: &[u64], x: Fq, f: &FqContext) -> Fq {
    coeffs.iter().rev().fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), f.from_int(c as i64)))
}

/// Roots in `F_q` by exhaustive evaluation.
pub fn roots_in_field(coeffs: &[u64], f: &FqContext) -> Vec<Fq> {
    f.elements().filter(|&x| eval_int_poly(coeffs, x, f).is_zero()).collect()
}

fn homog(pt: &PointP1, f: &FqContext) -> Result<(Fq, Fq)> {
    match pt {
        PointP1::Rational(a) => Ok((*a, f.one())),
        PointP1::Infinity => Ok((f.one(), Fq::ZERO)),
        PointP1::Labeled(s) => Err(Error::Invalid(format!("point @{s} has no coordinates"))),
    }
}

/// The image of `p4` under the Möbius map sending `p1, p2, p3` to `0, 1, ∞`.
pub fn cross_ratio(pts: [&PointP1; 4], f: &FqContext) -> Result<Fq> {
    let h: Vec<(Fq, Fq)> = pts.iter().map(|p| homog(p, f)).collect::<Result<_>>()?;
    let det = |a: (Fq, Fq), b: (Fq, Fq)| f.sub(f.mul(a.0, b.1), f.mul(a.1, b.0));
    for i in 0..4 {
        for j in i + 1..4 {
            if det(h[i], h[j]).is_zero() {
                return Err(Error::Invalid("cross-ratio needs four distinct points".into()));
            }
        }
    }
    let num = f.mul(det(h[3], h[0]), det(h[1], h[2]));
    let den = f.mul(det(h[3], h[2]), det(h[1], h[0]));
    Ok(f.div(num, den).unwrap())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CyclicCase {
    /// Three points of coefficient `2/3`.
    I,
    /// Coefficients `1/2, 3/4, 3/4`.
    II,
    /// Coefficients `1/2, 2/3, 5/6`.
    III,
}

/// A curve with `j = 0` (cases I, III) or `j = 1728` (case II), used only for its
/// supersingularity. In characteristic 2 the `j = 0` curve is `y² + y = x³`.
pub fn cover_curve_for_case(case: CyclicCase, field: &Field) -> Result<WeierstrassCurve> {
    let p = field.p();
    let excluded = match case {
        CyclicCase::I => p == 3,
        CyclicCase::II => p == 2,
        CyclicCase::III => p == 2 || p == 3,
    };
    if excluded {
        return Err(Error::Unsupported(format!("no tame cyclic cover in characteristic {p} for case {case:?}")));
    }
    let one = field.one();
    match (case, p) {
        (CyclicCase::I, 2) => WeierstrassCurve::general(field, Fq::ZERO, one, Fq::ZERO, Fq::ZERO, Fq::ZERO),
        (CyclicCase::I | CyclicCase::III, _) => WeierstrassCurve::new(field, Fq::ZERO, Fq::ZERO, one),
        (CyclicCase::II, _) => WeierstrassCurve::new(field, Fq::ZERO, one, Fq::ZERO),
    }
}
