//! Log Calabi–Yau pairs `(P¹, Δ)` with standard coefficients.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::divisor::{cartier_power_exists, frac_periodicity, rat, vanishing_table, PointP1, QDivisor};
use crate::elliptic::{cover_curve_for_case, cross_ratio, elliptic_height, eval_int_poly, legendre_curve, legendre_hasse_poly, CyclicCase};
use crate::error::{Error, Result};
use crate::field::{Field, FqContext};
use crate::height::HeightResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogCYClass {
    CaseI,
    CaseII,
    CaseIII,
    /// The four points, in divisor order.
    CaseIV([PointP1; 4]),
    CaseV,
    CaseVI,
    NotLogCY(String),
}

impl LogCYClass {
    pub fn name(&self) -> &'static str {
        match self {
            LogCYClass::CaseI => "i",
            LogCYClass::CaseII => "ii",
            LogCYClass::CaseIII => "iii",
            LogCYClass::CaseIV(_) => "iv",
            LogCYClass::CaseV => "v",
            LogCYClass::CaseVI => "vi",
            LogCYClass::NotLogCY(_) => "none",
        }
    }

    fn cyclic(&self) -> Option<CyclicCase> {
        match self {
            LogCYClass::CaseI => Some(CyclicCase::I),
            LogCYClass::CaseII => Some(CyclicCase::II),
            LogCYClass::CaseIII => Some(CyclicCase::III),
            _ => None,
        }
    }
}

fn is_standard(c: &BigRational) -> bool {
    if c.is_one() {
        return true;
    }
    if *c <= BigRational::zero() || *c > BigRational::one() {
        return false;
    }
    (BigRational::one() / (BigRational::one() - c)).is_integer()
}

pub fn classify(delta: &QDivisor) -> LogCYClass {
    let mut cs: Vec<BigRational> = delta.terms().map(|(_, c)| c.clone()).collect();
    if let Some(c) = cs.iter().find(|c| !is_standard(c)) {
        return LogCYClass::NotLogCY(format!("coefficient {c} is not standard"));
    }
    if delta.degree() != rat(2, 1) {
        return LogCYClass::NotLogCY(format!("degree {} is not 2", delta.degree()));
    }
    cs.sort();
    let key: Vec<BigRational> = cs;
    let is = |v: &[(i64, i64)]| key == v.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>();
    if is(&[(2, 3), (2, 3), (2, 3)]) {
        LogCYClass::CaseI
    } else if is(&[(1, 2), (3, 4), (3, 4)]) {
        LogCYClass::CaseII
    } else if is(&[(1, 2), (2, 3), (5, 6)]) {
        LogCYClass::CaseIII
    } else if is(&[(1, 2), (1, 2), (1, 2), (1, 2)]) {
        let pts = delta.support();
        LogCYClass::CaseIV([pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()])
    } else if is(&[(1, 2), (1, 2), (1, 1)]) {
        LogCYClass::CaseV
    } else if is(&[(1, 1), (1, 1)]) {
        LogCYClass::CaseVI
    } else {
        LogCYClass::NotLogCY("coefficient pattern outside the classification".into())
    }
}

fn needs_height(class: &LogCYClass) -> Result<()> {
    match class {
        LogCYClass::CaseV | LogCYClass::CaseVI => Err(Error::Unsupported(format!("case {} has ⌊Δ⌋ != 0; no height is assigned", class.name()))),
        LogCYClass::NotLogCY(r) => Err(Error::Invalid(format!("not a log Calabi-Yau pair: {r}"))),
        _ => Ok(()),
    }
}

fn legendre_lambda(pts: &[PointP1; 4], field: Option<&Field>) -> Result<(Field, crate::field::Fq)> {
    let f = field.ok_or_else(|| Error::Invalid("case iv depends on Supp Δ: point coordinates required".into()))?;
    let lambda = cross_ratio([&pts[0], &pts[1], &pts[2], &pts[3]], f)
        .map_err(|_| Error::Invalid("case iv depends on Supp Δ: four distinct points with coordinates required".into()))?;
    Ok((f.clone(), lambda))
}

/// Heights from the per-case congruence tables.
pub fn height_from_table(class: &LogCYClass, p: u32, e: u32, field: Option<&Field>) -> Result<HeightResult> {
    needs_height(class)?;
    let inf = || HeightResult::Infinite(format!("p = {p} divides a coefficient denominator"));
    let ss = HeightResult::Finite(e + 1);
    let ord = HeightResult::Finite(1);
    Ok(match class {
        LogCYClass::CaseI => match p % 3 {
            0 => inf(),
            1 => ord,
            _ => ss,
        },
        LogCYClass::CaseII => match p {
            2 => inf(),
            _ if p % 4 == 1 => ord,
            _ => ss,
        },
        LogCYClass::CaseIII => match p {
            2 | 3 => inf(),
            _ if p % 3 == 1 => ord,
            _ => ss,
        },
        LogCYClass::CaseIV(pts) => {
            if p == 2 {
                inf()
            } else {
                let (f, lambda) = legendre_lambda(pts, field)?;
                if f.p() != p {
                    return Err(Error::Invalid("point field characteristic differs from p".into()));
                }
                if eval_int_poly(&legendre_hasse_poly(p), lambda, &f).is_zero() {
                    ss
                } else {
                    ord
                }
            }
        }
        _ => unreachable!(),
    })
}

/// Heights from the Hasse invariant of a tame cover, or from `H¹` vanishing when `p`
/// divides a coefficient denominator.
pub fn height_via_cover(class: &LogCYClass, delta: &QDivisor, p: u32, e: u32, field: Option<&Field>) -> Result<HeightResult> {
    needs_height(class)?;
    if cartier_power_exists(delta, p).is_none() {
        let (pre, period) = frac_periodicity(delta, p);
        let r_max = 10.max(pre + period);
        let table = vanishing_table(delta, p, r_max);
        if table.iter().all(|r| r.h1 == 0) {
            return Ok(HeightResult::Infinite("H¹(⌊p^r(K+Δ)⌋) = 0 for all r: not quasi-F-split".into()));
        }
        return Err(Error::Unsupported("unresolved: no tame cover and H¹ does not vanish".into()));
    }
    let curve = match class {
        LogCYClass::CaseIV(pts) => {
            let (f, lambda) = legendre_lambda(pts, field)?;
            legendre_curve(&f, lambda)?
        }
        _ => cover_curve_for_case(class.cyclic().unwrap(), &FqContext::prime(p)?)?,
    };
    elliptic_height(&curve, e)
}

pub fn quasi_f_split_dichotomy(delta: &QDivisor, p: u32) -> bool {
    cartier_power_exists(delta, p).is_some()
}

/// A representative divisor for a case, on `0, 1, ∞` (and `λ` for case iv).
pub fn standard_divisor(case: &str, lambda: Option<PointP1>, f: &FqContext) -> Result<QDivisor> {
    let pts = [PointP1::Rational(f.zero()), PointP1::Rational(f.one()), PointP1::Infinity];
    let coeffs: &[(i64, i64)] = match case {
        "i" => &[(2, 3), (2, 3), (2, 3)],
        "ii" => &[(1, 2), (3, 4), (3, 4)],
        "iii" => &[(1, 2), (2, 3), (5, 6)],
        "iv" => &[(1, 2), (1, 2), (1, 2)],
        _ => return Err(Error::Invalid(format!("unknown case {case:?}"))),
    };
    let mut d = QDivisor::from_terms(pts.iter().cloned().zip(coeffs.iter().map(|&(a, b)| rat(a, b))));
    if case == "iv" {
        let l = lambda.ok_or_else(|| Error::Invalid("case iv needs a fourth point".into()))?;
        if d.coeff(&l) != BigRational::zero() {
            return Err(Error::Invalid("fourth point must differ from 0, 1, ∞".into()));
        }
        d.add_term(l, rat(1, 2));
    }
    Ok(d)
}
