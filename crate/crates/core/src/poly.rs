//! Dense Laurent polynomials over `F_q` and truncated power series helpers.

use crate::field::{Fq, FqContext};

/// `sum_k coeffs[k] * t^(lo + k)`, trimmed so the first and last coefficients are nonzero.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Laurent {
    lo: i64,
    coeffs: Vec<Fq>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { lo: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: Fq) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Fq, exp: i64) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// `t^exp`.
    pub fn t_pow(field: &FqContext, exp: i64) -> Self {
        Self::monomial(field.one(), exp)
    }

    pub fn from_coeffs(lo: i64, coeffs: Vec<Fq>) -> Self {
        let mut l = Laurent { lo, coeffs };
        l.normalize();
        l
    }

    /// Polynomial `sum c_k t^k` from constant-first coefficients.
    pub fn poly(coeffs: Vec<Fq>) -> Self {
        Self::from_coeffs(0, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> Fq {
        let k = exp - self.lo;
        if k < 0 || k >= self.coeffs.len() as i64 {
            Fq::ZERO
        } else {
            self.coeffs[k as usize]
        }
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, &c)| (self.lo + k as i64, c))
    }

    pub fn add(&self, other: &Laurent, f: &FqContext) -> Laurent {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut out = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            out[(self.lo - lo) as usize + k] = c;
        }
        for (k, &c) in other.coeffs.iter().enumerate() {
            let slot = &mut out[(other.lo - lo) as usize + k];
            *slot = f.add(*slot, c);
        }
        Laurent::from_coeffs(lo, out)
    }

    pub fn neg(&self, f: &FqContext) -> Laurent {
        Laurent { lo: self.lo, coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect() }
    }

    pub fn sub(&self, other: &Laurent, f: &FqContext) -> Laurent {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fq, f: &FqContext) -> Laurent {
        Laurent::from_coeffs(self.lo, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        if self.is_zero() {
            return self.clone();
        }
        Laurent { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    pub fn mul(&self, other: &Laurent, f: &FqContext) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Laurent::from_coeffs(self.lo + other.lo, out)
    }

    pub fn pow(&self, mut e: u64, f: &FqContext) -> Laurent {
        let mut acc = Laurent::constant(f.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// The `p^k`-th power, computed termwise (`(sum c t^a)^(p^k) = sum c^(p^k) t^(a p^k)`).
    pub fn frobenius_pow(&self, k: u32, f: &FqContext) -> Laurent {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let pk = (f.p() as i64).pow(k);
        let mut out = vec![Fq::ZERO; ((self.coeffs.len() as i64 - 1) * pk + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * pk as usize] = f.frobenius_pow(c, k);
        }
        Laurent::from_coeffs(self.lo * pk, out)
    }

    /// Part with exponents in `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Laurent {
        if self.is_zero() || hi < lo {
            return Laurent::zero();
        }
        let out: Vec<Fq> = (lo..=hi).map(|k| self.coeff(k)).collect();
        Laurent::from_coeffs(lo, out)
    }

    /// Evaluation at a nonzero point (or anywhere, for polynomials).
    pub fn eval(&self, x: Fq, f: &FqContext) -> Option<Fq> {
        if self.is_zero() {
            return Some(Fq::ZERO);
        }
        let mut acc = Fq::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        if self.lo >= 0 {
            Some(f.mul(acc, f.pow(x, self.lo as u64)))
        } else {
            let xi = f.inv(x)?;
            Some(f.mul(acc, f.pow(xi, (-self.lo) as u64)))
        }
    }

    /// Constant-first coefficients of a polynomial (`lo >= 0`), padded from degree 0.
    pub fn dense_poly(&self) -> Vec<Fq> {
        assert!(self.is_zero() || self.lo >= 0, "not a polynomial");
        let mut out = vec![Fq::ZERO; self.lo.max(0) as usize];
        out.extend_from_slice(&self.coeffs);
        out
    }

    /// Euclidean division of polynomials by a nonzero polynomial.
    pub fn div_rem(&self, d: &Laurent, f: &FqContext) -> (Laurent, Laurent) {
        let n = self.dense_poly();
        let dd = d.dense_poly();
        assert!(!d.is_zero(), "division by zero polynomial");
        let dl = dd.len() - 1;
        if n.len() <= dl {
            return (Laurent::zero(), self.clone());
        }
        let lead_inv = f.inv(dd[dl]).unwrap();
        let mut r = n.clone();
        let mut q = vec![Fq::ZERO; n.len() - dl];
        for k in (0..q.len()).rev() {
            let c = f.mul(r[k + dl], lead_inv);
            q[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in dd.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(c, dc));
            }
        }
        (Laurent::poly(q), Laurent::poly(r))
    }

    /// Divides by `(t - lambda)` if exact.
    pub fn div_linear_exact(&self, lambda: Fq, f: &FqContext) -> Option<Laurent> {
        let d = Laurent::poly(vec![f.neg(lambda), f.one()]);
        // a Laurent polynomial t^lo * g is divisible by (t - lambda), lambda != 0, iff g is
        let g = self.shift(-self.lo);
        let (q, r) = g.div_rem(&d, f);
        r.is_zero().then(|| q.shift(self.lo))
    }

    /// Coefficients of `t^0 .. t^(len-1)` of the expansion of `self` at `t = lambda`,
    /// i.e. of `self(lambda + u)` as a power series in `u`. Requires `lambda != 0` when `lo < 0`.
    pub fn taylor(&self, lambda: Fq, len: usize, f: &FqContext) -> Vec<Fq> {
        if len == 0 {
            return vec![];
        }
        let mut out = vec![Fq::ZERO; len];
        if self.is_zero() {
            return out;
        }
        // polynomial part: repeated synthetic division
        let base = self.shift(-self.lo);
        let mut g = base.dense_poly();
        for slot in out.iter_mut() {
            if g.is_empty() {
                break;
            }
            // g = (t - lambda) q + r
            let mut q = vec![Fq::ZERO; g.len().saturating_sub(1)];
            let mut acc = Fq::ZERO;
            for k in (0..g.len()).rev() {
                acc = f.add(f.mul(acc, lambda), g[k]);
                if k > 0 {
                    q[k - 1] = acc;
                }
            }
            *slot = acc;
            g = q;
        }
        // multiply by the series of t^lo at lambda
        if self.lo != 0 {
            let tl = series_t_pow(lambda, self.lo, len, f);
            out = series_mul(&out, &tl, len, f);
        }
        out
    }
}

/// Product of two power series truncated to `len` terms.
pub fn series_mul(a: &[Fq], b: &[Fq], len: usize, f: &FqContext) -> Vec<Fq> {
    let mut out = vec![Fq::ZERO; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Inverse of a power series with nonzero constant term, truncated to `len` terms.
pub fn series_inv(a: &[Fq], len: usize, f: &FqContext) -> Vec<Fq> {
    let a0_inv = f.inv(a[0]).expect("series with zero constant term is not invertible");
    let mut out = vec![Fq::ZERO; len];
    if len == 0 {
        return out;
    }
    out[0] = a0_inv;
    for k in 1..len {
        let mut acc = Fq::ZERO;
        for j in 1..=k.min(a.len() - 1) {
            acc = f.add(acc, f.mul(a[j], out[k - j]));
        }
        out[k] = f.neg(f.mul(acc, a0_inv));
    }
    out
}

/// Expansion of `t^k` at `t = lambda` (`lambda != 0` if `k < 0`) as a series in `u = t - lambda`.
pub fn series_t_pow(lambda: Fq, k: i64, len: usize, f: &FqContext) -> Vec<Fq> {
    let lin = vec![lambda, f.one()];
    let base = if k >= 0 { lin } else { series_inv(&lin, len, f) };
    let mut acc = vec![Fq::ZERO; len];
    if len > 0 {
        acc[0] = f.one();
    }
    let mut e = k.unsigned_abs();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = series_mul(&acc, &b, len, f);
        }
        e >>= 1;
        if e > 0 {
            b = series_mul(&b, &b, len, f);
        }
    }
    acc
}
