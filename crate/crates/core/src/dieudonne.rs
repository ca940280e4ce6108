//! The rank-`h` Dieudonné module of a one-dimensional formal group and the
//! membership test that decides quasi-`F^e`-splitting of Calabi–Yau varieties.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::height::HeightResult;

/// Square matrices over `Z/p^m`, entries kept in `0..p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpmMatrix {
    pub modulus: BigInt,
    pub rows: Vec<Vec<BigInt>>,
}

impl ZpmMatrix {
    pub fn zero(h: usize, modulus: &BigInt) -> Self {
        ZpmMatrix { modulus: modulus.clone(), rows: vec![vec![BigInt::zero(); h]; h] }
    }

    pub fn identity(h: usize, modulus: &BigInt) -> Self {
        let mut m = Self::zero(h, modulus);
        for i in 0..h {
            m.rows[i][i] = BigInt::one().mod_floor(modulus);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &ZpmMatrix) -> ZpmMatrix {
        let h = self.dim();
        let mut out = Self::zero(h, &self.modulus);
        for i in 0..h {
            for k in 0..h {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..h {
                    out.rows[i][j] += &self.rows[i][k] * &other.rows[k][j];
                }
            }
            for j in 0..h {
                out.rows[i][j] = out.rows[i][j].mod_floor(&self.modulus);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> ZpmMatrix {
        let mut acc = Self::identity(self.dim(), &self.modulus);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn scalar(&self, k: &BigInt) -> ZpmMatrix {
        let rows = self.rows.iter().map(|r| r.iter().map(|x| (x * k).mod_floor(&self.modulus)).collect()).collect();
        ZpmMatrix { modulus: self.modulus.clone(), rows }
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim()).map(|j| self.column(j)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct DieudonneModule {
    pub p: u32,
    pub h: usize,
    pub m: u32,
    pub v: ZpmMatrix,
    pub f: ZpmMatrix,
}

/// Basis `v_1..v_h` with `V v_i = v_(i+1)`, `V v_h = p v_1`, `F v_1 = v_h`, `F v_i = p v_(i-1)`.
/// Column `j` of a matrix is the image of `v_(j+1)`.
pub fn structure_module(h: usize, m: u32, p: u32) -> Result<DieudonneModule> {
    if h == 0 || m == 0 {
        return Err(Error::Invalid("rank and precision must be positive".into()));
    }
    let modulus = num_traits::pow(BigInt::from(p), m as usize);
    let pb = BigInt::from(p).mod_floor(&modulus);
    let mut v = ZpmMatrix::zero(h, &modulus);
    let mut f = ZpmMatrix::zero(h, &modulus);
    for j in 0..h {
        if j + 1 < h {
            v.rows[j + 1][j] = BigInt::one();
        } else {
            v.rows[0][j] = pb.clone();
        }
        if j == 0 {
            f.rows[h - 1][0] += BigInt::one();
        } else {
            f.rows[j - 1][j] += pb.clone();
        }
    }
    for r in f.rows.iter_mut() {
        for x in r.iter_mut() {
            *x = x.mod_floor(&modulus);
        }
    }
    Ok(DieudonneModule { p, h, m, v, f })
}

fn valuation(x: &BigInt, p: &BigInt, m: u32) -> u32 {
    if x.is_zero() {
        return m;
    }
    let mut x = x.clone();
    let mut v = 0;
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    v
}

/// Echelon form over `Z/p^m` with `p`-power pivots, closed under multiplication by `p`
/// so that reduction decides span membership.
#[derive(Clone, Debug)]
pub struct HowellForm {
    p: BigInt,
    modulus: BigInt,
    /// `(pivot column, pivot valuation, row)`; the row is zero left of the pivot and has
    /// `p^valuation` at the pivot.
    rows: Vec<(usize, u32, Vec<BigInt>)>,
}

impl HowellForm {
    pub fn new(gens: &[Vec<BigInt>], p: u32, m: u32) -> Self {
        let pb = BigInt::from(p);
        let modulus = num_traits::pow(pb.clone(), m as usize);
        let dim = gens.first().map_or(0, |g| g.len());
        let mut pending: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|x| x.mod_floor(&modulus)).collect()).collect();
        let mut rows = Vec::new();
        for col in 0..dim {
            pending.retain(|r| r.iter().any(|x| !x.is_zero()));
            let best = pending.iter().enumerate().map(|(i, r)| (valuation(&r[col], &pb, m), i)).min();
            let Some((v, idx)) = best else { break };
            if v >= m {
                continue;
            }
            let mut piv = pending.swap_remove(idx);
            // normalize the pivot entry to p^v
            let unit = &piv[col] / num_traits::pow(pb.clone(), v as usize);
            let unit_inv = unit.modinv(&modulus).expect("unit part must be invertible");
            for x in piv.iter_mut() {
                *x = (&*x * &unit_inv).mod_floor(&modulus);
            }
            let pv = num_traits::pow(pb.clone(), v as usize);
            for r in pending.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = &r[col] / &pv;
                for (x, y) in r.iter_mut().zip(&piv) {
                    *x = (&*x - &q * y).mod_floor(&modulus);
                }
            }
            // p^(m-v) · pivot row clears the pivot entry; keep it for later columns
            let closure: Vec<BigInt> = piv.iter().map(|x| (x * num_traits::pow(pb.clone(), (m - v) as usize)).mod_floor(&modulus)).collect();
            pending.push(closure);
            rows.push((col, v, piv));
        }
        HowellForm { p: pb, modulus, rows }
    }

    pub fn contains(&self, target: &[BigInt]) -> bool {
        let mut t: Vec<BigInt> = target.iter().map(|x| x.mod_floor(&self.modulus)).collect();
        let mut col = 0;
        for (pc, v, row) in &self.rows {
            while col < *pc {
                if !t[col].is_zero() {
                    return false;
                }
                col += 1;
            }
            let pv = num_traits::pow(self.p.clone(), *v as usize);
            if !(&t[*pc] % &pv).is_zero() {
                return false;
            }
            let q = &t[*pc] / &pv;
            for (x, y) in t.iter_mut().zip(row) {
                *x = (&*x - &q * y).mod_floor(&self.modulus);
            }
            col = pc + 1;
        }
        t.iter().all(|x| x.is_zero())
    }

    /// `(pivot column, valuation)` pairs.
    pub fn pivots(&self) -> Vec<(usize, u32)> {
        self.rows.iter().map(|(c, v, _)| (*c, *v)).collect()
    }
}

pub fn submodule_membership(gens: &[Vec<BigInt>], target: &[BigInt], p: u32, m: u32) -> bool {
    if target.iter().all(|x| x.is_zero()) {
        return true;
    }
    HowellForm::new(gens, p, m).contains(target)
}

fn height_at_precision(h: usize, p: u32, e: u32, n_max: u32, m: u32) -> Result<HeightResult> {
    let dm = structure_module(h, m, p)?;
    let fe = dm.f.pow(e as u64);
    let target = fe.column(0);
    let vfe = dm.v.mul(&fe).columns();
    let mut vn = dm.v.clone();
    for n in 1..=n_max {
        let mut gens = vn.columns();
        gens.extend(vfe.iter().cloned());
        if !submodule_membership(&gens, &target, p, m) {
            return Ok(HeightResult::Finite(n));
        }
        vn = vn.mul(&dm.v);
    }
    Ok(HeightResult::ExceedsBound(n_max))
}

/// The least `n` with `F^e v_1 ∉ V^n H + V F^e H`.
pub fn quasi_fe_height(h: usize, p: u32, e: u32, n_max: u32) -> Result<HeightResult> {
    if e == 0 || n_max == 0 || h == 0 {
        return Err(Error::Invalid("h, e and n_max must be positive".into()));
    }
    if !crate::field::is_prime(p as u64) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let m = n_max + e + 2;
    let a = height_at_precision(h, p, e, n_max, m)?;
    let b = height_at_precision(h, p, e, n_max, m + 2)?;
    if a != b {
        return Err(Error::Internal(format!("precision instability: {a} at m={m}, {b} at m={}", m + 2)));
    }
    Ok(a)
}

pub fn closed_form_height(h: u32, e: u32) -> u32 {
    e * h - e + 1
}

/// Height of an ordinary-or-not abelian variety from dimension and `p`-rank.
pub fn abelian_height(g: u32, f: u32, e: u32) -> Result<HeightResult> {
    if g == 0 || f > g || e == 0 {
        return Err(Error::Invalid(format!("need 0 <= f <= g, g >= 1, e >= 1; got g={g}, f={f}, e={e}")));
    }
    Ok(if f == g {
        HeightResult::Finite(1)
    } else if f + 1 == g {
        HeightResult::Finite(e + 1)
    } else {
        HeightResult::Infinite("p-rank at most g-2: not quasi-F-split".into())
    })
}
