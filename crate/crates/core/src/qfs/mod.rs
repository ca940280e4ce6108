//! Quasi-F^e-splitting decided directly on Witt vectors over the Čech cover of P¹.
//!
//! With `D = K + Δ`, `K = -2·∞` and `⌊Δ⌋ = 0`, the pair is `n`-quasi-`F^e`-split iff
//! `x ↦ [x^(p^e)]` maps every nonzero class of `H¹(O(⌊D⌋))` outside the subgroup
//! `B ⊆ H¹(W_n O(p^e D))` generated by `V^(j+1)[y^(p^e)]`, `y` running over classes of
//! `H¹(O(⌊p^(j+1) D⌋))`, `j < n - 1`.

pub mod cech;
pub mod lift;
pub mod membership;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::divisor::{PointP1, QDivisor};
use crate::error::{Error, Result};
use crate::field::{Field, Fq, FqContext};
use crate::poly::Laurent;
use cech::{CechElem, CechWittGroup, LevelDivisor};
use membership::{FilteredSubgroup, LevelStats};

/// Parameter limits for direct verification.
#[derive(Clone, Debug)]
pub struct QfsLimits {
    pub max_p: u32,
    pub max_n: u32,
    pub max_e: u32,
    /// Largest lift span, in stored exponents, before a computation is abandoned.
    pub window_cap: usize,
}

impl Default for QfsLimits {
    fn default() -> Self {
        let window_cap = std::env::var("QFS_WINDOW_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(4_000_000);
        QfsLimits { max_p: 7, max_n: 4, max_e: 3, window_cap }
    }
}

#[derive(Clone, Debug)]
pub struct SplitQuery {
    pub field: Field,
    pub delta: QDivisor,
    pub e: u32,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitVerdict {
    Split(u32),
    NotSplit(u32),
    Inconclusive(String),
}

impl fmt::Display for SplitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitVerdict::Split(n) => write!(f, "split({n})"),
            SplitVerdict::NotSplit(n) => write!(f, "not-split({n})"),
            SplitVerdict::Inconclusive(r) => write!(f, "inconclusive({r})"),
        }
    }
}

/// Sizes recorded during one check.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub n: u32,
    pub scale_exponent: u64,
    pub max_span: usize,
    pub generators: usize,
    pub levels: Vec<LevelStats>,
    pub classes_tested: usize,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} scale_exponent={} max_lift_span={} generators={} classes_tested={}", self.n, self.scale_exponent, self.max_span, self.generators, self.classes_tested)?;
        for l in &self.levels {
            writeln!(f, "  level {}: dim={} generators={} rank={}", l.level, l.dim, l.generators, l.rank)?;
        }
        Ok(())
    }
}

fn validate(field: &FqContext, delta: &QDivisor, e: u32, n: u32, limits: &QfsLimits) -> Result<()> {
    let p = field.p();
    if p > limits.max_p || n > limits.max_n || e > limits.max_e {
        return Err(Error::Unsupported(format!(
            "(p, n, e) = ({p}, {n}, {e}) outside limits p <= {}, n <= {}, e <= {}",
            limits.max_p, limits.max_n, limits.max_e
        )));
    }
    if n == 0 || e == 0 {
        return Err(Error::Invalid("n and e must be positive".into()));
    }
    for (pt, c) in delta.terms() {
        if let PointP1::Labeled(s) = pt {
            return Err(Error::Invalid(format!("point @{s} has no coordinates in F_q")));
        }
        if *c < BigRational::zero() || *c >= BigRational::one() {
            return Err(Error::Invalid("direct verification needs 0 <= coefficients < 1 (⌊Δ⌋ = 0)".into()));
        }
    }
    Ok(())
}

/// `K + Δ` with `K = -2·∞`.
pub fn log_canonical(delta: &QDivisor) -> QDivisor {
    QDivisor::canonical().add(delta)
}

/// An `F_q`-basis of `H¹(O(⌊d⌋))`: the monomials `t^(-j)` in the complement range.
pub fn h1_basis(d: &QDivisor, field: &FqContext) -> Result<Vec<Laurent>> {
    let level = LevelDivisor::floor_of(d)?;
    Ok(level.complement().map(|j| Laurent::t_pow(field, -j)).collect())
}

/// One fixed `(Δ, e, n)` with its group, generators and margin.
pub struct QfsInstance {
    query: SplitQuery,
    group: CechWittGroup,
    generators: Vec<CechElem>,
}

impl QfsInstance {
    pub fn new(query: &SplitQuery, margin: u64, limits: &QfsLimits) -> Result<Self> {
        let SplitQuery { field, delta, e, n } = query;
        validate(field, delta, *e, *n, limits)?;
        let d = log_canonical(delta);
        let pe = (field.p() as i64).pow(*e);
        let group = CechWittGroup::new(field, &d.scale_int(pe), *n, margin, limits.window_cap)?;
        let mut generators = Vec::new();
        for j in 0..n.saturating_sub(1) {
            let pj = (field.p() as i64).pow(j + 1);
            for y in h1_basis(&d.scale_int(pj), field)? {
                for b in field.basis() {
                    let x = y.scale(b, field).frobenius_pow(*e, field);
                    let g = group.v_teichmuller(j as usize + 1, &x)?;
                    if !g.is_zero() {
                        generators.push(g);
                    }
                }
            }
        }
        Ok(QfsInstance { query: query.clone(), group, generators })
    }

    pub fn group(&self) -> &CechWittGroup {
        &self.group
    }

    pub fn coboundary_generators(&self) -> &[CechElem] {
        &self.generators
    }

    /// `[x^(p^e)]` for a cocycle `x` of `O(⌊K + Δ⌋)` on the overlap (a Laurent polynomial in `t`).
    pub fn phi_image(&self, x: &Laurent) -> Result<CechElem> {
        let f = &self.query.field;
        self.group.v_teichmuller(0, &x.frobenius_pow(self.query.e, f))
    }

    pub fn subgroup(&self) -> Result<FilteredSubgroup<'_, CechWittGroup>> {
        FilteredSubgroup::new(&self.group, &self.generators)
    }

    /// Nonzero `F_p`-combinations of the `H¹(O(⌊K + Δ⌋))` basis, one per `F_p^*`-line.
    pub fn test_classes(&self) -> Result<Vec<Laurent>> {
        let f = &self.query.field;
        let mut basis = Vec::new();
        for y in h1_basis(&log_canonical(&self.query.delta), f)? {
            for b in f.basis() {
                basis.push(y.scale(b, f));
            }
        }
        let p = f.p() as u64;
        let total = p.checked_pow(basis.len() as u32).ok_or_else(|| Error::Unsupported("H¹ too large to enumerate".into()))?;
        let mut out = Vec::new();
        for idx in 1..total {
            let digits: Vec<u64> = (0..basis.len()).map(|k| idx / p.pow(k as u32) % p).collect();
            // normalized: the last nonzero digit is 1
            if digits.iter().rev().find(|&&d| d != 0) != Some(&1) {
                continue;
            }
            let mut x = Laurent::zero();
            for (d, b) in digits.iter().zip(&basis) {
                if *d != 0 {
                    x = x.add(&b.scale(f.from_int(*d as i64), f), f);
                }
            }
            out.push(x);
        }
        Ok(out)
    }

    /// Whether no nonzero class is sent into `B`.
    pub fn is_split(&self) -> Result<(bool, Diagnostics)> {
        let sub = self.subgroup()?;
        let classes = self.test_classes()?;
        let mut split = true;
        for x in &classes {
            if sub.contains(&self.phi_image(x)?)? {
                split = false;
                break;
            }
        }
        let diag = Diagnostics {
            n: self.query.n,
            scale_exponent: self.group.scale_exponent(),
            max_span: self.group.max_span(),
            generators: self.generators.len(),
            levels: sub.stats.clone(),
            classes_tested: classes.len(),
        };
        Ok((split, diag))
    }
}

/// Decides `n`-quasi-`F^e`-splitting, recomputing with a larger scaling margin.
pub fn is_n_quasi_fe_split_with(query: &SplitQuery, limits: &QfsLimits) -> Result<(SplitVerdict, Vec<Diagnostics>)> {
    let (a, da) = QfsInstance::new(query, 0, limits)?.is_split()?;
    let (b, db) = QfsInstance::new(query, 1, limits)?.is_split()?;
    let verdict = match (a, b) {
        (true, true) => SplitVerdict::Split(query.n),
        (false, false) => SplitVerdict::NotSplit(query.n),
        _ => SplitVerdict::Inconclusive(format!("margin 0 gives {a}, margin 1 gives {b}")),
    };
    Ok((verdict, vec![da, db]))
}

pub fn is_n_quasi_fe_split(query: &SplitQuery) -> Result<SplitVerdict> {
    Ok(is_n_quasi_fe_split_with(query, &QfsLimits::default())?.0)
}

/// Search trace: the verdict at each `n` tried, in order.
#[derive(Clone, Debug)]
pub struct SearchTrace {
    pub verdict: SplitVerdict,
    pub steps: Vec<SplitVerdict>,
    pub diagnostics: Vec<Diagnostics>,
}

/// Least `n <= n_max` with a split verdict; `NotSplit(n_max)` if none.
pub fn height_search_with(field: &Field, delta: &QDivisor, e: u32, n_max: u32, limits: &QfsLimits) -> Result<SearchTrace> {
    let mut steps = Vec::new();
    let mut diagnostics = Vec::new();
    for n in 1..=n_max {
        let q = SplitQuery { field: field.clone(), delta: delta.clone(), e, n };
        let (v, d) = is_n_quasi_fe_split_with(&q, limits)?;
        diagnostics.extend(d);
        steps.push(v.clone());
        match v {
            SplitVerdict::NotSplit(_) => {}
            other => return Ok(SearchTrace { verdict: other, steps, diagnostics }),
        }
    }
    Ok(SearchTrace { verdict: SplitVerdict::NotSplit(n_max), steps, diagnostics })
}

pub fn height_search(field: &Field, delta: &QDivisor, e: u32, n_max: u32) -> Result<SplitVerdict> {
    Ok(height_search_with(field, delta, e, n_max, &QfsLimits::default())?.verdict)
}

/// Injectivity of `x ↦ x^(p^e)` from `H¹(O(A))` to `H¹(O(B))`, `A = ⌊K + Δ⌋`, `B = ⌊p^e(K + Δ)⌋`,
/// with ordinary Čech cochains.
///
/// A section `f` of `O(B)` on the overlap is recorded as `g = f · t^(B_0) · h_B` with
/// `h_B = prod (t - λ)^(B_λ)`; chart sections become `span{t^k : k >= 0}` and
/// `span{t^k : k <= deg B}`, so the class of `f` is the coefficients of `g` at `deg B < k < 0`.
pub fn height1_frobenius_test(field: &Field, delta: &QDivisor, e: u32) -> Result<bool> {
    validate(field, delta, e, 1, &QfsLimits { max_p: u32::MAX, max_n: u32::MAX, max_e: u32::MAX, window_cap: usize::MAX })?;
    let f = field;
    let d = log_canonical(delta);
    let pe = (f.p() as i64).pow(e);
    let a = LevelDivisor::floor_of(&d)?;
    let b = LevelDivisor::floor_of(&d.scale_int(pe))?;
    let (deg_a, deg_b) = (a.degree(), b.degree());
    let h = |l: &LevelDivisor| {
        l.finite.iter().fold(Laurent::constant(f.one()), |acc, &(lam, k)| {
            acc.mul(&Laurent::poly(vec![f.neg(lam), f.one()]).pow(k as u64, f), f)
        })
    };
    // h_B / h_A^(p^e) is a polynomial since B_λ >= p^e A_λ
    let ha = h(&a).pow(pe as u64, f);
    let (quot, rem) = h(&b).div_rem(&ha, f);
    if !rem.is_zero() {
        return Err(Error::Internal("⌊p^e D⌋ below p^e⌊D⌋".into()));
    }
    let shift = b.at_zero - pe * a.at_zero;
    let mut rows: Vec<Vec<Fq>> = Vec::new();
    for k in deg_a + 1..0 {
        // g_x = t^k
        let gy = Laurent::t_pow(f, k * pe).shift(shift).mul(&quot, f);
        rows.push((deg_b + 1..0).map(|j| gy.coeff(j)).collect());
    }
    // the images of the F_q-basis must be F_q-independent (the map is p^e-semilinear)
    Ok(fq_rank(&mut rows, f) == rows.len())
}

fn fq_rank(rows: &mut [Vec<Fq>], f: &FqContext) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][c]).unwrap();
        let pr: Vec<_> = rows[rank].iter().map(|&x| f.mul(x, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pr) {
                    *x = f.sub(*x, f.mul(k, y));
                }
            }
        }
        rows[rank] = pr;
        rank += 1;
    }
    rank
}
