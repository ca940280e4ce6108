//! Subgroup membership in finite abelian `p`-groups with an explicit `V`-filtration.

use std::collections::{HashSet, VecDeque};
use std::hash::Hash;

use crate::error::Result;

/// A finite abelian `p`-group `G ⊇ G_1 ⊇ .. ⊇ G_depth = 0` whose graded pieces are
/// `F_p`-vector spaces with explicit coordinates, and `p·G_i ⊆ G_(i+1)`.
pub trait FilteredGroup {
    type Elem: Clone + Eq + Hash;

    fn p(&self) -> u32;
    fn depth(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, g: &Self::Elem) -> bool;
    fn level_dim(&self, i: usize) -> usize;
    /// Coordinates of `g` in `G_i / G_(i+1)`; `g` must lie in `G_i`.
    fn coords(&self, g: &Self::Elem, i: usize) -> Vec<u32>;
    /// `sum c_k g_k` for integer multipliers.
    fn combine(&self, terms: &[(i64, &Self::Elem)]) -> Result<Self::Elem>;

    fn leading_level(&self, g: &Self::Elem) -> Option<usize> {
        if self.is_zero(g) {
            return None;
        }
        (0..self.depth()).find(|&i| self.coords(g, i).iter().any(|&c| c != 0))
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Row echelon form over `F_p` remembering each row as a combination of the input rows.
#[derive(Clone, Debug)]
struct Echelon {
    p: u32,
    /// `(pivot column, row with pivot entry 1, combination)`.
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
    /// Combinations of inputs with zero coordinates.
    kernel: Vec<Vec<u32>>,
}

impl Echelon {
    fn new(input: &[Vec<u32>], p: u32) -> Self {
        let n = input.len();
        let mut rows: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
        let mut kernel = Vec::new();
        for (k, r) in input.iter().enumerate() {
            let mut v = r.clone();
            let mut combo = vec![0u32; n];
            combo[k] = 1;
            Self::reduce_with(&rows, &mut v, &mut combo, p);
            match v.iter().position(|&x| x != 0) {
                None => kernel.push(combo),
                Some(col) => {
                    let s = inv_mod(v[col], p);
                    for x in v.iter_mut().chain(combo.iter_mut()) {
                        *x = (*x as u64 * s as u64 % p as u64) as u32;
                    }
                    // keep earlier rows reduced at the new pivot so reduction is single-pass
                    for (_, row, rc) in rows.iter_mut() {
                        let c = row[col];
                        if c != 0 {
                            for (x, y) in row.iter_mut().zip(&v) {
                                *x = (*x + p - (c as u64 * *y as u64 % p as u64) as u32) % p;
                            }
                            for (x, y) in rc.iter_mut().zip(&combo) {
                                *x = (*x + p - (c as u64 * *y as u64 % p as u64) as u32) % p;
                            }
                        }
                    }
                    rows.push((col, v, combo));
                }
            }
        }
        Echelon { p, rows, kernel }
    }

    fn reduce_with(rows: &[(usize, Vec<u32>, Vec<u32>)], v: &mut [u32], combo: &mut [u32], p: u32) {
        for (col, row, rc) in rows {
            let c = v[*col];
            if c == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + p - (c as u64 * *y as u64 % p as u64) as u32) % p;
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                *x = (*x + p - (c as u64 * *y as u64 % p as u64) as u32) % p;
            }
        }
    }

    /// Combination `ε` of inputs with `sum ε_k input_k = target`, if any.
    fn solve(&self, target: &[u32], ninputs: usize) -> Option<Vec<u32>> {
        let p = self.p;
        let mut v = target.to_vec();
        let mut combo = vec![0u32; ninputs];
        Self::reduce_with(&self.rows, &mut v, &mut combo, p);
        if v.iter().any(|&x| x != 0) {
            return None;
        }
        // v - sum c_r row_r = 0 was tracked as combo = -sum c_r combo_r
        Some(combo.iter().map(|&x| (p - x) % p).collect())
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

struct LevelSystem<E> {
    gens: Vec<E>,
    echelon: Echelon,
}

/// Level statistics collected while building a subgroup presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub dim: usize,
    pub generators: usize,
    pub rank: usize,
}

/// A subgroup given by generators, preprocessed level by level.
pub struct FilteredSubgroup<'g, G: FilteredGroup> {
    group: &'g G,
    levels: Vec<LevelSystem<G::Elem>>,
    pub stats: Vec<LevelStats>,
}

impl<'g, G: FilteredGroup> FilteredSubgroup<'g, G> {
    pub fn new(group: &'g G, gens: &[G::Elem]) -> Result<Self> {
        let p = group.p();
        let mut cur: Vec<G::Elem> = gens.iter().filter(|g| !group.is_zero(g)).cloned().collect();
        let mut levels = Vec::new();
        let mut stats = Vec::new();
        for i in 0..group.depth() {
            let mut here = Vec::new();
            let mut deeper = Vec::new();
            let mut here_coords = Vec::new();
            for g in cur.drain(..) {
                let c = group.coords(&g, i);
                if c.iter().any(|&x| x != 0) {
                    here.push(g);
                    here_coords.push(c);
                } else {
                    deeper.push(g);
                }
            }
            let echelon = Echelon::new(&here_coords, p);
            stats.push(LevelStats { level: i, dim: group.level_dim(i), generators: here.len(), rank: echelon.rank() });
            let mut next = deeper;
            let combo_elem = |combo: &[u32], mult: i64| -> Result<G::Elem> {
                let terms: Vec<(i64, &G::Elem)> =
                    combo.iter().zip(&here).filter(|(&c, _)| c != 0).map(|(&c, g)| (c as i64 * mult, g)).collect();
                group.combine(&terms)
            };
            for k in &echelon.kernel {
                let g = combo_elem(k, 1)?;
                if !group.is_zero(&g) {
                    next.push(g);
                }
            }
            for (_, _, combo) in &echelon.rows {
                let g = combo_elem(combo, p as i64)?;
                if !group.is_zero(&g) {
                    next.push(g);
                }
            }
            levels.push(LevelSystem { gens: here, echelon });
            cur = next;
        }
        Ok(FilteredSubgroup { group, levels, stats })
    }

    pub fn contains(&self, target: &G::Elem) -> Result<bool> {
        let g = self.group;
        let mut t = target.clone();
        for (i, lv) in self.levels.iter().enumerate() {
            if g.is_zero(&t) {
                return Ok(true);
            }
            let c = g.coords(&t, i);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let Some(eps) = lv.echelon.solve(&c, lv.gens.len()) else {
                return Ok(false);
            };
            let mut terms: Vec<(i64, &G::Elem)> = vec![(1, &t)];
            terms.extend(eps.iter().zip(&lv.gens).filter(|(&e, _)| e != 0).map(|(&e, gen)| (-(e as i64), gen)));
            t = g.combine(&terms)?;
        }
        Ok(g.is_zero(&t))
    }
}

/// Ground truth by enumerating the subgroup; `None` once more than `limit` elements are seen.
pub fn bfs_closure_contains<G: FilteredGroup>(group: &G, gens: &[G::Elem], target: &G::Elem, limit: usize) -> Result<Option<bool>> {
    let mut seen: HashSet<G::Elem> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(group.zero());
    queue.push_back(group.zero());
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = group.combine(&[(1, &x), (1, s)])?;
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return Ok(None);
                }
                queue.push_back(y);
            }
        }
    }
    Ok(Some(seen.contains(target)))
}

/// `(Z/p^k)^r` filtered by `p`-adic digits: the test model for the elimination.
#[derive(Clone, Debug)]
pub struct CyclicProduct {
    pub p: u32,
    pub k: usize,
    pub r: usize,
}

impl FilteredGroup for CyclicProduct {
    type Elem = Vec<u64>;
    fn p(&self) -> u32 {
        self.p
    }
    fn depth(&self) -> usize {
        self.k
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.r]
    }
    fn is_zero(&self, g: &Vec<u64>) -> bool {
        g.iter().all(|&x| x == 0)
    }
    fn level_dim(&self, _i: usize) -> usize {
        self.r
    }
    fn coords(&self, g: &Vec<u64>, i: usize) -> Vec<u32> {
        g.iter().map(|&x| ((x / (self.p as u64).pow(i as u32)) % self.p as u64) as u32).collect()
    }
    fn combine(&self, terms: &[(i64, &Vec<u64>)]) -> Result<Vec<u64>> {
        let q = (self.p as i64).pow(self.k as u32);
        let mut out = vec![0i64; self.r];
        for (c, g) in terms {
            for (o, &x) in out.iter_mut().zip(g.iter()) {
                *o = (*o + c.rem_euclid(q) * x as i64) % q;
            }
        }
        Ok(out.into_iter().map(|x| x as u64).collect())
    }
}
