//! Witt-vector law checks shared by the property suite and the acceptance run.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use qfsplit::witt::{gen_universal_polys_with, ghost_vector, CostCap, UniversalPolys, WittRingContext, WittVector};
use qfsplit::{Field, Fq, FqContext};

fn witt(p: u32, n: usize) -> (Field, WittRingContext<Field>, WittRingContext<Field>) {
    // F_{p^2} so that Frobenius is not the identity on slots
    let f = FqContext::new(p, 2).unwrap();
    let w = WittRingContext::new(f.clone(), n).unwrap();
    let short = w.shorter().unwrap();
    (f, w, short)
}

fn vector(f: &Field, w: &WittRingContext<Field>, idx: &[u64]) -> WittVector<Fq> {
    w.from_comps(idx.iter().map(|&k| f.from_index(k % f.order())).collect()).unwrap()
}

pub fn ring_laws(p: u32, n: usize, a: &[u64], b: &[u64], c: &[u64]) {
    let (f, w, short) = witt(p, n);
    let (a, b, c) = (vector(&f, &w, a), vector(&f, &w, b), vector(&f, &w, c));
    assert_eq!(w.add(&w.add(&a, &b), &c), w.add(&a, &w.add(&b, &c)));
    assert_eq!(w.mul(&w.mul(&a, &b), &c), w.mul(&a, &w.mul(&b, &c)));
    assert_eq!(w.add(&a, &b), w.add(&b, &a));
    assert_eq!(w.mul(&a, &b), w.mul(&b, &a));
    assert_eq!(w.mul(&a, &w.add(&b, &c)), w.add(&w.mul(&a, &b), &w.mul(&a, &c)));
    assert_eq!(w.add(&a, &w.zero()), a);
    assert_eq!(w.mul(&a, &w.one()), a);
    assert_eq!(w.add(&a, &w.neg(&a)), w.zero());
    if p > 2 {
        // odd p: negation is slotwise, i.e. (p-1)-fold addition in each slot
        let slotwise: Vec<Fq> = a.comps.iter().map(|&x| f.scale(x, p - 1)).collect();
        assert_eq!(w.neg(&a).comps, slotwise);
    }
    // FV = VF = p
    let pa = w.mul_int(&a, p as u64);
    assert_eq!(w.frobenius(&w.verschiebung_endo(&a)), pa);
    assert_eq!(w.verschiebung_endo(&w.frobenius(&a)), pa);
    // Teichmüller is multiplicative
    let (x, y) = (a.comps[0], b.comps[0]);
    assert_eq!(w.mul(&w.teichmuller(x), &w.teichmuller(y)), w.teichmuller(f.mul(x, y)));
    // restriction is a ring map
    assert_eq!(w.restriction(&w.add(&a, &b)), short.add(&w.restriction(&a), &w.restriction(&b)));
    assert_eq!(w.restriction(&w.mul(&a, &b)), short.mul(&w.restriction(&a), &w.restriction(&b)));
    // F is a ring map
    assert_eq!(w.frobenius(&w.mul(&a, &b)), w.mul(&w.frobenius(&a), &w.frobenius(&b)));
}

pub fn ghost_laws(p: u32, n: usize, a: &[i64], b: &[i64]) {
    static EXACT: OnceLock<Mutex<HashMap<(u32, usize), Arc<UniversalPolys>>>> = OnceLock::new();
    let u = EXACT
        .get_or_init(Default::default)
        .lock()
        .unwrap()
        .entry((p, n))
        .or_insert_with(|| Arc::new(gen_universal_polys_with(p, n, true, &CostCap::default()).unwrap()))
        .clone();
    let a: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
    let b: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    let ab: Vec<BigInt> = a.iter().chain(&b).cloned().collect();
    let s: Vec<BigInt> = u.sum.iter().map(|q| q.eval_int(&ab)).collect();
    let m: Vec<BigInt> = u.prod.iter().map(|q| q.eval_int(&ab)).collect();
    let neg: Vec<BigInt> = u.neg.iter().map(|q| q.eval_int(&a)).collect();
    let (ga, gb) = (ghost_vector(p, &a), ghost_vector(p, &b));
    for i in 0..n {
        assert_eq!(ghost_vector(p, &s)[i], &ga[i] + &gb[i]);
        assert_eq!(ghost_vector(p, &m)[i], &ga[i] * &gb[i]);
        assert_eq!(ghost_vector(p, &neg)[i], -ga[i].clone());
    }
}
