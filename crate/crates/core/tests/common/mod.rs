#![allow(dead_code)]

use std::sync::Arc;

use cartier_core::curve::{Curve, FuncElem};
use cartier_core::ff::{mk_field, Fe, FieldTower};
use cartier_core::text::parse_mpoly;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn line(p: u32, m: u32) -> Curve {
    Curve::projective_line(&mk_field(p, m, None).unwrap())
}

pub fn tower(p: u32, m: u32, base_m: u32) -> Arc<FieldTower> {
    let ext = mk_field(p, m, None).unwrap();
    let base = if base_m == m { ext.clone() } else { mk_field(p, base_m, None).unwrap() };
    Arc::new(FieldTower::new(&base, &ext).unwrap())
}

fn random_form(c: &Curve, rng: &mut ChaCha8Rng, deg: u32) -> FuncElem {
    let k = c.field().clone();
    let mut terms = Vec::new();
    for i in 0..=deg {
        for j in 0..=(deg - i) {
            let a = Fe(rng.gen_range(0..k.size()));
            terms.push(format!("({})*x^{}*y^{}", k.format(a), i, j));
        }
    }
    FuncElem::from_mpoly(c, &parse_mpoly(&k, &terms.join(" + ")).unwrap())
}

/// A random function `a/b` with affine forms of degree 3 and 2.
pub fn random_fn(c: &Curve, rng: &mut ChaCha8Rng) -> FuncElem {
    loop {
        let a = random_form(c, rng, 3);
        let b = random_form(c, rng, 2);
        if !b.is_zero() {
            return a.div(&b).unwrap();
        }
    }
}

pub fn random_nonconstant(c: &Curve, rng: &mut ChaCha8Rng) -> FuncElem {
    loop {
        let h = random_fn(c, rng);
        if !h.is_constant() {
            return h;
        }
    }
}

/// A random ratio of products of `n` linear forms: all zeros and poles lie
/// on lines, hence at places of degree at most the curve degree.
pub fn random_line_ratio(c: &Curve, rng: &mut ChaCha8Rng, n: usize) -> FuncElem {
    let k = c.field().clone();
    let q = k.size();
    let lin = |rng: &mut ChaCha8Rng| loop {
        let t = [Fe(rng.gen_range(0..q)), Fe(rng.gen_range(0..q)), Fe(rng.gen_range(0..q))];
        if t.iter().any(|a| !a.is_zero()) {
            let s = format!("({})*x + ({})*y + ({})*z", k.format(t[0]), k.format(t[1]), k.format(t[2]));
            return parse_mpoly(&k, &s).unwrap();
        }
    };
    loop {
        let mut a = parse_mpoly(&k, "1").unwrap();
        let mut b = a.clone();
        for _ in 0..n {
            a = a.mul(&lin(rng));
            b = b.mul(&lin(rng));
        }
        if let Ok(h) = FuncElem::from_forms(c, &a, &b) {
            if !h.is_zero() {
                return h;
            }
        }
    }
}
