use cartier_core::ff::{mk_field, Fe, Field, FieldTower};
use cartier_core::Error;
use proptest::prelude::*;

/// Schoolbook product of base-p digit vectors reduced by the monic modulus.
fn naive_mul(k: &Field, a: Fe, b: Fe) -> Fe {
    let p = k.p();
    let m = k.m() as usize;
    let da = k.coeffs(a);
    let db = k.coeffs(b);
    let mut prod = vec![0u32; 2 * m];
    for i in 0..m {
        for j in 0..m {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    let md = k.modulus();
    for e in (m..2 * m).rev() {
        let c = prod[e];
        if c != 0 {
            for i in 0..=m {
                prod[e - m + i] = (prod[e - m + i] + p * p - c * md[i] % p) % p;
            }
        }
    }
    k.from_coeffs(&prod[..m])
}

#[test]
fn constructing_fields() {
    let f8 = mk_field(2, 3, Some(&[1, 1, 0, 1])).unwrap();
    let w = f8.gen();
    assert_eq!(f8.pow(w, 3), f8.add(w, Fe::ONE));
    assert_eq!(f8.size(), 8);
    let f2 = mk_field(2, 1, None).unwrap();
    assert_eq!(f2.size(), 2);
    assert_eq!(f2.elements().count(), 2);
    let f4 = mk_field(2, 2, None).unwrap();
    assert_eq!(f4.modulus(), &[1, 1, 1]);
    // Default F_8 is the least irreducible cubic in the same order.
    assert_eq!(mk_field(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
}

#[test]
fn rejected_fields() {
    assert_eq!(mk_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
    assert_eq!(mk_field(2, 2, Some(&[1, 0, 1])).unwrap_err(), Error::ReducibleModulus(2));
    assert_eq!(mk_field(2, 21, None).unwrap_err(), Error::FieldTooLarge { p: 2, m: 21 });
    assert!(mk_field(2, 20, None).is_ok());
}

#[test]
fn traces() {
    let f4 = mk_field(2, 2, None).unwrap();
    let f2 = mk_field(2, 1, None).unwrap();
    let t = FieldTower::new(&f2, &f4).unwrap();
    assert_eq!(t.trace_to_base(Fe::ONE), Fe::ZERO);
    assert_eq!(t.trace_to_base(f4.gen()), Fe::ONE);
    let f8 = mk_field(2, 3, None).unwrap();
    let t8 = FieldTower::new(&f2, &f8).unwrap();
    assert_eq!(t8.trace_to_base(Fe::ZERO), Fe::ZERO);
}

#[test]
fn frobenius_and_roots() {
    let f8 = mk_field(2, 3, None).unwrap();
    let w = f8.gen();
    assert_eq!(f8.frobenius_q(w, 2).unwrap(), f8.mul(w, w));
    assert_eq!(f8.frobenius_q(Fe::ONE, 8).unwrap(), Fe::ONE);
    let f4 = mk_field(2, 2, None).unwrap();
    assert_eq!(f4.frobenius_q(f4.gen(), 4).unwrap(), f4.gen());
    assert!(f4.frobenius_q(f4.gen(), 3).is_err());
    assert_eq!(f8.pth_root(Fe::ZERO), Fe::ZERO);
    assert_eq!(f8.pth_root(Fe::ONE), Fe::ONE);
    let r = f8.pth_root(w);
    assert_eq!(r, f8.add(f8.mul(w, w), w));
    assert_eq!(f8.mul(r, r), w);
}

#[test]
fn embedding_and_descent() {
    let f2 = mk_field(2, 1, None).unwrap();
    let f4 = mk_field(2, 2, None).unwrap();
    let t = FieldTower::new(&f2, &f4).unwrap();
    assert_eq!(t.embed(Fe::ONE), Fe::ONE);
    assert_eq!(t.try_descend(f4.gen()), None);
    let f16 = mk_field(2, 4, None).unwrap();
    let t = FieldTower::new(&f4, &f16).unwrap();
    for i in 0..100u32 {
        let x = Fe(i * 7 % 4);
        assert_eq!(t.try_descend(t.embed(x)), Some(x));
    }
    assert!(FieldTower::new(&mk_field(2, 3, None).unwrap(), &f16).is_err());
}

#[test]
fn embedding_image_is_the_fixed_field() {
    for (p, a, m) in [(2, 1, 4), (2, 2, 4), (2, 3, 6), (3, 1, 2), (2, 4, 12), (2, 2, 12)] {
        let base = mk_field(p, a, None).unwrap();
        let ext = mk_field(p, m, None).unwrap();
        let t = FieldTower::new(&base, &ext).unwrap();
        let q = t.q();
        let mut image: Vec<Fe> = base.elements().map(|x| t.embed(x)).collect();
        image.sort();
        let mut fixed: Vec<Fe> = ext.elements().filter(|&x| ext.frobenius_q(x, q).unwrap() == x).collect();
        fixed.sort();
        assert_eq!(image, fixed);
        for x in base.elements().take(16) {
            for y in base.elements().take(16) {
                assert_eq!(t.embed(base.mul(x, y)), ext.mul(t.embed(x), t.embed(y)));
                assert_eq!(t.embed(base.add(x, y)), ext.add(t.embed(x), t.embed(y)));
            }
        }
        let mut hit = vec![false; base.size() as usize];
        for x in ext.elements() {
            hit[t.trace_to_base(x).0 as usize] = true;
        }
        assert!(hit.iter().all(|&h| h), "trace is onto for {p}^{a} in {p}^{m}");
    }
}

#[test]
fn element_text() {
    let f8 = mk_field(2, 3, None).unwrap();
    assert_eq!(f8.format(Fe(6)), "w^2+w");
    assert_eq!(f8.describe(), "field p=2 m=3 modulus=1,1,0,1 gen=w");
}

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 2), (7, 1), (2, 8)])
        .prop_map(|(p, m)| mk_field(p, m, None).unwrap())
}

fn with_elems(n: usize) -> impl Strategy<Value = (Field, Vec<Fe>)> {
    field_strategy().prop_flat_map(move |k| {
        let s = k.size();
        (Just(k), prop::collection::vec((0..s).prop_map(Fe), n))
    })
}

proptest! {
    #[test]
    fn products_match_schoolbook((k, v) in with_elems(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(k.mul(a, b), naive_mul(&k, a, b));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn roots_and_frobenius((k, v) in with_elems(1)) {
        let a = v[0];
        prop_assert_eq!(k.pow(k.pth_root(a), k.p() as u64), a);
        let p = k.p() as u64;
        for d in (1..=k.m()).filter(|d| k.m() % d == 0) {
            let q = p.pow(d);
            let back = k.frobenius_q(k.frobenius_q(a, q).unwrap(), p.pow(k.m() - d)).unwrap();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn trace_is_linear(a in 0u32..16, b in 0u32..16, c in 0u32..4) {
        let f4 = mk_field(2, 2, None).unwrap();
        let f16 = mk_field(2, 4, None).unwrap();
        let t = FieldTower::new(&f4, &f16).unwrap();
        let (a, b, c) = (Fe(a), Fe(b), Fe(c));
        let lhs = t.trace_to_base(f16.add(a, f16.mul(t.embed(c), b)));
        let rhs = f4.add(t.trace_to_base(a), f4.mul(c, t.trace_to_base(b)));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(t.from_base_coords(&t.to_base_coords(a)), a);
    }
}
