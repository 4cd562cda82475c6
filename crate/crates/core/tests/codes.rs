use std::sync::Arc;

use cartier_core::codes::{frobenius_code, subfield_params_bound, weight, Distance, LinearCode};
use cartier_core::ff::{mk_field, Fe, Field, FieldTower};
use cartier_core::polymat::Matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f2() -> Field {
    mk_field(2, 1, None).unwrap()
}

fn bits(s: &str) -> Vec<Fe> {
    s.bytes().map(|b| Fe((b - b'0') as u32)).collect()
}

fn all_words(k: &Field, n: usize) -> impl Iterator<Item = Vec<Fe>> + '_ {
    let q = k.size() as usize;
    (0..q.pow(n as u32)).map(move |mut i| {
        (0..n)
            .map(|_| {
                let a = Fe((i % q) as u32);
                i /= q;
                a
            })
            .collect()
    })
}

#[test]
fn construction_examples() {
    let k = f2();
    assert_eq!(LinearCode::from_parity(&Matrix::zero(&k, 1, 4)), LinearCode::full(&k, 4));
    let id = LinearCode::from_generator(&Matrix::identity(&k, 5));
    assert_eq!((id.n(), id.k()), (5, 5));
    assert_eq!(id.min_distance(1 << 10).unwrap(), Distance::Exact(1));
    let even = LinearCode::from_parity(&Matrix::from_rows(&k, 3, &[bits("111")]).unwrap());
    assert_eq!((even.n(), even.k()), (3, 2));
    assert_eq!(even.min_distance(1 << 10).unwrap(), Distance::Exact(2));
    let ws: Vec<Vec<Fe>> = all_words(&k, 3).filter(|w| even.contains(w)).collect();
    assert_eq!(ws.len(), 4);
    assert!(ws.iter().all(|w| weight(w).is_multiple_of(2)));
}

#[test]
fn subfield_subcode_examples() {
    let f4 = mk_field(2, 2, None).unwrap();
    let t = FieldTower::new(&f2(), &f4).unwrap();
    assert_eq!(LinearCode::full(&f4, 3).subfield_subcode(&t).unwrap(), LinearCode::full(&f2(), 3));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let rows: Vec<Vec<Fe>> = (0..3).map(|_| (0..6).map(|_| Fe(rng.gen_range(0..4))).collect()).collect();
        let c = LinearCode::from_rows(&f4, 6, &rows).unwrap();
        let s = c.subfield_subcode(&t).unwrap();
        assert!(s.k() as i64 >= 6 - 2 * (6 - c.k() as i64));
        for r in s.generator().row_vecs() {
            assert!(c.contains(&r.iter().map(|&a| t.embed(a)).collect::<Vec<_>>()));
        }
        assert!(s.embed(&t).unwrap().code_subset(&c).unwrap());
        // Every base-field word of C is found.
        let k2 = f2();
        let found = all_words(&k2, 6).filter(|w| c.contains(&w.iter().map(|&a| t.embed(a)).collect::<Vec<_>>()));
        assert_eq!(found.count(), 1 << s.k());
    }
    assert!(LinearCode::full(&f2(), 3).subfield_subcode(&t).is_err());
}

#[test]
fn containment_examples() {
    let k = f2();
    let even = LinearCode::from_parity(&Matrix::from_rows(&k, 3, &[bits("111")]).unwrap());
    let rep = LinearCode::from_rows(&k, 3, &[bits("111")]).unwrap();
    assert!(even.code_eq(&even).unwrap());
    assert!(LinearCode::zero(&k, 3).code_subset(&rep).unwrap());
    assert!(!rep.code_subset(&even).unwrap());
    assert!(rep.code_eq(&LinearCode::zero(&k, 4)).is_err());
    assert_eq!(LinearCode::zero(&k, 3).min_distance(10).unwrap(), Distance::Undefined);
}

#[test]
fn frobenius_examples() {
    let f4 = mk_field(2, 2, None).unwrap();
    let w = f4.gen();
    assert_eq!(frobenius_code(&f4, &[Fe::ONE; 4], 2).unwrap(), vec![Fe::ONE; 4]);
    assert_eq!(frobenius_code(&f4, &[w, Fe::ZERO], 2).unwrap(), vec![f4.mul(w, w), Fe::ZERO]);
    let f16 = mk_field(2, 4, None).unwrap();
    let t = FieldTower::new(&f4, &f16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let word: Vec<Fe> = (0..4)
            .map(|_| if rng.gen_bool(0.5) { t.embed(Fe(rng.gen_range(0..4))) } else { Fe(rng.gen_range(0..16)) })
            .collect();
        let fixed = frobenius_code(&f16, &word, 4).unwrap() == word;
        assert_eq!(fixed, word.iter().all(|&a| t.try_descend(a).is_some()));
    }
}

#[test]
fn parameter_bounds() {
    assert_eq!(subfield_params_bound(7, 0, 3, 2), (7, 7, 3));
    assert_eq!(subfield_params_bound(10, 2, 3, 3), (10, 4, 3));
    assert_eq!(subfield_params_bound(4, 3, 4, 2), (4, 0, 4));
}

#[test]
fn budget_and_text() {
    let k = mk_field(2, 3, None).unwrap();
    let c = LinearCode::full(&k, 8);
    assert!(c.min_distance(1000).is_err());
    assert_eq!(c.min_distance_or_sample(1000, 10, 1), Distance::SampledUpperBound(1));
    let rep = LinearCode::from_rows(&f2(), 3, &[bits("111")]).unwrap();
    assert_eq!(rep.to_bits().unwrap(), "code q=2 n=3 k=1\n111\n");
    assert_eq!(rep.to_text(), "field p=2 m=1 modulus=0,1 gen=w\ncode q=2 n=3 k=1\n1 1 1\n");
    assert!(LinearCode::full(&k, 2).to_bits().is_err());
}

fn random_code() -> impl Strategy<Value = (Field, usize, Vec<Vec<u32>>)> {
    (prop::sample::select(vec![(2u32, 1u32), (2, 2), (3, 1)]), 1usize..7, 0usize..5).prop_flat_map(|((p, m), n, k)| {
        let f = mk_field(p, m, None).unwrap();
        let s = f.size();
        (Just(f), Just(n), prop::collection::vec(prop::collection::vec(0..s, n), k))
    })
}

fn build(f: &Field, n: usize, rows: &[Vec<u32>]) -> LinearCode {
    let rows: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&a| Fe(a)).collect()).collect();
    LinearCode::from_rows(f, n, &rows).unwrap()
}

proptest! {
    #[test]
    fn distance_matches_exhaustive_count((f, n, rows) in random_code()) {
        let c = build(&f, n, &rows);
        let brute = all_words(&f, n).filter(|w| c.contains(w)).map(|w| weight(&w)).filter(|&w| w > 0).min();
        match brute {
            None => prop_assert_eq!(c.min_distance(1 << 12).unwrap(), Distance::Undefined),
            Some(d) => prop_assert_eq!(c.min_distance(1 << 12).unwrap(), Distance::Exact(d)),
        }
        let count = all_words(&f, n).filter(|w| c.contains(w)).count();
        prop_assert_eq!(count, (f.size() as usize).pow(c.k() as u32));
    }

    #[test]
    fn canonical_form_is_an_identity((f, n, rows) in random_code(), perm in any::<u64>()) {
        let a = build(&f, n, &rows);
        let mut shuffled = rows.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(perm);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        // Add a combination of rows as an extra redundant generator.
        if rows.len() >= 2 {
            let extra: Vec<u32> = rows[0].iter().zip(&rows[1]).map(|(&x, &y)| f.add(Fe(x), Fe(y)).0).collect();
            shuffled.push(extra);
        }
        let b = build(&f, n, &shuffled);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.code_eq(&b).unwrap() && a.code_subset(&b).unwrap());
        prop_assert_eq!(LinearCode::from_generator(a.generator()), a.clone());
        prop_assert_eq!(LinearCode::from_parity(&a.parity()), a);
    }

    #[test]
    fn subfield_subcode_parameters(rows in prop::collection::vec(prop::collection::vec(0u32..16, 5), 0..5)) {
        let f4 = mk_field(2, 2, None).unwrap();
        let f16 = mk_field(2, 4, None).unwrap();
        let t = Arc::new(FieldTower::new(&f4, &f16).unwrap());
        let c = build(&f16, 5, &rows);
        let s = c.subfield_subcode(&t).unwrap();
        let (_, kmin, _) = subfield_params_bound(5, (5 - c.k()) as u64, 0, 2);
        prop_assert!(s.k() as u64 >= kmin);
        prop_assert!(s.embed(&t).unwrap().code_subset(&c).unwrap());
        if let (Ok(Distance::Exact(ds)), Ok(Distance::Exact(dc))) = (s.min_distance(1 << 12), c.min_distance(1 << 20)) {
            prop_assert!(ds >= dc);
        }
    }
}
