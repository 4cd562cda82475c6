use cartier_core::ff::{mk_field, Fe, Field};
use cartier_core::polymat::{LaurentSeries, Matrix, Poly};
use proptest::prelude::*;

fn f2() -> Field {
    mk_field(2, 1, None).unwrap()
}

fn p(k: &Field, c: &[i64]) -> Poly {
    Poly::from_ints(k, c)
}

/// Every monic polynomial of degree `d` over `k`.
fn monics(k: &Field, d: usize) -> Vec<Poly> {
    let q = k.size() as usize;
    (0..q.pow(d as u32))
        .map(|mut idx| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(Fe((idx % q) as u32));
                idx /= q;
            }
            c.push(Fe::ONE);
            Poly::new(k, c)
        })
        .collect()
}

fn divides(a: &Poly, b: &Poly) -> bool {
    b.rem(a).unwrap().is_zero()
}

/// Trial division by squares of all monic polynomials of degree at most deg/2.
fn squarefree_by_search(f: &Poly) -> bool {
    let k = f.field();
    (1..=(f.deg() as usize) / 2).all(|d| monics(k, d).iter().all(|g| !divides(&g.mul(g), f)))
}

fn irreducible_by_search(f: &Poly) -> bool {
    let k = f.field();
    (1..=(f.deg() as usize) / 2).all(|d| monics(k, d).iter().all(|g| !divides(g, f)))
}

#[test]
fn gcd_examples() {
    let k = f2();
    assert_eq!(p(&k, &[1, 0, 1]).gcd(&p(&k, &[1, 1])).unwrap(), p(&k, &[1, 1]));
    let f4 = mk_field(2, 2, None).unwrap();
    let a = Poly::new(&f4, vec![Fe(2), Fe(3)]);
    assert_eq!(a.gcd(&Poly::zero(&f4)).unwrap(), a.monic());
    assert!(a.gcd(&Poly::zero(&f4)).unwrap().lc() == Fe::ONE);
    assert!(p(&k, &[0, 1]).gcd(&p(&k, &[1, 1])).unwrap().is_one());
}

#[test]
fn squarefree_examples() {
    let k = f2();
    assert!(p(&k, &[0, 1, 1]).is_squarefree().unwrap());
    assert!(!p(&k, &[0, 0, 1]).is_squarefree().unwrap());
    assert!(!p(&k, &[1, 0, 1]).is_squarefree().unwrap());
    assert!(Poly::zero(&k).is_squarefree().is_err());
}

#[test]
fn irreducible_examples() {
    let k = f2();
    assert!(p(&k, &[1, 1, 0, 1]).is_irreducible().unwrap());
    assert!(!p(&k, &[1, 0, 1]).is_irreducible().unwrap());
    for k in [f2(), mk_field(3, 1, None).unwrap(), mk_field(2, 3, None).unwrap()] {
        assert!(Poly::x(&k).is_irreducible().unwrap());
    }
    assert!(Poly::one(&k).is_irreducible().is_err());
}

#[test]
fn irreducibility_agrees_with_trial_division() {
    for (pr, m, maxd) in [(2, 1, 7), (3, 1, 4), (2, 2, 4)] {
        let k = mk_field(pr, m, None).unwrap();
        for d in 1..=maxd {
            for f in monics(&k, d) {
                assert_eq!(f.is_irreducible().unwrap(), irreducible_by_search(&f), "{}", f.format("x"));
                assert_eq!(f.is_squarefree().unwrap(), squarefree_by_search(&f), "{}", f.format("x"));
            }
        }
    }
}

#[test]
fn kernel_examples() {
    let k = f2();
    assert!(Matrix::identity(&k, 3).kernel().is_empty());
    assert_eq!(Matrix::zero(&k, 2, 3).kernel().len(), 3);
    let m = Matrix::from_rows(&k, 2, &[vec![Fe::ONE, Fe::ONE]]).unwrap();
    assert_eq!(m.kernel(), vec![vec![Fe::ONE, Fe::ONE]]);
}

#[test]
fn series_examples() {
    let k = f2();
    let s = LaurentSeries::new(&k, 0, vec![Fe::ONE, Fe::ONE], 4);
    assert_eq!(s.invert().unwrap(), LaurentSeries::new(&k, 0, vec![Fe::ONE; 4], 4));
    let one = LaurentSeries::monomial(&k, -1, 6).mul(&LaurentSeries::monomial(&k, 1, 6));
    assert_eq!(one.val(), 0);
    assert_eq!(one.coeff(0).unwrap(), Fe::ONE);
    let d = LaurentSeries::monomial(&k, 2, 8).derivative();
    assert!(d.is_zero_to_prec());
    assert!(LaurentSeries::zero(&k, 5).invert().is_err());
    assert!(s.compose(&LaurentSeries::constant(&k, Fe::ONE, 4)).is_err());
    // Coefficients beyond the known precision are refused.
    assert!(s.coeff(4).is_err());
}

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2, 1), (2, 2), (2, 3), (3, 1)]).prop_map(|(p, m)| mk_field(p, m, None).unwrap())
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (small_field(), 1usize..6, 1usize..7).prop_flat_map(|(k, r, c)| {
        let s = k.size();
        prop::collection::vec(prop::collection::vec((0..s).prop_map(Fe), c), r)
            .prop_map(move |rows| Matrix::from_rows(&k, c, &rows).unwrap())
    })
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    small_field().prop_flat_map(move |k| {
        let s = k.size();
        prop::collection::vec((0..s).prop_map(Fe), 1..=max_deg + 1).prop_map(move |c| Poly::new(&k, c))
    })
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix()) {
        let ker = m.kernel();
        prop_assert_eq!(m.rank() + ker.len(), m.cols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).iter().all(|a| a.is_zero()));
        }
        let (r, pivots) = m.rref();
        prop_assert_eq!(r.rref().0, r.clone());
        prop_assert_eq!(pivots.len(), m.rank());
    }

    #[test]
    fn squarefree_products(f in poly(3), c in prop::collection::vec(0u32..2, 3)) {
        prop_assume!(f.deg() >= 1);
        let k = f.field().clone();
        prop_assert!(!f.mul(&f).is_squarefree().unwrap());
        let g = Poly::new(&k, c.into_iter().map(Fe).collect());
        prop_assume!(!g.is_zero() && f.gcd(&g).unwrap().is_one());
        let both = f.is_squarefree().unwrap() && g.is_squarefree().unwrap();
        prop_assert_eq!(f.mul(&g).is_squarefree().unwrap(), both);
    }

    #[test]
    fn division_and_gcd(a in poly(6), b in poly(4)) {
        prop_assume!(a.field() == b.field() && !b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.deg() < b.deg());
        let g = a.gcd(&b).unwrap();
        prop_assert!(divides(&g, &a) && divides(&g, &b));
        let (g2, s, t) = a.xgcd(&b);
        prop_assert_eq!(s.mul(&a).add(&t.mul(&b)), g2.clone());
        prop_assert_eq!(g2.monic(), g);
    }

    #[test]
    fn series_inverse_roundtrip(f in small_field(), c in prop::collection::vec(0u32..8, 1..8), v in -3i64..3) {
        let c: Vec<Fe> = c.into_iter().map(|x| Fe(x % f.size())).collect();
        prop_assume!(!c[0].is_zero());
        let n = c.len() as i64;
        let s = LaurentSeries::new(&f, v, c, v + n);
        let back = s.invert().unwrap().invert().unwrap();
        prop_assert_eq!(back.val(), s.val());
        for e in s.val()..back.prec().min(s.prec()) {
            prop_assert_eq!(back.coeff(e).unwrap(), s.coeff(e).unwrap());
        }
        let one = s.mul(&s.invert().unwrap());
        prop_assert_eq!(one.val(), 0);
    }
}
