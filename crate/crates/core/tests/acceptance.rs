mod common;

use std::sync::Arc;

use cartier_core::agc::{
    self, bound_dim_thm_b, bound_stichtenoth, cartier_code, check_bounds, check_cartier_goppa, check_codim_theorem,
    check_example_goppa, params, subfield_code, AgInstance,
};
use cartier_core::cartier::CartierCtx;
use cartier_core::curve::{Curve, Differential, Divisor, FuncElem, Place};
use cartier_core::ff::{Fe, FieldTower};
use cartier_core::goppa::{check_goppa_identity, random_instance};
use cartier_core::klein;
use cartier_core::text::parse_curve;
use common::{line, random_fn, random_line_ratio, random_nonconstant, tower};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Items known to disagree with the published example; see the project notes.
const KNOWN_DEVIATIONS: &[&str] = &["C_Omega(D,G0-G-)|F_2"];

struct Item {
    name: String,
    ok: bool,
    detail: String,
}

#[derive(Default)]
struct Criterion {
    items: Vec<Item>,
}

impl Criterion {
    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.items.push(Item { name: name.into(), ok, detail: detail.into() });
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, got: T, want: T) {
        let ok = got == want;
        self.check(name, ok, format!("got {got:?}, expected {want:?}"));
    }

    fn count(&mut self, name: &str, cases: usize, failures: usize, min: usize) {
        self.check(name, failures == 0 && cases >= min, format!("{cases} cases, {failures} failures"));
    }

    /// Prints the criterion line and returns the unexpected outcomes.
    fn report(&self, n: u32, title: &str) -> Vec<String> {
        let failed: Vec<&Item> = self.items.iter().filter(|i| !i.ok).collect();
        if failed.is_empty() {
            println!("criterion {n} PASS: {title} ({} checks)", self.items.len());
        } else {
            let parts: Vec<String> = failed.iter().map(|i| format!("{}: {}", i.name, i.detail)).collect();
            println!("criterion {n} FAIL: {title}; {}", parts.join("; "));
        }
        let mut bad = Vec::new();
        for i in &self.items {
            let known = KNOWN_DEVIATIONS.contains(&i.name.as_str());
            if i.ok == known {
                bad.push(format!("criterion {n}, {}: {}", i.name, i.detail));
            }
        }
        bad
    }
}

fn klein_instance(s: &klein::KleinSetup, g: &Divisor) -> AgInstance {
    let t = Arc::new(FieldTower::new(&cartier_core::ff::mk_field(2, 1, None).unwrap(), s.curve.field()).unwrap());
    let d: Vec<Place> = s.d.support().cloned().collect();
    AgInstance::new(&s.curve, d, g.clone(), t).unwrap()
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::default();
    let s = klein::setup().unwrap();
    let k = &s.curve;
    let g1 = s.g0.sub(&s.g_minus);
    let g2 = s.g0.scale(2).sub(&s.g_minus);
    c.eq("rational points", k.rational_points().unwrap().len(), 24);
    c.eq("n", s.d.support_size(), 21);
    c.eq("h1(G0-G-)", k.h1(&g1).unwrap(), 0);
    c.eq("h1(-G-)", k.h1(&s.g_minus.neg()).unwrap(), 5);
    let a = klein_instance(&s, &g1);
    let b = klein_instance(&s, &g2);
    let budget = 1 << 18;
    let car_a = cartier_code(&a).unwrap();
    let sub_a = subfield_code(&a).unwrap();
    let car_b = cartier_code(&b).unwrap();
    let sub_b = subfield_code(&b).unwrap();
    c.eq("Car_2(D,G0-G-)", params(&car_a, budget), "[21, 6, 8]_2".into());
    c.eq("C_Omega(D,G0-G-)|F_2", params(&sub_a, budget), "[21, 18, 2]_2".into());
    c.eq("Car_2(D,2G0-G-)", params(&car_b, budget), "[21, 6, 8]_2".into());
    c.eq("C_Omega(D,2G0-G-)|F_2", params(&sub_b, budget), "[21, 6, 8]_2".into());
    let codim = sub_a.k() as i64 - car_a.k() as i64;
    c.eq("codimension", codim, 12);
    c.check("codimension bound", codim <= 15, format!("{codim} <= 15"));
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let towers = [tower(2, 2, 1), tower(2, 3, 1)];
    let (mut cases, mut fails) = (0, 0);
    for i in 0..24 {
        let t = &towers[i % 2];
        let inst = random_instance(t, &mut rng, 16, 3).unwrap();
        let r = check_goppa_identity(&inst, Some(1 << 20)).unwrap();
        let d_ok = r.d.and_then(|d| d.exact()).is_none_or(|d| d as i64 >= r.designed_distance);
        let ok = inst.n() <= 16 && r.holds && r.k_lhs as i64 >= r.dimension_bound && d_ok;
        cases += 1;
        fails += (!ok) as usize;
    }
    c.count("Gamma(L,f^(q-1)) = Gamma(L,f^q) with k and d bounds", cases, fails, 20);
    c
}

fn criterion_3() -> (Criterion, Vec<AgInstance>) {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let towers = [tower(2, 2, 1), tower(2, 3, 1), tower(2, 4, 2)];
    let mut built = Vec::new();
    let (mut n1, mut f1, mut n2, mut f2) = (0, 0, 0, 0);
    for i in 0..12 {
        let t = &towers[i % 3];
        let inst = random_instance(t, &mut rng, 12, 2).unwrap();
        n1 += 1;
        f1 += (!check_example_goppa(&inst).unwrap().holds()) as usize;
        n2 += 1;
        f2 += (!check_cartier_goppa(&inst).unwrap().holds()) as usize;
        let (line, d, e, inf) = agc::line_setup(&inst).unwrap();
        let q = t.q() as i64;
        let g = e.scale(q - 1).sub(&Divisor::single(inf, 1));
        built.push(AgInstance::new(&line, d, g, t.clone()).unwrap());
    }
    c.count("Gamma_q(L,f) = C_Omega(D,E-P)|F_q", n1, f1, 10);
    c.count("Car_q(D,(q-1)E-P) = Gamma_q(L,f^(q-1))", n2, f2, 10);
    (c, built)
}

struct Tally {
    cases: usize,
    fails: usize,
}

impl Tally {
    fn new() -> Tally {
        Tally { cases: 0, fails: 0 }
    }

    fn add(&mut self, ok: bool) {
        self.cases += 1;
        self.fails += (!ok) as usize;
    }
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let klein = klein::klein_quartic().unwrap();
    let curves = [line(2, 3), klein.clone()];
    let (mut semi, mut exact, mut log, mut res) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    let (mut v_pos, mut v_low, mut v_one, mut floor) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for cv in &curves {
        let cx = CartierCtx::new(cv, tower(2, 3, 1)).unwrap();
        let pts = cv.rational_points().unwrap();
        for _ in 0..50 {
            let h = random_fn(cv, &mut rng);
            let w = Differential::new(random_fn(cv, &mut rng));
            let cw = cx.cartier(&w).unwrap();
            semi.add(cx.cartier(&w.mul_func(&h.pow(2).unwrap())).unwrap() == cw.mul_func(&h));
            let h = random_nonconstant(cv, &mut rng);
            exact.add(cx.cartier(&Differential::exact(&h).unwrap()).unwrap().is_zero());
            let l = Differential::logarithmic(&h).unwrap();
            log.add(cx.cartier(&l).unwrap() == l);
        }
        // Engineered pole orders: u^{-k} η with u vanishing simply at P.
        let x = FuncElem::x(cv);
        for i in 0..60 {
            let p = pts.choose(&mut rng).unwrap().clone();
            if p.coords.last() != Some(&Fe::ONE) {
                continue;
            }
            let u = x.sub(&FuncElem::constant(cv, p.coords[0]));
            let k = (i % 6) as i64;
            let eta = random_line_ratio(cv, &mut rng, 1);
            let w = Differential::new(u.pow(-k).unwrap().mul(&eta));
            let cw = cx.cartier(&w).unwrap();
            let v = cv.valuation_diff(&w, &p).unwrap();
            let vc = if cw.is_zero() { i64::MAX } else { cv.valuation_diff(&cw, &p).unwrap() };
            let r = cv.residue(&w, &p).unwrap();
            res.add(cv.residue(&cw, &p).unwrap() == cv.field().pth_root(r));
            floor.add(vc >= v.div_euclid(2));
            match v {
                v if v >= 0 => v_pos.add(vc >= 0),
                -1 => v_one.add(vc == -1),
                _ => v_low.add(vc > v),
            }
        }
    }
    // C_q with q = 4 on F_16/F_4.
    let l16 = line(2, 4);
    let cx4 = CartierCtx::new(&l16, tower(2, 4, 2)).unwrap();
    for cv in [&l16] {
        let pts = cv.rational_points().unwrap();
        for _ in 0..40 {
            let w = Differential::new(random_fn(cv, &mut rng));
            let cw = cx4.cartier_q(&w).unwrap();
            let p = pts.choose(&mut rng).unwrap();
            let v = cv.valuation_diff(&w, p).unwrap();
            let vc = if cw.is_zero() { i64::MAX } else { cv.valuation_diff(&cw, p).unwrap() };
            floor.add(vc >= v.div_euclid(4));
            res.add(cv.residue(&cw, p).unwrap() == cv.field().qth_root(cv.residue(&w, p).unwrap(), 4));
        }
    }
    c.count("C(h^p w) = h C(w)", semi.cases, semi.fails, 100);
    c.count("C(dh) = 0", exact.cases, exact.fails, 100);
    c.count("C(dh/h) = dh/h", log.cases, log.fails, 100);
    c.count("res(Cw) = res(w)^(1/p)", res.cases, res.fails, 100);
    c.count("v >= 0 => v(Cw) >= 0", v_pos.cases, v_pos.fails, 10);
    c.count("v <= -2 => v(Cw) > v", v_low.cases, v_low.fails, 10);
    c.count("v = -1 => v(Cw) = -1", v_one.cases, v_one.fails, 10);
    c.check(
        "valuation implications total",
        v_pos.cases + v_low.cases + v_one.cases >= 100,
        format!("{} cases", v_pos.cases + v_low.cases + v_one.cases),
    );
    c.count("v(C_q w) >= floor(v(w)/q)", floor.cases, floor.fails, 100);

    // Vanishing theorem and snake commutativity on computed fixed spaces.
    let s = klein::setup().unwrap();
    let mut spaces: Vec<(CartierCtx, Divisor, Divisor, Vec<Place>)> = Vec::new();
    let kt = tower(2, 3, 1);
    for g in [s.g0.sub(&s.g_minus), s.g0.scale(2).sub(&s.g_minus)] {
        let places: Vec<Place> = s.d.support().chain(&s.p).chain(&s.r).cloned().collect();
        spaces.push((CartierCtx::new(&s.curve, kt.clone()).unwrap(), g, s.d.clone(), places));
    }
    for (m, base) in [(3, 1), (4, 2)] {
        let t = tower(2, m, base);
        let cv = Curve::projective_line(t.ext());
        let mut pts = cv.rational_points().unwrap();
        pts.shuffle(&mut rng);
        let q = t.q() as i64;
        let g = Divisor::from_pairs([(pts[0].clone(), q - 1), (pts[1].clone(), 2 * q - 1), (pts[2].clone(), -1)]);
        let d = Divisor::sum_of(&pts[3..]);
        spaces.push((CartierCtx::new(&cv, t).unwrap(), g, d, pts));
    }
    let (mut van, mut snake) = (Tally::new(), Tally::new());
    for (cx, g, d, places) in &spaces {
        let cv = cx.curve().clone();
        let fs = cx.fixed_space(g, d).unwrap();
        let base = cx.tower().base().clone();
        let mut forms = fs.basis.clone();
        for _ in 0..20 {
            let mut acc = Differential::new(FuncElem::zero(&cv));
            for w in &fs.basis {
                acc = acc.add(&w.scale(cx.tower().embed(Fe(rng.gen_range(0..base.size())))));
            }
            if !acc.is_zero() {
                forms.push(acc);
            }
        }
        for w in &forms {
            for p in places.iter().take(12) {
                for sv in 1..=2 {
                    van.add(cx.check_vanishing(w, p, sv).unwrap());
                }
            }
        }
        let dpts: Vec<Place> = d.support().cloned().collect();
        let omegas = cv.omega_basis(&g.sub(d)).unwrap();
        let k = cv.field().clone();
        for _ in 0..10 {
            let mut w = Differential::new(FuncElem::zero(&cv));
            for o in &omegas {
                w = w.add(&o.scale(Fe(rng.gen_range(0..k.size()))));
            }
            let cw = cx.cartier_q(&w).unwrap();
            let lhs: Vec<Fe> = dpts.iter().map(|p| cv.residue_rational(&cw, p).unwrap()).collect();
            let rhs: Vec<Fe> =
                dpts.iter().map(|p| k.qth_root(cv.residue_rational(&w, p).unwrap(), cx.q())).collect();
            snake.add(lhs == rhs);
        }
    }
    c.count("vanishing theorem on fixed forms", van.cases, van.fails, 100);
    c.count("res_D C_q = phi^-1 res_D", snake.cases, snake.fails, 20);
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let curves = [
        line(2, 3),
        klein::klein_quartic().unwrap(),
        parse_curve("curve field=field p=3 m=1 poly=y^2*z - x^3 + x*z^2").unwrap(),
    ];
    let (mut rr, mut degs, mut kdeg, mut restm) = (Tally::new(), Tally::new(), Tally::new(), Tally::new());
    for cv in &curves {
        let g = cv.genus() as i64;
        let mut pool = cv.rational_points().unwrap();
        pool.extend(cv.places_of_degree(2).unwrap().into_iter().take(8));
        for _ in 0..50 {
            let mut dv = Divisor::zero();
            for _ in 0..rng.gen_range(1..5) {
                dv.add_at(pool.choose(&mut rng).unwrap().clone(), rng.gen_range(-3..=3));
            }
            let lhs = cv.h0(&dv).unwrap() as i64 - cv.h1(&dv).unwrap() as i64;
            rr.add(lhs == dv.degree() + 1 - g);
        }
        for _ in 0..10 {
            let h = random_line_ratio(cv, &mut rng, 2);
            degs.add(cv.divisor_of(&h).unwrap().degree() == 0);
        }
        kdeg.add(cv.canonical_divisor().unwrap().degree() == 2 * g - 2);
        let k = cv.field().clone();
        for _ in 0..10 {
            let h = random_line_ratio(cv, &mut rng, 1);
            let w = Differential::new(h.mul(&random_line_ratio(cv, &mut rng, 1)));
            let div = cv.divisor_of_diff(&w).unwrap();
            let mut sum = Fe::ZERO;
            for (p, &n) in div.iter() {
                if n < 0 {
                    let t = cv.tower(p.deg).unwrap();
                    sum = k.add(sum, t.trace_to_base(cv.residue(&w, p).unwrap()));
                }
            }
            restm.add(sum.is_zero());
        }
    }
    c.count("h0 - h1 = deg + 1 - g", rr.cases, rr.fails, 150);
    c.count("deg div(h) = 0", degs.cases, degs.fails, 30);
    c.count("deg K = 2g - 2", kdeg.cases, kdeg.fails, 3);
    c.eq("deg K on the Klein quartic", klein::klein_quartic().unwrap().canonical_divisor().unwrap().degree(), 4);
    c.count("sum of residues = 0", restm.cases, restm.fails, 30);
    c.eq("Klein rational points", klein::klein_quartic().unwrap().rational_points().unwrap().len(), 24);
    c
}

fn criterion_6(line_instances: &[AgInstance]) -> Criterion {
    let mut c = Criterion::default();
    let s = klein::setup().unwrap();
    let g1 = s.g0.sub(&s.g_minus);
    let g2 = s.g0.scale(2).sub(&s.g_minus);
    let a = klein_instance(&s, &g1);
    let b = klein_instance(&s, &g2);
    let mut reports = vec![
        check_bounds(&a, Some(&s.g_minus.neg())).unwrap(),
        check_bounds(&b, Some(&g1)).unwrap(),
        check_codim_theorem(&a, &s.g_minus.neg()).unwrap(),
        check_codim_theorem(&b, &g1).unwrap(),
    ];
    for inst in line_instances {
        let g1 = inst.g.floor_div(inst.q());
        reports.push(check_bounds(inst, Some(&g1)).unwrap());
    }
    // G = qG0 - G⁻ on the line with h¹(G0 − G⁻) = 0.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut improvement = Tally::new();
    for (m, base) in [(3, 1), (4, 2), (4, 1)] {
        let t = tower(2, m, base);
        let cv = Curve::projective_line(t.ext());
        for _ in 0..3 {
            let mut pts = cv.rational_points().unwrap();
            pts.shuffle(&mut rng);
            let q = t.q() as i64;
            let g0 = Divisor::sum_of(&pts[..3]);
            let gm = Divisor::sum_of(&pts[3..5]);
            let inst = AgInstance::new(&cv, pts[5..].to_vec(), g0.scale(q).sub(&gm), t.clone()).unwrap();
            let g1 = g0.sub(&gm);
            reports.push(check_bounds(&inst, Some(&g1)).unwrap());
            if cv.h1(&g1).unwrap() == 0 {
                let diff = bound_dim_thm_b(&inst).unwrap() - bound_stichtenoth(&inst, &g1).unwrap();
                improvement.add(diff == gm.support_size() as i64 - 1);
            }
        }
    }
    let failing: Vec<String> = reports.iter().filter(|r| !r.holds()).map(|r| r.to_text()).collect();
    c.check("all bounds on all instances", failing.is_empty(), format!("{} reports, failing: {failing:?}", reports.len()));
    c.count("thm B - Stichtenoth = s - 1", improvement.cases, improvement.fails, 5);
    c.eq("thm B on the example", bound_dim_thm_b(&b).unwrap(), 5);
    c.eq("Stichtenoth on the example", bound_stichtenoth(&b, &g1).unwrap(), 3);
    c.eq("actual dimension", subfield_code(&b).unwrap().k(), 6);
    c
}

fn main() {
    let mut bad = Vec::new();
    bad.extend(criterion_1().report(1, "Klein quartic reproduction"));
    bad.extend(criterion_2().report(2, "Goppa doubling identity"));
    let (c3, line_instances) = criterion_3();
    bad.extend(c3.report(3, "genus-0 cross-oracles"));
    bad.extend(criterion_4().report(4, "Cartier property suite"));
    bad.extend(criterion_5().report(5, "geometry self-consistency"));
    bad.extend(criterion_6(&line_instances).report(6, "bound suite"));
    if !bad.is_empty() {
        eprintln!("unexpected outcomes:\n{}", bad.join("\n"));
        std::process::exit(1);
    }
    println!("acceptance: only known deviations");
}
