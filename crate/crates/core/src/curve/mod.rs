//! Smooth projective plane curves and the projective line: places, local
//! expansions, valuations, residues, Riemann–Roch spaces and differentials.

pub mod divisor;
pub mod func;
pub mod mpoly;
mod smooth;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub use divisor::{Divisor, Place};
pub use func::{Differential, FuncElem};
pub use mpoly::{monomials_of_degree, MPoly, Mono};

use crate::error::{Error, Result};
use crate::ff::{Fe, Field, FieldTower, MAX_FIELD_SIZE};
use crate::polymat::{resultant_y, LaurentSeries, Matrix, Poly};

/// Largest series precision attempted before giving up.
pub const MAX_PREC: i64 = 4096;

const START_PREC: i64 = 8;

struct Plane {
    form: MPoly,
    degree: u32,
    partials: [MPoly; 3],
}

struct Inner {
    field: Field,
    plane: Option<Plane>,
    y_coeffs: Vec<Poly>,
    towers: Mutex<BTreeMap<u32, Arc<FieldTower>>>,
    expansions: Mutex<HashMap<Place, Arc<[LaurentSeries; 3]>>>,
    infinity: OnceLock<Vec<Place>>,
    canonical: OnceLock<Divisor>,
}

/// A smooth projective plane curve `F(X, Y, Z) = 0`, or the projective line.
///
/// Cheap to clone; caches (residue fields, expansions) are shared.
#[derive(Clone)]
pub struct Curve(Arc<Inner>);

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({})", self.format())
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

impl Curve {
    fn build(field: &Field, plane: Option<Plane>, y_coeffs: Vec<Poly>) -> Curve {
        Curve(Arc::new(Inner {
            field: field.clone(),
            plane,
            y_coeffs,
            towers: Mutex::new(BTreeMap::new()),
            expansions: Mutex::new(HashMap::new()),
            infinity: OnceLock::new(),
            canonical: OnceLock::new(),
        }))
    }

    /// `P^1` over `field`, with function field `K(x)`.
    pub fn projective_line(field: &Field) -> Curve {
        Curve::build(field, None, vec![Poly::zero(field), Poly::one(field)])
    }

    /// The plane curve cut out by a homogeneous `form`. A linear form gives
    /// the projective line.
    pub fn plane(form: MPoly) -> Result<Curve> {
        let k = form.field().clone();
        if form.is_zero() || !form.is_homogeneous() {
            return Err(Error::InvalidCurve("equation must be a nonzero homogeneous form".into()));
        }
        let d = form.total_degree();
        if d == 0 {
            return Err(Error::InvalidCurve("constant equation".into()));
        }
        if d == 1 {
            return Ok(Curve::projective_line(&k));
        }
        let y_coeffs = form.dehomogenize(2);
        if y_coeffs.len() < 2 {
            return Err(Error::InvalidCurve("equation must involve y".into()));
        }
        if form.partial(1).is_zero() {
            return Err(Error::InvalidCurve("x is not a separating variable (F_Y = 0)".into()));
        }
        smooth::check_nonsingular(&k, &form)?;
        let partials = [form.partial(0), form.partial(1), form.partial(2)];
        Ok(Curve::build(&k, Some(Plane { form, degree: d as u32, partials }), y_coeffs))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn is_line(&self) -> bool {
        self.0.plane.is_none()
    }

    pub fn same(&self, o: &Curve) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
    }

    /// The defining form; `None` for the projective line.
    pub fn form(&self) -> Option<&MPoly> {
        self.0.plane.as_ref().map(|p| &p.form)
    }

    /// Plane degree `d` (1 for the line).
    pub fn degree(&self) -> u32 {
        self.0.plane.as_ref().map_or(1, |p| p.degree)
    }

    pub fn genus(&self) -> u32 {
        let d = self.degree();
        if d < 3 {
            0
        } else {
            (d - 1) * (d - 2) / 2
        }
    }

    /// `f(x, y) = Σ f_j(x) y^j`, the affine equation as a list in `y`.
    pub fn y_coeffs(&self) -> &[Poly] {
        &self.0.y_coeffs
    }

    /// `[K(C) : K(x)]`.
    pub fn y_degree(&self) -> usize {
        self.0.y_coeffs.len() - 1
    }

    /// `∂f/∂x` as a function on the curve.
    pub fn f_x(&self) -> FuncElem {
        match &self.0.plane {
            None => FuncElem::zero(self),
            Some(p) => FuncElem::from_mpoly(self, &p.partials[0]),
        }
    }

    /// `∂f/∂y` as a function on the curve.
    pub fn f_y(&self) -> FuncElem {
        match &self.0.plane {
            None => FuncElem::one(self),
            Some(p) => FuncElem::from_mpoly(self, &p.partials[1]),
        }
    }

    pub fn format(&self) -> String {
        match &self.0.plane {
            None => "P1".into(),
            Some(p) => p.form.format(),
        }
    }

    /// `K ⊂ E_r`, the residue field of degree-`r` places.
    pub fn tower(&self, r: u32) -> Result<Arc<FieldTower>> {
        if let Some(t) = self.0.towers.lock().expect("tower cache").get(&r) {
            return Ok(t.clone());
        }
        let k = &self.0.field;
        let t = if r == 1 {
            FieldTower::new(k, k)?
        } else {
            let size = (k.size() as u64).checked_pow(r);
            if size.is_none_or(|s| s > MAX_FIELD_SIZE) {
                return Err(Error::SizeCap(format!(
                    "residue field F_{}^{} exceeds the 2^20 cap",
                    k.size(),
                    r
                )));
            }
            let e = Field::new(k.p(), k.m() * r, None, "u")?;
            FieldTower::new(k, &e)?
        };
        let t = Arc::new(t);
        self.0.towers.lock().expect("tower cache").insert(r, t.clone());
        Ok(t)
    }

    pub fn residue_field(&self, p: &Place) -> Result<Field> {
        Ok(self.tower(p.deg)?.ext().clone())
    }

    /// Place coordinates padded to `(X, Y, Z)`; the line's `(a:b)` becomes `(a:0:b)`.
    fn point3(&self, p: &Place) -> [Fe; 3] {
        if self.is_line() {
            [p.coords[0], Fe::ZERO, p.coords[1]]
        } else {
            [p.coords[0], p.coords[1], p.coords[2]]
        }
    }

    /// The place of the Frobenius orbit of a point with coordinates in
    /// `E_r`, or `None` when the orbit is smaller than `r`.
    pub fn place_of_point(&self, r: u32, coords: &[Fe]) -> Result<Option<Place>> {
        let t = self.tower(r)?;
        let e = t.ext();
        let Some(last) = coords.iter().rposition(|c| !c.is_zero()) else {
            return Err(Error::InvalidInstance("zero projective point".into()));
        };
        let inv = e.inv(coords[last])?;
        let mut cur: Vec<Fe> = coords.iter().map(|&c| e.mul(c, inv)).collect();
        let first = cur.clone();
        let mut best = cur.clone();
        let q = self.0.field.size() as u64;
        let mut size = 0u32;
        loop {
            size += 1;
            cur = cur.iter().map(|&c| e.pow(c, q)).collect();
            if cur == first {
                break;
            }
            if cur < best {
                best = cur.clone();
            }
        }
        Ok((size == r).then(|| Place::new(r, best)))
    }

    /// Whether the `E_r`-point lies on the curve.
    pub fn contains_point(&self, r: u32, coords: &[Fe]) -> Result<bool> {
        let t = self.tower(r)?;
        match &self.0.plane {
            None => Ok(coords.len() == 2 && coords.iter().any(|c| !c.is_zero())),
            Some(p) => {
                if coords.len() != 3 {
                    return Ok(false);
                }
                let pt = [coords[0], coords[1], coords[2]];
                Ok(pt.iter().any(|c| !c.is_zero()) && p.form.eval_in(t.ext(), |a| t.embed(a), &pt).is_zero())
            }
        }
    }

    /// A degree-one place from a `K`-rational point.
    pub fn rational_place(&self, coords: &[Fe]) -> Result<Place> {
        if !self.contains_point(1, coords)? {
            return Err(Error::InvalidInstance("point is not on the curve".into()));
        }
        Ok(self.place_of_point(1, coords)?.expect("rational point"))
    }

    /// Places at `Z = 0`, sorted.
    pub fn infinity_places(&self) -> Result<Vec<Place>> {
        if let Some(v) = self.0.infinity.get() {
            return Ok(v.clone());
        }
        let k = &self.0.field;
        let mut out = BTreeSet::new();
        match &self.0.plane {
            None => {
                out.insert(Place::new(1, vec![Fe::ONE, Fe::ZERO]));
            }
            Some(p) => {
                let d = p.degree;
                let at = Poly::new(k, (0..=d).map(|a| p.form.coeff([a, d - a, 0])).collect());
                for m in at.irreducible_factors()? {
                    let r = m.deg() as u32;
                    let t = self.tower(r)?;
                    let a = m.embed(&t).roots()?[0];
                    out.insert(self.place_of_point(r, &[a, Fe::ONE, Fe::ZERO])?.expect("root of irreducible"));
                }
                if p.form.coeff([d, 0, 0]).is_zero() {
                    out.insert(Place::new(1, vec![Fe::ONE, Fe::ZERO, Fe::ZERO]));
                }
            }
        }
        let v: Vec<Place> = out.into_iter().collect();
        let _ = self.0.infinity.set(v.clone());
        Ok(v)
    }

    /// `f(a, y)` over `E_r` for `a ∈ E_r`.
    fn fiber_poly(&self, t: &FieldTower, a: Fe) -> Poly {
        let e = t.ext();
        Poly::new(e, self.0.y_coeffs.iter().map(|c| c.embed(t).eval(a)).collect())
    }

    /// Degree-one places, sorted.
    pub fn rational_points(&self) -> Result<Vec<Place>> {
        let k = &self.0.field;
        let mut out = BTreeSet::new();
        if self.is_line() {
            for a in k.elements() {
                out.insert(Place::new(1, vec![a, Fe::ONE]));
            }
        } else {
            let t = self.tower(1)?;
            for a in k.elements() {
                for b in self.fiber_poly(&t, a).roots()? {
                    out.insert(Place::new(1, vec![a, b, Fe::ONE]));
                }
            }
        }
        out.extend(self.infinity_places()?.into_iter().filter(|p| p.deg == 1));
        Ok(out.into_iter().collect())
    }

    /// All places of degree exactly `r`, sorted.
    pub fn places_of_degree(&self, r: u32) -> Result<Vec<Place>> {
        if r == 0 {
            return Ok(Vec::new());
        }
        if r == 1 {
            return self.rational_points();
        }
        let t = self.tower(r)?;
        let e = t.ext().clone();
        let mut out = BTreeSet::new();
        for a in e.elements() {
            if self.is_line() {
                if let Some(p) = self.place_of_point(r, &[a, Fe::ONE])? {
                    out.insert(p);
                }
                continue;
            }
            for b in self.fiber_poly(&t, a).roots()? {
                if let Some(p) = self.place_of_point(r, &[a, b, Fe::ONE])? {
                    out.insert(p);
                }
            }
        }
        out.extend(self.infinity_places()?.into_iter().filter(|p| p.deg == r));
        Ok(out.into_iter().collect())
    }

    /// Finite places whose `x`-coordinate is a root of `g`, sorted.
    pub fn places_over_x(&self, g: &Poly) -> Result<Vec<Place>> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out = BTreeSet::new();
        if g.is_constant() {
            return Ok(Vec::new());
        }
        for m in g.irreducible_factors()? {
            let r = m.deg() as u32;
            let t = self.tower(r)?;
            let alpha = m.embed(&t).roots()?[0];
            if self.is_line() {
                out.insert(self.place_of_point(r, &[alpha, Fe::ONE])?.expect("root of irreducible"));
                continue;
            }
            let h = self.fiber_poly(&t, alpha);
            if h.is_zero() {
                return Err(Error::Internal("vertical line inside the curve".into()));
            }
            let count = if h.is_constant() { 0 } else { h.radical()?.deg() as u32 };
            let needed = r * count;
            let mut here: BTreeSet<Place> = BTreeSet::new();
            let mut s = 1;
            while here.iter().map(|p| p.deg).sum::<u32>() < needed {
                if s > count {
                    return Err(Error::Internal("place search did not close up".into()));
                }
                let big = r * s;
                let tb = self.tower(big)?;
                for a in m.embed(&tb).roots()? {
                    for b in self.fiber_poly(&tb, a).roots()? {
                        if let Some(p) = self.place_of_point(big, &[a, b, Fe::ONE])? {
                            here.insert(p);
                        }
                    }
                }
                s += 1;
            }
            out.extend(here);
        }
        Ok(out.into_iter().collect())
    }

    /// The unique place of degree at most 4 where all `gens` vanish.
    pub fn place_from_ideal(&self, gens: &[MPoly]) -> Result<Place> {
        for r in 1..=4u32 {
            let Ok(t) = self.tower(r) else { break };
            let hits: Vec<Place> = self
                .places_of_degree(r)?
                .into_iter()
                .filter(|p| {
                    let pt = self.point3(p);
                    gens.iter().all(|g| g.eval_in(t.ext(), |a| t.embed(a), &pt).is_zero())
                })
                .collect();
            match hits.len() {
                0 => continue,
                1 => return Ok(hits.into_iter().next().expect("one")),
                _ => return Err(Error::Parse("ideal vanishes at several places".into())),
            }
        }
        Err(Error::Parse("no place of degree at most 4 matches the ideal".into()))
    }

    /// Minimal polynomial over `K` of `a ∈ E_r`.
    pub fn minpoly(&self, r: u32, a: Fe) -> Result<Poly> {
        let t = self.tower(r)?;
        let e = t.ext();
        let q = self.0.field.size() as u64;
        let mut acc = Poly::one(e);
        let mut c = a;
        loop {
            acc = acc.mul(&Poly::linear_root(e, c));
            c = e.pow(c, q);
            if c == a {
                break;
            }
        }
        acc.descend(&t).ok_or_else(|| Error::Internal("minimal polynomial not over K".into()))
    }

    /// `x(P)` for a finite place, in `E_r`.
    fn x_coord(&self, p: &Place) -> Option<Fe> {
        let pt = self.point3(p);
        if pt[2].is_zero() {
            None
        } else {
            Some(pt[0])
        }
    }

    fn compute_expansion(&self, p: &Place, n: i64) -> Result<[LaurentSeries; 3]> {
        let t = self.tower(p.deg)?;
        let e = t.ext().clone();
        let pt = self.point3(p);
        let Some(plane) = &self.0.plane else {
            let tt = LaurentSeries::monomial(&e, 1, n);
            let y = LaurentSeries::zero(&e, n);
            return Ok(if pt[2].is_zero() {
                [LaurentSeries::constant(&e, Fe::ONE, n), y, tt]
            } else {
                [tt.add(&LaurentSeries::constant(&e, pt[0], n)), y, LaurentSeries::constant(&e, Fe::ONE, n)]
            });
        };
        let c = pt.iter().rposition(|a| !a.is_zero()).expect("projective point");
        let (iu, iv) = mpoly::other_two(c);
        let emb = |a: Fe| t.embed(a);
        let gv = plane.partials[iv].eval_in(&e, emb, &pt);
        let (free, solved) = if gv.is_zero() { (iv, iu) } else { (iu, iv) };
        let dsolved = &plane.partials[solved];
        let mk = |prec: i64, sol: &LaurentSeries| -> [LaurentSeries; 3] {
            let mut s = [
                LaurentSeries::zero(&e, prec),
                LaurentSeries::zero(&e, prec),
                LaurentSeries::zero(&e, prec),
            ];
            s[c] = LaurentSeries::constant(&e, Fe::ONE, prec);
            s[free] = LaurentSeries::new(&e, 0, vec![pt[free], Fe::ONE], prec);
            s[solved] = LaurentSeries::new(&e, sol.val().min(prec), sol.coeffs().to_vec(), prec);
            s
        };
        let mut sol = LaurentSeries::constant(&e, pt[solved], 1);
        let mut cur = 1;
        while cur < n {
            let np = (2 * cur).min(n);
            let s = mk(np, &sol);
            let g = plane.form.eval_series(&e, &emb, &s);
            let gd = dsolved.eval_series(&e, &emb, &s);
            let corr = g.div(&gd)?;
            let next = s[solved].sub(&corr);
            sol = LaurentSeries::new(&e, next.val().min(np), next.coeffs().to_vec(), np);
            cur = np;
        }
        let s = mk(n, &sol);
        debug_assert!(plane.form.eval_series(&e, &emb, &s).val() >= n);
        Ok(s)
    }

    /// Coordinate series `(X(t), Y(t), Z(t))` at `p` with the chart
    /// coordinate equal to 1, known to `O(t^n)`.
    pub fn expansion(&self, p: &Place, n: i64) -> Result<Arc<[LaurentSeries; 3]>> {
        if n > MAX_PREC {
            return Err(Error::Precision(format!("needs more than {MAX_PREC} terms")));
        }
        let old = self.0.expansions.lock().expect("expansion cache").get(p).cloned();
        if let Some(s) = &old {
            if s[0].prec() >= n {
                return Ok(s.clone());
            }
        }
        let prec = n.max(START_PREC).max(old.map_or(0, |s| 2 * s[0].prec())).min(MAX_PREC);
        let s = Arc::new(self.compute_expansion(p, prec)?);
        self.0.expansions.lock().expect("expansion cache").insert(p.clone(), s.clone());
        Ok(s)
    }

    /// A form with coefficients in `K` evaluated along the expansion at `p`.
    pub fn form_series(&self, h: &MPoly, p: &Place, n: i64) -> Result<LaurentSeries> {
        let t = self.tower(p.deg)?;
        let s = self.expansion(p, n)?;
        let cut = |x: &LaurentSeries| LaurentSeries::new(t.ext(), x.val().min(n), x.coeffs().to_vec(), n);
        let s = [cut(&s[0]), cut(&s[1]), cut(&s[2])];
        Ok(h.eval_series(t.ext(), &|a| t.embed(a), &s))
    }

    /// `v_P` of a form not vanishing identically on the curve.
    pub fn form_valuation(&self, h: &MPoly, p: &Place) -> Result<i64> {
        let mut n = START_PREC;
        loop {
            let s = self.form_series(h, p, n)?;
            if !s.is_zero_to_prec() {
                return Ok(s.val());
            }
            if n >= MAX_PREC {
                return Err(Error::Precision("form vanishes to the precision cap".into()));
            }
            n = (2 * n).min(MAX_PREC);
        }
    }

    /// `(N^h(t), D^h(t))` at `p`.
    fn func_series_pair(&self, h: &FuncElem, p: &Place, n: i64) -> Result<(LaurentSeries, LaurentSeries)> {
        let (a, b) = h.homogenized();
        Ok((self.form_series(&a, p, n)?, self.form_series(&b, p, n)?))
    }

    /// Laurent expansion of `h` at `p` in the local parameter, known at least
    /// through `t^(upto-1)`.
    pub fn local_expansion(&self, h: &FuncElem, p: &Place, upto: i64) -> Result<LaurentSeries> {
        let e = self.residue_field(p)?;
        if h.is_zero() {
            return Ok(LaurentSeries::zero(&e, upto));
        }
        let mut n = START_PREC.max(upto);
        loop {
            let (a, b) = self.func_series_pair(h, p, n)?;
            if !b.is_zero_to_prec() {
                let s = a.div(&b)?;
                if s.prec() >= upto {
                    return Ok(LaurentSeries::new(&e, s.val().min(upto), s.coeffs().to_vec(), upto));
                }
            }
            if n >= MAX_PREC {
                return Err(Error::Precision("expansion needs more terms than the cap".into()));
            }
            n = (2 * n).min(MAX_PREC);
        }
    }

    /// `v_P(h)` from local expansions.
    pub fn valuation_by_series(&self, h: &FuncElem, p: &Place) -> Result<i64> {
        if h.is_zero() {
            return Err(Error::InvalidInstance("valuation of the zero function".into()));
        }
        let (a, b) = h.homogenized();
        Ok(self.form_valuation(&a, p)? - self.form_valuation(&b, p)?)
    }

    /// `v_P(h)`. On the line this counts factor multiplicities directly.
    pub fn valuation(&self, h: &FuncElem, p: &Place) -> Result<i64> {
        if h.is_zero() {
            return Err(Error::InvalidInstance("valuation of the zero function".into()));
        }
        if !self.is_line() {
            return self.valuation_by_series(h, p);
        }
        let num = &h.num()[0];
        let den = h.den();
        match self.x_coord(p) {
            None => Ok(den.deg() - num.deg()),
            Some(a) => {
                let m = self.minpoly(p.deg, a)?;
                Ok(multiplicity(num, &m)? - multiplicity(den, &m)?)
            }
        }
    }

    /// `x(t)` at `p`.
    fn x_series(&self, p: &Place, n: i64) -> Result<LaurentSeries> {
        let k = self.field();
        let xs = self.form_series(&MPoly::var(k, 0), p, n)?;
        let zs = self.form_series(&MPoly::var(k, 2), p, n)?;
        xs.div(&zs)
    }

    /// `v_P(ω)` for `ω = φ dx`.
    pub fn valuation_diff(&self, w: &Differential, p: &Place) -> Result<i64> {
        let v = self.valuation(&w.coeff, p)?;
        let mut n = START_PREC;
        loop {
            let d = self.x_series(p, n)?.derivative();
            if !d.is_zero_to_prec() {
                return Ok(v + d.val());
            }
            if n >= MAX_PREC {
                return Err(Error::Precision("dx vanishes to the precision cap".into()));
            }
            n = (2 * n).min(MAX_PREC);
        }
    }

    /// `res_P(ω)` in the residue field `E_r` of `p`.
    pub fn residue(&self, w: &Differential, p: &Place) -> Result<Fe> {
        if w.is_zero() {
            return Ok(Fe::ZERO);
        }
        let mut n = START_PREC;
        loop {
            let d = self.x_series(p, n)?.derivative();
            let phi = self.local_expansion(&w.coeff, p, n)?;
            let prod = phi.mul(&d);
            if prod.prec() > -1 {
                return prod.coeff(-1);
            }
            if n >= MAX_PREC {
                return Err(Error::Precision("residue needs more terms than the cap".into()));
            }
            n = (2 * n).min(MAX_PREC);
        }
    }

    /// Residue at a degree-one place as an element of `K`.
    pub fn residue_rational(&self, w: &Differential, p: &Place) -> Result<Fe> {
        if p.deg != 1 {
            return Err(Error::InvalidInstance("place is not rational".into()));
        }
        self.residue(w, p)
    }

    /// Principal divisor of a nonzero function.
    pub fn divisor_of(&self, h: &FuncElem) -> Result<Divisor> {
        if h.is_zero() {
            return Err(Error::InvalidInstance("divisor of the zero function".into()));
        }
        let k = self.field();
        let mut cand: BTreeSet<Place> = self.infinity_places()?.into_iter().collect();
        if self.is_line() {
            let g = h.num()[0].mul(h.den());
            cand.extend(self.places_over_x(&g)?);
        } else {
            let nres = if h.num().len() == 1 {
                h.num()[0].clone()
            } else {
                resultant_y(k, self.y_coeffs(), h.num())?
            };
            let lead = self.y_coeffs().last().expect("nonempty").clone();
            let g = h.den().mul(&nres).mul(&lead);
            cand.extend(self.places_over_x(&g)?);
        }
        let mut d = Divisor::zero();
        for p in cand {
            let v = self.valuation(h, &p)?;
            d.add_at(p, v);
        }
        if d.degree() != 0 {
            return Err(Error::Internal(format!("principal divisor of degree {}", d.degree())));
        }
        Ok(d)
    }

    /// The reference differential `ω₀ = dx`.
    pub fn reference_differential(&self) -> Differential {
        Differential::dx(self)
    }

    /// `K = div(dx)`, found by valuations at the places over critical
    /// values of `x` and at infinity.
    pub fn canonical_divisor(&self) -> Result<Divisor> {
        if let Some(d) = self.0.canonical.get() {
            return Ok(d.clone());
        }
        let k = self.field();
        let mut cand: BTreeSet<Place> = self.infinity_places()?.into_iter().collect();
        if !self.is_line() {
            let fy: Vec<Poly> =
                self.y_coeffs().iter().enumerate().skip(1).map(|(j, c)| c.scale(k.from_int(j as i64))).collect();
            let disc = resultant_y(k, self.y_coeffs(), &fy)?;
            cand.extend(self.places_over_x(&disc)?);
        }
        let w = Differential::dx(self);
        let mut d = Divisor::zero();
        for p in cand {
            let v = self.valuation_diff(&w, &p)?;
            d.add_at(p, v);
        }
        let want = 2 * self.genus() as i64 - 2;
        if d.degree() != want {
            return Err(Error::Internal(format!("canonical divisor of degree {} instead of {want}", d.degree())));
        }
        let _ = self.0.canonical.set(d.clone());
        Ok(d)
    }

    /// Divisor of a nonzero differential.
    pub fn divisor_of_diff(&self, w: &Differential) -> Result<Divisor> {
        if w.is_zero() {
            return Err(Error::InvalidInstance("divisor of the zero differential".into()));
        }
        Ok(self.divisor_of(&w.coeff)?.add(&self.canonical_divisor()?))
    }

    /// A `K`-basis of `L(G) = {h : div(h) + G ≥ 0} ∪ {0}`.
    pub fn rr_basis(&self, g: &Divisor) -> Result<Vec<FuncElem>> {
        if g.degree() < 0 {
            return Ok(Vec::new());
        }
        if self.is_line() {
            return self.rr_basis_line(g);
        }
        self.rr_basis_plane(g)
    }

    fn rr_basis_line(&self, g: &Divisor) -> Result<Vec<FuncElem>> {
        let k = self.field();
        let mut num = Poly::one(k);
        let mut den = Poly::one(k);
        for (p, &n) in g.iter() {
            let Some(a) = self.x_coord(p) else { continue };
            let m = self.minpoly(p.deg, a)?;
            if n > 0 {
                den = den.mul(&m.pow(n as u64));
            } else {
                num = num.mul(&m.pow((-n) as u64));
            }
        }
        let base = FuncElem::from_x_poly(self, num).div_x_poly(&den)?;
        let mut out = Vec::new();
        let mut xi = Poly::one(k);
        for _ in 0..=g.degree() {
            out.push(base.mul_x_poly(&xi));
            xi = xi.mul(&Poly::x(k));
        }
        Ok(out)
    }

    fn rr_basis_plane(&self, g: &Divisor) -> Result<Vec<FuncElem>> {
        let k = self.field().clone();
        let plane = self.0.plane.as_ref().expect("plane curve");
        let zf = MPoly::var(&k, 2);
        let mut mins: Vec<(Poly, MPoly, i64)> = Vec::new();
        let mut ez = 0i64;
        for (p, &n) in g.positive_part().iter() {
            match self.x_coord(p) {
                None => {
                    let v = self.form_valuation(&zf, p)?;
                    ez = ez.max(ceil_div(n, v));
                }
                Some(a) => {
                    let m = self.minpoly(p.deg, a)?;
                    let mh = MPoly::homogenize(&k, std::slice::from_ref(&m), m.deg() as u32)?;
                    let c = ceil_div(n, self.form_valuation(&mh, p)?);
                    match mins.iter_mut().find(|(x, _, _)| *x == m) {
                        Some(entry) => entry.2 = entry.2.max(c),
                        None => mins.push((m, mh, c)),
                    }
                }
            }
        }
        let mut bform = zf.pow(ez as u32);
        let mut bx = Poly::one(&k);
        let mut mprod = Poly::one(&k);
        for (m, mh, c) in &mins {
            bform = bform.mul(&mh.pow(*c as u32));
            bx = bx.mul(&m.pow(*c as u64));
            mprod = mprod.mul(m);
        }
        let degb = bform.total_degree() as u32;
        let mut cand: BTreeSet<Place> = self.places_over_x(&mprod)?.into_iter().collect();
        cand.extend(self.infinity_places()?);
        cand.extend(g.support().cloned());
        let mut total = 0i64;
        let mut conds: Vec<(Place, i64)> = Vec::new();
        for p in &cand {
            let b = self.form_valuation(&bform, p)?;
            total += b * p.deg as i64;
            let kp = b - g.coeff(p);
            if kp > 0 {
                conds.push((p.clone(), kp));
            }
        }
        if total != plane.degree as i64 * degb as i64 {
            return Err(Error::Internal(format!(
                "denominator form meets the curve in {total} points, expected {}",
                plane.degree as i64 * degb as i64
            )));
        }
        let lm = *plane
            .form
            .terms()
            .map(|(e, _)| e)
            .max_by_key(|e| (e[1], e[0], e[2]))
            .expect("nonzero form");
        let monos: Vec<Mono> = monomials_of_degree(degb)
            .into_iter()
            .filter(|e| !(e[0] >= lm[0] && e[1] >= lm[1] && e[2] >= lm[2]))
            .collect();
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        for (p, kp) in &conds {
            let t = self.tower(p.deg)?;
            let series = self.monomial_series(p, &monos, *kp)?;
            for e in 0..*kp {
                let coords: Vec<Vec<Fe>> = series.iter().map(|s| t.to_base_coords(s.coeff(e).expect("known"))).collect();
                for j in 0..p.deg as usize {
                    rows.push(coords.iter().map(|c| c[j]).collect());
                }
            }
        }
        let kernel = if rows.is_empty() {
            (0..monos.len())
                .map(|i| {
                    let mut v = vec![Fe::ZERO; monos.len()];
                    v[i] = Fe::ONE;
                    v
                })
                .collect()
        } else {
            Matrix::from_rows(&k, monos.len(), &rows)?.kernel()
        };
        kernel
            .into_iter()
            .map(|v| {
                let a = MPoly::from_terms(&k, monos.iter().zip(v).map(|(&e, c)| (e, c)));
                FuncElem::from_mpoly(self, &a).div_x_poly(&bx)
            })
            .collect()
    }

    /// Checks `div(b) + G ≥ 0` by valuations at `supp G`, at infinity and
    /// over the zeros of the denominator of `b`, which hold all its poles.
    pub fn in_rr_space(&self, b: &FuncElem, g: &Divisor) -> Result<bool> {
        if b.is_zero() {
            return Ok(true);
        }
        let mut cand: BTreeSet<Place> = self.places_over_x(b.den())?.into_iter().collect();
        cand.extend(self.infinity_places()?);
        cand.extend(g.support().cloned());
        for p in &cand {
            if self.valuation(b, p)? < -g.coeff(p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Series of each monomial at `p` to `O(t^n)`.
    fn monomial_series(&self, p: &Place, monos: &[Mono], n: i64) -> Result<Vec<LaurentSeries>> {
        let t = self.tower(p.deg)?;
        let e = t.ext();
        let s = self.expansion(p, n)?;
        let top = monos.iter().map(|m| m[0].max(m[1]).max(m[2])).max().unwrap_or(0) as usize;
        let pw: Vec<Vec<LaurentSeries>> = (0..3)
            .map(|i| {
                let base = LaurentSeries::new(e, s[i].val().min(n), s[i].coeffs().to_vec(), n);
                let mut v = vec![LaurentSeries::constant(e, Fe::ONE, n)];
                for j in 1..=top {
                    let next = v[j - 1].mul(&base);
                    v.push(next);
                }
                v
            })
            .collect();
        Ok(monos
            .iter()
            .map(|m| pw[0][m[0] as usize].mul(&pw[1][m[1] as usize]).mul(&pw[2][m[2] as usize]))
            .collect())
    }

    /// `ℓ(G) = dim L(G)`.
    pub fn h0(&self, g: &Divisor) -> Result<usize> {
        if g.degree() < 0 {
            return Ok(0);
        }
        Ok(self.rr_basis(g)?.len())
    }

    /// `i(G) = dim Ω(G) = ℓ(K₀ − G)`.
    pub fn h1(&self, g: &Divisor) -> Result<usize> {
        self.h0(&self.canonical_divisor()?.sub(g))
    }

    /// A `K`-basis of `Ω(A) = {ω : div(ω) ≥ A} ∪ {0}`.
    pub fn omega_basis(&self, a: &Divisor) -> Result<Vec<Differential>> {
        let w0 = self.reference_differential();
        Ok(self
            .rr_basis(&self.canonical_divisor()?.sub(a))?
            .into_iter()
            .map(|h| w0.mul_func(&h))
            .collect())
    }

    /// Place coordinates written over `K` (degree 1) or `E_r` with generator `u`.
    pub fn format_place(&self, p: &Place) -> String {
        let e = match self.tower(p.deg) {
            Ok(t) => t.ext().clone(),
            Err(_) => return format!("{p:?}"),
        };
        let c: Vec<String> = p.coords.iter().map(|&a| e.format(a)).collect();
        if p.deg == 1 {
            format!("({})", c.join(":"))
        } else {
            format!("deg{}({})", p.deg, c.join(":"))
        }
    }

    pub fn format_divisor(&self, d: &Divisor) -> String {
        if d.is_zero() {
            return "0".into();
        }
        d.iter().map(|(p, n)| format!("{n}*{}", self.format_place(p))).collect::<Vec<_>>().join(" + ")
    }
}

/// Multiplicity of the irreducible `m` in `a`.
fn multiplicity(a: &Poly, m: &Poly) -> Result<i64> {
    let mut a = a.clone();
    let mut n = 0;
    loop {
        let (q, r) = a.divrem(m)?;
        if !r.is_zero() {
            return Ok(n);
        }
        a = q;
        n += 1;
    }
}
