//! Residue AG codes `C_Ω(D, G)`, Cartier codes `Car_q(D, G)`, and checkers
//! for the bounds and equalities relating them.

use std::fmt;
use std::sync::Arc;

use crate::cartier::CartierCtx;
use crate::codes::{Distance, LinearCode};
use crate::curve::{Curve, Differential, Divisor, FuncElem, Place};
use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};
use crate::goppa::{goppa_code, GoppaInstance};

/// Codewords an exhaustive minimum-distance search may visit by default.
pub const DEFAULT_BUDGET: u128 = 1 << 20;

#[derive(Clone)]
pub struct AgInstance {
    pub curve: Curve,
    /// `P_1, …, P_n` in code-coordinate order.
    pub d: Vec<Place>,
    pub g: Divisor,
    pub tower: Arc<FieldTower>,
    /// Minimum distances are computed only for codes with at most this many codewords.
    pub budget: u128,
}

impl fmt::Debug for AgInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AgInstance(n={}, deg G={})", self.d.len(), self.g.degree())
    }
}

impl AgInstance {
    pub fn new(curve: &Curve, d: Vec<Place>, g: Divisor, tower: Arc<FieldTower>) -> Result<AgInstance> {
        curve.field().check(tower.ext())?;
        if d.iter().any(|p| p.deg != 1) {
            return Err(Error::InvalidInstance("D must consist of rational places".into()));
        }
        let dd = Divisor::sum_of(&d);
        if !dd.is_reduced() || dd.support_size() != d.len() {
            return Err(Error::InvalidInstance("places of D must be distinct".into()));
        }
        for p in &d {
            if !curve.contains_point(1, &p.coords)? || curve.place_of_point(1, &p.coords)?.as_ref() != Some(p) {
                return Err(Error::InvalidInstance(format!("{} is not on the curve", curve.format_place(p))));
            }
        }
        if !g.supports_disjoint(&dd) {
            return Err(Error::SupportOverlap);
        }
        Ok(AgInstance { curve: curve.clone(), d, g, tower, budget: DEFAULT_BUDGET })
    }

    /// Same curve, `D` and tower with another `G`.
    pub fn with_g(&self, g: Divisor) -> Result<AgInstance> {
        let mut inst = AgInstance::new(&self.curve, self.d.clone(), g, self.tower.clone())?;
        inst.budget = self.budget;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn ell(&self) -> i64 {
        self.tower.ell() as i64
    }

    pub fn q(&self) -> i64 {
        self.tower.q() as i64
    }

    pub fn d_divisor(&self) -> Divisor {
        Divisor::sum_of(&self.d)
    }

    fn residue_rows(&self, ws: &[Differential]) -> Result<Vec<Vec<Fe>>> {
        ws.iter().map(|w| self.d.iter().map(|p| self.curve.residue_rational(w, p)).collect()).collect()
    }
}

/// `C_Ω(D, G)`, the image of `res_D` on `Ω(G − D)`.
pub fn c_omega(inst: &AgInstance) -> Result<LinearCode> {
    let ws = inst.curve.omega_basis(&inst.g.sub(&inst.d_divisor()))?;
    LinearCode::from_rows(inst.curve.field(), inst.n(), &inst.residue_rows(&ws)?)
}

/// `C_Ω(D, G)|F_q`.
pub fn subfield_code(inst: &AgInstance) -> Result<LinearCode> {
    c_omega(inst)?.subfield_subcode(&inst.tower)
}

/// `Car_q(D, G)`, the image of `res_D` on the `C_q`-fixed part of `Ω(G − D)`.
pub fn cartier_code(inst: &AgInstance) -> Result<LinearCode> {
    let ctx = CartierCtx::new(&inst.curve, inst.tower.clone())?;
    cartier_code_with(&ctx, inst)
}

pub fn cartier_code_with(ctx: &CartierCtx, inst: &AgInstance) -> Result<LinearCode> {
    let fs = ctx.fixed_space(&inst.g, &inst.d_divisor())?;
    let rows = inst
        .residue_rows(&fs.basis)?
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|a| inst.tower.try_descend(a).ok_or_else(|| Error::Internal("residue of a fixed form outside F_q".into())))
                .collect::<Result<Vec<Fe>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    LinearCode::from_rows(inst.tower.base(), inst.n(), &rows)
}

/// `G` minus every place with `v_P(G) > 0` divisible by `q`: the smallest
/// divisor whose Cartier code provably equals that of `G`.
pub fn lowered(g: &Divisor, q: i64) -> Divisor {
    Divisor::from_pairs(g.iter().map(|(p, &n)| (p.clone(), if n > 0 && n % q == 0 { n - 1 } else { n })))
}

/// `(deg G + 2 − 2g, deg(G + G_U) + 2 − 2g)`.
pub fn bound_designed(inst: &AgInstance) -> (i64, i64) {
    let g2 = 2 - 2 * inst.curve.genus() as i64;
    let gu = inst.g.g_u(inst.q());
    (inst.g.degree() + g2, inst.g.add(&gu).degree() + g2)
}

fn require_g1(inst: &AgInstance, g1: &Divisor) -> Result<()> {
    if !inst.g.geq(&g1.scale(inst.q())) || !inst.g.geq(g1) {
        return Err(Error::Hypothesis("need G ≥ qG₁ and G ≥ G₁".into()));
    }
    Ok(())
}

/// Lower bound on `dim Car_q(D, G)` from `h⁰(G) − h⁰(G₁) + h¹(G₁)`.
pub fn bound_dim_thm_a(inst: &AgInstance, g1: &Divisor) -> Result<i64> {
    require_g1(inst, g1)?;
    let c = &inst.curve;
    let t = c.h0(&inst.g)? as i64 - c.h0(g1)? as i64 + c.h1(g1)? as i64;
    Ok(inst.n() as i64 - nonneg_shift(&inst.g) - inst.ell() * t)
}

/// The `h¹(G) = 0` form `n − [G ≥ 0] − ℓ deg(G − G₁)`.
pub fn bound_dim_thm_a_nonspecial(inst: &AgInstance, g1: &Divisor) -> Result<i64> {
    require_g1(inst, g1)?;
    if inst.curve.h1(&inst.g)? != 0 {
        return Err(Error::Hypothesis("need h¹(G) = 0".into()));
    }
    Ok(inst.n() as i64 - nonneg_shift(&inst.g) - inst.ell() * inst.g.sub(g1).degree())
}

/// Stichtenoth's lower bound on `dim C_Ω(D, G)|F_q`.
pub fn bound_stichtenoth(inst: &AgInstance, g1: &Divisor) -> Result<i64> {
    if !inst.g.geq(&g1.scale(inst.q())) {
        return Err(Error::Hypothesis("need G ≥ qG₁".into()));
    }
    let c = &inst.curve;
    let t = c.h0(&inst.g)? as i64 - c.h0(g1)? as i64;
    Ok(inst.n() as i64 - nonneg_shift(&inst.g) - inst.ell() * t)
}

fn nonneg_shift(g: &Divisor) -> i64 {
    if g.is_effective() {
        1
    } else {
        0
    }
}

fn thm_b_raw(inst: &AgInstance, g: &Divisor) -> Result<i64> {
    let (gp, gm) = (g.positive_part(), g.negative_part());
    if !gm.is_reduced() {
        return Err(Error::Hypothesis("G⁻ must be reduced".into()));
    }
    if !gp.supports_disjoint(&inst.d_divisor()) || !gm.supports_disjoint(&inst.d_divisor()) {
        return Err(Error::Hypothesis("G⁺, G⁻ and D must have disjoint supports".into()));
    }
    let s = gm.support_size() as i64;
    Ok(inst.n() as i64 - 1 + s - inst.ell() * gp.degree() - inst.curve.h1(g)? as i64)
}

/// Direct lower bound `n − 1 + s_{G⁻} − ℓ deg G⁺ − h¹(G)`, evaluated at `G`
/// and at [`lowered`]`(G)`, which has the same Cartier code; the larger value.
pub fn bound_dim_thm_b(inst: &AgInstance) -> Result<i64> {
    let raw = thm_b_raw(inst, &inst.g)?;
    let low = thm_b_raw(inst, &lowered(&inst.g, inst.q()))?;
    Ok(raw.max(low))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Ge,
    Le,
    Eq,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Ge => ">=",
            Rel::Le => "<=",
            Rel::Eq => "==",
        }
    }
}

/// One audited inequality `lhs rel rhs`.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub lhs: i64,
    pub rel: Rel,
    pub rhs: i64,
}

impl Check {
    pub fn holds(&self) -> bool {
        match self.rel {
            Rel::Ge => self.lhs >= self.rhs,
            Rel::Le => self.lhs <= self.rhs,
            Rel::Eq => self.lhs == self.rhs,
        }
    }

    fn flag(name: &str, b: bool) -> Check {
        Check { name: name.into(), lhs: b as i64, rel: Rel::Eq, rhs: 1 }
    }
}

/// Every intermediate quantity plus the checked relations between them.
#[derive(Clone, Debug, Default)]
pub struct BoundReport {
    pub title: String,
    pub values: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl BoundReport {
    fn new(title: &str) -> BoundReport {
        BoundReport { title: title.into(), ..Default::default() }
    }

    fn set(&mut self, name: &str, v: impl fmt::Display) {
        self.values.push((name.into(), v.to_string()));
    }

    fn check(&mut self, name: &str, lhs: i64, rel: Rel, rhs: i64) {
        self.checks.push(Check { name: name.into(), lhs, rel, rhs });
    }

    pub fn holds(&self) -> bool {
        self.checks.iter().all(Check::holds)
    }

    pub fn value(&self, name: &str) -> Option<&str> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.title);
        for (n, v) in &self.values {
            s.push_str(&format!("  {n} = {v}\n"));
        }
        for c in &self.checks {
            let rel = c.rel.symbol();
            let tag = if c.holds() { "ok" } else { "FAIL" };
            s.push_str(&format!("  [{tag}] {}: {} {rel} {}\n", c.name, c.lhs, c.rhs));
        }
        s.push_str(if self.holds() { "holds\n" } else { "VIOLATED\n" });
        s
    }
}

/// `[n, k, d]_q` with `d` when affordable.
pub fn params(c: &LinearCode, budget: u128) -> String {
    match c.min_distance(budget) {
        Ok(Distance::Exact(d)) => format!("[{}, {}, {}]_{}", c.n(), c.k(), d, c.field().size()),
        Ok(_) => format!("[{}, {}, -]_{}", c.n(), c.k(), c.field().size()),
        Err(_) => format!("[{}, {}, ?]_{}", c.n(), c.k(), c.field().size()),
    }
}

fn exact_distance(c: &LinearCode, budget: u128) -> Option<i64> {
    c.min_distance(budget).ok().and_then(Distance::exact).map(|d| d as i64)
}

fn divisor_stats(r: &mut BoundReport, c: &Curve, name: &str, g: &Divisor) -> Result<()> {
    r.set(&format!("deg {name}"), g.degree());
    r.set(&format!("h0({name})"), c.h0(g)?);
    r.set(&format!("h1({name})"), c.h1(g)?);
    Ok(())
}

/// `Car_q(D, G) = Car_q(D, G + G_U)` together with the improved designed distance.
pub fn check_equality_theorem(inst: &AgInstance) -> Result<BoundReport> {
    let mut r = BoundReport::new("Cartier code equality Car_q(D,G) = Car_q(D,G+G_U)");
    let ctx = CartierCtx::new(&inst.curve, inst.tower.clone())?;
    let gu = inst.g.g_u(inst.q());
    let a = cartier_code_with(&ctx, inst)?;
    let b = cartier_code_with(&ctx, &inst.with_g(inst.g.add(&gu))?)?;
    r.set("G", inst.curve.format_divisor(&inst.g));
    r.set("G_U", inst.curve.format_divisor(&gu));
    r.set("Car_q(D,G)", params(&a, inst.budget));
    r.set("Car_q(D,G+G_U)", params(&b, inst.budget));
    r.checks.push(Check::flag("codes equal", a.code_eq(&b)?));
    let (dd, improved) = bound_designed(inst);
    r.set("designed distance", dd);
    r.set("improved designed distance", improved);
    if let Some(d) = exact_distance(&a, inst.budget) {
        r.check("d >= deg(G+G_U)+2-2g", d, Rel::Ge, improved);
    }
    Ok(r)
}

/// `dim C_Ω(D,G)|F_q − dim Car_q(D,G) ≤ ℓ h¹(G₁)`, with equality of codes when `h¹(G₁) = 0`.
pub fn check_codim_theorem(inst: &AgInstance, g1: &Divisor) -> Result<BoundReport> {
    require_g1(inst, g1)?;
    let mut r = BoundReport::new("codimension of Car_q(D,G) in C_Omega(D,G)|F_q");
    let car = cartier_code(inst)?;
    let sub = subfield_code(inst)?;
    let h1 = inst.curve.h1(g1)? as i64;
    r.set("Car_q(D,G)", params(&car, inst.budget));
    r.set("C_Omega(D,G)|F_q", params(&sub, inst.budget));
    r.set("h1(G1)", h1);
    r.set("l", inst.ell());
    r.checks.push(Check::flag("Car_q(D,G) in C_Omega(D,G)|F_q", car.code_subset(&sub)?));
    let codim = sub.k() as i64 - car.k() as i64;
    r.set("codimension", codim);
    r.check("codimension <= l*h1(G1)", codim, Rel::Le, inst.ell() * h1);
    if h1 == 0 {
        r.checks.push(Check::flag("codes equal", car.code_eq(&sub)?));
    }
    Ok(r)
}

/// Every bound whose hypotheses hold for `inst` (and `g1`, when given),
/// checked against the computed codes.
pub fn check_bounds(inst: &AgInstance, g1: Option<&Divisor>) -> Result<BoundReport> {
    let c = &inst.curve;
    let mut r = BoundReport::new("parameter bounds");
    let car = cartier_code(inst)?;
    let om = c_omega(inst)?;
    let sub = om.subfield_subcode(&inst.tower)?;
    r.set("n", inst.n());
    r.set("g", c.genus());
    r.set("l", inst.ell());
    r.set("q", inst.q());
    divisor_stats(&mut r, c, "G", &inst.g)?;
    r.set("s_G-", inst.g.negative_part().support_size());
    r.set("Car_q(D,G)", params(&car, inst.budget));
    r.set("C_Omega(D,G)|F_q", params(&sub, inst.budget));
    r.set("C_Omega(D,G)", format!("[{}, {}]_{}", om.n(), om.k(), om.field().size()));
    r.checks.push(Check::flag("Car_q(D,G) in C_Omega(D,G)|F_q", car.code_subset(&sub)?));
    r.checks.push(Check::flag("C_Omega(D,G)|F_q in C_Omega(D,G)", sub.embed(&inst.tower)?.code_subset(&om)?));

    let h1g = c.h1(&inst.g)? as i64;
    let dim_omega = c.omega_basis(&inst.g.sub(&inst.d_divisor()))?.len() as i64 - h1g;
    r.check("dim C_Omega = dim Omega(G-D) - h1(G)", om.k() as i64, Rel::Eq, dim_omega);
    if h1g == 0 {
        let g = c.genus() as i64;
        r.check("dim C_Omega >= n-(deg G+1-g)", om.k() as i64, Rel::Ge, inst.n() as i64 - (inst.g.degree() + 1 - g));
    }
    let (dd, improved) = bound_designed(inst);
    r.set("designed distance", dd);
    r.set("improved designed distance", improved);
    if let Some(d) = exact_distance(&car, inst.budget) {
        r.check("d(Car) >= deg(G+G_U)+2-2g", d, Rel::Ge, improved);
    }
    if let Some(d) = exact_distance(&sub, inst.budget) {
        r.check("d(C_Omega|F_q) >= deg G+2-2g", d, Rel::Ge, dd);
    }
    if let Some(d) = exact_distance(&om, inst.budget) {
        r.check("d(C_Omega) >= deg G+2-2g", d, Rel::Ge, dd);
    }

    match bound_dim_thm_b(inst) {
        Ok(b) => {
            r.set("thm B at G", thm_b_raw(inst, &inst.g)?);
            r.set("thm B at lowered G", thm_b_raw(inst, &lowered(&inst.g, inst.q()))?);
            r.check("dim Car >= thm B", car.k() as i64, Rel::Ge, b);
            r.check("dim C_Omega|F_q >= thm B", sub.k() as i64, Rel::Ge, b);
        }
        Err(Error::Hypothesis(why)) => r.set("thm B", format!("not applicable ({why})")),
        Err(e) => return Err(e),
    }

    if let Some(g1) = g1 {
        divisor_stats(&mut r, c, "G1", g1)?;
        match bound_dim_thm_a(inst, g1) {
            Ok(a) => {
                r.check("dim Car >= thm A", car.k() as i64, Rel::Ge, a);
                let h1 = c.h1(g1)? as i64;
                let codim = sub.k() as i64 - car.k() as i64;
                r.check("codimension <= l*h1(G1)", codim, Rel::Le, inst.ell() * h1);
                if let Ok(a2) = bound_dim_thm_a_nonspecial(inst, g1) {
                    r.check("dim Car >= thm A (h1(G)=0)", car.k() as i64, Rel::Ge, a2);
                }
            }
            Err(Error::Hypothesis(why)) => r.set("thm A", format!("not applicable ({why})")),
            Err(e) => return Err(e),
        }
        match bound_stichtenoth(inst, g1) {
            Ok(s) => r.check("dim C_Omega|F_q >= Stichtenoth", sub.k() as i64, Rel::Ge, s),
            Err(Error::Hypothesis(why)) => r.set("Stichtenoth", format!("not applicable ({why})")),
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

/// The divisor `(f)_0` on the projective line.
pub fn zeros_on_line(curve: &Curve, f: &crate::polymat::Poly) -> Result<Divisor> {
    if !curve.is_line() {
        return Err(Error::InvalidInstance("expected the projective line".into()));
    }
    Ok(curve.divisor_of(&FuncElem::from_x_poly(curve, f.clone()))?.positive_part())
}

/// The line over the extension, `D` from the support, `E = (f)_0` and `P = ∞`.
pub fn line_setup(inst: &GoppaInstance) -> Result<(Curve, Vec<Place>, Divisor, Place)> {
    let line = Curve::projective_line(inst.tower.ext());
    let d: Vec<Place> = inst.support.iter().map(|&a| Place::new(1, vec![a, Fe::ONE])).collect();
    let e = zeros_on_line(&line, &inst.f)?;
    let inf = line.infinity_places()?.remove(0);
    Ok((line, d, e, inf))
}

/// `Γ_q(L, f) = C_Ω(D, E − P)|F_q` on the projective line.
pub fn check_example_goppa(inst: &GoppaInstance) -> Result<BoundReport> {
    let (line, d, e, inf) = line_setup(inst)?;
    let ag = AgInstance::new(&line, d, e.sub(&Divisor::single(inf, 1)), inst.tower.clone())?;
    let gamma = goppa_code(inst)?;
    let sub = subfield_code(&ag)?;
    let mut r = BoundReport::new("Goppa code as subfield subcode of C_Omega(D, E-P)");
    r.set("Gamma(L,f)", params(&gamma, ag.budget));
    r.set("C_Omega(D,E-P)|F_q", params(&sub, ag.budget));
    r.checks.push(Check::flag("codes equal", gamma.code_eq(&sub)?));
    Ok(r)
}

/// `Car_q(D, (q−1)E − P) = Γ_q(L, f^{q−1})` for squarefree `f`.
pub fn check_cartier_goppa(inst: &GoppaInstance) -> Result<BoundReport> {
    if !inst.f.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    let (line, d, e, inf) = line_setup(inst)?;
    let q = inst.tower.q() as i64;
    let ag = AgInstance::new(&line, d, e.scale(q - 1).sub(&Divisor::single(inf, 1)), inst.tower.clone())?;
    let gamma = goppa_code(&inst.with_power(q as u64 - 1))?;
    let car = cartier_code(&ag)?;
    let mut r = BoundReport::new("Cartier code on the line as a Goppa code");
    r.set("Gamma(L,f^(q-1))", params(&gamma, ag.budget));
    r.set("Car_q(D,(q-1)E-P)", params(&car, ag.budget));
    r.checks.push(Check::flag("codes equal", gamma.code_eq(&car)?));
    Ok(r)
}
