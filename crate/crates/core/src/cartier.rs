//! The Cartier operator on rational differentials, its iterate `C_q`, and
//! the `F_q`-space of `C_q`-fixed differentials in `Ω(G − D)`.

use std::sync::Arc;

use crate::curve::{Curve, Differential, Divisor, FuncElem, MPoly, Place};
use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};
use crate::polymat::{invert_ratfunc, Matrix, Poly, RatFunc};

/// Writes `r(x)` as `Σ_{a<p} r_a(X) x^a` with `X = x^p`.
fn split_p(r: &RatFunc, p: usize) -> Result<Vec<RatFunc>> {
    let k = r.field().clone();
    let d = r.den();
    let np = r.num().mul(&d.pow(p as u64 - 1));
    let dsig = Poly::new(&k, d.coeffs().iter().map(|&a| k.pow(a, p as u64)).collect());
    (0..p)
        .map(|a| {
            let c: Vec<Fe> = np.coeffs().iter().skip(a).step_by(p).copied().collect();
            RatFunc::new(Poly::new(&k, c), dsig.clone())
        })
        .collect()
}

/// Coefficientwise `p`-th root with `X ↦ x`.
fn rho(r: &RatFunc) -> Result<RatFunc> {
    let k = r.field().clone();
    let root = |p: &Poly| Poly::new(&k, p.coeffs().iter().map(|&a| k.pth_root(a)).collect());
    RatFunc::new(root(r.num()), root(r.den()))
}

/// The Cartier operator of one curve, via the basis `x^i y^{pj}` of the
/// function field over `K(x^p)`.
#[derive(Clone)]
pub struct CartierOp {
    curve: Curve,
    p: usize,
    n: usize,
    tinv: Vec<Vec<RatFunc>>,
}

impl CartierOp {
    pub fn new(curve: &Curve) -> Result<CartierOp> {
        let k = curve.field().clone();
        let p = k.p() as usize;
        let n = curve.y_degree();
        let mut t = vec![vec![RatFunc::zero(&k); p * n]; p * n];
        for i in 0..p {
            for jp in 0..n {
                let mut num = vec![Poly::zero(&k); p * jp + 1];
                num[p * jp] = Poly::monomial(&k, Fe::ONE, i);
                let e = FuncElem::new(curve, num, Poly::one(&k))?;
                for (b, r) in e.to_ratfuncs().iter().enumerate() {
                    for (a, part) in split_p(r, p)?.into_iter().enumerate() {
                        t[a * n + b][i * n + jp] = part;
                    }
                }
            }
        }
        let tinv = invert_ratfunc(&t).ok_or_else(|| Error::Internal("p-basis transition matrix is singular".into()))?;
        Ok(CartierOp { curve: curve.clone(), p, n, tinv })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    /// `C(ω)`.
    pub fn apply(&self, w: &Differential) -> Result<Differential> {
        if !w.curve().same(&self.curve) {
            return Err(Error::ContextMismatch);
        }
        if w.is_zero() {
            return Ok(w.clone());
        }
        let (p, n) = (self.p, self.n);
        let k = self.curve.field().clone();
        let mut b = vec![RatFunc::zero(&k); p * n];
        for (j, r) in w.coeff.to_ratfuncs().iter().enumerate() {
            for (a, part) in split_p(r, p)?.into_iter().enumerate() {
                b[a * n + j] = part;
            }
        }
        let mut top = Vec::with_capacity(n);
        for jp in 0..n {
            let row = &self.tinv[(p - 1) * n + jp];
            let mut acc = RatFunc::zero(&k);
            for (c, bi) in row.iter().zip(&b) {
                if !c.is_zero() && !bi.is_zero() {
                    acc = acc.add(&c.mul(bi));
                }
            }
            top.push(rho(&acc)?);
        }
        Ok(Differential::new(FuncElem::from_ratfuncs(&self.curve, &top)?))
    }

    /// `C^a(ω)`.
    pub fn iterate(&self, w: &Differential, a: u32) -> Result<Differential> {
        let mut cur = w.clone();
        for _ in 0..a {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }
}

/// `C(ω)` by the derivative formula `C((g/f_y) dx) = (∇(f^{p−1} g))^{1/p}/f_y dx`
/// with `∇ = ∂^{2p−2}/∂x^{p−1}∂y^{p−1}`; an independent cross-check of [`CartierOp`].
pub fn cartier_by_derivatives(w: &Differential) -> Result<Differential> {
    let c = w.curve().clone();
    if w.is_zero() {
        return Ok(w.clone());
    }
    let k = c.field().clone();
    let p = k.p();
    let as_mpoly = |v: &[Poly]| {
        MPoly::from_terms(
            &k,
            v.iter()
                .enumerate()
                .flat_map(|(j, q)| q.coeffs().iter().enumerate().map(move |(i, &a)| ([i as u32, j as u32, 0], a)))
                .collect::<Vec<_>>(),
        )
    };
    let f = as_mpoly(c.y_coeffs());
    let fy = f.partial(1);
    let h = &w.coeff;
    let num = as_mpoly(h.num());
    let den = as_mpoly(std::slice::from_ref(h.den()));
    let g = f.pow(p - 1).mul(&num).mul(&fy).mul(&den.pow(p - 1));
    let mut sv = MPoly::zero(&k);
    for (e, &a) in g.terms() {
        if e[0] % p == p - 1 && e[1] % p == p - 1 {
            sv.add_term([(e[0] + 1) / p - 1, (e[1] + 1) / p - 1, 0], k.pth_root(a));
        }
    }
    let top = FuncElem::from_mpoly(&c, &sv);
    let bottom = FuncElem::from_x_poly(&c, h.den().clone()).mul(&FuncElem::from_mpoly(&c, &fy));
    Ok(Differential::new(top.div(&bottom)?))
}

/// `C` on `F_{q^ℓ}` with the base `F_q` of a tower fixed, so that `C_q = C^a`, `q = p^a`.
#[derive(Clone)]
pub struct CartierCtx {
    op: CartierOp,
    tower: Arc<FieldTower>,
    a: u32,
}

/// An `F_q`-basis of `Ω(G − D)^{C_q}`.
#[derive(Clone, Debug)]
pub struct FixedSpaceBasis {
    pub g: Divisor,
    pub d: Divisor,
    pub basis: Vec<Differential>,
}

impl CartierCtx {
    pub fn new(curve: &Curve, tower: Arc<FieldTower>) -> Result<CartierCtx> {
        curve.field().check(tower.ext())?;
        let p = tower.base().p() as u64;
        let mut a = 0;
        let mut q = 1u64;
        while q < tower.q() {
            q *= p;
            a += 1;
        }
        Ok(CartierCtx { op: CartierOp::new(curve)?, tower, a })
    }

    pub fn curve(&self) -> &Curve {
        self.op.curve()
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn q(&self) -> u64 {
        self.tower.q()
    }

    /// `a` with `q = p^a`.
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn cartier(&self, w: &Differential) -> Result<Differential> {
        self.op.apply(w)
    }

    /// `C_q(ω) = C^a(ω)`.
    pub fn cartier_q(&self, w: &Differential) -> Result<Differential> {
        self.op.iterate(w, self.a)
    }

    /// The `C_q`-fixed differentials in `Ω(G − D)`.
    pub fn fixed_space(&self, g: &Divisor, d: &Divisor) -> Result<FixedSpaceBasis> {
        if !g.supports_disjoint(d) {
            return Err(Error::SupportOverlap);
        }
        if !d.is_reduced() || d.support().any(|p| p.deg != 1) {
            return Err(Error::InvalidInstance("D must be a sum of distinct rational places".into()));
        }
        let c = self.curve();
        let gd = g.sub(d);
        let omegas = c.omega_basis(&gd)?;
        let empty = FixedSpaceBasis { g: g.clone(), d: d.clone(), basis: Vec::new() };
        if omegas.is_empty() {
            return Ok(empty);
        }
        let q = self.q();
        let k = c.field().clone();
        let base = self.tower.base().clone();
        let ell = self.tower.ell() as usize;
        let amb = c.omega_basis(&gd.meet(&gd.floor_div(q as i64)))?;
        let amb_f: Vec<FuncElem> = amb.iter().map(|w| w.coeff.clone()).collect();
        let betas = self.tower.basis().to_vec();
        let mut rows = Vec::with_capacity(ell * omegas.len());
        for w in &omegas {
            let cw = self.cartier_q(w)?;
            for &b in &betas {
                let v = cw.scale(k.qth_root(b, q)).sub(&w.scale(b));
                let coords = coordinates(&v.coeff, &amb_f)?
                    .ok_or_else(|| Error::Internal("C_q leaves the ambient differential space".into()))?;
                rows.push(coords.iter().flat_map(|&x| self.tower.to_base_coords(x)).collect::<Vec<Fe>>());
            }
        }
        let m = Matrix::from_rows(&base, ell * amb.len(), &rows)?;
        let mut basis = Vec::new();
        for v in m.transpose().kernel() {
            let mut acc = Differential::new(FuncElem::zero(c));
            for (i, w) in omegas.iter().enumerate() {
                for (j, &b) in betas.iter().enumerate() {
                    let cf = v[i * ell + j];
                    if !cf.is_zero() {
                        acc = acc.add(&w.scale(k.mul(self.tower.embed(cf), b)));
                    }
                }
            }
            if self.cartier_q(&acc)? != acc {
                return Err(Error::Internal("kernel element is not C_q-fixed".into()));
            }
            basis.push(acc);
        }
        Ok(FixedSpaceBasis { basis, ..empty })
    }

    /// For `C_q(ω) = ω`: whether `v_P(ω) ≥ sq − 1` implies `v_P(ω) ≥ sq`.
    pub fn check_vanishing(&self, w: &Differential, p: &Place, s: i64) -> Result<bool> {
        if s < 1 {
            return Err(Error::InvalidInstance("s must be positive".into()));
        }
        if self.cartier_q(w)? != *w {
            return Err(Error::NotFixed);
        }
        let v = self.curve().valuation_diff(w, p)?;
        let sq = s * self.q() as i64;
        Ok(v < sq - 1 || v >= sq)
    }
}

/// `a` with `h = Σ a_k b_k`, or `None` when `h` is outside the span.
pub fn coordinates(h: &FuncElem, basis: &[FuncElem]) -> Result<Option<Vec<Fe>>> {
    let c = h.curve();
    let k = c.field().clone();
    if basis.is_empty() {
        return Ok(if h.is_zero() { Some(Vec::new()) } else { None });
    }
    let mut l = h.den().clone();
    for b in basis {
        let g = l.gcd(b.den())?;
        l = l.mul(&b.den().div_exact(&g)?);
    }
    let flat = |f: &FuncElem| -> Result<Vec<Poly>> {
        let s = l.div_exact(f.den())?;
        Ok(f.num().iter().map(|c| c.mul(&s)).collect())
    };
    let cols: Vec<Vec<Poly>> = basis.iter().map(flat).collect::<Result<_>>()?;
    let target = flat(h)?;
    let ny = c.y_degree();
    let width = cols
        .iter()
        .chain(std::iter::once(&target))
        .flat_map(|v| v.iter().map(|p| p.deg() + 1))
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let pos = |v: &[Poly], j: usize, i: usize| v.get(j).map_or(Fe::ZERO, |p| p.coeff(i));
    let mut m = Matrix::zero(&k, ny * width, basis.len());
    let mut rhs = vec![Fe::ZERO; ny * width];
    for j in 0..ny {
        for i in 0..width {
            for (col, v) in cols.iter().enumerate() {
                m.set(j * width + i, col, pos(v, j, i));
            }
            rhs[j * width + i] = pos(&target, j, i);
        }
    }
    Ok(m.solve(&rhs))
}
