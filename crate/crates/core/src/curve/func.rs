use std::fmt;

use crate::curve::mpoly::MPoly;
use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::ff::Fe;
use crate::polymat::{solve_ratfunc, Poly, RatFunc};

/// Function `N(x, y)/D(x)` on a curve, with `N = Σ_{j<n} N_j(x) y^j` reduced
/// modulo the curve equation, `D` monic and coprime to the content of `N`.
#[derive(Clone)]
pub struct FuncElem {
    curve: Curve,
    num: Vec<Poly>,
    den: Poly,
}

impl PartialEq for FuncElem {
    fn eq(&self, o: &Self) -> bool {
        self.curve.same(&o.curve) && self.num == o.num && self.den == o.den
    }
}

impl Eq for FuncElem {}

impl fmt::Debug for FuncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl FuncElem {
    pub fn new(curve: &Curve, num: Vec<Poly>, den: Poly) -> Result<FuncElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = curve.field().clone();
        let f = curve.y_coeffs();
        let n = f.len() - 1;
        let lead = &f[n];
        let mut num = num;
        let mut den = den;
        while num.len() > n {
            let top = num.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = num.len() - n;
            for c in num.iter_mut() {
                *c = c.mul(lead);
            }
            for (j, fj) in f.iter().take(n).enumerate() {
                let t = top.mul(fj);
                num[shift + j] = num[shift + j].sub(&t);
            }
            den = den.mul(lead);
        }
        while num.last().is_some_and(|p| p.is_zero()) {
            num.pop();
        }
        if num.is_empty() {
            return Ok(FuncElem { curve: curve.clone(), num, den: Poly::one(&k) });
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c)?;
        }
        let den = den.div_exact(&g)?;
        let inv = k.inv(den.lc())?;
        let num = num.iter().map(|c| c.div_exact(&g).map(|q| q.scale(inv))).collect::<Result<Vec<_>>>()?;
        Ok(FuncElem { curve: curve.clone(), num, den: den.scale(inv) })
    }

    pub fn zero(curve: &Curve) -> FuncElem {
        FuncElem { curve: curve.clone(), num: Vec::new(), den: Poly::one(curve.field()) }
    }

    pub fn constant(curve: &Curve, a: Fe) -> FuncElem {
        FuncElem::from_x_poly(curve, Poly::constant(curve.field(), a))
    }

    pub fn one(curve: &Curve) -> FuncElem {
        FuncElem::constant(curve, Fe::ONE)
    }

    pub fn from_x_poly(curve: &Curve, p: Poly) -> FuncElem {
        FuncElem::new(curve, vec![p], Poly::one(curve.field())).expect("unit denominator")
    }

    pub fn x(curve: &Curve) -> FuncElem {
        FuncElem::from_x_poly(curve, Poly::x(curve.field()))
    }

    /// The second affine coordinate; zero on the projective line.
    pub fn y(curve: &Curve) -> FuncElem {
        let k = curve.field();
        FuncElem::new(curve, vec![Poly::zero(k), Poly::one(k)], Poly::one(k)).expect("unit denominator")
    }

    /// The function `P(X, Y, Z)` evaluated in the chart `Z = 1`.
    pub fn from_mpoly(curve: &Curve, p: &MPoly) -> FuncElem {
        FuncElem::new(curve, p.dehomogenize(2), Poly::one(curve.field())).expect("unit denominator")
    }

    /// Ratio of two forms of equal degree.
    pub fn from_forms(curve: &Curve, a: &MPoly, b: &MPoly) -> Result<FuncElem> {
        FuncElem::from_mpoly(curve, a).div(&FuncElem::from_mpoly(curve, b))
    }

    pub fn from_ratfuncs(curve: &Curve, c: &[RatFunc]) -> Result<FuncElem> {
        let k = curve.field();
        let mut den = Poly::one(k);
        for r in c {
            let g = den.gcd(r.den())?;
            den = den.mul(&r.den().div_exact(&g)?);
        }
        let num = c
            .iter()
            .map(|r| Ok(r.num().mul(&den.div_exact(r.den())?)))
            .collect::<Result<Vec<_>>>()?;
        FuncElem::new(curve, num, den)
    }

    /// Coefficients over `K(x)` in the basis `1, y, …, y^{n−1}`.
    pub fn to_ratfuncs(&self) -> Vec<RatFunc> {
        let k = self.curve.field();
        (0..self.curve.y_degree())
            .map(|j| {
                let c = self.num.get(j).cloned().unwrap_or_else(|| Poly::zero(k));
                RatFunc::new(c, self.den.clone()).expect("nonzero denominator")
            })
            .collect()
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn num(&self) -> &[Poly] {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.num.len() <= 1 && self.num.first().is_none_or(|p| p.is_constant()) && self.den.is_one()
    }

    pub fn add(&self, o: &FuncElem) -> FuncElem {
        let k = self.curve.field();
        let n = self.num.len().max(o.num.len());
        let z = Poly::zero(k);
        let num = (0..n)
            .map(|j| {
                let a = self.num.get(j).unwrap_or(&z).mul(&o.den);
                a.add(&o.num.get(j).unwrap_or(&z).mul(&self.den))
            })
            .collect();
        FuncElem::new(&self.curve, num, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn neg(&self) -> FuncElem {
        FuncElem { curve: self.curve.clone(), num: self.num.iter().map(|p| p.neg()).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &FuncElem) -> FuncElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Fe) -> FuncElem {
        FuncElem::new(&self.curve, self.num.iter().map(|p| p.scale(a)).collect(), self.den.clone())
            .expect("nonzero denominator")
    }

    pub fn mul(&self, o: &FuncElem) -> FuncElem {
        let k = self.curve.field();
        if self.is_zero() || o.is_zero() {
            return FuncElem::zero(&self.curve);
        }
        let mut num = vec![Poly::zero(k); self.num.len() + o.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            for (j, b) in o.num.iter().enumerate() {
                num[i + j] = num[i + j].add(&a.mul(b));
            }
        }
        FuncElem::new(&self.curve, num, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn mul_x_poly(&self, p: &Poly) -> FuncElem {
        FuncElem::new(&self.curve, self.num.iter().map(|c| c.mul(p)).collect(), self.den.clone())
            .expect("nonzero denominator")
    }

    pub fn div_x_poly(&self, p: &Poly) -> Result<FuncElem> {
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        FuncElem::new(&self.curve, self.num.clone(), self.den.mul(p))
    }

    pub fn inv(&self) -> Result<FuncElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.curve.y_degree();
        if self.num.len() == 1 {
            return FuncElem::new(&self.curve, vec![self.den.clone()], self.num[0].clone());
        }
        // multiplication-by-self matrix in the basis y^j
        let k = self.curve.field();
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        for _ in 0..n {
            cols.push(cur.to_ratfuncs());
            cur = cur.mul(&FuncElem::y(&self.curve));
        }
        let a: Vec<Vec<RatFunc>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let mut e = vec![RatFunc::zero(k); n];
        e[0] = RatFunc::one(k);
        let c = solve_ratfunc(&a, &e).ok_or_else(|| Error::Internal("singular multiplication matrix".into()))?;
        FuncElem::from_ratfuncs(&self.curve, &c)
    }

    pub fn div(&self, o: &FuncElem) -> Result<FuncElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<FuncElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = FuncElem::one(&self.curve);
        let mut b = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// `dh/dx` as a function, using `dy/dx = −f_x/f_y`.
    pub fn derivative(&self) -> Result<FuncElem> {
        let k = self.curve.field();
        let dden = self.den.derivative();
        let nx: Vec<Poly> = self.num.iter().map(|c| c.derivative().mul(&self.den).sub(&c.mul(&dden))).collect();
        let px = FuncElem::new(&self.curve, nx, self.den.mul(&self.den))?;
        if self.curve.y_degree() <= 1 && self.curve.is_line() {
            return Ok(px);
        }
        let ny: Vec<Poly> = self.num.iter().enumerate().skip(1).map(|(j, c)| c.scale(k.from_int(j as i64))).collect();
        let py = FuncElem::new(&self.curve, ny, self.den.clone())?;
        if py.is_zero() {
            return Ok(px);
        }
        let dydx = self.curve.f_x().div(&self.curve.f_y())?.neg();
        Ok(px.add(&py.mul(&dydx)))
    }

    /// `(N^h, D^h)`: numerator and denominator homogenized to one common degree.
    pub fn homogenized(&self) -> (MPoly, MPoly) {
        let k = self.curve.field();
        let e = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c.deg() + j as i64)
            .max()
            .unwrap_or(0)
            .max(self.den.deg())
            .max(0) as u32;
        let n = MPoly::homogenize(k, &self.num, e).expect("degree bound");
        let d = MPoly::homogenize(k, std::slice::from_ref(&self.den), e).expect("degree bound");
        (n, d)
    }

    pub fn format(&self) -> String {
        if self.num.is_empty() {
            return "0".into();
        }
        let k = self.curve.field();
        let mut terms = Vec::new();
        for (j, c) in self.num.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.format("x");
            let ys = match j {
                0 => String::new(),
                1 => "y".into(),
                _ => format!("y^{j}"),
            };
            terms.push(match (j, c.is_one()) {
                (0, _) => cs,
                (_, true) => ys,
                _ => {
                    if c.coeffs().iter().filter(|a| !a.is_zero()).count() > 1 {
                        format!("({cs})*{ys}")
                    } else {
                        format!("{cs}*{ys}")
                    }
                }
            });
        }
        let n = terms.join(" + ");
        if self.den.is_one() {
            n
        } else {
            let _ = k;
            format!("({n})/({})", self.den.format("x"))
        }
    }
}

/// Differential `h·dx`.
#[derive(Clone, PartialEq, Eq)]
pub struct Differential {
    pub coeff: FuncElem,
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})dx", self.coeff.format())
    }
}

impl Differential {
    pub fn new(coeff: FuncElem) -> Differential {
        Differential { coeff }
    }

    pub fn dx(curve: &Curve) -> Differential {
        Differential::new(FuncElem::one(curve))
    }

    /// `dh`.
    pub fn exact(h: &FuncElem) -> Result<Differential> {
        Ok(Differential::new(h.derivative()?))
    }

    /// `dh/h`.
    pub fn logarithmic(h: &FuncElem) -> Result<Differential> {
        Ok(Differential::new(h.derivative()?.div(h)?))
    }

    pub fn curve(&self) -> &Curve {
        self.coeff.curve()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn add(&self, o: &Differential) -> Differential {
        Differential::new(self.coeff.add(&o.coeff))
    }

    pub fn sub(&self, o: &Differential) -> Differential {
        Differential::new(self.coeff.sub(&o.coeff))
    }

    pub fn scale(&self, a: Fe) -> Differential {
        Differential::new(self.coeff.scale(a))
    }

    pub fn mul_func(&self, h: &FuncElem) -> Differential {
        Differential::new(self.coeff.mul(h))
    }

    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        format!("({})dx", self.coeff.format())
    }
}
