use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::polymat::Poly;

/// Element of `K(x)`: `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(&k) });
        }
        let g = num.gcd(&den)?;
        let (mut n, mut d) = (num.div_exact(&g)?, den.div_exact(&g)?);
        let lc = k.inv(d.lc())?;
        n = n.scale(lc);
        d = d.scale(lc);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let k = p.field().clone();
        RatFunc { num: p, den: Poly::one(&k) }
    }

    pub fn zero(k: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(k))
    }

    pub fn one(k: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(k))
    }

    pub fn constant(k: &Field, a: Fe) -> RatFunc {
        RatFunc::from_poly(Poly::constant(k, a))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero den");
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
            .expect("nonzero den")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.field());
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero den")
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        RatFunc::new(self.num.mul(p), self.den.clone()).expect("nonzero den")
    }

    pub fn scale(&self, a: Fe) -> RatFunc {
        RatFunc::new(self.num.scale(a), self.den.clone()).expect("nonzero den")
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }
}

/// Solves `A x = b` over `K(x)`; `None` when singular.
pub fn solve_ratfunc(a: &[Vec<RatFunc>], b: &[RatFunc]) -> Option<Vec<RatFunc>> {
    let n = a.len();
    let mut m: Vec<Vec<RatFunc>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    for c in 0..n {
        let pr = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, pr);
        let inv = m[c][c].inv().ok()?;
        for j in c..=n {
            m[c][j] = m[c][j].mul(&inv);
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=n {
                    let t = f.mul(&m[c][j]);
                    m[r][j] = m[r][j].sub(&t);
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square matrix over `K(x)`.
pub fn invert_ratfunc(a: &[Vec<RatFunc>]) -> Option<Vec<Vec<RatFunc>>> {
    let n = a.len();
    let k = a.first()?.first()?.field().clone();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let e: Vec<RatFunc> =
            (0..n).map(|j| if i == j { RatFunc::one(&k) } else { RatFunc::zero(&k) }).collect();
        cols.push(solve_ratfunc(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}
