use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field, FieldTower};

/// Univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("x"))
    }
}

impl Poly {
    pub fn new(field: &Field, mut c: Vec<Fe>) -> Poly {
        while c.last() == Some(&Fe::ZERO) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, a: Fe) -> Poly {
        Poly::new(field, vec![a])
    }

    /// `x`.
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![Fe::ZERO, Fe::ONE])
    }

    /// `a·x^k`.
    pub fn monomial(field: &Field, a: Fe, k: usize) -> Poly {
        let mut c = vec![Fe::ZERO; k + 1];
        c[k] = a;
        Poly::new(field, c)
    }

    /// `x - a`.
    pub fn linear_root(field: &Field, a: Fe) -> Poly {
        Poly::new(field, vec![field.neg(a), Fe::ONE])
    }

    pub fn from_ints(field: &Field, c: &[i64]) -> Poly {
        Poly::new(field, c.iter().map(|&v| field.from_int(v)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Degree; `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let k = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(k, (0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let k = &self.field;
        let n = self.c.len().max(o.c.len());
        Poly::new(k, (0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|&a| self.field.neg(a)).collect())
    }

    pub fn scale(&self, a: Fe) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|&b| self.field.mul(a, b)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let k = &self.field;
        let mut r = vec![Fe::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[i + j] = k.add(r[i + j], k.mul(a, b));
            }
        }
        Poly::new(k, r)
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.c);
        Poly::new(&self.field, c)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = &self.field;
        if self.deg() < d.deg() {
            return Ok((Poly::zero(k), self.clone()));
        }
        let inv = k.inv(d.lc())?;
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        let mut q = vec![Fe::ZERO; r.len() - dd];
        for i in (0..q.len()).rev() {
            let t = k.mul(r[i + dd], inv);
            if t.is_zero() {
                continue;
            }
            q[i] = t;
            for (j, &b) in d.c.iter().enumerate() {
                r[i + j] = k.sub(r[i + j], k.mul(t, b));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(k, q), Poly::new(k, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()).expect("nonzero leading coefficient"))
    }

    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        self.field.check(&o.field)?;
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `(g, s, t)` with `s·self + t·o = g` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let k = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero(k));
        let (mut t0, mut t1) = (Poly::zero(k), Poly::one(k));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv(r0.lc()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Poly {
        let k = &self.field;
        Poly::new(
            k,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| k.mul(k.from_int(i as i64), a)).collect(),
        )
    }

    pub fn eval(&self, a: Fe) -> Fe {
        let k = &self.field;
        self.c.iter().rev().fold(Fe::ZERO, |acc, &c| k.add(k.mul(acc, a), c))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for &c in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(&self.field, c));
        }
        acc
    }

    /// Applies a coefficient map, possibly into another field.
    pub fn map(&self, target: &Field, f: impl Fn(Fe) -> Fe) -> Poly {
        Poly::new(target, self.c.iter().map(|&a| f(a)).collect())
    }

    pub fn embed(&self, t: &FieldTower) -> Poly {
        self.map(t.ext(), |a| t.embed(a))
    }

    /// Pulls coefficients back into the base field, if they all lie there.
    pub fn descend(&self, t: &FieldTower) -> Option<Poly> {
        let c: Option<Vec<Fe>> = self.c.iter().map(|&a| t.try_descend(a)).collect();
        Some(Poly::new(t.base(), c?))
    }

    /// `g` with `g^p = self` when every exponent is a multiple of `p`.
    pub fn pth_root(&self) -> Option<Poly> {
        let k = &self.field;
        let p = k.p() as usize;
        if self.c.iter().enumerate().any(|(i, a)| i % p != 0 && !a.is_zero()) {
            return None;
        }
        Some(Poly::new(k, self.c.iter().step_by(p).map(|&a| k.pth_root(a)).collect()))
    }

    pub fn powmod(&self, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field).rem(m)?;
        let mut b = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// `x^(Q^k) mod m` by repeated `Q`-th powering.
    fn x_frob_pow(&self, k: u32) -> Result<Poly> {
        let q = self.field.size() as u128;
        let mut r = Poly::x(&self.field).rem(self)?;
        for _ in 0..k {
            r = r.powmod(q, self)?;
        }
        Ok(r)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d)?.is_one())
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Err(Error::ConstantPolynomial);
        }
        let n = self.deg() as u32;
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let x = Poly::x(&self.field);
        if f.x_frob_pow(n)? != x.rem(&f)? {
            return Ok(false);
        }
        let mut r = 2u32;
        let mut m = n;
        while m > 1 {
            if m.is_multiple_of(r) {
                while m.is_multiple_of(r) {
                    m /= r;
                }
                let h = f.x_frob_pow(n / r)?.sub(&x);
                if !f.gcd(&h)?.is_one() {
                    return Ok(false);
                }
            }
            r += 1;
        }
        Ok(true)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Poly::one(&self.field));
        }
        let f = self.monic();
        let d = f.derivative();
        if d.is_zero() {
            return f.pth_root().expect("zero derivative means p-th power").radical();
        }
        let g = f.gcd(&d)?;
        let w = f.div_exact(&g)?;
        // strip from f every root already present in w; the rest is a p-th power
        let mut c = f.clone();
        loop {
            let h = c.gcd(&w)?;
            if h.is_one() {
                break;
            }
            c = c.div_exact(&h)?;
        }
        if c.is_constant() {
            return Ok(w);
        }
        let rc = c.pth_root().expect("remaining part is a p-th power").radical()?;
        let l = w.gcd(&rc)?;
        w.mul(&rc).div_exact(&l)
    }

    /// Distinct roots in the coefficient field, ascending.
    pub fn roots(&self) -> Result<Vec<Fe>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(Vec::new());
        }
        let k = &self.field;
        let f = self.monic();
        let x = Poly::x(k);
        let split = f.x_frob_pow(1)?.sub(&x);
        let g = f.gcd(&split)?;
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(&g, &mut rng, &mut out)?;
        out.sort();
        Ok(out)
    }

    /// Distinct monic irreducible factors, sorted by degree then coefficients.
    pub fn irreducible_factors(&self) -> Result<Vec<Poly>> {
        let rad = self.radical()?;
        let k = self.field.clone();
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0xfac7);
        let mut f = rad;
        let x = Poly::x(&k);
        let mut h = x.clone();
        let mut i = 1u32;
        while f.deg() >= 2 * i as i64 {
            h = h.powmod(k.size() as u128, &f)?;
            let g = f.gcd(&h.sub(&x))?;
            if !g.is_one() {
                equal_degree(&g, i, &mut rng, &mut out)?;
                f = f.div_exact(&g)?;
                h = h.rem(&f)?;
            }
            i += 1;
        }
        if f.deg() > 0 {
            out.push(f);
        }
        out.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.c.cmp(&b.c)));
        Ok(out)
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let k = &self.field;
        let mut terms = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = k.format(a);
            let coef = if coef.contains('+') { format!("({coef})") } else { coef };
            terms.push(match (a == Fe::ONE, i) {
                (_, 0) => coef,
                (true, _) => mono,
                (false, _) => format!("{coef}*{mono}"),
            });
        }
        terms.join(" + ")
    }
}

/// Splits a squarefree product of irreducible factors of degree `d`.
fn equal_degree(g: &Poly, d: u32, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let k = g.field().clone();
    if g.deg() == d as i64 {
        out.push(g.monic());
        return Ok(());
    }
    loop {
        let n = g.deg() as usize;
        let a = Poly::new(&k, (0..n).map(|_| Fe(rng.gen_range(0..k.size()))).collect());
        if a.is_constant() {
            continue;
        }
        let b = if k.p() == 2 {
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..k.m() * d {
                cur = cur.mul(&cur).rem(g)?;
                acc = acc.add(&cur);
            }
            acc
        } else {
            // a^((Q^d-1)/2) as (Π_{i<d} a^{Q^i})^((Q-1)/2)
            let q = k.size() as u128;
            let mut norm = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.powmod(q, g)?;
                norm = norm.mul(&cur).rem(g)?;
            }
            norm.powmod((q - 1) / 2, g)?.sub(&Poly::one(&k))
        };
        let s = g.gcd(&b)?;
        if s.deg() > 0 && s.deg() < g.deg() {
            let t = g.div_exact(&s)?;
            equal_degree(&s, d, rng, out)?;
            equal_degree(&t, d, rng, out)?;
            return Ok(());
        }
    }
}

/// Equal-degree splitting of a squarefree product of linear factors.
fn split_linear(g: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<Fe>) -> Result<()> {
    let k = g.field().clone();
    match g.deg() {
        d if d <= 0 => return Ok(()),
        1 => {
            out.push(k.neg(g.monic().coeff(0)));
            return Ok(());
        }
        _ => {}
    }
    loop {
        let delta = Fe(rng.gen_range(1..k.size()));
        let h = if k.p() == 2 {
            // absolute trace of δx
            let dx = Poly::monomial(&k, delta, 1).rem(g)?;
            let mut acc = dx.clone();
            let mut cur = dx;
            for _ in 1..k.m() {
                cur = cur.mul(&cur).rem(g)?;
                acc = acc.add(&cur);
            }
            acc
        } else {
            let shift = Poly::new(&k, vec![delta, Fe::ONE]);
            let e = (k.size() as u128 - 1) / 2;
            shift.powmod(e, g)?.sub(&Poly::one(&k))
        };
        let a = g.gcd(&h)?;
        if a.deg() > 0 && a.deg() < g.deg() {
            let b = g.div_exact(&a)?;
            split_linear(&a, rng, out)?;
            split_linear(&b, rng, out)?;
            return Ok(());
        }
    }
}
