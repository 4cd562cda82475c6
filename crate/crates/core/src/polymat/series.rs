use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};

/// Truncated Laurent series `Σ_{e ≥ val} c_e t^e + O(t^prec)`.
///
/// Every coefficient below `prec` is exact. A series that is zero to its
/// known precision has no coefficients and `val == prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    val: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.push(format!("({})t^{}", self.field.format(c), self.val + i as i64));
            }
        }
        terms.push(format!("O(t^{})", self.prec));
        write!(f, "{}", terms.join(" + "))
    }
}

impl LaurentSeries {
    /// Coefficients start at `t^start`; those at or beyond `prec` are dropped.
    pub fn new(field: &Field, start: i64, mut coeffs: Vec<Fe>, prec: i64) -> LaurentSeries {
        let keep = (prec - start).max(0) as usize;
        coeffs.resize(keep, Fe::ZERO);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => LaurentSeries { field: field.clone(), val: prec, coeffs: Vec::new(), prec },
            Some(i) => {
                coeffs.drain(..i);
                LaurentSeries { field: field.clone(), val: start + i as i64, coeffs, prec }
            }
        }
    }

    pub fn zero(field: &Field, prec: i64) -> LaurentSeries {
        LaurentSeries::new(field, prec, Vec::new(), prec)
    }

    pub fn constant(field: &Field, a: Fe, prec: i64) -> LaurentSeries {
        LaurentSeries::new(field, 0, vec![a], prec)
    }

    /// `t^k` known to `prec`.
    pub fn monomial(field: &Field, k: i64, prec: i64) -> LaurentSeries {
        LaurentSeries::new(field, k, vec![Fe::ONE], prec)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Valuation; equals `prec` when the series is zero to precision.
    pub fn val(&self) -> i64 {
        self.val
    }

    /// Number of known coefficients from the valuation on.
    pub fn rel_prec(&self) -> i64 {
        self.prec - self.val
    }

    pub fn is_zero_to_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.first().copied().unwrap_or(Fe::ZERO)
    }

    /// Coefficient of `t^e`; errors beyond the known precision.
    pub fn coeff(&self, e: i64) -> Result<Fe> {
        if e >= self.prec {
            return Err(Error::Precision(format!("coefficient t^{e} beyond precision {}", self.prec)));
        }
        if e < self.val {
            return Ok(Fe::ZERO);
        }
        Ok(self.coeffs[(e - self.val) as usize])
    }

    pub fn add(&self, o: &LaurentSeries) -> LaurentSeries {
        let k = &self.field;
        let prec = self.prec.min(o.prec);
        let start = self.val.min(o.val).min(prec);
        let coeffs = (start..prec)
            .map(|e| k.add(self.coeff(e).unwrap(), o.coeff(e).unwrap()))
            .collect();
        LaurentSeries::new(k, start, coeffs, prec)
    }

    pub fn neg(&self) -> LaurentSeries {
        let k = &self.field;
        LaurentSeries::new(k, self.val, self.coeffs.iter().map(|&a| k.neg(a)).collect(), self.prec)
    }

    pub fn sub(&self, o: &LaurentSeries) -> LaurentSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Fe) -> LaurentSeries {
        let k = &self.field;
        if a.is_zero() {
            return LaurentSeries::zero(k, self.prec);
        }
        LaurentSeries::new(k, self.val, self.coeffs.iter().map(|&c| k.mul(a, c)).collect(), self.prec)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentSeries {
        LaurentSeries::new(&self.field, self.val + k, self.coeffs.clone(), self.prec + k)
    }

    pub fn mul(&self, o: &LaurentSeries) -> LaurentSeries {
        let k = &self.field;
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let start = self.val + o.val;
        let n = (prec - start).max(0) as usize;
        let mut c = vec![Fe::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = k.add(c[i + j], k.mul(a, b));
            }
        }
        LaurentSeries::new(k, start, c, prec)
    }

    /// `self^e`; `self^0` is 1 known to the relative precision of `self`.
    pub fn pow(&self, e: u64) -> LaurentSeries {
        if e == 0 {
            return LaurentSeries::constant(&self.field, Fe::ONE, self.rel_prec());
        }
        let mut acc: Option<LaurentSeries> = None;
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc.expect("e > 0")
    }

    pub fn invert(&self) -> Result<LaurentSeries> {
        let k = &self.field;
        if self.is_zero_to_prec() {
            return Err(Error::Precision("inverting a series that is zero to its precision".into()));
        }
        let n = self.coeffs.len();
        let inv0 = k.inv(self.coeffs[0])?;
        let mut b = vec![Fe::ZERO; n];
        b[0] = inv0;
        for i in 1..n {
            let mut s = Fe::ZERO;
            for j in 1..=i {
                s = k.add(s, k.mul(self.coeffs[j], b[i - j]));
            }
            b[i] = k.neg(k.mul(s, inv0));
        }
        Ok(LaurentSeries::new(k, -self.val, b, -self.val + n as i64))
    }

    pub fn div(&self, o: &LaurentSeries) -> Result<LaurentSeries> {
        Ok(self.mul(&o.invert()?))
    }

    /// `d/dt`.
    pub fn derivative(&self) -> LaurentSeries {
        let k = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| k.mul(k.from_int(self.val + i as i64), a))
            .collect();
        LaurentSeries::new(k, self.val - 1, c, self.prec - 1)
    }

    /// `self(inner(t))`; `inner` must have positive valuation.
    pub fn compose(&self, inner: &LaurentSeries) -> Result<LaurentSeries> {
        let k = &self.field;
        if inner.is_zero_to_prec() || inner.val < 1 {
            return Err(Error::Precision("composition needs an inner series of positive valuation".into()));
        }
        let vi = inner.val;
        let ri = inner.rel_prec();
        let prec = (self.prec * vi).min(self.val * vi + ri);
        let base = if self.val < 0 { inner.invert()? } else { inner.clone() };
        let mut acc = LaurentSeries::zero(k, prec);
        let mut cur = base.pow(self.val.unsigned_abs());
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e * vi >= prec {
                break;
            }
            if !c.is_zero() {
                acc = acc.add(&cur.scale(c));
            }
            cur = cur.mul(inner);
        }
        Ok(LaurentSeries::new(k, acc.val, acc.coeffs, acc.prec.min(prec)))
    }

    /// Applies `f` to every coefficient (for example a field embedding).
    pub fn map(&self, target: &Field, f: impl Fn(Fe) -> Fe) -> LaurentSeries {
        LaurentSeries::new(target, self.val, self.coeffs.iter().map(|&a| f(a)).collect(), self.prec)
    }

    /// Known coefficients from `val` to `prec`.
    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }
}
