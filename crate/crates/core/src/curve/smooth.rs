//! Exact nonsingularity test for a projective plane curve.

use crate::curve::mpoly::MPoly;
use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::polymat::{resultant_y, Poly};

fn trim(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.last().is_some_and(|p| p.is_zero()) {
        v.pop();
    }
    v
}

/// Arithmetic in `L[y]` with `L = K[x]/(m)`, `m` irreducible.
struct ResidueRing<'a> {
    m: &'a Poly,
}

impl ResidueRing<'_> {
    fn reduce(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        Ok(trim(v.iter().map(|c| c.rem(self.m)).collect::<Result<Vec<_>>>()?))
    }

    fn inv(&self, a: &Poly) -> Result<Poly> {
        let (g, s, _) = a.xgcd(self.m);
        if !g.is_one() {
            return Err(Error::Internal("non-invertible residue".into()));
        }
        s.rem(self.m)
    }

    fn rem(&self, a: &[Poly], b: &[Poly]) -> Result<Vec<Poly>> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let inv = self.inv(&b[db])?;
        while r.len() > db {
            let top = r.pop().expect("nonempty");
            let t = top.mul(&inv).rem(self.m)?;
            let shift = r.len() - db;
            for (j, bj) in b.iter().take(db).enumerate() {
                r[shift + j] = r[shift + j].sub(&t.mul(bj)).rem(self.m)?;
            }
            r = trim(r);
        }
        Ok(r)
    }

    fn gcd(&self, a: &[Poly], b: &[Poly]) -> Result<Vec<Poly>> {
        let (mut a, mut b) = (self.reduce(a)?, self.reduce(b)?);
        while !b.is_empty() {
            let r = self.rem(&a, &b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }
}

/// Fails with [`Error::SingularCurve`] unless `F = 0` is nonsingular over the
/// algebraic closure.
pub(crate) fn check_nonsingular(k: &Field, form: &MPoly) -> Result<()> {
    let f = form.dehomogenize(2);
    let fx = trim(form.partial(0).dehomogenize(2));
    let fy = trim(form.partial(1).dehomogenize(2));
    let r1 = if fx.is_empty() { Poly::zero(k) } else { resultant_y(k, &f, &fx)? };
    let r2 = resultant_y(k, &f, &fy)?;
    let g = match (r1.is_zero(), r2.is_zero()) {
        (true, true) => return Err(Error::SingularCurve("curve has a multiple component".into())),
        (true, false) => r2,
        (false, true) => r1,
        (false, false) => r1.gcd(&r2)?,
    };
    if !g.is_constant() {
        for m in g.irreducible_factors()? {
            let ring = ResidueRing { m: &m };
            let mut h = ring.gcd(&f, &fy)?;
            if !fx.is_empty() {
                h = ring.gcd(&h, &fx)?;
            }
            if h.len() > 1 {
                return Err(Error::SingularCurve(format!(
                    "singular point with x-coordinate a root of {}",
                    m.format("x")
                )));
            }
        }
    }
    // points on Z = 0: (t:1:0) and (1:0:0)
    let forms = [form.clone(), form.partial(0), form.partial(1), form.partial(2)];
    let at_line: Vec<Poly> = forms
        .iter()
        .map(|h| {
            let e = h.total_degree().max(0) as u32;
            Poly::new(k, (0..=e).map(|a| h.coeff([a, e - a, 0])).collect())
        })
        .collect();
    let mut acc: Option<Poly> = None;
    for p in at_line.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.monic(),
            Some(a) => a.gcd(p)?,
        });
    }
    match acc {
        None => return Err(Error::SingularCurve("line at infinity is a component".into())),
        Some(a) if a.deg() >= 1 => {
            return Err(Error::SingularCurve(format!("singular point at infinity over {}", a.format("x"))))
        }
        _ => {}
    }
    let e = [Fe::ONE, Fe::ZERO, Fe::ZERO];
    if forms.iter().all(|h| h.eval(&e).is_zero()) {
        return Err(Error::SingularCurve("singular point (1:0:0)".into()));
    }
    Ok(())
}
