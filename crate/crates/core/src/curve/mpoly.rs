use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::polymat::{LaurentSeries, Poly};

/// Exponent triple `(X, Y, Z)`.
pub type Mono = [u32; 3];

/// Polynomial in `X, Y, Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    terms: BTreeMap<Mono, Fe>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl MPoly {
    pub fn zero(field: &Field) -> MPoly {
        MPoly { field: field.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &Field, a: Fe) -> MPoly {
        MPoly::monomial(field, a, [0, 0, 0])
    }

    pub fn monomial(field: &Field, a: Fe, e: Mono) -> MPoly {
        let mut m = MPoly::zero(field);
        if !a.is_zero() {
            m.terms.insert(e, a);
        }
        m
    }

    /// The variable with index `i` (0 = X, 1 = Y, 2 = Z).
    pub fn var(field: &Field, i: usize) -> MPoly {
        let mut e = [0; 3];
        e[i] = 1;
        MPoly::monomial(field, Fe::ONE, e)
    }

    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (Mono, Fe)>) -> MPoly {
        let mut m = MPoly::zero(field);
        for (e, a) in terms {
            m.add_term(e, a);
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Fe)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Mono) -> Fe {
        self.terms.get(&e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Mono, a: Fe) {
        let v = self.field.add(self.coeff(e), a);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| (e[0] + e[1] + e[2]) as i64).max().unwrap_or(-1)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = self.terms.keys().map(|e| e[0] + e[1] + e[2]);
        match d.next() {
            None => true,
            Some(first) => d.all(|x| x == first),
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (&e, &a) in &o.terms {
            r.add_term(e, a);
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly::from_terms(&self.field, self.terms.iter().map(|(&e, &a)| (e, self.field.neg(a))))
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: Fe) -> MPoly {
        MPoly::from_terms(&self.field, self.terms.iter().map(|(&e, &c)| (e, self.field.mul(a, c))))
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let k = &self.field;
        let mut r = MPoly::zero(k);
        for (ea, &a) in &self.terms {
            for (eb, &b) in &o.terms {
                r.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], k.mul(a, b));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(&self.field, Fe::ONE);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> MPoly {
        let k = &self.field;
        MPoly::from_terms(
            k,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(&e, &a)| {
                let mut d = e;
                d[i] -= 1;
                (d, k.mul(k.from_int(e[i] as i64), a))
            }),
        )
    }

    /// Value at a point whose coordinates live in `target`; coefficients are
    /// carried over by `embed`.
    pub fn eval_in(&self, target: &Field, embed: impl Fn(Fe) -> Fe, pt: &[Fe; 3]) -> Fe {
        let mut acc = Fe::ZERO;
        for (e, &a) in &self.terms {
            let mut t = embed(a);
            for i in 0..3 {
                t = target.mul(t, target.pow(pt[i], e[i] as u64));
            }
            acc = target.add(acc, t);
        }
        acc
    }

    pub fn eval(&self, pt: &[Fe; 3]) -> Fe {
        self.eval_in(&self.field.clone(), |a| a, pt)
    }

    /// Value on series arguments, coefficients carried over by `embed`.
    pub fn eval_series(
        &self,
        target: &Field,
        embed: &dyn Fn(Fe) -> Fe,
        s: &[LaurentSeries; 3],
    ) -> LaurentSeries {
        let mut maxe = [0u32; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                maxe[i] = maxe[i].max(e[i]);
            }
        }
        let top = s.iter().map(|x| x.prec()).max().unwrap_or(1).max(1);
        let powers: Vec<Vec<LaurentSeries>> = (0..3)
            .map(|i| {
                let mut v = vec![LaurentSeries::constant(target, Fe::ONE, top)];
                for j in 1..=maxe[i] as usize {
                    let next = v[j - 1].mul(&s[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc: Option<LaurentSeries> = None;
        for (e, &a) in &self.terms {
            let t = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize])
                .scale(embed(a));
            acc = Some(match acc {
                None => t,
                Some(x) => x.add(&t),
            });
        }
        acc.unwrap_or_else(|| LaurentSeries::zero(target, top))
    }

    /// Substitutes the chart coordinate `c = 1` and returns coefficients of
    /// the second remaining variable's powers, each a polynomial in the first.
    pub fn dehomogenize(&self, c: usize) -> Vec<Poly> {
        let (u, v) = other_two(c);
        let k = &self.field;
        let maxv = self.terms.keys().map(|e| e[v]).max().unwrap_or(0) as usize;
        let mut out = vec![Vec::<Fe>::new(); maxv + 1];
        for (e, &a) in &self.terms {
            let row = &mut out[e[v] as usize];
            let i = e[u] as usize;
            if row.len() <= i {
                row.resize(i + 1, Fe::ZERO);
            }
            row[i] = k.add(row[i], a);
        }
        let mut polys: Vec<Poly> = out.into_iter().map(|c| Poly::new(k, c)).collect();
        while polys.last().is_some_and(|p| p.is_zero()) {
            polys.pop();
        }
        polys
    }

    /// `Σ_j N_j(x) y^j` homogenized to degree `e` in `X, Y, Z`.
    pub fn homogenize(field: &Field, n: &[Poly], e: u32) -> Result<MPoly> {
        let mut m = MPoly::zero(field);
        for (j, p) in n.iter().enumerate() {
            for (i, &a) in p.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let t = (i + j) as u32;
                if t > e {
                    return Err(Error::Internal("homogenization degree too small".into()));
                }
                m.add_term([i as u32, j as u32, e - t], a);
            }
        }
        Ok(m)
    }

    pub fn map(&self, target: &Field, f: impl Fn(Fe) -> Fe) -> MPoly {
        MPoly::from_terms(target, self.terms.iter().map(|(&e, &a)| (e, f(a))))
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let k = &self.field;
        let names = ["x", "y", "z"];
        let mut out = Vec::new();
        for (e, &a) in self.terms.iter().rev() {
            let mut parts = Vec::new();
            let c = k.format(a);
            let is_const = e.iter().all(|&x| x == 0);
            if a != Fe::ONE || is_const {
                parts.push(if c.contains('+') { format!("({c})") } else { c });
            }
            for i in 0..3 {
                match e[i] {
                    0 => {}
                    1 => parts.push(names[i].to_string()),
                    n => parts.push(format!("{}^{n}", names[i])),
                }
            }
            out.push(parts.join("*"));
        }
        out.join(" + ")
    }
}

/// The two coordinate indices other than `c`, ascending.
pub fn other_two(c: usize) -> (usize, usize) {
    match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Monomials of total degree `m` in three variables, ascending.
pub fn monomials_of_degree(m: u32) -> Vec<Mono> {
    let mut v = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            v.push([a, b, m - a - b]);
        }
    }
    v.sort();
    v
}
