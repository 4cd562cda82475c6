//! Prime fields, extension fields in a fixed polynomial basis, and towers
//! `F_q ⊂ F_{q^ℓ}`.
//!
//! An element is stored as the integer `Σ c_i p^i` where `c_0 + c_1 w + …`
//! is its reduced representative modulo the field's modulus. Multiplication
//! goes through exp/log tables built once per field; the tables are an
//! implementation detail and never leak into the representation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::polymat::Poly;

/// Largest supported field cardinality.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// A field element in polynomial-basis encoding. Meaningless without its [`Field`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub struct FieldCtx {
    p: u32,
    m: u32,
    size: u32,
    modulus: Vec<u32>,
    gen_name: String,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Shared handle to an immutable field context.
#[derive(Clone)]
pub struct Field(Arc<FieldCtx>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Digit-level arithmetic used only while building tables.
struct Slow<'a> {
    p: u32,
    m: usize,
    modulus: &'a [u32],
}

impl Slow<'_> {
    fn digits(&self, mut v: u32) -> Vec<u32> {
        let mut d = vec![0; self.m];
        for x in d.iter_mut() {
            *x = v % self.p;
            v /= self.p;
        }
        d
    }

    fn value(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus
        for k in (self.m..2 * self.m).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..self.m {
                let sub = c * self.modulus[i] as u64 % p;
                prod[k - self.m + i] = (prod[k - self.m + i] + p - sub) % p;
            }
        }
        let low: Vec<u32> = prod[..self.m].iter().map(|&c| c as u32).collect();
        self.value(&low)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl Field {
    /// Builds `F_{p^m}`. When `modulus` is `None` the least irreducible monic
    /// polynomial is used, ordering candidates by the integer `Σ c_i p^i` of
    /// their coefficient sequence (for `F_8` this is `T^3+T+1`).
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>, gen_name: &str) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidModulus("extension degree must be positive".into()));
        }
        let size = (p as u64).checked_pow(m).filter(|&s| s <= MAX_FIELD_SIZE);
        let size = size.ok_or(Error::FieldTooLarge { p, m })? as u32;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 || c[m as usize] != 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected a monic polynomial of degree {m}"
                    )));
                }
                if c.iter().any(|&x| x >= p) {
                    return Err(Error::InvalidModulus("coefficient out of range".into()));
                }
                if m > 1 && !Self::poly_irreducible_over_prime(p, c) {
                    return Err(Error::ReducibleModulus(p));
                }
                c.to_vec()
            }
            None => Self::default_modulus(p, m),
        };
        Ok(Self::build(p, m, size, modulus, gen_name))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None, "g")
    }

    fn poly_irreducible_over_prime(p: u32, c: &[u32]) -> bool {
        let fp = Self::build(p, 1, p, vec![0, 1], "g");
        let poly = Poly::new(&fp, c.iter().map(|&x| Fe(x)).collect());
        poly.is_irreducible().unwrap_or(false)
    }

    fn default_modulus(p: u32, m: u32) -> Vec<u32> {
        if m == 1 {
            return vec![0, 1];
        }
        let count = (p as u64).pow(m);
        for v in 0..count {
            let mut c = Vec::with_capacity(m as usize + 1);
            let mut x = v;
            for _ in 0..m {
                c.push((x % p as u64) as u32);
                x /= p as u64;
            }
            c.push(1);
            if c[0] == 0 {
                continue;
            }
            if Self::poly_irreducible_over_prime(p, &c) {
                return c;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build(p: u32, m: u32, size: u32, modulus: Vec<u32>, gen_name: &str) -> Field {
        let order = size as u64 - 1;
        let slow = Slow { p, m: m as usize, modulus: &modulus };
        let factors = prime_factors(order.max(1));
        let mut gen = 0u32;
        for cand in 1..size {
            if order == 1 || factors.iter().all(|&r| slow.pow(cand, order / r) != 1) {
                gen = cand;
                break;
            }
        }
        let n = order as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; size as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = slow.mul(cur, gen);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Field(Arc::new(FieldCtx {
            p,
            m,
            size,
            modulus,
            gen_name: gen_name.to_string(),
            exp,
            log,
        }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn gen_name(&self) -> &str {
        &self.0.gen_name
    }

    pub fn same(&self, other: &Field) -> bool {
        self == other
    }

    pub fn check(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The polynomial-basis generator `w` (equal to the integer `p` in
    /// prime fields, reduced mod p).
    pub fn gen(&self) -> Fe {
        if self.0.m == 1 {
            Fe(0)
        } else {
            Fe(self.0.p)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.size).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.0.m == 1 {
            return Fe((a.0 + b.0) % p);
        }
        let (mut x, mut y, mut r, mut pw) = (a.0, b.0, 0, 1);
        for _ in 0..self.0.m {
            r += ((x % p + y % p) % p) * pw;
            pw *= p;
            x /= p;
            y /= p;
        }
        Fe(r)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let (mut x, mut r, mut pw) = (a.0, 0, 1);
        for _ in 0..self.0.m {
            r += ((p - x % p) % p) * pw;
            pw *= p;
            x /= p;
        }
        Fe(r)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let c = &self.0;
        Fe(c.exp[(c.log[a.0 as usize] + c.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let c = &self.0;
        let n = c.size - 1;
        Ok(Fe(c.exp[((n - c.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        let c = &self.0;
        let n = (c.size - 1) as u64;
        Fe(c.exp[((c.log[a.0 as usize] as u64 * (e % n)) % n) as usize])
    }

    /// `a^k` for a possibly negative exponent.
    pub fn powi(&self, a: Fe, k: i64) -> Result<Fe> {
        if k >= 0 {
            Ok(self.pow(a, k as u64))
        } else {
            Ok(self.pow(self.inv(a)?, k.unsigned_abs()))
        }
    }

    /// `a^q`; `q` must be a power of the characteristic.
    pub fn frobenius_q(&self, a: Fe, q: u64) -> Result<Fe> {
        if !is_power_of(q, self.0.p as u64) {
            return Err(Error::NotAPower { q, p: self.0.p });
        }
        Ok(self.pow(a, q))
    }

    /// The unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: Fe) -> Fe {
        let e = (self.0.p as u64).pow(self.0.m - 1);
        self.pow(a, e)
    }

    /// Inverse of `a ↦ a^q` on this field.
    pub fn qth_root(&self, a: Fe, q: u64) -> Fe {
        let mut r = a;
        let mut k = q;
        while k > 1 {
            r = self.pth_root(r);
            k /= self.0.p as u64;
        }
        r
    }

    /// Coefficients of `a` over `F_p`, low to high.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let p = self.0.p;
        let mut v = a.0;
        (0..self.0.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let p = self.0.p;
        Fe(c.iter().take(self.0.m as usize).rev().fold(0, |acc, &x| acc * p + x % p))
    }

    /// Whether `a` lies in the prime field.
    pub fn is_prime_subfield(&self, a: Fe) -> bool {
        a.0 < self.0.p
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        let n = (self.0.size - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        n / gcd_u64(n, l)
    }

    pub fn format(&self, a: Fe) -> String {
        if self.0.m == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let g = &self.0.gen_name;
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => g.clone(),
                _ => format!("{g}^{i}"),
            };
            terms.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Text form `field p=2 m=3 modulus=1,1,0,1 gen=w`.
    pub fn describe(&self) -> String {
        let m: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!(
            "field p={} m={} modulus={} gen={}",
            self.0.p,
            self.0.m,
            m.join(","),
            self.0.gen_name
        )
    }
}

pub(crate) fn is_power_of(q: u64, p: u64) -> bool {
    if q == 0 {
        return false;
    }
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Convenience constructor matching the text interface.
pub fn mk_field(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
    Field::new(p, m, modulus, "w")
}

/// Left inverse of an injective `F_p`-linear map given by its columns.
#[derive(Clone, Debug)]
struct PrimeSolver {
    p: u32,
    rows: usize,
    /// Row-reduced augmented system: for each pivot, (row-combination, column).
    inv: Vec<Vec<u32>>,
    pivot_rows: Vec<usize>,
    cols: Vec<Vec<u32>>,
}

impl PrimeSolver {
    fn new(p: u32, cols: Vec<Vec<u32>>) -> Result<Self> {
        let rows = cols.first().map_or(0, |c| c.len());
        let n = cols.len();
        // Gaussian elimination on the transpose-free system A x = b where
        // A is rows×n; we record a left inverse L (n×rows) with L A = I.
        let pm = p as u64;
        let mut a: Vec<Vec<u64>> = (0..rows)
            .map(|r| (0..n).map(|c| cols[c][r] as u64).collect())
            .collect();
        let mut ops: Vec<Vec<u64>> = (0..rows)
            .map(|r| (0..rows).map(|c| u64::from(r == c)).collect())
            .collect();
        let mut pivot_rows = Vec::with_capacity(n);
        let mut row = 0;
        for col in 0..n {
            let Some(pr) = (row..rows).find(|&r| a[r][col] != 0) else {
                return Err(Error::Internal("tower basis is not independent".into()));
            };
            a.swap(row, pr);
            ops.swap(row, pr);
            let inv = modinv(a[row][col], pm);
            for x in a[row].iter_mut() {
                *x = *x * inv % pm;
            }
            for x in ops[row].iter_mut() {
                *x = *x * inv % pm;
            }
            for r in 0..rows {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..n {
                        a[r][c] = (a[r][c] + pm * pm - f * a[row][c]) % pm;
                    }
                    for c in 0..rows {
                        ops[r][c] = (ops[r][c] + pm * pm - f * ops[row][c]) % pm;
                    }
                }
            }
            pivot_rows.push(row);
            row += 1;
        }
        let inv = (0..n).map(|i| ops[i].iter().map(|&x| x as u32).collect()).collect();
        Ok(PrimeSolver { p, rows, inv, pivot_rows, cols })
    }

    /// Solves `A x = b`; returns `None` when `b` is outside the column span.
    fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let pm = self.p as u64;
        let x: Vec<u32> = self
            .inv
            .iter()
            .map(|row| {
                (row.iter().zip(b).map(|(&l, &v)| l as u64 * v as u64).sum::<u64>() % pm) as u32
            })
            .collect();
        let _ = &self.pivot_rows;
        for r in 0..self.rows {
            let s: u64 = self.cols.iter().zip(&x).map(|(c, &xi)| c[r] as u64 * xi as u64).sum();
            if (s % pm) as u32 != b[r] % self.p {
                return None;
            }
        }
        Some(x)
    }
}

fn modinv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `F_q ⊂ F_{q^ℓ}` with an explicit embedding.
pub struct FieldTower {
    base: Field,
    ext: Field,
    ell: u32,
    embed_image: Fe,
    embed_table: Vec<u32>,
    descend: PrimeSolver,
    coords: PrimeSolver,
    basis: Vec<Fe>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({:?} ⊂ {:?})", self.base, self.ext)
    }
}

impl FieldTower {
    pub fn new(base: &Field, ext: &Field) -> Result<FieldTower> {
        if base.p() != ext.p() || !ext.m().is_multiple_of(base.m()) {
            return Err(Error::InvalidInstance(format!(
                "F_{} is not a subfield of F_{}",
                base.size(),
                ext.size()
            )));
        }
        let ell = ext.m() / base.m();
        // smallest root of the base modulus inside ext
        let modulus: Vec<Fe> = base.modulus().iter().map(|&c| Fe(c)).collect();
        let embed_image = if base.m() == 1 {
            Fe::ZERO
        } else if base == ext {
            base.gen()
        } else {
            ext.elements()
                .find(|&x| {
                    let mut acc = Fe::ZERO;
                    for &c in modulus.iter().rev() {
                        acc = ext.add(ext.mul(acc, x), c);
                    }
                    acc.is_zero()
                })
                .ok_or_else(|| Error::Internal("base modulus has no root in extension".into()))?
        };
        let gamma_pows: Vec<Fe> = (0..base.m()).map(|i| ext.pow(embed_image, i as u64)).collect();
        let embed_one = |a: Fe| -> Fe {
            let mut acc = Fe::ZERO;
            for (i, d) in base.coeffs(a).into_iter().enumerate() {
                if d != 0 {
                    acc = ext.add(acc, ext.mul(Fe(d), gamma_pows[i]));
                }
            }
            acc
        };
        let embed_table: Vec<u32> = base.elements().map(|a| embed_one(a).0).collect();
        let descend_cols = gamma_pows.iter().map(|&g| ext.coeffs(g)).collect();
        let descend = PrimeSolver::new(base.p(), descend_cols)?;
        let w = if ext.m() == 1 { Fe::ONE } else { ext.gen() };
        let basis: Vec<Fe> = (0..ell).map(|j| ext.pow(w, j as u64)).collect();
        let mut coord_cols = Vec::new();
        for &b in &basis {
            for &g in &gamma_pows {
                coord_cols.push(ext.coeffs(ext.mul(g, b)));
            }
        }
        let coords = PrimeSolver::new(base.p(), coord_cols)?;
        Ok(FieldTower {
            base: base.clone(),
            ext: ext.clone(),
            ell,
            embed_image,
            embed_table,
            descend,
            coords,
            basis,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `q = |base|`.
    pub fn q(&self) -> u64 {
        self.base.size() as u64
    }

    pub fn embed_image(&self) -> Fe {
        self.embed_image
    }

    pub fn embed(&self, a: Fe) -> Fe {
        Fe(self.embed_table[a.0 as usize])
    }

    /// The base element mapping to `a`, or `None` when `a^q ≠ a`.
    pub fn try_descend(&self, a: Fe) -> Option<Fe> {
        if self.ext.pow(a, self.q()) != a {
            return None;
        }
        let x = self.descend.solve(&self.ext.coeffs(a))?;
        Some(self.base.from_coeffs(&x))
    }

    /// `Tr_{F_{q^ℓ}/F_q}(a)` as a base element.
    pub fn trace_to_base(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut cur = a;
        for _ in 0..self.ell {
            acc = self.ext.add(acc, cur);
            cur = self.ext.pow(cur, self.q());
        }
        self.try_descend(acc).expect("trace is fixed by Frobenius")
    }

    /// The `F_q`-basis `1, w, …, w^{ℓ-1}` of the extension.
    pub fn basis(&self) -> &[Fe] {
        &self.basis
    }

    /// Coordinates of `a` in [`Self::basis`].
    pub fn to_base_coords(&self, a: Fe) -> Vec<Fe> {
        let x = self.coords.solve(&self.ext.coeffs(a)).expect("basis spans the extension");
        let m = self.base.m() as usize;
        x.chunks(m).map(|c| self.base.from_coeffs(c)).collect()
    }

    pub fn from_base_coords(&self, c: &[Fe]) -> Fe {
        c.iter().zip(&self.basis).fold(Fe::ZERO, |acc, (&ci, &b)| {
            self.ext.add(acc, self.ext.mul(self.embed(ci), b))
        })
    }
}

/// Element bundled with its field, for display and the public API.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Fe,
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}
