//! Linear codes held as a canonical reduced row echelon generator.

use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{Fe, Field, FieldTower};
use crate::polymat::Matrix;

/// Default cap on the number of enumerated codewords.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

pub struct LinearCode {
    field: Field,
    n: usize,
    gen: Matrix,
    pivots: Vec<usize>,
    dist: OnceLock<Option<u32>>,
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        let dist = OnceLock::new();
        if let Some(&d) = self.dist.get() {
            let _ = dist.set(d);
        }
        LinearCode { field: self.field.clone(), n: self.n, gen: self.gen.clone(), pivots: self.pivots.clone(), dist }
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.n == o.n && self.gen == o.gen
    }
}

impl Eq for LinearCode {}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode[{}, {}]_{}", self.n, self.k(), self.field.size())
    }
}

/// Outcome of a minimum-distance computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    /// Exact minimum weight.
    Exact(u32),
    /// Smallest weight seen among sampled codewords; only an upper bound.
    SampledUpperBound(u32),
    /// The zero code.
    Undefined,
}

impl Distance {
    pub fn exact(self) -> Option<u32> {
        match self {
            Distance::Exact(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::SampledUpperBound(d) => write!(f, "<={d} (sampled)"),
            Distance::Undefined => write!(f, "inf"),
        }
    }
}

impl LinearCode {
    /// Row space of `m`.
    pub fn from_generator(m: &Matrix) -> LinearCode {
        let (gen, pivots) = m.rref();
        LinearCode { field: m.field().clone(), n: m.cols(), gen, pivots, dist: OnceLock::new() }
    }

    pub fn from_rows(field: &Field, n: usize, rows: &[Vec<Fe>]) -> Result<LinearCode> {
        Ok(LinearCode::from_generator(&Matrix::from_rows(field, n, rows)?))
    }

    /// Kernel of `h`.
    pub fn from_parity(h: &Matrix) -> LinearCode {
        let rows = h.kernel();
        LinearCode::from_rows(h.field(), h.cols(), &rows).expect("kernel vectors have full length")
    }

    pub fn zero(field: &Field, n: usize) -> LinearCode {
        LinearCode::from_generator(&Matrix::zero(field, 0, n))
    }

    pub fn full(field: &Field, n: usize) -> LinearCode {
        LinearCode::from_generator(&Matrix::identity(field, n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.rows()
    }

    /// Canonical generator matrix.
    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    /// Parity-check matrix whose kernel is this code.
    pub fn parity(&self) -> Matrix {
        let rows = self.gen.kernel();
        Matrix::from_rows(&self.field, self.n, &rows).expect("full-length rows")
    }

    pub fn contains(&self, word: &[Fe]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let k = &self.field;
        let mut w = word.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c.is_zero() {
                continue;
            }
            for (j, &g) in self.gen.row(i).iter().enumerate() {
                w[j] = k.sub(w[j], k.mul(c, g));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    fn compatible(&self, o: &LinearCode) -> Result<()> {
        self.field.check(&o.field)?;
        if self.n != o.n {
            return Err(Error::LengthMismatch(format!("codes of length {} and {}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn code_eq(&self, o: &LinearCode) -> Result<bool> {
        self.compatible(o)?;
        Ok(self.gen == o.gen)
    }

    /// `self ⊆ o`.
    pub fn code_subset(&self, o: &LinearCode) -> Result<bool> {
        self.compatible(o)?;
        Ok((0..self.k()).all(|i| o.contains(self.gen.row(i))))
    }

    /// `{c ∈ F_q^n : c ∈ C}` for a code over the tower extension.
    pub fn subfield_subcode(&self, t: &FieldTower) -> Result<LinearCode> {
        self.field.check(t.ext())?;
        let h = self.parity();
        let ell = t.ell() as usize;
        let mut rows = Vec::with_capacity(h.rows() * ell);
        for i in 0..h.rows() {
            let coords: Vec<Vec<Fe>> = h.row(i).iter().map(|&a| t.to_base_coords(a)).collect();
            for l in 0..ell {
                rows.push(coords.iter().map(|c| c[l]).collect());
            }
        }
        let hb = Matrix::from_rows(t.base(), self.n, &rows)?;
        Ok(LinearCode::from_parity(&hb))
    }

    /// Image of a base-field code inside the extension.
    pub fn embed(&self, t: &FieldTower) -> Result<LinearCode> {
        self.field.check(t.base())?;
        let rows: Vec<Vec<Fe>> =
            self.gen.row_vecs().into_iter().map(|r| r.into_iter().map(|a| t.embed(a)).collect()).collect();
        LinearCode::from_rows(t.ext(), self.n, &rows)
    }

    /// Encodes `msg` with the canonical generator.
    pub fn codeword(&self, msg: &[Fe]) -> Vec<Fe> {
        let k = &self.field;
        let mut w = vec![Fe::ZERO; self.n];
        for (i, &m) in msg.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for (j, &g) in self.gen.row(i).iter().enumerate() {
                w[j] = k.add(w[j], k.mul(m, g));
            }
        }
        w
    }

    /// Number of nonzero codewords an exhaustive search would visit.
    pub fn enumeration_size(&self) -> u128 {
        (self.field.size() as u128).saturating_pow(self.k() as u32).saturating_sub(1)
    }

    /// Exact minimum distance by enumeration within `budget` codewords.
    pub fn min_distance(&self, budget: u128) -> Result<Distance> {
        if let Some(&d) = self.dist.get() {
            return Ok(d.map_or(Distance::Undefined, Distance::Exact));
        }
        if self.k() == 0 {
            return Ok(Distance::Undefined);
        }
        let needed = self.enumeration_size();
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let d = if self.field.size() == 2 { self.min_distance_binary() } else { self.min_distance_generic() };
        let _ = self.dist.set(Some(d));
        Ok(Distance::Exact(d))
    }

    /// Exact distance when affordable, otherwise a sampled upper bound.
    pub fn min_distance_or_sample(&self, budget: u128, samples: usize, seed: u64) -> Distance {
        match self.min_distance(budget) {
            Ok(d) => d,
            Err(_) => Distance::SampledUpperBound(self.sampled_weight(samples, seed)),
        }
    }

    fn sampled_weight(&self, samples: usize, seed: u64) -> u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = self.gen.row_vecs().iter().map(|r| weight(r)).min().unwrap_or(0);
        for _ in 0..samples {
            let msg: Vec<Fe> = (0..self.k()).map(|_| Fe(rng.gen_range(0..self.field.size()))).collect();
            let w = weight(&self.codeword(&msg));
            if w > 0 {
                best = best.min(w);
            }
        }
        best
    }

    fn min_distance_binary(&self) -> u32 {
        let words = self.n.div_ceil(64);
        let rows: Vec<Vec<u64>> = (0..self.k())
            .map(|i| {
                let mut v = vec![0u64; words];
                for (j, &a) in self.gen.row(i).iter().enumerate() {
                    if !a.is_zero() {
                        v[j / 64] |= 1 << (j % 64);
                    }
                }
                v
            })
            .collect();
        let k = rows.len();
        let split = k.min(8);
        let low = k - split;
        (0u64..1 << split)
            .into_par_iter()
            .map(|prefix| {
                let mut cur = vec![0u64; words];
                for b in 0..split {
                    if prefix >> b & 1 == 1 {
                        xor(&mut cur, &rows[low + b]);
                    }
                }
                let mut best = if prefix == 0 { u32::MAX } else { popcount(&cur) };
                for i in 1u64..1 << low {
                    xor(&mut cur, &rows[i.trailing_zeros() as usize]);
                    best = best.min(popcount(&cur));
                }
                best
            })
            .min()
            .unwrap_or(u32::MAX)
    }

    fn min_distance_generic(&self) -> u32 {
        let k = self.k();
        let q = self.field.size();
        let f = &self.field;
        // normalize the first nonzero message coordinate to 1
        (0..k)
            .into_par_iter()
            .map(|lead| {
                let mut w = self.gen.row(lead).to_vec();
                let mut best = weight(&w);
                let free = k - lead - 1;
                let mut digits = vec![0u32; free];
                loop {
                    let mut pos = 0;
                    while pos < free && digits[pos] == q - 1 {
                        // wrap coordinate back to zero
                        let row = self.gen.row(lead + 1 + pos);
                        let old = Fe(digits[pos]);
                        for (x, &g) in w.iter_mut().zip(row) {
                            *x = f.sub(*x, f.mul(old, g));
                        }
                        digits[pos] = 0;
                        pos += 1;
                    }
                    if pos == free {
                        break;
                    }
                    let row = self.gen.row(lead + 1 + pos);
                    let (old, new) = (Fe(digits[pos]), Fe(digits[pos] + 1));
                    let delta = f.sub(new, old);
                    for (x, &g) in w.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(delta, g));
                    }
                    digits[pos] += 1;
                    best = best.min(weight(&w));
                }
                best
            })
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Text form: field line, `code q=.. n=.. k=..`, then generator rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\ncode q={} n={} k={}\n", self.field.describe(), self.field.size(), self.n, self.k());
        s.push_str(&self.gen.to_text());
        s
    }

    /// Binary rows as strings of 0/1; only for `q = 2`.
    pub fn to_bits(&self) -> Result<String> {
        if self.field.size() != 2 {
            return Err(Error::InvalidInstance("bit format needs a binary code".into()));
        }
        let mut s = format!("code q=2 n={} k={}\n", self.n, self.k());
        for i in 0..self.k() {
            s.extend(self.gen.row(i).iter().map(|a| if a.is_zero() { '0' } else { '1' }));
            s.push('\n');
        }
        Ok(s)
    }
}

fn xor(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

pub fn weight(w: &[Fe]) -> u32 {
    w.iter().filter(|a| !a.is_zero()).count() as u32
}

/// Coordinatewise `c ↦ c^q`.
pub fn frobenius_code(field: &Field, word: &[Fe], q: u64) -> Result<Vec<Fe>> {
    word.iter().map(|&a| field.frobenius_q(a, q)).collect()
}

/// `(n, max(0, n − ℓr), d)` for the subfield subcode of an `[n, n−r, d]` code.
pub fn subfield_params_bound(n: u64, r: u64, d: u64, ell: u64) -> (u64, u64, u64) {
    (n, n.saturating_sub(ell * r), d)
}
