//! Classical Goppa codes `Γ_q(L, f)` built from their alternant parity matrix.

use std::sync::Arc;

use rand::Rng;

use crate::codes::{Distance, LinearCode};
use crate::error::{Error, Result};
use crate::ff::{Fe, FieldTower};
use crate::polymat::{Matrix, Poly};

#[derive(Clone, Debug)]
pub struct GoppaInstance {
    pub tower: Arc<FieldTower>,
    pub support: Vec<Fe>,
    pub f: Poly,
}

impl GoppaInstance {
    pub fn new(tower: Arc<FieldTower>, support: Vec<Fe>, f: Poly) -> Result<GoppaInstance> {
        tower.ext().check(f.field())?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut sorted = support.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInstance("support elements must be distinct".into()));
        }
        if let Some(a) = support.iter().find(|&&a| f.eval(a).is_zero()) {
            return Err(Error::InvalidInstance(format!(
                "Goppa polynomial vanishes at {}",
                tower.ext().format(*a)
            )));
        }
        Ok(GoppaInstance { tower, support, f })
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    /// Same support, Goppa polynomial `f^e`.
    pub fn with_power(&self, e: u64) -> GoppaInstance {
        GoppaInstance { tower: self.tower.clone(), support: self.support.clone(), f: self.f.pow(e) }
    }
}

/// Rows `(α_i^j / f(α_i))_i` for `j < deg f`.
pub fn alternant_parity(inst: &GoppaInstance) -> Matrix {
    let k = inst.tower.ext();
    let r = inst.f.deg().max(0) as usize;
    let inv: Vec<Fe> = inst.support.iter().map(|&a| k.inv(inst.f.eval(a)).expect("checked")).collect();
    let mut m = Matrix::zero(k, r, inst.n());
    for (i, (&a, &fi)) in inst.support.iter().zip(&inv).enumerate() {
        let mut pw = fi;
        for j in 0..r {
            m.set(j, i, pw);
            pw = k.mul(pw, a);
        }
    }
    m
}

/// `Γ_q(L, f)` over the tower base.
pub fn goppa_code(inst: &GoppaInstance) -> Result<LinearCode> {
    LinearCode::from_parity(&alternant_parity(inst)).subfield_subcode(&inst.tower)
}

#[derive(Clone, Debug)]
pub struct GoppaReport {
    pub holds: bool,
    pub n: usize,
    pub k_lhs: usize,
    pub k_rhs: usize,
    pub d: Option<Distance>,
    /// `q·deg f + 1`.
    pub designed_distance: i64,
    /// `n − ℓ(q−1)deg f`.
    pub dimension_bound: i64,
}

/// Builds `Γ_q(L, f^{q−1})` and `Γ_q(L, f^q)` and compares them.
pub fn check_goppa_identity(inst: &GoppaInstance, budget: Option<u128>) -> Result<GoppaReport> {
    if !inst.f.is_squarefree()? {
        return Err(Error::NotSquarefree);
    }
    let q = inst.tower.q();
    let lhs = goppa_code(&inst.with_power(q - 1))?;
    let rhs = goppa_code(&inst.with_power(q))?;
    let holds = lhs.code_eq(&rhs)?;
    let d = match budget {
        Some(b) => Some(lhs.min_distance(b)?),
        None => None,
    };
    let deg = inst.f.deg();
    Ok(GoppaReport {
        holds,
        n: inst.n(),
        k_lhs: lhs.k(),
        k_rhs: rhs.k(),
        d,
        designed_distance: q as i64 * deg + 1,
        dimension_bound: inst.n() as i64 - inst.tower.ell() as i64 * (q as i64 - 1) * deg,
    })
}

/// Random instance with squarefree `f` of degree `1..=max_deg` and support of
/// size `n` drawn from the non-roots of `f`.
pub fn random_instance<R: Rng>(
    tower: &Arc<FieldTower>,
    rng: &mut R,
    max_n: usize,
    max_deg: usize,
) -> Result<GoppaInstance> {
    let k = tower.ext();
    loop {
        let deg = rng.gen_range(1..=max_deg);
        let mut c: Vec<Fe> = (0..deg).map(|_| Fe(rng.gen_range(0..k.size()))).collect();
        c.push(Fe::ONE);
        let f = Poly::new(k, c);
        if !f.is_squarefree()? {
            continue;
        }
        let mut pool: Vec<Fe> = k.elements().filter(|&a| !f.eval(a).is_zero()).collect();
        let n = max_n.min(pool.len());
        if n <= deg {
            continue;
        }
        for i in 0..n {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(n);
        return GoppaInstance::new(tower.clone(), pool, f);
    }
}
