use std::collections::BTreeMap;
use std::fmt;

use crate::ff::Fe;

/// A closed point: its degree `r` over the constant field and the
/// normalized projective coordinates (last nonzero entry 1) of the least
/// representative of its Frobenius orbit, taken in the residue field `E_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub deg: u32,
    pub coords: Vec<Fe>,
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|a| a.0.to_string()).collect();
        write!(f, "P{}({})", self.deg, c.join(":"))
    }
}

impl Place {
    pub fn new(deg: u32, coords: Vec<Fe>) -> Place {
        Place { deg, coords }
    }

    /// Index of the chart coordinate (the last nonzero one, equal to 1).
    pub fn chart(&self) -> usize {
        self.coords.iter().rposition(|c| !c.is_zero()).expect("projective point")
    }
}

/// Finite formal sum of places.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    map: BTreeMap<Place, i64>,
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(p, n)| format!("{n}*{p:?}")).collect();
        write!(f, "[{}]", parts.join(" + "))
    }
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn single(p: Place, n: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_at(p, n);
        d
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Place, i64)>) -> Divisor {
        let mut d = Divisor::zero();
        for (p, n) in pairs {
            d.add_at(p, n);
        }
        d
    }

    /// Sum of the given places with multiplicity one.
    pub fn sum_of(places: &[Place]) -> Divisor {
        Divisor::from_pairs(places.iter().map(|p| (p.clone(), 1)))
    }

    pub fn add_at(&mut self, p: Place, n: i64) {
        let v = self.coeff(&p) + n;
        if v == 0 {
            self.map.remove(&p);
        } else {
            self.map.insert(p, v);
        }
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.map.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &i64)> {
        self.map.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.map.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_empty()
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut r = self.clone();
        for (p, &n) in &o.map {
            r.add_at(p.clone(), n);
        }
        r
    }

    pub fn neg(&self) -> Divisor {
        Divisor::from_pairs(self.map.iter().map(|(p, &n)| (p.clone(), -n)))
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_pairs(self.map.iter().map(|(p, &n)| (p.clone(), k * n)))
    }

    pub fn degree(&self) -> i64 {
        self.map.iter().map(|(p, &n)| n * p.deg as i64).sum()
    }

    /// Coefficientwise `self ≥ o`.
    pub fn geq(&self, o: &Divisor) -> bool {
        self.sub(o).map.values().all(|&n| n >= 0)
    }

    pub fn is_effective(&self) -> bool {
        self.map.values().all(|&n| n >= 0)
    }

    /// `G⁺`.
    pub fn positive_part(&self) -> Divisor {
        Divisor::from_pairs(self.map.iter().filter(|(_, &n)| n > 0).map(|(p, &n)| (p.clone(), n)))
    }

    /// `G⁻`, so that `G = G⁺ − G⁻`.
    pub fn negative_part(&self) -> Divisor {
        Divisor::from_pairs(self.map.iter().filter(|(_, &n)| n < 0).map(|(p, &n)| (p.clone(), -n)))
    }

    /// Positive with every multiplicity equal to 1.
    pub fn is_reduced(&self) -> bool {
        self.map.values().all(|&n| n == 1)
    }

    pub fn support_size(&self) -> usize {
        self.map.len()
    }

    /// Placewise minimum.
    pub fn meet(&self, o: &Divisor) -> Divisor {
        let mut r = Divisor::zero();
        for p in self.map.keys().chain(o.map.keys()) {
            if r.map.contains_key(p) {
                continue;
            }
            let v = self.coeff(p).min(o.coeff(p));
            r.add_at(p.clone(), v);
        }
        r
    }

    /// Placewise `⌊n/q⌋`.
    pub fn floor_div(&self, q: i64) -> Divisor {
        Divisor::from_pairs(self.map.iter().map(|(p, &n)| (p.clone(), n.div_euclid(q))))
    }

    /// Reduced divisor of places with `v_P(G) ≥ 0` and `v_P(G) ≡ q − 1 (mod q)`.
    pub fn g_u(&self, q: i64) -> Divisor {
        Divisor::from_pairs(
            self.map.iter().filter(|(_, &n)| n >= 0 && n.rem_euclid(q) == q - 1).map(|(p, _)| (p.clone(), 1)),
        )
    }

    pub fn supports_disjoint(&self, o: &Divisor) -> bool {
        self.map.keys().all(|p| !o.map.contains_key(p))
    }
}
