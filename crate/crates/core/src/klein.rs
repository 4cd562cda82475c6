//! The Klein quartic `x³y + y³z + xz³` over `F_8` and its standard divisors.

use crate::curve::{Curve, Divisor, Place};
use crate::error::Result;
use crate::ff::{mk_field, Field};
use crate::text::{parse_mpoly, parse_place};

pub const KLEIN_POLY: &str = "x^3*y + y^3*z + x*z^3";

pub const R_IDEALS: [&str; 3] = [
    "<y^2 + w^5*y*z + w^3*z^2, x + w^3*y + w*z>",
    "<y^2 + w^3*y*z + w^6*z^2, x + w^6*y + w^2*z>",
    "<y^2 + y*z + z^2, x + y + z>",
];

/// `F_8 = F_2[w]/(w³ + w + 1)`.
pub fn f8() -> Field {
    mk_field(2, 3, Some(&[1, 1, 0, 1])).expect("F_8")
}

pub fn klein_quartic() -> Result<Curve> {
    let k = f8();
    Curve::plane(parse_mpoly(&k, KLEIN_POLY)?)
}

/// Places and divisors of the worked example.
#[derive(Clone, Debug)]
pub struct KleinSetup {
    pub curve: Curve,
    /// `(0:1:0), (0:0:1), (1:0:0)`.
    pub p: [Place; 3],
    pub r: [Place; 3],
    /// The other 21 rational points.
    pub d: Divisor,
    pub g0: Divisor,
    pub g_minus: Divisor,
}

/// Builds the setup on any curve over `F_8` through the three coordinate
/// points (the Klein quartic by default; perturbed equations for testing).
pub fn setup_on(curve: Curve) -> Result<KleinSetup> {
    let p = [
        parse_place(&curve, "(0:1:0)")?,
        parse_place(&curve, "(0:0:1)")?,
        parse_place(&curve, "(1:0:0)")?,
    ];
    let r = [
        parse_place(&curve, R_IDEALS[0])?,
        parse_place(&curve, R_IDEALS[1])?,
        parse_place(&curve, R_IDEALS[2])?,
    ];
    let rest: Vec<Place> = curve.rational_points()?.into_iter().filter(|q| !p.contains(q)).collect();
    Ok(KleinSetup {
        d: Divisor::sum_of(&rest),
        g0: Divisor::sum_of(&r),
        g_minus: Divisor::sum_of(&p),
        curve,
        p,
        r,
    })
}

pub fn setup() -> Result<KleinSetup> {
    setup_on(klein_quartic()?)
}
