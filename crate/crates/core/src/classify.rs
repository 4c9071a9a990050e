//! Element classes and relations: projections, EP, partial isometries, SEP,
//! one-sided `a`-idempotents and one-sided `a`-equivalence.

use serde::Serialize;

use crate::error::Result;
use crate::geninv::InverseBundle;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub is_projection: bool,
    pub is_ep: bool,
    pub is_pi: bool,
    pub is_sep: bool,
    pub in_rdag: bool,
    pub in_rsharp: bool,
}

/// `e² = e = e*`. In any `*`-ring this agrees with `e = ee*` and `e = e*e`;
/// the three forms are asserted to coincide.
pub fn is_projection(e: &Matrix) -> bool {
    let e_star = e.star();
    if e_star == *e {
        // ee* and e*e both collapse to e² here
        return e * e == *e;
    }
    debug_assert!(*e != e * &e_star, "projection equivalence e = ee* broken");
    debug_assert!(*e != &e_star * e, "projection equivalence e = e*e broken");
    false
}

/// `a# = a†`.
pub fn is_ep(b: &InverseBundle) -> Result<bool> {
    Ok(b.require_group()? == b.require_mp()?)
}

/// `a* = a†`.
pub fn is_pi(b: &InverseBundle) -> Result<bool> {
    Ok(b.star() == b.require_mp()?)
}

/// `a* = a† = a#`.
pub fn is_sep(b: &InverseBundle) -> Result<bool> {
    let mp = b.require_mp()?;
    Ok(b.star() == mp && b.require_group()? == mp)
}

pub fn classify(b: &InverseBundle) -> Classification {
    let in_rdag = b.has_mp();
    let in_rsharp = b.has_group();
    let is_pi = in_rdag && b.star() == b.mp().unwrap();
    let is_ep = b.in_both() && b.mp() == b.group();
    Classification {
        is_projection: is_projection(b.a()),
        is_ep,
        is_pi,
        is_sep: is_ep && is_pi,
        in_rdag,
        in_rsharp,
    }
}

/// `e² = ae`.
pub fn is_left_a_idempotent(e: &Matrix, a: &Matrix) -> bool {
    e * e == a * e
}

/// `e² = ea`.
pub fn is_right_a_idempotent(e: &Matrix, a: &Matrix) -> bool {
    e * e == e * a
}

/// `ab = ac`.
pub fn are_left_a_equivalent(b: &Matrix, c: &Matrix, a: &Matrix) -> bool {
    a * b == a * c
}

/// `ba = ca`.
pub fn are_right_a_equivalent(b: &Matrix, c: &Matrix, a: &Matrix) -> bool {
    b * a == c * a
}
