//! Moore-Penrose and group inverses via full-rank factorization.
//!
//! For `A = F·G` of rank `r`:
//!
//! * `A† = G*·(F*·A·G*)⁻¹·F*`, existing iff `F*·A·G* = (F*F)(GG*)` is invertible;
//! * `A# = F·(G·F)⁻²·G`, existing iff `G·F` is invertible.
//!
//! Over ℚ and ℚ(i) the MP inverse always exists. Over finite fields with
//! conjugate transpose it may not (isotropic vectors), and neither may the
//! group inverse of a nilpotent-like element.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Verdicts of the four Penrose equations `axa = a`, `xax = x`,
/// `(ax)* = ax`, `(xa)* = xa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PenroseCheck(pub [bool; 4]);

/// Verdicts of `axa = a`, `xax = x`, `ax = xa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCheck(pub [bool; 3]);

impl PenroseCheck {
    pub fn all(&self) -> bool {
        self.0.iter().all(|&b| b)
    }
}

impl GroupCheck {
    pub fn all(&self) -> bool {
        self.0.iter().all(|&b| b)
    }
}

pub fn mp_inverse(a: &Matrix) -> Option<Matrix> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let fg = a.full_rank_factorize().ok()?;
    let f_star = fg.f.star();
    let g_star = fg.g.star();
    let core = &(&f_star * a) * &g_star;
    let core_inv = core.try_invert()?;
    Some(&(&g_star * &core_inv) * &f_star)
}

pub fn group_inverse(a: &Matrix) -> Option<Matrix> {
    if a.is_zero() {
        return Some(a.clone());
    }
    let fg = a.full_rank_factorize().ok()?;
    let gf_inv = (&fg.g * &fg.f).try_invert()?;
    Some(&(&fg.f * &(&gf_inv * &gf_inv)) * &fg.g)
}

pub fn verify_penrose(a: &Matrix, x: &Matrix) -> PenroseCheck {
    let ax = a * x;
    let xa = x * a;
    PenroseCheck([
        &ax * a == *a,
        &xa * x == *x,
        ax.star() == ax,
        xa.star() == xa,
    ])
}

pub fn verify_group(a: &Matrix, x: &Matrix) -> GroupCheck {
    let ax = a * x;
    let xa = x * a;
    GroupCheck([&ax * a == *a, &xa * x == *x, ax == xa])
}

/// An element together with its adjoint and whichever generalized inverses
/// exist. Construction re-verifies every inverse against its defining
/// equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseBundle {
    a: Matrix,
    star: Matrix,
    mp: Option<Matrix>,
    group: Option<Matrix>,
}

impl InverseBundle {
    pub fn new(a: Matrix) -> Result<Self> {
        a.check_ring_element()?;
        let mp = mp_inverse(&a);
        let group = group_inverse(&a);
        if let Some(x) = &mp {
            if !verify_penrose(&a, x).all() {
                return Err(Error::InverseOracle { which: "a†" });
            }
        }
        if let Some(x) = &group {
            if !verify_group(&a, x).all() {
                return Err(Error::InverseOracle { which: "a#" });
            }
        }
        Ok(InverseBundle {
            star: a.star(),
            a,
            mp,
            group,
        })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn star(&self) -> &Matrix {
        &self.star
    }

    pub fn mp(&self) -> Option<&Matrix> {
        self.mp.as_ref()
    }

    pub fn group(&self) -> Option<&Matrix> {
        self.group.as_ref()
    }

    pub fn has_mp(&self) -> bool {
        self.mp.is_some()
    }

    pub fn has_group(&self) -> bool {
        self.group.is_some()
    }

    /// The standing hypothesis `a ∈ R# ∩ R†`.
    pub fn in_both(&self) -> bool {
        self.has_mp() && self.has_group()
    }

    pub fn require_mp(&self) -> Result<&Matrix> {
        self.mp().ok_or(Error::MissingInverse("a†"))
    }

    pub fn require_group(&self) -> Result<&Matrix> {
        self.group().ok_or(Error::MissingInverse("a#"))
    }

    /// True when `candidate` satisfies the Penrose equations exactly when it
    /// equals the stored `a†`.
    pub fn mp_is_unique_against(&self, candidate: &Matrix) -> bool {
        let passes = verify_penrose(&self.a, candidate).all();
        match &self.mp {
            Some(mp) => passes == (candidate == mp),
            None => !passes,
        }
    }

    pub fn group_is_unique_against(&self, candidate: &Matrix) -> bool {
        let passes = verify_group(&self.a, candidate).all();
        match &self.group {
            Some(g) => passes == (candidate == g),
            None => !passes,
        }
    }
}

/// The elements of `ρ_a = {a, a#, a†, a*, (a†)*, (a#)*, (a#)†, (a†)#}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedElements {
    pub a: Matrix,
    pub group: Matrix,
    pub mp: Matrix,
    pub star: Matrix,
    pub mp_star: Matrix,
    pub group_star: Matrix,
    pub group_mp: Matrix,
    pub mp_group: Matrix,
}

impl DerivedElements {
    /// `χ_a = {a, a#, a†, a*, (a†)*, (a#)*}`.
    pub fn chi(&self) -> [&Matrix; 6] {
        [
            &self.a,
            &self.group,
            &self.mp,
            &self.star,
            &self.mp_star,
            &self.group_star,
        ]
    }

    /// `τ_a = {a, a#, (a†)*}`.
    pub fn tau(&self) -> [&Matrix; 3] {
        [&self.a, &self.group, &self.mp_star]
    }

    /// `γ_a = {a†, a*, (a#)*}`.
    pub fn gamma(&self) -> [&Matrix; 3] {
        [&self.mp, &self.star, &self.group_star]
    }

    pub fn rho(&self) -> [&Matrix; 8] {
        [
            &self.a,
            &self.group,
            &self.mp,
            &self.star,
            &self.mp_star,
            &self.group_star,
            &self.group_mp,
            &self.mp_group,
        ]
    }

    pub fn named(&self) -> BTreeMap<&'static str, &Matrix> {
        BTreeMap::from([
            ("a", &self.a),
            ("a#", &self.group),
            ("a†", &self.mp),
            ("a*", &self.star),
            ("(a†)*", &self.mp_star),
            ("(a#)*", &self.group_star),
            ("(a#)†", &self.group_mp),
            ("(a†)#", &self.mp_group),
        ])
    }
}

/// Computes the members of `ρ_a`. `(a#)†` and `(a†)#` are computed directly
/// and cross-checked against `a†a³a†` and `(aa#)*a(aa#)*`.
pub fn derived_elements(b: &InverseBundle) -> Result<DerivedElements> {
    let a = b.a();
    let mp = b.require_mp()?;
    let group = b.require_group()?;

    let group_mp = mp_inverse(group).ok_or(Error::ClosedFormMismatch { which: "(a#)†" })?;
    let closed = &(&(mp * &a.pow(3)) * mp);
    if group_mp != *closed {
        return Err(Error::ClosedFormMismatch { which: "(a#)†" });
    }

    let mp_group = group_inverse(mp).ok_or(Error::ClosedFormMismatch { which: "(a†)#" })?;
    let aag_star = (a * group).star();
    let closed = &(&aag_star * a) * &aag_star;
    if mp_group != closed {
        return Err(Error::ClosedFormMismatch { which: "(a†)#" });
    }

    Ok(DerivedElements {
        a: a.clone(),
        group: group.clone(),
        mp: mp.clone(),
        star: b.star().clone(),
        mp_star: mp.star(),
        group_star: group.star(),
        group_mp,
        mp_group,
    })
}
