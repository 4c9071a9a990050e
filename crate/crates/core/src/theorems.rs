//! Executable registry of the SEP characterizations.
//!
//! Every entry is a condition on `a ∈ R# ∩ R†` that is claimed to hold
//! exactly when `a` is SEP (`a* = a† = a#`). `X3` instead pairs `aa* ∈ PE(R)`
//! with `a` being a partial isometry and only needs `a†`.
//!
//! Throughout, `p = a(a#)*a†` and `q = a†a²`.
//!
//! `a⁺` is read as `a†`; there is only one Moore-Penrose notion in play.

use serde::Serialize;

use crate::classify::{
    are_left_a_equivalent, is_left_a_idempotent, is_pi, is_projection, is_right_a_idempotent,
    is_sep,
};
use crate::error::{Error, Result};
use crate::geninv::{derived_elements, mp_inverse, DerivedElements, InverseBundle};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    /// condition ⟺ SEP, on `R# ∩ R†`
    BiconditionalWithSep,
    /// condition ⟺ partial isometry, on `R†`
    BiconditionalWithPi,
}

/// Shared products for one element of `R# ∩ R†`.
#[derive(Debug, Clone)]
pub struct Context {
    pub a: Matrix,
    pub star: Matrix,
    pub mp: Matrix,
    pub group: Matrix,
    pub mp_star: Matrix,
    pub group_star: Matrix,
    /// `a(a#)*a†`
    pub p: Matrix,
    /// `a†a²`
    pub q: Matrix,
    pub derived: DerivedElements,
    a2: Matrix,
    a3: Matrix,
    /// `aa*a†`
    head: Matrix,
    /// `a²a*a†`
    tail: Matrix,
    /// `aa*a†a†a²`
    t23: Matrix,
    /// `x†` for each `x ∈ χ_a`, in `chi()` order
    chi_mp: Vec<Option<Matrix>>,
}

// positions of τ_a and γ_a inside χ_a
const TAU_IN_CHI: [usize; 3] = [0, 1, 4];
const GAMMA_IN_CHI: [usize; 3] = [2, 3, 5];

impl Context {
    pub fn new(b: &InverseBundle) -> Result<Self> {
        let derived = derived_elements(b)?;
        let a = b.a().clone();
        let mp = derived.mp.clone();
        let group = derived.group.clone();
        let p = &(&a * &derived.group_star) * &mp;
        let a2 = &a * &a;
        let a3 = &a2 * &a;
        let q = &mp * &a2;
        let head = &(&a * &derived.star) * &mp;
        let tail = &(&a2 * &derived.star) * &mp;
        let t23 = &(&head * &mp) * &a2;
        let chi_mp = derived.chi().iter().map(|x| mp_inverse(x)).collect();
        Ok(Context {
            star: derived.star.clone(),
            mp_star: derived.mp_star.clone(),
            group_star: derived.group_star.clone(),
            a,
            mp,
            group,
            p,
            q,
            derived,
            a2,
            a3,
            head,
            tail,
            t23,
            chi_mp,
        })
    }

    /// Members of `χ_a` at the given positions that have an MP inverse,
    /// paired with it.
    fn with_mp(&self, idx: &[usize]) -> Vec<(&Matrix, &Matrix)> {
        let chi = self.derived.chi();
        idx.iter()
            .filter_map(|&i| self.chi_mp[i].as_ref().map(|xd| (chi[i], xd)))
            .collect()
    }

    /// Left-to-right product of the given factors.
    fn prod(&self, factors: &[&Matrix]) -> Matrix {
        let (first, rest) = factors.split_first().expect("at least one factor");
        rest.iter().fold((*first).clone(), |acc, m| &acc * m)
    }
}

#[derive(Clone, Copy)]
pub enum Condition {
    Sep(fn(&Context) -> bool),
    Pi(fn(&InverseBundle) -> bool),
}

#[derive(Clone, Copy)]
pub struct TheoremEntry {
    pub id: &'static str,
    pub expression: &'static str,
    pub citation: &'static str,
    pub condition: Condition,
    /// Whether a counterexample fails verification runs.
    pub gated: bool,
}

impl TheoremEntry {
    pub fn kind(&self) -> EntryKind {
        match self.condition {
            Condition::Sep(_) => EntryKind::BiconditionalWithSep,
            Condition::Pi(_) => EntryKind::BiconditionalWithPi,
        }
    }

    /// Section number taken from the id (`T3.4b` → 3); `X` entries give 0.
    pub fn section(&self) -> u32 {
        if self.id.starts_with('X') {
            return 0;
        }
        self.id[1..]
            .split('.')
            .next()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    }
}

impl std::fmt::Debug for TheoremEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TheoremEntry")
            .field("id", &self.id)
            .field("kind", &self.kind())
            .field("expression", &self.expression)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Consistent,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremCase {
    pub theorem_id: String,
    pub element: Vec<Vec<String>>,
    pub condition_holds: bool,
    /// SEP membership, or PI membership for `X3`.
    pub sep_holds: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaVerdict {
    Holds,
    Vacuous,
    Violated,
}

// members without an MP inverse do not witness the condition
fn exists_mp_witness(pairs: Vec<(&Matrix, &Matrix)>, f: impl Fn(&Matrix, &Matrix) -> bool) -> bool {
    pairs.into_iter().any(|(x, xd)| f(x, xd))
}

fn both_powers(f: impl Fn(u32) -> bool) -> bool {
    [2, 3].into_iter().all(f)
}

macro_rules! sep {
    ($id:literal, $expr:literal, $cite:literal, $body:expr) => {
        TheoremEntry {
            id: $id,
            expression: $expr,
            citation: $cite,
            condition: Condition::Sep($body),
            gated: true,
        }
    };
}

/// All gated entries, in registry order.
pub fn registry() -> Vec<TheoremEntry> {
    vec![
        sep!("T2.1", "a(a#)*a†a# ∈ PE(R)", "Theorem 2.1", |c| {
            is_projection(&(&c.p * &c.group))
        }),
        sep!("T2.2", "a†a(a†)*a† ∈ PE(R)", "Theorem 2.2", |c| {
            is_projection(&c.prod(&[&c.mp, &c.a, &c.mp_star, &c.mp]))
        }),
        sep!("T2.3", "aa*a†a†a² ∈ PE(R)", "Theorem 2.3", |c| {
            is_projection(&c.t23)
        }),
        sep!(
            "C2.4",
            "aa*a†xx†a ∈ PE(R) for some x ∈ χ_a",
            "Corollary 2.4",
            |c| {
                exists_mp_witness(c.with_mp(&[0, 1, 2, 3, 4, 5]), |x, xd| {
                    is_projection(&c.prod(&[&c.head, x, xd, &c.a]))
                })
            }
        ),
        sep!("T2.5", "a†a³a*a† ∈ PE(R)", "Theorem 2.5", |c| {
            is_projection(&c.prod(&[&c.mp, &c.a3, &c.star, &c.mp]))
        }),
        sep!(
            "C2.6b",
            "xx†a²a*a† ∈ PE(R) for some x ∈ γ_a",
            "Corollary 2.6 (2)",
            |c| {
                exists_mp_witness(c.with_mp(&GAMMA_IN_CHI), |x, xd| {
                    is_projection(&c.prod(&[x, xd, &c.tail]))
                })
            }
        ),
        sep!(
            "C2.6c",
            "x†xa²a*a† ∈ PE(R) for some x ∈ τ_a",
            "Corollary 2.6 (3)",
            |c| {
                exists_mp_witness(c.with_mp(&TAU_IN_CHI), |x, xd| {
                    is_projection(&c.prod(&[xd, x, &c.tail]))
                })
            }
        ),
        sep!("C2.7", "a²a*a# ∈ PE(R)", "Corollary 2.7", |c| {
            is_projection(&c.prod(&[&c.a2, &c.star, &c.group]))
        }),
        sep!("C2.9", "a†a³a*a#aa† ∈ PE(R)", "Corollary 2.9", |c| {
            is_projection(&c.prod(&[&c.mp, &c.a3, &c.star, &c.group, &c.a, &c.mp]))
        }),
        sep!("C2.10", "a²a*a# ∈ PE(R)", "Corollary 2.10", |c| {
            is_projection(&c.prod(&[&c.a2, &c.star, &c.group]))
        }),
        sep!(
            "T3.2",
            "a(a#)*a† is a left a†a²-idempotent",
            "Theorem 3.2",
            |c| { is_left_a_idempotent(&c.p, &c.q) }
        ),
        sep!(
            "T3.3b",
            "a(a#)*a† is a right a†a²-idempotent",
            "Theorem 3.3 (2)",
            |c| { is_right_a_idempotent(&c.p, &c.q) }
        ),
        sep!(
            "T3.3c",
            "a†a² is a left a(a#)*a†-idempotent",
            "Theorem 3.3 (3)",
            |c| { is_left_a_idempotent(&c.q, &c.p) }
        ),
        sep!(
            "T3.3d",
            "a†a² is a right a(a#)*a†-idempotent",
            "Theorem 3.3 (4)",
            |c| { is_right_a_idempotent(&c.q, &c.p) }
        ),
        sep!(
            "T3.4b",
            "a(a#)*a† - a†a² is a right (-a†a²)-idempotent",
            "Theorem 3.4 (2)",
            |c| { is_right_a_idempotent(&(&c.p - &c.q), &-&c.q) }
        ),
        sep!(
            "T3.4c",
            "a(a#)*a† - a†a² is a left (-a†a²)-idempotent",
            "Theorem 3.4 (3)",
            |c| { is_left_a_idempotent(&(&c.p - &c.q), &-&c.q) }
        ),
        sep!(
            "T3.4d",
            "a†a² - a(a#)*a† is a right (-a(a#)*a†)-idempotent",
            "Theorem 3.4 (4)",
            |c| { is_right_a_idempotent(&(&c.q - &c.p), &-&c.p) }
        ),
        sep!(
            "T3.5",
            "a(a#)*a† is a right a-idempotent",
            "Theorem 3.5",
            |c| { is_right_a_idempotent(&c.p, &c.a) }
        ),
        sep!(
            "T3.6",
            "a†a² is a left (a†)*-idempotent",
            "Theorem 3.6",
            |c| { is_left_a_idempotent(&c.q, &c.mp_star) }
        ),
        sep!(
            "T4.1",
            "(a(a#)*a†)^k = (a†a²)^k for k = 2, 3",
            "Theorem 4.1",
            |c| { both_powers(|k| c.p.pow(k) == c.q.pow(k)) }
        ),
        sep!(
            "T4.2",
            "(aa*a†a†a²)^k ∈ PE(R) for k = 2, 3",
            "Theorem 4.2",
            |c| {
                let t = &c.t23;
                both_powers(|k| is_projection(&t.pow(k)))
            }
        ),
        sep!(
            "T4.3",
            "(a(a#)*a†)^k is a left (a†a²)^k-idempotent for k = 2, 3",
            "Theorem 4.3",
            |c| { both_powers(|k| is_left_a_idempotent(&c.p.pow(k), &c.q.pow(k))) }
        ),
        sep!(
            "T5.1",
            "a(a#)*a† and a†a² are left a-equivalent",
            "Theorem 5.1",
            |c| { are_left_a_equivalent(&c.p, &c.q, &c.a) }
        ),
        sep!(
            "T5.2",
            "a(a#)*a† and a†a² are left x-equivalent for some x ∈ ρ_a",
            "Theorem 5.2",
            |c| {
                c.derived
                    .rho()
                    .iter()
                    .any(|x| are_left_a_equivalent(&c.p, &c.q, x))
            }
        ),
        sep!(
            "T5.3",
            "a(a#)*a† and a†a² are left a†a²-equivalent",
            "Theorem 5.3",
            |c| { are_left_a_equivalent(&c.p, &c.q, &c.q) }
        ),
        sep!(
            "T5.4",
            "a(a#)*a† and a†a² are left a†aa#-equivalent",
            "Theorem 5.4",
            |c| { are_left_a_equivalent(&c.p, &c.q, &c.prod(&[&c.mp, &c.a, &c.group])) }
        ),
        sep!(
            "X1",
            "a(a#)*a† = a†a²",
            "cited characterization used in Sections 2-5",
            |c| c.p == c.q
        ),
        sep!(
            "X2",
            "a† = a*a†a",
            "cited characterization used in Theorems 3.5, 4.1, 5.1",
            |c| { c.mp == c.prod(&[&c.star, &c.mp, &c.a]) }
        ),
        TheoremEntry {
            id: "X3",
            expression: "aa* ∈ PE(R) ⟺ a is a partial isometry",
            citation: "cited characterization used in Theorems 2.3, 4.2",
            condition: Condition::Pi(|b| is_projection(&(b.a() * b.star()))),
            gated: true,
        },
    ]
}

/// Entries evaluated and reported but never gating a run.
///
/// `T3.4d` and `T3.4e` are stated with identical wording; the left-sided
/// reading is kept here.
pub fn informational() -> Vec<TheoremEntry> {
    vec![TheoremEntry {
        id: "T3.4e",
        expression: "a†a² - a(a#)*a† is a left (-a(a#)*a†)-idempotent",
        citation: "Theorem 3.4 (5), left-sided reading",
        condition: Condition::Sep(|c| is_left_a_idempotent(&(&c.q - &c.p), &-&c.p)),
        gated: false,
    }]
}

/// Looks up a registry or informational entry by id.
pub fn lookup(id: &str) -> Option<TheoremEntry> {
    registry()
        .into_iter()
        .chain(informational())
        .find(|e| e.id == id)
}

impl TheoremEntry {
    /// Evaluates a SEP-kind entry on a prepared context.
    pub fn evaluate_in(&self, ctx: &Context) -> Result<TheoremCase> {
        let Condition::Sep(cond) = self.condition else {
            return Err(Error::Precondition("entry is not SEP-kind"));
        };
        let sep = ctx.derived.star == ctx.mp && ctx.mp == ctx.group;
        Ok(case(self.id, &ctx.a, cond(ctx), sep))
    }

    /// Evaluates a PI-kind entry; only `a†` is required.
    pub fn evaluate_pi(&self, b: &InverseBundle) -> Result<TheoremCase> {
        let Condition::Pi(cond) = self.condition else {
            return Err(Error::Precondition("entry is not PI-kind"));
        };
        let pi = is_pi(b)?;
        Ok(case(self.id, b.a(), cond(b), pi))
    }
}

fn case(id: &str, a: &Matrix, condition_holds: bool, sep_holds: bool) -> TheoremCase {
    TheoremCase {
        theorem_id: id.to_string(),
        element: a.to_string_rows(),
        condition_holds,
        sep_holds,
        verdict: if condition_holds == sep_holds {
            Verdict::Consistent
        } else {
            Verdict::Counterexample
        },
    }
}

/// Evaluates an entry under its hypothesis: `a ∈ R# ∩ R†` for SEP-kind
/// entries, `a ∈ R†` for `X3`.
pub fn evaluate(entry: &TheoremEntry, b: &InverseBundle) -> Result<TheoremCase> {
    match entry.condition {
        Condition::Pi(_) => {
            if !b.has_mp() {
                return Err(Error::Precondition("a ∈ R†"));
            }
            entry.evaluate_pi(b)
        }
        Condition::Sep(_) => {
            if !b.in_both() {
                return Err(Error::Precondition("a ∈ R# ∩ R†"));
            }
            let case = entry.evaluate_in(&Context::new(b)?)?;
            debug_assert_eq!(case.sep_holds, is_sep(b)?);
            Ok(case)
        }
    }
}

/// If `x = aa†xa†a` then `a†axaa† ∈ PE(R)`, for a projection `x`.
pub fn check_lemma_2_8(a: &Matrix, x: &Matrix) -> Result<LemmaVerdict> {
    let mp = mp_inverse(a).ok_or(Error::Precondition("a ∈ R†"))?;
    if !is_projection(x) {
        return Err(Error::Precondition("x ∈ PE(R)"));
    }
    let hypothesis = *x == &(&(&(a * &mp) * x) * &mp) * a;
    if !hypothesis {
        return Ok(LemmaVerdict::Vacuous);
    }
    let conclusion = &(&(&(&mp * a) * x) * a) * &mp;
    Ok(if is_projection(&conclusion) {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::Violated
    })
}

/// `e` is a left `a`-idempotent iff `a - e` is a right `a`-idempotent.
pub fn check_lemma_3_1(e: &Matrix, a: &Matrix) -> LemmaVerdict {
    let left = is_left_a_idempotent(e, a);
    let right = is_right_a_idempotent(&(a - e), a);
    if left == right {
        LemmaVerdict::Holds
    } else {
        LemmaVerdict::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starfield::Field;

    fn q(rows: &[&[&str]]) -> Matrix {
        Matrix::parse_rows(Field::Rational, rows).unwrap()
    }

    #[test]
    fn registry_shape() {
        let reg = registry();
        assert_eq!(reg.len(), 29);
        let mut ids: Vec<_> = reg.iter().map(|e| e.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 29);
        assert_eq!(lookup("T2.5").unwrap().citation, "Theorem 2.5");
        assert!(lookup("T9.9").is_none());
        assert!(!lookup("T3.4e").unwrap().gated);
        assert_eq!(lookup("T3.4b").unwrap().section(), 3);
        assert_eq!(lookup("X2").unwrap().section(), 0);
        assert_eq!(
            reg.iter()
                .filter(|e| e.kind() == EntryKind::BiconditionalWithPi)
                .count(),
            1
        );
    }

    #[test]
    fn t21_examples() {
        let t21 = lookup("T2.1").unwrap();
        let i = InverseBundle::new(Matrix::identity(Field::Rational, 2)).unwrap();
        let c = evaluate(&t21, &i).unwrap();
        assert!(c.condition_holds && c.sep_holds && c.verdict == Verdict::Consistent);

        let d = InverseBundle::new(q(&[&["2", "0"], &["0", "0"]])).unwrap();
        let c = evaluate(&t21, &d).unwrap();
        assert!(!c.condition_holds && !c.sep_holds && c.verdict == Verdict::Consistent);
        let ctx = Context::new(&d).unwrap();
        assert_eq!(&ctx.p * &ctx.group, q(&[&["1/4", "0"], &["0", "0"]]));
    }

    #[test]
    fn t51_on_swap() {
        let s = InverseBundle::new(q(&[&["0", "1"], &["1", "0"]])).unwrap();
        let c = evaluate(&lookup("T5.1").unwrap(), &s).unwrap();
        assert_eq!((c.condition_holds, c.sep_holds), (true, true));
    }

    #[test]
    fn hypothesis_is_enforced() {
        let n = InverseBundle::new(q(&[&["0", "1"], &["0", "0"]])).unwrap();
        assert!(matches!(
            evaluate(&lookup("T2.1").unwrap(), &n),
            Err(Error::Precondition(_))
        ));
        let c = evaluate(&lookup("X3").unwrap(), &n).unwrap();
        assert_eq!((c.condition_holds, c.sep_holds), (true, true));
    }

    #[test]
    fn lemma_2_8_examples() {
        let i = Matrix::identity(Field::Rational, 2);
        let e = q(&[&["1", "0"], &["0", "0"]]);
        assert_eq!(check_lemma_2_8(&i, &e), Ok(LemmaVerdict::Holds));
        let d = q(&[&["2", "0"], &["0", "0"]]);
        assert_eq!(check_lemma_2_8(&d, &i), Ok(LemmaVerdict::Vacuous));
        let s = q(&[&["0", "1"], &["1", "0"]]);
        let h = q(&[&["1/2", "1/2"], &["1/2", "1/2"]]);
        assert_eq!(check_lemma_2_8(&s, &h), Ok(LemmaVerdict::Holds));
        assert_eq!(&(&s.star() * &h) * &s, h);
        assert!(check_lemma_2_8(&i, &d).is_err());
    }

    #[test]
    fn lemma_3_1_examples() {
        let a = q(&[&["1", "2"], &["3", "4"]]);
        let zero = Matrix::zeros(Field::Rational, 2, 2);
        assert_eq!(check_lemma_3_1(&a, &a), LemmaVerdict::Holds);
        assert_eq!(check_lemma_3_1(&zero, &a), LemmaVerdict::Holds);
    }
}
