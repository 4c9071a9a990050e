//! Brute-force and independent-route checks of the core routines.

mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starring::classify::are_left_a_equivalent;
use starring::geninv::{group_inverse, mp_inverse};
use starring::harness::{random_matrix, sweep, EntrySelection, GeneratorSpec};
use starring::theorems::{check_lemma_3_1, LemmaVerdict};
use starring::{Field, Matrix, Scalar};

fn all_matrices(field: Field, n: usize) -> Vec<Matrix> {
    let elems = field.elements().unwrap();
    let q = elems.len();
    let total = q.pow((n * n) as u32);
    (0..total)
        .map(|mut k| {
            let mut entries = vec![field.zero(); n * n];
            for slot in entries.iter_mut().rev() {
                *slot = elems[k % q].clone();
                k /= q;
            }
            Matrix::from_rows(field, entries.chunks(n).map(<[Scalar]>::to_vec).collect()).unwrap()
        })
        .collect()
}

#[test]
fn frobenius_is_the_involution() {
    for p in [2, 3, 5, 7, 11] {
        let f = Field::quad_ext(p).unwrap();
        let elems = f.elements().unwrap();
        assert_eq!(elems.len() as u64, p * p);
        for s in &elems {
            assert_eq!(s.star(), s.pow(p), "F_{p}^2: {s}");
            let (_, y) = s.as_residues().unwrap();
            assert_eq!(s.star() == *s, y == Some(0), "fixed field of F_{p}^2");
            let norm = s * &s.star();
            assert_eq!(norm.as_residues().unwrap().1, Some(0), "norm lies in F_{p}");
        }
    }
}

#[test]
fn quadratic_modulus_is_the_least_irreducible() {
    for p in [2u64, 3, 5, 7, 11, 13] {
        let Field::QuadExt(m) = Field::quad_ext(p).unwrap() else {
            unreachable!()
        };
        let has_root = |b: u64, c: u64| (0..p).any(|x| (x * x + b * x + c).is_multiple_of(p));
        assert!(!has_root(m.b, m.c), "p = {p}");
        for b in 0..p {
            for c in 0..p {
                if (b, c) < (m.b, m.c) {
                    assert!(
                        has_root(b, c),
                        "p = {p}: X² + {b}X + {c} is irreducible and smaller"
                    );
                }
            }
        }
        let f = Field::QuadExt(m);
        let w = f.generator().unwrap();
        let lhs = &(&w * &w) + &(&f.from_i64(m.b as i64) * &w);
        assert!((&lhs + &f.from_i64(m.c as i64)).is_zero());
    }
    assert_eq!(Field::quad_ext(2).unwrap().to_string(), "F_2^2");
}

#[test]
fn finite_field_inverses_by_search() {
    let fields = [2, 3, 5, 7]
        .into_iter()
        .flat_map(|p| [Field::prime(p).unwrap(), Field::quad_ext(p).unwrap()]);
    for f in fields {
        let elems = f.elements().unwrap();
        for x in elems.iter().filter(|x| !x.is_zero()) {
            let found: Vec<_> = elems.iter().filter(|y| (x * *y).is_one()).collect();
            assert_eq!(found.len(), 1, "{f}: {x}");
            assert_eq!(&x.inv().unwrap(), found[0]);
        }
        assert!(f.zero().inv().is_err());
    }
}

/// Every `X` satisfying the Penrose (group) equations, by enumeration.
fn brute_force_inverses(a: &Matrix, candidates: &[Matrix]) -> (Vec<Matrix>, Vec<Matrix>) {
    let mut mp = Vec::new();
    let mut group = Vec::new();
    for x in candidates {
        let ax = a * x;
        let xa = x * a;
        let axa = &ax * a;
        if axa != *a {
            continue;
        }
        let xax = &xa * x;
        if xax != *x {
            continue;
        }
        if ax.star() == ax && xa.star() == xa {
            mp.push(x.clone());
        }
        if ax == xa {
            group.push(x.clone());
        }
    }
    (mp, group)
}

#[test]
fn inverses_are_unique_and_found_over_small_fields() {
    for (f, expected_both) in [
        (Field::prime(2).unwrap(), 9),
        (Field::prime(3).unwrap(), 73),
        (Field::quad_ext(2).unwrap(), 187),
    ] {
        let ring = all_matrices(f, 2);
        let mut in_both = 0;
        for a in &ring {
            let (mps, groups) = brute_force_inverses(a, &ring);
            assert!(
                mps.len() <= 1 && groups.len() <= 1,
                "{f}: {}",
                a.to_inline()
            );
            assert_eq!(
                mp_inverse(a),
                mps.first().cloned(),
                "{f}: a† of {}",
                a.to_inline()
            );
            assert_eq!(
                group_inverse(a),
                groups.first().cloned(),
                "{f}: a# of {}",
                a.to_inline()
            );
            in_both += (!mps.is_empty() && !groups.is_empty()) as usize;
        }
        assert_eq!(in_both, expected_both, "{f}");
        let report = sweep(&GeneratorSpec::exhaustive(f, 2), &EntrySelection::All).unwrap();
        assert_eq!(report.totals.in_both, in_both);
    }
}

#[test]
fn greville_agrees_over_gaussian_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200 {
        let a = random_matrix(Field::GaussianRational, 2 + i % 2, &mut rng);
        let a = if i % 4 == 0 {
            let mut rows: Vec<Vec<Scalar>> = (0..a.dim()).map(|r| a.row(r).to_vec()).collect();
            rows[0] = rows[1].clone();
            Matrix::from_rows(a.field(), rows).unwrap()
        } else {
            a
        };
        assert_eq!(
            mp_inverse(&a),
            Some(common::greville(&a)),
            "{}",
            a.to_inline()
        );
        assert_eq!(
            group_inverse(&a),
            common::group_via_greville(&a),
            "{}",
            a.to_inline()
        );
    }
}

#[test]
fn lemma_3_1_on_every_pair_over_f3() {
    let ring = all_matrices(Field::prime(3).unwrap(), 2);
    let mut checked = 0;
    for e in &ring {
        for a in &ring {
            assert_eq!(
                check_lemma_3_1(e, a),
                LemmaVerdict::Holds,
                "{} {}",
                e.to_inline(),
                a.to_inline()
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 81 * 81);
}

#[test]
fn left_equivalence_is_an_equivalence_relation() {
    let ring = all_matrices(Field::prime(2).unwrap(), 2);
    for a in ring.iter().step_by(3) {
        for b in &ring {
            assert!(are_left_a_equivalent(b, b, a));
            for c in &ring {
                let bc = are_left_a_equivalent(b, c, a);
                assert_eq!(bc, are_left_a_equivalent(c, b, a));
                if !bc {
                    continue;
                }
                for d in ring.iter().filter(|d| are_left_a_equivalent(c, d, a)) {
                    assert!(are_left_a_equivalent(b, d, a));
                }
            }
        }
    }
}

#[test]
fn larger_exhaustive_rings_are_clean() {
    for (f, n, size) in [
        (Field::prime(5).unwrap(), 2, 625),
        (Field::prime(2).unwrap(), 3, 512),
        (Field::quad_ext(3).unwrap(), 2, 6561),
    ] {
        let report = sweep(&GeneratorSpec::exhaustive(f, n), &EntrySelection::All).unwrap();
        assert_eq!(report.totals.generated, size);
        assert!(report.is_clean(), "{}", report.to_text());
    }
}
