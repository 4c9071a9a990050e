#![allow(dead_code)]

use starring::{Field, Matrix, Scalar};

type Dense = Vec<Vec<Scalar>>;

fn dense(a: &Matrix) -> Dense {
    let (r, c) = a.shape();
    (0..r).map(|i| a.row(i)[..c].to_vec()).collect()
}

fn mul(field: Field, x: &Dense, y: &Dense) -> Dense {
    let inner = y.len();
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(field.zero(), |acc, k| {
                        acc.checked_add(&row[k].checked_mul(&y[k][j]).unwrap())
                            .unwrap()
                    })
                })
                .collect()
        })
        .collect()
}

fn adjoint(x: &Dense, cols: usize) -> Dense {
    (0..cols)
        .map(|j| x.iter().map(|row| row[j].star()).collect())
        .collect()
}

fn column(a: &Dense, j: usize) -> Dense {
    a.iter().map(|row| vec![row[j].clone()]).collect()
}

fn is_zero(x: &Dense) -> bool {
    x.iter().flatten().all(Scalar::is_zero)
}

fn scale(x: &Dense, s: &Scalar) -> Dense {
    x.iter()
        .map(|r| r.iter().map(|v| v.checked_mul(s).unwrap()).collect())
        .collect()
}

fn sub(x: &Dense, y: &Dense) -> Dense {
    x.iter()
        .zip(y)
        .map(|(r, s)| {
            r.iter()
                .zip(s)
                .map(|(u, v)| u.checked_sub(v).unwrap())
                .collect()
        })
        .collect()
}

/// `c† = c*/(c*c)` for a nonzero column.
fn column_pinv(field: Field, c: &Dense) -> Dense {
    let cs = adjoint(c, 1);
    let norm = mul(field, &cs, c)[0][0].clone();
    scale(&cs, &norm.inv().unwrap())
}

/// Moore-Penrose inverse by Greville's column recursion. Only valid where
/// `x*x = 0` forces `x = 0`, i.e. over ℚ and ℚ(i).
pub fn greville(a: &Matrix) -> Matrix {
    let field = a.field();
    assert!(matches!(field, Field::Rational | Field::GaussianRational));
    let ad = dense(a);
    let (m, n) = a.shape();
    let a1 = column(&ad, 0);
    let mut pinv: Dense = if is_zero(&a1) {
        vec![vec![field.zero(); m]]
    } else {
        column_pinv(field, &a1)
    };
    for k in 1..n {
        let prev: Dense = ad.iter().map(|r| r[..k].to_vec()).collect();
        let ak = column(&ad, k);
        let d = mul(field, &pinv, &ak);
        let c = sub(&ak, &mul(field, &prev, &d));
        let b = if !is_zero(&c) {
            column_pinv(field, &c)
        } else {
            let ds = adjoint(&d, 1);
            let denom = field.one().checked_add(&mul(field, &ds, &d)[0][0]).unwrap();
            scale(&mul(field, &ds, &pinv), &denom.inv().unwrap())
        };
        let mut next = sub(&pinv, &mul(field, &d, &b));
        next.extend(b);
        pinv = next;
    }
    Matrix::from_rows(field, pinv).unwrap()
}

/// Group inverse as `a(a³)†a`, which is valid whenever `a#` exists.
pub fn group_via_greville(a: &Matrix) -> Option<Matrix> {
    if (a * a).rank() != a.rank() {
        return None;
    }
    Some(&(a * &greville(&a.pow(3))) * a)
}

pub fn q(text: &str) -> Matrix {
    Matrix::parse_inline(Field::Rational, text).unwrap()
}
