//! Dense exact matrices over one involutive field.
//!
//! Ring elements are square; rectangular matrices only appear as the factors
//! of a [`RankFactorization`]. The ring involution is the conjugate transpose
//! built from the scalar involution.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::starfield::{Field, Scalar};

/// Default cap on the dimension of ring elements.
pub const MAX_DIM: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// `A = F·G` with `F` of full column rank and `G` of full row rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFactorization {
    pub f: Matrix,
    pub g: Matrix,
    pub rank: usize,
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn diagonal(field: Field, diag: &[Scalar]) -> Result<Self> {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: d.field(),
                });
            }
            m[(i, i)] = d.clone();
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch {
                    left: (r, c),
                    right: (r, row.len()),
                });
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: s.field(),
                    });
                }
                entries.push(s);
            }
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            entries,
        })
    }

    /// Builds a matrix from row-major scalar tokens.
    pub fn parse_rows(field: Field, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| field.parse_scalar(t))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, rows)
    }

    pub(crate) fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn ensure_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(())
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        self.same_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let terms = (0..self.cols).map(|k| (&self[(i, k)], &other[(k, j)]));
                out.push(Scalar::sum_of_products(self.field, terms));
            }
        }
        Ok(Matrix::from_entries(self.field, self.rows, other.cols, out))
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix::from_entries(
            self.field, self.rows, self.cols, entries,
        ))
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Matrix::from_entries(
            self.field, self.rows, self.cols, entries,
        ))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        Matrix::from_entries(self.field, self.rows, self.cols, entries)
    }

    /// Conjugate transpose.
    pub fn star(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self[(i, j)].star());
            }
        }
        Matrix::from_entries(self.field, self.cols, self.rows, entries)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self[(i, j)].clone());
            }
        }
        Matrix::from_entries(self.field, self.cols, self.rows, entries)
    }

    /// `self^k` for a square matrix; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self[(i, j)].clone());
            }
        }
        Matrix::from_entries(self.field, self.rows, cols.len(), entries)
    }

    pub fn select_rows(&self, rows: usize) -> Matrix {
        Matrix::from_entries(
            self.field,
            rows,
            self.cols,
            self.entries[..rows * self.cols].to_vec(),
        )
    }

    /// Gauss-Jordan elimination. Pivots are the first nonzero entry in
    /// column order.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let delta = &factor * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &delta;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon {
            reduced: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Full-rank factorization: `F` is the pivot columns of `A`, `G` the
    /// nonzero rows of its reduced row echelon form.
    pub fn full_rank_factorize(&self) -> Result<RankFactorization> {
        let e = self.rref();
        if e.rank == 0 {
            return Err(Error::ZeroMatrix);
        }
        Ok(RankFactorization {
            f: self.select_columns(&e.pivots),
            g: e.reduced.select_rows(e.rank),
            rank: e.rank,
        })
    }

    /// Two-sided inverse of a square matrix, `None` when singular.
    pub fn try_invert(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let e = aug.rref();
        // pivots increase, so the left block is invertible iff pivot n-1 sits in column n-1
        if n > 0 && e.pivots.get(n - 1) != Some(&(n - 1)) {
            return None;
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            entries.extend_from_slice(&e.reduced.row(i)[n..]);
        }
        Some(Matrix::from_entries(self.field, n, n, entries))
    }

    /// Rows of scalar strings, used for JSON embedding.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }

    /// One-line form with rows separated by `;`, as accepted by `--matrix`.
    pub fn to_inline(&self) -> String {
        self.to_string_rows()
            .iter()
            .map(|r| r.join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Parses `"a b; c d"` into a square matrix.
    pub fn parse_inline(field: Field, text: &str) -> Result<Matrix> {
        let rows: Vec<Vec<&str>> = text
            .split(';')
            .map(|r| r.split_whitespace().collect::<Vec<_>>())
            .filter(|r| !r.is_empty())
            .collect();
        let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        let m = Matrix::parse_rows(field, &refs)?;
        m.check_ring_element()?;
        Ok(m)
    }

    pub(crate) fn check_ring_element(&self) -> Result<()> {
        self.ensure_square()?;
        if self.rows == 0 || self.rows > MAX_DIM {
            return Err(Error::Dimension {
                dim: self.rows,
                max: MAX_DIM,
            });
        }
        Ok(())
    }

    /// Text format: a `ring <kind> [p] n=<dim>` header followed by one line
    /// per row. Blank lines and lines starting with `#` are ignored.
    pub fn to_text(&self) -> String {
        let mut out = format!("ring {} n={}\n", self.field.header_tokens(), self.rows);
        for row in self.to_string_rows() {
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse {
            input: text.to_string(),
            reason: "missing ring header".into(),
        })?;
        let (field, n) = parse_header(header)?;
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse {
                input: text.to_string(),
                reason: format!("expected {n} rows of {n} entries"),
            });
        }
        let refs: Vec<&[&str]> = rows.iter().map(Vec::as_slice).collect();
        let m = Matrix::parse_rows(field, &refs)?;
        m.check_ring_element()?;
        Ok(m)
    }
}

/// Parses `ring <kind> [p] n=<dim>`. Kinds are `rational`, `gaussian`,
/// `prime <p>`, `quadext <p>`, or any command-line short name.
pub fn parse_header(line: &str) -> Result<(Field, usize)> {
    let bad = |reason: &str| Error::Parse {
        input: line.to_string(),
        reason: reason.to_string(),
    };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.first() != Some(&"ring") {
        return Err(bad("header must start with `ring`"));
    }
    let dim_token = tokens.last().ok_or_else(|| bad("missing n=<dim>"))?;
    let n = dim_token
        .strip_prefix("n=")
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| bad("missing n=<dim>"))?;
    let prime = |t: Option<&&str>| {
        t.and_then(|t| t.parse::<u64>().ok())
            .ok_or_else(|| bad("missing prime"))
    };
    let field = match &tokens[1..tokens.len() - 1] {
        ["rational"] => Field::Rational,
        ["gaussian"] => Field::GaussianRational,
        ["prime", p] => Field::prime(prime(Some(p))?)?,
        ["quadext", p] => Field::quad_ext(prime(Some(p))?)?,
        [short] => Field::from_short_name(short)?,
        _ => return Err(bad("unknown ring kind")),
    };
    Ok((field, n))
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

// Operator forms panic on shape or field mismatch. Use the checked_* methods
// on untrusted input.
impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix shape mismatch")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        let entries = self.entries.iter().map(|a| -a).collect();
        Matrix::from_entries(self.field, self.rows, self.cols, entries)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_inline())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>[{}]", self.field, self.to_inline())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[&str]]) -> Matrix {
        Matrix::parse_rows(Field::Rational, rows).unwrap()
    }

    #[test]
    fn products() {
        let e = q(&[&["1", "1"], &["0", "0"]]);
        assert_eq!(&e * &e, e);
        let n = q(&[&["0", "1"], &["0", "0"]]);
        assert!((&n * &n).is_zero());
        let i = Matrix::identity(Field::Rational, 2);
        assert_eq!(&i * &e, e);
    }

    #[test]
    fn star_is_conjugate_transpose() {
        let n = q(&[&["0", "1"], &["0", "0"]]);
        assert_eq!(n.star(), q(&[&["0", "0"], &["1", "0"]]));
        let d = q(&[&["2", "0"], &["0", "0"]]);
        assert_eq!(d.star(), d);
        let g = Matrix::parse_rows(Field::GaussianRational, &[&["i", "0"], &["0", "0"]]).unwrap();
        let want =
            Matrix::parse_rows(Field::GaussianRational, &[&["-i", "0"], &["0", "0"]]).unwrap();
        assert_eq!(g.star(), want);
    }

    #[test]
    fn rank_and_pivots() {
        assert_eq!(Matrix::identity(Field::Rational, 4).rank(), 4);
        assert_eq!(Matrix::zeros(Field::Rational, 3, 3).rank(), 0);
        let e = q(&[&["1", "1"], &["0", "0"]]).rref();
        assert_eq!((e.rank, e.pivots), (1, vec![0]));
    }

    #[test]
    fn factorization_examples() {
        let fg = q(&[&["1", "1"], &["0", "0"]])
            .full_rank_factorize()
            .unwrap();
        assert_eq!(fg.f, q(&[&["1"], &["0"]]));
        assert_eq!(fg.g, q(&[&["1", "1"]]));
        let fg = q(&[&["1", "0"], &["1", "0"]])
            .full_rank_factorize()
            .unwrap();
        assert_eq!(fg.f, q(&[&["1"], &["1"]]));
        assert_eq!(fg.g, q(&[&["1", "0"]]));
        let i = Matrix::identity(Field::Rational, 3);
        let fg = i.full_rank_factorize().unwrap();
        assert_eq!((fg.f, fg.g), (i.clone(), i));
        assert_eq!(
            Matrix::zeros(Field::Rational, 2, 2).full_rank_factorize(),
            Err(Error::ZeroMatrix)
        );
    }

    #[test]
    fn inversion() {
        let d = q(&[&["2", "0"], &["0", "3"]]);
        assert_eq!(d.try_invert().unwrap(), q(&[&["1/2", "0"], &["0", "1/3"]]));
        assert!(q(&[&["1", "1"], &["0", "0"]]).try_invert().is_none());
        let f2 = Field::prime(2).unwrap();
        let s = Matrix::parse_rows(f2, &[&["0", "1"], &["1", "0"]]).unwrap();
        assert_eq!(s.try_invert().unwrap(), s);
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::identity(Field::Rational, 2);
        let b = Matrix::identity(Field::Rational, 3);
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::ShapeMismatch { .. })
        ));
        let c = Matrix::identity(Field::prime(3).unwrap(), 2);
        assert!(matches!(
            a.checked_add(&c),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn text_format() {
        let m = Matrix::parse_rows(Field::GaussianRational, &[&["1/2+i", "0"], &["-3", "2/3i"]])
            .unwrap();
        let text = m.to_text();
        assert_eq!(text, "ring gaussian n=2\n1/2+1i 0\n-3 2/3i\n");
        assert_eq!(Matrix::parse_text(&text).unwrap(), m);
        let f4 = Matrix::parse_text("ring quadext 2 n=1\nw\n").unwrap();
        assert_eq!(f4.to_text(), "ring quadext 2 n=1\n0+1w\n");
        assert_eq!(
            Matrix::parse_text("# comment\nring f3 n=2\n1 2\n\n0 1\n")
                .unwrap()
                .field(),
            Field::prime(3).unwrap()
        );
        assert!(Matrix::parse_text("ring rational n=2\n1 2\n").is_err());
        assert!(Matrix::parse_text("ring rational n=7\n").is_err());
        assert!(Matrix::parse_inline(Field::Rational, "1 2; 3").is_err());
        assert_eq!(
            Matrix::parse_inline(Field::Rational, "1 1; 0 0").unwrap(),
            q(&[&["1", "1"], &["0", "0"]])
        );
    }
}
