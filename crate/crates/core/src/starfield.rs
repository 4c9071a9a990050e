//! Exact scalar fields carrying an involution.
//!
//! Four families are supported:
//!
//! * `Rational` (ℚ) with the identity involution,
//! * `GaussianRational` (ℚ(i)) with complex conjugation,
//! * `Prime(p)` (𝔽ₚ) with the identity involution,
//! * `QuadExt(p)` (𝔽_{p²}) with the Frobenius map `s ↦ sᵖ`.
//!
//! 𝔽_{p²} elements are pairs `(x, y)` standing for `x + yω` where `ω` is a root
//! of the smallest monic irreducible `X² + bX + c` in lexicographic `(b, c)`
//! order. Over 𝔽₂ this gives `ω² = ω + 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest supported prime. Residue products must fit in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// Defining polynomial `X² + bX + c` of 𝔽_{p²} over 𝔽ₚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadModulus {
    pub p: u64,
    pub b: u64,
    pub c: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    GaussianRational,
    Prime(u64),
    QuadExt(QuadModulus),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Rat(BigRational),
    Gauss(BigRational, BigRational),
    Residue(u64),
    Pair(u64, u64),
}

/// An element of one of the supported fields, always in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    value: Value,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_square_mod(d: u64, p: u64) -> bool {
    d.is_multiple_of(p) || p == 2 || pow_mod(d, (p - 1) / 2, p) == 1
}

fn check_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

impl QuadModulus {
    /// Picks the smallest monic irreducible quadratic over 𝔽ₚ.
    pub fn for_prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        for b in 0..p {
            for c in 0..p {
                let irreducible = if p == 2 {
                    // roots 0 and 1: c ≠ 0 and 1 + b + c ≠ 0
                    c != 0 && (1 + b + c) % 2 != 0
                } else {
                    let disc = (b * b % p + p - 4 * c % p) % p;
                    !is_square_mod(disc, p)
                };
                if irreducible {
                    return Ok(QuadModulus { p, b, c });
                }
            }
        }
        unreachable!("every prime field has an irreducible quadratic")
    }
}

impl Field {
    pub fn rational() -> Self {
        Field::Rational
    }

    pub fn gaussian() -> Self {
        Field::GaussianRational
    }

    pub fn prime(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(Field::Prime(p))
    }

    pub fn quad_ext(p: u64) -> Result<Self> {
        Ok(Field::QuadExt(QuadModulus::for_prime(p)?))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational | Field::GaussianRational => 0,
            Field::Prime(p) => *p,
            Field::QuadExt(m) => m.p,
        }
    }

    /// Number of elements, `None` for the infinite fields.
    pub fn size(&self) -> Option<u64> {
        match self {
            Field::Rational | Field::GaussianRational => None,
            Field::Prime(p) => Some(*p),
            Field::QuadExt(m) => Some(m.p * m.p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// Short name used by the command line: `q`, `qi`, `f<p>`, `f<p>2`.
    pub fn short_name(&self) -> String {
        match self {
            Field::Rational => "q".into(),
            Field::GaussianRational => "qi".into(),
            Field::Prime(p) => format!("f{p}"),
            Field::QuadExt(m) => format!("f{}2", m.p),
        }
    }

    pub fn from_short_name(name: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            input: name.to_string(),
            reason: reason.to_string(),
        };
        match name {
            "q" => return Ok(Field::Rational),
            "qi" => return Ok(Field::GaussianRational),
            _ => {}
        }
        let digits = name
            .strip_prefix('f')
            .ok_or_else(|| bad("expected q, qi, f<p> or f<p>2"))?;
        if let Some(base) = digits.strip_suffix("^2") {
            let p = base.parse::<u64>().map_err(|_| bad("bad prime"))?;
            return Field::quad_ext(p);
        }
        let n = digits.parse::<u64>().map_err(|_| bad("bad prime"))?;
        if is_prime(n) {
            return Field::prime(n);
        }
        // a number ending in 2 is prime only when it is 2, so f<p>2 is unambiguous
        match digits.strip_suffix('2') {
            Some(base) if !base.is_empty() => {
                let p = base.parse::<u64>().map_err(|_| bad("bad prime"))?;
                Field::quad_ext(p)
            }
            _ => Err(Error::NotPrime(n)),
        }
    }

    /// Tokens used in the `ring ...` header of the matrix text format.
    pub fn header_tokens(&self) -> String {
        match self {
            Field::Rational => "rational".into(),
            Field::GaussianRational => "gaussian".into(),
            Field::Prime(p) => format!("prime {p}"),
            Field::QuadExt(m) => format!("quadext {}", m.p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        let value = match self {
            Field::Rational => Value::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::GaussianRational => Value::Gauss(
                BigRational::from_integer(BigInt::from(n)),
                BigRational::zero(),
            ),
            Field::Prime(p) => Value::Residue(reduce_i64(n, *p)),
            Field::QuadExt(m) => Value::Pair(reduce_i64(n, m.p), 0),
        };
        Scalar {
            field: *self,
            value,
        }
    }

    pub fn rational_value(&self, q: BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar {
                field: *self,
                value: Value::Rat(q),
            }),
            Field::GaussianRational => Ok(Scalar {
                field: *self,
                value: Value::Gauss(q, BigRational::zero()),
            }),
            _ => {
                let num = self.reduce_integer(q.numer());
                let den = self.reduce_integer(q.denom());
                Ok(&num * &den.inv()?)
            }
        }
    }

    fn reduce_integer(&self, n: &BigInt) -> Scalar {
        match self.characteristic() {
            0 => Scalar {
                field: *self,
                value: match self {
                    Field::Rational => Value::Rat(BigRational::from_integer(n.clone())),
                    _ => Value::Gauss(BigRational::from_integer(n.clone()), BigRational::zero()),
                },
            },
            p => {
                let r = n.mod_floor_u64(p);
                match self {
                    Field::Prime(_) => Scalar {
                        field: *self,
                        value: Value::Residue(r),
                    },
                    _ => Scalar {
                        field: *self,
                        value: Value::Pair(r, 0),
                    },
                }
            }
        }
    }

    /// `re + im·i` over ℚ(i).
    pub fn gaussian_value(&self, re: BigRational, im: BigRational) -> Result<Scalar> {
        match self {
            Field::GaussianRational => Ok(Scalar {
                field: *self,
                value: Value::Gauss(re, im),
            }),
            other => Err(Error::FieldMismatch {
                left: *other,
                right: Field::GaussianRational,
            }),
        }
    }

    /// `x + yω` over 𝔽_{p²}, reducing both coordinates.
    pub fn quad_value(&self, x: u64, y: u64) -> Result<Scalar> {
        match self {
            Field::QuadExt(m) => Ok(Scalar {
                field: *self,
                value: Value::Pair(x % m.p, y % m.p),
            }),
            other => Err(Error::Parse {
                input: format!("{x}+{y}w"),
                reason: format!("not an element of {other}"),
            }),
        }
    }

    /// The imaginary unit of ℚ(i) or the generator ω of 𝔽_{p²}.
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            Field::GaussianRational => Some(Scalar {
                field: *self,
                value: Value::Gauss(BigRational::zero(), BigRational::one()),
            }),
            Field::QuadExt(_) => Some(Scalar {
                field: *self,
                value: Value::Pair(0, 1),
            }),
            _ => None,
        }
    }

    /// All field elements in canonical order: residues ascending, pairs
    /// `(x, y)` ordered by `x` then `y`.
    pub fn elements(&self) -> Result<Vec<Scalar>> {
        match self {
            Field::Prime(p) => Ok((0..*p)
                .map(|r| Scalar {
                    field: *self,
                    value: Value::Residue(r),
                })
                .collect()),
            Field::QuadExt(m) => Ok((0..m.p)
                .flat_map(|x| (0..m.p).map(move |y| (x, y)))
                .map(|(x, y)| Scalar {
                    field: *self,
                    value: Value::Pair(x, y),
                })
                .collect()),
            _ => Err(Error::InfiniteField(*self)),
        }
    }

    pub fn parse_scalar(&self, token: &str) -> Result<Scalar> {
        let bad = |reason: &str| Error::Parse {
            input: token.to_string(),
            reason: reason.to_string(),
        };
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(bad("empty or contains whitespace"));
        }
        match self {
            Field::Rational => Ok(Scalar {
                field: *self,
                value: Value::Rat(parse_fraction(token).ok_or_else(|| bad("expected p/q or n"))?),
            }),
            Field::GaussianRational => {
                let (re, im) = split_imaginary(token, 'i', parse_fraction)
                    .ok_or_else(|| bad("expected a+bi"))?;
                Ok(Scalar {
                    field: *self,
                    value: Value::Gauss(
                        re.unwrap_or_else(BigRational::zero),
                        im.unwrap_or_else(BigRational::zero),
                    ),
                })
            }
            Field::Prime(p) => {
                let n = token
                    .parse::<BigInt>()
                    .map_err(|_| bad("expected an integer"))?;
                Ok(Scalar {
                    field: *self,
                    value: Value::Residue(n.mod_floor_u64(*p)),
                })
            }
            Field::QuadExt(m) => {
                let p = m.p;
                let (x, y) = split_imaginary(token, 'w', |s| {
                    s.parse::<BigInt>().ok().map(|n| n.mod_floor_u64(p))
                })
                .ok_or_else(|| bad("expected x+yw"))?;
                Ok(Scalar {
                    field: *self,
                    value: Value::Pair(x.unwrap_or(0), y.unwrap_or(0)),
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::GaussianRational => write!(f, "Q(i)"),
            Field::Prime(p) => write!(f, "F_{p}"),
            Field::QuadExt(m) => write!(f, "F_{}^2", m.p),
        }
    }
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    n.rem_euclid(p as i64) as u64
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::{Integer, ToPrimitive};
        self.mod_floor(&BigInt::from(p))
            .to_u64()
            .expect("residue fits in u64")
    }
}

fn parse_fraction(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.parse::<BigInt>().ok()?;
            if d.starts_with(['+', '-']) {
                return None;
            }
            let d = d.parse::<BigInt>().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse::<BigInt>().ok()?)),
    }
}

/// Splits `re±im<unit>` into its two parts. A missing part is `None`; a bare
/// unit (`i`, `-i`) stands for ±1.
fn split_imaginary<T, F>(token: &str, unit: char, parse: F) -> Option<(Option<T>, Option<T>)>
where
    F: Fn(&str) -> Option<T>,
{
    let Some(body) = token.strip_suffix(unit) else {
        return Some((Some(parse(token)?), None));
    };
    // the sign separating the parts is the last + or - that is not leading
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (Some(&body[..i]), &body[i..]),
        None => (None, body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s.strip_prefix('+').unwrap_or(s),
    };
    let re = match re {
        Some(r) => Some(parse(r)?),
        None => None,
    };
    Some((re, Some(parse(im)?)))
}

impl Scalar {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(q) => q.is_zero(),
            Value::Gauss(re, im) => re.is_zero() && im.is_zero(),
            Value::Residue(r) => *r == 0,
            Value::Pair(x, y) => *x == 0 && *y == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.add_unchecked(&other.neg_value()))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        let value = match (&self.value, &other.value, self.field) {
            (Value::Rat(a), Value::Rat(b), _) => Value::Rat(a + b),
            (Value::Gauss(a, b), Value::Gauss(c, d), _) => Value::Gauss(a + c, b + d),
            (Value::Residue(a), Value::Residue(b), Field::Prime(p)) => Value::Residue((a + b) % p),
            (Value::Pair(a, b), Value::Pair(c, d), Field::QuadExt(m)) => {
                Value::Pair((a + c) % m.p, (b + d) % m.p)
            }
            _ => unreachable!("fields checked by caller"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        let value = match (&self.value, &other.value, self.field) {
            (Value::Rat(a), Value::Rat(b), _) => Value::Rat(a * b),
            (Value::Gauss(a, b), Value::Gauss(c, d), _) => {
                Value::Gauss(a * c - b * d, a * d + b * c)
            }
            (Value::Residue(a), Value::Residue(b), Field::Prime(p)) => Value::Residue(a * b % p),
            (Value::Pair(x1, y1), Value::Pair(x2, y2), Field::QuadExt(m)) => {
                let p = m.p;
                // ω² = -bω - c
                let yy = y1 * y2 % p;
                let x = (x1 * x2 % p + p - m.c * yy % p) % p;
                let y = ((x1 * y2 % p + x2 * y1 % p) % p + p - m.b * yy % p) % p;
                Value::Pair(x, y)
            }
            _ => unreachable!("fields checked by caller"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    fn neg_value(&self) -> Scalar {
        let value = match (&self.value, self.field) {
            (Value::Rat(a), _) => Value::Rat(-a),
            (Value::Gauss(a, b), _) => Value::Gauss(-a, -b),
            (Value::Residue(a), Field::Prime(p)) => Value::Residue((p - a) % p),
            (Value::Pair(x, y), Field::QuadExt(m)) => Value::Pair((m.p - x) % m.p, (m.p - y) % m.p),
            _ => unreachable!("value matches its field"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    /// `Σ xᵢ·yᵢ` with a single reduction at the end over ℚ and ℚ(i).
    ///
    /// All operands must belong to `field`.
    pub fn sum_of_products<'a, I>(field: Field, pairs: I) -> Scalar
    where
        I: IntoIterator<Item = (&'a Scalar, &'a Scalar)>,
    {
        match field {
            Field::Rational => {
                let (mut num, mut den) = (BigInt::zero(), BigInt::one());
                for (x, y) in pairs {
                    let (Value::Rat(x), Value::Rat(y)) = (&x.value, &y.value) else {
                        panic!("scalar field mismatch");
                    };
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    let pn = x.numer() * y.numer();
                    let pd = x.denom() * y.denom();
                    num = num * &pd + pn * &den;
                    den *= pd;
                }
                Scalar {
                    field,
                    value: Value::Rat(BigRational::new(num, den)),
                }
            }
            Field::GaussianRational => {
                // running sum (re + im·i) / den
                let (mut re, mut im, mut den) = (BigInt::zero(), BigInt::zero(), BigInt::one());
                for (x, y) in pairs {
                    let (Value::Gauss(a, b), Value::Gauss(c, d)) = (&x.value, &y.value) else {
                        panic!("scalar field mismatch");
                    };
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    // x = (xr + xi·i)/xd with xd = den(a)·den(b)
                    let (xr, xi, xd) = (
                        a.numer() * b.denom(),
                        b.numer() * a.denom(),
                        a.denom() * b.denom(),
                    );
                    let (yr, yi, yd) = (
                        c.numer() * d.denom(),
                        d.numer() * c.denom(),
                        c.denom() * d.denom(),
                    );
                    let pr = &xr * &yr - &xi * &yi;
                    let pi = &xr * &yi + &xi * &yr;
                    let pd = xd * yd;
                    re = re * &pd + pr * &den;
                    im = im * &pd + pi * &den;
                    den *= pd;
                }
                Scalar {
                    field,
                    value: Value::Gauss(
                        BigRational::new(re, den.clone()),
                        BigRational::new(im, den),
                    ),
                }
            }
            _ => pairs.into_iter().fold(field.zero(), |acc, (x, y)| {
                acc.add_unchecked(&x.mul_unchecked(y))
            }),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = match (&self.value, self.field) {
            (Value::Rat(a), _) => Value::Rat(a.recip()),
            (Value::Gauss(a, b), _) => {
                let norm = a * a + b * b;
                Value::Gauss(a / &norm, -(b / &norm))
            }
            (Value::Residue(a), Field::Prime(p)) => Value::Residue(pow_mod(*a, p - 2, p)),
            (Value::Pair(..), Field::QuadExt(m)) => {
                // s⁻¹ = s* / N(s) with N(s) = s·s* ∈ 𝔽ₚ
                let conj = self.star();
                let Value::Pair(n, _) = self.mul_unchecked(&conj).value else {
                    unreachable!()
                };
                let n_inv = pow_mod(n, m.p - 2, m.p);
                let Value::Pair(x, y) = conj.value else {
                    unreachable!()
                };
                Value::Pair(x * n_inv % m.p, y * n_inv % m.p)
            }
            _ => unreachable!("value matches its field"),
        };
        Ok(Scalar {
            field: self.field,
            value,
        })
    }

    /// The scalar involution.
    pub fn star(&self) -> Scalar {
        let value = match (&self.value, self.field) {
            (Value::Gauss(a, b), _) => Value::Gauss(a.clone(), -b),
            (Value::Pair(x, y), Field::QuadExt(m)) => {
                // ωᵖ is the other root, -b - ω
                let p = m.p;
                Value::Pair((x + p - y * m.b % p) % p, (p - y) % p)
            }
            (v, _) => v.clone(),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// `s · s*`, which lies in the fixed field of the involution.
    pub fn norm(&self) -> Scalar {
        self.mul_unchecked(&self.star())
    }

    /// Real and imaginary parts over ℚ or ℚ(i).
    pub fn as_gaussian(&self) -> Option<(&BigRational, Option<&BigRational>)> {
        match &self.value {
            Value::Rat(q) => Some((q, None)),
            Value::Gauss(re, im) => Some((re, Some(im))),
            _ => None,
        }
    }

    /// Residue or `(x, y)` coordinates over a finite field.
    pub fn as_residues(&self) -> Option<(u64, Option<u64>)> {
        match &self.value {
            Value::Residue(r) => Some((*r, None)),
            Value::Pair(x, y) => Some((*x, Some(*y))),
            _ => None,
        }
    }
}

fn fmt_fraction(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(q) => fmt_fraction(q, f),
            Value::Gauss(re, im) => {
                if im.is_zero() {
                    fmt_fraction(re, f)
                } else if re.is_zero() {
                    fmt_fraction(im, f)?;
                    write!(f, "i")
                } else {
                    fmt_fraction(re, f)?;
                    write!(f, "{}", if im.is_negative() { "-" } else { "+" })?;
                    fmt_fraction(&im.abs(), f)?;
                    write!(f, "i")
                }
            }
            Value::Residue(r) => write!(f, "{r}"),
            Value::Pair(x, y) => write!(f, "{x}+{y}w"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.field)
    }
}

// Operator forms assume matching fields and panic otherwise; the checked_*
// methods report a mismatch as an error instead.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_value()
    }
}
