//! Exact rational scalars, vectors and matrices.
//!
//! Every quantity in the crate is an exact rational. Rank and linear solves go
//! through fraction-free (Bareiss) elimination on integer-scaled rows so that
//! intermediate entries stay bounded by minors of the input.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("linear system is singular")]
    SingularSystem,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse rational {input:?}: {reason}")]
pub struct ParseRatError {
    pub input: String,
    pub reason: &'static str,
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"` with `q != 0`.
pub fn parse_rat(input: &str) -> Result<Rat, ParseRatError> {
    let err = |reason| ParseRatError { input: input.to_string(), reason };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return Err(err("expected an integer or p/q"));
    }
    let n: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    let d: BigInt = den.parse().map_err(|_| err("bad denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

/// Parses a comma-separated list such as `"1/3, 1"`.
pub fn parse_rat_list(input: &str) -> Result<Vec<Rat>, ParseRatError> {
    if input.trim().is_empty() {
        return Err(ParseRatError { input: input.to_string(), reason: "empty list" });
    }
    input.split(',').map(parse_rat).collect()
}

/// Renders as `p` for integers and `p/q` otherwise.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Lossy conversion used only by mesh export.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// A coordinate vector over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec(Vec<Rat>);

impl RatVec {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVec(coords)
    }

    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVec(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rat::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    /// Plain coordinate dot product (no Gram matrix).
    pub fn dot(&self, other: &RatVec) -> Rat {
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Scales so that the first nonzero coordinate is 1. Zero stays zero.
    pub fn normalized(&self) -> RatVec {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rat).collect()
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Dense rectangular rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RatMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> RatVec {
        RatVec(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn mul_vec(&self, v: &RatVec) -> RatVec {
        assert_eq!(v.len(), self.cols);
        RatVec((0..self.rows).map(|r| self.row(r).dot(v)).collect())
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }
}

/// Multiplies a row by the lcm of its denominators, giving an integer row.
fn clear_denominators(row: &[Rat]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Bareiss elimination in place; returns the pivot columns in order.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..m[i].len() {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank of a family of vectors.
pub fn rank(vectors: &[RatVec]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let cols = first.len();
    let mut m: Vec<Vec<BigInt>> = vectors.iter().map(|v| clear_denominators(v.coords())).collect();
    bareiss(&mut m, cols).len()
}

/// Solves the square system `a * x = b` exactly.
pub fn solve_linear_system(a: &RatMat, b: &RatVec) -> Result<RatVec, ExactError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(ExactError::DimensionMismatch { expected: n, found: a.cols() });
    }
    if b.len() != n {
        return Err(ExactError::DimensionMismatch { expected: n, found: b.len() });
    }
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            let mut row = a.row(r).into_coords();
            row.push(b[r].clone());
            clear_denominators(&row)
        })
        .collect();
    let pivots = bareiss(&mut m, n);
    if pivots.len() < n {
        return Err(ExactError::SingularSystem);
    }
    let mut x = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rat::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rat::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rat::from_integer(m[i][i].clone());
    }
    Ok(RatVec(x))
}

/// Incrementally maintained row-echelon basis of a subspace.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: Vec<(usize, RatVec)>,
}

impl Span {
    pub fn new() -> Self {
        Span::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &RatVec) -> RatVec {
        let mut w = v.clone();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                w = &w - &row.scale(&f);
            }
        }
        w
    }

    pub fn contains(&self, v: &RatVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &RatVec) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.coords().iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let w = w.scale(&w[p].recip());
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                *row = &*row - &w.scale(&f);
            }
        }
        self.rows.push((p, w));
        true
    }
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
