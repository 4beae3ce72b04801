//! Scalar-generic dense linear algebra over exact rationals and `f64`.
//!
//! Exact mode decides every predicate without tolerance. Float mode uses a
//! relative tolerance against the largest singular value.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("need at least D = {dim} vectors, found {count}")]
    TooFewVectors { dim: usize, count: usize },
    #[error("cannot decode scalar from {0}")]
    Decode(String),
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode {other:?} (expected exact or float)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Relative tolerance for float-mode predicates. Ignored in exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Result<Self, LinalgError> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Tolerance(eps))
        } else {
            Err(LinalgError::BadTolerance(eps))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

impl TryFrom<f64> for Tolerance {
    type Error = LinalgError;
    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Tolerance::new(v)
    }
}

impl From<Tolerance> for f64 {
    fn from(t: Tolerance) -> f64 {
        t.0
    }
}

/// Field operations plus the handful of mode-specific decisions the
/// algorithms need.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact comparison with zero, no tolerance.
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Floats proportional to `v` by a positive factor. Exact integer
    /// vectors come out with unit length so huge entries stay in range.
    fn rescaled_f64(v: &[Self]) -> Vec<f64> {
        v.iter().map(Self::to_f64).collect()
    }
    /// Preference for an elimination pivot; zero means unusable.
    fn pivot_weight(&self) -> f64;
    /// Rank of `m`: exact elimination or singular values above `tol * σ_max`.
    fn rank_of(m: &Matrix<Self>, tol: Tolerance) -> usize;
    fn dot_of(a: &[Self], b: &[Self]) -> Self {
        a.iter()
            .zip(b)
            .fold(Self::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }
    /// `(complement_map(preceding, w), det(Γ))` for dimension-checked input.
    fn complement(preceding: &[Vector<Self>], w: &Vector<Self>) -> (Vector<Self>, Self) {
        generic_complement(preceding, w)
    }
    /// Determinant of a square matrix.
    fn det_of(m: &Matrix<Self>) -> Self {
        generic_determinant(m)
    }
    /// For `[A | b]` with `A` square: `(det(A), adj(A) b)`, or `None` when
    /// `A` is singular.
    fn solve_adjugate(aug: &Matrix<Self>) -> Option<(Self, Vec<Self>)> {
        let (a, pivots, odd) = bareiss(aug);
        let u: Vec<Self> = a.data;
        adjugate_back_substitute(u, aug.rows, &pivots, odd, (Self::zero(), Self::one()))
    }
    /// Whether two vectors with inner product `dot` and squared norms
    /// `norm2_a`, `norm2_b` count as orthogonal.
    fn orthogonal(dot: &Self, norm2_a: &Self, norm2_b: &Self, tol: Tolerance) -> bool;
    /// Positive rescaling applied to each vector a construction emits.
    fn canonicalize(v: Vector<Self>) -> Vector<Self>;
    fn encode(&self) -> Value;
    fn decode(v: &Value) -> Result<Self, LinalgError>;
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn rescaled_f64(v: &[Self]) -> Vec<f64> {
        if !v.iter().all(Ratio::is_integer) {
            return v.iter().map(Scalar::to_f64).collect();
        }
        let bits = v.iter().map(|x| x.numer().bits()).max().unwrap_or(0);
        let shift = bits.saturating_sub(64);
        let f: Vec<f64> = v
            .iter()
            .map(|x| ToPrimitive::to_f64(&(x.numer() >> shift)).unwrap_or(f64::NAN))
            .collect();
        let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            f.iter().map(|x| x / norm).collect()
        } else {
            f
        }
    }
    fn pivot_weight(&self) -> f64 {
        if Zero::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }
    fn rank_of(m: &Matrix<Self>, _tol: Tolerance) -> usize {
        match integer_entries(m) {
            Some(a) => {
                let full = m.rows.min(m.cols);
                // Full rank modulo a prime implies full rank over Q.
                if rank_mod_p(&a, m.cols) == full {
                    full
                } else {
                    integer_bareiss(a, m.cols).0
                }
            }
            None => exact_rank(m),
        }
    }
    // BigRational arithmetic reduces by a gcd after every operation, which
    // dominates on large integers; integer-valued inputs skip it.
    fn dot_of(a: &[Self], b: &[Self]) -> Self {
        if a.iter().chain(b).all(Ratio::is_integer) {
            let s = a
                .iter()
                .zip(b)
                .fold(BigInt::zero(), |acc, (x, y)| acc + x.numer() * y.numer());
            Rational::from_integer(s)
        } else {
            a.iter()
                .zip(b)
                .fold(<Self as Zero>::zero(), |acc, (x, y)| acc + x * y)
        }
    }
    fn complement(preceding: &[Vector<Self>], w: &Vector<Self>) -> (Vector<Self>, Self) {
        let ints = |v: &Vector<Self>| {
            v.0.iter()
                .map(|x| x.is_integer().then(|| x.numer().clone()))
                .collect()
        };
        let Some(vs) = preceding
            .iter()
            .map(ints)
            .collect::<Option<Vec<Vec<BigInt>>>>()
        else {
            return generic_complement(preceding, w);
        };
        let Some(wi) = ints(w) else {
            return generic_complement(preceding, w);
        };
        let (out, det) = integer_complement(&vs, &wi);
        let q = Rational::from_integer;
        (Vector(out.into_iter().map(q).collect()), q(det))
    }
    fn solve_adjugate(aug: &Matrix<Self>) -> Option<(Self, Vec<Self>)> {
        let Some(a) = integer_entries(aug) else {
            let (a, pivots, odd) = bareiss(aug);
            return adjugate_back_substitute(
                a.data,
                aug.rows,
                &pivots,
                odd,
                (<Self as Zero>::zero(), <Self as One>::one()),
            );
        };
        let (_, u, odd, pivots) = integer_bareiss(a, aug.cols);
        let (det, y) =
            adjugate_back_substitute(u, aug.rows, &pivots, odd, (BigInt::zero(), BigInt::one()))?;
        let q = |x: BigInt| Rational::from_integer(x);
        Some((q(det), y.into_iter().map(q).collect()))
    }
    fn det_of(m: &Matrix<Self>) -> Self {
        match integer_entries(m) {
            Some(a) if m.rows > 0 => {
                let (rank, a, odd, _) = integer_bareiss(a, m.cols);
                if rank < m.rows {
                    return Zero::zero();
                }
                let d = a[a.len() - 1].clone();
                Rational::from_integer(if odd { -d } else { d })
            }
            _ => generic_determinant(m),
        }
    }
    fn orthogonal(dot: &Self, _: &Self, _: &Self, _: Tolerance) -> bool {
        Zero::is_zero(dot)
    }
    fn canonicalize(v: Vector<Self>) -> Vector<Self> {
        primitive(&v)
    }
    fn encode(&self) -> Value {
        Value::String(self.to_string())
    }
    fn decode(v: &Value) -> Result<Self, LinalgError> {
        let s = v
            .as_str()
            .ok_or_else(|| LinalgError::Decode(v.to_string()))?;
        let r = Rational::from_str(s).map_err(|_| LinalgError::Decode(s.to_string()))?;
        Ok(r)
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
    fn rank_of(m: &Matrix<Self>, tol: Tolerance) -> usize {
        let sv = singular_values(m);
        let max = sv.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol.get() * max).count()
    }
    fn orthogonal(dot: &Self, norm2_a: &Self, norm2_b: &Self, tol: Tolerance) -> bool {
        dot.abs() <= tol.get() * (norm2_a * norm2_b).sqrt()
    }
    fn canonicalize(v: Vector<Self>) -> Vector<Self> {
        let norm = v.norm2().sqrt();
        if norm == 0.0 {
            v
        } else {
            v.scale(&(1.0 / norm))
        }
    }
    fn encode(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }
    fn decode(v: &Value) -> Result<Self, LinalgError> {
        v.as_f64().ok_or_else(|| LinalgError::Decode(v.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vector<T>(pub Vec<T>);

impl<T: Scalar> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = T::one();
        v
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&x| T::from_i64(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        T::dot_of(&self.0, &other.0)
    }

    pub fn norm2(&self) -> T {
        self.dot(self)
    }

    pub fn scale(&self, c: &T) -> Self {
        Vector(self.0.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// `self - c * other`
    pub fn sub_scaled(&self, c: &T, other: &Self) -> Self {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() - c.clone() * b.clone())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn to_f64(&self) -> Vector<f64> {
        Vector(self.0.iter().map(Scalar::to_f64).collect())
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors, `dim x columns.len()`.
    pub fn from_columns(dim: usize, columns: &[Vector<T>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            check_dim(dim, c)?;
            for (i, x) in c.0.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let v = (0..self.cols).fold(T::zero(), |acc, k| {
                    acc + self.get(r, k).clone() * other.get(k, c).clone()
                });
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Vector<T>) -> Result<Vector<T>, LinalgError> {
        check_dim(self.cols, v)?;
        Ok(Vector(
            (0..self.rows)
                .map(|r| {
                    (0..self.cols).fold(T::zero(), |acc, c| {
                        acc + self.get(r, c).clone() * v.0[c].clone()
                    })
                })
                .collect(),
        ))
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != skip_row) {
            for c in (0..self.cols).filter(|&c| c != skip_col) {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

fn check_dim<T>(dim: usize, v: &Vector<T>) -> Result<(), LinalgError> {
    if v.0.len() == dim {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch {
            expected: dim,
            found: v.0.len(),
        })
    }
}

fn common_dim<T>(vectors: &[Vector<T>]) -> Result<Option<usize>, LinalgError> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    let dim = first.0.len();
    for v in vectors {
        check_dim(dim, v)?;
    }
    Ok(Some(dim))
}

/// Matrix of pairwise inner products.
pub fn gram<T: Scalar>(columns: &[Vector<T>]) -> Result<Matrix<T>, LinalgError> {
    common_dim(columns)?;
    let k = columns.len();
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let d = columns[i].dot(&columns[j]);
            g.set(j, i, d.clone());
            g.set(i, j, d);
        }
    }
    Ok(g)
}

/// Fraction-free (Bareiss) forward elimination. Returns the echelon form and
/// the pivot columns; every division is exact over the integers.
fn bareiss<T: Scalar>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>, bool) {
    let mut a = m.clone();
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut odd_swaps = false;
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let (best, weight) = (row..a.rows)
            .map(|r| (r, a.get(r, col).pivot_weight()))
            .fold((row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if weight == 0.0 {
            continue;
        }
        if best != row {
            for c in 0..a.cols {
                a.data.swap(best * a.cols + c, row * a.cols + c);
            }
            odd_swaps = !odd_swaps;
        }
        let p = a.get(row, col).clone();
        for r in row + 1..a.rows {
            let f = a.get(r, col).clone();
            for c in col + 1..a.cols {
                let v = (a.get(r, c).clone() * p.clone() - f.clone() * a.get(row, c).clone())
                    / prev.clone();
                a.set(r, c, v);
            }
            a.set(r, col, T::zero());
        }
        prev = p;
        pivots.push(col);
        row += 1;
    }
    (a, pivots, odd_swaps)
}

pub fn determinant<T: Scalar>(m: &Matrix<T>) -> Result<T, LinalgError> {
    m.require_square()?;
    Ok(T::det_of(m))
}

fn generic_determinant<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows;
    if n == 0 {
        return T::one();
    }
    let (a, pivots, odd) = bareiss(m);
    if pivots.len() < n {
        return T::zero();
    }
    let d = a.get(n - 1, n - 1).clone();
    if odd {
        -d
    } else {
        d
    }
}

fn integer_entries(m: &Matrix<Rational>) -> Option<Vec<BigInt>> {
    m.data
        .iter()
        .map(|x| x.is_integer().then(|| x.numer().clone()))
        .collect()
}

const MERSENNE_61: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn rank_mod_p(a: &[BigInt], cols: usize) -> usize {
    let p = BigInt::from(MERSENNE_61);
    let mut m: Vec<u64> = a
        .iter()
        .map(|x| x.mod_floor(&p).to_u64().unwrap_or(0))
        .collect();
    let rows = m.len().checked_div(cols).unwrap_or(0);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        for c in 0..cols {
            m.swap(pr * cols + c, row * cols + c);
        }
        let inv = pow_mod(m[row * cols + col], MERSENNE_61 - 2);
        for r in row + 1..rows {
            let f = mul_mod(m[r * cols + col], inv);
            if f == 0 {
                continue;
            }
            for c in col..cols {
                let sub = mul_mod(f, m[row * cols + c]);
                m[r * cols + c] = (m[r * cols + c] + MERSENNE_61 - sub) % MERSENNE_61;
            }
        }
        row += 1;
    }
    row
}

/// Bareiss over `BigInt`, row-major with `cols` columns. Returns the rank,
/// the eliminated matrix and the swap parity.
fn integer_bareiss(mut a: Vec<BigInt>, cols: usize) -> (usize, Vec<BigInt>, bool, Vec<usize>) {
    let rows = a.len().checked_div(cols).unwrap_or(0);
    let mut prev = BigInt::one();
    let mut odd = false;
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| !a[r * cols + col].is_zero()) else {
            continue;
        };
        if pr != row {
            for c in 0..cols {
                a.swap(pr * cols + c, row * cols + c);
            }
            odd = !odd;
        }
        for r in row + 1..rows {
            let f = std::mem::take(&mut a[r * cols + col]);
            for c in col + 1..cols {
                let v = (&a[r * cols + c] * &a[row * cols + col] - &f * &a[row * cols + c]) / &prev;
                a[r * cols + c] = v;
            }
        }
        prev = a[row * cols + col].clone();
        pivots.push(col);
        row += 1;
    }
    (row, a, odd, pivots)
}

/// Back substitution on a fraction-free echelon form `[U | c]` of size
/// `k x (k + 1)`. With `d = det(A)`, solves `U y = d c` so that `y = adj(A) b`;
/// every division is exact.
fn adjugate_back_substitute<R>(
    u: Vec<R>,
    k: usize,
    pivots: &[usize],
    odd: bool,
    (zero, one): (R, R),
) -> Option<(R, Vec<R>)>
where
    R: Clone + Neg<Output = R> + Sub<Output = R> + Mul<Output = R> + Div<Output = R>,
{
    if pivots.len() < k || (0..k).any(|i| pivots[i] != i) {
        return None;
    }
    if k == 0 {
        return Some((one, Vec::new()));
    }
    let cols = k + 1;
    let last = u[(k - 1) * cols + k - 1].clone();
    let det = if odd { -last } else { last };
    let mut y = vec![zero; k];
    for i in (0..k).rev() {
        let mut acc = det.clone() * u[i * cols + k].clone();
        for j in i + 1..k {
            acc = acc - u[i * cols + j].clone() * y[j].clone();
        }
        y[i] = acc / u[i * cols + i].clone();
    }
    Some((det, y))
}

/// Transposed cofactor matrix, so `m * adj(m) = det(m) * I`.
pub fn adjugate<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    m.require_square()?;
    let n = m.rows;
    let mut adj = Matrix::zeros(n, n);
    if n == 1 {
        adj.set(0, 0, T::one());
        return Ok(adj);
    }
    for i in 0..n {
        for j in 0..n {
            let c = determinant(&m.minor(j, i))?;
            adj.set(i, j, if (i + j) % 2 == 0 { c } else { -c });
        }
    }
    Ok(adj)
}

fn exact_rank<T: Scalar>(m: &Matrix<T>) -> usize {
    bareiss(m).1.len()
}

/// Rank of the matrix with the given columns.
pub fn rank<T: Scalar>(columns: &[Vector<T>], tol: Tolerance) -> Result<usize, LinalgError> {
    match common_dim(columns)? {
        None => Ok(0),
        Some(dim) => Ok(T::rank_of(&Matrix::from_columns(dim, columns)?, tol)),
    }
}

/// Polynomial map onto the orthogonal complement of `span(preceding)`:
///
/// `v = det(Γ) w − V adj(Γ) Vᵀ w`, with `V` the column-stacked preceding
/// vectors and `Γ = VᵀV`.
///
/// Since `Γ adj(Γ) = det(Γ) I`, `Vᵀ v = 0` identically. For independent
/// preceding vectors `v = det(Γ) · proj⊥(w)`, which sweeps the whole
/// complement as `w` varies. For dependent ones `V adj(Γ) = 0` and
/// `det(Γ) = 0`, so `v = 0`.
pub fn complement_map<T: Scalar>(
    preceding: &[Vector<T>],
    w: &Vector<T>,
) -> Result<Vector<T>, LinalgError> {
    complement_map_with_det(preceding, w).map(|(v, _)| v)
}

/// [`complement_map`] together with `det(Γ)`.
pub fn complement_map_with_det<T: Scalar>(
    preceding: &[Vector<T>],
    w: &Vector<T>,
) -> Result<(Vector<T>, T), LinalgError> {
    let dim = w.dim();
    for v in preceding {
        check_dim(dim, v)?;
    }
    Ok(T::complement(preceding, w))
}

fn generic_complement<T: Scalar>(preceding: &[Vector<T>], w: &Vector<T>) -> (Vector<T>, T) {
    let k = preceding.len();
    let mut aug = Matrix::zeros(k, k + 1);
    for r in 0..k {
        for c in r..k {
            let d = preceding[r].dot(&preceding[c]);
            aug.set(c, r, d.clone());
            aug.set(r, c, d);
        }
        aug.set(r, k, preceding[r].dot(w));
    }
    // Singular Γ means dependent columns, where V adj(Γ) = 0 and det(Γ) = 0.
    let Some((det, coeffs)) = T::solve_adjugate(&aug) else {
        return (Vector::zeros(w.dim()), T::zero());
    };
    let mut out = w.scale(&det);
    for (c, v) in coeffs.iter().zip(preceding) {
        out = out.sub_scaled(c, v);
    }
    (out, det)
}

fn integer_complement(preceding: &[Vec<BigInt>], w: &[BigInt]) -> (Vec<BigInt>, BigInt) {
    let dot = |a: &[BigInt], b: &[BigInt]| {
        a.iter()
            .zip(b)
            .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
    };
    let k = preceding.len();
    let cols = k + 1;
    let mut aug = vec![BigInt::zero(); k * cols];
    for r in 0..k {
        for c in r..k {
            let d = dot(&preceding[r], &preceding[c]);
            aug[c * cols + r] = d.clone();
            aug[r * cols + c] = d;
        }
        aug[r * cols + k] = dot(&preceding[r], w);
    }
    let (_, u, odd, pivots) = integer_bareiss(aug, cols);
    let Some((det, coeffs)) =
        adjugate_back_substitute(u, k, &pivots, odd, (BigInt::zero(), BigInt::one()))
    else {
        return (vec![BigInt::zero(); w.len()], BigInt::zero());
    };
    let out = (0..w.len())
        .map(|i| {
            coeffs
                .iter()
                .zip(preceding)
                .fold(&det * &w[i], |acc, (c, v)| acc - c * &v[i])
        })
        .collect();
    (out, det)
}

/// Positive multiple of `v` with coprime integer entries. Zero stays zero.
pub fn primitive(v: &Vector<Rational>) -> Vector<Rational> {
    let lcm = v.0.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.0.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
        if g.is_one() {
            return Vector(ints.into_iter().map(Rational::from_integer).collect());
        }
    }
    if g.is_zero() {
        return v.clone();
    }
    Vector(
        ints.into_iter()
            .map(|x| Rational::from_integer(x / &g))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneralPosition {
    Yes,
    /// Lexicographically first `D`-subset of indices that is dependent.
    Fails(Vec<usize>),
}

impl GeneralPosition {
    pub fn holds(&self) -> bool {
        matches!(self, GeneralPosition::Yes)
    }
}

/// Whether every `dim` of the vectors are linearly independent.
pub fn general_position<T: Scalar>(
    vectors: &[Vector<T>],
    dim: usize,
    tol: Tolerance,
) -> Result<GeneralPosition, LinalgError> {
    if vectors.len() < dim || dim == 0 {
        return Err(LinalgError::TooFewVectors {
            dim,
            count: vectors.len(),
        });
    }
    for v in vectors {
        check_dim(dim, v)?;
    }
    for subset in (0..vectors.len()).combinations(dim) {
        let cols: Vec<Vector<T>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        if T::rank_of(&Matrix::from_columns(dim, &cols)?, tol) < dim {
            return Ok(GeneralPosition::Fails(subset));
        }
    }
    Ok(GeneralPosition::Yes)
}

fn to_nalgebra(m: &Matrix<f64>, min_cols: usize) -> DMatrix<f64> {
    let cols = m.cols.max(min_cols);
    DMatrix::from_fn(
        m.rows,
        cols,
        |r, c| if c < m.cols { *m.get(r, c) } else { 0.0 },
    )
}

pub fn singular_values(m: &Matrix<f64>) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    to_nalgebra(m, 0)
        .singular_values()
        .iter()
        .copied()
        .collect()
}

/// Smallest singular value over the largest, or 0 for a zero matrix.
pub fn condition_margin(columns: &[Vector<f64>]) -> f64 {
    let Some(dim) = common_dim(columns).ok().flatten() else {
        return 1.0;
    };
    let Ok(m) = Matrix::from_columns(dim, columns) else {
        return 0.0;
    };
    let sv = singular_values(&m);
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    sv.iter().copied().fold(f64::INFINITY, f64::min) / max
}

/// Orthonormal basis of the orthogonal complement of `span(preceding)` in
/// `R^dim`, with numerical rank judged as in [`rank`].
pub fn orthonormal_complement_basis(
    preceding: &[Vector<f64>],
    dim: usize,
    tol: Tolerance,
) -> Result<Vec<Vector<f64>>, LinalgError> {
    if preceding.is_empty() {
        return Ok((0..dim).map(|i| Vector::basis(dim, i)).collect());
    }
    let m = Matrix::from_columns(dim, preceding)?;
    // Padding to at least `dim` columns makes U square.
    let svd = to_nalgebra(&m, dim).svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    Ok(svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| max == 0.0 || s <= tol.get() * max)
        .map(|(i, _)| Vector(u.column(i).iter().copied().collect()))
        .collect())
}
