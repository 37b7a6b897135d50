//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Determinants use Bareiss
//! fraction-free elimination; solves go through rational Gauss-Jordan.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(value: &BigInt) -> Rational {
    BigRational::from_integer(value.clone())
}

/// Dense square-or-rectangular matrix of big integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged matrix rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * ncols + j] = BigInt::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Copy with column `j` replaced by `v` (the Cramer matrix).
    pub fn with_column(&self, j: usize, v: &[BigInt]) -> Self {
        assert_eq!(v.len(), self.rows);
        let mut m = self.clone();
        for (i, x) in v.iter().enumerate() {
            m.set(i, j, x.clone());
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: BigInt = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    /// Rows as `i64` for display and JSON. Panics if an entry overflows.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64().expect("entry fits in i64")).collect())
            .collect()
    }

    /// Leading principal minors, in order of size.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        (1..=self.rows)
            .map(|k| {
                let mut sub = Matrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub.set(i, j, self.get(i, j).clone());
                    }
                }
                det_bareiss(&sub)
            })
            .collect()
    }

    /// Sylvester test on a symmetric matrix.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(|d| d.is_positive())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Fraction-free determinant. The empty matrix has determinant 1.
pub fn det_bareiss(m: &Matrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Solve `m x = b` over the rationals.
#[allow(clippy::needless_range_loop)]
pub fn solve_exact(m: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    assert!(m.is_square());
    let n = m.rows();
    assert_eq!(b.len(), n);
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| rat_int(m.get(i, j))).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero()).ok_or(Error::SingularMatrix)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col].clone();
                for j in col..=n {
                    let delta = &factor * &a[col][j];
                    a[i][j] = &a[i][j] - delta;
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

pub fn solve_integer_rhs(m: &Matrix, b: &[BigInt]) -> Result<Vec<Rational>> {
    let rhs: Vec<Rational> = b.iter().map(rat_int).collect();
    solve_exact(m, &rhs)
}

/// Rational inverse, as rows.
pub fn inverse(m: &Matrix) -> Result<Vec<Vec<Rational>>> {
    let n = m.rows();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
        columns.push(solve_exact(m, &e)?);
    }
    Ok((0..n).map(|i| (0..n).map(|j| columns[j][i].clone()).collect()).collect())
}

/// Whether `v` lies in the lattice spanned by the columns of `m`.
pub fn in_lattice(m: &Matrix, v: &[BigInt]) -> Result<bool> {
    Ok(solve_integer_rhs(m, v)?.iter().all(|x| x.is_integer()))
}

pub fn mobius(k: u64) -> i64 {
    assert!(k >= 1);
    let mut rest = k;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            rest /= d;
            if rest.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if rest > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|d| k.is_multiple_of(*d)).collect()
}

/// Smallest positive integer in the intersection of `Z` and every `q Z`.
///
/// Zero entries are ignored; an all-zero or empty input returns `None`.
pub fn lcm_rationals(values: &[Rational]) -> Option<BigInt> {
    let mut acc: Option<BigInt> = None;
    for q in values.iter().filter(|q| !q.is_zero()) {
        let num = q.numer().abs();
        acc = Some(match acc {
            None => num,
            Some(a) => a.lcm(&num),
        });
    }
    acc
}

/// Binomial coefficient extended to negative upper argument:
/// `C(a, b) = a (a-1) ... (a-b+1) / b!` for `b >= 0`, zero for `b < 0`.
pub fn binomial_ext(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..b {
        num *= BigInt::from(a - k);
        den *= BigInt::from(k + 1);
    }
    num / den
}
