//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Integer vectors are plain
//! `Vec<Int>` slices; [`Matrix`] is a thin row-major carrier used for
//! unimodular frames and determinants.

// Elimination loops read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn to_rat_vec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Returns the integer coordinates of `v`, or `None` if some coordinate is fractional.
pub fn to_int_vec(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Pairing of an integer covector with a rational point.
pub fn pair(u: &[Int], x: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (a, b) in u.iter().zip(x) {
        if !a.is_zero() {
            acc += b * a;
        }
    }
    acc
}

pub fn sub_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive_part(v: &[Int]) -> Result<Vec<Int>> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Splits a nonzero rational vector as `length * direction` with `direction`
/// a primitive integer vector and `length > 0`. The length is the lattice
/// length of the segment from `0` to `v`.
pub fn primitive_direction(v: &[Rat]) -> Result<(Vec<Int>, Rat)> {
    let den = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let scaled: Vec<Int> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = gcd_all(&scaled);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let dir = scaled.iter().map(|x| x / &g).collect();
    Ok((dir, Rat::new(g, den)))
}

/// Rank of a list of rational row vectors.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Dimension of the affine hull of a point set (`-1` style empty sets give 0).
pub fn affine_rank(points: &[&[Rat]]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<Rat>> = rest.iter().map(|p| sub_rat(p, p0)).collect();
            rank(&diffs)
        }
    }
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for j in c..=n {
            m[c][j] = &m[c][j] / &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Basis of the right kernel `{x : rows * x = 0}` in `dim` variables.
pub fn kernel(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for j in 0..dim {
            m[r][j] = &m[r][j] / &pivot;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..dim {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); dim];
            x[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -m[row][f].clone();
            }
            x
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant of an integer matrix given by rows.
fn bareiss(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut negate = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Int::zero(),
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
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: Vec<Vec<T>>,
    cols: usize,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Ragged {
                    row: i,
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(Self { rows, cols })
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self {
            rows,
            cols: self.rows.len(),
        }
    }

    fn check_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows.len(),
                cols: self.cols,
            })
        }
    }
}

impl IntMatrix {
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| int_vec(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::one() } else { Int::zero() })
                    .collect()
            })
            .collect();
        Self { rows, cols: n }
    }

    pub fn det(&self) -> Result<Int> {
        self.check_square()?;
        Ok(bareiss(self.rows.clone()))
    }

    /// `det = ±1`, i.e. the rows form a basis of the lattice.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.det()?.abs().is_one())
    }

    pub fn inverse_unimodular(&self) -> Result<Self> {
        if !self.is_unimodular()? {
            return Err(Error::NotUnimodular);
        }
        let inv = self.to_rat().inverse().ok_or(Error::NotUnimodular)?;
        let rows = inv
            .rows
            .iter()
            .map(|r| to_int_vec(r).ok_or(Error::NotUnimodular))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows,
            cols: self.cols,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.cols)
                    .map(|j| r.iter().zip(&other.rows).map(|(a, b)| a * &b[j]).sum())
                    .collect()
            })
            .collect();
        Ok(Self {
            rows,
            cols: other.cols,
        })
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        self.rows.iter().map(|r| pair(r, v)).collect()
    }

    pub fn to_rat(&self) -> RatMatrix {
        Matrix {
            rows: self.rows.iter().map(|r| to_rat_vec(r)).collect(),
            cols: self.cols,
        }
    }
}

impl RatMatrix {
    /// Exact determinant; denominators are cleared row by row and the
    /// integer determinant is taken fraction-free.
    pub fn det(&self) -> Result<Rat> {
        self.check_square()?;
        let mut scale = Int::one();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let l = r.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
                let out = r.iter().map(|x| x.numer() * (&l / x.denom())).collect();
                scale *= l;
                out
            })
            .collect();
        Ok(Rat::new(bareiss(rows), scale))
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows.len();
        if !self.is_square() {
            return None;
        }
        let mut m: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| !m[i][c].is_zero())?;
            m.swap(c, p);
            let pivot = m[c][c].clone();
            for x in m[c].iter_mut() {
                *x = &*x / &pivot;
            }
            for i in 0..n {
                if i == c || m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
            }
        }
        Some(Matrix {
            rows: m.into_iter().map(|r| r[n..].to_vec()).collect(),
            cols: n,
        })
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Random element of GL(n,Z) built from `steps` elementary moves
/// (unit shears, row swaps, sign flips). Entries stay small for small `steps`.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, n: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..steps {
        match rng.gen_range(0..4) {
            0 | 1 if n > 1 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let src = m.rows[j].clone();
                for (a, b) in m.rows[i].iter_mut().zip(&src) {
                    *a += b * sign;
                }
            }
            2 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                m.rows.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for a in m.rows[i].iter_mut() {
                    *a = -a.clone();
                }
            }
        }
    }
    m
}
