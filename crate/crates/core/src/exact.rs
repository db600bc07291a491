//! Exact rational dense linear algebra.
//!
//! Everything in the decision path of this crate runs on [`Rational`] entries
//! or on integer rows reduced without division. Elimination is fraction-free:
//! a row is combined as `p * row - q * pivot_row` and then divided by the gcd
//! of its entries, so intermediate integers stay small. Hot paths run on
//! `i128` with checked arithmetic and fall back to `BigInt` on overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("{got} entries cannot fill a {rows}x{cols} matrix")]
    Shape {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("incompatible dimensions {left:?} and {right:?} for {op}")]
    Dimension {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds a matrix from integer rows. All rows must have the same length.
    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == cols),
            "ragged integer rows"
        );
        Matrix::from_fn(rows.len(), cols, |i, j| int(rows[i].as_ref()[j]))
    }

    /// Builds a matrix whose columns are the given integer vectors.
    pub fn from_int_columns<C: AsRef<[i64]>>(rows: usize, columns: &[C]) -> Self {
        assert!(
            columns.iter().all(|c| c.as_ref().len() == rows),
            "column length mismatch"
        );
        Matrix::from_fn(rows, columns.len(), |i, j| int(columns[j].as_ref()[i]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::one())
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::Dimension {
                op: "multiplication",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.zip_with(other, "addition", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        self.zip_with(other, "subtraction", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: &'static str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Matrix, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::Dimension {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Row-major `i64` copy, if every entry is an integer that fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            x.to_integer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    fn int_rows_i128(&self) -> Option<Vec<Vec<i128>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            x.to_integer().to_i128()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Each row multiplied by the lcm of its denominators. Row scaling does not
    /// change the row space, so rank and reduced echelon form are preserved.
    fn scaled_int_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Integer rings the eliminator can run over. `i128` reports overflow via
/// `None`; `BigInt` never fails.
trait ElimRing: Clone + Zero + PartialEq {
    /// `p * x - q * y`
    fn combine(p: &Self, x: &Self, q: &Self, y: &Self) -> Option<Self>;
    fn gcd_of(a: &Self, b: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_one_abs(&self) -> bool;
}

impl ElimRing for i128 {
    fn combine(p: &i128, x: &i128, q: &i128, y: &i128) -> Option<i128> {
        p.checked_mul(*x)?.checked_sub(q.checked_mul(*y)?)
    }
    fn gcd_of(a: &i128, b: &i128) -> i128 {
        a.gcd(b)
    }
    fn div_exact(&self, d: &i128) -> i128 {
        self / d
    }
    fn is_one_abs(&self) -> bool {
        *self == 1 || *self == -1
    }
}

impl ElimRing for BigInt {
    fn combine(p: &BigInt, x: &BigInt, q: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(p * x - q * y)
    }
    fn gcd_of(a: &BigInt, b: &BigInt) -> BigInt {
        a.gcd(b)
    }
    fn div_exact(&self, d: &BigInt) -> BigInt {
        self / d
    }
    fn is_one_abs(&self) -> bool {
        self.abs().is_one()
    }
}

fn normalize_content<T: ElimRing>(row: &mut [T]) {
    let mut g = T::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = T::gcd_of(&g, x);
            if g.is_one_abs() {
                return;
            }
        }
    }
    if !g.is_zero() {
        for x in row.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// `target = p * target - q * source` where `p = source[col]`, `q = target[col]`.
fn eliminate_with<T: ElimRing>(target: &mut [T], source: &[T], col: usize) -> Option<()> {
    let q = target[col].clone();
    if q.is_zero() {
        return Some(());
    }
    let p = source[col].clone();
    for (t, s) in target.iter_mut().zip(source) {
        *t = T::combine(&p, t, &q, s)?;
    }
    normalize_content(target);
    Some(())
}

/// Forward elimination in place. Pivot rows are chosen by lowest row index.
/// Returns pivot columns, or `None` on arithmetic overflow.
fn forward_eliminate<T: ElimRing>(a: &mut [Vec<T>], cols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            eliminate_with(row, pivot_row, c)?;
        }
        pivots.push(c);
        r += 1;
    }
    Some(pivots)
}

/// Reduced row echelon form and its pivot columns. The input is not modified.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.scaled_int_rows();
    let pivots = forward_eliminate(&mut a, m.cols).expect("BigInt elimination cannot overflow");
    for (r, &c) in pivots.iter().enumerate().rev() {
        let (head, tail) = a.split_at_mut(r);
        let pivot_row = &tail[0];
        for row in head.iter_mut() {
            eliminate_with(row, pivot_row, c).expect("BigInt elimination cannot overflow");
        }
    }
    let mut out = Matrix::zeros(m.rows, m.cols);
    for (r, &c) in pivots.iter().enumerate() {
        let lead = &a[r][c];
        for (j, x) in a[r].iter().enumerate() {
            out.entries[r * m.cols + j] = Rational::new(x.clone(), lead.clone());
        }
    }
    (out, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    if let Some(mut small) = m.int_rows_i128() {
        if let Some(p) = forward_eliminate(&mut small, m.cols) {
            return p.len();
        }
    }
    let mut a = m.scaled_int_rows();
    forward_eliminate(&mut a, m.cols)
        .expect("BigInt elimination cannot overflow")
        .len()
}

/// Inverse of a square matrix, or `None` if it is singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[..n].iter().any(|&c| c >= n) {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
}

/// Scales a nonzero rational vector to integers with gcd 1 and a positive
/// first nonzero entry.
pub fn canonical_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    normalize_content(&mut ints);
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

/// Basis of the null space, one vector per free column, each in canonical
/// integer form (see [`canonical_integer_vector`]).
pub fn nullspace_basis(m: &Matrix) -> Vec<Vec<BigInt>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rational::zero(); m.cols];
            x[f] = Rational::one();
            for (row, &c) in pivots.iter().enumerate() {
                x[c] = -r.get(row, f).clone();
            }
            canonical_integer_vector(&x)
        })
        .collect()
}

/// `P^T P`.
pub fn gram(p: &Matrix) -> Matrix {
    let n = p.cols;
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = Rational::zero();
            for k in 0..p.rows {
                let (a, b) = (p.get(k, i), p.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    s += a * b;
                }
            }
            out.entries[j * n + i] = s.clone();
            out.entries[i * n + j] = s;
        }
    }
    out
}

/// Smallest `k >= 1` with `a[i][j] = 0` whenever `|i - j| >= k`.
pub fn matrix_bandwidth(m: &Matrix) -> Result<usize, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let mut k = 1;
    for i in 0..m.rows {
        for j in 0..m.cols {
            if !m.get(i, j).is_zero() {
                k = k.max(i.abs_diff(j) + 1);
            }
        }
    }
    Ok(k)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a.get(i / b.rows, j / b.cols) * b.get(i % b.rows, j % b.cols)
    })
}

/// Tracks the span of a growing set of integer vectors.
///
/// Stored rows are kept mutually reduced at their pivots, so an insertion costs
/// one pass over the stored rows. Arithmetic runs in `i128` until a checked
/// operation overflows, after which the tracker switches to `BigInt` for good.
#[derive(Clone, Debug)]
pub struct RankTracker {
    len: usize,
    rows: Rows,
}

#[derive(Clone, Debug)]
enum Rows {
    Small(Vec<(usize, Vec<i128>)>),
    Big(Vec<(usize, Vec<BigInt>)>),
}

fn reduce<T: ElimRing>(rows: &[(usize, Vec<T>)], v: &mut [T]) -> Option<()> {
    for (pc, row) in rows {
        eliminate_with(v, row, *pc)?;
    }
    Some(())
}

impl RankTracker {
    pub fn new(len: usize) -> Self {
        RankTracker {
            len,
            rows: Rows::Small(Vec::new()),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.rows {
            Rows::Small(r) => r.len(),
            Rows::Big(r) => r.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.len
    }

    fn promote(&mut self) {
        if let Rows::Small(rows) = &self.rows {
            let big = rows
                .iter()
                .map(|(pc, r)| (*pc, r.iter().map(|&x| BigInt::from(x)).collect()))
                .collect();
            self.rows = Rows::Big(big);
        }
    }

    /// Whether `v` lies outside the tracked span. Does not insert.
    pub fn is_independent(&self, v: &[i64]) -> bool {
        self.clone().insert(v)
    }

    /// Inserts `v` if it is independent of the tracked span; returns whether it
    /// was inserted.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        if let Rows::Small(rows) = &mut self.rows {
            let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            if reduce(rows, &mut w).is_some() {
                return match w.iter().position(|x| *x != 0) {
                    Some(pc) => {
                        rows.push((pc, w));
                        true
                    }
                    None => false,
                };
            }
            self.promote();
        }
        let Rows::Big(rows) = &mut self.rows else {
            unreachable!()
        };
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        reduce(rows, &mut w).expect("BigInt elimination cannot overflow");
        match w.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                rows.push((pc, w));
                true
            }
            None => false,
        }
    }
}

/// Rank of a set of integer vectors of common length `len`.
pub fn rank_of_vectors<V: AsRef<[i64]>>(len: usize, vectors: &[V]) -> usize {
    let mut t = RankTracker::new(len);
    for v in vectors {
        t.insert(v.as_ref());
        if t.rank() == len {
            break;
        }
    }
    t.rank()
}
