use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::linalg::zmod;
use crate::ring::poly::Poly;
use crate::ring::scalar::{CoefRing, CoefScalar};

/// A dense matrix over `k[b]/(b^t)`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: CoefRing,
    rows: usize,
    cols: usize,
    data: Vec<CoefScalar>,
}

impl Matrix {
    pub fn zeros(ring: CoefRing, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: CoefRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_fn(
        ring: CoefRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CoefScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn from_ints(ring: CoefRing, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(ring, rows.len(), cols, |i, j| ring.int(rows[i][j]))
    }

    pub fn diagonal(ring: CoefRing, entries: &[CoefScalar]) -> Self {
        let mut m = Self::zeros(ring, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn ring(&self) -> CoefRing {
        self.ring
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: CoefScalar) -> Matrix {
        Matrix {
            data: self.data.iter().map(|&x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn column(&self, j: usize) -> Vec<CoefScalar> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, rows.len(), self.cols, |i, j| self[(rows[i], j)])
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r + i, c + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.ring, rows, cols, |i, j| self[(r + i, c + j)])
    }

    pub fn block_diag(ring: CoefRing, blocks: &[&Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let k: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, n, k);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(ring: CoefRing, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let mut c = 0;
        for p in parts {
            out.set_block(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn pow(&self, mut exp: u64) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.ring, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Matrix::zeros(self.ring, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = &acc * self;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    /// Smallest `k >= 1` with `self^k = 0`, if `self` is nilpotent.
    ///
    /// Over the local coefficient ring a matrix is nilpotent iff its residue
    /// is, and then its index is at most `n * L` with `L` the radical length.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert!(self.is_square());
        if self.rows == 0 {
            return Some(1);
        }
        let bound = self.rows * self.ring.radical_length().max(1);
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_zero() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    /// Entrywise reduction to the residue field `F_p`.
    pub fn residue_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].residue()).collect())
            .collect()
    }

    /// Pivot columns of the residue matrix over `F_p`.
    pub fn residue_pivot_columns(&self) -> Vec<usize> {
        zmod::field_pivots(&self.residue_rows(), self.cols, self.ring.prime())
    }

    pub fn residue_rank(&self) -> usize {
        self.residue_pivot_columns().len()
    }

    /// Inverse by Gauss-Jordan with unit pivots; a square matrix over the
    /// local coefficient ring is invertible iff its residue is.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.ring, n);
        for c in 0..n {
            let pr = (c..n).find(|&r| a[(r, c)].is_unit())?;
            a.swap_rows(c, pr);
            inv.swap_rows(c, pr);
            let piv_inv = a[(c, c)].inverse().expect("unit pivot");
            a.scale_row(c, piv_inv);
            inv.scale_row(c, piv_inv);
            for r in 0..n {
                if r != c && !a[(r, c)].is_zero() {
                    let f = a[(r, c)];
                    a.add_row_multiple(r, c, -f);
                    inv.add_row_multiple(r, c, -f);
                }
            }
        }
        Some(inv)
    }

    /// A left inverse of a matrix whose columns are a basis of a free direct
    /// summand, i.e. whose residue has full column rank.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let rows = self.transpose().residue_pivot_columns();
        if rows.len() != self.cols {
            return None;
        }
        let square = self.select_rows(&rows);
        let sq_inv = square.inverse()?;
        let mut out = Matrix::zeros(self.ring, self.cols, self.rows);
        for (k, &r) in rows.iter().enumerate() {
            for i in 0..self.cols {
                out[(i, r)] = sq_inv[(i, k)];
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: CoefScalar) {
        for j in 0..self.cols {
            self[(r, j)] *= c;
        }
    }

    fn add_row_multiple(&mut self, target: usize, src: usize, f: CoefScalar) {
        for j in 0..self.cols {
            let v = self[(src, j)] * f;
            self[(target, j)] += v;
        }
    }

    /// The `Z/m`-linear map underlying `self`, acting on coordinates where
    /// entry `i` of an `S`-vector occupies slots `i*t .. (i+1)*t`.
    pub fn flatten(&self) -> Vec<Vec<u64>> {
        let t = self.ring.nilpotency();
        let mut out = vec![vec![0u64; self.cols * t]; self.rows * t];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self[(i, j)].multiplication_matrix();
                for (a, brow) in block.iter().enumerate() {
                    out[i * t + a][j * t..(j + 1) * t].copy_from_slice(brow);
                }
            }
        }
        out
    }

    /// Checks that `self` (n×n) is invertible and returns the inverse or an
    /// error naming the context.
    pub fn require_inverse(&self, what: &str) -> Result<Matrix> {
        self.inverse()
            .ok_or_else(|| Error::EquivalenceFailure(format!("{what} is not invertible")))
    }

    /// Rows as lists of entries.
    pub fn to_rows(&self) -> Vec<Vec<CoefScalar>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn from_rows(ring: CoefRing, rows: Vec<Vec<CoefScalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            ring,
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// True when every entry is a multiple of `d`.
    pub fn entries_divisible_by(&self, d: &CoefScalar) -> bool {
        self.data.iter().all(|c| c.divide(d).is_some())
    }
}

/// Flattens an `S`-vector to `Z/m` coordinates.
pub fn flatten_vector(v: &[CoefScalar]) -> Vec<u64> {
    v.iter().flat_map(|c| c.coeffs().to_vec()).collect()
}

/// Inverse of [`flatten_vector`].
pub fn unflatten_vector(ring: CoefRing, v: &[u64]) -> Vec<CoefScalar> {
    v.chunks(ring.nilpotency())
        .map(|ch| ring.scalar(&ch.iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .collect()
}

impl Index<(usize, usize)> for Matrix {
    type Output = CoefScalar;
    fn index(&self, (i, j): (usize, usize)) -> &CoefScalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CoefScalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a * rhs[(k, j)];
                    out[(i, j)] += v;
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
            ..self.clone()
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.ring)?;
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
