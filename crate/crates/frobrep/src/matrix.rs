//! Dense exact matrices over a runtime field, with the linear algebra this
//! crate relies on: reduced row echelon form (fraction-free over the
//! rationals), kernels, images, cokernel presentations, linear solves,
//! Kronecker products, nilpotent block profiles, and intertwiner spaces.
//!
//! Conventions: vectors are column vectors and a linear map `V -> W` with
//! `dim V = n`, `dim W = m` is an `m x n` matrix acting by left
//! multiplication, so composition is `matmul(outer, inner)`.  Zero-sized
//! matrices (`0 x n`, `m x 0`) are first-class citizens.

use crate::field::{Field, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// A dense `rows x cols` matrix over a fixed exact field, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    /// The zero matrix of the given shape.
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    /// The `n x n` identity.
    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix entry by entry from a closure.
    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                assert!(v.field() == field, "entry field mismatch");
                entries.push(v);
            }
        }
        Matrix { field, rows, cols, entries }
    }

    /// Builds from explicit rows of scalars; all rows must share a length.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Matrix::from_fn(field, r, c, |i, j| rows[i][j].clone())
    }

    /// Builds from machine-integer rows (test and construction convenience).
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    /// Builds from column vectors.
    pub fn from_cols(field: Field, rows: usize, cols_data: Vec<Vec<Scalar>>) -> Matrix {
        for col in &cols_data {
            assert_eq!(col.len(), rows, "column length mismatch");
        }
        Matrix::from_fn(field, rows, cols_data.len(), |i, j| cols_data[j][i].clone())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert!(v.field() == self.field, "entry field mismatch");
        self.entries[i * self.cols + j] = v;
    }

    /// A view of row `i`.
    pub fn row(&self, i: usize) -> &[Scalar] {
        assert!(i < self.rows, "row out of range");
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` as an owned vector.
    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        assert!(c.field() == self.field, "scalar field mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in matmul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        assert!(self.field == other.field, "field mismatch in matmul");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() && !self.get(i, j).is_zero() {
                        acc = &acc + &(self.get(i, j) * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Nonnegative matrix power (square matrices).
    pub fn pow(&self, e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols, "pow needs a square matrix");
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace needs a square matrix");
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Horizontal concatenation; all blocks must share a row count.
    pub fn hstack(field: Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            assert!(b.field == field, "hstack field mismatch");
        }
        let mut out = Matrix::zero(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must share a column count.
    pub fn vstack(field: Field, blocks: &[Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack col mismatch");
            assert!(b.field == field, "vstack field mismatch");
        }
        let mut out = Matrix::zero(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..cols {
                    out.set(off + i, j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    /// Block-diagonal assembly.
    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            assert!(b.field == field, "block_diag field mismatch");
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Kronecker product: `(A kron B)[(i*rB+k),(j*cB+l)] = A[i,j]*B[k,l]`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert!(self.field == other.field, "kron field mismatch");
        Matrix::from_fn(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (ia, ib) = (i / other.rows, i % other.rows);
                let (ja, jb) = (j / other.cols, j % other.cols);
                self.get(ia, ja) * other.get(ib, jb)
            },
        )
    }

    /// Copies `block` into `self` with its top-left corner at `(i, j)`.
    pub fn set_block(&mut self, i: usize, j: usize, block: &Matrix) {
        assert!(
            i + block.rows <= self.rows && j + block.cols <= self.cols,
            "block out of range"
        );
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(i + r, j + c, block.get(r, c).clone());
            }
        }
    }

    /// The contiguous submatrix with the given half-open row/column ranges.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Matrix::from_fn(self.field, r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Reduced row echelon form with unit pivots, plus the pivot columns.
    ///
    /// Over the rationals the elimination is fraction-free: rows are scaled
    /// to primitive integer vectors, eliminations cross-multiply, and the
    /// division by pivots happens once at the end.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        match self.field {
            Field::Rationals => self.rref_rational(),
            Field::Fp(_) => self.rref_fp(),
        }
    }

    fn rref_rational(&self) -> (Matrix, Vec<usize>) {
        // Clear denominators row by row and reduce to primitive integer rows.
        let mut mat: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let rats: Vec<&BigRational> = (0..self.cols)
                    .map(|j| self.get(i, j).as_rational().expect("rational entries"))
                    .collect();
                let mut lcm = BigInt::one();
                for r in &rats {
                    lcm = lcm.lcm(r.denom());
                }
                let mut row: Vec<BigInt> =
                    rats.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
                primitive_normalize(&mut row);
                row
            })
            .collect();

        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for col in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&r| !mat[r][col].is_zero()) else {
                continue;
            };
            mat.swap(pr, sel);
            let pivot_val = mat[pr][col].clone();
            for r in 0..self.rows {
                if r == pr || mat[r][col].is_zero() {
                    continue;
                }
                let a = mat[r][col].clone();
                for c2 in 0..self.cols {
                    let v = &pivot_val * &mat[r][c2] - &a * &mat[pr][c2];
                    mat[r][c2] = v;
                }
                primitive_normalize(&mut mat[r]);
            }
            pivots.push(col);
            pr += 1;
        }

        // Divide each pivot row by its pivot to get unit pivots.
        let mut out = Matrix::zero(self.field, self.rows, self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            let pivot = BigRational::from_integer(mat[r][pc].clone());
            for c in 0..self.cols {
                let v = BigRational::from_integer(mat[r][c].clone()) / &pivot;
                out.set(r, c, Scalar::Rational(v));
            }
        }
        (out, pivots)
    }

    fn rref_fp(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for col in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if sel != pr {
                for c in 0..m.cols {
                    let a = m.get(pr, c).clone();
                    let b = m.get(sel, c).clone();
                    m.set(pr, c, b);
                    m.set(sel, c, a);
                }
            }
            let inv = m.get(pr, col).inv().expect("nonzero pivot");
            for c in 0..m.cols {
                let v = m.get(pr, c) * &inv;
                m.set(pr, c, v);
            }
            for r in 0..m.rows {
                if r == pr || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = m.get(r, c) - &(&factor * m.get(pr, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A matrix whose columns form a basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Matrix::zero(self.field, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, self.field.one());
            for (row, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, -r.get(row, f));
            }
        }
        out
    }

    /// A matrix whose columns are a reduced basis of the column space.
    pub fn image_basis(&self) -> Matrix {
        let (r, pivots) = self.transpose().rref();
        let mut cols_data = Vec::with_capacity(pivots.len());
        for i in 0..pivots.len() {
            cols_data.push(r.row(i).to_vec());
        }
        Matrix::from_cols(self.field, self.rows, cols_data)
    }

    /// Solves `self * X = rhs` for any particular `X` (free variables zero);
    /// `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        assert!(self.field == rhs.field, "solve field mismatch");
        let aug = Matrix::hstack(self.field, &[self.clone(), rhs.clone()]);
        let (r, pivots) = aug.rref();
        // Any pivot landing in the right-hand block means inconsistency.
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(self.field, self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// The two-sided inverse, when it exists.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let id = Matrix::identity(self.field, self.rows);
        let x = self.solve(&id)?;
        if self.matmul(&x).is_identity() {
            Some(x)
        } else {
            None
        }
    }

    /// Presents the cokernel of `self : k^n -> k^m` (columns into `k^m`):
    /// returns `(pi, sigma)` with `pi : k^m -> k^q` surjective,
    /// `pi * self = 0`, `sigma : k^q -> k^m`, and `pi * sigma = I`.
    pub fn cokernel(&self) -> (Matrix, Matrix) {
        let (r, pivots) = self.transpose().rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.rows];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free: Vec<usize> = (0..self.rows).filter(|&c| !is_pivot[c]).collect();
        let q = free.len();
        // pi(v)_k = v_{f_k} - sum_i v_{p_i} * R[i, f_k]
        let mut pi = Matrix::zero(self.field, q, self.rows);
        for (k, &f) in free.iter().enumerate() {
            pi.set(k, f, self.field.one());
            for (i, &p) in pivots.iter().enumerate() {
                pi.set(k, p, -r.get(i, f));
            }
        }
        let mut sigma = Matrix::zero(self.field, self.rows, q);
        for (k, &f) in free.iter().enumerate() {
            sigma.set(f, k, self.field.one());
        }
        (pi, sigma)
    }

    /// For a nilpotent square matrix, the sizes of its Jordan blocks:
    /// `profile[j-1]` is the number of blocks of size exactly `j`.
    /// Errors when the matrix is not nilpotent.
    pub fn nilpotent_block_profile(&self) -> Result<Vec<usize>, String> {
        assert_eq!(self.rows, self.cols, "profile needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(Vec::new());
        }
        // ranks[j] = rank(N^j); stop once the rank hits zero.
        let mut ranks = vec![n];
        let mut power = self.clone();
        while ranks.len() <= n {
            let rk = power.rank();
            ranks.push(rk);
            if rk == 0 {
                break;
            }
            power = power.matmul(self);
        }
        if *ranks.last().unwrap() != 0 {
            return Err(format!("matrix of size {n} is not nilpotent"));
        }
        let top = ranks.len() - 1; // smallest j with rank(N^j) = 0
        // blocks_ge[j] = #blocks of size >= j = rank(N^{j-1}) - rank(N^j).
        let blocks_ge: Vec<usize> = (1..=top).map(|j| ranks[j - 1] - ranks[j]).collect();
        let mut profile = vec![0usize; top];
        for j in 1..=top {
            let ge_j = blocks_ge[j - 1];
            let ge_next = if j < top { blocks_ge[j] } else { 0 };
            profile[j - 1] = ge_j - ge_next;
        }
        Ok(profile)
    }

    /// Flattens row-major into a single column vector of length `rows*cols`.
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    /// Rebuilds a `rows x cols` matrix from a row-major flat vector.
    pub fn from_flat(field: Field, rows: usize, cols: usize, flat: Vec<Scalar>) -> Matrix {
        assert_eq!(flat.len(), rows * cols, "flat length mismatch");
        for v in &flat {
            assert!(v.field() == field, "entry field mismatch");
        }
        Matrix { field, rows, cols, entries: flat }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_display_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Divides an integer row by the gcd of its entries (no-op on zero rows).
fn primitive_normalize(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
}

/// A basis of the space of matrices `F` (`rows x cols`) satisfying
/// `F * p = q * F` for every pair `(p, q)`; `p` acts on the source
/// (`cols x cols`), `q` on the target (`rows x rows`).
pub fn intertwiner_space(field: Field, pairs: &[(&Matrix, &Matrix)], rows: usize, cols: usize) -> Vec<Matrix> {
    for (p, q) in pairs {
        assert_eq!((p.rows(), p.cols()), (cols, cols), "source action shape");
        assert_eq!((q.rows(), q.cols()), (rows, rows), "target action shape");
    }
    let unknowns = rows * cols;
    let mut big = Matrix::zero(field, pairs.len() * unknowns, unknowns);
    // Unknown F is vectorized row-major: F[i,j] -> i*cols + j.
    for (s, (p, q)) in pairs.iter().enumerate() {
        let base = s * unknowns;
        for i in 0..rows {
            for j in 0..cols {
                let eq = base + i * cols + j;
                // (F p)[i,j] = sum_k F[i,k] p[k,j]
                for k in 0..cols {
                    let coeff = p.get(k, j).clone();
                    if !coeff.is_zero() {
                        let cur = big.get(eq, i * cols + k) + &coeff;
                        big.set(eq, i * cols + k, cur);
                    }
                }
                // -(q F)[i,j] = -sum_k q[i,k] F[k,j]
                for k in 0..rows {
                    let coeff = q.get(i, k).clone();
                    if !coeff.is_zero() {
                        let cur = big.get(eq, k * cols + j) - &coeff;
                        big.set(eq, k * cols + j, cur);
                    }
                }
            }
        }
    }
    let ker = big.kernel_basis();
    (0..ker.cols())
        .map(|c| Matrix::from_flat(field, rows, cols, ker.col(c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::Rationals
    }

    /// Exponential-time rank via nonzero minors; a slow independent oracle.
    fn rank_by_minors(m: &Matrix) -> usize {
        fn det(m: &Matrix) -> Scalar {
            let n = m.rows();
            if n == 0 {
                return m.field().one();
            }
            if n == 1 {
                return m.get(0, 0).clone();
            }
            let mut acc = m.field().zero();
            for j in 0..n {
                if m.get(0, j).is_zero() {
                    continue;
                }
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = m.select_rows(&(1..n).collect::<Vec<_>>()).select_cols(&cols);
                let term = m.get(0, j) * &det(&minor);
                if j % 2 == 0 {
                    acc = &acc + &term;
                } else {
                    acc = &acc - &term;
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if k > n {
                return vec![];
            }
            let mut out = Vec::new();
            for last in (k - 1)..n {
                for mut s in subsets(last, k - 1) {
                    s.push(last);
                    out.push(s);
                }
            }
            out
        }
        let max = m.rows().min(m.cols());
        for k in (1..=max).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub = m.select_rows(&rs).select_cols(&cs);
                    if !det(&sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn rref_known_rational() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2, 3], &[2, 4, 7], &[1, 2, 4]]);
        let (r, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 2]);
        let expect = Matrix::from_i64_rows(q(), &[&[1, 2, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(r, expect);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rref_with_fractions() {
        let f = q();
        let m = Matrix::from_rows(
            f,
            vec![
                vec![f.from_ratio(1, 2).unwrap(), f.from_ratio(1, 3).unwrap()],
                vec![f.from_ratio(1, 4).unwrap(), f.from_ratio(1, 5).unwrap()],
            ],
        );
        assert_eq!(m.rank(), 2);
        assert!(m.inverse().is_some());
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        assert!(inv.matmul(&m).is_identity());
    }

    #[test]
    fn rref_mod_p() {
        let f = Field::fp(5).unwrap();
        // Rows are dependent mod 5: (2,4) = 2*(1,2).
        let m = Matrix::from_i64_rows(f, &[&[1, 2], &[2, 4]]);
        assert_eq!(m.rank(), 1);
        // The same integer matrix has rank 2 over the rationals... pick one
        // where it differs: [[2]] over F2 is zero.
        let f2 = Field::fp(2).unwrap();
        let z = Matrix::from_i64_rows(f2, &[&[2]]);
        assert_eq!(z.rank(), 0);
        assert_eq!(Matrix::from_i64_rows(q(), &[&[2]]).rank(), 1);
    }

    #[test]
    fn kernel_and_solve() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2, 3], &[4, 5, 6]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.matmul(&k).is_zero());

        let rhs = Matrix::from_i64_rows(q(), &[&[6], &[15]]);
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.matmul(&x), rhs);

        // Inconsistent system.
        let bad = Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let rhs2 = Matrix::from_i64_rows(q(), &[&[1], &[3]]);
        assert!(bad.solve(&rhs2).is_none());
    }

    #[test]
    fn zero_sized_matrices() {
        let m0 = Matrix::zero(q(), 0, 3);
        assert_eq!(m0.rank(), 0);
        assert_eq!(m0.kernel_basis().cols(), 3);
        let m1 = Matrix::zero(q(), 3, 0);
        assert_eq!(m1.kernel_basis().cols(), 0);
        let prod = m1.matmul(&m0);
        assert_eq!((prod.rows(), prod.cols()), (3, 3));
        assert!(prod.is_zero());
        let (pi, sigma) = m1.cokernel();
        assert_eq!(pi.rows(), 3);
        assert!(pi.matmul(&sigma).is_identity());
    }

    #[test]
    fn cokernel_presentation() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 0], &[0, 1], &[1, 1]]);
        let (pi, sigma) = m.cokernel();
        assert_eq!(pi.rows(), 1);
        assert!(pi.matmul(&m).is_zero());
        assert!(pi.matmul(&sigma).is_identity());
    }

    #[test]
    fn jordan_profiles() {
        // One nilpotent Jordan block of size 3.
        let j3 = Matrix::from_i64_rows(q(), &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(j3.nilpotent_block_profile().unwrap(), vec![0, 0, 1]);
        // Sizes 2 and 1.
        let mixed = Matrix::from_i64_rows(q(), &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(mixed.nilpotent_block_profile().unwrap(), vec![1, 1]);
        // Zero matrix: three blocks of size 1.
        let z = Matrix::zero(q(), 3, 3);
        assert_eq!(z.nilpotent_block_profile().unwrap(), vec![3]);
        // Non-nilpotent input is rejected.
        let id = Matrix::identity(q(), 2);
        assert!(id.nilpotent_block_profile().is_err());
    }

    #[test]
    fn kron_mixed_product() {
        let a = Matrix::from_i64_rows(q(), &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64_rows(q(), &[&[0, 1], &[1, 0]]);
        let c = Matrix::from_i64_rows(q(), &[&[2, 0], &[1, 1]]);
        let d = Matrix::from_i64_rows(q(), &[&[1, 1], &[0, 1]]);
        // (A kron B)(C kron D) = AC kron BD
        let lhs = a.kron(&b).matmul(&c.kron(&d));
        let rhs = a.matmul(&c).kron(&b.matmul(&d));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutant_of_jordan_block() {
        // Matrices commuting with a single nilpotent Jordan block of size n
        // are exactly the polynomials in it: dimension n.
        let f = q();
        let n = 4;
        let mut j = Matrix::zero(f, n, n);
        for i in 0..n - 1 {
            j.set(i, i + 1, f.one());
        }
        let basis = intertwiner_space(f, &[(&j, &j)], n, n);
        assert_eq!(basis.len(), n);
        for b in &basis {
            assert_eq!(b.matmul(&j), j.matmul(b));
        }
    }

    #[test]
    fn image_basis_spans() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]]);
        let im = m.image_basis();
        assert_eq!(im.cols(), 2);
        // Every original column solves against the image basis.
        for j in 0..m.cols() {
            let col = Matrix::from_cols(q(), m.rows(), vec![m.col(j)]);
            assert!(im.solve(&col).is_some());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_matches_minor_oracle(rows in 1usize..4, cols in 1usize..4,
                                     seed in proptest::collection::vec(-4i64..5, 16)) {
            let m = Matrix::from_fn(q(), rows, cols, |i, j| q().from_i64(seed[(i * 4 + j) % 16]));
            prop_assert_eq!(m.rank(), rank_by_minors(&m));
        }

        #[test]
        fn kernel_annihilates_and_counts(rows in 1usize..5, cols in 1usize..5,
                                         seed in proptest::collection::vec(-3i64..4, 25)) {
            let m = Matrix::from_fn(q(), rows, cols, |i, j| q().from_i64(seed[(i * 5 + j) % 25]));
            let k = m.kernel_basis();
            prop_assert!(m.matmul(&k).is_zero());
            prop_assert_eq!(k.cols() + m.rank(), cols);
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn rank_transpose_invariant(rows in 1usize..5, cols in 1usize..5,
                                    seed in proptest::collection::vec(-3i64..4, 25)) {
            let m = Matrix::from_fn(q(), rows, cols, |i, j| q().from_i64(seed[(i * 5 + j) % 25]));
            prop_assert_eq!(m.rank(), m.transpose().rank());
            // rref is idempotent on the row-reduced result.
            let (r, piv) = m.rref();
            let (r2, piv2) = r.rref();
            prop_assert_eq!(r, r2);
            prop_assert_eq!(piv, piv2);
        }
    }
}
