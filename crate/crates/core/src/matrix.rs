//! Dense matrices over [`MPoly`] and exact linear algebra for the constant
//! (scalar-entry) case: rank, kernel, solving, inversion, image bases.
//!
//! Sizes in this domain are tiny, so everything is dense and elimination uses
//! the first nonzero pivot in row-then-column order, which makes every output
//! deterministic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::{MPoly, Var};
use crate::scalar::Scalar;

/// Dense `rows × cols` matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MPoly>,
}

/// Outcome of solving `M·x = b` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub rank: usize,
    /// `None` when the system is inconsistent.
    pub particular: Option<Vec<Scalar>>,
    /// Basis of the kernel of `M`.
    pub kernel: Vec<Vec<Scalar>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![MPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = MPoly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> MPoly) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = MPoly::one();
        m
    }

    pub fn from_scalar_grid(grid: &[Vec<Scalar>]) -> Result<Self, Error> {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| {
            MPoly::constant(grid[i][j].clone())
        }))
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
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|p| p.is_constant())
    }

    /// Scalar grid view; fails on non-constant entries.
    pub fn to_scalar_grid(&self) -> Result<Vec<Vec<Scalar>>, Error> {
        let mut grid = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self[(i, j)].constant_value().ok_or(Error::NotConstant)?);
            }
            grid.push(row);
        }
        Ok(grid)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|p| p.scale(c))
    }

    pub fn scale_poly(&self, p: &MPoly) -> Self {
        self.map(|q| q * p)
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Substitutes `v ↦ replacement` in every entry.
    pub fn substitute_all(&self, v: Var, replacement: &MPoly) -> Self {
        self.map(|p| p.substitute(v, replacement))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &PolyMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] =
                            &self[(i, j)] * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(blocks: &[PolyMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Extracts the square submatrix at `indices × indices`.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self[(row_idx[i], col_idx[j])].clone()
        })
    }

    /// `self · self == self`, exactly. Requires a square matrix.
    pub fn is_idempotent(&self) -> bool {
        self.is_square() && &(self * self) == self
    }

    /// Exact determinant.
    ///
    /// Constant matrices run fraction-free Gaussian elimination; genuinely
    /// polynomial ones fall back to subset-expansion, which is fine at the
    /// sizes this crate handles.
    pub fn determinant(&self) -> Result<MPoly, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(MPoly::one());
        }
        if self.is_constant() {
            let grid = self.to_scalar_grid()?;
            return Ok(MPoly::constant(constant_determinant(grid)));
        }
        // dp over column subsets: dp[mask] = det of the top |mask| rows on the
        // columns in mask.
        let n = self.rows;
        let mut dp = vec![MPoly::zero(); 1 << n];
        dp[0] = MPoly::one();
        for mask in 1usize..(1 << n) {
            let r = (mask.count_ones() - 1) as usize;
            let mut acc = MPoly::zero();
            // cofactor sign along row r: (−1)^{r + position}
            let mut sign_flip = r % 2 == 1;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let e = &self[(r, j)];
                if !e.is_zero() {
                    let sub = &dp[mask & !(1 << j)];
                    let prod = e * sub;
                    acc = if sign_flip { &acc - &prod } else { &acc + &prod };
                }
                sign_flip = !sign_flip;
            }
            dp[mask] = acc;
        }
        Ok(dp[(1 << n) - 1].clone())
    }

    /// Rank of a constant matrix.
    pub fn rank(&self) -> Result<usize, Error> {
        let (_, pivots, _) = rref(self.to_scalar_grid()?);
        Ok(pivots.len())
    }

    /// Solves `self · x = b` exactly: rank, a particular solution when the
    /// system is consistent, and a kernel basis.
    pub fn solve(&self, b: &[Scalar]) -> Result<LinearSolution, Error> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} rows vs {} rhs entries",
                self.rows,
                b.len()
            )));
        }
        let mut grid = self.to_scalar_grid()?;
        for (row, rhs) in grid.iter_mut().zip(b) {
            row.push(rhs.clone());
        }
        let (reduced, pivots, _) = rref(grid);
        let rank = pivots.iter().filter(|&&c| c < self.cols).count();
        let consistent = !pivots.contains(&self.cols);
        let particular = consistent.then(|| {
            let mut x = vec![Scalar::zero(); self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = reduced[r][self.cols].clone();
            }
            x
        });
        Ok(LinearSolution {
            rank,
            particular,
            kernel: kernel_from_rref(&reduced, &pivots, self.cols),
        })
    }

    /// Kernel basis of a constant matrix.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>, Error> {
        let (reduced, pivots, _) = rref(self.to_scalar_grid()?);
        Ok(kernel_from_rref(&reduced, &pivots, self.cols))
    }

    /// Exact inverse of a square constant matrix with nonzero determinant.
    pub fn inverse(&self) -> Result<PolyMatrix, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut grid = self.to_scalar_grid()?;
        for (i, row) in grid.iter_mut().enumerate() {
            for j in 0..n {
                row.push(if i == j { Scalar::one() } else { Scalar::zero() });
            }
        }
        let (reduced, pivots, _) = rref(grid);
        if pivots.len() != n || pivots.iter().enumerate().any(|(r, &c)| r != c || c >= n) {
            return Err(Error::SingularMatrix);
        }
        Ok(Self::from_fn(n, n, |i, j| {
            MPoly::constant(reduced[i][n + j].clone())
        }))
    }

    /// Basis of the column space of a constant matrix, as the first
    /// independent columns in left-to-right order.
    ///
    /// Returns the pivot column indices and the original columns at those
    /// indices.
    pub fn image_basis(&self) -> Result<(Vec<usize>, Vec<Vec<Scalar>>), Error> {
        let grid = self.to_scalar_grid()?;
        let (_, pivots, _) = rref(grid.clone());
        let columns = pivots
            .iter()
            .map(|&c| (0..self.rows).map(|i| grid[i][c].clone()).collect())
            .collect();
        Ok((pivots, columns))
    }

    /// Applies the constant matrix to a scalar vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("apply".into()));
        }
        let grid = self.to_scalar_grid()?;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    acc += &(&grid[i][j] * &v[j]);
                }
                acc
            })
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for PolyMatrix {
    type Output = MPoly;
    fn index(&self, (i, j): (usize, usize)) -> &MPoly {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut MPoly {
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = PolyMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] = &out[(i, j)] + &prod;
                }
            }
        }
        out
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&MPoly>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<MPoly>> = Vec::deserialize(deserializer)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let mut m = PolyMatrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, p) in row.into_iter().enumerate() {
                m[(i, j)] = p;
            }
        }
        Ok(m)
    }
}

/// Reduced row echelon form with first-nonzero pivoting in row-then-column
/// order. Returns the reduced grid, pivot column list, and the determinant
/// factor accumulated from row swaps and scalings (unused by most callers).
#[allow(clippy::needless_range_loop)]
fn rref(mut grid: Vec<Vec<Scalar>>) -> (Vec<Vec<Scalar>>, Vec<usize>, Scalar) {
    let rows = grid.len();
    let cols = grid.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut det = Scalar::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !grid[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            grid.swap(p, r);
            det = -det;
        }
        let inv = grid[r][c].inv().expect("pivot is nonzero");
        det *= &grid[r][c];
        for j in 0..cols {
            grid[r][j] = &grid[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || grid[i][c].is_zero() {
                continue;
            }
            let factor = grid[i][c].clone();
            for j in 0..cols {
                let t = &grid[r][j] * &factor;
                grid[i][j] = &grid[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (grid, pivots, det)
}

fn kernel_from_rref(reduced: &[Vec<Scalar>], pivots: &[usize], cols: usize) -> Vec<Vec<Scalar>> {
    let pivot_set: Vec<usize> = pivots.iter().copied().filter(|&c| c < cols).collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, &pc) in pivot_set.iter().enumerate() {
            v[pc] = -&reduced[r][free];
        }
        basis.push(v);
    }
    basis
}

#[allow(clippy::needless_range_loop)]
fn constant_determinant(mut grid: Vec<Vec<Scalar>>) -> Scalar {
    let n = grid.len();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !grid[i][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            grid.swap(p, c);
            det = -det;
        }
        det *= &grid[c][c];
        let inv = grid[c][c].inv().expect("nonzero pivot");
        for i in (c + 1)..n {
            if grid[i][c].is_zero() {
                continue;
            }
            let factor = &grid[i][c] * &inv;
            for j in c..n {
                let t = &grid[c][j] * &factor;
                grid[i][j] = &grid[i][j] - &t;
            }
        }
    }
    det
}
