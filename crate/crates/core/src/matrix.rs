//! Exact rational linear algebra.
//!
//! Rank and determinant run fraction-free (Bareiss) on denominator-cleared
//! integer copies; kernels, solving and echelon bases use rational reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![int(0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = int(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = self[(i, k)].clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + add;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)].clone() * v[j].clone())
                    .fold(int(0), |a, b| a + b)
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = Rat::one() / m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let sub = f.clone() * m[(r, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() - sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let (x, y) = (self[(a, j)].clone(), self[(b, j)].clone());
            self[(a, j)] = y;
            self[(b, j)] = x;
        }
    }

    /// Row-wise denominator clearing; preserves row space and rank.
    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let lcm = self.row(i).iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
                self.row(i)
                    .iter()
                    .map(|r| r.numer() * (&lcm / r.denom()))
                    .collect()
            })
            .collect()
    }

    /// Rank by fraction-free (Bareiss) elimination over the integers.
    pub fn rank(&self) -> usize {
        let mut a = self.to_integer_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..rows {
                for j in c + 1..cols {
                    let num = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division not exact");
                    a[i][j] = q;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// Determinant (square matrices), fraction-free on the cleared copy with
    /// the accumulated row scaling divided back out.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return int(1);
        }
        let mut scale = Rat::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let lcm = self.row(i).iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
                scale = scale.clone() * Rat::from_integer(lcm.clone());
                self.row(i)
                    .iter()
                    .map(|r| r.numer() * (&lcm / r.denom()))
                    .collect()
            })
            .collect();
        let mut prev = BigInt::one();
        let mut sign = 1i64;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return int(0);
            };
            if p != k {
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division not exact");
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Rat::from_integer(a[n - 1][n - 1].clone() * BigInt::from(sign)) / scale
    }

    /// Exact inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = int(1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| k != c) {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Basis of the right kernel `{v : Av = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<usize> = pivots.clone();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![int(0); self.cols];
            v[free] = int(1);
            for (row, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `Ax = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, b.len(), "dimension mismatch");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![int(0); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Inertia `(positive, negative)` of a symmetric matrix by exact
    /// congruence diagonalization.
    pub fn signature(&self) -> (usize, usize) {
        assert_eq!(self.rows, self.cols, "signature of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        debug_assert_eq!(m, m.transpose(), "signature needs a symmetric matrix");
        let mut pos = 0;
        let mut neg = 0;
        for k in 0..n {
            if m[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                    m.swap_sym(k, j);
                } else if let Some((i, j)) = Self::nonzero_off_diag(&m, k) {
                    // make a nonzero diagonal entry out of a symmetric pair
                    m.add_sym(i, j);
                    if i != k {
                        m.swap_sym(k, i);
                    }
                } else {
                    break;
                }
            }
            let pivot = m[(k, k)].clone();
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone() / pivot.clone();
                for j in 0..n {
                    let sub = f.clone() * m[(k, j)].clone();
                    m[(i, j)] = m[(i, j)].clone() - sub;
                }
                for j in 0..n {
                    let sub = f.clone() * m[(j, k)].clone();
                    m[(j, i)] = m[(j, i)].clone() - sub;
                }
            }
        }
        (pos, neg)
    }

    fn nonzero_off_diag(m: &Mat, k: usize) -> Option<(usize, usize)> {
        for i in k..m.rows {
            for j in i + 1..m.cols {
                if !m[(i, j)].is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn swap_sym(&mut self, a: usize, b: usize) {
        self.swap_rows(a, b);
        for i in 0..self.rows {
            let (x, y) = (self[(i, a)].clone(), self[(i, b)].clone());
            self[(i, a)] = y;
            self[(i, b)] = x;
        }
    }

    fn add_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let add = self[(j, c)].clone();
            self[(i, c)] = self[(i, c)].clone() + add;
        }
        for r in 0..self.rows {
            let add = self[(r, j)].clone();
            self[(r, i)] = self[(r, i)].clone() + add;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear subspace kept as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn from_span(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        if vectors.is_empty() {
            return Subspace { ambient, basis: Vec::new() };
        }
        let (r, pivots) = Mat::from_rows(vectors.to_vec()).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient, "dimension mismatch");
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Mat::from_rows(rows).rank() == self.dim()
    }
}
