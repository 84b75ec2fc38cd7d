//! Dense matrices and Gaussian elimination over any [`Field`].
//!
//! Pivoting picks the first nonzero entry in column order, so results are
//! bit-stable across runs.

use std::ops::{Index, IndexMut};

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    /// Panics when the rows have differing lengths.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Self { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)]);
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    /// Rows stacked below each other; column counts must agree.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let rows = (0..self.rows).map(|i| idx.iter().map(|&j| self[(i, j)]).collect()).collect();
        Self::from_rows(rows, idx.len())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl<E> Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::Elem> {
    Matrix::filled(rows, cols, f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::Elem> {
    let mut m = zeros(f, n, n);
    for i in 0..n {
        m[(i, i)] = f.one();
    }
    m
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in matrix product");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for l in 0..a.cols {
            let x = a[(i, l)];
            if f.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                out[(i, j)] = f.add(out[(i, j)], f.mul(x, b[(l, j)]));
            }
        }
    }
    out
}

/// Row vector times matrix.
pub fn vec_mul<F: Field>(f: &F, v: &[F::Elem], m: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert_eq!(v.len(), m.rows, "dimension mismatch in vector-matrix product");
    let mut out = vec![f.zero(); m.cols];
    for (i, &x) in v.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (o, &y) in out.iter_mut().zip(m.row(i)) {
            *o = f.add(*o, f.mul(x, y));
        }
    }
    out
}

/// Reduced row-echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m[(i, c)])) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = f.inv(m[(r, c)]);
        for j in c..m.cols {
            m[(r, j)] = f.mul(inv, m[(r, j)]);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m[(i, c)];
            if f.is_zero(factor) {
                continue;
            }
            for j in c..m.cols {
                let t = f.mul(factor, m[(r, j)]);
                m[(i, j)] = f.sub(m[(i, j)], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Basis of the row space in RREF (zero rows dropped).
pub fn row_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let mut work = m.clone();
    let r = rref(f, &mut work).len();
    work.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Basis of the right kernel {x : M x = 0}, one vector per free column.
pub fn kernel<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![f.zero(); m.cols];
            x[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(work[(r, fc)]);
            }
            x
        })
        .collect()
}

pub fn inverse<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.rows;
    if n != m.cols {
        return None;
    }
    let mut aug = zeros(f, n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)];
        }
        aug[(i, n + i)] = f.one();
    }
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.select_cols(&(n..2 * n).collect::<Vec<_>>()))
}

/// Whether `v` lies in the row space of `m`.
pub fn in_row_space<F: Field>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> bool {
    let base = rank(f, m);
    let stacked = m.vstack(&Matrix::from_rows(vec![v.to_vec()], v.len()));
    rank(f, &stacked) == base
}

/// One solution x of x·M = b (row-vector convention), if any.
pub fn solve_left<F: Field>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    // x M = b  ⇔  Mᵀ xᵀ = bᵀ; eliminate on [Mᵀ | bᵀ].
    let mt = m.transpose();
    let (rows, cols) = (mt.rows, mt.cols);
    let mut aug = zeros(f, rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = mt[(i, j)];
        }
        aug[(i, cols)] = b[i];
    }
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[(r, cols)];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn rank_kernel_inverse_gf5() {
        let f = PrimeField::new(5).unwrap();
        let m = Matrix::from_rows(vec![vec![1, 2, 3], vec![2, 4, 1], vec![0, 1, 1]], 3);
        assert_eq!(rank(&f, &m), 2);
        let ker = kernel(&f, &m);
        assert_eq!(ker.len(), 1);
        let prod = mat_mul(&f, &m, &Matrix::from_rows(vec![ker[0].clone()], 3).transpose());
        assert!(prod.to_rows().iter().all(|r| r[0] == 0));
        let a = Matrix::from_rows(vec![vec![1, 2], vec![3, 4]], 2);
        let ai = inverse(&f, &a).unwrap();
        assert_eq!(mat_mul(&f, &a, &ai), identity(&f, 2));
        let x = solve_left(&f, &a, &[1, 0]).unwrap();
        assert_eq!(vec_mul(&f, &x, &a), vec![1, 0]);
    }
}
