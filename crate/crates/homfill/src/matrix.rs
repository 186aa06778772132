//! Dense arbitrary-precision integer matrices, Smith normal form, and a
//! small exact LLL reduction used to condition kernel bases before
//! enumeration.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.data.swap(k * self.cols + i, k * self.cols + j);
        }
    }

    /// row_i += c * row_k
    fn row_add(&mut self, i: usize, k: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(k, j).clone();
            if !v.is_zero() {
                let cur = self.get(i, j) + c * &v;
                self.set(i, j, cur);
            }
        }
    }

    /// col_j += c * col_k
    fn col_add(&mut self, j: usize, k: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, k).clone();
            if !v.is_zero() {
                let cur = self.get(i, j) + c * &v;
                self.set(i, j, cur);
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// Fraction-free determinant (Bareiss). Only for square matrices.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

/// Result of the Smith reduction: unimodular `u` and `v` with
/// `u * a * v` diagonal, diagonal entries nonnegative and forming a
/// divisibility chain.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (k, v) in self.diag.iter().enumerate() {
            d.set(k, k, v.clone());
        }
        d
    }

    pub fn verify(&self, a: &IntMatrix) -> bool {
        if a.rows() != self.rows || a.cols() != self.cols {
            return false;
        }
        if self.u.mul(a).mul(&self.v) != self.diagonal_matrix() {
            return false;
        }
        if self.u.determinant().abs() != BigInt::one() {
            return false;
        }
        if self.v.determinant().abs() != BigInt::one() {
            return false;
        }
        for w in self.diag.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return false;
            }
            if !w[0].is_zero() && !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        self.diag.iter().all(|d| !d.is_negative())
    }
}

fn find_pivot(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if a.is_one() {
                return Some((i, j));
            }
            match &best {
                Some((_, _, m)) if *m <= a => {}
                _ => best = Some((i, j, a)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn find_nondivisible(d: &IntMatrix, k: usize) -> Option<usize> {
    let p = d.get(k, k).clone();
    for i in k + 1..d.rows() {
        for j in k + 1..d.cols() {
            if !(d.get(i, j) % &p).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

/// Smith normal form via smallest-magnitude pivoting with row and column
/// elimination; quadratic sweeps are fine at the sizes handled here.
pub fn smith(a: &IntMatrix) -> Smith {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);

    for k in 0..n {
        if find_pivot(&d, k).is_none() {
            break;
        }
        loop {
            let (pi, pj) = match find_pivot(&d, k) {
                Some(p) => p,
                None => break,
            };
            d.swap_rows(pi, k);
            u.swap_rows(pi, k);
            d.swap_cols(pj, k);
            v.swap_cols(pj, k);

            let mut dirty = false;
            for i in k + 1..rows {
                let q = d.get(i, k) / d.get(k, k);
                let nq = -q;
                d.row_add(i, k, &nq);
                u.row_add(i, k, &nq);
                if !d.get(i, k).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..cols {
                let q = d.get(k, j) / d.get(k, k);
                let nq = -q;
                d.col_add(j, k, &nq);
                v.col_add(j, k, &nq);
                if !d.get(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            if let Some(i) = find_nondivisible(&d, k) {
                let one = BigInt::one();
                d.row_add(k, i, &one);
                u.row_add(k, i, &one);
                continue;
            }
            break;
        }
    }

    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if d.get(k, k).is_negative() {
            d.negate_col(k);
            v.negate_col(k);
        }
        diag.push(d.get(k, k).clone());
    }
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    Smith {
        u,
        v,
        diag,
        rank,
        rows,
        cols,
    }
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn round_rational(x: &BigRational) -> BigInt {
    // nearest integer, ties toward +inf
    let two = BigInt::from(2);
    let shifted = x + BigRational::new(BigInt::one(), two);
    shifted.floor().to_integer()
}

fn gso(basis: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = basis.len();
    let dim = basis.first().map_or(0, Vec::len);
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut vi: Vec<BigRational> = basis[i].iter().map(rat).collect();
        for j in 0..i {
            let mut dot = BigRational::zero();
            for k in 0..dim {
                dot += rat(&basis[i][k]) * &star[j][k];
            }
            let coeff = if norms[j] == BigRational::zero() {
                BigRational::zero()
            } else {
                dot / &norms[j]
            };
            mu[i][j] = coeff.clone();
            for k in 0..dim {
                let t = &coeff * &star[j][k];
                vi[k] -= t;
            }
        }
        let mut norm = BigRational::zero();
        for x in &vi {
            norm += x * x;
        }
        norms.push(norm);
        star.push(vi);
    }
    (mu, norms)
}

/// Exact LLL reduction (delta = 99/100) of a list of independent lattice
/// vectors. Recomputes the Gram-Schmidt data after each change; the
/// bases here have at most a few dozen vectors.
pub fn lll_reduce(basis: &mut Vec<Vec<BigInt>>) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
    let (mut mu, mut norms) = gso(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break; // reduction is an optimization; bail out rather than loop
        }
        let mut changed = false;
        for j in (0..k).rev() {
            let q = round_rational(&mu[k][j]);
            if !q.is_zero() {
                for t in 0..basis[k].len() {
                    let sub = &q * &basis[j][t];
                    basis[k][t] -= sub;
                }
                changed = true;
            }
        }
        if changed {
            let g = gso(basis);
            mu = g.0;
            norms = g.1;
        }
        let lhs = &norms[k];
        let m = &mu[k][k - 1];
        let rhs = (&delta - m * m) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let g = gso(basis);
            mu = g.0;
            norms = g.1;
            k = k.max(2) - 1;
        }
    }
}

/// Solve `g * x = rhs` for square rational `g` by Gaussian elimination.
/// Returns None when `g` is singular.
pub fn solve_rational(
    g: &[Vec<BigRational>],
    rhs: &[Vec<BigRational>],
) -> Option<Vec<Vec<BigRational>>> {
    let n = g.len();
    let m = rhs.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().chain(r.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| a[i][col] != BigRational::zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for i in 0..n {
            if i != col && a[i][col] != BigRational::zero() {
                let f = a[i][col].clone();
                for j in 0..n + m {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
