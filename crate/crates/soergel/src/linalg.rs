//! Dense exact matrices over a [`Scalar`] field.

use std::fmt;

use crate::field::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:?}", self[(r, c)])).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_columns(cols: &[Vec<F>], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * k).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    /// `self += k * o`
    pub fn add_scaled(&mut self, k: &F, o: &Self) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        if k.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += b.clone() * k;
            }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a.clone() * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![F::zero(); self.rows];
        for i in 0..self.rows {
            for (k, x) in v.iter().enumerate() {
                let a = &self[(i, k)];
                if !a.is_zero() && !x.is_zero() {
                    out[i] += a.clone() * x;
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m[(a, b)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..o.cols {
                m[(r, self.cols + c)] = o[(r, c)].clone();
            }
        }
        m
    }

    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Place `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = self[(row, col)].inv();
            for c in col..self.cols {
                let x = std::mem::replace(&mut self[(row, c)], F::zero());
                self[(row, c)] = x * &inv;
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let f = self[(r, col)].clone();
                for c in col..self.cols {
                    let x = &self.data[row * self.cols + c];
                    if x.is_zero() {
                        continue;
                    }
                    let d = x.clone() * &f;
                    self[(r, c)] -= d;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        m.rref_in_place().len()
    }

    /// Columns of the result form a basis of the null space.
    pub fn kernel(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                k[(p, j)] = -m[(i, f)].clone();
            }
        }
        k
    }

    /// Columns of the result form a basis of the column space (a subset of the columns).
    pub fn column_basis(&self) -> Self {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let mut aug = self.hstack(&Self::identity(n));
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(aug.submatrix(&rows, &cols))
    }

    /// Some `X` with `self * X = b`, if the system is consistent.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        assert_eq!(self.rows, b.rows);
        let mut aug = self.hstack(b);
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = aug[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn determinant(&self) -> F {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = det * &piv;
            let inv = piv.inv();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone() * &inv;
                for c in col..n {
                    let d = m[(col, c)].clone() * &f;
                    m[(r, c)] -= d;
                }
            }
        }
        det
    }
}

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn dim(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    /// Definite with the given sign (+1 or -1); the empty form counts as definite.
    pub fn is_definite(&self, sign: i8) -> bool {
        match sign {
            1 => self.minus == 0 && self.zero == 0,
            -1 => self.plus == 0 && self.zero == 0,
            _ => false,
        }
    }
}

/// Symmetric Gaussian elimination with 2x2 block pivots when the active diagonal vanishes.
pub fn signature<F: Scalar>(m: &Matrix<F>) -> Signature {
    assert!(m.is_symmetric(), "signature of a non-symmetric matrix");
    let mut a = m.clone();
    let mut active: Vec<usize> = (0..m.rows()).collect();
    let (mut plus, mut minus) = (0, 0);
    loop {
        if let Some(pos) = active.iter().position(|&i| !a[(i, i)].is_zero()) {
            let i = active.remove(pos);
            let piv = a[(i, i)].clone();
            if piv.sign() > 0 {
                plus += 1;
            } else {
                minus += 1;
            }
            let inv = piv.inv();
            let col: Vec<F> = active.iter().map(|&j| a[(j, i)].clone()).collect();
            for (x, &j) in active.iter().enumerate() {
                if col[x].is_zero() {
                    continue;
                }
                let f = col[x].clone() * &inv;
                for (y, &k) in active.iter().enumerate() {
                    if !col[y].is_zero() {
                        let d = f.clone() * &col[y];
                        a[(j, k)] -= d;
                    }
                }
            }
            continue;
        }
        // all active diagonal entries vanish: look for an off-diagonal pivot
        let mut found = None;
        'outer: for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                if !a[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = found else { break };
        // [[0, c], [c, 0]] has one positive and one negative direction
        plus += 1;
        minus += 1;
        active.retain(|&k| k != i && k != j);
        let c_inv = a[(i, j)].inv();
        let ci: Vec<F> = active.iter().map(|&k| a[(k, i)].clone()).collect();
        let cj: Vec<F> = active.iter().map(|&k| a[(k, j)].clone()).collect();
        for (x, &k) in active.iter().enumerate() {
            for (y, &l) in active.iter().enumerate() {
                let t = ci[x].clone() * &cj[y] + cj[x].clone() * &ci[y];
                if !t.is_zero() {
                    a[(k, l)] -= t * &c_inv;
                }
            }
        }
    }
    Signature { plus, minus, zero: active.len() }
}

/// Incrementally maintained reduced echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    width: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Scalar> EchelonBasis<F> {
    pub fn new(width: usize) -> Self {
        EchelonBasis { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce(&self, v: &mut [F]) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= r.clone() * &f;
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<F>) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= r.clone() * &f;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Basis (as columns) of `{x : r . x = 0 for every stored row r}`.
    pub fn null_space(&self) -> Matrix<F> {
        let pivots = self.pivots();
        let free: Vec<usize> = (0..self.width).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.width, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = F::one();
            for (p, row) in &self.rows {
                k[(*p, j)] = -row[f].clone();
            }
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, Q5};
    use num_traits::Zero;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect())
    }

    #[test]
    fn signature_examples() {
        let id = Matrix::<Rational>::identity(2);
        assert_eq!(signature(&id), Signature { plus: 2, minus: 0, zero: 0 });
        assert_eq!(signature(&mat(&[&[1, 0], &[0, -1]])), Signature { plus: 1, minus: 1, zero: 0 });
        assert_eq!(signature(&mat(&[&[0, 1], &[1, 0]])), Signature { plus: 1, minus: 1, zero: 0 });
        assert_eq!(signature(&mat(&[&[0, 0], &[0, 0]])), Signature { plus: 0, minus: 0, zero: 2 });
    }

    #[test]
    fn kernel_and_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn inverse_and_solve() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(mat(&[&[1, 1], &[1, 1]]).inverse().is_none());
        let b = mat(&[&[3], &[2]]);
        assert_eq!(m.mul(&m.solve(&b).unwrap()), b);
    }

    #[test]
    fn determinant_over_quadratic_field() {
        let phi = Q5::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()));
        let m = Matrix::from_rows(vec![vec![Q5::from_i64(2), -phi.clone()], vec![-phi.clone(), Q5::from_i64(2)]]);
        // 4 - phi^2 = 3 - phi
        assert_eq!(m.determinant(), Q5::from_i64(3) - phi);
    }

    #[test]
    fn echelon_basis_null_space() {
        let mut e = EchelonBasis::new(3);
        assert!(e.insert(vec![r(1), r(1), r(0)]));
        assert!(!e.insert(vec![r(2), r(2), r(0)]));
        assert!(e.insert(vec![r(0), r(1), r(1)]));
        let k = e.null_space();
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!((v[0].clone() + &v[1]).is_zero() && (v[1].clone() + &v[2]).is_zero());
    }
}
