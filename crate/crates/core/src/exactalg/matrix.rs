//! Dense exact matrices acting on column vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{dim_err, AlgError, Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of Gauss–Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub kernel: Vec<Vec<Scalar>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.field.format(self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Matrix, AlgError> {
        if data.len() != rows * cols {
            return Err(dim_err(rows * cols, data.len()));
        }
        if data.iter().any(|s| !field.contains(s)) {
            return Err(AlgError::FieldMismatch);
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Matrix unit `E_ij`.
    pub fn unit(field: &Field, n: usize, i: usize, j: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn from_i64_rows(field: &Field, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().map(|&v| field.from_i64(v))).collect();
        Matrix { field: field.clone(), rows: r, cols: c, data }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Scalar>], cols: usize) -> Result<Matrix, AlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(dim_err(cols, row.len()));
            }
            data.extend(row.iter().cloned());
        }
        Matrix::new(field, rows.len(), cols, data)
    }

    /// Column vector.
    pub fn column(field: &Field, v: &[Scalar]) -> Matrix {
        Matrix { field: field.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn diagonal(field: &Field, d: &[Scalar]) -> Matrix {
        let n = d.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn col_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let x = self.get(r, c);
                    if r == c {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.cols, cols: self.rows, data }
    }

    /// Entrywise involution.
    pub fn conj(&self) -> Matrix {
        let data = self.data.iter().map(|x| self.field.conj(x)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn conj_transpose(&self) -> Matrix {
        self.transpose().conj()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|x| self.field.mul(s, x)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    fn same_shape(&self, other: &Matrix) -> Result<(), AlgError> {
        if self.field != other.field {
            return Err(AlgError::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(dim_err(
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix, AlgError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix, AlgError> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.sub(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix, AlgError> {
        if self.field != other.field {
            return Err(AlgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(dim_err(format!("{} rows", self.cols), format!("{} rows", other.rows)));
        }
        let f = &self.field;
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = f.zero();
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if f.is_zero(a) {
                        continue;
                    }
                    acc = f.add(&acc, &f.mul(a, other.get(k, c)));
                }
                data.push(acc);
            }
        }
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: other.cols, data })
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, AlgError> {
        Ok(self.checked_mul(&Matrix::column(&self.field, v))?.data)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, AlgError> {
        if self.rows != other.rows {
            return Err(dim_err(self.rows, other.rows));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for r in 0..self.rows {
            data.extend(self.row(r));
            data.extend(other.row(r));
        }
        Matrix::new(&self.field, self.rows, self.cols + other.cols, data)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, AlgError> {
        if self.cols != other.cols {
            return Err(dim_err(self.cols, other.cols));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::new(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field.clone(), rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let data = rows.iter().flat_map(|&r| self.row(r)).collect();
        Matrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, c))) else { continue };
            if p != row {
                for k in 0..m.cols {
                    m.data.swap(p * m.cols + k, row * m.cols + k);
                }
            }
            let inv = f.inv(m.get(row, c)).expect("pivot is nonzero");
            for k in 0..m.cols {
                let v = f.mul(&inv, m.get(row, k));
                m.set(row, k, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for k in 0..m.cols {
                    let v = f.sub(m.get(r, k), &f.mul(&factor, m.get(row, k)));
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            row += 1;
        }
        let rank = pivots.len();
        let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); m.cols];
                v[fc] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(i, fc));
                }
                v
            })
            .collect();
        Rref { reduced: m, rank, pivots, kernel }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        self.rref().kernel
    }

    pub fn inverse(&self) -> Result<Matrix, AlgError> {
        if !self.is_square() {
            return Err(dim_err("square matrix", format!("{}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return Err(AlgError::Singular);
        }
        Ok(red.reduced.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// `X` with `X·self = I`, for matrices of full column rank.
    pub fn left_inverse(&self) -> Result<Matrix, AlgError> {
        let h = self.conj_transpose();
        let g = h.checked_mul(self)?;
        // Over fields with isotropic vectors A†A may be singular; fall back to
        // selecting independent rows.
        if let Ok(gi) = g.inverse() {
            return gi.checked_mul(&h);
        }
        let rows = self.transpose().rref().pivots;
        if rows.len() < self.cols {
            return Err(AlgError::Singular);
        }
        let sq = self.select_rows(&rows).inverse()?;
        let mut x = Matrix::zeros(&self.field, self.cols, self.rows);
        for (k, &r) in rows.iter().enumerate() {
            for i in 0..self.cols {
                x.set(i, r, sq.get(i, k).clone());
            }
        }
        Ok(x)
    }

    /// `X` with `self·X = I`, for matrices of full row rank.
    pub fn right_inverse(&self) -> Result<Matrix, AlgError> {
        Ok(self.transpose().left_inverse()?.transpose())
    }

    pub fn determinant(&self) -> Result<Scalar, AlgError> {
        if !self.is_square() {
            return Err(dim_err("square matrix", format!("{}x{}", self.rows, self.cols)));
        }
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !f.is_zero(m.get(r, c))) else { return Ok(f.zero()) };
            if p != c {
                for k in 0..n {
                    m.data.swap(p * n + k, c * n + k);
                }
                det = f.neg(&det);
            }
            let piv = m.get(c, c).clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv)?;
            for r in c + 1..n {
                let factor = f.mul(m.get(r, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for k in c..n {
                    let v = f.sub(m.get(r, k), &f.mul(&factor, m.get(c, k)));
                    m.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut r = Matrix::identity(&self.field, self.rows);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix addition")
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix subtraction")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix multiplication")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        let data = self.data.iter().map(|x| self.field.neg(x)).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2() -> Field {
        Field::gf(2)
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = gf2();
        let r = Matrix::identity(&f, 3).rref();
        assert_eq!(r.rank, 3);
        assert!(r.kernel.is_empty());
        let z = Matrix::zeros(&f, 2, 2).rref();
        assert_eq!(z.rank, 0);
        assert_eq!(z.kernel.len(), 2);
    }

    #[test]
    fn rref_kernel_against_exhaustive_scan() {
        let f = gf2();
        let m = Matrix::from_i64_rows(&f, &[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 0]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        let expected = vec![
            vec![Scalar::Fin(1), Scalar::Fin(1), Scalar::Fin(0)],
            vec![Scalar::Fin(0), Scalar::Fin(0), Scalar::Fin(1)],
        ];
        assert_eq!(r.kernel, expected);
        // every vector with Mv = 0 is in the span of the kernel basis
        let mut solutions = 0;
        for code in 0..8u32 {
            let v: Vec<Scalar> = (0..3).map(|i| Scalar::Fin((code >> i) & 1)).collect();
            if m.apply(&v).unwrap().iter().all(|x| f.is_zero(x)) {
                solutions += 1;
            }
        }
        assert_eq!(solutions, 1 << r.kernel.len());
    }

    #[test]
    fn inverse_round_trip_over_q() {
        let q = Field::rationals();
        let m = Matrix::from_i64_rows(&q, &[vec![2, 1], vec![7, 4]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let s = Matrix::from_i64_rows(&q, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.inverse(), Err(AlgError::Singular));
    }

    #[test]
    fn one_sided_inverses_with_isotropic_columns() {
        // (1,1)ᵀ over GF(2) is isotropic, so AᵀA = 0 and the fallback is used.
        let f = gf2();
        let a = Matrix::from_i64_rows(&f, &[vec![1], vec![1]]);
        let l = a.left_inverse().unwrap();
        assert!((&l * &a).is_identity());
        let b = a.transpose();
        let r = b.right_inverse().unwrap();
        assert!((&b * &r).is_identity());
    }

    #[test]
    fn mismatched_shapes_are_reported() {
        let f = gf2();
        let a = Matrix::zeros(&f, 2, 3);
        let b = Matrix::zeros(&f, 2, 3);
        assert!(matches!(a.checked_mul(&b), Err(AlgError::DimensionMismatch { .. })));
        let g = Matrix::zeros(&Field::gf(3), 2, 3);
        assert_eq!(a.checked_add(&g), Err(AlgError::FieldMismatch));
    }
}
