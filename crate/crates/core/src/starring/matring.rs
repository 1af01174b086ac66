//! Full matrix rings `M_n(F)` with involution `a ↦ H⁻¹·conj(a)ᵀ·H`.

use rand_chacha::ChaCha8Rng;

use super::{RingError, StarRing};
use crate::exactalg::{AlgError, Anisotropy, Field, HermitianForm, Matrix};

/// Entries of random elements over infinite fields are drawn with numerators
/// and denominators bounded by this.
pub const RANDOM_ENTRY_BOUND: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRing {
    n: usize,
    form: HermitianForm,
}

impl MatrixRing {
    pub fn new(form: HermitianForm) -> MatrixRing {
        MatrixRing { n: form.dim(), form }
    }

    /// Involution `a ↦ conj(a)ᵀ`.
    pub fn standard(field: &Field, n: usize) -> MatrixRing {
        MatrixRing::new(HermitianForm::dot(field, n))
    }

    pub fn with_gram(gram: Matrix) -> Result<MatrixRing, AlgError> {
        Ok(MatrixRing::new(HermitianForm::new(gram)?))
    }

    pub fn field(&self) -> &Field {
        self.form.field()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn from_i64_rows(&self, rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64_rows(self.field(), rows)
    }

    /// Form on row vectors whose isotropic vectors `v` give nonzero `x` with
    /// `x·x* = 0` (take every row of `x` equal to `v`). Its Gram matrix is `H⁻¹`.
    pub fn row_form(&self) -> HermitianForm {
        HermitianForm::new(self.form.gram_inv().clone()).expect("inverse of a hermitian form is hermitian")
    }

    /// Certificate for `x·x* = 0 ⇒ x = 0`, or a witness with all rows equal.
    pub fn proper_involution(&self, samples: usize, rng: &mut ChaCha8Rng) -> (Anisotropy, Option<Matrix>) {
        let verdict = self.row_form().certify_anisotropy(samples, rng);
        let witness = verdict.witness().map(|u| {
            let v: Vec<_> = u.iter().map(|s| self.field().conj(s)).collect();
            let rows: Vec<_> = (0..self.n).map(|_| v.clone()).collect();
            Matrix::from_rows(self.field(), &rows, self.n).expect("square witness")
        });
        (verdict, witness)
    }

    /// Quasi-inverse from the rank factorization `x = P·Q`, where `P` holds the
    /// pivot columns of `x` and `Q` the nonzero rows of its reduced echelon form.
    pub fn rank_factor_inverse(&self, x: &Matrix) -> Result<Matrix, RingError> {
        let red = x.rref();
        if red.rank == 0 {
            return Ok(Matrix::zeros(self.field(), self.n, self.n));
        }
        let rows: Vec<usize> = (0..red.rank).collect();
        let q = red.reduced.select_rows(&rows);
        let p = x.select_cols(&red.pivots);
        let y = q.right_inverse()?.checked_mul(&p.left_inverse()?)?;
        if &(x * &y) * x != *x {
            return Err(RingError::NotRegularAt(x.to_string()));
        }
        Ok(y)
    }
}

impl StarRing for MatrixRing {
    type Elem = Matrix;

    fn zero(&self) -> Matrix {
        Matrix::zeros(self.field(), self.n, self.n)
    }

    fn one(&self) -> Option<Matrix> {
        Some(Matrix::identity(self.field(), self.n))
    }

    fn add(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a + b
    }

    fn neg(&self, a: &Matrix) -> Matrix {
        -a
    }

    fn sub(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a - b
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a * b
    }

    fn star(&self, a: &Matrix) -> Matrix {
        self.form.adjoint(a).expect("square matrix of the ring's size")
    }

    fn quasi_inverse(&self, x: &Matrix) -> Result<Matrix, RingError> {
        self.rank_factor_inverse(x)
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Matrix {
        let f = self.field();
        let data = (0..self.n * self.n).map(|_| f.random(rng, RANDOM_ENTRY_BOUND)).collect();
        Matrix::new(f, self.n, self.n, data).expect("entries in field")
    }

    fn describe(&self, a: &Matrix) -> String {
        a.to_string()
    }

    fn is_zero(&self, a: &Matrix) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starring::{is_projection, left_right_projections, rickart_inverse};
    use rand::SeedableRng;

    #[test]
    fn rank_factor_inverse_over_q() {
        let r = MatrixRing::standard(&Field::rationals(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let mut x = r.random_element(&mut rng);
            // force rank deficiency half the time
            if rand::Rng::gen_bool(&mut rng, 0.5) {
                let row: Vec<_> = x.row(0);
                for c in 0..3 {
                    x.set(1, c, row[c].clone());
                }
            }
            let y = r.quasi_inverse(&x).unwrap();
            assert_eq!(&(&x * &y) * &x, x);
            let q = rickart_inverse(&r, &x).unwrap();
            assert_eq!(&(&x * &q) * &x, x);
        }
    }

    #[test]
    fn projections_of_rank_one_matrix() {
        let r = MatrixRing::standard(&Field::gf(3), 2);
        let x = r.from_i64_rows(&[vec![1, 1], vec![0, 0]]);
        let (l, rp) = left_right_projections(&r, &x).unwrap();
        assert!(is_projection(&r, &l) && is_projection(&r, &rp));
        assert_eq!(l, r.from_i64_rows(&[vec![1, 0], vec![0, 0]]));
        // r(x) projects onto the row space spanned by (1,1): entries 1/2 = 2 in GF(3)
        assert_eq!(rp, r.from_i64_rows(&[vec![2, 2], vec![2, 2]]));
    }

    #[test]
    fn isotropic_rows_give_null_self_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = MatrixRing::standard(&Field::gf(2), 3);
        let (verdict, w) = r.proper_involution(0, &mut rng);
        assert!(!verdict.is_certified());
        let w = w.unwrap();
        assert_eq!(w, r.from_i64_rows(&[vec![1, 1, 0], vec![1, 1, 0], vec![1, 1, 0]]));
        assert!(r.mul(&w, &r.star(&w)).is_zero());
    }
}
