//! Hermitian forms `⟨v,w⟩ = conj(v)ᵀ·H·w`: conjugate-linear in the first
//! argument, linear in the second. Adjoints are taken with respect to this
//! convention, `F* = H⁻¹·conj(F)ᵀ·H`.

use rand::Rng;

use super::{dim_err, AlgError, Field, FieldSpec, Involution, Matrix, Scalar};

/// Largest number of vectors scanned exhaustively when certifying anisotropy.
const SCAN_LIMIT: u64 = 1 << 20;

/// Outcome of an anisotropy check (`⟨v,v⟩ = 0` only for `v = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Anisotropy {
    /// Every nonzero vector of a finite space was evaluated.
    CertifiedByScan,
    /// Positive leading principal minors of an ordered-field Gram matrix.
    CertifiedByMinors,
    Isotropic(Vec<Scalar>),
    /// A sampled scan found no isotropic vector; this is not a proof.
    Unproven { samples: usize },
}

impl Anisotropy {
    pub fn is_certified(&self) -> bool {
        matches!(self, Anisotropy::CertifiedByScan | Anisotropy::CertifiedByMinors)
    }

    pub fn witness(&self) -> Option<&[Scalar]> {
        match self {
            Anisotropy::Isotropic(v) => Some(v),
            _ => None,
        }
    }
}

/// Vector with base-`q` digits of `code`, first coordinate least significant.
pub(crate) fn vector_from_code(code: u64, q: u64, m: usize) -> Vec<Scalar> {
    let mut c = code;
    (0..m)
        .map(|_| {
            let d = c % q;
            c /= q;
            Scalar::Fin(d as u32)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianForm {
    gram: Matrix,
    gram_inv: Matrix,
}

impl HermitianForm {
    pub fn new(gram: Matrix) -> Result<HermitianForm, AlgError> {
        if !gram.is_square() {
            return Err(dim_err("square Gram matrix", format!("{}x{}", gram.rows(), gram.cols())));
        }
        if gram.conj_transpose() != gram {
            return Err(AlgError::NotHermitian);
        }
        let gram_inv = gram.inverse().map_err(|_| AlgError::Degenerate)?;
        Ok(HermitianForm { gram, gram_inv })
    }

    /// Standard form with identity Gram matrix.
    pub fn dot(field: &Field, m: usize) -> HermitianForm {
        let gram = Matrix::identity(field, m);
        HermitianForm { gram_inv: gram.clone(), gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn field(&self) -> &Field {
        self.gram.field()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn is_identity(&self) -> bool {
        self.gram.is_identity()
    }

    pub fn value(&self, v: &[Scalar], w: &[Scalar]) -> Result<Scalar, AlgError> {
        let m = self.dim();
        if v.len() != m || w.len() != m {
            return Err(dim_err(m, if v.len() != m { v.len() } else { w.len() }));
        }
        let f = self.field();
        let hw = self.gram.apply(w)?;
        let mut acc = f.zero();
        for (a, b) in v.iter().zip(&hw) {
            if !f.contains(a) {
                return Err(AlgError::FieldMismatch);
            }
            acc = f.add(&acc, &f.mul(&f.conj(a), b));
        }
        Ok(acc)
    }

    /// First isotropic nonzero vector in code order, when the space is finite
    /// and small enough to scan; `Some(None)` means the scan found none.
    pub fn isotropic_scan(&self) -> Option<Option<Vec<Scalar>>> {
        let q = self.field().order()?;
        let total = q.checked_pow(self.dim() as u32).filter(|&t| t <= SCAN_LIMIT)?;
        let f = self.field();
        for code in 1..total {
            let v = vector_from_code(code, q, self.dim());
            if f.is_zero(&self.value(&v, &v).expect("dimensions agree")) {
                return Some(Some(v));
            }
        }
        Some(None)
    }

    /// `Some(true)` when every leading principal minor is a positive rational
    /// and the field is ordered compatibly with the involution.
    pub fn leading_minors_positive(&self) -> Option<bool> {
        let ordered = match self.field().spec() {
            FieldSpec::Rationals => true,
            FieldSpec::Quadratic { d, involution } => *d < 0 && *involution == Involution::Conjugation,
            FieldSpec::Galois { .. } => false,
        };
        if !ordered {
            return None;
        }
        for k in 1..=self.dim() {
            let idx: Vec<usize> = (0..k).collect();
            let minor = self.gram.select_rows(&idx).select_cols(&idx).determinant().ok()?;
            if self.field().rational_sign(&minor)? <= 0 {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Scan on finite fields, minor test on ordered fields, sampled search otherwise.
    pub fn certify_anisotropy<G: Rng + ?Sized>(&self, samples: usize, rng: &mut G) -> Anisotropy {
        if let Some(found) = self.isotropic_scan() {
            return match found {
                Some(v) => Anisotropy::Isotropic(v),
                None => Anisotropy::CertifiedByScan,
            };
        }
        if self.leading_minors_positive() == Some(true) {
            return Anisotropy::CertifiedByMinors;
        }
        let f = self.field();
        for _ in 0..samples {
            let v: Vec<Scalar> = (0..self.dim()).map(|_| f.random(rng, 16)).collect();
            if v.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            if f.is_zero(&self.value(&v, &v).expect("dimensions agree")) {
                return Anisotropy::Isotropic(v);
            }
        }
        Anisotropy::Unproven { samples }
    }

    pub fn adjoint(&self, f: &Matrix) -> Result<Matrix, AlgError> {
        let m = self.dim();
        if f.rows() != m || f.cols() != m {
            return Err(dim_err(format!("{m}x{m}"), format!("{}x{}", f.rows(), f.cols())));
        }
        if self.is_identity() {
            return Ok(f.conj_transpose());
        }
        self.gram_inv.checked_mul(&f.conj_transpose())?.checked_mul(&self.gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Involution;
    use num::rational::BigRational;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn vecs(f: &Field, m: usize) -> Vec<Vec<Scalar>> {
        let q = f.order().unwrap();
        (0..q.pow(m as u32)).map(|c| vector_from_code(c, q, m)).collect()
    }

    #[test]
    fn anisotropy_verdicts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g3 = HermitianForm::dot(&Field::gf(3), 3);
        let w = g3.certify_anisotropy(0, &mut rng);
        assert_eq!(w.witness().unwrap(), &[Scalar::Fin(1), Scalar::Fin(1), Scalar::Fin(1)]);
        assert_eq!(HermitianForm::dot(&Field::gf(3), 2).certify_anisotropy(0, &mut rng), Anisotropy::CertifiedByScan);
        let q = Field::rationals();
        assert_eq!(HermitianForm::dot(&q, 3).certify_anisotropy(0, &mut rng), Anisotropy::CertifiedByMinors);
        let gi = Field::quadratic(-1, Involution::Conjugation).unwrap();
        assert_eq!(HermitianForm::dot(&gi, 2).certify_anisotropy(0, &mut rng), Anisotropy::CertifiedByMinors);
        let hyperbolic = HermitianForm::new(Matrix::from_i64_rows(&q, &[vec![0, 1], vec![1, 0]])).unwrap();
        assert_eq!(hyperbolic.leading_minors_positive(), Some(false));
    }

    #[test]
    fn dot_form_values() {
        let q = Field::rationals();
        let h = HermitianForm::dot(&q, 2);
        let v = |a: i64, b: i64| vec![q.from_i64(a), q.from_i64(b)];
        assert_eq!(h.value(&v(1, 0), &v(0, 1)).unwrap(), q.zero());
        assert_eq!(h.value(&v(1, 2), &v(1, 2)).unwrap(), q.from_i64(5));
        let g = Field::gf(3);
        let h3 = HermitianForm::dot(&g, 2);
        assert_eq!(h3.value(&[Scalar::Fin(1), Scalar::Fin(1)], &[Scalar::Fin(1), Scalar::Fin(2)]).unwrap(), g.zero());
        assert!(h3.value(&[Scalar::Fin(1)], &[Scalar::Fin(1), Scalar::Fin(2)]).is_err());
    }

    #[test]
    fn form_is_hermitian_symmetric_over_gaussian_rationals() {
        let f = Field::quadratic(-1, Involution::Conjugation).unwrap();
        let r = |n: i64| BigRational::from_integer(n.into());
        let gram = Matrix::from_rows(
            &f,
            &[vec![f.from_i64(2), f.quad(r(0), r(1)).unwrap()], vec![f.quad(r(0), r(-1)).unwrap(), f.from_i64(3)]],
            2,
        )
        .unwrap();
        let h = HermitianForm::new(gram).unwrap();
        let v = vec![f.quad(r(1), r(2)).unwrap(), f.from_i64(-1)];
        let w = vec![f.from_i64(4), f.quad(r(0), r(5)).unwrap()];
        assert_eq!(h.value(&w, &v).unwrap(), f.conj(&h.value(&v, &w).unwrap()));
    }

    #[test]
    fn non_hermitian_or_degenerate_gram_rejected() {
        let q = Field::rationals();
        assert_eq!(HermitianForm::new(Matrix::from_i64_rows(&q, &[vec![1, 2], vec![0, 1]])), Err(AlgError::NotHermitian));
        assert_eq!(HermitianForm::new(Matrix::from_i64_rows(&q, &[vec![1, 1], vec![1, 1]])), Err(AlgError::Degenerate));
    }

    #[test]
    fn adjoint_of_dot_form_is_transpose() {
        let q = Field::rationals();
        let h = HermitianForm::dot(&q, 2);
        let f = Matrix::from_i64_rows(&q, &[vec![1, 2], vec![3, 4]]);
        assert_eq!(h.adjoint(&f).unwrap(), f.transpose());
        let g = Field::quadratic(-1, Involution::Conjugation).unwrap();
        let r = |n: i64| BigRational::from_integer(n.into());
        let d = Matrix::diagonal(&g, &[g.quad(r(1), r(2)).unwrap(), g.quad(r(0), r(-3)).unwrap()]);
        assert_eq!(HermitianForm::dot(&g, 2).adjoint(&d).unwrap(), d.conj());
    }

    #[test]
    fn adjoint_pairing_exhaustive_gf7() {
        let f = Field::gf(7);
        let h = HermitianForm::dot(&f, 3);
        let m = Matrix::from_i64_rows(&f, &[vec![3, 0, 5], vec![1, 6, 2], vec![4, 4, 0]]);
        let adj = h.adjoint(&m).unwrap();
        let all = vecs(&f, 3);
        for v in &all {
            let fv = m.apply(v).unwrap();
            for w in &all {
                assert_eq!(h.value(&fv, w).unwrap(), h.value(v, &adj.apply(w).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn adjoint_with_nontrivial_gram() {
        let q = Field::rationals();
        let h = HermitianForm::new(Matrix::from_i64_rows(&q, &[vec![2, 1], vec![1, 3]])).unwrap();
        let m = Matrix::from_i64_rows(&q, &[vec![0, 1], vec![5, -2]]);
        let adj = h.adjoint(&m).unwrap();
        let basis = [vec![q.one(), q.zero()], vec![q.zero(), q.one()]];
        for v in &basis {
            for w in &basis {
                assert_eq!(h.value(&m.apply(v).unwrap(), w).unwrap(), h.value(v, &adj.apply(w).unwrap()).unwrap());
            }
        }
        assert_eq!(h.adjoint(&adj).unwrap(), m);
    }
}
