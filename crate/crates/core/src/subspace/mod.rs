//! Subspace lattices of inner-product spaces over exact fields.
//!
//! Subspaces are kept as reduced row-echelon bases, so equality and hashing
//! are structural.

mod check;

pub use check::{verify_mol_context, MolContextReport};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::{vector_from_code, AlgError, Anisotropy, Field, HermitianForm, Matrix, Scalar};
use crate::latcore::LatticeContext;

/// Numerators and denominators of random rational vectors stay within this bound.
pub const RANDOM_ENTRY_BOUND: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("space has no form")]
    MissingForm,
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// Row space of a matrix in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vectors()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }
}

/// `D^m` with an optional hermitian form.
#[derive(Clone, Debug)]
pub struct InnerProductSpace {
    field: Field,
    dim: usize,
    form: Option<HermitianForm>,
    anisotropy: Option<Anisotropy>,
    /// Admitted as a MOL on the caller's word although anisotropy is unproven.
    overridden: bool,
}

impl InnerProductSpace {
    /// Space with a form; anisotropy is certified immediately (`samples` is
    /// only used when neither a scan nor the minor test applies).
    pub fn new(form: HermitianForm, samples: usize, rng: &mut ChaCha8Rng) -> InnerProductSpace {
        let anisotropy = form.certify_anisotropy(samples, rng);
        InnerProductSpace {
            field: form.field().clone(),
            dim: form.dim(),
            form: Some(form),
            anisotropy: Some(anisotropy),
            overridden: false,
        }
    }

    pub fn dot(field: &Field, m: usize) -> InnerProductSpace {
        let form = HermitianForm::dot(field, m);
        let mut rng = rand::SeedableRng::seed_from_u64(0);
        InnerProductSpace::new(form, 0, &mut rng)
    }

    /// Plain vector space: a modular lattice without orthocomplement.
    pub fn bare(field: &Field, m: usize) -> InnerProductSpace {
        InnerProductSpace { field: field.clone(), dim: m, form: None, anisotropy: None, overridden: false }
    }

    /// Admit an unproven (sampled) anisotropy; recorded in every report.
    pub fn with_override(mut self) -> InnerProductSpace {
        self.overridden = true;
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> Option<&HermitianForm> {
        self.form.as_ref()
    }

    pub fn anisotropy(&self) -> Option<&Anisotropy> {
        self.anisotropy.as_ref()
    }

    pub fn overridden(&self) -> bool {
        self.overridden
    }

    /// The form is anisotropic, by certificate or by override.
    pub fn admitted(&self) -> bool {
        match &self.anisotropy {
            Some(a) => a.is_certified() || (self.overridden && matches!(a, Anisotropy::Unproven { .. })),
            None => false,
        }
    }

    fn check(&self, u: &Subspace) -> Result<(), SubspaceError> {
        if u.ambient_dim() != self.dim {
            return Err(SubspaceError::DimensionMismatch { expected: self.dim, found: u.ambient_dim() });
        }
        if u.basis.field() != &self.field {
            return Err(AlgError::FieldMismatch.into());
        }
        Ok(())
    }

    fn from_rows(&self, m: &Matrix) -> Subspace {
        let r = m.rref();
        let keep: Vec<usize> = (0..r.rank).collect();
        Subspace { basis: r.reduced.select_rows(&keep) }
    }

    pub fn zero(&self) -> Subspace {
        Subspace { basis: Matrix::zeros(&self.field, 0, self.dim) }
    }

    pub fn whole(&self) -> Subspace {
        Subspace { basis: Matrix::identity(&self.field, self.dim) }
    }

    pub fn span(&self, vectors: &[Vec<Scalar>]) -> Result<Subspace, SubspaceError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != self.dim) {
            return Err(SubspaceError::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(self.from_rows(&Matrix::from_rows(&self.field, vectors, self.dim)?))
    }

    pub fn span_i64(&self, vectors: &[Vec<i64>]) -> Result<Subspace, SubspaceError> {
        let rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.iter().map(|&x| self.field.from_i64(x)).collect()).collect();
        self.span(&rows)
    }

    /// `span{e_i}`.
    pub fn axis(&self, i: usize) -> Subspace {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        self.span(&[v]).expect("coordinate vector")
    }

    pub fn contains(&self, u: &Subspace, v: &[Scalar]) -> Result<bool, SubspaceError> {
        self.check(u)?;
        let w = self.span(&[v.to_vec()])?;
        Ok(self.try_join(u, &w)?.dim() == u.dim())
    }

    pub fn try_leq(&self, u: &Subspace, w: &Subspace) -> Result<bool, SubspaceError> {
        Ok(u.dim() <= w.dim() && self.try_join(u, w)?.dim() == w.dim())
    }

    pub fn try_join(&self, u: &Subspace, w: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.from_rows(&u.basis.vstack(&w.basis)?))
    }

    /// Intersection via the kernel of `[Uᵀ | −Wᵀ]`.
    pub fn try_meet(&self, u: &Subspace, w: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(u)?;
        self.check(w)?;
        if u.is_zero() || w.is_zero() {
            return Ok(self.zero());
        }
        let m = u.basis.transpose().hstack(&(-&w.basis).transpose())?;
        let p = u.dim();
        let vecs: Vec<Vec<Scalar>> = m
            .kernel()
            .iter()
            .map(|k| {
                let x = Matrix::from_rows(&self.field, &[k[..p].to_vec()], p).expect("kernel length");
                x.checked_mul(&u.basis).expect("shapes agree").row(0)
            })
            .collect();
        let out = self.span(&vecs)?;
        debug_assert_eq!(self.try_join(u, w)?.dim() + out.dim(), u.dim() + w.dim());
        Ok(out)
    }

    /// `U⊥ = {w : ⟨u,w⟩ = 0 for all u ∈ U}`.
    pub fn try_ortho(&self, u: &Subspace) -> Result<Subspace, SubspaceError> {
        self.check(u)?;
        let form = self.form.as_ref().ok_or(SubspaceError::MissingForm)?;
        let rows = u.basis.conj().checked_mul(form.gram())?;
        self.span(&rows.kernel())
    }

    /// Vectors of `a`'s basis completing a basis of `x`, in order.
    fn pivot_completion(&self, x: &Subspace, a: &Subspace) -> Vec<Vec<Scalar>> {
        let mut current = x.clone();
        let mut added = Vec::new();
        for v in a.vectors() {
            let next = self.join(&current, &self.span(&[v.clone()]).expect("ambient vector"));
            if next.dim() > current.dim() {
                added.push(v);
                current = next;
            }
        }
        added
    }

    /// Complement of `x` in `[b, a]` for `b ≤ x ≤ a`: `b ∨ (a ∧ x⊥)` on admitted
    /// spaces, `b ∨ span(pivot completion)` otherwise.
    pub fn complement_in(&self, b: &Subspace, x: &Subspace, a: &Subspace) -> Option<Subspace> {
        if !(self.leq(b, x) && self.leq(x, a)) {
            return None;
        }
        if self.admitted() {
            let xp = self.try_ortho(x).ok()?;
            return Some(self.join(b, &self.meet(a, &xp)));
        }
        let extra = self.pivot_completion(x, a);
        Some(self.join(b, &self.span(&extra).ok()?))
    }

    /// Common complement of `a` and `b` in `[0, t]`: the graph of a pairing of
    /// complements of `a ∧ b` in `a` and in `b`, plus a complement of `a ∨ b`
    /// in `t`. Exists exactly when `dim a = dim b`.
    pub fn common_complement(&self, a: &Subspace, b: &Subspace, t: &Subspace) -> Option<Subspace> {
        let s = self.join(a, b);
        if a.dim() != b.dim() || !self.leq(&s, t) {
            return None;
        }
        let m = self.meet(a, b);
        let a_part = self.pivot_completion(&m, a);
        let b_part = self.pivot_completion(&m, b);
        let f = &self.field;
        let graph: Vec<Vec<Scalar>> =
            a_part.iter().zip(&b_part).map(|(x, y)| x.iter().zip(y).map(|(p, q)| f.add(p, q)).collect()).collect();
        let rest = self.complement_in(&self.zero(), &s, t)?;
        let c = self.join(&self.span(&graph).ok()?, &rest);
        debug_assert!(self.direct_sum_is(a, &c, t) && self.direct_sum_is(b, &c, t));
        Some(c)
    }

    /// Basis orthogonal for the form, by Gram–Schmidt on the standard basis.
    /// Fails on an isotropic pivot.
    pub fn orthogonal_basis(&self) -> Option<Vec<Vec<Scalar>>> {
        let form = self.form.as_ref()?;
        let f = &self.field;
        let mut out: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..self.dim {
            let mut v = vec![f.zero(); self.dim];
            v[i] = f.one();
            for b in &out {
                let c = f.div(&form.value(b, &v).ok()?, &form.value(b, b).ok()?).ok()?;
                v = v.iter().zip(b).map(|(x, y)| f.sub(x, &f.mul(&c, y))).collect();
            }
            if f.is_zero(&form.value(&v, &v).ok()?) {
                return None;
            }
            out.push(v);
        }
        Some(out)
    }

    /// Every subspace, ordered by dimension then by basis codes, when the field
    /// is finite and the space has at most `vector_limit` vectors.
    pub fn enumerate(&self, vector_limit: u64) -> Option<Vec<Subspace>> {
        let q = self.field.order()?;
        let total = q.checked_pow(self.dim as u32).filter(|&t| t <= vector_limit)?;
        let lines: Vec<Subspace> = (1..total)
            .map(|c| self.span(&[vector_from_code(c, q, self.dim)]).expect("ambient vector"))
            .collect();
        let mut seen = std::collections::HashSet::new();
        let mut all = vec![self.zero()];
        seen.insert(self.zero());
        let mut frontier = vec![self.zero()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for u in &frontier {
                for l in &lines {
                    let w = self.join(u, l);
                    if w.dim() == u.dim() + 1 && seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort_by_key(|u| (u.dim(), self.codes(u)));
        Some(all)
    }

    fn codes(&self, u: &Subspace) -> Vec<u64> {
        let q = self.field.order().unwrap_or(0);
        u.vectors()
            .iter()
            .map(|v| {
                v.iter().rev().fold(0u64, |acc, s| match s {
                    Scalar::Fin(d) => acc * q + *d as u64,
                    _ => acc,
                })
            })
            .collect()
    }

    pub fn random_vector<G: Rng + ?Sized>(&self, rng: &mut G) -> Vec<Scalar> {
        (0..self.dim).map(|_| self.field.random(rng, RANDOM_ENTRY_BOUND)).collect()
    }

    pub fn random_subspace<G: Rng + ?Sized>(&self, rng: &mut G, dim: usize) -> Subspace {
        let vecs: Vec<Vec<Scalar>> = (0..dim).map(|_| self.random_vector(rng)).collect();
        self.span(&vecs).expect("ambient vectors")
    }

    /// Same subspace, presented by a random invertible recombination of its basis.
    pub fn rebase<G: Rng + ?Sized>(&self, u: &Subspace, rng: &mut G) -> Vec<Vec<Scalar>> {
        let k = u.dim();
        loop {
            let data = (0..k * k).map(|_| self.field.random(rng, RANDOM_ENTRY_BOUND)).collect();
            let t = Matrix::new(&self.field, k, k, data).expect("square");
            if t.rank() == k {
                return t.checked_mul(&u.basis).expect("shapes agree").row_vectors();
            }
        }
    }

    pub fn format_vector(&self, v: &[Scalar]) -> String {
        format!("({})", v.iter().map(|x| self.field.format(x)).collect::<Vec<_>>().join(", "))
    }
}

impl LatticeContext for InnerProductSpace {
    type Elem = Subspace;

    fn bottom(&self) -> Subspace {
        self.zero()
    }

    fn top(&self) -> Subspace {
        self.whole()
    }

    fn leq(&self, a: &Subspace, b: &Subspace) -> bool {
        self.try_leq(a, b).expect("subspaces of this space")
    }

    fn meet(&self, a: &Subspace, b: &Subspace) -> Subspace {
        self.try_meet(a, b).expect("subspaces of this space")
    }

    fn join(&self, a: &Subspace, b: &Subspace) -> Subspace {
        self.try_join(a, b).expect("subspaces of this space")
    }

    fn ortho(&self, a: &Subspace) -> Option<Subspace> {
        self.try_ortho(a).ok()
    }

    fn is_mol(&self) -> bool {
        self.admitted()
    }

    fn describe(&self, a: &Subspace) -> String {
        let vs: Vec<String> = a.vectors().iter().map(|v| self.format_vector(v)).collect();
        format!("span{{{}}}", vs.join(", "))
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Subspace {
        let d = rng.gen_range(0..=self.dim);
        self.random_subspace(rng, d)
    }

    fn height_of(&self, a: &Subspace) -> usize {
        a.dim()
    }

    fn elements(&self) -> Option<Vec<Subspace>> {
        self.enumerate(4096)
    }

    fn is_bottom(&self, a: &Subspace) -> bool {
        a.is_zero()
    }

    fn complement_in_interval(&self, b: &Subspace, x: &Subspace, a: &Subspace) -> Option<Subspace> {
        self.complement_in(b, x, a)
    }

    fn axis_in(&self, a: &Subspace, b: &Subspace, t: &Subspace) -> Option<Subspace> {
        self.common_complement(a, b, t)
    }

    /// `d = (a ∧ b) ⊕ span(w)` with `w` the first basis vectors of `b` completing `a`.
    fn subperspective_axis(&self, a: &Subspace, b: &Subspace) -> Option<(Subspace, Subspace)> {
        let m = self.meet(a, b);
        let need = a.dim() - m.dim();
        let extra = self.pivot_completion(a, b);
        if extra.len() < need {
            return None;
        }
        let d = self.join(&m, &self.span(&extra[..need]).ok()?);
        let c = self.common_complement(a, &d, &self.join(a, &d))?;
        Some((d, c))
    }

    /// `d` spanned by the leading basis vectors of `b`.
    fn subperspective(&self, a: &Subspace, b: &Subspace) -> Option<(Subspace, Subspace)> {
        if a.dim() > b.dim() {
            return None;
        }
        let idx: Vec<usize> = (0..a.dim()).collect();
        let d = self.from_rows(&b.basis.select_rows(&idx));
        let c = self.perspectivity(a, &d)?;
        Some((d, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn q3() -> InnerProductSpace {
        InnerProductSpace::dot(&Field::rationals(), 3)
    }

    #[test]
    fn basic_operations_over_q3() {
        let v = q3();
        assert_eq!(v.ortho(&v.whole()).unwrap(), v.zero());
        assert_eq!(v.ortho(&v.axis(0)).unwrap(), v.span_i64(&[vec![0, 1, 0], vec![0, 0, 1]]).unwrap());
        let u = v.span_i64(&[vec![1, 1, 0]]).unwrap();
        let w = v.span_i64(&[vec![1, -1, 0]]).unwrap();
        assert!(v.meet(&u, &w).is_zero());
        assert_eq!(v.join(&u, &w), v.join(&v.axis(0), &v.axis(1)));
        assert!(v.is_mol());
    }

    #[test]
    fn canonical_form_ignores_presentation() {
        let v = q3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = v.random_element(&mut rng);
            let b = v.random_element(&mut rng);
            let a2 = v.span(&v.rebase(&a, &mut rng)).unwrap();
            let b2 = v.span(&v.rebase(&b, &mut rng)).unwrap();
            assert_eq!(a, a2);
            assert_eq!(v.meet(&a, &b), v.meet(&a2, &b2));
            assert_eq!(v.join(&a, &b), v.join(&a2, &b2));
            assert_eq!(v.ortho(&a), v.ortho(&a2));
        }
    }

    #[test]
    fn common_complements_exist_exactly_for_equal_dimensions() {
        let v = InnerProductSpace::bare(&Field::gf(2), 3);
        let all = v.elements().unwrap();
        assert_eq!(all.len(), 16);
        for a in &all {
            for b in &all {
                let c = v.perspectivity(a, b);
                assert_eq!(c.is_some(), a.dim() == b.dim());
                if let Some(c) = c {
                    assert!(v.direct_sum_is(a, &c, &v.whole()) && v.direct_sum_is(b, &c, &v.whole()));
                }
            }
        }
    }

    #[test]
    fn complement_choosers() {
        let v = q3();
        let b = v.axis(0);
        let x = v.join(&b, &v.axis(1));
        let y = v.complement_in(&b, &x, &v.whole()).unwrap();
        assert_eq!(y, v.join(&b, &v.axis(2)));
        let bare = InnerProductSpace::bare(&Field::rationals(), 3);
        let u = bare.span_i64(&[vec![1, 1, 1]]).unwrap();
        let c = bare.complement_in(&bare.zero(), &u, &bare.whole()).unwrap();
        assert!(bare.direct_sum_is(&u, &c, &bare.whole()));
        assert_eq!(c, bare.join(&bare.axis(0), &bare.axis(1)));
    }

    #[test]
    fn gram_schmidt_for_a_skew_form() {
        let f = Field::rationals();
        let g = Matrix::from_i64_rows(&f, &[vec![2, 1], vec![1, 2]]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = InnerProductSpace::new(HermitianForm::new(g).unwrap(), 0, &mut rng);
        let b = v.orthogonal_basis().unwrap();
        assert!(f.is_zero(&v.form().unwrap().value(&b[0], &b[1]).unwrap()));
        assert!(InnerProductSpace::dot(&Field::gf(3), 3).orthogonal_basis().is_some());
        let hyperbolic = HermitianForm::new(Matrix::from_i64_rows(&f, &[vec![0, 1], vec![1, 0]])).unwrap();
        assert!(InnerProductSpace::new(hyperbolic, 0, &mut rng).orthogonal_basis().is_none());
    }
}
