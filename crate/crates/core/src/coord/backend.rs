use rand_chacha::ChaCha8Rng;

use crate::exactalg::{vector_from_code, FieldSpec, Matrix, Scalar};
use crate::latcore::{FiniteLattice, IdealLattice, LatticeContext};
use crate::starring::{FiniteRing, StarRing};
use crate::subspace::{InnerProductSpace, Subspace, RANDOM_ENTRY_BOUND};

/// Carrier bound for enumerating every endomorphism of a module.
pub const ENDO_ENUMERATION_LIMIT: u64 = 4096;

/// A module `M` together with its lattice of submodules and exact
/// arithmetic on `End(M)`. Morphisms between summands are stored as
/// endomorphisms of `M` that vanish on the other summands.
pub trait ModuleBackend {
    type Lat: LatticeContext;
    type Endo: Clone + Eq + std::hash::Hash + std::fmt::Debug;

    fn lattice(&self) -> &Self::Lat;
    fn zero(&self) -> Self::Endo;
    fn identity(&self) -> Self::Endo;
    fn add(&self, a: &Self::Endo, b: &Self::Endo) -> Self::Endo;
    fn neg(&self, a: &Self::Endo) -> Self::Endo;
    /// `a ∘ b`.
    fn compose(&self, a: &Self::Endo, b: &Self::Endo) -> Self::Endo;
    /// `a[M]`.
    fn image(&self, a: &Self::Endo) -> Elem<Self>;
    /// The idempotent with image `target` and kernel `kernel`, when `M = target ⊕ kernel`.
    fn projection_onto(&self, target: &Elem<Self>, kernel: &Elem<Self>) -> Option<Self::Endo>;
    /// Involution on `End(M)`: the ring involution, or adjunction for the form.
    fn star(&self, a: &Self::Endo) -> Option<Self::Endo>;
    /// Every endomorphism, when there are at most `ENDO_ENUMERATION_LIMIT`.
    fn endos(&self) -> Option<Vec<Self::Endo>>;
    fn random_endo(&self, rng: &mut ChaCha8Rng) -> Self::Endo;
    fn describe_endo(&self, a: &Self::Endo) -> String;

    /// Basis of `End(M)` over the prime field, where `End(M)` is a matrix algebra.
    fn endo_basis(&self) -> Option<Vec<Self::Endo>> {
        None
    }

    /// Rank of a family of endomorphisms over the prime field.
    fn endo_rank(&self, _family: &[Self::Endo]) -> Option<usize> {
        None
    }

    fn sub(&self, a: &Self::Endo, b: &Self::Endo) -> Self::Endo {
        self.add(a, &self.neg(b))
    }

    fn compose3(&self, a: &Self::Endo, b: &Self::Endo, c: &Self::Endo) -> Self::Endo {
        self.compose(a, &self.compose(b, c))
    }
}

pub type Elem<B> = <<B as ModuleBackend>::Lat as LatticeContext>::Elem;

/// `R_R` for a finite unital ring: endomorphisms are left multiplications,
/// submodules the principal right ideals.
pub struct RingModule<'a> {
    pub ring: &'a FiniteRing,
    pub ideals: &'a IdealLattice,
}

impl<'a> RingModule<'a> {
    pub fn new(ring: &'a FiniteRing, ideals: &'a IdealLattice) -> RingModule<'a> {
        RingModule { ring, ideals }
    }
}

impl ModuleBackend for RingModule<'_> {
    type Lat = FiniteLattice;
    type Endo = u32;

    fn lattice(&self) -> &FiniteLattice {
        &self.ideals.lattice
    }

    fn zero(&self) -> u32 {
        self.ring.zero()
    }

    fn identity(&self) -> u32 {
        self.ring.one().expect("unital ring")
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.ring.add(a, b)
    }

    fn neg(&self, a: &u32) -> u32 {
        self.ring.neg(a)
    }

    fn compose(&self, a: &u32, b: &u32) -> u32 {
        self.ring.mul(a, b)
    }

    fn image(&self, a: &u32) -> u32 {
        self.ideals.element(*a)
    }

    fn projection_onto(&self, target: &u32, kernel: &u32) -> Option<u32> {
        let one = self.identity();
        let (t, k) = (&self.ideals.sets[*target as usize], &self.ideals.sets[*kernel as usize]);
        // 1 = e + (1 − e) with e ∈ target, 1 − e ∈ kernel; unique for a direct sum
        if !self.lattice().direct_sum_is(target, kernel, &self.lattice().top()) {
            return None;
        }
        t.elements().into_iter().find(|e| k.contains(self.ring.sub(&one, e)))
    }

    fn star(&self, a: &u32) -> Option<u32> {
        Some(self.ring.star(a))
    }

    fn endos(&self) -> Option<Vec<u32>> {
        (u64::from(self.ring.size()) <= ENDO_ENUMERATION_LIMIT).then(|| self.ring.carrier().collect())
    }

    fn random_endo(&self, rng: &mut ChaCha8Rng) -> u32 {
        self.ring.random_element(rng)
    }

    fn describe_endo(&self, a: &u32) -> String {
        self.ring.describe(a)
    }
}

impl ModuleBackend for InnerProductSpace {
    type Lat = InnerProductSpace;
    type Endo = Matrix;

    fn lattice(&self) -> &InnerProductSpace {
        self
    }

    fn zero(&self) -> Matrix {
        Matrix::zeros(self.field(), self.dim(), self.dim())
    }

    fn identity(&self) -> Matrix {
        Matrix::identity(self.field(), self.dim())
    }

    fn add(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.checked_add(b).expect("endomorphisms of one space")
    }

    fn neg(&self, a: &Matrix) -> Matrix {
        a.scale(&self.field().neg(&self.field().one()))
    }

    fn compose(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.checked_mul(b).expect("endomorphisms of one space")
    }

    fn image(&self, a: &Matrix) -> Subspace {
        self.span(&a.col_vectors()).expect("columns of an endomorphism")
    }

    fn projection_onto(&self, target: &Subspace, kernel: &Subspace) -> Option<Matrix> {
        if target.dim() + kernel.dim() != self.dim() || !self.disjoint(target, kernel) {
            return None;
        }
        let zero = vec![self.field().zero(); self.dim()];
        let images: Vec<Vec<Scalar>> =
            target.vectors().into_iter().chain(std::iter::repeat(zero).take(kernel.dim())).collect();
        let domain: Vec<Vec<Scalar>> = target.vectors().into_iter().chain(kernel.vectors()).collect();
        linear_map(self, &domain, &images)
    }

    fn star(&self, a: &Matrix) -> Option<Matrix> {
        self.form().map(|h| h.adjoint(a).expect("endomorphism of the space"))
    }

    fn endos(&self) -> Option<Vec<Matrix>> {
        let q = self.field().order()?;
        let m = self.dim();
        let count = q.checked_pow((m * m) as u32).filter(|&c| c <= ENDO_ENUMERATION_LIMIT)?;
        Some(
            (0..count)
                .map(|c| Matrix::new(self.field(), m, m, vector_from_code(c, q, m * m)).expect("m·m entries"))
                .collect(),
        )
    }

    fn random_endo(&self, rng: &mut ChaCha8Rng) -> Matrix {
        let m = self.dim();
        let data = (0..m * m).map(|_| self.field().random(rng, RANDOM_ENTRY_BOUND)).collect();
        Matrix::new(self.field(), m, m, data).expect("m·m entries")
    }

    fn endo_basis(&self) -> Option<Vec<Matrix>> {
        let m = self.dim();
        matches!(self.field().spec(), FieldSpec::Rationals | FieldSpec::Galois { k: 1, .. })
            .then(|| (0..m * m).map(|t| Matrix::unit(self.field(), m, t / m, t % m)).collect())
    }

    fn endo_rank(&self, family: &[Matrix]) -> Option<usize> {
        let rows: Vec<Vec<Scalar>> = family.iter().map(|a| a.data().to_vec()).collect();
        Some(Matrix::from_rows(self.field(), &rows, self.dim() * self.dim()).ok()?.rank())
    }

    fn describe_endo(&self, a: &Matrix) -> String {
        let rows: Vec<String> = a.row_vectors().iter().map(|r| self.format_vector(r)).collect();
        format!("[{}]", rows.join(", "))
    }
}

/// The endomorphism sending `domain[t] ↦ images[t]` and vanishing on the
/// pivot completion of the domain; `None` if the domain vectors are dependent.
pub fn linear_map(space: &InnerProductSpace, domain: &[Vec<Scalar>], images: &[Vec<Scalar>]) -> Option<Matrix> {
    let f = space.field();
    let m = space.dim();
    let u = space.span(domain).ok()?;
    if u.dim() != domain.len() {
        return None;
    }
    let mut cols: Vec<Vec<Scalar>> = domain.to_vec();
    let mut targets: Vec<Vec<Scalar>> = images.to_vec();
    let mut acc = u;
    for i in 0..m {
        let e = space.axis(i);
        if !space.leq(&e, &acc) {
            acc = space.join(&acc, &e);
            cols.push(e.vectors().remove(0));
            targets.push(vec![f.zero(); m]);
        }
    }
    let p = Matrix::from_rows(f, &cols, m).ok()?.transpose();
    let y = Matrix::from_rows(f, &targets, m).ok()?.transpose();
    y.checked_mul(&p.inverse().ok()?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::latcore::principal_right_ideal_lattice;
    use crate::starring::catalog_ring;

    #[test]
    fn subspace_projection_is_idempotent() {
        let v = InnerProductSpace::dot(&Field::rationals(), 3);
        let t = v.span_i64(&[vec![1, 1, 0]]).unwrap();
        let k = v.join(&v.axis(1), &v.axis(2));
        let p = v.projection_onto(&t, &k).unwrap();
        assert_eq!(v.compose(&p, &p), p);
        assert_eq!(v.image(&p), t);
        assert!(v.projection_onto(&t, &v.axis(1)).is_none());
    }

    #[test]
    fn ring_projection_decomposes_one() {
        let r = catalog_ring("m3_gf2").unwrap();
        let ideals = principal_right_ideal_lattice(&r, 6561).unwrap();
        let b = RingModule::new(&r, &ideals);
        let l = b.lattice();
        let atom = l.atoms()[0];
        let k = l.carrier().find(|&x| l.direct_sum_is(&atom, &x, &l.top())).unwrap();
        let e = b.projection_onto(&atom, &k).unwrap();
        assert_eq!(r.mul(&e, &e), e);
        assert_eq!(b.image(&e), atom);
        assert_eq!(b.image(&r.sub(&b.identity(), &e)), k);
    }

    #[test]
    fn small_spaces_enumerate_their_endomorphisms() {
        assert_eq!(InnerProductSpace::bare(&Field::gf(2), 3).endos().unwrap().len(), 512);
        assert!(InnerProductSpace::dot(&Field::rationals(), 2).endos().is_none());
    }
}
