use rand_chacha::ChaCha8Rng;

use super::{InnerProductSpace, Subspace};
use crate::exactalg::Anisotropy;
use crate::latcore::{verify_lattice_axioms, verify_mol, AxiomReport, LatError, LatticeContext, MolReport};

#[derive(Clone, Debug)]
pub struct MolContextReport {
    pub anisotropy: Option<Anisotropy>,
    pub overridden: bool,
    pub mol: MolReport,
    pub modular: AxiomReport,
    /// `(U ∨ W)⊥ = U⊥ ∧ W⊥` on the tuple set.
    pub de_morgan: bool,
    /// `dim(U ∨ W) + dim(U ∧ W) = dim U + dim W` on the tuple set.
    pub rank_identity: bool,
    /// Line spanned by an isotropic vector, when one was found.
    pub isotropic_witness: Option<Subspace>,
    pub exhaustive: bool,
}

impl MolContextReport {
    pub fn passed(&self) -> bool {
        self.mol.passed() && self.modular.passed && self.de_morgan && self.rank_identity && self.isotropic_witness.is_none()
    }
}

/// MOL axioms, modularity, De Morgan and the rank identity, exhaustively on
/// small finite spaces and on `samples` random subspaces (pairs, triples)
/// otherwise.
pub fn verify_mol_context(
    space: &InnerProductSpace,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MolContextReport, LatError> {
    let mol = verify_mol(space, samples, rng)?;
    let modular = verify_lattice_axioms(space, samples, rng).modular;
    let pairs: Vec<(Subspace, Subspace)> = match space.elements() {
        Some(all) if all.len() <= 64 => {
            all.iter().flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone()))).collect()
        }
        _ => (0..samples).map(|_| (space.random_element(rng), space.random_element(rng))).collect(),
    };
    let o = |u: &Subspace| space.ortho(u).expect("form present");
    let de_morgan = pairs.iter().all(|(u, w)| o(&space.join(u, w)) == space.meet(&o(u), &o(w)));
    let rank_identity =
        pairs.iter().all(|(u, w)| space.join(u, w).dim() + space.meet(u, w).dim() == u.dim() + w.dim());
    let isotropic_witness = match space.anisotropy() {
        Some(Anisotropy::Isotropic(v)) => Some(space.span(&[v.clone()]).expect("ambient vector")),
        _ => None,
    };
    Ok(MolContextReport {
        anisotropy: space.anisotropy().cloned(),
        overridden: space.overridden(),
        exhaustive: mol.axioms.iter().all(|a| a.exhaustive),
        mol,
        modular,
        de_morgan,
        rank_identity,
        isotropic_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, HermitianForm, Involution, Matrix};
    use rand::SeedableRng;

    #[test]
    fn rational_dot_form_passes_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = InnerProductSpace::dot(&Field::rationals(), 3);
        let r = verify_mol_context(&v, 60, &mut rng).unwrap();
        assert_eq!(r.anisotropy, Some(Anisotropy::CertifiedByMinors));
        assert!(r.passed() && !r.exhaustive);
    }

    #[test]
    fn gf3_cubed_is_isotropic_at_the_all_ones_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = InnerProductSpace::dot(&Field::gf(3), 3);
        let r = verify_mol_context(&v, 0, &mut rng).unwrap();
        assert!(!r.passed() && r.exhaustive);
        let ones = v.span_i64(&[vec![1, 1, 1]]).unwrap();
        assert_eq!(r.isotropic_witness, Some(ones.clone()));
        let failed = r.mol.failed().unwrap();
        assert_eq!(failed.name, "x meet x-perp is bottom");
        assert_eq!(failed.witness.as_ref().unwrap()[0], v.describe(&ones));
        // oracle: (1,1,1) lies in its own orthogonal
        assert!(v.leq(&ones, &v.ortho(&ones).unwrap()));
        assert!(r.de_morgan && r.rank_identity && r.modular.passed);
    }

    #[test]
    fn gaussian_rationals_with_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = Field::quadratic(-1, Involution::Conjugation).unwrap();
        let v = InnerProductSpace::new(HermitianForm::new(Matrix::identity(&f, 2)).unwrap(), 0, &mut rng);
        let r = verify_mol_context(&v, 40, &mut rng).unwrap();
        assert!(r.anisotropy.as_ref().unwrap().is_certified());
        assert!(r.passed());
    }

    #[test]
    fn bare_space_has_no_orthocomplement() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = InnerProductSpace::bare(&Field::gf(2), 2);
        assert!(matches!(verify_mol_context(&v, 0, &mut rng), Err(LatError::MissingOrthocomplement)));
    }
}
