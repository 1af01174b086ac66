//! Lattices: a uniform context interface, finite lattices, principal right
//! ideal lattices of finite rings, congruences and homomorphisms.

mod check;
mod finite;
mod hom;
mod ideal;

pub use check::{
    check_distributive_sample, verify_lattice_axioms, verify_mol, AxiomReport, LatticeReport, MolReport, Witness,
};
pub use finite::{Congruence, CongruenceSummary, FiniteLattice};
pub use hom::{lift_complement, HomReport, LatticeHom};
pub use ideal::{
    corner_interval_iso, principal_left_ideal_lattice, principal_right_ideal_lattice, quotient_hom, star_duality,
    CornerIso, DualityReport, IdealLattice, Side,
};

use std::fmt::Debug;
use std::hash::Hash;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::starring::RingError;

/// Congruences are computed for lattices up to this many elements.
pub const CONGRUENCE_BOUND: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatError {
    #[error("lattice has no orthocomplement")]
    MissingOrthocomplement,
    #[error("not a lattice: {0}")]
    NotALattice(String),
    #[error("lattice of {size} elements exceeds the bound {bound}")]
    BackendTooLarge { size: usize, bound: usize },
    #[error("no lift of the complement exists: {0}")]
    NoLift(String),
    #[error("invalid lattice data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Bounded lattice with exact operations, optionally orthocomplemented.
///
/// `ortho` is exposed whenever the backend carries one; `is_mol` says whether
/// it has been admitted as an orthocomplementation (MOL axioms verified or
/// guaranteed), which is what complement choosers rely on.
pub trait LatticeContext {
    type Elem: Clone + Eq + Hash + Debug;

    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn ortho(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_mol(&self) -> bool;
    fn describe(&self, a: &Self::Elem) -> String;
    fn random_element(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    /// Length of the longest chain in `[0, a]`.
    fn height_of(&self, a: &Self::Elem) -> usize;

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn is_bottom(&self, a: &Self::Elem) -> bool {
        *a == self.bottom()
    }

    fn height(&self) -> usize {
        self.height_of(&self.top())
    }

    fn join_all(&self, family: &[Self::Elem]) -> Self::Elem {
        family.iter().fold(self.bottom(), |acc, x| self.join(&acc, x))
    }

    /// `x ∧ y = 0`, so that `x ∨ y` is the direct sum `x ⊕ y`.
    fn disjoint(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.is_bottom(&self.meet(x, y))
    }

    /// `x ⊕ y = s`.
    fn direct_sum_is(&self, x: &Self::Elem, y: &Self::Elem, s: &Self::Elem) -> bool {
        self.disjoint(x, y) && self.join(x, y) == *s
    }

    /// Independence of a finite family, decided by the modular criterion
    /// `(a_0 ∨ … ∨ a_{i−1}) ∧ a_i = 0` for every `i`.
    fn independent(&self, family: &[Self::Elem]) -> bool {
        let mut acc = self.bottom();
        for a in family {
            if !self.disjoint(&acc, a) {
                return false;
            }
            acc = self.join(&acc, a);
        }
        true
    }

    /// Deterministic `y` with `x ∧ y = b` and `x ∨ y = a`, for `b ≤ x ≤ a`.
    /// With an admitted orthocomplement this is `b ∨ (a ∧ x⊥)`; otherwise the
    /// first solution in canonical element order.
    fn complement_in_interval(&self, b: &Self::Elem, x: &Self::Elem, a: &Self::Elem) -> Option<Self::Elem> {
        if !(self.leq(b, x) && self.leq(x, a)) {
            return None;
        }
        let ok = |y: &Self::Elem| self.meet(x, y) == *b && self.join(x, y) == *a;
        if self.is_mol() {
            if let Some(xp) = self.ortho(x) {
                let y = self.join(b, &self.meet(a, &xp));
                if ok(&y) {
                    return Some(y);
                }
            }
        }
        self.elements()?.into_iter().find(|y| self.leq(b, y) && self.leq(y, a) && ok(y))
    }

    /// Common complement of `a` and `b` in `[0, t]` (requires `a ∨ b ≤ t`).
    fn axis_in(&self, a: &Self::Elem, b: &Self::Elem, t: &Self::Elem) -> Option<Self::Elem> {
        if !self.leq(&self.join(a, b), t) {
            return None;
        }
        self.elements()?
            .into_iter()
            .find(|c| self.leq(c, t) && self.direct_sum_is(a, c, t) && self.direct_sum_is(b, c, t))
    }

    /// Perspectivity `a ∼ b`: a common complement in the whole lattice.
    fn perspectivity(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.axis_in(a, b, &self.top())
    }

    /// Some `d ≤ b` with a common complement `c` of `a` and `d` in `[0, a ∨ d]`,
    /// returned as `(d, c)`.
    fn subperspective_axis(&self, a: &Self::Elem, b: &Self::Elem) -> Option<(Self::Elem, Self::Elem)> {
        let h = self.height_of(a);
        self.elements()?
            .into_iter()
            .filter(|d| self.leq(d, b) && self.height_of(d) == h)
            .find_map(|d| self.axis_in(a, &d, &self.join(a, &d)).map(|c| (d, c)))
    }

    /// Subperspectivity `a ≲ b`: some `d ≤ b` with `a ∼ d`, returned with the axis.
    fn subperspective(&self, a: &Self::Elem, b: &Self::Elem) -> Option<(Self::Elem, Self::Elem)> {
        self.elements()?
            .into_iter()
            .filter(|d| self.leq(d, b))
            .find_map(|d| self.perspectivity(a, &d).map(|c| (d, c)))
    }
}
