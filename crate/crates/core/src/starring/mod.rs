//! Involutive rings and the Rickart calculus.

mod catalog;
mod finite;
mod ideals;
mod matring;
mod rickart;
mod verify;
pub mod zorder;

pub use catalog::{catalog_names, catalog_ring, CatalogEntry, RING_CATALOG};
pub use finite::{FiniteRing, TableData};
pub use ideals::{
    additive_generators, corner_ring, full_ideal, ideal_sum, ideal_summary, is_star_ideal, left_action_injective,
    principal_ideal, q_closed, quotient, star_closure, subring_closure, zero_ideal, ActionVerdict, Ideal,
    IdealSummary, SubRing,
};
pub use matring::MatrixRing;
pub use rickart::{
    covering_projection, is_idempotent, is_projection, left_projection, left_right_projections, rickart_inverse,
    right_projection,
};
pub use verify::{
    is_star_regular, is_star_regular_finite, is_star_regular_matrix, relative_inverse_candidates,
    unique_relative_inverse, verify_finite_ring, verify_star_ring, AxiomCheck, RegularityClause, RegularityMode,
    RegularityVerdict, StarRingReport,
};

use std::fmt::Debug;
use std::hash::Hash;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::AlgError;

/// Default bound on carriers that are enumerated exhaustively.
pub const DEFAULT_CARRIER_BOUND: usize = 6561;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("no quasi-inverse exists at {0}")]
    NotRegularAt(String),
    #[error("{0} is not a projection")]
    NotAProjection(String),
    #[error("relative inverse of {element} is not unique: {first} and {second} both qualify")]
    UniquenessViolation { element: String, first: String, second: String },
    #[error("carrier of {size} elements exceeds the bound {bound}")]
    BackendTooLarge { size: usize, bound: usize },
    #[error("closure exceeded the budget of {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("ring has no unit")]
    NotUnital,
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("invalid ring: {0}")]
    Invalid(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// A ring with involution and exact element arithmetic.
pub trait StarRing {
    type Elem: Clone + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    /// Deterministic `y` with `xyx = x`.
    fn quasi_inverse(&self, x: &Self::Elem) -> Result<Self::Elem, RingError>;
    /// Uniformly drawn element (or bounded-entry element for infinite rings).
    fn random_element(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
    fn describe(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Carrier in canonical order, finite rings only.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn cardinality(&self) -> Option<usize> {
        None
    }

    fn mul3(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(a, b), c)
    }
}
