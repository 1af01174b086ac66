//! Graphs of morphisms, decomposition systems of stable frames, coefficient
//! and matrix rings, the maps θ, η, ρ, adjointness via orthogonal graphs and
//! representations extended from ideals.

mod adjoint;
mod backend;
mod extend;
mod theta;

pub use adjoint::{adjoint_candidates, adjoint_checks, drag_check, epsilon_adjoint_identities, ring_adjoint_checks, AdjointVerdicts, RingAdjointVerdicts};
pub use backend::{linear_map, Elem, ModuleBackend, RingModule, ENDO_ENUMERATION_LIMIT};
pub use extend::{extend_ideal_representation, ExtendedRepresentation, ExtensionReport};
pub use theta::{
    assemble, induced_system, theta, verify_eta, verify_rho, verify_theta, Components, Eta, MapReport, Mode, RhoReport,
};

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::frames::{image, verify_frame, Frame, FrameError, Level};
use crate::latcore::{LatError, LatticeContext};
use crate::starring::RingError;
use crate::subspace::SubspaceError;

/// Sample count for backends that cannot be enumerated.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Error)]
pub enum CoordError {
    #[error("not a complement: {0}")]
    NotAComplement(String),
    #[error("decomposition system condition {0} fails")]
    ConditionFailed(String),
    #[error("format too small: n = {n}, need n ≥ 3")]
    FormatTooSmall { n: usize },
    #[error("ring has no unit")]
    NotUnital,
    #[error("image of the frame is not stable")]
    FrameImageNotStable,
    #[error("involution not preserved at r = {witness}")]
    StarPreservationFailed { witness: String },
    #[error("summands are not orthogonal")]
    SummandsNotOrthogonal,
    #[error("restrictions disagree: {0}")]
    IncompatibleRestrictions(String),
    #[error("not a *-homomorphism: {0}")]
    NotAStarHomomorphism(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Lattice(#[from] LatError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// `M = ⊕ M_i` with the projections `π_i` (idempotents with `Σ π_i = 1`).
#[derive(Clone, Debug)]
pub struct Decomposition<B: ModuleBackend> {
    pub summands: Vec<Elem<B>>,
    pub proj: Vec<B::Endo>,
}

impl<B: ModuleBackend> Decomposition<B> {
    pub fn new(b: &B, summands: Vec<Elem<B>>) -> Result<Decomposition<B>, CoordError> {
        let l = b.lattice();
        if !l.independent(&summands) || l.join_all(&summands) != l.top() {
            return Err(CoordError::NotAComplement("summands do not decompose the module".into()));
        }
        let proj = (0..summands.len())
            .map(|i| {
                let rest: Vec<Elem<B>> = summands.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, x)| x.clone()).collect();
                b.projection_onto(&summands[i], &l.join_all(&rest))
                    .ok_or_else(|| CoordError::NotAComplement(format!("no projection onto summand {i}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Decomposition { summands, proj })
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// `π_j ∘ φ ∘ π_i`, the `(j, i)` component of `φ`.
    pub fn component(&self, b: &B, phi: &B::Endo, j: usize, i: usize) -> B::Endo {
        b.compose3(&self.proj[j], phi, &self.proj[i])
    }

    /// `φ` maps `M_i` into `M_j` and vanishes on the other summands.
    pub fn is_morphism(&self, b: &B, phi: &B::Endo, j: usize, i: usize) -> bool {
        self.component(b, phi, j, i) == *phi
    }
}

/// `Γ(φ) = {x − φx : x ∈ M_i}`.
pub fn graph<B: ModuleBackend>(b: &B, d: &Decomposition<B>, i: usize, phi: &B::Endo) -> Elem<B> {
    b.image(&b.compose(&b.sub(&b.identity(), phi), &d.proj[i]))
}

/// The morphism `M_i → M_j` (zero on the other summands) whose graph is `g`,
/// for `g` a relative complement of `M_j` in `[0, M_i + M_j]`.
pub fn morphism_from_graph<B: ModuleBackend>(
    b: &B,
    d: &Decomposition<B>,
    i: usize,
    j: usize,
    g: &Elem<B>,
) -> Result<B::Endo, CoordError> {
    let l = b.lattice();
    let (mi, mj) = (&d.summands[i], &d.summands[j]);
    if i == j || !l.direct_sum_is(g, mj, &l.join(mi, mj)) {
        return Err(CoordError::NotAComplement(format!("{} against summand {j}", l.describe(g))));
    }
    let others: Vec<Elem<B>> = (0..d.len()).filter(|&t| t != i && t != j).map(|t| d.summands[t].clone()).collect();
    let kernel = l.join(g, &l.join_all(&others));
    let q = b
        .projection_onto(mj, &kernel)
        .ok_or_else(|| CoordError::NotAComplement(format!("{} does not split off summand {j}", l.describe(g))))?;
    Ok(b.compose(&q, &d.proj[i]))
}

/// Sublattice `L` holding the frame, as a membership test.
#[derive(Clone, Debug)]
pub enum Sublattice<E> {
    Full,
    Elements(Vec<E>),
}

impl<E: PartialEq> Sublattice<E> {
    pub fn contains(&self, x: &E) -> bool {
        match self {
            Sublattice::Full => true,
            Sublattice::Elements(v) => v.contains(x),
        }
    }
}

/// Decomposition system of a stable frame: `ε_ji` keyed `(j, i)`, defined
/// whenever `i = j`, `j < n` or `i < n`; `z_ij` keyed `(i, j)` for tails `i`.
#[derive(Clone, Debug)]
pub struct DecompositionSystem<B: ModuleBackend> {
    pub n: usize,
    pub k: usize,
    pub decomposition: Decomposition<B>,
    pub eps: BTreeMap<(usize, usize), B::Endo>,
    pub z: BTreeMap<(usize, usize), Elem<B>>,
    pub sublattice: Sublattice<Elem<B>>,
    pub frame: Frame<Elem<B>>,
}

impl<B: ModuleBackend> DecompositionSystem<B> {
    pub fn len(&self) -> usize {
        self.n + self.k
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn eps(&self, j: usize, i: usize) -> &B::Endo {
        &self.eps[&(j, i)]
    }

    pub fn proj(&self, i: usize) -> &B::Endo {
        &self.decomposition.proj[i]
    }

    /// `φ ∈ End(M_0)` lies in `C`: `Γ(ε_10 ∘ φ) ∈ L`. Needs `n ≥ 2`.
    pub fn in_coefficient_ring(&self, b: &B, phi: &B::Endo) -> bool {
        self.n >= 2
            && self.decomposition.is_morphism(b, phi, 0, 0)
            && self.sublattice.contains(&graph(b, &self.decomposition, 0, &b.compose(self.eps(1, 0), phi)))
    }

    /// `φ ∈ End(M)` lies in the matrix ring: every `ε_0j ∘ φ_ji ∘ ε_i0 ∈ C`.
    pub fn in_matrix_ring(&self, b: &B, phi: &B::Endo) -> bool {
        (0..self.len()).all(|j| {
            (0..self.len()).all(|i| {
                let c = self.decomposition.component(b, phi, j, i);
                self.in_coefficient_ring(b, &b.compose3(self.eps(0, j), &c, self.eps(i, 0)))
            })
        })
    }
}

/// Build the decomposition system of a stable frame. `ε_ji` for `j < n`
/// comes from the axis `a_ji` (or `a_ij`); the left inverse `ε_ij` of an
/// embedding of a tail `i` has graph `a_ji ∨ z_ij`, so it vanishes on `z_ij`.
pub fn decomposition_system_of_frame<B: ModuleBackend>(
    b: &B,
    frame: &Frame<Elem<B>>,
    sublattice: Sublattice<Elem<B>>,
) -> Result<DecompositionSystem<B>, CoordError> {
    let l = b.lattice();
    if !verify_frame(l, frame, Level::Stable).passed() {
        return Err(FrameError::HypothesisViolated("frame is not stable".into()).into());
    }
    let d = Decomposition::new(b, frame.a.clone())?;
    let (n, len) = (frame.n, frame.len());
    let mut eps = BTreeMap::new();
    for i in 0..len {
        eps.insert((i, i), d.proj[i].clone());
    }
    for j in 0..n {
        for i in 0..len {
            if i == j {
                continue;
            }
            let axis = frame.axis(j.min(i), j.max(i)).expect("stable frame has every axis");
            eps.insert((j, i), morphism_from_graph(b, &d, i, j, axis)?);
            if i >= n {
                let zg = l.join(axis, &frame.z[&(i, j)]);
                eps.insert((i, j), morphism_from_graph(b, &d, j, i, &zg)?);
            }
        }
    }
    let z = frame.z.clone();
    Ok(DecompositionSystem { n, k: frame.k, decomposition: d, eps, z, sublattice, frame: frame.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionFailure {
    pub condition: &'static str,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct DsReport {
    pub failures: Vec<ConditionFailure>,
    /// Condition 6 is vacuous (and skipped) below `n = 2`, where `ε_10` is absent.
    pub coefficient_checked: bool,
}

impl DsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, condition: &str) -> bool {
        self.failures.iter().any(|f| f.condition == condition)
    }
}

/// Conditions 1–6 of a decomposition system, plus `"shape"` (every `ε_ji`
/// maps `M_i` into `M_j`, zero elsewhere) and `"image"` (`im ε_ji` agrees
/// with the lattice term `a_j ∧ (a_i + a_ji)`).
pub fn verify_decomposition_system<B: ModuleBackend>(b: &B, ds: &DecompositionSystem<B>) -> DsReport {
    let l = b.lattice();
    let d = &ds.decomposition;
    let (n, len) = (ds.n, ds.len());
    let mut report = DsReport { failures: Vec::new(), coefficient_checked: n >= 2 };
    let mut fail = |condition: &'static str, indices: Vec<usize>| report.failures.push(ConditionFailure { condition, indices });
    let sum = d.proj.iter().fold(b.zero(), |acc, p| b.add(&acc, p));
    if sum != b.identity() {
        fail("shape", vec![]);
    }
    for (&(j, i), e) in &ds.eps {
        if !d.is_morphism(b, e, j, i) {
            fail("shape", vec![j, i]);
        }
    }
    for i in 0..len {
        if *ds.eps(i, i) != d.proj[i] || b.compose(ds.eps(i, i), &d.proj[i]) != d.proj[i] {
            fail("1", vec![i]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && b.compose(ds.eps(i, j), ds.eps(j, i)) != d.proj[i] {
                fail("2", vec![i, j]);
            }
        }
    }
    for i in 0..len {
        if b.compose(ds.eps(i, 0), ds.eps(0, i)) != d.proj[i] {
            fail("3", vec![i]);
        }
    }
    for k in 0..n {
        for j in 0..n {
            for i in 0..len {
                if i != j && j != k && i != k && *ds.eps(k, i) != b.compose(ds.eps(k, j), ds.eps(j, i)) {
                    fail("4", vec![k, j, i]);
                }
            }
        }
    }
    for j in 0..n {
        for i in 0..len {
            if i == j {
                continue;
            }
            let im = b.image(ds.eps(j, i));
            let z = ds.z.get(&(i, j)).cloned().unwrap_or_else(|| l.bottom());
            if !l.direct_sum_is(&im, &z, &d.summands[j]) {
                fail("5", vec![i, j]);
            }
            if image(l, &ds.frame, j, i).as_ref() != Some(&im) {
                fail("image", vec![j, i]);
            }
        }
    }
    if n >= 2 {
        for i in 0..len {
            if !ds.in_coefficient_ring(b, &b.compose(ds.eps(0, i), ds.eps(i, 0))) {
                fail("6", vec![i]);
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct RingCheck {
    pub mode: Mode,
    /// Members found (exhaustive mode) or sampled.
    pub members: usize,
    pub contains_zero: bool,
    pub contains_identity: bool,
    pub closed_under_add: bool,
    pub closed_under_compose: bool,
    pub closed_under_neg: bool,
}

impl RingCheck {
    pub fn passed(&self) -> bool {
        self.contains_zero && self.contains_identity && self.closed_under_add && self.closed_under_compose && self.closed_under_neg
    }
}

fn closure_check<B: ModuleBackend>(
    b: &B,
    members: &[B::Endo],
    mode: Mode,
    zero: B::Endo,
    one: B::Endo,
    contains: impl Fn(&B::Endo) -> bool,
) -> RingCheck {
    let mut check = RingCheck {
        mode,
        members: members.len(),
        contains_zero: contains(&zero),
        contains_identity: contains(&one),
        closed_under_add: true,
        closed_under_compose: true,
        closed_under_neg: members.iter().all(|x| contains(&b.neg(x))),
    };
    'outer: for x in members {
        for y in members {
            check.closed_under_add &= contains(&b.add(x, y));
            check.closed_under_compose &= contains(&b.compose(x, y));
            if !check.closed_under_add || !check.closed_under_compose {
                break 'outer;
            }
        }
    }
    check
}

/// Coefficient ring `C ≤ End(M_0)`: exhaustive over the corner when the
/// backend enumerates its endomorphisms, otherwise on `samples` corner elements.
pub fn coefficient_ring<B: ModuleBackend>(
    b: &B,
    ds: &DecompositionSystem<B>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RingCheck, CoordError> {
    if ds.n < 3 {
        return Err(CoordError::FormatTooSmall { n: ds.n });
    }
    let p0 = ds.proj(0);
    let (cands, mode) = match b.endos() {
        Some(all) => {
            let mut corner: Vec<B::Endo> = Vec::new();
            for x in all {
                let c = b.compose3(p0, &x, p0);
                if !corner.contains(&c) {
                    corner.push(c);
                }
            }
            (corner, Mode::Exhaustive)
        }
        None => ((0..samples).map(|_| b.compose3(p0, &b.random_endo(rng), p0)).collect(), Mode::Sampled { samples }),
    };
    let members: Vec<B::Endo> = cands.into_iter().filter(|x| ds.in_coefficient_ring(b, x)).collect();
    Ok(closure_check(b, &members, mode, b.zero(), p0.clone(), |x| ds.in_coefficient_ring(b, x)))
}

/// Matrix ring of the system, checked for closure and for containing 1.
pub fn verify_matrix_ring<B: ModuleBackend>(
    b: &B,
    ds: &DecompositionSystem<B>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> RingCheck {
    let (cands, mode) = match b.endos() {
        Some(all) => (all, Mode::Exhaustive),
        None => ((0..samples).map(|_| b.random_endo(rng)).collect(), Mode::Sampled { samples }),
    };
    let members: Vec<B::Endo> = cands.into_iter().filter(|x| ds.in_matrix_ring(b, x)).collect();
    // 32 × 32 pairs when sampling
    let members = match mode {
        Mode::Exhaustive => members,
        Mode::Sampled { .. } => members.into_iter().take(32).collect(),
    };
    closure_check(b, &members, mode, b.zero(), b.identity(), |x| ds.in_matrix_ring(b, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, Matrix};
    use crate::frames::{canonical_frame, find_frame, stabilize_frame};
    use crate::latcore::principal_right_ideal_lattice;
    use crate::starring::{catalog_ring, StarRing};
    use crate::subspace::InnerProductSpace;
    use rand::SeedableRng;

    fn q3() -> InnerProductSpace {
        InnerProductSpace::dot(&Field::rationals(), 3)
    }

    #[test]
    fn zero_morphism_has_the_source_as_graph() {
        let v = q3();
        let d = Decomposition::new(&v, vec![v.axis(0), v.axis(1), v.axis(2)]).unwrap();
        assert_eq!(graph(&v, &d, 1, &ModuleBackend::zero(&v)), v.axis(1));
    }

    #[test]
    fn graph_round_trip_in_q3() {
        let v = q3();
        let d = Decomposition::new(&v, vec![v.axis(0), v.axis(1), v.axis(2)]).unwrap();
        // φ(e_1) = e_0
        let phi = Matrix::unit(v.field(), 3, 0, 1);
        let g = graph(&v, &d, 1, &phi);
        assert_eq!(g, v.span_i64(&[vec![-1, 1, 0]]).unwrap());
        assert_eq!(morphism_from_graph(&v, &d, 1, 0, &g).unwrap(), phi);
        assert!(matches!(morphism_from_graph(&v, &d, 1, 0, &v.axis(0)), Err(CoordError::NotAComplement(_))));
    }

    #[test]
    fn ring_graph_is_the_ideal_of_e_minus_s() {
        let r = catalog_ring("m3_gf2").unwrap();
        let ideals = principal_right_ideal_lattice(&r, 6561).unwrap();
        let b = RingModule::new(&r, &ideals);
        let unit = |i, j| r.encode_matrix(&Matrix::unit(&Field::gf(2), 3, i, j)).unwrap();
        let d = Decomposition::new(&b, (0..3).map(|i| ideals.element(unit(i, i))).collect()).unwrap();
        assert_eq!(d.proj, (0..3).map(|i| unit(i, i)).collect::<Vec<_>>());
        for x in r.carrier() {
            let s = d.component(&b, &x, 0, 1);
            let g = graph(&b, &d, 1, &s);
            assert_eq!(g, ideals.element(r.sub(&unit(1, 1), &s)));
            assert_eq!(morphism_from_graph(&b, &d, 1, 0, &g).unwrap(), s);
        }
    }

    #[test]
    fn canonical_q3_system() {
        let v = q3();
        let f = stabilize_frame(&v, &canonical_frame(&v, 3, 0).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&v, &f, Sublattice::Full).unwrap();
        assert!(verify_decomposition_system(&v, &ds).passed());
        for j in 0..3 {
            for i in 0..3 {
                assert_eq!(*ds.eps(j, i), Matrix::unit(v.field(), 3, j, i));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = coefficient_ring(&v, &ds, 16, &mut rng).unwrap();
        assert!(c.passed() && c.members == 16);
        assert!(ds.in_coefficient_ring(&v, ds.proj(0)));
        assert!(verify_matrix_ring(&v, &ds, 16, &mut rng).passed());
    }

    #[test]
    fn m3_gf2_system_and_coefficients() {
        let r = catalog_ring("m3_gf2").unwrap();
        let ideals = principal_right_ideal_lattice(&r, 6561).unwrap();
        let b = RingModule::new(&r, &ideals);
        let f = stabilize_frame(&ideals.lattice, &find_frame(&ideals.lattice, 3, 0).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&b, &f, Sublattice::Full).unwrap();
        assert!(verify_decomposition_system(&b, &ds).passed());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = coefficient_ring(&b, &ds, 0, &mut rng).unwrap();
        assert_eq!((c.mode, c.members), (Mode::Exhaustive, 2));
        assert!(c.passed());
        let m = verify_matrix_ring(&b, &ds, 0, &mut rng);
        assert!(m.passed() && m.members == 512);
        // each ε_ji is left multiplication by an element of e_j R e_i
        for (&(j, i), e) in &ds.eps {
            assert_eq!(r.mul3(ds.proj(j), e, ds.proj(i)), *e);
        }
    }

    #[test]
    fn trivial_system() {
        let v = q3();
        let f = stabilize_frame(&v, &Frame::new(1, 0, vec![v.whole()], vec![]).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&v, &f, Sublattice::Full).unwrap();
        let rep = verify_decomposition_system(&v, &ds);
        assert!(rep.passed() && !rep.coefficient_checked);
        assert_eq!(*ds.eps(0, 0), v.identity());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(coefficient_ring(&v, &ds, 4, &mut rng), Err(CoordError::FormatTooSmall { n: 1 })));
    }

    #[test]
    fn tails_get_left_inverses_vanishing_on_z() {
        let v = InnerProductSpace::dot(&Field::rationals(), 5);
        let f = stabilize_frame(&v, &canonical_frame(&v, 2, 1).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&v, &f, Sublattice::Full).unwrap();
        assert!(verify_decomposition_system(&v, &ds).passed());
        for j in 0..2 {
            let z = &ds.z[&(2, j)];
            let left = ds.eps(2, j);
            assert!(z.vectors().iter().all(|x| left.apply(x).unwrap().iter().all(|s| v.field().is_zero(s))));
        }
    }
}
