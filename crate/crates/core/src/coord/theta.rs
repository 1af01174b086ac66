use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    decomposition_system_of_frame, graph, morphism_from_graph, CoordError, DecompositionSystem, Elem, ModuleBackend,
    Sublattice,
};
use crate::frames::{verify_frame, Frame, Level};
use crate::subspace::SubspaceError;

/// Family products above this size are not enumerated.
const FAMILY_LIMIT: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exhaustive,
    Sampled { samples: usize },
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled { samples } => write!(f, "{samples} samples"),
        }
    }
}

/// Peirce components `c[j][i] = π_j ∘ φ ∘ π_i` of an endomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Components<E> {
    pub c: Vec<Vec<E>>,
}

impl<E> Components<E> {
    pub fn get(&self, j: usize, i: usize) -> &E {
        &self.c[j][i]
    }
}

/// `θ(r) = r̂` with components `r_ji = e_j r e_i`.
pub fn theta<B: ModuleBackend>(b: &B, ds: &DecompositionSystem<B>, r: &B::Endo) -> Components<B::Endo> {
    let len = ds.len();
    Components { c: (0..len).map(|j| (0..len).map(|i| ds.decomposition.component(b, r, j, i)).collect()).collect() }
}

/// `Σ_ji c_ji`, the inverse of `θ`.
pub fn assemble<B: ModuleBackend>(b: &B, c: &Components<B::Endo>) -> B::Endo {
    c.c.iter().flatten().fold(b.zero(), |acc, x| b.add(&acc, x))
}

fn comp_add<B: ModuleBackend>(b: &B, x: &Components<B::Endo>, y: &Components<B::Endo>) -> Components<B::Endo> {
    Components { c: x.c.iter().zip(&y.c).map(|(r, s)| r.iter().zip(s).map(|(u, v)| b.add(u, v)).collect()).collect() }
}

fn comp_mul<B: ModuleBackend>(b: &B, x: &Components<B::Endo>, y: &Components<B::Endo>) -> Components<B::Endo> {
    let len = x.c.len();
    Components {
        c: (0..len)
            .map(|j| {
                (0..len).map(|i| (0..len).fold(b.zero(), |acc, l| b.add(&acc, &b.compose(x.get(j, l), y.get(l, i))))).collect()
            })
            .collect(),
    }
}

fn comp_identity<B: ModuleBackend>(b: &B, ds: &DecompositionSystem<B>) -> Components<B::Endo> {
    let len = ds.len();
    Components {
        c: (0..len).map(|j| (0..len).map(|i| if i == j { ds.proj(i).clone() } else { b.zero() }).collect()).collect(),
    }
}

/// Every `ε_0j ∘ c_ji ∘ ε_i0` lies in the coefficient ring.
fn comp_member<B: ModuleBackend>(b: &B, ds: &DecompositionSystem<B>, c: &Components<B::Endo>) -> bool {
    let len = ds.len();
    (0..len).all(|j| (0..len).all(|i| ds.in_coefficient_ring(b, &b.compose3(ds.eps(0, j), c.get(j, i), ds.eps(i, 0)))))
}

#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub mode: Mode,
    pub checked: usize,
    pub additive: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub injective: bool,
    /// Onto the matrix ring (θ only).
    pub surjective: Option<bool>,
    /// Images land in the target ring.
    pub members: bool,
    pub witness: Option<String>,
}

impl MapReport {
    pub fn passed(&self) -> bool {
        self.additive && self.multiplicative && self.unital && self.injective && self.members && self.surjective != Some(false)
    }

    fn new(mode: Mode) -> MapReport {
        MapReport {
            mode,
            checked: 0,
            additive: true,
            multiplicative: true,
            unital: true,
            injective: true,
            surjective: None,
            members: true,
            witness: None,
        }
    }
}

fn require_format<B: ModuleBackend>(ds: &DecompositionSystem<B>) -> Result<(), CoordError> {
    if ds.n < 3 {
        return Err(CoordError::FormatTooSmall { n: ds.n });
    }
    Ok(())
}

fn domain<B: ModuleBackend>(b: &B, samples: usize, rng: &mut ChaCha8Rng) -> (Vec<B::Endo>, Mode) {
    match b.endos() {
        Some(all) => (all, Mode::Exhaustive),
        None => ((0..samples).map(|_| b.random_endo(rng)).collect(), Mode::Sampled { samples }),
    }
}

/// Check `θ` as a unital ring isomorphism onto the matrix ring. Exhaustive
/// backends compare every pair and match the member families of corner
/// elements against the image; otherwise sampled pairs, with `Σ c_ji` as the
/// explicit inverse in both directions.
pub fn verify_theta<B: ModuleBackend>(
    b: &B,
    ds: &DecompositionSystem<B>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MapReport, CoordError> {
    require_format(ds)?;
    let (elems, mode) = domain(b, samples, rng);
    let images: Vec<Components<B::Endo>> = elems.iter().map(|r| theta(b, ds, r)).collect();
    let mut rep = MapReport::new(mode);
    rep.checked = elems.len();
    rep.unital = theta(b, ds, &b.identity()) == comp_identity(b, ds);
    if let Some(t) = elems.iter().zip(&images).position(|(_, c)| !comp_member(b, ds, c)) {
        rep.members = false;
        rep.witness = Some(b.describe_endo(&elems[t]));
    }
    let pairs: Vec<(usize, usize)> = match mode {
        Mode::Exhaustive => (0..elems.len()).flat_map(|x| (0..elems.len()).map(move |y| (x, y))).collect(),
        Mode::Sampled { .. } => (0..elems.len()).map(|x| (x, (x + 1) % elems.len())).collect(),
    };
    for (x, y) in pairs {
        let (r, s) = (&elems[x], &elems[y]);
        if theta(b, ds, &b.add(r, s)) != comp_add(b, &images[x], &images[y]) {
            rep.additive = false;
            rep.witness.get_or_insert_with(|| format!("{} + {}", b.describe_endo(r), b.describe_endo(s)));
        }
        if theta(b, ds, &b.compose(r, s)) != comp_mul(b, &images[x], &images[y]) {
            rep.multiplicative = false;
            rep.witness.get_or_insert_with(|| format!("{} · {}", b.describe_endo(r), b.describe_endo(s)));
        }
        if !rep.additive && !rep.multiplicative {
            break;
        }
    }
    match mode {
        Mode::Exhaustive => {
            let set: HashSet<&Components<B::Endo>> = images.iter().collect();
            rep.injective = set.len() == images.len();
            rep.surjective = member_families(b, ds).map(|fams| fams.iter().all(|c| set.contains(c)) && fams.len() == set.len());
        }
        Mode::Sampled { .. } => {
            rep.injective = elems.iter().zip(&images).all(|(r, c)| assemble(b, c) == *r);
            let len = ds.len();
            rep.surjective = Some((0..samples).all(|_| {
                let c = Components {
                    c: (0..len)
                        .map(|j| (0..len).map(|i| ds.decomposition.component(b, &b.random_endo(rng), j, i)).collect())
                        .collect(),
                };
                !comp_member(b, ds, &c) || theta(b, ds, &assemble(b, &c)) == c
            }));
        }
    }
    Ok(rep)
}

/// All families of corner elements that satisfy the membership condition,
/// or `None` past `FAMILY_LIMIT`.
fn member_families<B: ModuleBackend>(b: &B, ds: &DecompositionSystem<B>) -> Option<Vec<Components<B::Endo>>> {
    let all = b.endos()?;
    let len = ds.len();
    let mut corners: Vec<Vec<B::Endo>> = Vec::new();
    for j in 0..len {
        for i in 0..len {
            let mut c: Vec<B::Endo> = Vec::new();
            for x in &all {
                let y = ds.decomposition.component(b, x, j, i);
                if !c.contains(&y) {
                    c.push(y);
                }
            }
            corners.push(c);
        }
    }
    let total = corners.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()).filter(|&t| t <= FAMILY_LIMIT))?;
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut flat = Vec::with_capacity(corners.len());
        for c in &corners {
            flat.push(c[code % c.len()].clone());
            code /= c.len();
        }
        let fam = Components { c: flat.chunks(len).map(|r| r.to_vec()).collect() };
        if comp_member(b, ds, &fam) {
            out.push(fam);
        }
    }
    Some(out)
}

/// The system induced on the image frame `ι[Φ]`.
pub fn induced_system<B: ModuleBackend>(
    b: &B,
    frame: Frame<Elem<B>>,
    sublattice: Sublattice<Elem<B>>,
) -> Result<DecompositionSystem<B>, CoordError> {
    if !verify_frame(b.lattice(), &frame, Level::Stable).passed() {
        return Err(CoordError::FrameImageNotStable);
    }
    decomposition_system_of_frame(b, &frame, sublattice)
}

/// `η` induced by a lattice embedding `ι` carrying `Φ` onto `Φ′`.
pub struct Eta<'a, B: ModuleBackend, B2: ModuleBackend> {
    pub b: &'a B,
    pub ds: &'a DecompositionSystem<B>,
    pub b2: &'a B2,
    pub ds2: &'a DecompositionSystem<B2>,
    iota: Box<dyn Fn(&Elem<B>) -> Elem<B2> + 'a>,
}

impl<'a, B: ModuleBackend, B2: ModuleBackend> Eta<'a, B, B2> {
    pub fn new(
        b: &'a B,
        ds: &'a DecompositionSystem<B>,
        b2: &'a B2,
        ds2: &'a DecompositionSystem<B2>,
        iota: impl Fn(&Elem<B>) -> Elem<B2> + 'a,
    ) -> Result<Eta<'a, B, B2>, CoordError> {
        require_format(ds)?;
        let image = ds.frame.map(|x| iota(x));
        if image.a != ds2.frame.a || image.axes != ds2.frame.axes || image.z != ds2.frame.z {
            return Err(CoordError::FrameImageNotStable);
        }
        Ok(Eta { b, ds, b2, ds2, iota: Box::new(iota) })
    }

    pub fn iota(&self, x: &Elem<B>) -> Elem<B2> {
        (self.iota)(x)
    }

    /// `η(φ) = ε′_01 ∘ ψ` with `Γ(ψ) = ι(Γ(ε_10 ∘ φ))`, for `φ ∈ C`.
    pub fn on_coefficient(&self, phi: &B::Endo) -> Result<B2::Endo, CoordError> {
        let (b, b2) = (self.b, self.b2);
        let g = graph(b, &self.ds.decomposition, 0, &b.compose(self.ds.eps(1, 0), phi));
        let psi = morphism_from_graph(b2, &self.ds2.decomposition, 0, 1, &self.iota(&g))?;
        Ok(b2.compose(self.ds2.eps(0, 1), &psi))
    }

    /// `η(φ_ji) = ε′_j0 ∘ η(ε_0j ∘ φ_ji ∘ ε_i0) ∘ ε′_0i`.
    pub fn on_component(&self, j: usize, i: usize, c: &B::Endo) -> Result<B2::Endo, CoordError> {
        let inner = self.b.compose3(self.ds.eps(0, j), c, self.ds.eps(i, 0));
        Ok(self.b2.compose3(self.ds2.eps(j, 0), &self.on_coefficient(&inner)?, self.ds2.eps(0, i)))
    }

    pub fn on_components(&self, c: &Components<B::Endo>) -> Result<B2::Endo, CoordError> {
        let len = self.ds.len();
        let mut acc = self.b2.zero();
        for j in 0..len {
            for i in 0..len {
                acc = self.b2.add(&acc, &self.on_component(j, i, c.get(j, i))?);
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, phi: &B::Endo) -> Result<B2::Endo, CoordError> {
        self.on_components(&theta(self.b, self.ds, phi))
    }
}

fn kernel_by_rank<B: ModuleBackend, B2: ModuleBackend>(
    b: &B,
    b2: &B2,
    f: impl Fn(&B::Endo) -> Result<B2::Endo, CoordError>,
) -> Result<Option<bool>, CoordError> {
    let Some(basis) = b.endo_basis() else { return Ok(None) };
    let images: Vec<B2::Endo> = basis.iter().map(f).collect::<Result<_, _>>()?;
    Ok(b2.endo_rank(&images).map(|r| r == basis.len()))
}

/// Check `η` on the matrix ring: unital, additive, multiplicative, and
/// injective (zero kernel on exhaustive runs, a rank test on matrix-unit
/// images for matrix algebras over prime fields).
pub fn verify_eta<B: ModuleBackend, B2: ModuleBackend>(
    eta: &Eta<'_, B, B2>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<MapReport, CoordError> {
    let (b, b2) = (eta.b, eta.b2);
    let (elems, mode) = domain(b, samples, rng);
    let elems: Vec<B::Endo> = elems.into_iter().filter(|x| eta.ds.in_matrix_ring(b, x)).collect();
    map_checks(b, b2, &elems, mode, |x| eta.apply(x))
}

/// Shared hom checks for a map `f` out of `End(M)`; pairs are all pairs on
/// exhaustive runs and consecutive samples otherwise.
fn map_checks<B: ModuleBackend, B2: ModuleBackend>(
    b: &B,
    b2: &B2,
    elems: &[B::Endo],
    mode: Mode,
    f: impl Fn(&B::Endo) -> Result<B2::Endo, CoordError>,
) -> Result<MapReport, CoordError> {
    let mut rep = MapReport::new(mode);
    rep.checked = elems.len();
    rep.unital = f(&b.identity())? == b2.identity();
    let images: Vec<B2::Endo> = elems.iter().map(&f).collect::<Result<_, _>>()?;
    let index: std::collections::HashMap<&B::Endo, usize> = elems.iter().enumerate().map(|(t, x)| (x, t)).collect();
    let image_of = |x: &B::Endo| -> Result<B2::Endo, CoordError> {
        match index.get(x) {
            Some(&t) => Ok(images[t].clone()),
            None => f(x),
        }
    };
    let pairs: Vec<(usize, usize)> = match mode {
        Mode::Exhaustive => (0..elems.len()).flat_map(|x| (0..elems.len()).map(move |y| (x, y))).collect(),
        Mode::Sampled { .. } => (0..elems.len()).map(|x| (x, (x + 1) % elems.len().max(1))).collect(),
    };
    for (x, y) in pairs {
        let (r, s) = (&elems[x], &elems[y]);
        if image_of(&b.add(r, s))? != b2.add(&images[x], &images[y]) {
            rep.additive = false;
            rep.witness.get_or_insert_with(|| format!("{} + {}", b.describe_endo(r), b.describe_endo(s)));
        }
        if image_of(&b.compose(r, s))? != b2.compose(&images[x], &images[y]) {
            rep.multiplicative = false;
            rep.witness.get_or_insert_with(|| format!("{} · {}", b.describe_endo(r), b.describe_endo(s)));
        }
        if !rep.additive && !rep.multiplicative {
            break;
        }
    }
    rep.injective = match mode {
        Mode::Exhaustive => {
            let zero = b2.zero();
            let kernel = elems.iter().zip(&images).find(|(x, y)| **y == zero && **x != b.zero());
            if let Some((x, _)) = kernel {
                rep.witness.get_or_insert_with(|| format!("kernel contains {}", b.describe_endo(x)));
            }
            kernel.is_none()
        }
        Mode::Sampled { .. } => kernel_by_rank(b, b2, &f)?.unwrap_or_else(|| {
            let distinct: HashSet<&B2::Endo> = images.iter().collect();
            let set: HashSet<&B::Endo> = elems.iter().collect();
            distinct.len() == set.len()
        }),
    };
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoReport {
    pub hom: MapReport,
    /// Elements `r` with `ρ(r*) = ρ(r)*` checked.
    pub star_checked: usize,
}

/// `ρ = η ∘ θ` on `End(M)`: hom laws, injectivity, and `ρ(r*) = ρ(r)*`
/// for every checked `r`, failing with the first witness.
pub fn verify_rho<B: ModuleBackend, B2: ModuleBackend>(
    eta: &Eta<'_, B, B2>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<RhoReport, CoordError> {
    let (b, b2) = (eta.b, eta.b2);
    let (elems, mode) = domain(b, samples, rng);
    let hom = map_checks(b, b2, &elems, mode, |x| eta.apply(x))?;
    for r in &elems {
        let Some(rs) = b.star(r) else { continue };
        let rhs = b2.star(&eta.apply(r)?).ok_or(SubspaceError::MissingForm)?;
        if eta.apply(&rs)? != rhs {
            return Err(CoordError::StarPreservationFailed { witness: b.describe_endo(r) });
        }
    }
    Ok(RhoReport { hom, star_checked: elems.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::RingModule;
    use crate::exactalg::{Field, Matrix};
    use crate::frames::{canonical_frame, find_frame, stabilize_frame};
    use crate::latcore::{principal_right_ideal_lattice, IdealLattice};
    use crate::starring::{catalog_ring, FiniteRing, StarRing};
    use crate::subspace::{InnerProductSpace, Subspace};
    use rand::SeedableRng;

    fn m3_gf2() -> (FiniteRing, IdealLattice) {
        let r = catalog_ring("m3_gf2").unwrap();
        let ideals = principal_right_ideal_lattice(&r, 6561).unwrap();
        (r, ideals)
    }

    fn ring_system<'a>(b: &RingModule<'a>) -> DecompositionSystem<RingModule<'a>> {
        let l = &b.ideals.lattice;
        let f = stabilize_frame(l, &find_frame(l, 3, 0).unwrap()).unwrap();
        decomposition_system_of_frame(b, &f, Sublattice::Full).unwrap()
    }

    fn q3_system(v: &InnerProductSpace) -> DecompositionSystem<InnerProductSpace> {
        let f = stabilize_frame(v, &canonical_frame(v, 3, 0).unwrap()).unwrap();
        decomposition_system_of_frame(v, &f, Sublattice::Full).unwrap()
    }

    fn transform(v: &InnerProductSpace, t: &Matrix, u: &Subspace) -> Subspace {
        v.span(&u.vectors().iter().map(|x| t.apply(x).unwrap()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn theta_is_an_isomorphism_onto_the_matrix_ring() {
        let (r, ideals) = m3_gf2();
        let b = RingModule::new(&r, &ideals);
        let ds = ring_system(&b);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rep = verify_theta(&b, &ds, 0, &mut rng).unwrap();
        assert_eq!((rep.mode, rep.checked), (Mode::Exhaustive, 512));
        assert!(rep.passed() && rep.surjective == Some(true));
        let c = theta(&b, &ds, ds.proj(0));
        let nonzero: Vec<(usize, usize)> =
            (0..3).flat_map(|j| (0..3).map(move |i| (j, i))).filter(|&(j, i)| *c.get(j, i) != r.zero()).collect();
        assert_eq!(nonzero, vec![(0, 0)]);
        for x in r.carrier() {
            assert_eq!(assemble(&b, &theta(&b, &ds, &x)), x);
        }
    }

    #[test]
    fn small_formats_are_rejected() {
        let v = InnerProductSpace::dot(&Field::rationals(), 2);
        let f = stabilize_frame(&v, &canonical_frame(&v, 2, 0).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&v, &f, Sublattice::Full).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(verify_theta(&v, &ds, 4, &mut rng), Err(CoordError::FormatTooSmall { n: 2 })));
    }

    // right ideals xR of M_3(GF(2)) correspond to column spaces of x
    #[test]
    fn eta_recovers_the_matrix_from_the_column_model() {
        let (r, ideals) = m3_gf2();
        let b = RingModule::new(&r, &ideals);
        let ds = ring_system(&b);
        let v = InnerProductSpace::bare(&Field::gf(2), 3);
        let generator = |t: u32| r.carrier().find(|&x| ideals.element(x) == t).unwrap();
        let iota = |t: &u32| v.image(&r.decode_matrix(generator(*t)).unwrap());
        let ds2 = induced_system(&v, ds.frame.map(|t| iota(t)), Sublattice::Full).unwrap();
        let eta = Eta::new(&b, &ds, &v, &ds2, iota).unwrap();
        for x in r.carrier() {
            assert_eq!(eta.apply(&x).unwrap(), r.decode_matrix(x).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let rep = verify_eta(&eta, 0, &mut rng).unwrap();
        assert!(rep.passed() && rep.checked == 512);
    }

    #[test]
    fn rho_is_the_identity_for_the_identity_embedding() {
        let v = InnerProductSpace::dot(&Field::rationals(), 3);
        let ds = q3_system(&v);
        let ds2 = q3_system(&v);
        let eta = Eta::new(&v, &ds, &v, &ds2, |u: &Subspace| u.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rep = verify_rho(&eta, 256, &mut rng).unwrap();
        assert!(rep.hom.passed() && rep.star_checked == 256);
        let x = v.random_endo(&mut rng);
        assert_eq!(eta.apply(&x).unwrap(), x);
    }

    #[test]
    fn a_non_isometric_embedding_breaks_the_involution() {
        let v = InnerProductSpace::dot(&Field::rationals(), 3);
        let ds = q3_system(&v);
        let t = Matrix::from_i64_rows(v.field(), &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let ds2 = induced_system(&v, ds.frame.map(|u| transform(&v, &t, u)), Sublattice::Full).unwrap();
        let eta = Eta::new(&v, &ds, &v, &ds2, |u: &Subspace| transform(&v, &t, u)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // still a ring embedding, ρ(r) = T r T⁻¹
        let x = v.random_endo(&mut rng);
        let conj = t.checked_mul(&x).unwrap().checked_mul(&t.inverse().unwrap()).unwrap();
        assert_eq!(eta.apply(&x).unwrap(), conj);
        assert!(verify_eta(&eta, 32, &mut rng).unwrap().passed());
        assert!(matches!(verify_rho(&eta, 32, &mut rng), Err(CoordError::StarPreservationFailed { .. })));
    }
}
