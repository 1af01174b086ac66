//! Lattices of principal one-sided ideals of finite rings.

use std::collections::HashMap;

use super::{FiniteLattice, LatError, LatticeContext, LatticeHom};
use crate::starring::{corner_ring, quotient, FiniteRing, Ideal, RingError, StarRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// `L(R_R)` (or `L(_R R)`): the distinct sets `xR` (or `Rx`) ordered by inclusion.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub lattice: FiniteLattice,
    pub side: Side,
    /// The ideal of each lattice element.
    pub sets: Vec<Ideal>,
    /// First ring element (in code order) generating each lattice element.
    pub generators: Vec<u32>,
    /// The projection generating each element, when every element has one.
    pub projections: Option<Vec<u32>>,
    /// Lattice element `xR` of every ring element `x`.
    pub of_element: Vec<u32>,
}

impl IdealLattice {
    pub fn index_of(&self, set: &Ideal) -> Option<u32> {
        self.sets.iter().position(|s| s == set).map(|i| i as u32)
    }

    /// Lattice element generated by the ring element `x`.
    pub fn element(&self, x: u32) -> u32 {
        self.of_element[x as usize]
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }
}

fn build(ring: &FiniteRing, side: Side, bound: usize) -> Result<IdealLattice, LatError> {
    if ring.size() as usize > bound {
        return Err(LatError::BackendTooLarge { size: ring.size() as usize, bound });
    }
    let one = ring.one().ok_or(RingError::NotUnital)?;
    let mut index: HashMap<Ideal, usize> = HashMap::new();
    let mut sets: Vec<Ideal> = Vec::new();
    let mut generators: Vec<u32> = Vec::new();
    let mut raw_of = Vec::with_capacity(ring.size() as usize);
    for x in ring.carrier() {
        let elems = match side {
            Side::Right => ring.right_multiples(x),
            Side::Left => ring.left_multiples(x),
        };
        let set = Ideal::from_elements(ring.size(), elems);
        let i = *index.entry(set.clone()).or_insert_with(|| {
            sets.push(set);
            generators.push(x);
            sets.len() - 1
        });
        raw_of.push(i);
    }
    // canonical order: by size, then by element list
    let mut order: Vec<usize> = (0..sets.len()).collect();
    let keys: Vec<(usize, Vec<u32>)> = sets.iter().map(|s| (s.len(), s.elements())).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut rank_of = vec![0u32; sets.len()];
    for (new, &old) in order.iter().enumerate() {
        rank_of[old] = new as u32;
    }
    let sets: Vec<Ideal> = order.iter().map(|&o| sets[o].clone()).collect();
    let generators: Vec<u32> = order.iter().map(|&o| generators[o]).collect();
    let of_element: Vec<u32> = raw_of.iter().map(|&i| rank_of[i]).collect();

    let n = sets.len();
    let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| sets[a].is_subset(&sets[b])).collect()).collect();

    // generating projection: e ∈ S with S ⊆ eR (resp. Re), i.e. e·s = s (resp. s·e = s)
    let projections: Option<Vec<u32>> = sets
        .iter()
        .map(|s| {
            ring.projections().iter().copied().find(|e| {
                s.contains(*e)
                    && s.elements().iter().all(|x| match side {
                        Side::Right => ring.mul(e, x) == *x,
                        Side::Left => ring.mul(x, e) == *x,
                    })
            })
        })
        .collect();
    let labels = match &projections {
        Some(p) => p.iter().map(|e| format!("e={}", ring.describe(e))).collect(),
        None => generators.iter().map(|x| format!("x={}", ring.describe(x))).collect(),
    };
    let mut lattice = FiniteLattice::from_order(&leq, Some(labels))?;
    if let Some(p) = &projections {
        // (eR)⊥ = (1 − e)R
        let ortho = p.iter().map(|e| of_element[ring.sub(&one, e) as usize]).collect();
        lattice = lattice.with_ortho(ortho)?;
    }
    Ok(IdealLattice { lattice, side, sets, generators, projections, of_element })
}

pub fn principal_right_ideal_lattice(ring: &FiniteRing, bound: usize) -> Result<IdealLattice, LatError> {
    build(ring, Side::Right, bound)
}

pub fn principal_left_ideal_lattice(ring: &FiniteRing, bound: usize) -> Result<IdealLattice, LatError> {
    build(ring, Side::Left, bound)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    /// `xR ↦ Rx*` is well defined and an order isomorphism `L(R_R) → L(_R R)`.
    pub star_isomorphism: bool,
    /// `xR ↦ {r : r·x = 0}` lands in `L(_R R)` and is an order anti-isomorphism.
    pub annihilator_anti_isomorphism: bool,
    /// The annihilator map equals the left orthocomplement after the star map.
    pub annihilator_is_ortho_of_star: bool,
    pub witness: Option<String>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.star_isomorphism && self.annihilator_anti_isomorphism && self.annihilator_is_ortho_of_star
    }
}

fn order_bijection(src: &FiniteLattice, tgt: &FiniteLattice, map: &[u32], reversing: bool) -> bool {
    let mut seen = vec![false; tgt.size()];
    for &y in map {
        if seen[y as usize] {
            return false;
        }
        seen[y as usize] = true;
    }
    if map.len() != tgt.size() {
        return false;
    }
    src.carrier().all(|a| {
        src.carrier().all(|b| {
            let (fa, fb) = (map[a as usize], map[b as usize]);
            let image = if reversing { tgt.leq(&fb, &fa) } else { tgt.leq(&fa, &fb) };
            src.leq(&a, &b) == image
        })
    })
}

/// Right and left principal ideal lattices related through the involution
/// and through annihilators.
pub fn star_duality(ring: &FiniteRing, right: &IdealLattice, left: &IdealLattice) -> DualityReport {
    let mut witness = None;
    // star map, checked for well-definedness over every generator
    let mut star_map = vec![u32::MAX; right.size()];
    let mut well_defined = true;
    for x in ring.carrier() {
        let (src, img) = (right.element(x), left.element(ring.star(&x)));
        let slot = &mut star_map[src as usize];
        if *slot == u32::MAX {
            *slot = img;
        } else if *slot != img {
            well_defined = false;
            witness.get_or_insert_with(|| format!("xR = yR but Rx* ≠ Ry* at x = {}", ring.describe(&x)));
        }
    }
    let star_isomorphism = well_defined && order_bijection(&right.lattice, &left.lattice, &star_map, false);
    if !star_isomorphism {
        witness.get_or_insert_with(|| "xR ↦ Rx* is not an order isomorphism".into());
    }

    let mut ann_map = Vec::with_capacity(right.size());
    let mut in_left = true;
    for (i, set) in right.sets.iter().enumerate() {
        let members = set.elements();
        let ann = Ideal::from_elements(
            ring.size(),
            ring.carrier().filter(|r| members.iter().all(|x| ring.mul(r, x) == ring.zero())),
        );
        match left.index_of(&ann) {
            Some(j) => ann_map.push(j),
            None => {
                in_left = false;
                witness.get_or_insert_with(|| format!("annihilator of element {i} is not principal"));
                ann_map.push(0);
            }
        }
    }
    let annihilator_anti_isomorphism = in_left && order_bijection(&right.lattice, &left.lattice, &ann_map, true);
    let annihilator_is_ortho_of_star = match left.lattice.ortho_map() {
        Some(o) if well_defined => right.lattice.carrier().all(|a| o[star_map[a as usize] as usize] == ann_map[a as usize]),
        _ => false,
    };
    DualityReport { star_isomorphism, annihilator_anti_isomorphism, annihilator_is_ortho_of_star, witness }
}

#[derive(Clone, Debug)]
pub struct CornerIso {
    pub corner_lattice: IdealLattice,
    /// Elements of `[0, eR]` in the ambient lattice.
    pub interval: Vec<u32>,
    /// `x(eRe) ↦ xR` on corner-lattice indices.
    pub map: Vec<u32>,
    pub well_defined: bool,
    pub isomorphism: bool,
}

/// `L((eRe)_{eRe}) ≅ [0, eR]` through `x(eRe) ↦ xR`.
pub fn corner_interval_iso(ring: &FiniteRing, ambient: &IdealLattice, e: u32, bound: usize) -> Result<CornerIso, LatError> {
    let corner = corner_ring(ring, e)?;
    let cl = principal_right_ideal_lattice(&corner.ring, bound)?;
    let top = ambient.element(e);
    let interval = ambient.lattice.interval(ambient.lattice.bottom(), top);
    let mut map = vec![u32::MAX; cl.size()];
    let mut well_defined = true;
    for local in corner.ring.carrier() {
        let src = cl.element(local);
        let img = ambient.element(corner.embedding[local as usize]);
        let slot = &mut map[src as usize];
        if *slot == u32::MAX {
            *slot = img;
        } else if *slot != img {
            well_defined = false;
        }
    }
    let (sub, elems) = ambient.lattice.interval_lattice(ambient.lattice.bottom(), top);
    let local_map: Option<Vec<u32>> =
        map.iter().map(|m| elems.iter().position(|x| x == m).map(|p| p as u32)).collect();
    let isomorphism = well_defined && local_map.is_some_and(|lm| order_bijection(&cl.lattice, &sub, &lm, false));
    Ok(CornerIso { corner_lattice: cl, interval, map, well_defined, isomorphism })
}

/// `L(R_R) → L((R/I)_{R/I})`, `xR ↦ π(x)·(R/I)`.
pub fn quotient_hom(
    ring: &FiniteRing,
    ideal: &Ideal,
    bound: usize,
) -> Result<(IdealLattice, FiniteRing, IdealLattice, LatticeHom), LatError> {
    let src = principal_right_ideal_lattice(ring, bound)?;
    let (q, class) = quotient(ring, ideal, &format!("{}/I", ring.name()))?;
    let tgt = principal_right_ideal_lattice(&q, bound)?;
    let map = (0..src.size()).map(|i| tgt.element(class[src.generators[i] as usize])).collect();
    Ok((src, q, tgt, LatticeHom { map }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latcore::{verify_lattice_axioms, verify_mol};
    use crate::starring::catalog_ring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_ideal_lattices() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let gf3 = principal_right_ideal_lattice(&catalog_ring("gf3").unwrap(), 6561).unwrap();
        assert_eq!((gf3.size(), gf3.lattice.height()), (2, 1));
        let b = principal_right_ideal_lattice(&catalog_ring("gf3xgf3").unwrap(), 6561).unwrap();
        assert_eq!(b.size(), 4);
        assert!(crate::latcore::check_distributive_sample(&b.lattice, 0, &mut rng).passed);
        let m2 = principal_right_ideal_lattice(&catalog_ring("m2_gf3").unwrap(), 6561).unwrap();
        assert_eq!((m2.size(), m2.lattice.height(), m2.lattice.atoms().len()), (6, 2, 4));
        assert!(verify_mol(&m2.lattice, 0, &mut rng).unwrap().passed());
        assert!(verify_lattice_axioms(&m2.lattice, 0, &mut rng).is_cml());
    }

    #[test]
    fn m3_gf2_lattice_is_the_subspace_lattice_of_gf2_cubed() {
        // right ideals xR of M_3(F) correspond to column spaces: 1 + 7 + 7 + 1
        let r = catalog_ring("m3_gf2").unwrap();
        let l = principal_right_ideal_lattice(&r, 6561).unwrap();
        assert_eq!(l.size(), 16);
        assert_eq!(l.lattice.height(), 3);
        assert!(l.projections.is_none());
        let ranks: Vec<usize> = l.lattice.carrier().map(|a| l.lattice.rank(a)).collect();
        assert_eq!((0..=3).map(|k| ranks.iter().filter(|&&r| r == k).count()).collect::<Vec<_>>(), vec![1, 7, 7, 1]);
    }

    #[test]
    fn quotient_hom_of_product_is_surjective() {
        let r = catalog_ring("m2gf3xgf3").unwrap();
        let i = Ideal::from_elements(r.size(), (0..3).map(|c| r.from_components(&[0, c]).unwrap()));
        let (src, _, tgt, f) = quotient_hom(&r, &i, 6561).unwrap();
        let rep = f.verify(&src.lattice, &tgt.lattice);
        assert!(rep.is_hom() && rep.surjective);
        assert_eq!((src.size(), tgt.size()), (12, 6));
    }
}
