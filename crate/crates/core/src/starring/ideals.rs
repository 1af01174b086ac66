//! Two-sided *-ideals, quotients, corners and subring closures of finite rings.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::{rickart_inverse, FiniteRing, RingError, StarRing, TableData};

/// Subset of a finite carrier, stored as a bitset over element codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    bits: FixedBitSet,
}

impl Ideal {
    pub fn from_elements(size: u32, elems: impl IntoIterator<Item = u32>) -> Ideal {
        let mut bits = FixedBitSet::with_capacity(size as usize);
        for e in elems {
            bits.insert(e as usize);
        }
        Ideal { bits }
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> Vec<u32> {
        self.bits.ones().map(|i| i as u32).collect()
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }
}

/// Every two-sided *-ideal of a finite ring with the derived flags.
#[derive(Clone, Debug)]
pub struct IdealSummary {
    /// Sorted by size, then by element set; `ideals[0]` is the zero ideal.
    pub ideals: Vec<Ideal>,
    /// Indices of the minimal nonzero ideals.
    pub minimal: Vec<usize>,
    pub simple: bool,
    pub subdirectly_irreducible: bool,
}

impl IdealSummary {
    pub fn minimal_ideal(&self) -> Option<&Ideal> {
        match self.minimal.as_slice() {
            [i] => Some(&self.ideals[*i]),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionVerdict {
    pub injective: bool,
    /// Nonzero `r` with `r·I = 0`, the first in code order.
    pub witness: Option<u32>,
}

/// A finite subring with its own table ring and the inclusion into the ambient carrier.
#[derive(Debug)]
pub struct SubRing {
    pub ring: FiniteRing,
    /// `embedding[i]` is the ambient code of local element `i`, increasing.
    pub embedding: Vec<u32>,
}

impl SubRing {
    pub fn len(&self) -> usize {
        self.embedding.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embedding.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.embedding.binary_search(&x).is_ok()
    }

    pub fn local(&self, x: u32) -> Option<u32> {
        self.embedding.binary_search(&x).ok().map(|i| i as u32)
    }
}

fn check_bound(ring: &FiniteRing, bound: usize) -> Result<(), RingError> {
    if ring.size() as usize > bound {
        return Err(RingError::BackendTooLarge { size: ring.size() as usize, bound });
    }
    Ok(())
}

/// Smallest additive subgroup containing `seed` and `gens`.
fn additive_closure(ring: &FiniteRing, seed: &mut Vec<u32>, bits: &mut FixedBitSet, gens: impl IntoIterator<Item = u32>) {
    if seed.is_empty() {
        let z = ring.zero();
        bits.insert(z as usize);
        seed.push(z);
    }
    for g in gens {
        if bits.contains(g as usize) {
            continue;
        }
        // seed is a subgroup, so seed + ⟨g⟩ is obtained by repeated translation
        let base: Vec<u32> = seed.clone();
        let mut shift = g;
        while !bits.contains(shift as usize) {
            for &s in &base {
                let t = ring.add(&s, &shift);
                if !bits.contains(t as usize) {
                    bits.insert(t as usize);
                    seed.push(t);
                }
            }
            shift = ring.add(&shift, &g);
        }
    }
}

/// A small generating set of the additive group of the ring.
pub fn additive_generators(ring: &FiniteRing) -> Vec<u32> {
    let mut gens = Vec::new();
    let mut seed = Vec::new();
    let mut bits = FixedBitSet::with_capacity(ring.size() as usize);
    for x in ring.carrier() {
        if !bits.contains(x as usize) {
            gens.push(x);
            additive_closure(ring, &mut seed, &mut bits, [x]);
        }
        if seed.len() == ring.size() as usize {
            break;
        }
    }
    gens
}

fn span_of(ring: &FiniteRing, elems: impl IntoIterator<Item = u32>) -> Ideal {
    let mut seed = Vec::new();
    let mut bits = FixedBitSet::with_capacity(ring.size() as usize);
    additive_closure(ring, &mut seed, &mut bits, elems);
    Ideal { bits }
}

/// Two-sided *-ideal generated by `x`: the additive span of `x`, `x*` and
/// their products with additive generators on either side.
pub fn principal_ideal(ring: &FiniteRing, x: u32, gens: &[u32]) -> Ideal {
    let mut products = Vec::new();
    for y in [x, ring.star(&x)] {
        products.push(y);
        for g in gens {
            let gy = ring.mul(g, &y);
            products.push(gy);
            products.push(ring.mul(&y, g));
            for h in gens {
                products.push(ring.mul(&gy, h));
            }
        }
    }
    span_of(ring, products)
}

pub fn ideal_sum(ring: &FiniteRing, a: &Ideal, b: &Ideal) -> Ideal {
    let mut seed = a.elements();
    let mut bits = a.bits.clone();
    additive_closure(ring, &mut seed, &mut bits, b.elements());
    Ideal { bits }
}

pub fn zero_ideal(ring: &FiniteRing) -> Ideal {
    Ideal::from_elements(ring.size(), [ring.zero()])
}

pub fn full_ideal(ring: &FiniteRing) -> Ideal {
    Ideal::from_elements(ring.size(), ring.carrier())
}

/// Closure test: additive subgroup, absorbing on both sides, *-stable.
pub fn is_star_ideal(ring: &FiniteRing, set: &Ideal) -> bool {
    let elems = set.elements();
    if !set.contains(ring.zero()) {
        return false;
    }
    elems.iter().all(|&x| {
        set.contains(ring.star(&x))
            && elems.iter().all(|y| set.contains(ring.add(&x, y)))
            && ring.carrier().all(|r| set.contains(ring.mul(&r, &x)) && set.contains(ring.mul(&x, &r)))
    })
}

pub fn ideal_summary(ring: &FiniteRing, bound: usize) -> Result<IdealSummary, RingError> {
    check_bound(ring, bound)?;
    let mut ideals: Vec<Ideal> = if ring.matrix_ring().is_some() {
        // matrix rings over fields are simple
        if ring.size() == 1 {
            vec![zero_ideal(ring)]
        } else {
            vec![zero_ideal(ring), full_ideal(ring)]
        }
    } else {
        let gens = additive_generators(ring);
        let mut principal: Vec<Ideal> = Vec::new();
        for x in ring.carrier() {
            let p = principal_ideal(ring, x, &gens);
            if !principal.contains(&p) {
                principal.push(p);
            }
        }
        let mut all = principal.clone();
        let mut frontier = principal.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for p in &principal {
                    let s = ideal_sum(ring, a, p);
                    if !all.contains(&s) {
                        all.push(s.clone());
                        next.push(s);
                    }
                }
            }
            frontier = next;
        }
        all
    };
    ideals.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.elements().cmp(&b.elements())));
    let nonzero: Vec<usize> = (0..ideals.len()).filter(|&i| ideals[i].len() > 1).collect();
    let minimal: Vec<usize> = nonzero
        .iter()
        .copied()
        .filter(|&i| !nonzero.iter().any(|&j| j != i && ideals[j].is_subset(&ideals[i])))
        .collect();
    let simple = ring.size() > 1 && ideals.len() == 2;
    let subdirectly_irreducible = minimal.len() == 1;
    Ok(IdealSummary { ideals, minimal, simple, subdirectly_irreducible })
}

/// Cosets `x + I`, labelled by their least element. Returns the quotient and
/// the projection `R → R/I` as a code map.
pub fn quotient(ring: &FiniteRing, ideal: &Ideal, name: &str) -> Result<(FiniteRing, Vec<u32>), RingError> {
    if !is_star_ideal(ring, ideal) {
        return Err(RingError::Invalid("quotient by a set that is not a *-ideal".into()));
    }
    let members = ideal.elements();
    let n = ring.size() as usize;
    let mut class = vec![u32::MAX; n];
    let mut reps = Vec::new();
    for x in ring.carrier() {
        if class[x as usize] != u32::MAX {
            continue;
        }
        let label = reps.len() as u32;
        reps.push(x);
        for i in &members {
            class[ring.add(&x, i) as usize] = label;
        }
    }
    let m = reps.len() as u32;
    let mut add = Vec::with_capacity((m * m) as usize);
    let mut mul = Vec::with_capacity((m * m) as usize);
    for &a in &reps {
        for &b in &reps {
            add.push(class[ring.add(&a, &b) as usize]);
            mul.push(class[ring.mul(&a, &b) as usize]);
        }
    }
    let data = TableData {
        size: m,
        add,
        mul,
        star: reps.iter().map(|a| class[ring.star(a) as usize]).collect(),
        zero: class[ring.zero() as usize],
        one: ring.one().map(|o| class[o as usize]),
    };
    Ok((FiniteRing::from_tables(name, data)?, class))
}

fn table_ring_on(ring: &FiniteRing, name: &str, embedding: Vec<u32>) -> Result<SubRing, RingError> {
    let m = embedding.len() as u32;
    let local = |x: u32| -> Result<u32, RingError> {
        embedding
            .binary_search(&x)
            .map(|i| i as u32)
            .map_err(|_| RingError::Invalid(format!("{} leaves the subset", ring.describe(&x))))
    };
    let mut add = Vec::with_capacity((m * m) as usize);
    let mut mul = Vec::with_capacity((m * m) as usize);
    for a in &embedding {
        for b in &embedding {
            add.push(local(ring.add(a, b))?);
            mul.push(local(ring.mul(a, b))?);
        }
    }
    let star = embedding.iter().map(|a| local(ring.star(a))).collect::<Result<Vec<_>, _>>()?;
    let zero = local(ring.zero())?;
    let one = (0..m).find(|&u| (0..m).all(|x| mul[(u * m + x) as usize] == x && mul[(x * m + u) as usize] == x));
    let data = TableData { size: m, add, mul, star, zero, one };
    Ok(SubRing { ring: FiniteRing::from_tables(name, data)?, embedding })
}

/// The corner `eRe` with unit `e`.
pub fn corner_ring(ring: &FiniteRing, e: u32) -> Result<SubRing, RingError> {
    if !super::is_projection(ring, &e) {
        return Err(RingError::NotAProjection(ring.describe(&e)));
    }
    let mut elems: Vec<u32> = ring.carrier().map(|x| ring.mul3(&e, &x, &e)).collect();
    elems.sort_unstable();
    elems.dedup();
    let sub = table_ring_on(ring, &format!("corner of {}", ring.name()), elems)?;
    debug_assert_eq!(sub.ring.one(), sub.local(e));
    Ok(sub)
}

/// Smallest subset containing `seed` closed under `+`, `·`, `−`, `*` and, when
/// `with_q` is set, the relative inverse of the ambient ring.
pub fn subring_closure(ring: &FiniteRing, seed: &[u32], with_q: bool, budget: usize) -> Result<SubRing, RingError> {
    let n = ring.size() as usize;
    let mut bits = FixedBitSet::with_capacity(n);
    let mut members: Vec<u32> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let push = |x: u32, bits: &mut FixedBitSet, members: &mut Vec<u32>, queue: &mut VecDeque<u32>| -> Result<(), RingError> {
        if !bits.contains(x as usize) {
            bits.insert(x as usize);
            members.push(x);
            queue.push_back(x);
            if members.len() > budget {
                return Err(RingError::ClosureBudgetExceeded(budget));
            }
        }
        Ok(())
    };
    push(ring.zero(), &mut bits, &mut members, &mut queue)?;
    for &s in seed {
        push(s, &mut bits, &mut members, &mut queue)?;
    }
    while let Some(x) = queue.pop_front() {
        let mut fresh = vec![ring.neg(&x), ring.star(&x)];
        if with_q {
            fresh.push(rickart_inverse(ring, &x)?);
        }
        let snapshot = members.clone();
        for y in snapshot {
            fresh.push(ring.add(&x, &y));
            fresh.push(ring.mul(&x, &y));
            fresh.push(ring.mul(&y, &x));
        }
        for f in fresh {
            push(f, &mut bits, &mut members, &mut queue)?;
        }
    }
    members.sort_unstable();
    table_ring_on(ring, &format!("subring of {}", ring.name()), members)
}

/// Closure under `+`, `·`, `−`, `*` only.
pub fn star_closure(ring: &FiniteRing, seed: &[u32], budget: usize) -> Result<SubRing, RingError> {
    subring_closure(ring, seed, false, budget)
}

/// First member whose relative inverse leaves the subring, if any.
pub fn q_closed(ring: &FiniteRing, sub: &SubRing) -> Result<Option<u32>, RingError> {
    for &x in &sub.embedding {
        if !sub.contains(rickart_inverse(ring, &x)?) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Whether `r ↦ (x ↦ r·x)` on `I` is injective.
pub fn left_action_injective(ring: &FiniteRing, ideal: &Ideal) -> ActionVerdict {
    let members = ideal.elements();
    let witness = ring.carrier().find(|r| *r != ring.zero() && members.iter().all(|x| ring.mul(r, x) == ring.zero()));
    ActionVerdict { injective: witness.is_none(), witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::starring::MatrixRing;
    use std::sync::Arc;

    fn gf3() -> Arc<FiniteRing> {
        Arc::new(FiniteRing::from_matrix_ring("gf3", MatrixRing::standard(&Field::gf(3), 1)).unwrap())
    }

    fn m2() -> Arc<FiniteRing> {
        Arc::new(FiniteRing::from_matrix_ring("m2", MatrixRing::standard(&Field::gf(3), 2)).unwrap())
    }

    // the ideals of a product of simple rings are the four products of 0 and the factors
    #[test]
    fn product_has_four_ideals() {
        let p = FiniteRing::product("p", vec![gf3(), m2()]).unwrap();
        let s = ideal_summary(&p, 6561).unwrap();
        assert_eq!(s.ideals.len(), 4);
        assert_eq!(s.ideals.iter().map(Ideal::len).collect::<Vec<_>>(), vec![1, 3, 81, 243]);
        assert!(!s.simple && !s.subdirectly_irreducible);
        assert_eq!(s.minimal.len(), 2);
        for i in &s.ideals {
            assert!(is_star_ideal(&p, i));
        }
    }

    #[test]
    fn table_copy_of_matrix_ring_is_simple() {
        let t = m2().to_table("m2t");
        let s = ideal_summary(&t, 6561).unwrap();
        assert_eq!(s.ideals.len(), 2);
        assert!(s.simple && s.subdirectly_irreducible);
    }

    #[test]
    fn quotient_by_matrix_factor_is_gf3() {
        let p = FiniteRing::product("p", vec![gf3(), m2()]).unwrap();
        let i = Ideal::from_elements(p.size(), (0..81).map(|c| p.from_components(&[0, c]).unwrap()));
        let (q, class) = quotient(&p, &i, "q").unwrap();
        assert_eq!(q.size(), 3);
        // class of (a, B) is a
        for x in p.carrier().step_by(5) {
            assert_eq!(class[x as usize], p.components(x).unwrap()[0]);
        }
    }

    #[test]
    fn corners() {
        let r = m2();
        let e = r.encode_matrix(&r.matrix_ring().unwrap().from_i64_rows(&[vec![1, 0], vec![0, 0]])).unwrap();
        let c = corner_ring(&r, e).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(corner_ring(&r, r.one().unwrap()).unwrap().len(), 81);
        assert_eq!(corner_ring(&r, 0).unwrap().len(), 1);
        assert!(matches!(corner_ring(&r, 1 + 3), Err(RingError::NotAProjection(_))));
    }

    #[test]
    fn closures_of_small_seeds() {
        let r = m2();
        assert_eq!(subring_closure(&r, &[0], true, 100).unwrap().len(), 1);
        let ones = subring_closure(&r, &[r.one().unwrap()], true, 100).unwrap();
        assert_eq!(ones.len(), 3);
        let nil = r.encode_matrix(&r.matrix_ring().unwrap().from_i64_rows(&[vec![0, 1], vec![0, 0]])).unwrap();
        let s = subring_closure(&r, &[nil], true, 100).unwrap();
        let (l, rp) = crate::starring::left_right_projections(r.as_ref(), &nil).unwrap();
        assert!(s.contains(l) && s.contains(rp));
        assert_eq!(q_closed(&r, &s).unwrap(), None);
        assert!(matches!(subring_closure(&r, &[nil], true, 3), Err(RingError::ClosureBudgetExceeded(3))));
    }

    #[test]
    fn annihilator_witness() {
        let p = FiniteRing::product("p", vec![gf3(), m2()]).unwrap();
        let i = Ideal::from_elements(p.size(), (0..81).map(|c| p.from_components(&[0, c]).unwrap()));
        let v = left_action_injective(&p, &i);
        assert_eq!(v.witness, Some(p.from_components(&[1, 0]).unwrap()));
        assert!(left_action_injective(&p, &full_ideal(&p)).injective);
    }
}
