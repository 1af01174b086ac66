//! Homomorphisms between finite lattices and lifting of complements.

use super::{FiniteLattice, LatError, LatticeContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeHom {
    /// Image of each source element.
    pub map: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub preserves_bounds: bool,
    pub preserves_meet: bool,
    pub preserves_join: bool,
    pub surjective: bool,
    pub injective: bool,
    pub witness: Option<(u32, u32)>,
}

impl HomReport {
    pub fn is_hom(&self) -> bool {
        self.preserves_bounds && self.preserves_meet && self.preserves_join
    }
}

impl LatticeHom {
    pub fn identity(l: &FiniteLattice) -> LatticeHom {
        LatticeHom { map: l.carrier().collect() }
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.map[a as usize]
    }

    pub fn verify(&self, src: &FiniteLattice, tgt: &FiniteLattice) -> HomReport {
        let f = |a: u32| self.map[a as usize];
        let preserves_bounds = f(src.bottom()) == tgt.bottom() && f(src.top()) == tgt.top();
        let mut preserves_meet = true;
        let mut preserves_join = true;
        let mut witness = None;
        for a in src.carrier() {
            for b in src.carrier() {
                let m = f(src.meet(&a, &b)) == tgt.meet(&f(a), &f(b));
                let j = f(src.join(&a, &b)) == tgt.join(&f(a), &f(b));
                if (!m || !j) && witness.is_none() {
                    witness = Some((a, b));
                }
                preserves_meet &= m;
                preserves_join &= j;
            }
        }
        let mut hit = vec![0usize; tgt.size()];
        self.map.iter().for_each(|&y| hit[y as usize] += 1);
        HomReport {
            preserves_bounds,
            preserves_meet,
            preserves_join,
            surjective: hit.iter().all(|&h| h > 0),
            injective: hit.iter().all(|&h| h <= 1),
            witness,
        }
    }
}

/// First `d` in canonical order with `b ⊕ d = a` and `f(d) = c`, given
/// `b ≤ a` and `f(b) ⊕ c = f(a)`.
pub fn lift_complement(
    src: &FiniteLattice,
    tgt: &FiniteLattice,
    f: &LatticeHom,
    a: u32,
    b: u32,
    c: u32,
) -> Result<u32, LatError> {
    if !src.leq(&b, &a) {
        return Err(LatError::NoLift(format!("{} is not below {}", src.describe(&b), src.describe(&a))));
    }
    if !tgt.direct_sum_is(&f.apply(b), &c, &f.apply(a)) {
        return Err(LatError::NoLift(format!("{} is not a complement of f(b) in [0, f(a)]", tgt.describe(&c))));
    }
    src.carrier()
        .find(|d| f.apply(*d) == c && src.direct_sum_is(&b, d, &a))
        .ok_or_else(|| LatError::NoLift(format!("no preimage of {} complements {} below {}", tgt.describe(&c), src.describe(&b), src.describe(&a))))
}
