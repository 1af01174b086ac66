//! Axiom checks for rings with involution and *-regularity verdicts.

use rand_chacha::ChaCha8Rng;

use super::{rickart_inverse, FiniteRing, MatrixRing, RingError, StarRing};
use crate::exactalg::{Anisotropy, Matrix};

/// Binary laws are checked on all pairs up to this many elements.
const EXHAUSTIVE_PAIRS: usize = 4096;
/// Ternary laws are checked on all triples up to this many elements.
const EXHAUSTIVE_TRIPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub exhaustive: bool,
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRingReport {
    pub ring: String,
    pub axioms: Vec<AxiomCheck>,
}

impl StarRingReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn failed(&self) -> Vec<&AxiomCheck> {
        self.axioms.iter().filter(|a| !a.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

enum Pool<E> {
    All(Vec<E>),
    Sampled,
}

struct Checker<'a, R: StarRing> {
    ring: &'a R,
    pool: Pool<R::Elem>,
    samples: usize,
    rng: &'a mut ChaCha8Rng,
    out: Vec<AxiomCheck>,
}

impl<R: StarRing> Checker<'_, R> {
    fn draw(&mut self, k: usize) -> Vec<R::Elem> {
        (0..k).map(|_| self.ring.random_element(self.rng)).collect()
    }

    fn tuples(&mut self, arity: usize) -> (Vec<Vec<R::Elem>>, bool) {
        let limit = [usize::MAX, EXHAUSTIVE_PAIRS, EXHAUSTIVE_PAIRS, EXHAUSTIVE_TRIPLES][arity];
        if let Pool::All(all) = &self.pool {
            if all.len() <= limit {
                let mut out: Vec<Vec<R::Elem>> = vec![vec![]];
                for _ in 0..arity {
                    out = out
                        .into_iter()
                        .flat_map(|t| {
                            all.iter().map(move |e| {
                                let mut t = t.clone();
                                t.push(e.clone());
                                t
                            })
                        })
                        .collect();
                }
                return (out, true);
            }
        }
        let n = self.samples;
        ((0..n).map(|_| self.draw(arity)).collect(), false)
    }

    fn law(&mut self, name: &'static str, arity: usize, holds: impl Fn(&R, &[R::Elem]) -> bool) {
        let (tuples, exhaustive) = self.tuples(arity);
        let failure = tuples.into_iter().find(|t| !holds(self.ring, t));
        self.out.push(AxiomCheck {
            name,
            passed: failure.is_none(),
            exhaustive,
            witness: failure.map(|t| t.iter().map(|e| self.ring.describe(e)).collect()),
        });
    }
}

/// Ring axioms, unit laws and involution laws. Laws are checked on every
/// tuple for small carriers and on `samples` random tuples otherwise.
pub fn verify_star_ring<R: StarRing>(ring: &R, samples: usize, rng: &mut ChaCha8Rng) -> StarRingReport {
    let pool = match ring.elements() {
        Some(all) => Pool::All(all),
        None => Pool::Sampled,
    };
    let mut c = Checker { ring, pool, samples, rng, out: Vec::new() };
    c.law("additive associativity", 3, |r, t| r.add(&r.add(&t[0], &t[1]), &t[2]) == r.add(&t[0], &r.add(&t[1], &t[2])));
    c.law("additive commutativity", 2, |r, t| r.add(&t[0], &t[1]) == r.add(&t[1], &t[0]));
    c.law("additive identity", 1, |r, t| r.add(&t[0], &r.zero()) == t[0]);
    c.law("additive inverse", 1, |r, t| r.is_zero(&r.add(&t[0], &r.neg(&t[0]))));
    c.law("multiplicative associativity", 3, |r, t| r.mul(&r.mul(&t[0], &t[1]), &t[2]) == r.mul(&t[0], &r.mul(&t[1], &t[2])));
    c.law("left distributivity", 3, |r, t| r.mul(&t[0], &r.add(&t[1], &t[2])) == r.add(&r.mul(&t[0], &t[1]), &r.mul(&t[0], &t[2])));
    c.law("right distributivity", 3, |r, t| r.mul(&r.add(&t[0], &t[1]), &t[2]) == r.add(&r.mul(&t[0], &t[2]), &r.mul(&t[1], &t[2])));
    if let Some(one) = ring.one() {
        c.law("unit", 1, move |r, t| r.mul(&one, &t[0]) == t[0] && r.mul(&t[0], &one) == t[0]);
    }
    c.law("star additive", 2, |r, t| r.star(&r.add(&t[0], &t[1])) == r.add(&r.star(&t[0]), &r.star(&t[1])));
    c.law("star reverses products", 2, |r, t| r.star(&r.mul(&t[0], &t[1])) == r.mul(&r.star(&t[1]), &r.star(&t[0])));
    c.law("order two", 1, |r, t| r.star(&r.star(&t[0])) == t[0]);
    StarRingReport { ring: "ring".into(), axioms: c.out }
}

pub fn verify_finite_ring(ring: &FiniteRing, samples: usize, rng: &mut ChaCha8Rng) -> StarRingReport {
    StarRingReport { ring: ring.name().to_string(), ..verify_star_ring(ring, samples, rng) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularityClause {
    /// Some element has no quasi-inverse.
    Regularity,
    /// Some nonzero `x` has `x·x* = 0`.
    ProperInvolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityMode {
    /// Every element was tested.
    Exhaustive,
    /// Matrix rings over fields are regular by rank factorization; the
    /// involution was decided by the anisotropy of the row form.
    Structural(Anisotropy),
    Sampled { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict<E> {
    pub star_regular: bool,
    pub mode: RegularityMode,
    pub failed: Option<RegularityClause>,
    pub witness: Option<E>,
}

impl<E> RegularityVerdict<E> {
    fn pass(mode: RegularityMode) -> Self {
        RegularityVerdict { star_regular: true, mode, failed: None, witness: None }
    }

    fn fail(mode: RegularityMode, clause: RegularityClause, witness: E) -> Self {
        RegularityVerdict { star_regular: false, mode, failed: Some(clause), witness: Some(witness) }
    }
}

fn element_clause<R: StarRing>(ring: &R, x: &R::Elem) -> Option<RegularityClause> {
    match ring.quasi_inverse(x) {
        Ok(y) if ring.mul3(x, &y, x) == *x => {}
        _ => return Some(RegularityClause::Regularity),
    }
    if !ring.is_zero(x) && ring.is_zero(&ring.mul(x, &ring.star(x))) {
        return Some(RegularityClause::ProperInvolution);
    }
    None
}

/// Exhaustive over finite carriers, sampled otherwise.
pub fn is_star_regular<R: StarRing>(ring: &R, samples: usize, rng: &mut ChaCha8Rng) -> RegularityVerdict<R::Elem> {
    let (elems, mode) = match ring.elements() {
        Some(all) => (all, RegularityMode::Exhaustive),
        None => ((0..samples).map(|_| ring.random_element(rng)).collect(), RegularityMode::Sampled { samples }),
    };
    for x in elems {
        if let Some(clause) = element_clause(ring, &x) {
            return RegularityVerdict::fail(mode, clause, x);
        }
    }
    RegularityVerdict::pass(mode)
}

/// Matrix backends above `bound` elements are decided structurally and any
/// witness is re-multiplied before it is reported.
pub fn is_star_regular_finite(ring: &FiniteRing, bound: usize) -> Result<RegularityVerdict<u32>, RingError> {
    if ring.size() as usize <= bound {
        let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        return Ok(is_star_regular(ring, 0, &mut rng));
    }
    let Some(m) = ring.matrix_ring() else {
        return Err(RingError::BackendTooLarge { size: ring.size() as usize, bound });
    };
    let verdict = structural_verdict(m, 0, &mut <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0))?;
    Ok(RegularityVerdict {
        star_regular: verdict.star_regular,
        mode: verdict.mode,
        failed: verdict.failed,
        witness: verdict.witness.and_then(|w| ring.encode_matrix(&w)),
    })
}

fn structural_verdict(ring: &MatrixRing, samples: usize, rng: &mut ChaCha8Rng) -> Result<RegularityVerdict<Matrix>, RingError> {
    let (aniso, witness) = ring.proper_involution(samples, rng);
    let mode = RegularityMode::Structural(aniso.clone());
    match witness {
        Some(w) => {
            if w.is_zero() || !ring.mul(&w, &ring.star(&w)).is_zero() {
                return Err(RingError::PostconditionFailed(format!("witness {w} does not satisfy x·x* = 0")));
            }
            Ok(RegularityVerdict::fail(mode, RegularityClause::ProperInvolution, w))
        }
        None if aniso.is_certified() => Ok(RegularityVerdict::pass(mode)),
        None => Ok(RegularityVerdict { star_regular: true, mode: RegularityMode::Sampled { samples }, failed: None, witness: None }),
    }
}

/// Verdict for `M_n(F)` over any field: structural for the involution,
/// plus quasi-inverse checks on `samples` random elements.
pub fn is_star_regular_matrix(ring: &MatrixRing, samples: usize, rng: &mut ChaCha8Rng) -> Result<RegularityVerdict<Matrix>, RingError> {
    for _ in 0..samples {
        let x = ring.random_element(rng);
        if element_clause(ring, &x) == Some(RegularityClause::Regularity) {
            return Ok(RegularityVerdict::fail(RegularityMode::Sampled { samples }, RegularityClause::Regularity, x));
        }
    }
    structural_verdict(ring, samples, rng)
}

/// All elements `y` with `a·y = l(a)`, `y·a = r(a)`, `r(a)·y = y` and
/// `y·l(a) = y`, found by scanning the carrier.
pub fn relative_inverse_candidates(ring: &FiniteRing, a: u32) -> Result<Vec<u32>, RingError> {
    let (l, r) = super::left_right_projections(ring, &a)?;
    Ok(ring
        .carrier()
        .filter(|y| ring.mul(&a, y) == l && ring.mul(y, &a) == r && ring.mul(&r, y) == *y && ring.mul(y, &l) == *y)
        .collect())
}

/// `q(a)` confirmed as the only element meeting its defining conditions.
pub fn unique_relative_inverse(ring: &FiniteRing, a: u32) -> Result<u32, RingError> {
    let q = rickart_inverse(ring, &a)?;
    let found = relative_inverse_candidates(ring, a)?;
    match found.as_slice() {
        [y] if *y == q => Ok(q),
        _ => {
            let other = found.iter().find(|y| **y != q).copied().unwrap_or(q);
            Err(RingError::UniquenessViolation {
                element: ring.describe(&a),
                first: ring.describe(&q),
                second: ring.describe(&other),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::starring::TableData;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(3)
    }

    #[test]
    fn m2_gf3_passes_every_axiom() {
        let r = FiniteRing::from_matrix_ring("m2", MatrixRing::standard(&Field::gf(3), 2)).unwrap();
        let rep = verify_finite_ring(&r, 0, &mut rng());
        assert!(rep.passed(), "{:?}", rep.failed());
        assert!(rep.axioms.iter().all(|a| a.exhaustive));
        assert!(is_star_regular_finite(&r, 6561).unwrap().star_regular);
    }

    #[test]
    fn order_three_involution_is_caught() {
        // GF(2)^3 with componentwise operations and a rotation as "involution"
        let code = |v: [u32; 3]| v[0] + 2 * v[1] + 4 * v[2];
        let bits = |x: u32| [x & 1, (x >> 1) & 1, (x >> 2) & 1];
        let mut add = vec![];
        let mut mul = vec![];
        for a in 0..8 {
            for b in 0..8 {
                add.push(a ^ b);
                mul.push(a & b);
            }
        }
        let star = (0..8).map(|x| { let v = bits(x); code([v[2], v[0], v[1]]) }).collect();
        let t = FiniteRing::from_tables("rot", TableData { size: 8, add, mul, star, zero: 0, one: Some(7) }).unwrap();
        let rep = verify_finite_ring(&t, 0, &mut rng());
        let failed: Vec<_> = rep.failed().iter().map(|a| a.name).collect();
        assert_eq!(failed, vec!["order two"]);
        let w = &rep.check("order two").unwrap().witness.as_ref().unwrap()[0];
        assert_eq!(w, "#1");
    }

    #[test]
    fn verdicts_for_small_matrix_rings() {
        let m3 = FiniteRing::from_matrix_ring("m3", MatrixRing::standard(&Field::gf(2), 3)).unwrap();
        let v = is_star_regular_finite(&m3, 100).unwrap();
        assert!(!v.star_regular);
        assert_eq!(v.failed, Some(RegularityClause::ProperInvolution));
        let w = v.witness.unwrap();
        assert!(m3.mul(&w, &m3.star(&w)) == 0 && w != 0);
        let gf3 = FiniteRing::from_matrix_ring("gf3", MatrixRing::standard(&Field::gf(3), 1)).unwrap();
        assert!(is_star_regular_finite(&gf3, 6561).unwrap().star_regular);
    }

    #[test]
    fn relative_inverse_is_unique_on_rank_one_element() {
        let r = FiniteRing::from_matrix_ring("m2", MatrixRing::standard(&Field::gf(3), 2)).unwrap();
        let q = unique_relative_inverse(&r, 4).unwrap();
        assert_eq!(r.mul3(&4, &q, &4), 4);
    }

    #[test]
    fn sampled_verdict_over_rationals() {
        let r = MatrixRing::standard(&Field::rationals(), 3);
        let v = is_star_regular_matrix(&r, 32, &mut rng()).unwrap();
        assert!(v.star_regular);
        assert_eq!(v.mode, RegularityMode::Structural(Anisotropy::CertifiedByMinors));
        let rep = verify_star_ring(&r, 16, &mut rng());
        assert!(rep.passed());
    }
}
