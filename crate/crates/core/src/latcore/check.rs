//! Lattice and ortholattice axiom checks over any context.

use rand_chacha::ChaCha8Rng;

use super::{LatError, LatticeContext};

/// Triples are enumerated exhaustively up to this many elements.
const EXHAUSTIVE_TRIPLES: usize = 128;

pub type Witness = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub name: &'static str,
    pub passed: bool,
    pub exhaustive: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub modular: AxiomReport,
    pub complemented: AxiomReport,
    pub relatively_complemented: AxiomReport,
    pub height: usize,
}

impl LatticeReport {
    pub fn is_cml(&self) -> bool {
        self.modular.passed && self.complemented.passed && self.relatively_complemented.passed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MolReport {
    pub axioms: Vec<AxiomReport>,
}

impl MolReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.passed)
    }

    pub fn failed(&self) -> Option<&AxiomReport> {
        self.axioms.iter().find(|a| !a.passed)
    }
}

fn tuples<L: LatticeContext>(l: &L, arity: usize, samples: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<L::Elem>>, bool) {
    if let Some(all) = l.elements() {
        let limit = if arity >= 3 { EXHAUSTIVE_TRIPLES } else { 4096 };
        if all.len() <= limit {
            let mut out: Vec<Vec<L::Elem>> = vec![vec![]];
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
    ((0..samples).map(|_| (0..arity).map(|_| l.random_element(rng)).collect()).collect(), false)
}

fn law<L: LatticeContext>(
    l: &L,
    name: &'static str,
    arity: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
    holds: impl Fn(&[L::Elem]) -> bool,
) -> AxiomReport {
    let (ts, exhaustive) = tuples(l, arity, samples, rng);
    let bad = ts.into_iter().find(|t| !holds(t));
    AxiomReport { name, passed: bad.is_none(), exhaustive, witness: bad.map(|t| t.iter().map(|e| l.describe(e)).collect()) }
}

/// Modularity, complementedness and relative complementedness, exhaustively
/// on small finite lattices and on `samples` random tuples otherwise.
/// Sampled triples are made comparable by replacing `z` with `x ∨ z`.
pub fn verify_lattice_axioms<L: LatticeContext>(l: &L, samples: usize, rng: &mut ChaCha8Rng) -> LatticeReport {
    let modular = law(l, "modular law", 3, samples, rng, |t| {
        let (x, y, z) = (&t[0], &t[1], &l.join(&t[0], &t[2]));
        l.join(x, &l.meet(y, z)) == l.meet(&l.join(x, y), z)
    });
    let complemented = law(l, "complemented", 1, samples, rng, |t| {
        l.complement_in_interval(&l.bottom(), &t[0], &l.top()).is_some()
    });
    let relatively_complemented = law(l, "relatively complemented", 3, samples, rng, |t| {
        let x = &t[0];
        let b = l.meet(x, &t[1]);
        let a = l.join(x, &t[2]);
        l.complement_in_interval(&b, x, &a).is_some()
    });
    LatticeReport { modular, complemented, relatively_complemented, height: l.height() }
}

/// The four orthocomplementation axioms.
pub fn verify_mol<L: LatticeContext>(l: &L, samples: usize, rng: &mut ChaCha8Rng) -> Result<MolReport, LatError> {
    if l.ortho(&l.bottom()).is_none() {
        return Err(LatError::MissingOrthocomplement);
    }
    let o = |x: &L::Elem| l.ortho(x).expect("orthocomplement present");
    let axioms = vec![
        law(l, "antitone", 2, samples, rng, |t| {
            let (x, y) = (&t[0], &l.join(&t[0], &t[1]));
            l.leq(&o(y), &o(x))
        }),
        law(l, "involutive", 1, samples, rng, |t| o(&o(&t[0])) == t[0]),
        law(l, "x meet x-perp is bottom", 1, samples, rng, |t| l.is_bottom(&l.meet(&t[0], &o(&t[0])))),
        law(l, "x join x-perp is top", 1, samples, rng, |t| l.join(&t[0], &o(&t[0])) == l.top()),
    ];
    Ok(MolReport { axioms })
}

/// Distributivity on the tuple set used by the other checks.
pub fn check_distributive_sample<L: LatticeContext>(l: &L, samples: usize, rng: &mut ChaCha8Rng) -> AxiomReport {
    law(l, "distributive law", 3, samples, rng, |t| {
        l.meet(&t[0], &l.join(&t[1], &t[2])) == l.join(&l.meet(&t[0], &t[1]), &l.meet(&t[0], &t[2]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::latcore::{FiniteLattice, LatticeContext};
    use rand::SeedableRng;

    #[test]
    fn pentagon_fails_modularity_with_a_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = verify_lattice_axioms(&FiniteLattice::pentagon(), 0, &mut rng);
        assert!(!r.modular.passed);
        assert_eq!(r.modular.witness.unwrap().len(), 3);
        // the textbook triple a ≤ c, b: a ∨ (b ∧ c) = a but (a ∨ b) ∧ c = c
        let p = FiniteLattice::pentagon();
        assert_eq!(p.join(&1, &p.meet(&2, &3)), 1);
        assert_eq!(p.meet(&p.join(&1, &2), &3), 3);
        let b = verify_lattice_axioms(&FiniteLattice::boolean(2), 0, &mut rng);
        assert!(b.is_cml() && b.height == 2);
    }

    #[test]
    fn diamond_is_modular_but_not_distributive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let d = FiniteLattice::diamond();
        assert!(verify_lattice_axioms(&d, 0, &mut rng).modular.passed);
        assert!(!check_distributive_sample(&d, 0, &mut rng).passed);
    }

    #[test]
    fn missing_ortho_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(verify_mol(&FiniteLattice::pentagon(), 0, &mut rng), Err(LatError::MissingOrthocomplement));
    }
}
