use serde::Serialize;

use super::{linear_map, CoordError};
use crate::exactalg::{HermitianForm, Matrix, Scalar};
use crate::starring::{is_projection, left_action_injective, FiniteRing, Ideal, StarRing};
use crate::subspace::{InnerProductSpace, Subspace, SubspaceError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub additive: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub star_preserving: bool,
    /// `dim U`, the join of the images of `ϱ(p)` over projections `p ∈ I`.
    pub dim_u: usize,
    pub dim_v: usize,
    pub faithful: bool,
    /// First nonzero `r` (code order) acting as zero on `U`.
    pub kernel_witness: Option<u32>,
    pub varrho_faithful: bool,
    pub left_action_injective: bool,
    /// `ρ` faithful exactly when `ϱ` is faithful and `R` acts faithfully on `I`.
    pub criterion_agrees: bool,
}

impl ExtensionReport {
    pub fn is_representation(&self) -> bool {
        self.additive && self.multiplicative && self.unital && self.star_preserving
    }
}

#[derive(Clone, Debug)]
pub struct ExtendedRepresentation {
    pub u: Subspace,
    /// `ρ(r)` for every `r` in code order, vanishing on the pivot completion of `U`.
    pub images: Vec<Matrix>,
    pub report: ExtensionReport,
}

impl ExtendedRepresentation {
    pub fn apply(&self, r: u32) -> &Matrix {
        &self.images[r as usize]
    }
}

fn star_hom_on_ideal(
    ring: &FiniteRing,
    h: &HermitianForm,
    members: &[u32],
    varrho: &dyn Fn(u32) -> Matrix,
) -> Result<(), CoordError> {
    let img: Vec<Matrix> = members.iter().map(|&x| varrho(x)).collect();
    let at = |x: u32| members.binary_search(&x).ok().map(|p| &img[p]);
    let fail = |what: &str, x: u32| CoordError::NotAStarHomomorphism(format!("{what} at {}", ring.describe(&x)));
    for (p, &x) in members.iter().enumerate() {
        let adj = h.adjoint(&img[p]).map_err(|e| CoordError::NotAStarHomomorphism(e.to_string()))?;
        if at(ring.star(&x)) != Some(&adj) {
            return Err(fail("involution", x));
        }
        for (q, &y) in members.iter().enumerate() {
            let sum = img[p].checked_add(&img[q]).map_err(|e| CoordError::NotAStarHomomorphism(e.to_string()))?;
            if at(ring.add(&x, &y)) != Some(&sum) {
                return Err(fail("sum", x));
            }
            if at(ring.mul(&x, &y)) != Some(&img[p].checked_mul(&img[q]).expect("square matrices")) {
                return Err(fail("product", x));
            }
        }
    }
    Ok(())
}

/// Extend a *-representation `ϱ` of the ideal `I` on `V` to `R`, acting on
/// `U = ⋁ im ϱ(p)` over projections `p ∈ I` by `ρ(r)ϱ(p)v = ϱ(rp)v`.
pub fn extend_ideal_representation(
    ring: &FiniteRing,
    ideal: &Ideal,
    space: &InnerProductSpace,
    varrho: &dyn Fn(u32) -> Matrix,
) -> Result<ExtendedRepresentation, CoordError> {
    let one = ring.one().ok_or(CoordError::NotUnital)?;
    let h = space.form().ok_or(CoordError::Subspace(SubspaceError::MissingForm))?;
    let members = ideal.elements();
    star_hom_on_ideal(ring, h, &members, varrho)?;
    let field = space.field();
    let is_zero = |v: &[Scalar]| v.iter().all(|s| field.is_zero(s));

    let projections: Vec<u32> = members.iter().copied().filter(|p| is_projection(ring, p)).collect();
    for &f in &projections {
        for &e in &projections {
            if e == f || ring.mul(&f, &e) != e {
                continue;
            }
            let ve = varrho(e).col_vectors();
            for r in ring.carrier() {
                let (a, b) = (varrho(ring.mul(&r, &f)), varrho(ring.mul(&r, &e)));
                if ve.iter().any(|v| a.apply(v).expect("vector of V") != b.apply(v).expect("vector of V")) {
                    return Err(CoordError::IncompatibleRestrictions(format!(
                        "r = {} on the images of {} ≤ {}",
                        ring.describe(&r),
                        ring.describe(&e),
                        ring.describe(&f)
                    )));
                }
            }
        }
    }

    // basis of U, each vector tagged with a projection whose image holds it
    let mut u = space.zero();
    let mut basis: Vec<(u32, Vec<Scalar>)> = Vec::new();
    for &p in &projections {
        for v in varrho(p).col_vectors() {
            let grown = space.try_join(&u, &space.span(&[v.clone()])?)?;
            if grown.dim() > u.dim() {
                u = grown;
                basis.push((p, v));
            }
        }
    }
    let domain: Vec<Vec<Scalar>> = basis.iter().map(|(_, v)| v.clone()).collect();
    let images: Vec<Matrix> = ring
        .carrier()
        .map(|r| {
            let targets: Vec<Vec<Scalar>> =
                basis.iter().map(|(p, v)| varrho(ring.mul(&r, p)).apply(v).expect("vector of V")).collect();
            linear_map(space, &domain, &targets).expect("independent basis of U")
        })
        .collect();

    let carrier: Vec<u32> = ring.carrier().collect();
    let restrict = |m: &Matrix| domain.iter().map(|v| m.apply(v).expect("vector of V")).collect::<Vec<_>>();
    let rho = |r: u32| &images[r as usize];
    let additive = carrier.iter().all(|&r| {
        carrier.iter().all(|&s| rho(ring.add(&r, &s)) == &rho(r).checked_add(rho(s)).expect("square matrices"))
    });
    let multiplicative = carrier.iter().all(|&r| {
        carrier.iter().all(|&s| rho(ring.mul(&r, &s)) == &rho(r).checked_mul(rho(s)).expect("square matrices"))
    });
    let unital = restrict(rho(one)) == domain;
    let star_preserving = carrier.iter().all(|&r| {
        let (a, b) = (rho(r), rho(ring.star(&r)));
        domain.iter().all(|v| {
            domain.iter().all(|w| {
                h.value(&a.apply(v).expect("vector of V"), w).expect("same space")
                    == h.value(v, &b.apply(w).expect("vector of V")).expect("same space")
            })
        })
    });
    let kernel_witness = carrier.iter().copied().find(|&r| r != ring.zero() && restrict(rho(r)).iter().all(|v| is_zero(v)));
    let faithful = kernel_witness.is_none();
    let varrho_faithful = members.iter().all(|&x| x == ring.zero() || !varrho(x).is_zero());
    let action = left_action_injective(ring, ideal);
    let report = ExtensionReport {
        additive,
        multiplicative,
        unital,
        star_preserving,
        dim_u: u.dim(),
        dim_v: space.dim(),
        faithful,
        kernel_witness,
        varrho_faithful,
        left_action_injective: action.injective,
        criterion_agrees: (varrho_faithful && action.injective) == faithful,
    };
    Ok(ExtendedRepresentation { u, images, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::starring::{catalog_ring, full_ideal};

    #[test]
    fn ideal_of_a_product_gives_an_unfaithful_extension() {
        let r = catalog_ring("m2gf3xgf3").unwrap();
        let factors = r.factors().unwrap();
        let (mi, m2) = if factors[0].size() == 81 { (0, &factors[0]) } else { (1, &factors[1]) };
        let i = Ideal::from_elements(r.size(), r.carrier().filter(|&x| r.components(x).unwrap()[1 - mi] == 0));
        let v = InnerProductSpace::dot(&Field::gf(3), 2);
        let varrho = |x: u32| m2.decode_matrix(r.components(x).unwrap()[mi]).unwrap();
        let ext = extend_ideal_representation(&r, &i, &v, &varrho).unwrap();
        let rep = &ext.report;
        assert!(rep.is_representation());
        assert!(!rep.faithful && rep.varrho_faithful && !rep.left_action_injective && rep.criterion_agrees);
        let w = r.components(rep.kernel_witness.unwrap()).unwrap();
        assert_eq!(w[mi], 0);
        assert_eq!(rep.dim_u, 2);
    }

    #[test]
    fn whole_ring_extends_faithfully() {
        let r = catalog_ring("m2_gf3").unwrap();
        let v = InnerProductSpace::dot(&Field::gf(3), 2);
        let varrho = |x: u32| r.decode_matrix(x).unwrap();
        let ext = extend_ideal_representation(&r, &full_ideal(&r), &v, &varrho).unwrap();
        assert!(ext.report.is_representation() && ext.report.faithful && ext.report.criterion_agrees);
        for x in r.carrier() {
            assert_eq!(*ext.apply(x), varrho(x));
        }
    }

    #[test]
    fn a_non_star_map_is_rejected() {
        let r = catalog_ring("m2_gf3").unwrap();
        let v = InnerProductSpace::dot(&Field::gf(3), 2);
        let varrho = |x: u32| r.decode_matrix(x).unwrap().transpose();
        assert!(matches!(
            extend_ideal_representation(&r, &full_ideal(&r), &v, &varrho),
            Err(CoordError::NotAStarHomomorphism(_))
        ));
    }
}
