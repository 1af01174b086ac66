use serde::Serialize;

use super::{linear_map, CoordError, DecompositionSystem, ModuleBackend, RingModule, ENDO_ENUMERATION_LIMIT};
use crate::exactalg::{vector_from_code, HermitianForm, Matrix, Scalar};
use crate::latcore::LatticeContext;
use crate::starring::{RingError, StarRing};
use crate::subspace::{InnerProductSpace, Subspace, SubspaceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdjointVerdicts {
    /// `⟨fv, w⟩ = ⟨v, gw⟩` on bases of `U_i` and `U_j`.
    pub pointwise: bool,
    /// `Γ(f) ⊥ Γ(−g)`.
    pub graph: bool,
}

impl AdjointVerdicts {
    pub fn agree(&self) -> bool {
        self.pointwise == self.graph
    }
}

fn form(space: &InnerProductSpace) -> Result<&HermitianForm, CoordError> {
    space.form().ok_or(CoordError::Subspace(SubspaceError::MissingForm))
}

fn apply(f: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    f.apply(v).expect("vector of the space")
}

fn pointwise(h: &HermitianForm, ui: &Subspace, uj: &Subspace, f: &Matrix, g: &Matrix) -> bool {
    ui.vectors().iter().all(|v| {
        uj.vectors().iter().all(|w| h.value(&apply(f, v), w).expect("same space") == h.value(v, &apply(g, w)).expect("same space"))
    })
}

fn orthogonal(space: &InnerProductSpace, x: &Subspace, y: &Subspace) -> Result<bool, CoordError> {
    Ok(space.try_leq(x, &space.try_ortho(y)?)?)
}

/// Adjointness of `f: U_i → U_j` and `g: U_j → U_i` pointwise and through
/// orthogonality of the graphs `Γ(f) = {v − fv}` and `Γ(−g) = {w + gw}`.
pub fn adjoint_checks(
    space: &InnerProductSpace,
    ui: &Subspace,
    uj: &Subspace,
    f: &Matrix,
    g: &Matrix,
) -> Result<AdjointVerdicts, CoordError> {
    let h = form(space)?;
    if !orthogonal(space, ui, uj)? {
        return Err(CoordError::SummandsNotOrthogonal);
    }
    let field = space.field();
    let gf: Vec<Vec<Scalar>> =
        ui.vectors().iter().map(|v| v.iter().zip(apply(f, v)).map(|(x, y)| field.sub(x, &y)).collect()).collect();
    let gg: Vec<Vec<Scalar>> =
        uj.vectors().iter().map(|w| w.iter().zip(apply(g, w)).map(|(x, y)| field.add(x, &y)).collect()).collect();
    let graph = orthogonal(space, &space.span(&gf)?, &space.span(&gg)?)?;
    Ok(AdjointVerdicts { pointwise: pointwise(h, ui, uj, f, g), graph })
}

/// Every `g: U_j → U_i` (zero on the pivot completion of `U_j`) passing the
/// graph test against `f`; `None` when there are too many maps to enumerate.
pub fn adjoint_candidates(
    space: &InnerProductSpace,
    ui: &Subspace,
    uj: &Subspace,
    f: &Matrix,
) -> Result<Option<Vec<Matrix>>, CoordError> {
    let Some(q) = space.field().order() else { return Ok(None) };
    let (di, dj) = (ui.dim(), uj.dim());
    let Some(count) = q.checked_pow((di * dj) as u32).filter(|&c| c <= ENDO_ENUMERATION_LIMIT) else { return Ok(None) };
    let field = space.field();
    let basis_i = ui.vectors();
    let mut out = Vec::new();
    for code in 0..count {
        let coeffs = vector_from_code(code, q, di * dj);
        let images: Vec<Vec<Scalar>> = coeffs
            .chunks(di.max(1))
            .take(dj)
            .map(|c| {
                (0..space.dim())
                    .map(|t| c.iter().zip(&basis_i).fold(field.zero(), |acc, (s, b)| field.add(&acc, &field.mul(s, &b[t]))))
                    .collect()
            })
            .collect();
        let images = if di == 0 { vec![vec![field.zero(); space.dim()]; dj] } else { images };
        let g = linear_map(space, &uj.vectors(), &images).expect("basis vectors");
        if adjoint_checks(space, ui, uj, f, &g)?.graph {
            out.push(g);
        }
    }
    Ok(Some(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RingAdjointVerdicts {
    /// `a_ij = b_ji*`.
    pub star_relation: bool,
    /// `Γ(â_ij) ≤ Γ(−b̂_ji)⊥` in the ideal lattice.
    pub graphs_orthogonal: bool,
    /// `(e_i + b_ji)* (e_j − a_ij) = 0`.
    pub product_zero: bool,
}

impl RingAdjointVerdicts {
    pub fn agree(&self) -> bool {
        self.star_relation == self.graphs_orthogonal && self.graphs_orthogonal == self.product_zero
    }
}

/// Ring form of the graph test for `a ∈ e_i R e_j`, `b ∈ e_j R e_i` with
/// orthogonal projections `e_i`, `e_j`: `Γ(â) = (e_j − a)R`, `Γ(−b̂) = (e_i + b)R`.
pub fn ring_adjoint_checks(
    m: &RingModule<'_>,
    ei: u32,
    ej: u32,
    a: u32,
    b: u32,
) -> Result<RingAdjointVerdicts, CoordError> {
    let r = m.ring;
    if r.mul(&ei, &ej) != r.zero() || r.star(&ei) != ei || r.star(&ej) != ej {
        return Err(CoordError::SummandsNotOrthogonal);
    }
    if r.mul3(&ei, &a, &ej) != a || r.mul3(&ej, &b, &ei) != b {
        return Err(RingError::Invalid("a must lie in e_i R e_j and b in e_j R e_i".into()).into());
    }
    let l = m.lattice();
    let ga = m.image(&r.sub(&ej, &a));
    let gb = m.image(&r.add(&ei, &b));
    let gbp = l.ortho(&gb).ok_or(CoordError::Lattice(crate::latcore::LatError::MissingOrthocomplement))?;
    Ok(RingAdjointVerdicts {
        star_relation: a == r.star(&b),
        graphs_orthogonal: l.leq(&ga, &gbp),
        product_zero: r.mul(&r.star(&r.add(&ei, &b)), &r.sub(&ej, &a)) == r.zero(),
    })
}

/// `ε*_ki ∘ ε*_ik = π_i` for `k < n` and every `i ≠ k`; returns the failing pairs.
pub fn epsilon_adjoint_identities(
    space: &InnerProductSpace,
    ds: &DecompositionSystem<InnerProductSpace>,
) -> Result<Vec<(usize, usize)>, CoordError> {
    let h = form(space)?;
    let adj = |x: &Matrix| h.adjoint(x).expect("endomorphism of the space");
    let mut failures = Vec::new();
    for k in 0..ds.n {
        for i in 0..ds.len() {
            if i != k && space.compose(&adj(ds.eps(k, i)), &adj(ds.eps(i, k))) != *ds.proj(i) {
                failures.push((k, i));
            }
        }
    }
    Ok(failures)
}

/// For `a: U_i → U_j` and `b: U_j → U_i`: whether `a, b` are adjoint, and
/// whether `ε*_i0 ∘ b ∘ ε*_1j` and `ε_1j ∘ a ∘ ε_i0` are adjoint on `U_1, U_0`.
pub fn drag_check(
    space: &InnerProductSpace,
    ds: &DecompositionSystem<InnerProductSpace>,
    i: usize,
    j: usize,
    a: &Matrix,
    b: &Matrix,
) -> Result<(bool, bool), CoordError> {
    let h = form(space)?;
    if ds.n < 2 {
        return Err(CoordError::FormatTooSmall { n: ds.n });
    }
    let adj = |x: &Matrix| h.adjoint(x).expect("endomorphism of the space");
    let u = &ds.decomposition.summands;
    let direct = pointwise(h, &u[i], &u[j], a, b);
    let f = space.compose3(ds.eps(1, j), a, ds.eps(i, 0));
    let g = space.compose3(&adj(ds.eps(i, 0)), b, &adj(ds.eps(1, j)));
    Ok((direct, pointwise(h, &u[0], &u[1], &f, &g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn blocks(v: &InnerProductSpace) -> (Subspace, Subspace) {
        (v.join(&v.axis(0), &v.axis(1)), v.join(&v.axis(2), &v.axis(3)))
    }

    #[test]
    fn adjoint_of_a_block_map_passes_both_tests() {
        let v = InnerProductSpace::dot(&Field::rationals(), 4);
        let (ui, uj) = blocks(&v);
        let f = Matrix::from_i64_rows(v.field(), &[vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![2, -1, 0, 0], vec![3, 5, 0, 0]]);
        let g = v.form().unwrap().adjoint(&f).unwrap();
        assert_eq!(adjoint_checks(&v, &ui, &uj, &f, &g).unwrap(), AdjointVerdicts { pointwise: true, graph: true });
        let mut bad = g.clone();
        bad.set(0, 2, v.field().add(g.get(0, 2), &v.field().one()));
        assert_eq!(adjoint_checks(&v, &ui, &uj, &f, &bad).unwrap(), AdjointVerdicts { pointwise: false, graph: false });
        assert!(matches!(adjoint_checks(&v, &ui, &ui, &f, &g), Err(CoordError::SummandsNotOrthogonal)));
    }

    #[test]
    fn adjoint_is_unique_over_gf3() {
        let v = InnerProductSpace::dot(&Field::gf(3), 4);
        let (ui, uj) = blocks(&v);
        let f = Matrix::from_i64_rows(v.field(), &[vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![1, 2, 0, 0], vec![0, 1, 0, 0]]);
        let cands = adjoint_candidates(&v, &ui, &uj, &f).unwrap().unwrap();
        assert_eq!(cands.len(), 1);
        assert!(adjoint_checks(&v, &ui, &uj, &f, &cands[0]).unwrap().pointwise);
    }

    #[test]
    fn epsilon_maps_and_dragging_in_q4() {
        use crate::coord::{decomposition_system_of_frame, Sublattice};
        use crate::frames::{canonical_frame, stabilize_frame};
        let v = InnerProductSpace::dot(&Field::rationals(), 4);
        let f = stabilize_frame(&v, &canonical_frame(&v, 4, 0).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&v, &f, Sublattice::Full).unwrap();
        assert!(epsilon_adjoint_identities(&v, &ds).unwrap().is_empty());
        let a = Matrix::unit(v.field(), 4, 3, 2).scale(&v.field().from_i64(5));
        let b = v.form().unwrap().adjoint(&a).unwrap();
        assert_eq!(drag_check(&v, &ds, 2, 3, &a, &b).unwrap(), (true, true));
        assert_eq!(drag_check(&v, &ds, 2, 3, &a, &a.transpose().scale(&v.field().from_i64(2))).unwrap(), (false, false));
    }

    #[test]
    fn ring_routes_agree_on_m2_gf3_corners() {
        use crate::latcore::principal_right_ideal_lattice;
        use crate::starring::catalog_ring;
        let r = catalog_ring("m2_gf3").unwrap();
        let ideals = principal_right_ideal_lattice(&r, 6561).unwrap();
        let m = RingModule::new(&r, &ideals);
        let unit = |i, j| r.encode_matrix(&Matrix::unit(&Field::gf(3), 2, i, j)).unwrap();
        let (e0, e1) = (unit(0, 0), unit(1, 1));
        let rr = &r;
        let corner = |x: u32, y: u32| rr.carrier().filter(move |&c| rr.mul3(&x, &c, &y) == c).collect::<Vec<_>>();
        for a in corner(e0, e1) {
            for b in corner(e1, e0) {
                let v = ring_adjoint_checks(&m, e0, e1, a, b).unwrap();
                assert!(v.agree(), "{a} {b}");
                assert_eq!(v.star_relation, a == r.star(&b));
            }
        }
        assert!(ring_adjoint_checks(&m, e0, e0, 0, 0).is_err());
    }
}
