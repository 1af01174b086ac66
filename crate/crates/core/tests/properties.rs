use proptest::prelude::*;

use starreg::coord::{
    adjoint_checks, decomposition_system_of_frame, graph, morphism_from_graph, Decomposition, Eta, ModuleBackend,
    Sublattice,
};
use starreg::exactalg::{Field, Matrix};
use starreg::frames::{canonical_frame, stabilize_frame, verify_frame, Level};
use starreg::latcore::LatticeContext;
use starreg::starring::{catalog_ring, rickart_inverse, StarRing};
use starreg::subspace::{InnerProductSpace, Subspace};

fn q(m: usize) -> InnerProductSpace {
    InnerProductSpace::dot(&Field::rationals(), m)
}

fn matrix(v: &InnerProductSpace, entries: &[i64]) -> Matrix {
    let m = v.dim();
    Matrix::from_i64_rows(v.field(), &entries.chunks(m).map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn subspace(v: &InnerProductSpace, rows: &[Vec<i64>]) -> Subspace {
    v.span_i64(rows).unwrap()
}

fn vectors(m: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, m), 0..=max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_plus_nullity_is_the_width(entries in prop::collection::vec(0i64..5, 12)) {
        let f = Field::gf(5);
        let m = Matrix::from_i64_rows(&f, &entries.chunks(4).map(|r| r.to_vec()).collect::<Vec<_>>());
        prop_assert_eq!(m.rank() + m.kernel().len(), 4);
    }

    #[test]
    fn relative_inverse_is_an_involution(x in 0u32..81) {
        let r = catalog_ring("m2_gf3").unwrap();
        let qx = rickart_inverse(&r, &x).unwrap();
        prop_assert_eq!(r.mul3(&x, &qx, &x), x);
        prop_assert_eq!(rickart_inverse(&r, &qx).unwrap(), x);
    }

    #[test]
    fn subspace_lattice_is_modular_and_orthocomplemented(a in vectors(3, 2), b in vectors(3, 2), c in vectors(3, 2)) {
        let v = q(3);
        let (a, b, c) = (subspace(&v, &a), subspace(&v, &b), subspace(&v, &c));
        let c = v.join(&a, &c);
        prop_assert_eq!(v.join(&a, &v.meet(&b, &c)), v.meet(&v.join(&a, &b), &c));
        let ao = v.ortho(&a).unwrap();
        prop_assert_eq!(v.ortho(&ao).unwrap(), a.clone());
        prop_assert!(v.direct_sum_is(&a, &ao, &v.top()));
    }

    #[test]
    fn graph_determines_the_morphism(entries in prop::collection::vec(-4i64..=4, 2)) {
        let v = q(3);
        let d = Decomposition::new(&v, vec![v.axis(0), v.join(&v.axis(1), &v.axis(2))]).unwrap();
        // φ: M_1 → M_0, e_1 ↦ a e_0, e_2 ↦ b e_0
        let phi = matrix(&v, &[0, entries[0], entries[1], 0, 0, 0, 0, 0, 0]);
        let g = graph(&v, &d, 1, &phi);
        prop_assert!(v.direct_sum_is(&g, &d.summands[0], &v.top()));
        prop_assert_eq!(morphism_from_graph(&v, &d, 1, 0, &g).unwrap(), phi);
    }

    #[test]
    fn adjoint_verdicts_agree(entries in prop::collection::vec(-4i64..=4, 4), bump in -2i64..=2) {
        let v = q(4);
        let ui = v.join(&v.axis(0), &v.axis(1));
        let uj = v.join(&v.axis(2), &v.axis(3));
        let f = matrix(&v, &[0, 0, 0, 0, 0, 0, 0, 0, entries[0], entries[1], 0, 0, entries[2], entries[3], 0, 0]);
        let mut g = f.transpose();
        g.set(1, 3, v.field().add(g.get(1, 3), &v.field().from_i64(bump)));
        let verdict = adjoint_checks(&v, &ui, &uj, &f, &g).unwrap();
        prop_assert!(verdict.agree());
        prop_assert_eq!(verdict.pointwise, bump == 0);
    }

    #[test]
    fn rho_preserves_the_involution(entries in prop::collection::vec(-5i64..=5, 9)) {
        let v = q(3);
        let frame = stabilize_frame(&v, &canonical_frame(&v, 3, 0).unwrap()).unwrap();
        let ds = decomposition_system_of_frame(&v, &frame, Sublattice::Full).unwrap();
        let eta = Eta::new(&v, &ds, &v, &ds, |u: &Subspace| u.clone()).unwrap();
        let r = matrix(&v, &entries);
        let star = v.star(&r).unwrap();
        prop_assert_eq!(eta.apply(&star).unwrap(), v.star(&eta.apply(&r).unwrap()).unwrap());
    }

    #[test]
    fn canonical_frames_pass_every_clause(m in 2usize..=6, n in 1usize..=3, k in 0usize..=2) {
        let v = q(m);
        if let Some(frame) = canonical_frame(&v, n, k) {
            let stable = stabilize_frame(&v, &frame).unwrap();
            let report = verify_frame(&v, &stable, Level::StableOrthogonal);
            prop_assert!(report.passed(), "{:?}", report.failures);
        }
    }
}
