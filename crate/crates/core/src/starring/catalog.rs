//! Named rings used by the command line and the test suites.

use std::sync::Arc;

use super::{FiniteRing, MatrixRing, RingError, TableData};
use crate::exactalg::{Field, Involution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Expected *-regularity; re-derived by the verdict code, never assumed.
    pub star_regular: bool,
}

pub const RING_CATALOG: &[CatalogEntry] = &[
    CatalogEntry { name: "gf3", description: "GF(3) as 1x1 matrices, identity involution", star_regular: true },
    CatalogEntry { name: "gf7", description: "GF(7), identity involution", star_regular: true },
    CatalogEntry { name: "gf9_frob", description: "GF(9) with the Frobenius involution", star_regular: true },
    CatalogEntry { name: "m2_gf3", description: "M_2(GF(3)) with transpose", star_regular: true },
    CatalogEntry { name: "m2_gf7", description: "M_2(GF(7)) with transpose", star_regular: true },
    CatalogEntry { name: "m2_gf11", description: "M_2(GF(11)) with transpose", star_regular: true },
    CatalogEntry { name: "m2_gf5", description: "M_2(GF(5)) with transpose; 1 + 2^2 = 0", star_regular: false },
    CatalogEntry { name: "m3_gf2", description: "M_3(GF(2)) with transpose", star_regular: false },
    CatalogEntry { name: "m3_gf3", description: "M_3(GF(3)) with transpose", star_regular: false },
    CatalogEntry { name: "gf3xgf3", description: "GF(3) x GF(3)", star_regular: true },
    CatalogEntry { name: "gf3xm2gf3", description: "GF(3) x M_2(GF(3)) with transpose", star_regular: true },
    CatalogEntry { name: "m2gf3xgf3", description: "M_2(GF(3)) x GF(3) with transpose", star_regular: true },
    CatalogEntry { name: "m2_gf3_table", description: "M_2(GF(3)) with transpose, as explicit tables", star_regular: true },
    CatalogEntry {
        name: "gf2cubed_rot",
        description: "GF(2)^3 with a coordinate rotation in place of an involution (order three)",
        star_regular: false,
    },
];

pub fn catalog_names() -> Vec<&'static str> {
    RING_CATALOG.iter().map(|e| e.name).collect()
}

fn matrices(name: &str, field: Field, n: usize) -> Result<FiniteRing, RingError> {
    FiniteRing::from_matrix_ring(name, MatrixRing::standard(&field, n))
}

fn rotation_ring() -> Result<FiniteRing, RingError> {
    let mut add = Vec::with_capacity(64);
    let mut mul = Vec::with_capacity(64);
    for a in 0..8u32 {
        for b in 0..8u32 {
            add.push(a ^ b);
            mul.push(a & b);
        }
    }
    // bit i is coordinate i; (x0, x1, x2) ↦ (x2, x0, x1)
    let star = (0..8u32).map(|x| ((x << 1) & 0b110) | (x >> 2)).collect();
    FiniteRing::from_tables("gf2cubed_rot", TableData { size: 8, add, mul, star, zero: 0, one: Some(7) })
}

pub fn catalog_ring(name: &str) -> Result<FiniteRing, RingError> {
    let gf3 = || matrices("gf3", Field::gf(3), 1).map(Arc::new);
    let m2gf3 = || matrices("m2_gf3", Field::gf(3), 2).map(Arc::new);
    match name {
        "gf3" => matrices(name, Field::gf(3), 1),
        "gf7" => matrices(name, Field::gf(7), 1),
        "gf9_frob" => matrices(name, Field::galois(3, 2, Involution::Frobenius)?, 1),
        "m2_gf3" => matrices(name, Field::gf(3), 2),
        "m2_gf7" => matrices(name, Field::gf(7), 2),
        "m2_gf11" => matrices(name, Field::gf(11), 2),
        "m2_gf5" => matrices(name, Field::gf(5), 2),
        "m3_gf2" => matrices(name, Field::gf(2), 3),
        "m3_gf3" => matrices(name, Field::gf(3), 3),
        "gf3xgf3" => FiniteRing::product(name, vec![gf3()?, gf3()?]),
        "gf3xm2gf3" => FiniteRing::product(name, vec![gf3()?, m2gf3()?]),
        "m2gf3xgf3" => FiniteRing::product(name, vec![m2gf3()?, gf3()?]),
        "m2_gf3_table" => Ok(m2gf3()?.to_table(name)),
        "gf2cubed_rot" => rotation_ring(),
        _ => Err(RingError::Invalid(format!("unknown catalog ring {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starring::{is_star_regular_finite, StarRing, DEFAULT_CARRIER_BOUND};

    #[test]
    fn every_entry_builds_and_matches_its_verdict() {
        for e in RING_CATALOG {
            let r = catalog_ring(e.name).unwrap();
            if e.name == "gf2cubed_rot" {
                // not a ring with involution, so the verdict is not meaningful
                continue;
            }
            let v = is_star_regular_finite(&r, DEFAULT_CARRIER_BOUND).unwrap();
            assert_eq!(v.star_regular, e.star_regular, "{}", e.name);
            if let Some(w) = v.witness {
                assert!(w != r.zero() && r.mul(&w, &r.star(&w)) == r.zero());
            }
        }
    }

    #[test]
    fn rotation_has_order_three() {
        let r = rotation_ring().unwrap();
        assert_eq!(r.star(&1), 2);
        assert_eq!(r.star(&r.star(&r.star(&1))), 1);
    }
}
