//! Finitely generated *-closed subrings of `M_n(Z) ⊂ M_n(Q)`.
//!
//! Finite *-closed subrings of finite *-regular rings are always *-regular,
//! so subrings that are closed under `+`, `·`, `*` but not under `q` only
//! show up in infinite rings. These Z-lattices are the test bed for that
//! direction: membership is decided exactly through a Hermite normal form.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{Signed, Zero};

use super::{rickart_inverse, MatrixRing, RingError, StarRing};
use crate::exactalg::{Field, Matrix, Scalar};

/// Echelon basis of a subgroup of `Z^d` with positive pivots.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZLattice {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl ZLattice {
    pub fn new(dim: usize) -> ZLattice {
        ZLattice { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for row in &self.rows {
            let p = first_nonzero(row).expect("basis rows are nonzero");
            match first_nonzero(&v) {
                None => return true,
                Some(c) if c < p => return false,
                Some(c) if c > p => continue,
                Some(_) => {
                    let (q, r) = v[p].div_rem(&row[p]);
                    if !r.is_zero() {
                        return false;
                    }
                    for (a, b) in v.iter_mut().zip(row) {
                        *a -= &q * b;
                    }
                }
            }
        }
        first_nonzero(&v).is_none()
    }

    /// Adds `v` to the lattice; returns whether the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.contains(v) {
            return false;
        }
        let mut v = v.to_vec();
        loop {
            let Some(c) = first_nonzero(&v) else { return true };
            match self.rows.iter().position(|r| first_nonzero(r) == Some(c)) {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    let at = self.rows.iter().position(|r| first_nonzero(r) > Some(c)).unwrap_or(self.rows.len());
                    self.rows.insert(at, v);
                    return true;
                }
                Some(i) => {
                    let b = self.rows[i].clone();
                    let e = b[c].extended_gcd(&v[c]);
                    let (x, y) = (&b[c] / &e.gcd, &v[c] / &e.gcd);
                    let mut nb: Vec<BigInt> = b.iter().zip(&v).map(|(p, q)| &e.x * p + &e.y * q).collect();
                    if nb[c].is_negative() {
                        nb.iter_mut().for_each(|t| *t = -t.clone());
                    }
                    let nv: Vec<BigInt> = b.iter().zip(&v).map(|(p, q)| &y * p - &x * q).collect();
                    self.rows[i] = nb;
                    v = nv;
                }
            }
        }
    }
}

/// A Z-order: the subring of `M_n(Z)` generated by some integer matrices,
/// closed under `+`, `−`, `·` and the transpose.
#[derive(Clone, Debug)]
pub struct ZOrder {
    n: usize,
    ring: MatrixRing,
    lattice: ZLattice,
}

/// Outcome of the two independent tests on a Z-order.
#[derive(Clone, Debug)]
pub struct ZOrderClassification {
    /// `x` in the order with `q(x)` outside it.
    pub q_witness: Option<(Matrix, Matrix)>,
    /// `x` in the order with no `y` in the order satisfying `xyx = x`.
    pub regularity_witness: Option<Matrix>,
}

impl ZOrderClassification {
    pub fn agree(&self) -> bool {
        self.q_witness.is_some() == self.regularity_witness.is_some()
    }
}

fn to_vec(m: &Matrix) -> Option<Vec<BigInt>> {
    m.data()
        .iter()
        .map(|s| match s {
            Scalar::Rat(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        })
        .collect()
}

impl ZOrder {
    /// Closure of `gens` (integer matrices) under the ring operations and
    /// transpose; `None` when more than `max_rounds` saturation passes are needed.
    pub fn generate(n: usize, gens: &[Vec<Vec<i64>>], max_rounds: usize) -> Option<ZOrder> {
        let q = Field::rationals();
        let ring = MatrixRing::standard(&q, n);
        let mut order = ZOrder { n, ring, lattice: ZLattice::new(n * n) };
        for g in gens {
            let m = Matrix::from_i64_rows(&q, g);
            order.lattice.insert(&to_vec(&m)?);
            order.lattice.insert(&to_vec(&m.transpose())?);
        }
        for _ in 0..max_rounds {
            let basis = order.basis();
            let mut grew = false;
            for a in &basis {
                for b in &basis {
                    grew |= order.lattice.insert(&to_vec(&(a * b))?);
                }
            }
            if !grew {
                return Some(order);
            }
        }
        None
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ring(&self) -> &MatrixRing {
        &self.ring
    }

    pub fn basis(&self) -> Vec<Matrix> {
        let q = Field::rationals();
        self.lattice
            .basis()
            .iter()
            .map(|row| {
                let data = row.iter().map(|x| Scalar::Rat(num::rational::BigRational::from_integer(x.clone()))).collect();
                Matrix::new(&q, self.n, self.n, data).expect("n² entries")
            })
            .collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        to_vec(m).is_some_and(|v| self.lattice.contains(&v))
    }

    /// Candidates `k·b` for basis elements `b` and `1 ≤ k ≤ max_multiple`,
    /// plus pairwise sums of basis elements.
    fn candidates(&self, max_multiple: i64) -> Vec<Matrix> {
        let basis = self.basis();
        let q = Field::rationals();
        let mut out = Vec::new();
        for k in 1..=max_multiple {
            out.extend(basis.iter().map(|b| b.scale(&q.from_i64(k))));
        }
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                out.push(a + b);
            }
        }
        out
    }

    /// First candidate whose relative inverse in `M_n(Q)` leaves the order.
    pub fn q_witness(&self, max_multiple: i64) -> Result<Option<(Matrix, Matrix)>, RingError> {
        for x in self.candidates(max_multiple) {
            let qx = rickart_inverse(&self.ring, &x)?;
            if !self.contains(&qx) {
                return Ok(Some((x, qx)));
            }
        }
        Ok(None)
    }

    /// First candidate `x` outside the lattice `x·S·x`, which is exactly the
    /// set of `xyx` with `y` in the order.
    pub fn regularity_witness(&self, max_multiple: i64) -> Option<Matrix> {
        let basis = self.basis();
        self.candidates(max_multiple).into_iter().find(|x| {
            let mut sandwich = ZLattice::new(self.n * self.n);
            for b in &basis {
                sandwich.insert(&to_vec(&self.ring.mul3(x, b, x)).expect("integral products"));
            }
            !sandwich.contains(&to_vec(x).expect("integral element"))
        })
    }

    pub fn classify(&self, max_multiple: i64) -> Result<ZOrderClassification, RingError> {
        Ok(ZOrderClassification {
            q_witness: self.q_witness(max_multiple)?,
            regularity_witness: self.regularity_witness(max_multiple),
        })
    }

    /// Whether `x·x* = 0` forces `x = 0` on the candidates; the transpose is
    /// positive definite over Q so this always holds.
    pub fn star_is_proper(&self, max_multiple: i64) -> bool {
        self.candidates(max_multiple).iter().all(|x| x.is_zero() || !self.ring.mul(x, &self.ring.star(x)).is_zero())
    }
}

pub fn bigint(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| bigint(x)).collect()
    }

    #[test]
    fn lattice_membership_matches_brute_force() {
        let mut l = ZLattice::new(2);
        l.insert(&v(&[2, 4]));
        l.insert(&v(&[0, 6]));
        // lattice = {(2a, 4a + 6b)}; brute-force the small box
        for x in -8..=8i64 {
            for y in -12..=12i64 {
                let brute = (-4..=4).any(|a| (-4..=4).any(|b| 2 * a == x && 4 * a + 6 * b == y));
                assert_eq!(l.contains(&v(&[x, y])), brute, "({x},{y})");
            }
        }
        l.insert(&v(&[3, 0]));
        assert!(l.contains(&v(&[1, 0])) || l.contains(&v(&[1, 2])));
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn integer_matrices_are_not_star_regular() {
        let z = ZOrder::generate(2, &[vec![vec![1, 0], vec![0, 0]], vec![vec![0, 1], vec![0, 0]]], 10).unwrap();
        assert_eq!(z.rank(), 4);
        let c = z.classify(2).unwrap();
        assert!(c.agree());
        let (x, qx) = c.q_witness.unwrap();
        assert!(z.contains(&x) && !z.contains(&qx));
        assert!(c.regularity_witness.is_some());
    }

    #[test]
    fn scalar_order_is_two_times_z() {
        let z = ZOrder::generate(2, &[vec![vec![2, 0], vec![0, 2]]], 10).unwrap();
        assert_eq!(z.rank(), 1);
        let q = Field::rationals();
        assert!(!z.contains(&Matrix::identity(&q, 2)));
        assert!(z.contains(&Matrix::identity(&q, 2).scale(&q.from_i64(4))));
        let (x, _) = z.q_witness(1).unwrap().unwrap();
        assert_eq!(x, Matrix::identity(&q, 2).scale(&q.from_i64(2)));
    }
}
