//! Finite involutive rings with elements indexed by `u32` codes.
//!
//! Three backends share one element encoding:
//! * `Table`: explicit operation tables;
//! * `Matrix`: `M_n(GF(q))`, code `Σ c_idx·q^idx` over row-major entries;
//! * `Product`: mixed radix over the factors, factor 0 least significant.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{MatrixRing, RingError, StarRing};
use crate::exactalg::{Matrix, Scalar};

/// Carriers up to this size get cached operation tables.
const TABLE_CACHE_LIMIT: u32 = 1024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableData {
    pub size: u32,
    /// Row-major `size × size` tables.
    pub add: Vec<u32>,
    pub mul: Vec<u32>,
    pub star: Vec<u32>,
    pub zero: u32,
    pub one: Option<u32>,
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    star: Vec<u32>,
}

enum Backend {
    Table(TableData),
    Matrix { ring: MatrixRing, q: u32 },
    Product { factors: Vec<Arc<FiniteRing>>, strides: Vec<u32> },
}

pub struct FiniteRing {
    name: String,
    backend: Backend,
    size: u32,
    tables: OnceLock<Option<Tables>>,
    table_neg: OnceLock<Vec<u32>>,
    projections: OnceLock<Vec<u32>>,
    idempotents: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteRing({}, {} elements)", self.name, self.size)
    }
}

impl FiniteRing {
    fn build(name: &str, backend: Backend, size: u32) -> FiniteRing {
        FiniteRing {
            name: name.to_string(),
            backend,
            size,
            tables: OnceLock::new(),
            table_neg: OnceLock::new(),
            projections: OnceLock::new(),
            idempotents: OnceLock::new(),
        }
    }

    /// Ring from explicit tables. Only shapes and ranges are validated here;
    /// the axioms are checked by `verify_star_ring`.
    pub fn from_tables(name: &str, data: TableData) -> Result<FiniteRing, RingError> {
        let n = data.size;
        if n == 0 {
            return Err(RingError::Invalid("empty carrier".into()));
        }
        let nn = n as usize * n as usize;
        if data.add.len() != nn || data.mul.len() != nn || data.star.len() != n as usize {
            return Err(RingError::Invalid("table dimensions do not match the carrier".into()));
        }
        let in_range = |v: &u32| *v < n;
        if !data.add.iter().all(in_range) || !data.mul.iter().all(in_range) || !data.star.iter().all(in_range) {
            return Err(RingError::Invalid("table entry outside the carrier".into()));
        }
        if data.zero >= n || data.one.is_some_and(|o| o >= n) {
            return Err(RingError::Invalid("zero or one outside the carrier".into()));
        }
        Ok(FiniteRing::build(name, Backend::Table(data), n))
    }

    pub fn from_matrix_ring(name: &str, ring: MatrixRing) -> Result<FiniteRing, RingError> {
        let q = ring
            .field()
            .order()
            .ok_or_else(|| RingError::Invalid("matrix backend needs a finite field".into()))?;
        let size = q
            .checked_pow((ring.n() * ring.n()) as u32)
            .filter(|&s| s <= i32::MAX as u64)
            .ok_or_else(|| RingError::Invalid("matrix ring too large to index".into()))?;
        Ok(FiniteRing::build(name, Backend::Matrix { ring, q: q as u32 }, size as u32))
    }

    pub fn product(name: &str, factors: Vec<Arc<FiniteRing>>) -> Result<FiniteRing, RingError> {
        if factors.is_empty() {
            return Err(RingError::Invalid("product of no factors".into()));
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut size: u64 = 1;
        for f in &factors {
            strides.push(size as u32);
            size *= f.size as u64;
            if size > i32::MAX as u64 {
                return Err(RingError::Invalid("product too large to index".into()));
            }
        }
        Ok(FiniteRing::build(name, Backend::Product { factors, strides }, size as u32))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn carrier(&self) -> std::ops::Range<u32> {
        0..self.size
    }

    pub fn matrix_ring(&self) -> Option<&MatrixRing> {
        match &self.backend {
            Backend::Matrix { ring, .. } => Some(ring),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<&[Arc<FiniteRing>]> {
        match &self.backend {
            Backend::Product { factors, .. } => Some(factors),
            _ => None,
        }
    }

    pub fn is_table(&self) -> bool {
        matches!(self.backend, Backend::Table(_))
    }

    pub fn decode_matrix(&self, x: u32) -> Option<Matrix> {
        let Backend::Matrix { ring, q } = &self.backend else { return None };
        let mut c = x;
        let data = (0..ring.n() * ring.n())
            .map(|_| {
                let d = c % q;
                c /= q;
                Scalar::Fin(d)
            })
            .collect();
        Some(Matrix::new(ring.field(), ring.n(), ring.n(), data).expect("entries in range"))
    }

    pub fn encode_matrix(&self, m: &Matrix) -> Option<u32> {
        let Backend::Matrix { ring, q } = &self.backend else { return None };
        if m.rows() != ring.n() || m.cols() != ring.n() || m.field() != ring.field() {
            return None;
        }
        let mut code = 0u32;
        for s in m.data().iter().rev() {
            let Scalar::Fin(d) = s else { return None };
            code = code * q + d;
        }
        Some(code)
    }

    pub fn components(&self, x: u32) -> Option<Vec<u32>> {
        let Backend::Product { factors, strides } = &self.backend else { return None };
        Some(factors.iter().zip(strides).map(|(f, s)| (x / s) % f.size).collect())
    }

    pub fn from_components(&self, comps: &[u32]) -> Option<u32> {
        let Backend::Product { factors, strides } = &self.backend else { return None };
        if comps.len() != factors.len() || comps.iter().zip(factors).any(|(c, f)| *c >= f.size) {
            return None;
        }
        Some(comps.iter().zip(strides).map(|(c, s)| c * s).sum())
    }

    fn tables(&self) -> Option<&Tables> {
        self.tables
            .get_or_init(|| {
                if self.size > TABLE_CACHE_LIMIT || self.is_table() {
                    return None;
                }
                let n = self.size;
                let mut add = Vec::with_capacity((n * n) as usize);
                let mut mul = Vec::with_capacity((n * n) as usize);
                for a in 0..n {
                    for b in 0..n {
                        add.push(self.add_direct(a, b));
                        mul.push(self.mul_direct(a, b));
                    }
                }
                let neg = (0..n).map(|a| self.neg_direct(a)).collect();
                let star = (0..n).map(|a| self.star_direct(a)).collect();
                Some(Tables { add, mul, neg, star })
            })
            .as_ref()
    }

    fn add_direct(&self, a: u32, b: u32) -> u32 {
        match &self.backend {
            Backend::Table(t) => t.add[(a * t.size + b) as usize],
            Backend::Matrix { .. } => {
                let m = &self.decode_matrix(a).unwrap() + &self.decode_matrix(b).unwrap();
                self.encode_matrix(&m).unwrap()
            }
            Backend::Product { factors, strides } => factors
                .iter()
                .zip(strides)
                .map(|(f, s)| f.add(&((a / s) % f.size), &((b / s) % f.size)) * s)
                .sum(),
        }
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        match &self.backend {
            Backend::Table(t) => t.mul[(a * t.size + b) as usize],
            Backend::Matrix { .. } => {
                let m = &self.decode_matrix(a).unwrap() * &self.decode_matrix(b).unwrap();
                self.encode_matrix(&m).unwrap()
            }
            Backend::Product { factors, strides } => factors
                .iter()
                .zip(strides)
                .map(|(f, s)| f.mul(&((a / s) % f.size), &((b / s) % f.size)) * s)
                .sum(),
        }
    }

    fn neg_direct(&self, a: u32) -> u32 {
        match &self.backend {
            Backend::Table(t) => {
                let negs = self.table_neg.get_or_init(|| {
                    (0..t.size)
                        .map(|x| (0..t.size).find(|&y| t.add[(x * t.size + y) as usize] == t.zero).unwrap_or(t.zero))
                        .collect()
                });
                negs[a as usize]
            }
            Backend::Matrix { .. } => self.encode_matrix(&-&self.decode_matrix(a).unwrap()).unwrap(),
            Backend::Product { factors, strides } => {
                factors.iter().zip(strides).map(|(f, s)| f.neg(&((a / s) % f.size)) * s).sum()
            }
        }
    }

    fn star_direct(&self, a: u32) -> u32 {
        match &self.backend {
            Backend::Table(t) => t.star[a as usize],
            Backend::Matrix { ring, .. } => self.encode_matrix(&ring.star(&self.decode_matrix(a).unwrap())).unwrap(),
            Backend::Product { factors, strides } => {
                factors.iter().zip(strides).map(|(f, s)| f.star(&((a / s) % f.size)) * s).sum()
            }
        }
    }

    /// Explicit operation tables of this ring.
    pub fn to_table_data(&self) -> TableData {
        let n = self.size;
        let mut add = Vec::with_capacity((n * n) as usize);
        let mut mul = Vec::with_capacity((n * n) as usize);
        for a in 0..n {
            for b in 0..n {
                add.push(self.add(&a, &b));
                mul.push(self.mul(&a, &b));
            }
        }
        TableData { size: n, add, mul, star: (0..n).map(|a| self.star(&a)).collect(), zero: self.zero(), one: self.one() }
    }

    pub fn to_table(&self, name: &str) -> FiniteRing {
        FiniteRing::from_tables(name, self.to_table_data()).expect("tables of a valid ring")
    }

    /// All projections `e = e² = e*` in code order.
    pub fn projections(&self) -> &[u32] {
        self.projections.get_or_init(|| {
            self.carrier().filter(|&e| self.star(&e) == e && self.mul(&e, &e) == e).collect()
        })
    }

    pub fn idempotents(&self) -> &[u32] {
        self.idempotents.get_or_init(|| self.carrier().filter(|&e| self.mul(&e, &e) == e).collect())
    }

    /// `{x·r : r ∈ R}` as a sorted list.
    pub fn right_multiples(&self, x: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.carrier().map(|r| self.mul(&x, &r)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `{r·x : r ∈ R}` as a sorted list.
    pub fn left_multiples(&self, x: u32) -> Vec<u32> {
        let mut v: Vec<u32> = self.carrier().map(|r| self.mul(&r, &x)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Structured form of an element for reports.
    pub fn element_json(&self, x: u32) -> Value {
        match &self.backend {
            Backend::Table(_) => json!(x),
            Backend::Matrix { .. } => {
                let m = self.decode_matrix(x).unwrap();
                let rows: Vec<Vec<u32>> = m
                    .row_vectors()
                    .iter()
                    .map(|r| r.iter().map(|s| if let Scalar::Fin(c) = s { *c } else { 0 }).collect())
                    .collect();
                json!(rows)
            }
            Backend::Product { factors, .. } => {
                let comps = self.components(x).unwrap();
                Value::Array(factors.iter().zip(comps).map(|(f, c)| f.element_json(c)).collect())
            }
        }
    }
}

impl StarRing for FiniteRing {
    type Elem = u32;

    fn zero(&self) -> u32 {
        match &self.backend {
            Backend::Table(t) => t.zero,
            Backend::Matrix { .. } => 0,
            Backend::Product { factors, strides } => factors.iter().zip(strides).map(|(f, s)| f.zero() * s).sum(),
        }
    }

    fn one(&self) -> Option<u32> {
        match &self.backend {
            Backend::Table(t) => t.one,
            Backend::Matrix { ring, .. } => self.encode_matrix(&ring.one().unwrap()),
            Backend::Product { factors, strides } => {
                let mut code = 0;
                for (f, s) in factors.iter().zip(strides) {
                    code += f.one()? * s;
                }
                Some(code)
            }
        }
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        match self.tables() {
            Some(t) => t.add[(*a * self.size + *b) as usize],
            None => self.add_direct(*a, *b),
        }
    }

    fn neg(&self, a: &u32) -> u32 {
        match self.tables() {
            Some(t) => t.neg[*a as usize],
            None => self.neg_direct(*a),
        }
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match self.tables() {
            Some(t) => t.mul[(*a * self.size + *b) as usize],
            None => self.mul_direct(*a, *b),
        }
    }

    fn star(&self, a: &u32) -> u32 {
        match self.tables() {
            Some(t) => t.star[*a as usize],
            None => self.star_direct(*a),
        }
    }

    /// Tables: first `y` in code order with `xyx = x`. Matrices: rank
    /// factorization. Products: componentwise, which is the first solution
    /// in code order whenever every factor uses first-solution choice.
    fn quasi_inverse(&self, x: &u32) -> Result<u32, RingError> {
        match &self.backend {
            Backend::Table(_) => self
                .carrier()
                .find(|y| self.mul(&self.mul(x, y), x) == *x)
                .ok_or_else(|| RingError::NotRegularAt(self.describe(x))),
            Backend::Matrix { ring, .. } => {
                let y = ring.rank_factor_inverse(&self.decode_matrix(*x).unwrap())?;
                Ok(self.encode_matrix(&y).unwrap())
            }
            Backend::Product { factors, strides } => {
                let mut code = 0;
                for (f, s) in factors.iter().zip(strides) {
                    code += f.quasi_inverse(&((x / s) % f.size))? * s;
                }
                Ok(code)
            }
        }
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.size)
    }

    fn describe(&self, a: &u32) -> String {
        match &self.backend {
            Backend::Table(_) => format!("#{a}"),
            Backend::Matrix { .. } => self.decode_matrix(*a).unwrap().to_string(),
            Backend::Product { factors, .. } => {
                let parts: Vec<String> =
                    factors.iter().zip(self.components(*a).unwrap()).map(|(f, c)| f.describe(&c)).collect();
                format!("({})", parts.join(", "))
            }
        }
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some(self.carrier().collect())
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.size as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn m2gf3() -> FiniteRing {
        FiniteRing::from_matrix_ring("m2", MatrixRing::standard(&Field::gf(3), 2)).unwrap()
    }

    #[test]
    fn matrix_encoding_round_trips() {
        let r = m2gf3();
        assert_eq!(r.size(), 81);
        for x in r.carrier() {
            assert_eq!(r.encode_matrix(&r.decode_matrix(x).unwrap()), Some(x));
        }
        // [[1,1],[0,0]] has code 1 + 3
        assert_eq!(r.describe(&4), "[[1, 1], [0, 0]]");
    }

    #[test]
    fn table_quasi_inverse_is_first_solution() {
        let r = m2gf3();
        let t = r.to_table("m2t");
        for x in t.carrier() {
            let y = t.quasi_inverse(&x).unwrap();
            assert_eq!(t.mul(&t.mul(&x, &y), &x), x);
            assert!((0..y).all(|z| t.mul(&t.mul(&x, &z), &x) != x));
        }
    }

    #[test]
    fn product_indexing_puts_first_factor_lowest() {
        let g = Arc::new(FiniteRing::from_matrix_ring("gf3", MatrixRing::standard(&Field::gf(3), 1)).unwrap());
        let p = FiniteRing::product("p", vec![g.clone(), Arc::new(m2gf3())]).unwrap();
        assert_eq!(p.size(), 243);
        assert_eq!(p.components(1), Some(vec![1, 0]));
        assert_eq!(p.from_components(&[2, 5]), Some(2 + 3 * 5));
        let one = p.one().unwrap();
        for x in p.carrier().step_by(7) {
            assert_eq!(p.mul(&one, &x), x);
        }
    }

    #[test]
    fn malformed_tables_rejected() {
        let bad = TableData { size: 2, add: vec![0, 1, 1], mul: vec![0; 4], star: vec![0, 1], zero: 0, one: None };
        assert!(FiniteRing::from_tables("bad", bad).is_err());
    }
}
