//! Exact fields: prime fields, small extension fields, the rationals and
//! quadratic extensions of the rationals, each with an optional involution.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AlgError;

/// Largest extension field order for which multiplication tables are built.
const MAX_EXTENSION_ORDER: u32 = 4096;

/// Irreducible moduli shipped for extension fields, coefficients low to high.
/// Other `(p, k)` fall back to the lexicographically first monic irreducible.
const MODULUS_CATALOG: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 2, &[2, 0, 1]),
];

/// Which involution a field carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Involution {
    Identity,
    /// `x -> x^(p^(k/2))` on `GF(p^k)`, `k` even.
    Frobenius,
    /// `a + b√d -> a - b√d`.
    Conjugation,
}

/// Descriptor of a field together with its involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Galois { p: u32, k: u32, modulus: Vec<u32>, involution: Involution },
    Rationals,
    Quadratic { d: i64, involution: Involution },
}

/// Field element in canonical form. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Residue code `sum c_i p^i` of the polynomial representative.
    Fin(u32),
    Rat(BigRational),
    /// `a + b√d`.
    Quad(BigRational, BigRational),
}

struct GaloisTables {
    q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    frob: Vec<u32>,
}

struct FieldInner {
    spec: FieldSpec,
    tables: Option<GaloisTables>,
}

/// Cheaply clonable handle to a field. Two handles are equal when their
/// descriptors are equal.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.spec.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.spec {
            FieldSpec::Galois { p, k, involution, .. } => {
                if *k == 1 {
                    write!(f, "GF({p})")?;
                } else {
                    write!(f, "GF({p}^{k})")?;
                }
                if *involution == Involution::Frobenius {
                    write!(f, "[frob]")?;
                }
                Ok(())
            }
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Quadratic { d, involution } => {
                write!(f, "Q(sqrt({d}))")?;
                if *involution == Involution::Conjugation {
                    write!(f, "[conj]")?;
                }
                Ok(())
            }
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= p as u64 {
        if p as u64 % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut i = 2u64;
    while i * i <= n {
        if n % (i * i) == 0 {
            return false;
        }
        i += 1;
    }
    true
}

// Polynomials over GF(p) as coefficient vectors, low degree first.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let m = poly_trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = mod_pow(m[dm] as u64, p as u64 - 2, p as u64) as u32;
    while r.len() > dm && !r.is_empty() {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &mi) in m.iter().enumerate() {
            let t = (c as u64 * mi as u64) % p as u64;
            r[i + shift] = ((r[i + shift] as u64 + p as u64 - t) % p as u64) as u32;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn decode_poly(code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut c = code;
    (0..k)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode_poly(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// True when the monic polynomial `m` (degree `k`) has no factor of degree
/// `1..=k/2` over GF(p), checked by trial division.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let m = poly_trim(m.to_vec());
    if m.len() < 2 {
        return false;
    }
    let k = (m.len() - 1) as u32;
    for d in 1..=k / 2 {
        let count = p.pow(d);
        for code in 0..count {
            let mut f = decode_poly(code, p, d);
            f.push(1);
            if poly_rem(&m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    if let Some((_, _, m)) = MODULUS_CATALOG.iter().find(|(pp, kk, _)| *pp == p && *kk == k) {
        return m.to_vec();
    }
    let count = p.pow(k);
    for code in 0..count {
        let mut f = decode_poly(code, p, k);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build_tables(p: u32, k: u32, modulus: &[u32], frobenius: bool) -> GaloisTables {
    let q = p.pow(k);
    let qs = q as usize;
    let polys: Vec<Vec<u32>> = (0..q).map(|c| decode_poly(c, p, k)).collect();
    let mut add = vec![0u32; qs * qs];
    let mut mul = vec![0u32; qs * qs];
    for a in 0..qs {
        for b in 0..qs {
            let sum: Vec<u32> = polys[a].iter().zip(&polys[b]).map(|(x, y)| (x + y) % p).collect();
            add[a * qs + b] = encode_poly(&sum, p);
            let mut prod = vec![0u32; 2 * k as usize];
            for (i, &x) in polys[a].iter().enumerate() {
                for (j, &y) in polys[b].iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = poly_rem(&prod, modulus, p);
            r.resize(k as usize, 0);
            mul[a * qs + b] = encode_poly(&r, p);
        }
    }
    let neg: Vec<u32> = (0..qs).map(|a| (0..q).find(|&b| add[a * qs + b as usize] == 0).unwrap()).collect();
    let inv: Vec<u32> =
        (0..qs).map(|a| if a == 0 { 0 } else { (0..q).find(|&b| mul[a * qs + b as usize] == 1).unwrap() }).collect();
    let frob: Vec<u32> = if frobenius {
        let e = p.pow(k / 2);
        (0..qs)
            .map(|a| {
                let mut r = 1u32;
                for _ in 0..e {
                    r = mul[r as usize * qs + a];
                }
                r
            })
            .collect()
    } else {
        (0..q).collect()
    };
    GaloisTables { q, add, mul, neg, inv, frob }
}

fn reduce_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Field {
    /// `GF(p^k)` with the catalog modulus.
    pub fn galois(p: u32, k: u32, involution: Involution) -> Result<Field, AlgError> {
        Self::galois_with_modulus(p, k, None, involution)
    }

    pub fn gf(p: u32) -> Field {
        Self::galois(p, 1, Involution::Identity).expect("prime field")
    }

    pub fn galois_with_modulus(
        p: u32,
        k: u32,
        modulus: Option<Vec<u32>>,
        involution: Involution,
    ) -> Result<Field, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(AlgError::InvalidField("extension degree must be positive".into()));
        }
        match involution {
            Involution::Identity => {}
            Involution::Frobenius if k % 2 == 0 => {}
            Involution::Frobenius => {
                return Err(AlgError::InvalidField(format!("Frobenius involution needs even degree, got k = {k}")))
            }
            Involution::Conjugation => {
                return Err(AlgError::InvalidField("finite fields carry identity or Frobenius involution".into()))
            }
        }
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            let m = modulus.unwrap_or_else(|| default_modulus(p, k));
            if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                return Err(AlgError::InvalidField(format!("modulus must be monic of degree {k} over GF({p})")));
            }
            if !is_irreducible(&m, p) {
                return Err(AlgError::InvalidField(format!("modulus {m:?} is reducible over GF({p})")));
            }
            m
        };
        let tables = if k > 1 {
            let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_EXTENSION_ORDER as u64);
            if q.is_none() {
                return Err(AlgError::InvalidField(format!("GF({p}^{k}) exceeds the table bound")));
            }
            Some(build_tables(p, k, &modulus, involution == Involution::Frobenius))
        } else {
            None
        };
        Ok(Field(Arc::new(FieldInner { spec: FieldSpec::Galois { p, k, modulus, involution }, tables })))
    }

    pub fn rationals() -> Field {
        Field(Arc::new(FieldInner { spec: FieldSpec::Rationals, tables: None }))
    }

    /// `Q(√d)` for square-free `d ∉ {0, 1}`.
    pub fn quadratic(d: i64, involution: Involution) -> Result<Field, AlgError> {
        if d == 0 || d == 1 || !is_square_free(d) {
            return Err(AlgError::InvalidField(format!("d = {d} must be square-free and not 0 or 1")));
        }
        if involution == Involution::Frobenius {
            return Err(AlgError::InvalidField("quadratic fields carry identity or conjugation".into()));
        }
        Ok(Field(Arc::new(FieldInner { spec: FieldSpec::Quadratic { d, involution }, tables: None })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn involution(&self) -> Involution {
        match &self.0.spec {
            FieldSpec::Galois { involution, .. } | FieldSpec::Quadratic { involution, .. } => *involution,
            FieldSpec::Rationals => Involution::Identity,
        }
    }

    pub fn has_trivial_involution(&self) -> bool {
        self.involution() == Involution::Identity
    }

    /// Number of elements, `None` for infinite fields.
    pub fn order(&self) -> Option<u64> {
        match &self.0.spec {
            FieldSpec::Galois { p, k, .. } => Some((*p as u64).pow(*k)),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match &self.0.spec {
            FieldSpec::Galois { p, .. } => *p,
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> Scalar {
        match &self.0.spec {
            FieldSpec::Galois { .. } => Scalar::Fin(0),
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Quadratic { .. } => Scalar::Quad(BigRational::zero(), BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &self.0.spec {
            FieldSpec::Galois { p, .. } => Scalar::Fin(n.rem_euclid(*p as i64) as u32),
            FieldSpec::Rationals => Scalar::Rat(reduce_rat(n)),
            FieldSpec::Quadratic { .. } => Scalar::Quad(reduce_rat(n), BigRational::zero()),
        }
    }

    /// Rational `num/den`; only valid in characteristic zero.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar, AlgError> {
        if den == 0 {
            return Err(AlgError::DivisionByZero);
        }
        match &self.0.spec {
            FieldSpec::Galois { .. } => {
                let d = self.from_i64(den);
                let inv = self.inv(&d)?;
                Ok(self.mul(&self.from_i64(num), &inv))
            }
            FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num.into(), den.into()))),
            FieldSpec::Quadratic { .. } => {
                Ok(Scalar::Quad(BigRational::new(num.into(), den.into()), BigRational::zero()))
            }
        }
    }

    /// Element `a + b√d` of a quadratic field.
    pub fn quad(&self, a: BigRational, b: BigRational) -> Result<Scalar, AlgError> {
        match &self.0.spec {
            FieldSpec::Quadratic { .. } => Ok(Scalar::Quad(a, b)),
            _ => Err(AlgError::FieldMismatch),
        }
    }

    /// Element with residue code `code` of a finite field.
    pub fn element(&self, code: u32) -> Result<Scalar, AlgError> {
        match self.order() {
            Some(q) if (code as u64) < q => Ok(Scalar::Fin(code)),
            Some(_) => Err(AlgError::FieldMismatch),
            None => Err(AlgError::FieldMismatch),
        }
    }

    /// All elements in code order, finite fields only.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.order().map(|q| (0..q as u32).map(Scalar::Fin).collect())
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (&self.0.spec, a) {
            (FieldSpec::Galois { .. }, Scalar::Fin(c)) => (*c as u64) < self.order().unwrap(),
            (FieldSpec::Rationals, Scalar::Rat(_)) => true,
            (FieldSpec::Quadratic { .. }, Scalar::Quad(..)) => true,
            _ => false,
        }
    }

    fn check(&self, a: &Scalar) -> Result<(), AlgError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(AlgError::FieldMismatch)
        }
    }

    fn galois_p(&self) -> u32 {
        match &self.0.spec {
            FieldSpec::Galois { p, .. } => *p,
            _ => unreachable!(),
        }
    }

    fn quad_d(&self) -> BigRational {
        match &self.0.spec {
            FieldSpec::Quadratic { d, .. } => reduce_rat(*d),
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fin(c) => *c == 0,
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(x, y) => x.is_zero() && y.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Fin(c) => *c == 1,
            Scalar::Rat(r) => r.is_one(),
            Scalar::Quad(x, y) => x.is_one() && y.is_zero(),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fin(x), Scalar::Fin(y)) => match &self.0.tables {
                Some(t) => Scalar::Fin(t.add[(*x * t.q + *y) as usize]),
                None => {
                    let p = self.galois_p() as u64;
                    Scalar::Fin(((*x as u64 + *y as u64) % p) as u32)
                }
            },
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Quad(a1, b1), Scalar::Quad(a2, b2)) => Scalar::Quad(a1 + a2, b1 + b2),
            _ => panic!("scalar kinds do not match field {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Fin(x) => match &self.0.tables {
                Some(t) => Scalar::Fin(t.neg[*x as usize]),
                None => {
                    let p = self.galois_p();
                    Scalar::Fin(if *x == 0 { 0 } else { p - *x })
                }
            },
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Quad(x, y) => Scalar::Quad(-x, -y),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Fin(x), Scalar::Fin(y)) => match &self.0.tables {
                Some(t) => Scalar::Fin(t.mul[(*x * t.q + *y) as usize]),
                None => {
                    let p = self.galois_p() as u64;
                    Scalar::Fin(((*x as u64 * *y as u64) % p) as u32)
                }
            },
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Quad(a1, b1), Scalar::Quad(a2, b2)) => {
                let d = self.quad_d();
                Scalar::Quad(a1 * a2 + d * b1 * b2, a1 * b2 + b1 * a2)
            }
            _ => panic!("scalar kinds do not match field {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, AlgError> {
        if self.is_zero(a) {
            return Err(AlgError::DivisionByZero);
        }
        Ok(match a {
            Scalar::Fin(x) => match &self.0.tables {
                Some(t) => Scalar::Fin(t.inv[*x as usize]),
                None => {
                    let p = self.galois_p() as u64;
                    Scalar::Fin(mod_pow(*x as u64, p - 2, p) as u32)
                }
            },
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Quad(x, y) => {
                // (x + y√d)^-1 = (x - y√d) / (x² - d y²)
                let norm = x * x - self.quad_d() * y * y;
                Scalar::Quad(x / &norm, -y / &norm)
            }
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, AlgError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// The field involution.
    pub fn conj(&self, a: &Scalar) -> Scalar {
        match (self.involution(), a) {
            (Involution::Identity, _) => a.clone(),
            (Involution::Frobenius, Scalar::Fin(x)) => Scalar::Fin(self.0.tables.as_ref().unwrap().frob[*x as usize]),
            (Involution::Conjugation, Scalar::Quad(x, y)) => Scalar::Quad(x.clone(), -y),
            _ => a.clone(),
        }
    }

    /// Checked binary/unary operation entry point.
    pub fn arith(&self, op: FieldOp, a: &Scalar, b: Option<&Scalar>) -> Result<Scalar, AlgError> {
        self.check(a)?;
        if let Some(b) = b {
            self.check(b)?;
        }
        let need_b = || b.ok_or_else(|| AlgError::InvalidField("binary operation needs two operands".into()));
        match op {
            FieldOp::Add => Ok(self.add(a, need_b()?)),
            FieldOp::Mul => Ok(self.mul(a, need_b()?)),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Conj => Ok(self.conj(a)),
        }
    }

    /// Sign of a rational-valued scalar, `None` when the scalar is not a
    /// real rational (finite fields, or irrational quadratic elements).
    pub fn rational_sign(&self, a: &Scalar) -> Option<i8> {
        let r = match a {
            Scalar::Rat(r) => r,
            Scalar::Quad(x, y) if y.is_zero() => x,
            _ => return None,
        };
        Some(if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        })
    }

    /// Random element: uniform on finite fields; otherwise rationals with
    /// numerator in `[-bound, bound]` and denominator in `[1, bound]`.
    pub fn random<G: Rng + ?Sized>(&self, rng: &mut G, bound: i64) -> Scalar {
        let bound = bound.max(1);
        let rat = |rng: &mut G| BigRational::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=bound).into());
        match &self.0.spec {
            FieldSpec::Galois { .. } => Scalar::Fin(rng.gen_range(0..self.order().unwrap() as u32)),
            FieldSpec::Rationals => Scalar::Rat(rat(rng)),
            FieldSpec::Quadratic { .. } => {
                let a = rat(rng);
                Scalar::Quad(a, rat(rng))
            }
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        match a {
            Scalar::Fin(c) => c.to_string(),
            Scalar::Rat(r) => r.to_string(),
            Scalar::Quad(x, y) => {
                if y.is_zero() {
                    x.to_string()
                } else {
                    let d = match &self.0.spec {
                        FieldSpec::Quadratic { d, .. } => *d,
                        _ => 0,
                    };
                    format!("{}+{}*sqrt({})", x, y, d)
                }
            }
        }
    }
}

/// Field operations selectable through [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
    Conj,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gf3_add_wraps() {
        let f = Field::gf(3);
        let r = f.arith(FieldOp::Add, &Scalar::Fin(2), Some(&Scalar::Fin(2))).unwrap();
        assert_eq!(r, Scalar::Fin(1));
    }

    #[test]
    fn gaussian_rational_conjugation() {
        let f = Field::quadratic(-1, Involution::Conjugation).unwrap();
        let z = f.quad(rat(3, 1), rat(2, 1)).unwrap();
        assert_eq!(f.conj(&z), Scalar::Quad(rat(3, 1), rat(-2, 1)));
    }

    #[test]
    fn gf9_frobenius_matches_brute_force_cube() {
        // GF(9) = GF(3)[t]/(t²+1); t has code 3.
        let f = Field::galois(3, 2, Involution::Frobenius).unwrap();
        let t = Scalar::Fin(3);
        let cube = f.mul(&f.mul(&t, &t), &t);
        assert_eq!(f.conj(&t), cube);
        // t³ = -t = 2t, code 6
        assert_eq!(cube, Scalar::Fin(6));
        for a in f.elements().unwrap() {
            assert_eq!(f.conj(&f.conj(&a)), a);
        }
    }

    #[test]
    fn frobenius_requires_even_degree() {
        assert!(Field::galois(3, 3, Involution::Frobenius).is_err());
        assert!(Field::galois(3, 1, Involution::Frobenius).is_err());
    }

    #[test]
    fn inverse_of_zero_fails() {
        for f in [Field::gf(7), Field::rationals(), Field::quadratic(-1, Involution::Conjugation).unwrap()] {
            assert_eq!(f.inv(&f.zero()), Err(AlgError::DivisionByZero));
        }
    }

    #[test]
    fn mixed_scalars_are_rejected() {
        let f = Field::gf(3);
        assert_eq!(f.arith(FieldOp::Add, &Scalar::Fin(5), Some(&Scalar::Fin(1))), Err(AlgError::FieldMismatch));
        let q = Field::rationals();
        assert_eq!(q.arith(FieldOp::Neg, &Scalar::Fin(1), None), Err(AlgError::FieldMismatch));
    }

    #[test]
    fn catalog_moduli_are_irreducible() {
        for (p, _k, m) in MODULUS_CATALOG {
            assert!(is_irreducible(m, *p), "{m:?} over GF({p})");
        }
        assert!(!is_irreducible(&[2, 0, 1], 3)); // t² + 2 = (t-1)(t+1)
    }

    #[test]
    fn extension_field_axioms_gf4_gf9() {
        for (p, k) in [(2, 2), (3, 2), (2, 3)] {
            let f = Field::galois(p, k, Involution::Identity).unwrap();
            let els = f.elements().unwrap();
            for a in &els {
                if !f.is_zero(a) {
                    assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
                }
                for b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in &els {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_inverse() {
        let f = Field::quadratic(2, Involution::Conjugation).unwrap();
        let z = f.quad(rat(1, 1), rat(1, 1)).unwrap();
        let w = f.inv(&z).unwrap();
        assert!(f.is_one(&f.mul(&z, &w)));
    }
}
