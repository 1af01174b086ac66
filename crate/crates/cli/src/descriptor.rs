//! JSON descriptors for fields, rings, spaces, lattices and frames. Every
//! parse error carries the path of the offending value.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num::BigRational;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use starreg::exactalg::{Field, FieldSpec, HermitianForm, Involution, Matrix, Scalar};
use starreg::frames::{Frame, Level};
use starreg::latcore::{principal_right_ideal_lattice, FiniteLattice, IdealLattice};
use starreg::starring::{catalog_ring, ideal_sum, principal_ideal, zero_ideal, FiniteRing, Ideal, MatrixRing, TableData};
use starreg::subspace::{InnerProductSpace, Subspace};

use crate::CliError;

/// A JSON value together with its location, for error messages.
#[derive(Clone, Copy)]
pub struct Node<'a> {
    pub v: &'a Value,
    path: &'a str,
}

pub struct Owned {
    pub value: Value,
    pub origin: String,
}

impl Owned {
    pub fn read(path: &str) -> Result<Owned, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(path, e.to_string()))?;
        let value = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{path}:{}:{}", e.line(), e.column()), e.to_string()))?;
        Ok(Owned { value, origin: path.to_string() })
    }

    pub fn root(&self) -> Node<'_> {
        Node { v: &self.value, path: &self.origin }
    }
}

impl<'a> Node<'a> {
    pub fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::input(self.path.to_string(), msg)
    }

    pub fn at<R>(&self, key: &str, f: impl FnOnce(Node<'_>) -> Result<R, CliError>) -> Result<R, CliError> {
        let path = format!("{}/{key}", self.path);
        match self.v.get(key) {
            Some(v) => f(Node { v, path: &path }),
            None => Err(CliError::input(path, "missing")),
        }
    }

    pub fn opt<R>(&self, key: &str, f: impl FnOnce(Node<'_>) -> Result<R, CliError>) -> Result<Option<R>, CliError> {
        let path = format!("{}/{key}", self.path);
        match self.v.get(key) {
            Some(Value::Null) | None => Ok(None),
            Some(v) => f(Node { v, path: &path }).map(Some),
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.v.get(key).is_some_and(|v| !v.is_null())
    }

    pub fn each<R>(&self, mut f: impl FnMut(Node<'_>) -> Result<R, CliError>) -> Result<Vec<R>, CliError> {
        let items = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let path = format!("{}/{i}", self.path);
                f(Node { v, path: &path })
            })
            .collect()
    }

    pub fn entries<R>(&self, mut f: impl FnMut(&str, Node<'_>) -> Result<R, CliError>) -> Result<Vec<R>, CliError> {
        let items = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        items
            .iter()
            .map(|(k, v)| {
                let path = format!("{}/{k}", self.path);
                f(k, Node { v, path: &path })
            })
            .collect()
    }

    pub fn u64(&self) -> Result<u64, CliError> {
        self.v.as_u64().ok_or_else(|| self.err("expected a non-negative integer"))
    }

    pub fn usize(&self) -> Result<usize, CliError> {
        Ok(self.u64()? as usize)
    }

    pub fn i64(&self) -> Result<i64, CliError> {
        self.v.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    pub fn str_at(&self, key: &str) -> Result<&'a str, CliError> {
        self.v.get(key).and_then(Value::as_str).ok_or_else(|| CliError::input(format!("{}/{key}", self.path), "expected a string"))
    }

    pub fn str(&self) -> Result<&'a str, CliError> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }
}

pub fn field(node: Node<'_>) -> Result<Field, CliError> {
    let kind = node.str_at("kind")?;
    let involution = |n: Node<'_>, nontrivial: Involution| match n.str()? {
        "id" => Ok(Involution::Identity),
        "frob" | "conj" => Ok(nontrivial),
        other => Err(n.err(format!("unknown involution {other:?}"))),
    };
    match kind {
        "gf" => {
            let p = node.at("p", |n| n.u64())? as u32;
            let k = node.opt("k", |n| n.u64())?.unwrap_or(1) as u32;
            let inv = node.opt("conj", |n| involution(n, Involution::Frobenius))?.unwrap_or(Involution::Identity);
            Field::galois(p, k, inv).map_err(|e| node.err(e.to_string()))
        }
        "q" => Ok(Field::rationals()),
        "q_sqrt" => {
            let d = node.at("d", |n| n.i64())?;
            let inv = node.opt("conj", |n| involution(n, Involution::Conjugation))?.unwrap_or(Involution::Conjugation);
            Field::quadratic(d, inv).map_err(|e| node.err(e.to_string()))
        }
        other => Err(node.err(format!("unknown field kind {other:?}"))),
    }
}

fn rational(node: Node<'_>) -> Result<BigRational, CliError> {
    match node.v {
        Value::Number(_) => Ok(BigRational::from_integer(node.i64()?.into())),
        Value::String(s) => BigRational::from_str(s.trim()).map_err(|_| node.err(format!("not a rational: {s:?}"))),
        _ => Err(node.err("expected an integer or a \"p/q\" string")),
    }
}

/// Finite fields take residue codes (any integer for prime fields), `Q`
/// takes integers or `"p/q"`, quadratic fields also take `[a, b]` for `a + b√d`.
pub fn scalar(f: &Field, node: Node<'_>) -> Result<Scalar, CliError> {
    match f.spec() {
        FieldSpec::Galois { k, .. } => {
            let n = node.i64()?;
            if *k == 1 || n < 0 {
                if *k != 1 {
                    return Err(node.err("codes of extension field elements are non-negative"));
                }
                return Ok(f.from_i64(n));
            }
            f.element(n as u32).map_err(|_| node.err(format!("{n} is not an element code of this field")))
        }
        FieldSpec::Rationals => Ok(Scalar::Rat(rational(node)?)),
        FieldSpec::Quadratic { .. } => {
            let (a, b) = match node.v {
                Value::Array(_) => {
                    let parts = node.each(rational)?;
                    let [a, b] = <[BigRational; 2]>::try_from(parts).map_err(|_| node.err("expected [a, b]"))?;
                    (a, b)
                }
                _ => (rational(node)?, BigRational::from_integer(0.into())),
            };
            f.quad(a, b).map_err(|e| node.err(e.to_string()))
        }
    }
}

pub fn scalar_json(s: &Scalar) -> Value {
    let rat = |r: &BigRational| {
        if r.is_integer() {
            r.to_integer().to_string().parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(r.to_string()))
        } else {
            Value::String(r.to_string())
        }
    };
    match s {
        Scalar::Fin(c) => json!(c),
        Scalar::Rat(r) => rat(r),
        Scalar::Quad(a, b) => json!([rat(a), rat(b)]),
    }
}

pub fn vector(f: &Field, node: Node<'_>, len: usize) -> Result<Vec<Scalar>, CliError> {
    let v = node.each(|n| scalar(f, n))?;
    if v.len() != len {
        return Err(node.err(format!("expected {len} entries, found {}", v.len())));
    }
    Ok(v)
}

pub fn matrix(f: &Field, node: Node<'_>, rows: usize, cols: usize) -> Result<Matrix, CliError> {
    let data = node.each(|n| vector(f, n, cols))?;
    if data.len() != rows {
        return Err(node.err(format!("expected {rows} rows, found {}", data.len())));
    }
    Matrix::from_rows(f, &data, cols).map_err(|e| node.err(e.to_string()))
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.row_vectors().iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect())
}

pub enum Ring {
    Finite(FiniteRing),
    /// Matrix rings over infinite fields.
    Matrix(MatrixRing),
}

impl Ring {
    pub fn finite(self, node: Node<'_>) -> Result<FiniteRing, CliError> {
        match self {
            Ring::Finite(r) => Ok(r),
            Ring::Matrix(_) => Err(node.err("this command needs a finite ring")),
        }
    }
}

pub fn ring(node: Node<'_>) -> Result<Ring, CliError> {
    let kind = node.str_at("kind")?;
    let name = node.opt("name", |n| n.str().map(String::from))?;
    let built = match kind {
        "catalog" => {
            catalog_ring(node.str_at("name")?)
        }
        "matrix" => {
            let f = node.at("field", field)?;
            let n = node.at("n", |n| n.usize())?;
            if n == 0 {
                return Err(node.err("n must be positive"));
            }
            let m = match node.opt("gram", |g| matrix(&f, g, n, n))? {
                Some(g) => MatrixRing::with_gram(g).map_err(|e| node.err(e.to_string()))?,
                None => MatrixRing::standard(&f, n),
            };
            if !f.is_finite() {
                return Ok(Ring::Matrix(m));
            }
            FiniteRing::from_matrix_ring(name.as_deref().unwrap_or("matrix ring"), m)
        }
        "table" => {
            let size = node.at("elements", |n| n.u64())? as u32;
            let table = |key: &str| -> Result<Vec<u32>, CliError> {
                let rows = node.at(key, |t| t.each(|r| r.each(|c| Ok(c.u64()? as u32))))?;
                if rows.len() != size as usize || rows.iter().any(|r| r.len() != size as usize) {
                    return Err(node.err(format!("\"{key}\" must be a {size} x {size} table")));
                }
                Ok(rows.concat())
            };
            let data = TableData {
                size,
                add: table("add")?,
                mul: table("mul")?,
                star: node.at("star", |s| s.each(|c| Ok(c.u64()? as u32)))?,
                zero: node.at("zero", |n| n.u64())? as u32,
                one: node.opt("one", |n| n.u64())?.map(|x| x as u32),
            };
            FiniteRing::from_tables(name.as_deref().unwrap_or("table ring"), data)
        }
        "product" => {
            let factors =
                node.at("factors", |fs| fs.each(|f| Ok(Arc::new(ring(f)?.finite(f)?))))?;
            if factors.is_empty() {
                return Err(node.err("a product needs at least one factor"));
            }
            FiniteRing::product(name.as_deref().unwrap_or("product ring"), factors)
        }
        other => return Err(node.err(format!("unknown ring kind {other:?}"))),
    };
    built.map(Ring::Finite).map_err(|e| node.err(e.to_string()))
}

/// Inverse of `FiniteRing::element_json`.
pub fn element(r: &FiniteRing, node: Node<'_>) -> Result<u32, CliError> {
    if let Some(factors) = r.factors() {
        if node.v.as_array().map(Vec::len) != Some(factors.len()) {
            return Err(node.err(format!("expected {} components", factors.len())));
        }
        let mut i = 0;
        let codes = node.each(|n| {
            i += 1;
            element(&factors[i - 1], n)
        })?;
        return r.from_components(&codes).ok_or_else(|| node.err("not an element"));
    }
    if let Some(m) = r.matrix_ring() {
        let x = matrix(m.field(), node, m.n(), m.n())?;
        return r.encode_matrix(&x).ok_or_else(|| node.err("not an element"));
    }
    let x = node.u64()?;
    if x >= r.size() as u64 {
        return Err(node.err(format!("element {x} out of range (ring has {} elements)", r.size())));
    }
    Ok(x as u32)
}

/// Two-sided ideal: `"zero"`, `"full"`, or `{"generators": [...]}`.
pub fn ideal(r: &FiniteRing, node: Node<'_>) -> Result<Ideal, CliError> {
    match node.v {
        Value::String(s) if s == "zero" => Ok(zero_ideal(r)),
        Value::String(s) if s == "full" => Ok(Ideal::from_elements(r.size(), r.carrier())),
        _ => {
            let gens = node.at("generators", |g| g.each(|x| element(r, x)))?;
            let additive = starreg::starring::additive_generators(r);
            Ok(gens.iter().fold(zero_ideal(r), |acc, &x| ideal_sum(r, &acc, &principal_ideal(r, x, &additive))))
        }
    }
}

pub fn space(node: Node<'_>, samples: usize, seed: u64) -> Result<InnerProductSpace, CliError> {
    let f = node.at("field", field)?;
    let dim = node.at("dim", |n| n.usize())?;
    if dim == 0 {
        return Err(node.err("dim must be positive"));
    }
    let form = match node.v.get("form") {
        None => Some(HermitianForm::dot(&f, dim)),
        Some(Value::String(s)) if s == "dot" => Some(HermitianForm::dot(&f, dim)),
        Some(Value::String(s)) if s == "none" => None,
        Some(_) => Some(node.at("form", |g| {
            let gram = g.at("gram", |m| matrix(&f, m, dim, dim))?;
            HermitianForm::new(gram).map_err(|e| g.err(e.to_string()))
        })?),
    };
    Ok(match form {
        Some(h) => InnerProductSpace::new(h, samples, &mut ChaCha8Rng::seed_from_u64(seed)),
        None => InnerProductSpace::bare(&f, dim),
    })
}

pub fn subspace(v: &InnerProductSpace, node: Node<'_>) -> Result<Subspace, CliError> {
    let rows = node.each(|r| vector(v.field(), r, v.dim()))?;
    v.span(&rows).map_err(|e| node.err(e.to_string()))
}

pub fn subspace_json(u: &Subspace) -> Value {
    Value::Array(u.vectors().iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect())
}

/// The lattice a frame lives in.
pub enum Context {
    Lattice(FiniteLattice),
    Ring(FiniteRing, IdealLattice),
    Space(InnerProductSpace),
}

pub fn context(node: Node<'_>, budget: usize, samples: usize, seed: u64) -> Result<Context, CliError> {
    if node.has("lattice") {
        return node.at("lattice", |l| FiniteLattice::from_json(l.v).map(Context::Lattice).map_err(|e| l.err(e.to_string())));
    }
    if node.has("ring") {
        return node.at("ring", |rn| {
            let r = ring(rn)?.finite(rn)?;
            let ideals = principal_right_ideal_lattice(&r, budget).map_err(|e| rn.err(e.to_string()))?;
            Ok(Context::Ring(r, ideals))
        });
    }
    if node.has("space") {
        return node.at("space", |s| space(s, samples, seed).map(Context::Space));
    }
    Err(node.err("expected a \"lattice\", \"ring\" or \"space\" context"))
}

/// Lattice index, or `{"generator": x}` for the right ideal `xR` in a ring context.
pub fn lattice_handle(l: &FiniteLattice, ring: Option<(&FiniteRing, &IdealLattice)>, node: Node<'_>) -> Result<u32, CliError> {
    if let (Some((r, ideals)), true) = (ring, node.has("generator")) {
        return node.at("generator", |g| Ok(ideals.element(element(r, g)?)));
    }
    let i = node.u64()?;
    if i >= l.size() as u64 {
        return Err(node.err(format!("lattice index {i} out of range ({} elements)", l.size())));
    }
    Ok(i as u32)
}

fn pair_key(node: Node<'_>, key: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
    match parts[..] {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => Err(node.err(format!("bad index pair {key:?}"))),
        },
        _ => Err(node.err(format!("bad index pair {key:?}, expected \"j,i\""))),
    }
}

/// `{"format":[n,k],"a":[...],"a0":[primary axes],"axes":{"j,i":...},"z":{"i,j":...},"level":...}`.
pub fn frame<E: Clone>(
    node: Node<'_>,
    handle: &dyn Fn(Node<'_>) -> Result<E, CliError>,
) -> Result<(Frame<E>, Option<Level>), CliError> {
    let fmt = node.at("format", |f| f.each(|x| x.usize()))?;
    let [n, k] = <[usize; 2]>::try_from(fmt).map_err(|_| node.err("\"format\" is [n, k]"))?;
    let a = node.at("a", |a| a.each(handle))?;
    let primary = node.at("a0", |a| a.each(handle))?;
    let mut frame = Frame::new(n, k, a, primary).map_err(|e| node.err(e.to_string()))?;
    let keyed = |key: &str| -> Result<BTreeMap<(usize, usize), E>, CliError> {
        Ok(node
            .opt(key, |m| m.entries(|name, x| Ok((pair_key(x, name)?, handle(x)?))))?
            .unwrap_or_default()
            .into_iter()
            .collect())
    };
    for ((j, i), x) in keyed("axes")? {
        if j >= i || j >= n || i >= n + k {
            return Err(node.err(format!("axis key \"{j},{i}\" needs j < i, j < n, i < n + k")));
        }
        frame.axes.insert((j, i), x);
    }
    for ((i, j), x) in keyed("z")? {
        if j >= n || i < n || i >= n + k {
            return Err(node.err(format!("complement key \"{i},{j}\" needs j < n ≤ i < n + k")));
        }
        frame.z.insert((i, j), x);
    }
    let level = node.opt("level", |l| l.str()?.parse::<Level>().map_err(|e| l.err(e)))?;
    Ok((frame, level))
}

pub fn frame_json<E: Clone>(frame: &Frame<E>, level: Option<Level>, handle: &dyn Fn(&E) -> Value) -> Value {
    let keyed = |m: &BTreeMap<(usize, usize), E>, skip_primary: bool| -> Value {
        Value::Object(
            m.iter()
                .filter(|((j, _), _)| !(skip_primary && *j == 0))
                .map(|((a, b), x)| (format!("{a},{b}"), handle(x)))
                .collect(),
        )
    };
    json!({
        "format": [frame.n, frame.k],
        "a": frame.a.iter().map(handle).collect::<Vec<_>>(),
        "a0": (1..frame.len()).map(|i| handle(&frame.axes[&(0, i)])).collect::<Vec<_>>(),
        "axes": keyed(&frame.axes, true),
        "z": keyed(&frame.z, false),
        "level": level.map(|l| l.name()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(v: &Value) -> Node<'_> {
        Node { v, path: "t" }
    }

    fn location(e: CliError) -> String {
        let CliError::Input { location, .. } = e;
        location
    }

    #[test]
    fn scalars_round_trip() {
        let q = Field::rationals();
        for v in [json!(3), json!(-7), json!("2/3"), json!("-5/4")] {
            assert_eq!(scalar_json(&scalar(&q, node(&v)).unwrap()), v);
        }
        assert_eq!(scalar_json(&scalar(&q, node(&json!("4/6"))).unwrap()), json!("2/3"));
        let k = Field::quadratic(-1, Involution::Conjugation).unwrap();
        let v = json!([1, "1/2"]);
        assert_eq!(scalar_json(&scalar(&k, node(&v)).unwrap()), v);
        let gf5 = field(node(&json!({"kind": "gf", "p": 5}))).unwrap();
        assert_eq!(scalar_json(&scalar(&gf5, node(&json!(-1))).unwrap()), json!(4));
    }

    #[test]
    fn errors_carry_the_json_path() {
        let v = json!({"kind": "matrix", "field": {"kind": "gf", "p": 3}, "n": 2, "gram": [[1, 0], [0]]});
        assert_eq!(location(ring(node(&v)).err().unwrap()), "t/gram/1");
        let v = json!({"kind": "gf"});
        assert_eq!(location(field(node(&v)).err().unwrap()), "t/p");
    }

    #[test]
    fn product_elements_round_trip() {
        let v = json!({"kind": "product", "factors": [
            {"kind": "matrix", "field": {"kind": "gf", "p": 2}, "n": 2},
            {"kind": "matrix", "field": {"kind": "gf", "p": 3}, "n": 1}
        ]});
        let r = ring(node(&v)).unwrap().finite(node(&v)).unwrap();
        assert_eq!(r.size(), 48);
        for x in 0..r.size() as u32 {
            assert_eq!(element(&r, node(&r.element_json(x))).unwrap(), x);
        }
    }

    #[test]
    fn frames_round_trip() {
        let v = json!({
            "format": [2, 1],
            "a": [0, 1, 2],
            "a0": [3, 6],
            "axes": {"1,2": 4},
            "z": {"2,0": 5},
            "level": "basic"
        });
        let (f, level) = frame(node(&v), &|n: Node<'_>| n.u64().map(|x| x as u32)).unwrap();
        assert_eq!((f.n, f.k, level), (2, 1, Some(Level::Basic)));
        assert_eq!(frame_json(&f, level, &|x: &u32| json!(x)), v);
    }
}
