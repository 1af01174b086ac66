//! Finite lattices given by their order, with meet/join tables.

use fixedbitset::FixedBitSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{LatError, LatticeContext, CONGRUENCE_BOUND};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    /// `up[a]` holds every `b` with `a ≤ b`.
    up: Vec<FixedBitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: u32,
    top: u32,
    ranks: Vec<usize>,
    ortho: Option<Vec<u32>>,
    mol: bool,
    labels: Vec<String>,
}

/// A congruence as a partition: `class[x]` is the least element of x's block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    pub class: Vec<u32>,
}

impl Congruence {
    pub fn blocks(&self) -> usize {
        self.class.iter().enumerate().filter(|(i, c)| *i as u32 == **c).count()
    }

    pub fn related(&self, a: u32, b: u32) -> bool {
        self.class[a as usize] == self.class[b as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks() == self.class.len()
    }

    pub fn is_total(&self) -> bool {
        self.blocks() == 1
    }
}

#[derive(Clone, Debug)]
pub struct CongruenceSummary {
    pub congruences: Vec<Congruence>,
    pub simple: bool,
    /// Covering pair whose principal congruence is proper and nontrivial.
    pub witness: Option<(u32, u32)>,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let next = self.0[y as usize];
            self.0[y as usize] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi as usize] = lo;
        true
    }

    fn congruence(mut self) -> Congruence {
        let n = self.0.len() as u32;
        let roots: Vec<u32> = (0..n).map(|x| self.find(x)).collect();
        // least element of each block
        let mut least = vec![u32::MAX; n as usize];
        for x in 0..n {
            let r = roots[x as usize] as usize;
            least[r] = least[r].min(x);
        }
        Congruence { class: roots.iter().map(|r| least[*r as usize]).collect() }
    }
}

impl FiniteLattice {
    /// Lattice from an order relation `leq[a][b] ⇔ a ≤ b`. Meets and joins are
    /// derived; fails if some pair lacks one.
    pub fn from_order(leq: &[Vec<bool>], labels: Option<Vec<String>>) -> Result<FiniteLattice, LatError> {
        let n = leq.len();
        if n == 0 || leq.iter().any(|r| r.len() != n) {
            return Err(LatError::Invalid("order matrix must be square and nonempty".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(LatError::NotALattice(format!("order not reflexive at {a}")));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(LatError::NotALattice(format!("order not antisymmetric at ({a},{b})")));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(LatError::NotALattice(format!("order not transitive at ({a},{b},{c})")));
                    }
                }
            }
        }
        let up: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(n);
                (0..n).filter(|&b| leq[a][b]).for_each(|b| s.insert(b));
                s
            })
            .collect();
        let down: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut s = FixedBitSet::with_capacity(n);
                (0..n).filter(|&b| leq[b][a]).for_each(|b| s.insert(b));
                s
            })
            .collect();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut ub = up[a].clone();
                ub.intersect_with(&up[b]);
                let j = ub.ones().find(|&u| ub.is_subset(&up[u]));
                let mut lb = down[a].clone();
                lb.intersect_with(&down[b]);
                let m = lb.ones().find(|&l| lb.is_subset(&down[l]));
                match (j, m) {
                    (Some(j), Some(m)) => {
                        join[a * n + b] = j as u32;
                        meet[a * n + b] = m as u32;
                    }
                    _ => return Err(LatError::NotALattice(format!("no meet or join for ({a},{b})"))),
                }
            }
        }
        let bottom = (0..n).find(|&a| up[a].count_ones(..) == n).ok_or(LatError::NotALattice("no bottom".into()))?;
        let top = (0..n).find(|&a| down[a].count_ones(..) == n).ok_or(LatError::NotALattice("no top".into()))?;
        // longest chain from the bottom, by increasing down-set size
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| down[a].count_ones(..));
        let mut ranks = vec![0usize; n];
        for &a in &order {
            ranks[a] = down[a].ones().filter(|&b| b != a).map(|b| ranks[b] + 1).max().unwrap_or(0);
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        if labels.len() != n {
            return Err(LatError::Invalid("one label per element required".into()));
        }
        Ok(FiniteLattice { n, up, meet, join, bottom: bottom as u32, top: top as u32, ranks, ortho: None, mol: false, labels })
    }

    /// Attach a unary map as orthocomplement. It is admitted for complement
    /// choices only if the MOL axioms hold exhaustively.
    pub fn with_ortho(mut self, ortho: Vec<u32>) -> Result<FiniteLattice, LatError> {
        if ortho.len() != self.n || ortho.iter().any(|&o| o as usize >= self.n) {
            return Err(LatError::Invalid("orthocomplement must map elements to elements".into()));
        }
        self.ortho = Some(ortho);
        self.mol = false;
        self.mol = super::verify_mol(&self, 0, &mut <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0))
            .map(|r| r.passed() && super::verify_lattice_axioms(&self, 0, &mut <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0)).modular.passed)
            .unwrap_or(false);
        Ok(self)
    }

    pub fn chain(len: usize) -> FiniteLattice {
        let leq: Vec<Vec<bool>> = (0..len).map(|a| (0..len).map(|b| a <= b).collect()).collect();
        FiniteLattice::from_order(&leq, None).expect("chains are lattices")
    }

    /// Subsets of a k-set ordered by inclusion, element code = bitmask.
    pub fn boolean(k: u32) -> FiniteLattice {
        let n = 1usize << k;
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect();
        let labels = (0..n).map(|a| format!("{a:0width$b}", width = k as usize)).collect();
        let ortho = (0..n as u32).map(|a| !a & (n as u32 - 1)).collect();
        FiniteLattice::from_order(&leq, Some(labels)).expect("boolean lattice").with_ortho(ortho).expect("complement map")
    }

    /// The pentagon `0 < a < c < 1`, `0 < b < 1`.
    pub fn pentagon() -> FiniteLattice {
        let pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (3, 4)];
        FiniteLattice::from_pairs(5, &pairs, Some(vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()]))
    }

    /// The diamond `M_3`.
    pub fn diamond() -> FiniteLattice {
        let pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4)];
        FiniteLattice::from_pairs(5, &pairs, None)
    }

    fn from_pairs(n: usize, strict: &[(usize, usize)], labels: Option<Vec<String>>) -> FiniteLattice {
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            row[a] = true;
        }
        for &(a, b) in strict {
            leq[a][b] = true;
        }
        FiniteLattice::from_order(&leq, labels).expect("hand-built lattice")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn carrier(&self) -> std::ops::Range<u32> {
        0..self.n as u32
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn ortho_map(&self) -> Option<&[u32]> {
        self.ortho.as_deref()
    }

    pub fn rank(&self, a: u32) -> usize {
        self.ranks[a as usize]
    }

    pub fn atoms(&self) -> Vec<u32> {
        self.carrier().filter(|&a| self.ranks[a as usize] == 1).collect()
    }

    /// Cover relation `a ≺ b`.
    pub fn covers(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in self.carrier() {
            for b in self.up[a as usize].ones().map(|b| b as u32) {
                if a != b && !self.carrier().any(|c| c != a && c != b && self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn lt(&self, a: u32, b: u32) -> bool {
        a != b && self.up[a as usize].contains(b as usize)
    }

    pub fn interval(&self, lo: u32, hi: u32) -> Vec<u32> {
        self.carrier().filter(|&x| self.up[lo as usize].contains(x as usize) && self.up[x as usize].contains(hi as usize)).collect()
    }

    /// Sublattice on the interval `[lo, hi]` with local indices in canonical order.
    pub fn interval_lattice(&self, lo: u32, hi: u32) -> (FiniteLattice, Vec<u32>) {
        let elems = self.interval(lo, hi);
        let leq: Vec<Vec<bool>> =
            elems.iter().map(|&a| elems.iter().map(|&b| self.up[a as usize].contains(b as usize)).collect()).collect();
        let labels = elems.iter().map(|&a| self.labels[a as usize].clone()).collect();
        (FiniteLattice::from_order(&leq, Some(labels)).expect("intervals of lattices are lattices"), elems)
    }

    /// `[0, hi]` with the relative orthocomplement `x ↦ hi ∧ x⊥` when the
    /// lattice carries an orthocomplement.
    pub fn section(&self, hi: u32) -> (FiniteLattice, Vec<u32>) {
        let (sub, elems) = self.interval_lattice(self.bottom, hi);
        let Some(o) = &self.ortho else { return (sub, elems) };
        let local: Option<Vec<u32>> = elems
            .iter()
            .map(|&x| {
                let y = self.meet(&hi, &o[x as usize]);
                elems.iter().position(|&e| e == y).map(|p| p as u32)
            })
            .collect();
        match local {
            Some(l) => (sub.with_ortho(l).expect("map into the section"), elems),
            None => (sub, elems),
        }
    }

    /// Smallest congruence identifying `a` and `b`, by closing under the
    /// translations `t ↦ t ∧ z` and `t ↦ t ∨ z`.
    pub fn principal_congruence(&self, a: u32, b: u32) -> Congruence {
        self.congruence_of(&[(a, b)])
    }

    pub fn congruence_of(&self, pairs: &[(u32, u32)]) -> Congruence {
        let mut uf = UnionFind((0..self.n as u32).collect());
        let mut work: Vec<(u32, u32)> = pairs.to_vec();
        while let Some((x, y)) = work.pop() {
            if !uf.union(x, y) {
                continue;
            }
            for z in self.carrier() {
                work.push((self.meet(&x, &z), self.meet(&y, &z)));
                work.push((self.join(&x, &z), self.join(&y, &z)));
            }
        }
        uf.congruence()
    }

    fn congruence_join(&self, a: &Congruence, b: &Congruence) -> Congruence {
        let pairs: Vec<(u32, u32)> = (0..self.n as u32)
            .flat_map(|x| [(x, a.class[x as usize]), (x, b.class[x as usize])])
            .collect();
        self.congruence_of(&pairs)
    }

    /// All congruences, as joins of principal congruences of covering pairs.
    pub fn congruences(&self) -> Result<CongruenceSummary, LatError> {
        if self.n > CONGRUENCE_BOUND {
            return Err(LatError::BackendTooLarge { size: self.n, bound: CONGRUENCE_BOUND });
        }
        let covers = self.covers();
        let mut principal: Vec<Congruence> = Vec::new();
        let mut witness = None;
        for &(a, b) in &covers {
            let c = self.principal_congruence(a, b);
            if !c.is_total() && witness.is_none() {
                witness = Some((a, b));
            }
            if !principal.contains(&c) {
                principal.push(c);
            }
        }
        let trivial = UnionFind((0..self.n as u32).collect()).congruence();
        let mut all = vec![trivial];
        let mut frontier: Vec<Congruence> = principal.clone();
        while let Some(c) = frontier.pop() {
            if all.contains(&c) {
                continue;
            }
            for p in &principal {
                frontier.push(self.congruence_join(&c, p));
            }
            all.push(c);
        }
        all.sort();
        let simple = self.n >= 2 && all.len() == 2;
        Ok(CongruenceSummary { congruences: all, simple, witness })
    }

    pub fn is_simple(&self) -> Result<bool, LatError> {
        if self.n > CONGRUENCE_BOUND {
            return Err(LatError::BackendTooLarge { size: self.n, bound: CONGRUENCE_BOUND });
        }
        Ok(self.n >= 2 && self.covers().iter().all(|&(a, b)| self.principal_congruence(a, b).is_total()))
    }

    /// Whether every interval `[0, a]` with `a ≠ 0` is simple; the first
    /// failing `a` otherwise.
    pub fn lower_intervals_simple(&self) -> Result<Option<u32>, LatError> {
        for a in self.carrier().filter(|&a| a != self.bottom) {
            let (sub, _) = self.interval_lattice(self.bottom, a);
            if !sub.is_simple()? {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// Direct product with componentwise order; code `a + |self|·b`.
    pub fn product(&self, other: &FiniteLattice) -> FiniteLattice {
        let n = self.n * other.n;
        let split = |x: usize| (x % self.n, x / self.n);
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|x| {
                let (a, b) = split(x);
                (0..n)
                    .map(|y| {
                        let (c, d) = split(y);
                        self.up[a].contains(c) && other.up[b].contains(d)
                    })
                    .collect()
            })
            .collect();
        let labels = (0..n).map(|x| format!("({},{})", self.labels[x % self.n], other.labels[x / self.n])).collect();
        let lat = FiniteLattice::from_order(&leq, Some(labels)).expect("products of lattices are lattices");
        match (&self.ortho, &other.ortho) {
            (Some(o1), Some(o2)) => {
                let o = (0..n).map(|x| o1[x % self.n] + self.n as u32 * o2[x / self.n]).collect();
                lat.with_ortho(o).expect("componentwise orthocomplement")
            }
            _ => lat,
        }
    }

    /// `{"elements":k,"leq":bitrows,"ortho":[…]|null,"labels":[…]}`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<String> = (0..self.n)
            .map(|a| (0..self.n).map(|b| if self.up[a].contains(b) { '1' } else { '0' }).collect())
            .collect();
        json!({
            "elements": self.n,
            "leq": rows,
            "ortho": self.ortho,
            "labels": self.labels,
        })
    }

    pub fn from_json(v: &Value) -> Result<FiniteLattice, LatError> {
        let bad = |m: &str| LatError::Invalid(m.to_string());
        let n = v["elements"].as_u64().ok_or_else(|| bad("missing \"elements\""))? as usize;
        let rows = v["leq"].as_array().ok_or_else(|| bad("missing \"leq\""))?;
        if rows.len() != n {
            return Err(bad("\"leq\" must have one row per element"));
        }
        let leq = rows
            .iter()
            .map(|r| {
                let s = r.as_str().ok_or_else(|| bad("\"leq\" rows are 0/1 strings"))?;
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(bad("\"leq\" rows are 0/1 strings")),
                    })
                    .collect::<Result<Vec<bool>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let labels = match v.get("labels") {
            Some(Value::Array(ls)) => Some(ls.iter().map(|l| l.as_str().map(String::from).unwrap_or_else(|| l.to_string())).collect()),
            _ => None,
        };
        let lat = FiniteLattice::from_order(&leq, labels)?;
        match v.get("ortho") {
            Some(Value::Array(o)) => {
                let map = o.iter().map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| bad("\"ortho\" entries are indices"))).collect::<Result<Vec<_>, _>>()?;
                lat.with_ortho(map)
            }
            _ => Ok(lat),
        }
    }

    /// Hasse diagram in DOT; orthocomplement pairs as dashed undirected edges.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{}\" {{\n  rankdir=BT;\n", name.replace('"', "'"));
        for a in self.carrier() {
            s.push_str(&format!("  n{a} [label=\"{}\"];\n", self.labels[a as usize].replace('"', "'")));
        }
        for (a, b) in self.covers() {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        if let Some(o) = &self.ortho {
            for a in self.carrier() {
                let b = o[a as usize];
                if a < b {
                    s.push_str(&format!("  n{a} -> n{b} [style=dashed, dir=none, constraint=false];\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

impl LatticeContext for FiniteLattice {
    type Elem = u32;

    fn bottom(&self) -> u32 {
        self.bottom
    }

    fn top(&self) -> u32 {
        self.top
    }

    fn leq(&self, a: &u32, b: &u32) -> bool {
        self.up[*a as usize].contains(*b as usize)
    }

    fn meet(&self, a: &u32, b: &u32) -> u32 {
        self.meet[*a as usize * self.n + *b as usize]
    }

    fn join(&self, a: &u32, b: &u32) -> u32 {
        self.join[*a as usize * self.n + *b as usize]
    }

    fn ortho(&self, a: &u32) -> Option<u32> {
        self.ortho.as_ref().map(|o| o[*a as usize])
    }

    fn is_mol(&self) -> bool {
        self.mol
    }

    fn describe(&self, a: &u32) -> String {
        format!("{}:{}", a, self.labels[*a as usize])
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.n as u32)
    }

    fn height_of(&self, a: &u32) -> usize {
        self.ranks[*a as usize]
    }

    fn elements(&self) -> Option<Vec<u32>> {
        Some(self.carrier().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_square() {
        let b = FiniteLattice::boolean(2);
        assert_eq!(b.size(), 4);
        assert_eq!(b.height(), 2);
        assert!(b.is_mol());
        assert_eq!(b.meet(&1, &2), 0);
        assert_eq!(b.join(&1, &2), 3);
        let c = b.congruences().unwrap();
        // factor congruences of 2×2 plus the trivial and total ones
        assert_eq!(c.congruences.len(), 4);
        assert!(!c.simple);
    }

    #[test]
    fn diamond_is_simple_and_pentagon_is_not() {
        assert!(FiniteLattice::diamond().is_simple().unwrap());
        let p = FiniteLattice::pentagon();
        let c = p.congruences().unwrap();
        assert!(!c.simple);
        // N5: trivial, total, θ(a,c) and the two complementary θ(0,a), θ(0,b)
        assert_eq!(c.congruences.len(), 5);
    }

    #[test]
    fn non_lattice_orders_rejected() {
        // two incomparable maximal elements
        let leq = vec![vec![true, true, true], vec![false, true, false], vec![false, false, true]];
        assert!(matches!(FiniteLattice::from_order(&leq, None), Err(LatError::NotALattice(_))));
    }

    #[test]
    fn json_round_trip() {
        let b = FiniteLattice::boolean(3);
        let back = FiniteLattice::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn chain_swap_ortho_is_mol() {
        let c = FiniteLattice::chain(2).with_ortho(vec![1, 0]).unwrap();
        assert!(c.is_mol());
        let bad = FiniteLattice::chain(3).with_ortho(vec![2, 1, 0]).unwrap();
        assert!(!bad.is_mol());
    }

    #[test]
    fn dot_lists_covers() {
        let d = FiniteLattice::boolean(1).to_dot("b1");
        assert!(d.contains("n0 -> n1;") && d.contains("style=dashed"));
    }
}
