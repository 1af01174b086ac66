use super::Frame;
use crate::exactalg::Scalar;
use crate::latcore::LatticeContext;
use crate::subspace::{InnerProductSpace, Subspace};

/// Lattices up to this size are searched without a node budget.
pub const SEARCH_EXHAUSTIVE_LIMIT: usize = 64;
/// Node budget for larger lattices.
pub const SEARCH_BUDGET: usize = 100_000;

struct Search<'a, L: LatticeContext> {
    l: &'a L,
    n: usize,
    k: usize,
    elems: Vec<L::Elem>,
    nodes: usize,
    budget: usize,
    a: Vec<L::Elem>,
    axes: Vec<L::Elem>,
}

impl<L: LatticeContext> Search<'_, L> {
    fn run(&mut self, acc: &L::Elem) -> bool {
        let pos = self.a.len();
        if pos == self.n + self.k {
            return *acc == self.l.top();
        }
        let l = self.l;
        let total = l.height();
        let used = l.height_of(acc);
        let h0 = self.a.first().map(|x| l.height_of(x));
        let room = if l.is_mol() { l.ortho(acc) } else { None };
        for idx in 0..self.elems.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let d = self.elems[idx].clone();
            let hd = l.height_of(&d);
            if hd == 0 || !l.disjoint(acc, &d) || room.as_ref().is_some_and(|r| !l.leq(&d, r)) {
                continue;
            }
            // heights: n·h0 + (tails) = total with 1 ≤ tail ≤ h0
            let (left_primary, left_tail) = if pos < self.n { (self.n - pos - 1, self.k) } else { (0, self.n + self.k - pos - 1) };
            let h = h0.unwrap_or(hd);
            if pos < self.n && hd != h || pos >= self.n && hd > h {
                continue;
            }
            let rest = total - used - hd;
            if rest < left_primary * h + left_tail || rest > left_primary * h + left_tail * h {
                continue;
            }
            let axis = if pos == 0 {
                None
            } else if pos < self.n {
                match l.axis_in(&self.a[0], &d, &l.join(&self.a[0], &d)) {
                    Some(c) => Some(c),
                    None => continue,
                }
            } else {
                match l.subperspective_axis(&d, &self.a[0]) {
                    Some((_, c)) => Some(c),
                    None => continue,
                }
            };
            self.a.push(d.clone());
            if let Some(c) = &axis {
                self.axes.push(c.clone());
            }
            if self.run(&l.join(acc, &d)) {
                return true;
            }
            self.a.pop();
            if axis.is_some() {
                self.axes.pop();
            }
        }
        false
    }
}

/// First (n,k)-frame in canonical element order with nonzero spanning
/// elements, each `a_i` taken below `(a_0 ⊕ … ⊕ a_{i−1})⊥` on MOL contexts.
/// Needs an enumerable context.
pub fn find_frame<L: LatticeContext>(l: &L, n: usize, k: usize) -> Option<Frame<L::Elem>> {
    if n == 0 || n > l.height() {
        return None;
    }
    let elems = l.elements()?;
    let budget = if elems.len() <= SEARCH_EXHAUSTIVE_LIMIT { usize::MAX } else { SEARCH_BUDGET };
    let mut s = Search { l, n, k, elems, nodes: 0, budget, a: Vec::new(), axes: Vec::new() };
    if !s.run(&l.bottom()) {
        return None;
    }
    let mut f = Frame::new(n, k, s.a, s.axes).ok()?;
    f.log.push(format!("search visited {} nodes", s.nodes));
    Some(f)
}

/// Block frame on a form-orthogonal basis `b_0, …, b_{m−1}` (the standard
/// basis when the space has no form): `a_i` spans block `i`, `a_0i` spans
/// `b_{0,s} − b_{i,s}`. Primary blocks share the largest size `d` with
/// `n·d + k ≤ m ≤ (n + k)·d`; tails take the rest, as evenly as possible.
pub fn canonical_frame(space: &InnerProductSpace, n: usize, k: usize) -> Option<Frame<Subspace>> {
    let m = space.dim();
    if n == 0 || n > m {
        return None;
    }
    let d = (1..=m).rev().find(|&d| n * d + k <= m && m <= (n + k) * d)?;
    let rest = m - n * d;
    let sizes: Vec<usize> = (0..n).map(|_| d).chain((0..k).map(|t| rest / k + usize::from(t < rest % k))).collect();
    let f = space.field();
    let basis: Vec<Vec<Scalar>> = match space.form() {
        Some(_) => space.orthogonal_basis()?,
        None => (0..m).map(|i| (0..m).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect(),
    };
    let mut blocks = Vec::new();
    let mut start = 0;
    for &s in &sizes {
        blocks.push(basis[start..start + s].to_vec());
        start += s;
    }
    let a: Vec<Subspace> = blocks.iter().map(|b| space.span(b).expect("basis vectors")).collect();
    let axes: Vec<Subspace> = (1..n + k)
        .map(|i| {
            let diffs: Vec<Vec<Scalar>> = blocks[i]
                .iter()
                .zip(&blocks[0])
                .map(|(bi, b0)| b0.iter().zip(bi).map(|(x, y)| f.sub(x, y)).collect())
                .collect();
            space.span(&diffs).expect("basis vectors")
        })
        .collect();
    Frame::new(n, k, a, axes).ok()
}
