//! Large partial (n,k)-frames over any lattice context: verification, axis
//! derivation, stabilization, search, orthogonalization and lifting.

mod lift;
mod ortho;
mod search;

pub use lift::{lift_frame, Lifted};
pub use ortho::{orthogonalize_frame, split_projective, split_subperspective, Orthogonalized, Piece};
pub use search::{canonical_frame, find_frame, SEARCH_BUDGET, SEARCH_EXHAUSTIVE_LIMIT};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::latcore::{LatError, LatticeContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Basic,
    Stable,
    Orthogonal,
    StableOrthogonal,
}

impl Level {
    pub fn stable(self) -> bool {
        matches!(self, Level::Stable | Level::StableOrthogonal)
    }

    pub fn orthogonal(self) -> bool {
        matches!(self, Level::Orthogonal | Level::StableOrthogonal)
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Basic => "basic",
            Level::Stable => "stable",
            Level::Orthogonal => "orthogonal",
            Level::StableOrthogonal => "stable-orthogonal",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Level, String> {
        match s {
            "basic" => Ok(Level::Basic),
            "stable" => Ok(Level::Stable),
            "orthogonal" => Ok(Level::Orthogonal),
            "stable-orthogonal" => Ok(Level::StableOrthogonal),
            _ => Err(format!("unknown frame level {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("a_{j}{i} is not an axis for its pair")]
    AxisVerificationFailed { j: usize, i: usize },
    #[error("no complement of b_{j}{i} in [0, a_{j}]")]
    ComplementNotFound { i: usize, j: usize },
    #[error("lift failed: {0}")]
    LiftFailed(String),
    #[error(transparent)]
    Lattice(#[from] LatError),
}

/// An (n,k)-frame. Axes are keyed `(j, i)` with `j < i`, so `a_0i` sits at
/// `(0, i)`; complements are keyed `(i, j)` for `z_ij ≤ a_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame<E> {
    pub n: usize,
    pub k: usize,
    pub a: Vec<E>,
    pub axes: BTreeMap<(usize, usize), E>,
    pub z: BTreeMap<(usize, usize), E>,
    /// Choices made while building the frame, in order.
    pub log: Vec<String>,
}

impl<E: Clone> Frame<E> {
    /// Frame from spanning elements and primary axes `a_01, …, a_0(n+k−1)`.
    pub fn new(n: usize, k: usize, a: Vec<E>, primary: Vec<E>) -> Result<Frame<E>, FrameError> {
        if n == 0 || a.len() != n + k || primary.len() + 1 != n + k {
            return Err(FrameError::HypothesisViolated(format!(
                "format ({n},{k}) needs {} elements and {} axes, got {} and {}",
                n + k,
                n + k - 1,
                a.len(),
                primary.len()
            )));
        }
        let axes = primary.into_iter().enumerate().map(|(i, x)| ((0, i + 1), x)).collect();
        Ok(Frame { n, k, a, axes, z: BTreeMap::new(), log: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.n + self.k
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn tails(&self) -> std::ops::Range<usize> {
        self.n..self.n + self.k
    }

    /// `a_ji` (equivalently `a_ij`).
    pub fn axis(&self, j: usize, i: usize) -> Option<&E> {
        self.axes.get(&(j.min(i), j.max(i)))
    }

    pub fn primary_axes(&self) -> Vec<E> {
        (1..self.len()).map(|i| self.axes[&(0, i)].clone()).collect()
    }

    /// Pairs `(j, i)` whose axis a stable frame carries: `j < n`, `j < i`.
    pub fn axis_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|j| (j + 1..self.len()).map(move |i| (j, i))).collect()
    }

    /// Pairs `(i, j)` carrying a complement `z_ij`: `j < n ≤ i`.
    pub fn z_pairs(&self) -> Vec<(usize, usize)> {
        self.tails().flat_map(|i| (0..self.n).map(move |j| (i, j))).collect()
    }

    pub fn map<F, G: Clone>(&self, f: F) -> Frame<G>
    where
        F: Fn(&E) -> G,
    {
        Frame {
            n: self.n,
            k: self.k,
            a: self.a.iter().map(&f).collect(),
            axes: self.axes.iter().map(|(k, v)| (*k, f(v))).collect(),
            z: self.z.iter().map(|(k, v)| (*k, f(v))).collect(),
            log: self.log.clone(),
        }
    }
}

/// `p + x = p ⊕ c = x ⊕ c`.
pub fn perspective_clause<L: LatticeContext>(l: &L, p: &L::Elem, x: &L::Elem, c: &L::Elem) -> bool {
    let s = l.join(p, x);
    l.direct_sum_is(p, c, &s) && l.direct_sum_is(x, c, &s)
}

/// `p(x + c) + x = x ⊕ c = p(x + c) ⊕ c`.
pub fn subperspective_clause<L: LatticeContext>(l: &L, p: &L::Elem, x: &L::Elem, c: &L::Elem) -> bool {
    let s = l.join(x, c);
    let b = l.meet(p, &s);
    l.join(&b, x) == s && l.disjoint(x, c) && l.direct_sum_is(&b, c, &s)
}

/// Image `b_ji = a_j(a_i + a_ji)` of `a_i` in `a_j`.
pub fn image<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>, j: usize, i: usize) -> Option<L::Elem> {
    let ax = frame.axis(j, i)?;
    Some(l.meet(&frame.a[j], &l.join(&frame.a[i], ax)))
}

/// The axis term `(a_0j + a_0i)(a_j + a_i)`.
pub fn axis_term<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>, j: usize, i: usize) -> Option<L::Elem> {
    let (x, y) = (frame.axis(0, j)?, frame.axis(0, i)?);
    Some(l.meet(&l.join(x, y), &l.join(&frame.a[j], &frame.a[i])))
}

fn pair_clause<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>, j: usize, i: usize) -> bool {
    let Some(ax) = frame.axis(j, i) else { return false };
    if i < frame.n {
        perspective_clause(l, &frame.a[j], &frame.a[i], ax)
    } else {
        subperspective_clause(l, &frame.a[j], &frame.a[i], ax)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseFailure {
    pub clause: &'static str,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameReport {
    pub level: Level,
    pub failures: Vec<ClauseFailure>,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, clause: &str) -> bool {
        self.failures.iter().any(|f| f.clause == clause)
    }
}

/// Check every clause of `level`.
pub fn verify_frame<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>, level: Level) -> FrameReport {
    let mut failures = Vec::new();
    let mut fail = |clause: &'static str, indices: Vec<usize>| failures.push(ClauseFailure { clause, indices });
    let a = &frame.a;

    let mut acc = l.bottom();
    for (i, x) in a.iter().enumerate() {
        if !l.disjoint(&acc, x) {
            fail("1", vec![i]);
        }
        acc = l.join(&acc, x);
    }
    if acc != l.top() {
        fail("1", vec![]);
    }
    for i in 1..frame.len() {
        let clause = if i < frame.n { "2" } else { "3" };
        if !pair_clause(l, frame, 0, i) {
            fail(clause, vec![0, i]);
        }
    }
    if level.stable() {
        for (j, i) in frame.axis_pairs().into_iter().filter(|&(j, _)| j > 0) {
            if !pair_clause(l, frame, j, i) {
                fail("axes", vec![j, i]);
            }
        }
        for (i, j) in frame.z_pairs() {
            let ok = match (frame.z.get(&(i, j)), image(l, frame, j, i)) {
                (Some(z), Some(b)) => {
                    l.direct_sum_is(&b, z, &a[j])
                        && (!level.orthogonal() || l.ortho(&b).is_some_and(|bp| l.meet(&a[j], &bp) == *z))
                }
                _ => false,
            };
            if !ok {
                fail(if level.orthogonal() { "z-orthogonal" } else { "z" }, vec![i, j]);
            }
        }
    }
    if level.orthogonal() {
        for i in 0..frame.len() {
            let rest: Vec<L::Elem> = a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
            if l.ortho(&a[i]) != Some(l.join_all(&rest)) {
                fail("orthogonal", vec![i]);
            }
        }
    }
    FrameReport { level, failures }
}

/// Populate every `a_ji` (`1 ≤ j < n`, `j < i`) by the axis term and check
/// that it is an axis for its pair.
pub fn derive_axes<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>) -> Result<Frame<L::Elem>, FrameError> {
    let report = verify_frame(l, frame, Level::Basic);
    if !report.passed() {
        return Err(FrameError::HypothesisViolated(format!("not a frame: {:?}", report.failures)));
    }
    let mut out = frame.clone();
    for (j, i) in frame.axis_pairs().into_iter().filter(|&(j, _)| j > 0) {
        let t = axis_term(l, frame, j, i).expect("primary axes present");
        out.axes.insert((j, i), t);
        if !pair_clause(l, &out, j, i) {
            return Err(FrameError::AxisVerificationFailed { j, i });
        }
    }
    Ok(out)
}

/// Derive all axes and choose `z_ij` as a complement of `b_ji` in `[0, a_j]`
/// with the context's chooser (a relative orthocomplement on MOL contexts).
pub fn stabilize_frame<L: LatticeContext>(l: &L, frame: &Frame<L::Elem>) -> Result<Frame<L::Elem>, FrameError> {
    let mut out = derive_axes(l, frame)?;
    for (i, j) in frame.z_pairs() {
        let b = image(l, &out, j, i).expect("axis derived");
        let z = l
            .complement_in_interval(&l.bottom(), &b, &out.a[j])
            .ok_or(FrameError::ComplementNotFound { i, j })?;
        out.log.push(format!("z[{i},{j}] := {}", l.describe(&z)));
        out.z.insert((i, j), z);
    }
    Ok(out)
}
