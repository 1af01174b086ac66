use super::{image, perspective_clause, subperspective_clause, verify_frame, Frame, FrameError, FrameReport, Level, SEARCH_BUDGET};
use crate::latcore::{lift_complement, FiniteLattice, LatticeContext, LatticeHom};

#[derive(Clone, Debug)]
pub struct Lifted {
    /// Top of the section `M = [0, m]` of the source.
    pub section_top: u32,
    pub frame: Frame<u32>,
    /// `Ψ` checked inside the section (relative orthocomplement where present).
    pub report: FrameReport,
    /// `f[Ψ] = Φ` elementwise, axes and complements included.
    pub image_matches: bool,
    /// `f` restricted to `M` is onto the target.
    pub restriction_surjective: bool,
}

struct Lifter<'a> {
    src: &'a FiniteLattice,
    tgt: &'a FiniteLattice,
    f: &'a LatticeHom,
    phi: &'a Frame<u32>,
    level: Level,
    pre: Vec<Vec<u32>>,
    nodes: usize,
}

impl Lifter<'_> {
    fn spanning(&mut self, chosen: &mut Vec<u32>, acc: u32) -> Option<Lifted> {
        let pos = chosen.len();
        if pos == self.phi.len() {
            return self.complete(chosen, acc);
        }
        for x in self.pre[self.phi.a[pos] as usize].clone() {
            self.nodes += 1;
            if self.nodes > SEARCH_BUDGET {
                return None;
            }
            if !self.src.disjoint(&acc, &x) {
                continue;
            }
            chosen.push(x);
            if let Some(done) = self.spanning(chosen, self.src.join(&acc, &x)) {
                return Some(done);
            }
            chosen.pop();
        }
        None
    }

    fn axis_ok(&self, a: &[u32], j: usize, i: usize, c: u32) -> bool {
        if i < self.phi.n {
            perspective_clause(self.src, &a[j], &a[i], &c)
        } else {
            subperspective_clause(self.src, &a[j], &a[i], &c)
        }
    }

    fn complete(&self, a: &[u32], m: u32) -> Option<Lifted> {
        let (src, phi) = (self.src, self.phi);
        let mut psi = Frame { n: phi.n, k: phi.k, a: a.to_vec(), axes: Default::default(), z: Default::default(), log: Vec::new() };
        for (&(j, i), &target) in &phi.axes {
            // the axis term first, then every preimage in canonical order
            let term = if j > 0 { super::axis_term(src, &psi, j, i) } else { None };
            let c = term
                .into_iter()
                .chain(self.pre[target as usize].iter().copied())
                .find(|&c| self.f.apply(c) == target && self.axis_ok(a, j, i, c))?;
            psi.axes.insert((j, i), c);
        }
        for (&(i, j), &z) in &phi.z {
            let b = image(src, &psi, j, i)?;
            let orthogonal = src.ortho(&b).map(|bp| src.meet(&a[j], &bp)).filter(|&c| self.f.apply(c) == z);
            let lifted = match orthogonal {
                Some(c) if self.level.orthogonal() => c,
                _ => lift_complement(src, self.tgt, self.f, a[j], b, z).ok()?,
            };
            psi.z.insert((i, j), lifted);
        }
        let (section, elems) = src.section(m);
        let local = |x: &u32| elems.iter().position(|e| e == x).map(|p| p as u32).expect("element of the section");
        let report = verify_frame(&section, &psi.map(local), self.level);
        if !report.passed() {
            return None;
        }
        let image_matches = psi.map(|x| self.f.apply(*x)) == Frame { log: Vec::new(), ..phi.clone() };
        let restriction_surjective = self.tgt.carrier().all(|y| elems.iter().any(|&x| self.f.apply(x) == y));
        psi.log.push(format!("section top {}", src.describe(&m)));
        Some(Lifted { section_top: m, frame: psi, report, image_matches, restriction_surjective })
    }
}

/// Lift `Φ` along a surjective 0-1 homomorphism `f` by choosing preimages
/// of the spanning elements, then of the axes, and lifting each `z_ij`
/// as a complement (relative orthocomplement at the orthogonal levels).
pub fn lift_frame(
    src: &FiniteLattice,
    tgt: &FiniteLattice,
    f: &LatticeHom,
    phi: &Frame<u32>,
    level: Level,
) -> Result<Lifted, FrameError> {
    let hom = f.verify(src, tgt);
    if !hom.is_hom() || !hom.surjective {
        return Err(FrameError::LiftFailed("f is not a surjective 0-1 homomorphism".into()));
    }
    if !verify_frame(tgt, phi, level).passed() {
        return Err(FrameError::LiftFailed(format!("target frame does not pass level {level}")));
    }
    let mut pre = vec![Vec::new(); tgt.size()];
    for x in src.carrier() {
        pre[f.apply(x) as usize].push(x);
    }
    let mut lifter = Lifter { src, tgt, f, phi, level, pre, nodes: 0 };
    lifter
        .spanning(&mut Vec::new(), src.bottom())
        .ok_or_else(|| FrameError::LiftFailed(format!("no lift within {SEARCH_BUDGET} nodes")))
}
