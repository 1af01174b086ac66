use super::{subperspective_clause, verify_frame, Frame, FrameError, Level};
use crate::latcore::LatticeContext;

/// A summand with its certificate: `image ≤ target` and an axis `c` with
/// `element ⊕ c = image ⊕ c = element + image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece<E> {
    pub element: E,
    pub image: E,
    pub axis: E,
}

impl<E> Piece<E> {
    fn zero<L: LatticeContext<Elem = E>>(l: &L) -> Piece<E> {
        Piece { element: l.bottom(), image: l.bottom(), axis: l.bottom() }
    }
}

fn require_mol<L: LatticeContext>(l: &L) -> Result<(), FrameError> {
    if l.is_mol() {
        Ok(())
    } else {
        Err(FrameError::HypothesisViolated("context has no admitted orthocomplement".into()))
    }
}

fn ortho<L: LatticeContext>(l: &L, x: &L::Elem) -> L::Elem {
    l.ortho(x).expect("MOL context")
}

/// Certificate for `p` against `target`: `p` itself when `p ≤ target`,
/// otherwise the context's subperspectivity witness.
fn certify<L: LatticeContext>(l: &L, p: &L::Elem, target: &L::Elem) -> Option<Piece<L::Elem>> {
    if l.leq(p, target) {
        return Some(Piece { element: p.clone(), image: p.clone(), axis: l.bottom() });
    }
    let (image, axis) = l.subperspective_axis(p, target)?;
    Some(Piece { element: p.clone(), image, axis })
}

/// Greedy orthogonal decomposition of `x` into at most `max` certified
/// pieces, largest first; contexts without enumeration try `x` whole.
fn greedy_split<L: LatticeContext>(
    l: &L,
    x: &L::Elem,
    target: &L::Elem,
    max: usize,
) -> Result<Vec<Piece<L::Elem>>, FrameError> {
    let mut rest = x.clone();
    let mut out = Vec::new();
    while !l.is_bottom(&rest) {
        if out.len() == max {
            return Err(FrameError::HypothesisViolated(format!(
                "{} does not split into {max} pieces below {}",
                l.describe(x),
                l.describe(target)
            )));
        }
        let piece = match l.elements() {
            Some(all) => {
                let mut cands: Vec<L::Elem> =
                    all.into_iter().filter(|p| !l.is_bottom(p) && l.leq(p, &rest)).collect();
                cands.sort_by_key(|p| std::cmp::Reverse(l.height_of(p)));
                cands.iter().find_map(|p| certify(l, p, target))
            }
            None => certify(l, &rest, target),
        };
        let Some(piece) = piece else {
            return Err(FrameError::HypothesisViolated(format!(
                "no part of {} is perspective into {}",
                l.describe(&rest),
                l.describe(target)
            )));
        };
        rest = l.meet(&rest, &ortho(l, &piece.element));
        out.push(piece);
    }
    Ok(out)
}

fn pad<L: LatticeContext>(l: &L, mut v: Vec<Piece<L::Elem>>, len: usize) -> Vec<Piece<L::Elem>> {
    while v.len() < len {
        v.push(Piece::zero(l));
    }
    v
}

/// `b` as an orthogonal sum of four pieces, each perspective to a part of `a`.
pub fn split_projective<L: LatticeContext>(l: &L, a: &L::Elem, b: &L::Elem) -> Result<Vec<Piece<L::Elem>>, FrameError> {
    require_mol(l)?;
    Ok(pad(l, greedy_split(l, b, a, 4)?, 4))
}

/// For `a_0 ≤ a`, `a ∧ b = 0` and `b ≲ a_0`: five orthogonal pieces
/// subperspective to `a_0`, namely `c = b ∧ a⊥` and a split of the relative
/// orthocomplement `d` of `c` in `[0, (a + b) ∧ a⊥]`. They join to
/// `(a + b) ∧ a⊥`, which equals `b` exactly when `b ≤ a⊥`.
pub fn split_subperspective<L: LatticeContext>(
    l: &L,
    a0: &L::Elem,
    a: &L::Elem,
    b: &L::Elem,
) -> Result<Vec<Piece<L::Elem>>, FrameError> {
    require_mol(l)?;
    if !l.leq(a0, a) || !l.disjoint(a, b) || l.subperspective_axis(b, a0).is_none() {
        return Err(FrameError::HypothesisViolated("need a_0 ≤ a, a ∧ b = 0 and b ≲ a_0".into()));
    }
    let ap = ortho(l, a);
    let c = l.meet(b, &ap);
    let x = l.meet(&l.join(a, b), &ap);
    let d = l.meet(&x, &ortho(l, &c));
    let mut out = Vec::new();
    if !l.is_bottom(&c) {
        out.push(certify(l, &c, a0).ok_or_else(|| FrameError::HypothesisViolated("b ∧ a⊥ is not subperspective".into()))?);
    }
    out.extend(greedy_split(l, &d, a0, 4)?);
    Ok(pad(l, out, 5))
}

#[derive(Clone, Debug)]
pub struct Orthogonalized<E> {
    pub frame: Frame<E>,
    /// Original tail index of every new tail.
    pub origin: Vec<usize>,
    /// Image of every new tail in `a_0`.
    pub images: Vec<E>,
}

/// Replace each tail `a_i` by certified pieces of `(A + a_i) ∧ A⊥`, with `A`
/// the sum of everything processed so far. A tail already orthogonal to `A`
/// keeps its own axis.
pub fn orthogonalize_frame<L: LatticeContext>(
    l: &L,
    frame: &Frame<L::Elem>,
) -> Result<Orthogonalized<L::Elem>, FrameError> {
    require_mol(l)?;
    if !verify_frame(l, frame, Level::Basic).passed() {
        return Err(FrameError::HypothesisViolated("input is not a frame".into()));
    }
    let mut acc = l.bottom();
    for i in 0..frame.n {
        if !l.leq(&frame.a[i], &ortho(l, &acc)) {
            return Err(FrameError::HypothesisViolated(format!("a_{i} is not orthogonal to the earlier a_j")));
        }
        acc = l.join(&acc, &frame.a[i]);
    }
    let a0 = &frame.a[0];
    let mut a: Vec<L::Elem> = frame.a[..frame.n].to_vec();
    let mut axes: Vec<L::Elem> = (1..frame.n).map(|i| frame.axes[&(0, i)].clone()).collect();
    let (mut origin, mut images, mut log) = (Vec::new(), Vec::new(), frame.log.clone());
    for i in frame.tails() {
        let ai = &frame.a[i];
        let pieces = if l.leq(ai, &ortho(l, &acc)) {
            let ax = frame.axes[&(0, i)].clone();
            vec![Piece { element: ai.clone(), image: l.meet(a0, &l.join(ai, &ax)), axis: ax }]
        } else {
            split_subperspective(l, a0, &acc, ai)?
        };
        for p in pieces.into_iter().filter(|p| !l.is_bottom(&p.element)) {
            if !subperspective_clause(l, a0, &p.element, &p.axis) {
                return Err(FrameError::HypothesisViolated(format!("certificate for a piece of a_{i} fails")));
            }
            log.push(format!("tail {i} -> {}", l.describe(&p.element)));
            a.push(p.element);
            axes.push(p.axis);
            images.push(p.image);
            origin.push(i);
        }
        acc = l.join(&acc, ai);
    }
    let k = a.len() - frame.n;
    let mut out = Frame::new(frame.n, k, a, axes)?;
    out.log = log;
    Ok(Orthogonalized { frame: out, origin, images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;
    use crate::frames::canonical_frame;
    use crate::latcore::principal_right_ideal_lattice;
    use crate::starring::catalog_ring;
    use crate::subspace::InnerProductSpace;

    #[test]
    fn already_orthogonal_frame_is_unchanged() {
        let v = InnerProductSpace::dot(&Field::rationals(), 4);
        let f = canonical_frame(&v, 3, 1).unwrap();
        let o = orthogonalize_frame(&v, &f).unwrap();
        assert_eq!((o.frame.a.clone(), o.frame.axes.clone()), (f.a.clone(), f.axes.clone()));
    }

    #[test]
    fn skew_tail_over_q3() {
        let v = InnerProductSpace::dot(&Field::rationals(), 3);
        let mut f = canonical_frame(&v, 2, 1).unwrap();
        // tail a_2 = span{(1,1,1)}, axis span{e_0 − (1,1,1)} keeps clause 3
        f.a[2] = v.span_i64(&[vec![1, 1, 1]]).unwrap();
        f.axes.insert((0, 2), v.span_i64(&[vec![0, 1, 1]]).unwrap());
        assert!(verify_frame(&v, &f, Level::Basic).passed());
        assert!(!verify_frame(&v, &f, Level::Orthogonal).passed());
        let o = orthogonalize_frame(&v, &f).unwrap();
        assert!(verify_frame(&v, &o.frame, Level::Orthogonal).passed());
        assert!(o.frame.k <= 5);
        assert_eq!(o.frame.a[2], v.axis(2));
    }

    #[test]
    fn split_with_b_orthogonal_to_a_is_a_single_piece() {
        let v = InnerProductSpace::dot(&Field::rationals(), 4);
        let (a0, b) = (v.axis(0), v.axis(3));
        let p = split_subperspective(&v, &a0, &a0, &b).unwrap();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0].element, b);
        assert!(p[1..].iter().all(|x| x.element.is_zero()));
    }

    #[test]
    fn split_crossing_the_orthocomplement() {
        let v = InnerProductSpace::dot(&Field::rationals(), 4);
        let a = v.join(&v.axis(0), &v.axis(1));
        let a0 = a.clone();
        let b = v.span_i64(&[vec![0, 1, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        let p = split_subperspective(&v, &a0, &a, &b).unwrap();
        let nonzero: Vec<_> = p.iter().filter(|x| !x.element.is_zero()).collect();
        assert_eq!(nonzero.len(), 2);
        let sum = v.join_all(&nonzero.iter().map(|x| x.element.clone()).collect::<Vec<_>>());
        assert_eq!(sum, v.meet(&v.join(&a, &b), &v.ortho(&a).unwrap()));
        assert!(v.leq(&nonzero[0].element, &v.ortho(&nonzero[1].element).unwrap()));
        for x in nonzero {
            assert!(v.leq(&x.image, &a0) && subperspective_clause(&v, &a0, &x.element, &x.axis));
        }
    }

    #[test]
    fn perspective_atoms_in_m2_gf3() {
        let r = catalog_ring("m2_gf3").unwrap();
        let l = principal_right_ideal_lattice(&r, 6561).unwrap().lattice;
        let atoms = l.atoms();
        let p = split_projective(&l, &atoms[0], &atoms[1]).unwrap();
        assert_eq!(p.iter().filter(|x| x.element != l.bottom()).count(), 1);
        assert_eq!(p[0].element, atoms[1]);
        assert_eq!(p[0].image, atoms[0]);
    }
}
