//! Left/right projections, the relative inverse `q` and covering projections.

use super::{RingError, StarRing};

pub fn is_idempotent<R: StarRing>(ring: &R, e: &R::Elem) -> bool {
    ring.mul(e, e) == *e
}

pub fn is_projection<R: StarRing>(ring: &R, e: &R::Elem) -> bool {
    is_idempotent(ring, e) && ring.star(e) == *e
}

/// `l(x) = x (x*x)' x*`, the projection generating `xR`.
pub fn left_projection<R: StarRing>(ring: &R, x: &R::Elem) -> Result<R::Elem, RingError> {
    let xs = ring.star(x);
    let qi = ring.quasi_inverse(&ring.mul(&xs, x))?;
    Ok(ring.mul3(x, &qi, &xs))
}

/// `r(x) = x* (xx*)' x`, the projection generating `Rx`.
pub fn right_projection<R: StarRing>(ring: &R, x: &R::Elem) -> Result<R::Elem, RingError> {
    let xs = ring.star(x);
    let qi = ring.quasi_inverse(&ring.mul(x, &xs))?;
    Ok(ring.mul3(&xs, &qi, x))
}

pub fn left_right_projections<R: StarRing>(ring: &R, x: &R::Elem) -> Result<(R::Elem, R::Elem), RingError> {
    let l = left_projection(ring, x)?;
    let r = right_projection(ring, x)?;
    for (name, p) in [("l", &l), ("r", &r)] {
        if !is_projection(ring, p) {
            return Err(RingError::PostconditionFailed(format!("{name}({}) is not a projection", ring.describe(x))));
        }
    }
    if ring.mul(&l, x) != *x || ring.mul(x, &r) != *x {
        return Err(RingError::PostconditionFailed(format!("l·x = x = x·r fails at {}", ring.describe(x))));
    }
    Ok((l, r))
}

fn raw_relative_inverse<R: StarRing>(ring: &R, a: &R::Elem) -> Result<(R::Elem, R::Elem, R::Elem), RingError> {
    let (l, r) = left_right_projections(ring, a)?;
    let a1 = ring.quasi_inverse(a)?;
    Ok((ring.mul3(&r, &a1, &l), l, r))
}

/// `q(a) = r(a)·a'·l(a)`, with every defining identity checked before returning.
pub fn rickart_inverse<R: StarRing>(ring: &R, a: &R::Elem) -> Result<R::Elem, RingError> {
    let (q, l, r) = raw_relative_inverse(ring, a)?;
    let fail = |what: &str| RingError::PostconditionFailed(format!("{what} at {}", ring.describe(a)));
    if ring.mul(a, &q) != l {
        return Err(fail("a·q(a) = l(a)"));
    }
    if ring.mul(&q, a) != r {
        return Err(fail("q(a)·a = r(a)"));
    }
    if ring.mul(&r, &q) != q {
        return Err(fail("r(a)·q(a) = q(a)"));
    }
    if ring.mul(&q, &l) != q {
        return Err(fail("q(a)·l(a) = q(a)"));
    }
    let (qq, _, _) = raw_relative_inverse(ring, &q)?;
    if qq != *a {
        return Err(fail("q(q(a)) = a"));
    }
    Ok(q)
}

/// Projection `e_x = l(x) ∨ r(x)` with `e_x·x·e_x = x`. The join of two
/// projections is `e + l(f - e·f)`, the generator of `eR + fR`.
pub fn covering_projection<R: StarRing>(ring: &R, x: &R::Elem) -> Result<R::Elem, RingError> {
    let (l, r) = left_right_projections(ring, x)?;
    let rest = ring.sub(&r, &ring.mul(&l, &r));
    let e = ring.add(&l, &left_projection(ring, &rest)?);
    if !is_projection(ring, &e) {
        return Err(RingError::PostconditionFailed(format!("covering element of {} is not a projection", ring.describe(x))));
    }
    if ring.mul3(&e, x, &e) != *x {
        return Err(RingError::PostconditionFailed(format!("e·x·e = x fails at {}", ring.describe(x))));
    }
    Ok(e)
}
