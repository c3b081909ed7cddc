use super::types::{Coord, Matching, PointSet, Segment};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Left => 1,
            Orientation::Right => -1,
            Orientation::Collinear => 0,
        }
    }

    pub fn reversed(self) -> Orientation {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    fn from_sign(s: i32) -> Orientation {
        match s.signum() {
            1 => Orientation::Left,
            -1 => Orientation::Right,
            _ => Orientation::Collinear,
        }
    }
}

const FAST_LIMIT: i64 = 1 << 61;

fn small(v: &super::Scalar) -> Option<i128> {
    v.as_small_int().filter(|x| x.abs() < FAST_LIMIT).map(|x| x as i128)
}

/// Sign of the determinant of `(q - p, r - p)`: `Left` when `p, q, r` turn
/// counterclockwise.
pub fn orientation_test(p: &Coord, q: &Coord, r: &Coord) -> Orientation {
    if let (Some(px), Some(py), Some(qx), Some(qy), Some(rx), Some(ry)) =
        (small(&p.x), small(&p.y), small(&q.x), small(&q.y), small(&r.x), small(&r.y))
    {
        // |differences| < 2^62, products < 2^124
        let det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
        return Orientation::from_sign(det.signum() as i32);
    }
    Orientation::from_sign(q.sub(p).cross(&r.sub(p)).signum())
}

/// `c` lies on the closed segment `ab`, assuming the three are collinear.
fn within(a: &Coord, b: &Coord, c: &Coord) -> bool {
    let (xlo, xhi) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &c.x >= xlo && &c.x <= xhi && &c.y >= ylo && &c.y <= yhi
}

/// `c` lies on the closed segment `ab`.
pub fn on_segment(a: &Coord, b: &Coord, c: &Coord) -> bool {
    orientation_test(a, b, c) == Orientation::Collinear && within(a, b, c)
}

/// True iff the closed segments `p1p2` and `q1q2` share a point that is not
/// a common endpoint of both.
pub fn segments_conflict(p1: &Coord, p2: &Coord, q1: &Coord, q2: &Coord) -> bool {
    // quick reject on bounding boxes
    let (pxl, pxh) = if p1.x <= p2.x { (&p1.x, &p2.x) } else { (&p2.x, &p1.x) };
    let (qxl, qxh) = if q1.x <= q2.x { (&q1.x, &q2.x) } else { (&q2.x, &q1.x) };
    if pxh < qxl || qxh < pxl {
        return false;
    }
    let (pyl, pyh) = if p1.y <= p2.y { (&p1.y, &p2.y) } else { (&p2.y, &p1.y) };
    let (qyl, qyh) = if q1.y <= q2.y { (&q1.y, &q2.y) } else { (&q2.y, &q1.y) };
    if pyh < qyl || qyh < pyl {
        return false;
    }

    let o1 = orientation_test(p1, p2, q1);
    let o2 = orientation_test(p1, p2, q2);
    let o3 = orientation_test(q1, q2, p1);
    let o4 = orientation_test(q1, q2, p2);
    let shared = |c: &Coord| (c == p1 || c == p2) && (c == q1 || c == q2);

    if o1 == Orientation::Collinear && o2 == Orientation::Collinear {
        // both on one line: overlap of the two intervals
        let key = |c: &Coord| if p1.x != p2.x || q1.x != q2.x { c.x.clone() } else { c.y.clone() };
        let (a0, a1) = sorted(key(p1), key(p2));
        let (b0, b1) = sorted(key(q1), key(q2));
        let lo = if a0 >= b0 { a0 } else { b0 };
        let hi = if a1 <= b1 { a1 } else { b1 };
        if lo > hi {
            return false;
        }
        if lo < hi {
            return true;
        }
        // single touching point
        let touch = [p1, p2, q1, q2].into_iter().find(|c| key(c) == lo).unwrap();
        return !shared(touch);
    }

    for (o, c, a, b) in [(o1, q1, p1, p2), (o2, q2, p1, p2), (o3, p1, q1, q2), (o4, p2, q1, q2)] {
        if o == Orientation::Collinear && within(a, b, c) && !shared(c) {
            return true;
        }
    }
    o1.sign() * o2.sign() < 0 && o3.sign() * o4.sign() < 0
}

fn sorted(a: super::Scalar, b: super::Scalar) -> (super::Scalar, super::Scalar) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Segments by id over a common point set: true iff the closed segments
/// share a point other than a shared endpoint.
pub fn segments_cross(base: &PointSet, s: &Segment, t: &Segment) -> bool {
    if s == t {
        return false;
    }
    segments_conflict(&base.coord(s.a), &base.coord(s.b), &base.coord(t.a), &base.coord(t.b))
}

fn same_base(m: &Matching, m2: &Matching) -> Result<()> {
    if std::sync::Arc::ptr_eq(m.base(), m2.base()) || m.base() == m2.base() {
        Ok(())
    } else {
        Err(Error::MismatchedVertexSet)
    }
}

/// Union of the two edge sets is non-crossing. Shared edges are allowed.
pub fn compatible(m: &Matching, m2: &Matching) -> Result<bool> {
    same_base(m, m2)?;
    let base = m.base();
    let other: Vec<(Segment, Coord, Coord)> =
        m2.segments().map(|s| (s, base.coord(s.a), base.coord(s.b))).collect();
    for s in m.segments() {
        let (p1, p2) = (base.coord(s.a), base.coord(s.b));
        for (t, q1, q2) in &other {
            if s != *t && segments_conflict(&p1, &p2, q1, q2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// No edge in common.
pub fn disjoint(m: &Matching, m2: &Matching) -> Result<bool> {
    same_base(m, m2)?;
    Ok(m.edges().is_disjoint(m2.edges()))
}
