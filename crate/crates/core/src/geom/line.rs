use super::predicates::{orientation_test, Orientation};
use super::scalar::Scalar;
use super::types::{ConvexPolygon, Coord};
use crate::error::{Error, Result};

/// Line through `a` and `b`, directed from `a` to `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedLine {
    pub a: Coord,
    pub b: Coord,
}

/// Open halfplane to the left or right of an oriented line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl OrientedLine {
    pub fn new(a: Coord, b: Coord) -> Result<Self> {
        if a == b {
            return Err(Error::Internal("line through a single point".into()));
        }
        Ok(OrientedLine { a, b })
    }

    /// Vertical line `x = c`, directed upwards, so `Left` is `x < c`.
    pub fn vertical(c: Scalar) -> Self {
        OrientedLine { a: Coord { x: c.clone(), y: Scalar::zero() }, b: Coord { x: c, y: Scalar::one() } }
    }

    pub fn orientation(&self, c: &Coord) -> Orientation {
        orientation_test(&self.a, &self.b, c)
    }

    /// `None` when `c` lies on the line.
    pub fn side(&self, c: &Coord) -> Option<Side> {
        match self.orientation(c) {
            Orientation::Left => Some(Side::Left),
            Orientation::Right => Some(Side::Right),
            Orientation::Collinear => None,
        }
    }

    pub fn reversed(&self) -> OrientedLine {
        OrientedLine { a: self.b.clone(), b: self.a.clone() }
    }

    /// Intersection with the line through `p` and `q`, if not parallel.
    pub fn intersect(&self, p: &Coord, q: &Coord) -> Option<Coord> {
        let d = self.b.sub(&self.a);
        let e = q.sub(p);
        let den = d.cross(&e);
        if den.is_zero() {
            return None;
        }
        let t = &p.sub(&self.a).cross(&e) / &den;
        Some(self.a.along(&d, &t))
    }

    /// Closed part of `poly` on `side`; `None` if it has no interior.
    pub fn clip(&self, poly: &ConvexPolygon, side: Side) -> Option<ConvexPolygon> {
        let line = match side {
            Side::Left => self.clone(),
            Side::Right => self.reversed(),
        };
        let vs = poly.vertices();
        let n = vs.len();
        let mut out = Vec::new();
        for i in 0..n {
            let (cur, next) = (&vs[i], &vs[(i + 1) % n]);
            let oc = line.orientation(cur);
            let on = line.orientation(next);
            if oc != Orientation::Right {
                out.push(cur.clone());
            }
            let crosses = (oc == Orientation::Left && on == Orientation::Right)
                || (oc == Orientation::Right && on == Orientation::Left);
            if crosses {
                out.push(line.intersect(cur, next).expect("crossing edge is not parallel"));
            }
        }
        ConvexPolygon::from_loop(out).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::BoundingBox;

    #[test]
    fn clip_box_in_half() {
        let bx = BoundingBox { xmin: 0.into(), xmax: 4.into(), ymin: 0.into(), ymax: 2.into() }.to_polygon();
        let t = OrientedLine::vertical(Scalar::from(1));
        let left = t.clip(&bx, Side::Left).unwrap();
        let right = t.clip(&bx, Side::Right).unwrap();
        assert_eq!(left.area2(), Scalar::from(4));
        assert_eq!(right.area2(), Scalar::from(12));
        assert!(t.clip(&bx, Side::Left).unwrap().vertices().iter().all(|v| v.x <= Scalar::from(1)));
    }

    #[test]
    fn clip_misses() {
        let bx = BoundingBox { xmin: 0.into(), xmax: 4.into(), ymin: 0.into(), ymax: 2.into() }.to_polygon();
        let t = OrientedLine::vertical(Scalar::from(-1));
        assert!(t.clip(&bx, Side::Left).is_none());
        assert_eq!(t.clip(&bx, Side::Right).unwrap(), bx);
    }

    #[test]
    fn sides() {
        let t = OrientedLine::new(Coord::new(0, 0), Coord::new(1, 1)).unwrap();
        assert_eq!(t.side(&Coord::new(0, 1)), Some(Side::Left));
        assert_eq!(t.side(&Coord::new(1, 0)), Some(Side::Right));
        assert_eq!(t.side(&Coord::new(2, 2)), None);
    }
}
