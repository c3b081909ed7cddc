use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::predicates::{orientation_test, segments_conflict, Orientation};
use super::Scalar;
use crate::error::{Error, Result};

pub type PointId = usize;

/// An unlabeled exact position.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub x: Scalar,
    pub y: Scalar,
}

impl Coord {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Coord { x: x.into(), y: y.into() }
    }

    pub fn sub(&self, o: &Coord) -> Coord {
        Coord { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn add(&self, o: &Coord) -> Coord {
        Coord { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, k: &Scalar) -> Coord {
        Coord { x: &self.x * k, y: &self.y * k }
    }

    pub fn cross(&self, o: &Coord) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Coord) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    /// `self + t * dir`
    pub fn along(&self, dir: &Coord, t: &Scalar) -> Coord {
        Coord { x: &self.x + &(&dir.x * t), y: &self.y + &(&dir.y * t) }
    }

    pub fn midpoint(&self, o: &Coord) -> Coord {
        let half = Scalar::ratio(1, 2);
        Coord { x: (&self.x + &o.x) * &half, y: (&self.y + &o.y) * &half }
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
    pub id: PointId,
}

impl Point {
    pub fn coord(&self) -> Coord {
        Coord { x: self.x.clone(), y: self.y.clone() }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}({}, {})", self.id, self.x, self.y)
    }
}

/// Unordered pair of point ids, stored with `a < b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Segment {
    pub a: PointId,
    pub b: PointId,
}

impl Segment {
    pub fn new(p: PointId, q: PointId) -> Self {
        debug_assert_ne!(p, q);
        if p < q {
            Segment { a: p, b: q }
        } else {
            Segment { a: q, b: p }
        }
    }

    pub fn has(&self, id: PointId) -> bool {
        self.a == id || self.b == id
    }

    pub fn other(&self, id: PointId) -> PointId {
        if self.a == id {
            self.b
        } else {
            self.a
        }
    }

    pub fn shares_endpoint(&self, o: &Segment) -> bool {
        self.has(o.a) || self.has(o.b)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Ids are assigned densely in input order.
    pub fn from_coords(coords: impl IntoIterator<Item = Coord>) -> Self {
        let points = coords
            .into_iter()
            .enumerate()
            .map(|(id, c)| Point { x: c.x, y: c.y, id })
            .collect();
        PointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, id: PointId) -> Option<&Point> {
        self.points.get(id)
    }

    /// Panics on an unknown id.
    pub fn coord(&self, id: PointId) -> Coord {
        self.points[id].coord()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + '_ {
        0..self.points.len()
    }

    pub fn find(&self, c: &Coord) -> Option<PointId> {
        self.points.iter().find(|p| p.x == c.x && p.y == c.y).map(|p| p.id)
    }

    /// Rejects duplicates and collinear triples.
    pub fn validate_general_position(&self) -> Result<()> {
        let mut seen: HashMap<(&Scalar, &Scalar), PointId> = HashMap::new();
        for p in &self.points {
            if let Some(&q) = seen.get(&(&p.x, &p.y)) {
                return Err(Error::DuplicatePoint(q, p.id));
            }
            seen.insert((&p.x, &p.y), p.id);
        }
        let coords: Vec<Coord> = self.points.iter().map(Point::coord).collect();
        let n = coords.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if orientation_test(&coords[i], &coords[j], &coords[k]) == Orientation::Collinear {
                        return Err(Error::CollinearTriple(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// First pair of points sharing an x-coordinate, if any.
    pub fn repeated_x(&self) -> Option<(PointId, PointId)> {
        let mut ids: Vec<PointId> = self.ids().collect();
        ids.sort_by(|&a, &b| self.points[a].x.cmp(&self.points[b].x).then(a.cmp(&b)));
        ids.windows(2)
            .find(|w| self.points[w[0]].x == self.points[w[1]].x)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    /// The shear `x' = x + y / K` with `K` large enough that every pair with
    /// distinct x keeps its order; pairs with equal x are separated by y.
    /// Collinearity, crossings and convexity are preserved.
    pub fn sheared_for_distinct_x(&self) -> (PointSet, Scalar) {
        let mut min_dx: Option<Scalar> = None;
        let (mut ymin, mut ymax) = (None::<Scalar>, None::<Scalar>);
        let mut xs: Vec<&Scalar> = self.points.iter().map(|p| &p.x).collect();
        xs.sort();
        xs.dedup();
        for w in xs.windows(2) {
            let d = w[1] - w[0];
            min_dx = Some(match min_dx {
                Some(m) if m <= d => m,
                _ => d,
            });
        }
        for p in &self.points {
            ymin = Some(ymin.map_or(p.y.clone(), |m| Scalar::min_of(&m, &p.y)));
            ymax = Some(ymax.map_or(p.y.clone(), |m| Scalar::max_of(&m, &p.y)));
        }
        let spread = match (ymin, ymax) {
            (Some(a), Some(b)) => &b - &a,
            _ => Scalar::zero(),
        };
        let min_dx = min_dx.unwrap_or_else(Scalar::one);
        // K = 2 * spread / min_dx + 1, rounded up to an integer
        let k_exact = &(&Scalar::from(2) * &spread) / &min_dx;
        let k = Scalar::from(k_exact.floor()) + Scalar::from(2);
        let points = self
            .points
            .iter()
            .map(|p| Point { x: &p.x + &(&p.y / &k), y: p.y.clone(), id: p.id })
            .collect();
        (PointSet { points }, k)
    }
}

/// A non-crossing matching over a shared point set. Edges are kept in
/// canonical order so equality of edge sets is syntactic.
#[derive(Clone)]
pub struct Matching {
    base: Arc<PointSet>,
    edges: BTreeSet<Segment>,
}

impl PartialEq for Matching {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges && (Arc::ptr_eq(&self.base, &other.base) || self.base == other.base)
    }
}

impl Eq for Matching {}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.edges.iter().map(|s| s.to_string())).finish()
    }
}

impl Matching {
    /// Validates ids, degree at most one, and the non-crossing property.
    pub fn new(base: Arc<PointSet>, edges: impl IntoIterator<Item = (PointId, PointId)>) -> Result<Self> {
        let mut used = vec![false; base.len()];
        let mut set = BTreeSet::new();
        for (p, q) in edges {
            for id in [p, q] {
                if id >= base.len() {
                    return Err(Error::UnknownPoint(id));
                }
            }
            if p == q {
                return Err(Error::DegenerateSegment(p));
            }
            for id in [p, q] {
                if used[id] {
                    return Err(Error::VertexReused(id));
                }
                used[id] = true;
            }
            set.insert(Segment::new(p, q));
        }
        let m = Matching { base, edges: set };
        if let Some((s, t)) = m.first_crossing() {
            return Err(Error::CrossingSegments(s, t));
        }
        Ok(m)
    }

    pub fn from_segments(base: Arc<PointSet>, edges: impl IntoIterator<Item = Segment>) -> Result<Self> {
        Self::new(base, edges.into_iter().map(|s| (s.a, s.b)))
    }

    pub fn empty(base: Arc<PointSet>) -> Self {
        Matching { base, edges: BTreeSet::new() }
    }

    pub fn base(&self) -> &Arc<PointSet> {
        &self.base
    }

    pub fn edges(&self) -> &BTreeSet<Segment> {
        &self.edges
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, s: &Segment) -> bool {
        self.edges.contains(s)
    }

    pub fn coord(&self, id: PointId) -> Coord {
        self.base.coord(id)
    }

    pub fn endpoints(&self, s: &Segment) -> (Coord, Coord) {
        (self.base.coord(s.a), self.base.coord(s.b))
    }

    /// Partner of every point, `None` where unmatched.
    pub fn partners(&self) -> Vec<Option<PointId>> {
        let mut out = vec![None; self.base.len()];
        for s in &self.edges {
            out[s.a] = Some(s.b);
            out[s.b] = Some(s.a);
        }
        out
    }

    pub fn vertex_ids(&self) -> BTreeSet<PointId> {
        self.edges.iter().flat_map(|s| [s.a, s.b]).collect()
    }

    pub fn is_perfect(&self) -> bool {
        2 * self.edges.len() == self.base.len()
    }

    pub fn check_perfect(&self) -> Result<()> {
        match self.partners().iter().position(Option::is_none) {
            Some(id) => Err(Error::NotPerfect(id)),
            None => Ok(()),
        }
    }

    pub fn is_even(&self) -> bool {
        self.edges.len() % 2 == 0
    }

    pub fn cross(&self, s: &Segment, t: &Segment) -> bool {
        super::predicates::segments_cross(&self.base, s, t)
    }

    fn first_crossing(&self) -> Option<(Segment, Segment)> {
        let segs: Vec<(Segment, Coord, Coord)> =
            self.edges.iter().map(|s| (*s, self.base.coord(s.a), self.base.coord(s.b))).collect();
        for (i, (s, p1, p2)) in segs.iter().enumerate() {
            for (t, q1, q2) in &segs[i + 1..] {
                if segments_conflict(p1, p2, q1, q2) {
                    return Some((*s, *t));
                }
            }
        }
        None
    }

    /// Same edges over another base with identical ids (e.g. after a shear).
    pub fn rebased(&self, base: Arc<PointSet>) -> Result<Matching> {
        if base.len() != self.base.len() {
            return Err(Error::MismatchedVertexSet);
        }
        Matching::from_segments(base, self.segments())
    }

    pub fn with_edges(&self, edges: impl IntoIterator<Item = Segment>) -> Result<Matching> {
        Matching::from_segments(self.base.clone(), edges)
    }
}

/// Strictly convex polygon, counterclockwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvexPolygon {
    vertices: Vec<Coord>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Coord>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::NotConvex);
        }
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if orientation_test(a, b, c) != Orientation::Left {
                return Err(Error::NotConvex);
            }
        }
        // all-left turns still admit a star polygon winding more than once
        let poly = ConvexPolygon { vertices };
        if poly.winding_is_simple() {
            Ok(poly)
        } else {
            Err(Error::NotConvex)
        }
    }

    /// Collinear vertices are dropped first; what remains must be strictly convex.
    pub fn from_loop(mut vertices: Vec<Coord>) -> Result<Self> {
        vertices.dedup();
        if vertices.len() > 1 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        loop {
            let n = vertices.len();
            if n < 3 {
                return Err(Error::NotConvex);
            }
            let drop = (0..n).find(|&i| {
                orientation_test(&vertices[(i + n - 1) % n], &vertices[i], &vertices[(i + 1) % n])
                    == Orientation::Collinear
            });
            match drop {
                Some(i) => {
                    vertices.remove(i);
                }
                None => break,
            }
        }
        Self::new(vertices)
    }

    fn winding_is_simple(&self) -> bool {
        let n = self.vertices.len();
        let local_minima = (0..n)
            .filter(|&i| {
                let cur = &self.vertices[i];
                cur < &self.vertices[(i + n - 1) % n] && cur < &self.vertices[(i + 1) % n]
            })
            .count();
        local_minima == 1
    }

    pub fn vertices(&self) -> &[Coord] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Coord, &Coord)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn contains(&self, c: &Coord) -> Containment {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match orientation_test(a, b, c) {
                Orientation::Right => return Containment::Outside,
                Orientation::Collinear => on_edge = true,
                Orientation::Left => {}
            }
        }
        if on_edge {
            Containment::Boundary
        } else {
            Containment::Inside
        }
    }

    /// Twice the signed area.
    pub fn area2(&self) -> Scalar {
        self.edges().fold(Scalar::zero(), |acc, (a, b)| acc + a.cross(b))
    }

    /// Vertex average; strictly interior.
    pub fn centroid(&self) -> Coord {
        let n = Scalar::from(self.vertices.len() as i64);
        let sum = self.vertices.iter().fold(Coord::new(0, 0), |acc, v| acc.add(v));
        Coord { x: &sum.x / &n, y: &sum.y / &n }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundingBox {
    pub xmin: Scalar,
    pub xmax: Scalar,
    pub ymin: Scalar,
    pub ymax: Scalar,
}

impl BoundingBox {
    /// Box around `coords` with margin `1 + spread` on every side, so every
    /// input point is strictly inside.
    pub fn around<'a>(coords: impl IntoIterator<Item = &'a Coord>) -> Self {
        let mut it = coords.into_iter();
        let first = it.next().cloned().unwrap_or_else(|| Coord::new(0, 0));
        let (mut xmin, mut xmax, mut ymin, mut ymax) =
            (first.x.clone(), first.x.clone(), first.y.clone(), first.y.clone());
        for c in it {
            if c.x < xmin {
                xmin = c.x.clone();
            }
            if c.x > xmax {
                xmax = c.x.clone();
            }
            if c.y < ymin {
                ymin = c.y.clone();
            }
            if c.y > ymax {
                ymax = c.y.clone();
            }
        }
        let spread = Scalar::max_of(&(&xmax - &xmin), &(&ymax - &ymin));
        let margin = spread + Scalar::one();
        BoundingBox { xmin: &xmin - &margin, xmax: &xmax + &margin, ymin: &ymin - &margin, ymax: &ymax + &margin }
    }

    pub fn of_points(ps: &PointSet) -> Self {
        let coords: Vec<Coord> = ps.points().iter().map(Point::coord).collect();
        Self::around(coords.iter())
    }

    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon {
            vertices: vec![
                Coord { x: self.xmin.clone(), y: self.ymin.clone() },
                Coord { x: self.xmax.clone(), y: self.ymin.clone() },
                Coord { x: self.xmax.clone(), y: self.ymax.clone() },
                Coord { x: self.xmin.clone(), y: self.ymax.clone() },
            ],
        }
    }

    pub fn contains_strictly(&self, c: &Coord) -> bool {
        c.x > self.xmin && c.x < self.xmax && c.y > self.ymin && c.y < self.ymax
    }

    pub fn union(&self, o: &BoundingBox) -> BoundingBox {
        BoundingBox {
            xmin: Scalar::min_of(&self.xmin, &o.xmin),
            xmax: Scalar::max_of(&self.xmax, &o.xmax),
            ymin: Scalar::min_of(&self.ymin, &o.ymin),
            ymax: Scalar::max_of(&self.ymax, &o.ymax),
        }
    }
}
