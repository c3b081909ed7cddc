//! Segment extensions inside a convex region, the convex subdivision they
//! induce, and its dual multigraph.
//!
//! Matching segments are obstacles from the start; extensions become
//! obstacles once shot. After every ray is resolved the walls (segment plus
//! its extensions) and the region boundary form a planar graph whose bounded
//! faces are the cells.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::geom::{
    segments_conflict, BoundingBox, Containment, ConvexPolygon, Coord, Matching, OrientedLine, PointId, Scalar,
    Segment, Side,
};
use crate::orientation::{Multigraph, UnionFind};

/// Convex region the extension lives in. Unbounded regions are clipped to a
/// box; edges coming from that box count as "infinity".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    Polygon(ConvexPolygon),
    Box(BoundingBox),
    HalfPlane { line: OrientedLine, side: Side, clip: BoundingBox },
}

impl Region {
    /// The whole plane around a matching, clipped to its bounding box.
    pub fn around(m: &Matching) -> Region {
        Region::Box(BoundingBox::of_points(m.base()))
    }

    /// Boundary polygon plus, per edge, whether it is a clipping edge.
    pub fn boundary(&self) -> Result<(ConvexPolygon, Vec<bool>)> {
        match self {
            Region::Polygon(p) => Ok((p.clone(), vec![false; p.len()])),
            Region::Box(b) => Ok((b.to_polygon(), vec![true; 4])),
            Region::HalfPlane { line, side, clip } => {
                let poly = line
                    .clip(&clip.to_polygon(), *side)
                    .ok_or_else(|| Error::Internal("halfplane misses its clipping box".into()))?;
                let flags = poly
                    .edges()
                    .map(|(a, b)| !(line.side(a).is_none() && line.side(b).is_none()))
                    .collect();
                Ok((poly, flags))
            }
        }
    }

    pub fn polygon(&self) -> Result<ConvexPolygon> {
        Ok(self.boundary()?.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Directions {
    BothDirections,
    /// Ray starting at this endpoint, pointing away from the other one.
    FromEndpoint(PointId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtensionDirective {
    pub segment: Segment,
    pub directions: Directions,
    pub order_index: usize,
}

impl ExtensionDirective {
    /// The usual directives: both ways for segments inside the region, into
    /// the region for segments with one endpoint inside, in segment order.
    pub fn standard(m: &Matching, region: &Region) -> Result<Vec<ExtensionDirective>> {
        let (poly, _) = region.boundary()?;
        let classes = classify(m, &poly)?;
        Ok(m.segments()
            .filter_map(|s| classes.get(&s).map(|c| (s, *c)))
            .enumerate()
            .map(|(i, (s, class))| ExtensionDirective {
                segment: s,
                directions: match class {
                    SegmentClass::Inside => Directions::BothDirections,
                    SegmentClass::Crossing(v) => Directions::FromEndpoint(v),
                },
                order_index: i,
            })
            .collect())
    }

    /// Both directions, in the given order.
    pub fn both_in_order(order: impl IntoIterator<Item = Segment>) -> Vec<ExtensionDirective> {
        order
            .into_iter()
            .enumerate()
            .map(|(i, s)| ExtensionDirective { segment: s, directions: Directions::BothDirections, order_index: i })
            .collect()
    }
}

/// How a segment meets the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SegmentClass {
    /// Both endpoints inside.
    Inside,
    /// Only this endpoint inside.
    Crossing(PointId),
}

/// What stopped a ray.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Blocker {
    Segment(Segment),
    /// Index into `ExtensionGeometry::extensions`.
    Extension(usize),
    /// Index of the region boundary edge.
    Boundary(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub order_index: usize,
    pub segment: Segment,
    pub from: PointId,
    pub origin: Coord,
    pub terminus: Coord,
    pub blocker: Blocker,
    pub went_to_infinity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtensionGeometry {
    pub extensions: Vec<Extension>,
}

/// A segment together with its extensions, directed from the end beyond
/// the segment's lexicographically smaller endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub segment: Segment,
    pub start: Coord,
    pub end: Coord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexSubdivision {
    pub region: Region,
    pub cells: Vec<ConvexPolygon>,
    /// Per matching vertex inside the region: (left cell, right cell) with
    /// respect to its wall's direction.
    pub incidence: BTreeMap<PointId, (usize, usize)>,
    pub walls: Vec<Wall>,
    pub classes: BTreeMap<Segment, SegmentClass>,
}

impl ConvexSubdivision {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn incident_cells(&self, v: PointId) -> Option<(usize, usize)> {
        self.incidence.get(&v).copied()
    }

    /// Cell whose interior contains `c`.
    pub fn locate(&self, c: &Coord) -> Option<usize> {
        self.cells.iter().position(|cell| cell.contains(c) == Containment::Inside)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndpointRole {
    LeftEnd,
    RightEnd,
    TopEnd,
    BottomEnd,
}

impl EndpointRole {
    /// Left/right by x; bottom/top for vertical segments.
    pub fn of(v: &Coord, other: &Coord) -> EndpointRole {
        use std::cmp::Ordering::*;
        match v.x.cmp(&other.x) {
            Less => EndpointRole::LeftEnd,
            Greater => EndpointRole::RightEnd,
            Equal if v.y < other.y => EndpointRole::BottomEnd,
            Equal => EndpointRole::TopEnd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Green,
    Blue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualEdge {
    pub id: usize,
    pub left: usize,
    pub right: usize,
    pub vertex: PointId,
    pub segment: Segment,
    pub role: EndpointRole,
    pub color: Option<Color>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualMultigraph {
    pub vertex_count: usize,
    pub edges: Vec<DualEdge>,
}

impl DualMultigraph {
    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.vertex_count);
        for e in &self.edges {
            g.add_edge(e.left, e.right, e.id);
        }
        g
    }

    /// Subgraph on the edges with the given color.
    pub fn colored(&self, color: Color) -> Multigraph {
        let mut g = Multigraph::new(self.vertex_count);
        for e in self.edges.iter().filter(|e| e.color == Some(color)) {
            g.add_edge(e.left, e.right, e.id);
        }
        g
    }

    pub fn edge_of_vertex(&self, v: PointId) -> Option<&DualEdge> {
        self.edges.iter().find(|e| e.vertex == v)
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.left, e.right);
        }
        (0..self.vertex_count).all(|v| uf.find(v) == uf.find(0))
    }
}

fn degenerate(msg: impl Into<String>) -> Error {
    Error::DegenerateIncidence(msg.into())
}

fn classify(m: &Matching, poly: &ConvexPolygon) -> Result<BTreeMap<Segment, SegmentClass>> {
    let mut out = BTreeMap::new();
    for s in m.segments() {
        let (ca, cb) = (poly.contains(&m.coord(s.a)), poly.contains(&m.coord(s.b)));
        for (c, id) in [(ca, s.a), (cb, s.b)] {
            if c == Containment::Boundary {
                return Err(degenerate(format!("vertex {id} lies on the region boundary")));
            }
        }
        match (ca, cb) {
            (Containment::Inside, Containment::Inside) => {
                out.insert(s, SegmentClass::Inside);
            }
            (Containment::Inside, _) => {
                out.insert(s, SegmentClass::Crossing(s.a));
            }
            (_, Containment::Inside) => {
                out.insert(s, SegmentClass::Crossing(s.b));
            }
            _ => {
                let (p, q) = m.endpoints(&s);
                if poly.edges().any(|(a, b)| segments_conflict(&p, &q, a, b)) {
                    return Err(Error::SegmentOutsideRegionRule(s));
                }
            }
        }
    }
    Ok(out)
}

fn validate_directives(
    directives: &[ExtensionDirective],
    classes: &BTreeMap<Segment, SegmentClass>,
    require_coverage: bool,
) -> Result<Vec<ExtensionDirective>> {
    let bad = |msg: String| Err(Error::InvalidDirectives(msg));
    let mut seen_index = BTreeSet::new();
    let mut rays: BTreeMap<Segment, Vec<PointId>> = BTreeMap::new();
    for d in directives {
        if !seen_index.insert(d.order_index) {
            return bad(format!("order index {} repeated", d.order_index));
        }
        if !classes.contains_key(&d.segment) {
            return bad(format!("segment {} is not extended in this region", d.segment));
        }
        let list = rays.entry(d.segment).or_default();
        match d.directions {
            Directions::BothDirections => list.extend([d.segment.a, d.segment.b]),
            Directions::FromEndpoint(v) if d.segment.has(v) => list.push(v),
            Directions::FromEndpoint(v) => return bad(format!("point {v} is not an endpoint of {}", d.segment)),
        }
    }
    for (s, class) in classes.iter().filter(|_| require_coverage) {
        let mut got = rays.remove(s).unwrap_or_default();
        got.sort_unstable();
        let want = match class {
            SegmentClass::Inside => vec![s.a, s.b],
            SegmentClass::Crossing(v) => vec![*v],
        };
        if got != want {
            return bad(format!("segment {s} needs rays from {want:?}, got {got:?}"));
        }
    }
    let mut sorted = directives.to_vec();
    sorted.sort_by_key(|d| d.order_index);
    Ok(sorted)
}

/// Ray/segment intersection: parameters (t along the ray, s along `a..b`).
enum Hit {
    Miss,
    At(Scalar, Scalar),
    /// Collinear and overlapping the ray ahead of its origin.
    Overlap,
}

fn ray_hit(p: &Coord, d: &Coord, a: &Coord, b: &Coord) -> Hit {
    let e = b.sub(a);
    let ap = a.sub(p);
    let den = d.cross(&e);
    if den.is_zero() {
        if !ap.cross(d).is_zero() {
            return Hit::Miss;
        }
        // collinear: overlap ahead if either end projects forward
        let ahead = |c: &Coord| !c.sub(p).dot(d).is_negative();
        return if ahead(a) || ahead(b) { Hit::Overlap } else { Hit::Miss };
    }
    let t = &ap.cross(&e) / &den;
    let s = &ap.cross(d) / &den;
    if s.is_negative() || s > Scalar::one() || t.is_negative() {
        return Hit::Miss;
    }
    Hit::At(t, s)
}

struct Obstacle<'a> {
    blocker: Blocker,
    a: &'a Coord,
    b: &'a Coord,
}

fn bbox_disjoint(p: &Coord, q: &Coord, a: &Coord, b: &Coord) -> bool {
    let (pxl, pxh) = if p.x <= q.x { (&p.x, &q.x) } else { (&q.x, &p.x) };
    let (pyl, pyh) = if p.y <= q.y { (&p.y, &q.y) } else { (&q.y, &p.y) };
    let (axl, axh) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ayl, ayh) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    pxh < axl || axh < pxl || pyh < ayl || ayh < pyl
}

/// Shoots one ray; returns its terminus and what stopped it.
fn shoot(
    p: &Coord,
    d: &Coord,
    boundary: &[(Coord, Coord)],
    obstacles: &[Obstacle<'_>],
) -> Result<(Coord, Blocker)> {
    let mut best: Option<(Scalar, Blocker)> = None;
    for (j, (a, b)) in boundary.iter().enumerate() {
        if let Hit::At(t, _) = ray_hit(p, d, a, b) {
            if t.is_positive() && best.as_ref().map_or(true, |(bt, _)| &t < bt) {
                best = Some((t, Blocker::Boundary(j)));
            }
        }
    }
    let (mut best_t, mut best_blocker) = best.ok_or_else(|| Error::Internal("ray never leaves the region".into()))?;
    let mut far = p.along(d, &best_t);
    let mut tied = false;
    for ob in obstacles {
        if bbox_disjoint(p, &far, ob.a, ob.b) {
            continue;
        }
        match ray_hit(p, d, ob.a, ob.b) {
            Hit::Miss => {}
            Hit::Overlap => return Err(degenerate(format!("ray from {p:?} runs along {:?}", ob.blocker))),
            Hit::At(t, s) => {
                if t.is_zero() {
                    return Err(degenerate(format!("ray origin {p:?} lies on {:?}", ob.blocker)));
                }
                if s.is_zero() || s == Scalar::one() {
                    return Err(degenerate(format!("ray from {p:?} passes through an end of {:?}", ob.blocker)));
                }
                if t < best_t {
                    best_t = t;
                    best_blocker = ob.blocker;
                    far = p.along(d, &best_t);
                    tied = false;
                } else if t == best_t {
                    tied = true;
                }
            }
        }
    }
    if tied {
        return Err(degenerate(format!("ray from {p:?} stops at an existing vertex {far:?}")));
    }
    Ok((far, best_blocker))
}

/// Where a segment with one endpoint inside leaves the region.
fn exit_point(inside: &Coord, outside: &Coord, boundary: &[(Coord, Coord)]) -> Result<(Coord, usize)> {
    let d = outside.sub(inside);
    for (j, (a, b)) in boundary.iter().enumerate() {
        if let Hit::At(t, s) = ray_hit(inside, &d, a, b) {
            if t.is_positive() && t <= Scalar::one() {
                if s.is_zero() || s == Scalar::one() {
                    return Err(degenerate("segment leaves the region through a corner"));
                }
                return Ok((inside.along(&d, &t), j));
            }
        }
    }
    Err(Error::Internal("crossing segment never leaves the region".into()))
}

/// Feature a junction sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Feature {
    Wall(usize),
    Boundary(usize),
}

/// Planar graph with exact coordinates as node keys.
#[derive(Default)]
struct PlaneGraph {
    nodes: Vec<Coord>,
    index: HashMap<Coord, usize>,
    adj: Vec<Vec<usize>>,
}

impl PlaneGraph {
    fn node(&mut self, c: &Coord) -> usize {
        if let Some(&i) = self.index.get(c) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(c.clone());
        self.index.insert(c.clone(), i);
        self.adj.push(Vec::new());
        i
    }

    /// Adds the chain through `points` (start, end, then interior points in
    /// any order) and returns its node sequence from start to end.
    fn add_chain(&mut self, start: &Coord, end: &Coord, interior: &[Coord]) -> Result<Vec<usize>> {
        let d = end.sub(start);
        let mut pts: Vec<(Scalar, &Coord)> = interior.iter().map(|c| (c.sub(start).dot(&d), c)).collect();
        pts.push((Scalar::zero(), start));
        pts.push((d.dot(&d), end));
        pts.sort_by(|x, y| x.0.cmp(&y.0));
        if pts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(degenerate(format!("two junctions coincide on the chain {start:?}..{end:?}")));
        }
        let ids: Vec<usize> = pts.iter().map(|(_, c)| self.node(c)).collect();
        for w in ids.windows(2) {
            if self.adj[w[0]].contains(&w[1]) {
                return Err(degenerate("two walls share an edge"));
            }
            self.adj[w[0]].push(w[1]);
            self.adj[w[1]].push(w[0]);
        }
        Ok(ids)
    }

    fn sort_around(&mut self) {
        for u in 0..self.nodes.len() {
            let here = self.nodes[u].clone();
            let nodes = &self.nodes;
            self.adj[u].sort_by(|&a, &b| angle_cmp(&nodes[a].sub(&here), &nodes[b].sub(&here)));
        }
    }

    /// Faces as node loops, with a face id per directed edge.
    fn faces(&self) -> (Vec<Vec<usize>>, HashMap<(usize, usize), usize>) {
        let mut face_of = HashMap::new();
        let mut faces = Vec::new();
        for u in 0..self.nodes.len() {
            for &v in &self.adj[u] {
                if face_of.contains_key(&(u, v)) {
                    continue;
                }
                let id = faces.len();
                let mut cycle = Vec::new();
                let (mut x, mut y) = (u, v);
                while !face_of.contains_key(&(x, y)) {
                    face_of.insert((x, y), id);
                    cycle.push(x);
                    let around = &self.adj[y];
                    let pos = around.iter().position(|&w| w == x).expect("adjacency is symmetric");
                    let next = around[(pos + around.len() - 1) % around.len()];
                    x = y;
                    y = next;
                }
                faces.push(cycle);
            }
        }
        (faces, face_of)
    }
}

/// Counterclockwise angle order starting from the positive x axis.
fn angle_cmp(a: &Coord, b: &Coord) -> std::cmp::Ordering {
    let half = |c: &Coord| if c.y.is_positive() || (c.y.is_zero() && c.x.is_positive()) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| Scalar::zero().cmp(&a.cross(b)))
}

/// Shoots the rays of `directives` in order without requiring every segment
/// to be covered; no subdivision is built.
pub fn shoot_rays(m: &Matching, region: &Region, directives: &[ExtensionDirective]) -> Result<ExtensionGeometry> {
    let (poly, clip_flags) = region.boundary()?;
    let boundary: Vec<(Coord, Coord)> = poly.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    let classes = classify(m, &poly)?;
    let order = validate_directives(directives, &classes, false)?;
    let relevant: Vec<Segment> = classes.keys().copied().collect();
    resolve_rays(m, &relevant, &boundary, &clip_flags, &order)
}

fn resolve_rays(
    m: &Matching,
    relevant: &[Segment],
    boundary: &[(Coord, Coord)],
    clip_flags: &[bool],
    order: &[ExtensionDirective],
) -> Result<ExtensionGeometry> {
    let seg_coords: Vec<(Coord, Coord)> = relevant.iter().map(|s| m.endpoints(s)).collect();
    let mut geometry = ExtensionGeometry::default();
    for dir in order {
        let s = dir.segment;
        let froms = match dir.directions {
            Directions::BothDirections => vec![s.a, s.b],
            Directions::FromEndpoint(v) => vec![v],
        };
        let mut shot = Vec::new();
        for from in froms {
            let p = m.coord(from);
            let d = p.sub(&m.coord(s.other(from)));
            let mut obstacles: Vec<Obstacle<'_>> = relevant
                .iter()
                .zip(&seg_coords)
                .filter(|(t, _)| **t != s)
                .map(|(t, (a, b))| Obstacle { blocker: Blocker::Segment(*t), a, b })
                .collect();
            obstacles.extend(
                geometry
                    .extensions
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.segment != s)
                    .map(|(k, e)| Obstacle { blocker: Blocker::Extension(k), a: &e.origin, b: &e.terminus }),
            );
            let (terminus, blocker) = shoot(&p, &d, boundary, &obstacles)?;
            let went_to_infinity = matches!(blocker, Blocker::Boundary(j) if clip_flags[j]);
            shot.push(Extension { order_index: dir.order_index, segment: s, from, origin: p, terminus, blocker, went_to_infinity });
        }
        geometry.extensions.extend(shot);
    }
    Ok(geometry)
}

/// Extends the matching inside `region` following `directives` and builds
/// the resulting convex subdivision.
pub fn extend(
    m: &Matching,
    region: &Region,
    directives: &[ExtensionDirective],
) -> Result<(ExtensionGeometry, ConvexSubdivision)> {
    let (poly, clip_flags) = region.boundary()?;
    let boundary: Vec<(Coord, Coord)> = poly.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    let classes = classify(m, &poly)?;
    let order = validate_directives(directives, &classes, true)?;
    let relevant: Vec<Segment> = classes.keys().copied().collect();
    let geometry = resolve_rays(m, &relevant, &boundary, &clip_flags, &order)?;

    // walls and the junctions their ends create
    let wall_of: HashMap<Segment, usize> = relevant.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut junctions: BTreeMap<Feature, Vec<Coord>> = BTreeMap::new();
    let mut walls = Vec::with_capacity(relevant.len());
    for s in &relevant {
        let (pa, pb) = (m.coord(s.a), m.coord(s.b));
        let (lo, hi) = if pa < pb { (s.a, s.b) } else { (s.b, s.a) };
        let mut wall_end = |v: PointId| -> Result<Coord> {
            if let Some(e) = geometry.extensions.iter().find(|e| e.segment == *s && e.from == v) {
                return Ok(e.terminus.clone());
            }
            let (c, j) = exit_point(&m.coord(s.other(v)), &m.coord(v), &boundary)?;
            junctions.entry(Feature::Boundary(j)).or_default().push(c.clone());
            Ok(c)
        };
        let start = wall_end(lo)?;
        let end = wall_end(hi)?;
        walls.push(Wall { segment: *s, start, end });
    }
    for e in &geometry.extensions {
        let feature = match e.blocker {
            Blocker::Segment(t) => Feature::Wall(wall_of[&t]),
            Blocker::Extension(k) => Feature::Wall(wall_of[&geometry.extensions[k].segment]),
            Blocker::Boundary(j) => Feature::Boundary(j),
        };
        junctions.entry(feature).or_default().push(e.terminus.clone());
    }

    let mut graph = PlaneGraph::default();
    let mut wall_chains = Vec::with_capacity(walls.len());
    for (i, w) in walls.iter().enumerate() {
        let pts = junctions.get(&Feature::Wall(i)).cloned().unwrap_or_default();
        wall_chains.push(graph.add_chain(&w.start, &w.end, &pts)?);
    }
    for (j, (a, b)) in boundary.iter().enumerate() {
        let pts = junctions.get(&Feature::Boundary(j)).cloned().unwrap_or_default();
        graph.add_chain(a, b, &pts)?;
    }
    graph.sort_around();
    let (faces, face_of) = graph.faces();

    let area2 = |f: &Vec<usize>| {
        (0..f.len()).fold(Scalar::zero(), |acc, i| acc + graph.nodes[f[i]].cross(&graph.nodes[f[(i + 1) % f.len()]]))
    };
    // bounded faces, keyed by (smallest node, its successor) for a stable order
    let mut bounded: Vec<((Coord, Coord), usize)> = Vec::new();
    for (fid, f) in faces.iter().enumerate() {
        if area2(f).is_positive() {
            let k = (0..f.len()).min_by(|&x, &y| graph.nodes[f[x]].cmp(&graph.nodes[f[y]])).unwrap();
            let key = (graph.nodes[f[k]].clone(), graph.nodes[f[(k + 1) % f.len()]].clone());
            bounded.push((key, fid));
        }
    }
    bounded.sort();
    if bounded.len() != relevant.len() + 1 {
        return Err(Error::Internal(format!(
            "extension produced {} cells, expected {}",
            bounded.len(),
            relevant.len() + 1
        )));
    }
    let mut cell_of_face = HashMap::new();
    let mut cells = Vec::with_capacity(bounded.len());
    for (idx, (_, fid)) in bounded.iter().enumerate() {
        cell_of_face.insert(*fid, idx);
        let loop_coords = faces[*fid].iter().map(|&n| graph.nodes[n].clone()).collect();
        cells.push(ConvexPolygon::from_loop(loop_coords).map_err(|_| Error::Internal("non-convex cell".into()))?);
    }

    let mut incidence = BTreeMap::new();
    for (i, (s, w)) in relevant.iter().zip(&walls).enumerate() {
        let d = w.end.sub(&w.start);
        let chain = &wall_chains[i];
        let inside: Vec<PointId> = match classes[s] {
            SegmentClass::Inside => vec![s.a, s.b],
            SegmentClass::Crossing(v) => vec![v],
        };
        for v in inside {
            let pv = m.coord(v).sub(&w.start).dot(&d);
            let proj = |n: usize| graph.nodes[n].sub(&w.start).dot(&d);
            let k = chain
                .windows(2)
                .position(|p| proj(p[0]) < pv && pv < proj(p[1]))
                .ok_or_else(|| degenerate(format!("vertex {v} coincides with a junction")))?;
            let (x, y) = (chain[k], chain[k + 1]);
            let left = cell_of_face.get(&face_of[&(x, y)]).copied();
            let right = cell_of_face.get(&face_of[&(y, x)]).copied();
            match (left, right) {
                (Some(l), Some(r)) if l != r => {
                    incidence.insert(v, (l, r));
                }
                _ => return Err(Error::Internal(format!("vertex {v} does not separate two cells"))),
            }
        }
    }

    let sub = ConvexSubdivision { region: region.clone(), cells, incidence, walls, classes };
    Ok((geometry, sub))
}

/// Dual multigraph: a vertex per cell, an edge per matching vertex in the
/// region joining its left and right cells. Edge ids follow point ids.
pub fn dual_multigraph(sub: &ConvexSubdivision, m: &Matching) -> DualMultigraph {
    let partners = m.partners();
    let edges = sub
        .incidence
        .iter()
        .enumerate()
        .map(|(id, (&v, &(left, right)))| {
            let other = partners[v].expect("subdivision vertex is matched");
            DualEdge {
                id,
                left,
                right,
                vertex: v,
                segment: Segment::new(v, other),
                role: EndpointRole::of(&m.coord(v), &m.coord(other)),
                color: None,
            }
        })
        .collect();
    DualMultigraph { vertex_count: sub.cells.len(), edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{on_segment, orientation_test, Orientation, PointSet};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn matching(pts: &[(i64, i64)], pairs: &[(usize, usize)]) -> Matching {
        let ps = PointSet::from_coords(pts.iter().map(|&(x, y)| Coord::new(x, y)));
        Matching::new(Arc::new(ps), pairs.iter().copied()).unwrap()
    }

    fn square(r: i64) -> Region {
        Region::Box(BoundingBox { xmin: (-r).into(), xmax: r.into(), ymin: (-r).into(), ymax: r.into() })
    }

    #[test]
    fn single_segment_splits_box() {
        let m = matching(&[(-1, 0), (1, 0)], &[(0, 1)]);
        let region = square(2);
        let dirs = ExtensionDirective::both_in_order(m.segments());
        let (geo, sub) = extend(&m, &region, &dirs).unwrap();
        assert_eq!(sub.cell_count(), 2);
        assert_eq!(geo.extensions.len(), 2);
        assert!(geo.extensions.iter().all(|e| e.went_to_infinity));
        let g = dual_multigraph(&sub, &m);
        assert_eq!(g.vertex_count, 2);
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| (e.left, e.right) == (g.edges[0].left, g.edges[0].right)));
        assert_eq!(g.edges[0].role, EndpointRole::LeftEnd);
        assert_eq!(g.edges[1].role, EndpointRole::RightEnd);
        // left of a rightward wall is the upper cell
        let upper = sub.locate(&Coord::new(0, 1)).unwrap();
        assert_eq!(g.edges[0].left, upper);
    }

    /// Independent replay: every ray checked against every feature present
    /// at its time, intersections found via orientation predicates.
    fn replay_stops(m: &Matching, region: &Region, geo: &ExtensionGeometry) {
        let poly = region.polygon().unwrap();
        for (k, e) in geo.extensions.iter().enumerate() {
            assert_eq!(orientation_test(&m.coord(e.segment.a), &m.coord(e.segment.b), &e.terminus), Orientation::Collinear);
            assert_eq!(orientation_test(&m.coord(e.segment.a), &m.coord(e.segment.b), &e.origin), Orientation::Collinear);
            let mut features: Vec<(Coord, Coord)> = m
                .segments()
                .filter(|s| *s != e.segment)
                .map(|s| m.endpoints(&s))
                .collect();
            features.extend(geo.extensions[..k].iter().filter(|x| x.segment != e.segment).map(|x| (x.origin.clone(), x.terminus.clone())));
            features.extend(poly.edges().map(|(a, b)| (a.clone(), b.clone())));
            // terminus lies on a feature
            assert!(features.iter().any(|(a, b)| on_segment(a, b, &e.terminus)));
            // nothing properly crosses the open extension
            for (a, b) in &features {
                let o1 = orientation_test(&e.origin, &e.terminus, a);
                let o2 = orientation_test(&e.origin, &e.terminus, b);
                let o3 = orientation_test(a, b, &e.origin);
                let o4 = orientation_test(a, b, &e.terminus);
                let proper = o1 != o2 && o1 != Orientation::Collinear && o2 != Orientation::Collinear
                    && o3 != o4 && o3 != Orientation::Collinear && o4 != Orientation::Collinear;
                assert!(!proper, "extension {k} crosses a feature");
            }
        }
    }

    #[test]
    fn horizontal_passes_below_vertical() {
        let m = matching(&[(0, 0), (1, 0), (2, 1), (2, 3)], &[(0, 1), (2, 3)]);
        let region = square(10);
        let h = Segment::new(0, 1);
        let v = Segment::new(2, 3);
        let (geo, sub) = extend(&m, &region, &ExtensionDirective::both_in_order([h, v])).unwrap();
        replay_stops(&m, &region, &geo);
        let right_ray = geo.extensions.iter().find(|e| e.from == 1).unwrap();
        assert!(right_ray.went_to_infinity);
        assert_eq!(right_ray.terminus, Coord::new(10, 0));
        let down_ray = geo.extensions.iter().find(|e| e.from == 2).unwrap();
        assert_eq!(down_ray.terminus, Coord::new(2, 0));
        assert!(matches!(down_ray.blocker, Blocker::Extension(_)));
        assert_eq!(sub.cell_count(), 3);

        // other order: the vertical ray now reaches the box, the horizontal stops on it
        let (geo, _) = extend(&m, &region, &ExtensionDirective::both_in_order([v, h])).unwrap();
        replay_stops(&m, &region, &geo);
        let right_ray = geo.extensions.iter().find(|e| e.from == 1).unwrap();
        assert_eq!(right_ray.terminus, Coord::new(2, 0));
    }

    /// Five segments in a hand-made arrangement with every kind of stop.
    fn five() -> Matching {
        matching(
            &[(0, 0), (4, 1), (1, 3), (2, 7), (5, 4), (8, 5), (6, -2), (7, 1), (-3, 5), (-1, 6)],
            &[(0, 1), (2, 3), (4, 5), (6, 7), (8, 9)],
        )
    }

    #[test]
    fn five_segments_give_six_cells() {
        let m = five();
        let region = Region::around(&m);
        let order: Vec<Segment> = m.segments().collect();
        let (geo, sub) = extend(&m, &region, &ExtensionDirective::both_in_order(order)).unwrap();
        replay_stops(&m, &region, &geo);
        assert_eq!(sub.cell_count(), 6);
        let g = dual_multigraph(&sub, &m);
        assert_eq!(g.edges.len(), 10);
        assert!(g.is_connected());
        assert!(geo.extensions.iter().any(|e| matches!(e.blocker, Blocker::Segment(_))));
        assert!(geo.extensions.iter().any(|e| e.went_to_infinity));
    }

    #[test]
    fn halfplane_region() {
        // vertical line x = 2 cuts the two long segments
        let m = matching(&[(0, 0), (4, 1), (1, 3), (3, 5), (0, 8), (1, 9)], &[(0, 1), (2, 3), (4, 5)]);
        let clip = BoundingBox::of_points(m.base());
        let region = Region::HalfPlane { line: OrientedLine::vertical(Scalar::from(2)), side: Side::Left, clip };
        let dirs = ExtensionDirective::standard(&m, &region).unwrap();
        assert_eq!(dirs.iter().filter(|d| d.directions == Directions::BothDirections).count(), 1);
        let (geo, sub) = extend(&m, &region, &dirs).unwrap();
        assert_eq!(sub.cell_count(), 4);
        let g = dual_multigraph(&sub, &m);
        assert_eq!(g.edges.len(), 4);
        assert!(g.is_connected());
        // rays into the line are real stops, not clips
        assert!(geo.extensions.iter().any(|e| !e.went_to_infinity && matches!(e.blocker, Blocker::Boundary(_))));
    }

    #[test]
    fn errors() {
        let m = matching(&[(-1, 0), (1, 0)], &[(0, 1)]);
        let region = square(2);
        let s = Segment::new(0, 1);
        let dup = vec![
            ExtensionDirective { segment: s, directions: Directions::FromEndpoint(0), order_index: 0 },
            ExtensionDirective { segment: s, directions: Directions::FromEndpoint(1), order_index: 0 },
        ];
        assert!(matches!(extend(&m, &region, &dup), Err(Error::InvalidDirectives(_))));
        let half = vec![ExtensionDirective { segment: s, directions: Directions::FromEndpoint(0), order_index: 0 }];
        assert!(matches!(extend(&m, &region, &half), Err(Error::InvalidDirectives(_))));

        // segment passing through a triangle without an endpoint inside
        let tri = ConvexPolygon::new(vec![Coord::new(-1, -1), Coord::new(1, -1), Coord::new(0, 1)]).unwrap();
        let m = matching(&[(-5, 0), (5, 0)], &[(0, 1)]);
        assert_eq!(
            extend(&m, &Region::Polygon(tri), &[]).unwrap_err(),
            Error::SegmentOutsideRegionRule(Segment::new(0, 1))
        );

        // ray through another segment's endpoint
        let m = matching(&[(0, 0), (1, 0), (3, 0), (3, 2)], &[(0, 1), (2, 3)]);
        let r = extend(&m, &square(10), &ExtensionDirective::both_in_order(m.segments()));
        assert!(matches!(r, Err(Error::DegenerateIncidence(_))));
    }

    #[test]
    fn two_directives_per_segment() {
        let m = five();
        let region = Region::around(&m);
        // all right-pointing rays first, then the left-pointing ones
        let mut dirs = Vec::new();
        for (k, pass) in [true, false].into_iter().enumerate() {
            for (i, s) in m.segments().enumerate() {
                let (a, b) = m.endpoints(&s);
                let right = if a.x > b.x { s.a } else { s.b };
                let v = if pass { right } else { s.other(right) };
                dirs.push(ExtensionDirective { segment: s, directions: Directions::FromEndpoint(v), order_index: k * 10 + i });
            }
        }
        let (geo, sub) = extend(&m, &region, &dirs).unwrap();
        replay_stops(&m, &region, &geo);
        assert_eq!(sub.cell_count(), 6);
    }

    /// Random perfect matching made non-crossing by repeated uncrossing.
    fn random_matching(n: usize, rng: &mut ChaCha8Rng) -> Matching {
        loop {
            let pts: Vec<Coord> = (0..2 * n).map(|_| Coord::new(rng.gen_range(-500..500i64), rng.gen_range(-500..500i64))).collect();
            let ps = PointSet::from_coords(pts.clone());
            if ps.validate_general_position().is_err() {
                continue;
            }
            let mut ids: Vec<usize> = (0..2 * n).collect();
            ids.shuffle(rng);
            let mut pairs: Vec<(usize, usize)> = ids.chunks(2).map(|c| (c[0], c[1])).collect();
            'outer: loop {
                for i in 0..pairs.len() {
                    for j in i + 1..pairs.len() {
                        let (a, b) = pairs[i];
                        let (c, d) = pairs[j];
                        if segments_conflict(&pts[a], &pts[b], &pts[c], &pts[d]) {
                            let swap1 = ((a, c), (b, d));
                            let swap2 = ((a, d), (b, c));
                            let len = |(p, q): (usize, usize)| pts[p].sub(&pts[q]).norm2();
                            let l1 = len(swap1.0) + len(swap1.1);
                            let l2 = len(swap2.0) + len(swap2.1);
                            let pick = if l1 < l2 { swap1 } else { swap2 };
                            pairs[i] = pick.0;
                            pairs[j] = pick.1;
                            continue 'outer;
                        }
                    }
                }
                break;
            }
            return Matching::new(Arc::new(ps), pairs).unwrap();
        }
    }

    fn check_subdivision(m: &Matching, region: &Region, dirs: &[ExtensionDirective]) -> (usize, usize) {
        let (geo, sub) = match extend(m, region, dirs) {
            Ok(x) => x,
            Err(Error::DegenerateIncidence(_)) => return (0, 0),
            Err(e) => panic!("{e}"),
        };
        replay_stops(m, region, &geo);
        let extended = sub.walls.len();
        assert_eq!(sub.cell_count(), extended + 1);
        let total = sub.cells.iter().fold(Scalar::zero(), |acc, c| acc + c.area2());
        assert_eq!(total, region.polygon().unwrap().area2());
        for c in &sub.cells {
            let inside = sub.cells.iter().filter(|o| o.contains(&c.centroid()) == Containment::Inside).count();
            assert_eq!(inside, 1);
        }
        let g = dual_multigraph(&sub, m);
        assert_eq!(g.vertex_count, extended + 1);
        let m2 = sub.classes.values().filter(|c| **c == SegmentClass::Inside).count();
        assert_eq!(g.edges.len(), extended + m2);
        assert!(g.is_connected());
        for e in &g.edges {
            assert_ne!(e.left, e.right);
            let v = m.coord(e.vertex);
            assert_ne!(sub.cells[e.left].contains(&v), Containment::Outside);
            assert_ne!(sub.cells[e.right].contains(&v), Containment::Outside);
        }
        (g.vertex_count, g.edges.len())
    }

    #[test]
    fn random_six_segments() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let m = random_matching(6, &mut rng);
            let region = Region::around(&m);
            let counts = check_subdivision(&m, &region, &ExtensionDirective::both_in_order(m.segments()));
            assert_eq!(counts, (7, 12));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn counts_do_not_depend_on_order(seed in any::<u64>(), n in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matching(n, &mut rng);
            let region = Region::around(&m);
            let mut order: Vec<Segment> = m.segments().collect();
            let first = check_subdivision(&m, &region, &ExtensionDirective::both_in_order(order.clone()));
            order.shuffle(&mut rng);
            let second = check_subdivision(&m, &region, &ExtensionDirective::both_in_order(order));
            if first != (0, 0) && second != (0, 0) {
                prop_assert_eq!(first, second);
                prop_assert_eq!(first, (n + 1, 2 * n));
            }
        }

        #[test]
        fn halfplane_subdivisions(seed in any::<u64>(), n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matching(n, &mut rng);
            let x = Scalar::ratio(2 * rng.gen_range(-500..500i64) + 1, 2);
            let clip = BoundingBox::of_points(m.base());
            for side in [Side::Left, Side::Right] {
                let region = Region::HalfPlane { line: OrientedLine::vertical(x.clone()), side, clip: clip.clone() };
                if region.boundary().is_err() { continue; }
                let dirs = ExtensionDirective::standard(&m, &region).unwrap();
                check_subdivision(&m, &region, &dirs);
            }
        }
    }
}
