//! Matching constructors: convex-position matchings, blocker-constrained
//! search, and assembly of a matching from an even orientation of a dual.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{convex_order, segments_conflict, Containment, ConvexPolygon, Coord, Matching, PointId, PointSet, Segment};
use crate::orientation::{EvenOrientation, UnionFind};
use crate::subdivision::{ConvexSubdivision, DualMultigraph};

fn ccw_order(base: &PointSet, p: &[PointId]) -> Result<Vec<PointId>> {
    if p.len() % 2 == 1 {
        return Err(Error::OddCount(p.len()));
    }
    convex_order(base, p).ok_or(Error::NotConvexPosition)
}

fn check_boundary_edges(order: &[PointId], mb: &[Segment]) -> Result<()> {
    let k = order.len();
    let consecutive = |s: &Segment| {
        (0..k).any(|i| Segment::new(order[i], order[(i + 1) % k]) == *s)
    };
    match mb.iter().find(|s| !consecutive(s)) {
        Some(s) => Err(Error::Internal(format!("boundary edge {s} does not join hull neighbours"))),
        None => Ok(()),
    }
}

/// Perfect matching of the convex-position points `p` sharing no edge with
/// `mb` and crossing none of it. Repeatedly matches the hull-neighbour pair
/// with the smallest first id that is not in `mb` (and, with four points
/// left, whose complement is not in `mb` either).
pub fn convex_disjoint_matching(base: &Arc<PointSet>, p: &[PointId], mb: &[Segment]) -> Result<Matching> {
    let mut order = ccw_order(base, p)?;
    check_boundary_edges(&order, mb)?;
    let forbidden: BTreeSet<Segment> = mb.iter().copied().collect();
    let mut out = Vec::with_capacity(p.len() / 2);
    while !order.is_empty() {
        let k = order.len();
        let pair_at = |i: usize| Segment::new(order[i], order[(i + 1) % k]);
        if k == 2 {
            let s = pair_at(0);
            if forbidden.contains(&s) {
                return Err(Error::TwoPointsAlreadyMatched);
            }
            out.push(s);
            break;
        }
        let pick = (0..k)
            .filter(|&i| !forbidden.contains(&pair_at(i)))
            .filter(|&i| k != 4 || !forbidden.contains(&pair_at((i + 2) % 4)))
            .min_by_key(|&i| {
                let s = pair_at(i);
                (s.a.min(s.b), s.a.max(s.b))
            })
            .ok_or_else(|| Error::Internal("no admissible hull pair".into()))?;
        out.push(pair_at(pick));
        let j = (pick + 1) % k;
        let (hi, lo) = if pick > j { (pick, j) } else { (j, pick) };
        order.remove(hi);
        order.remove(lo);
    }
    Matching::from_segments(base.clone(), out)
}

/// Perfect matching of the convex-position points `p`, non-crossing with
/// `mb` but possibly reusing its edges.
pub fn convex_compatible_matching(base: &Arc<PointSet>, p: &[PointId], mb: &[Segment]) -> Result<Matching> {
    let order = ccw_order(base, p)?;
    let k = order.len();
    let mut last = None;
    for offset in 0..2.min(k.max(1)) {
        let edges: Vec<Segment> = (0..k / 2)
            .map(|i| Segment::new(order[(2 * i + offset) % k], order[(2 * i + 1 + offset) % k]))
            .collect();
        let ok = edges.iter().all(|e| {
            mb.iter().all(|s| {
                *s == *e || !segments_conflict(&base.coord(e.a), &base.coord(e.b), &base.coord(s.a), &base.coord(s.b))
            })
        });
        let m = Matching::from_segments(base.clone(), edges)?;
        if ok {
            return Ok(m);
        }
        last = Some(m);
    }
    last.ok_or(Error::NoMatching)
}

/// Points to match perfectly, segments the matching edges must not cross
/// (touching at a common endpoint is fine), and an optional closed convex
/// region the edges must stay in.
#[derive(Clone, Debug)]
pub struct ConstrainedMatchProblem {
    pub base: Arc<PointSet>,
    pub points: Vec<PointId>,
    pub blockers: Vec<(Coord, Coord)>,
    pub region: Option<ConvexPolygon>,
}

impl ConstrainedMatchProblem {
    pub fn new(base: Arc<PointSet>, points: Vec<PointId>) -> Self {
        ConstrainedMatchProblem { base, points, blockers: Vec::new(), region: None }
    }

    pub fn with_segments(mut self, m: &Matching, segments: impl IntoIterator<Item = Segment>) -> Self {
        self.blockers.extend(segments.into_iter().map(|s| m.endpoints(&s)));
        self
    }

    pub fn admissible(&self, p: PointId, q: PointId) -> bool {
        let (a, b) = (self.base.coord(p), self.base.coord(q));
        if let Some(r) = &self.region {
            if r.contains(&a) == Containment::Outside || r.contains(&b) == Containment::Outside {
                return false;
            }
        }
        self.blockers.iter().all(|(c, d)| !segments_conflict(&a, &b, c, d))
    }
}

const SEARCH_LIMIT: usize = 128;

/// Deterministic backtracking: branch on the unmatched point with the fewest
/// usable partners (lowest id on ties), partners shortest first. A branch is
/// cut when a point has no partner or the usable-edge graph has a component
/// with an odd number of points.
pub fn constrained_matching(prob: &ConstrainedMatchProblem) -> Result<Matching> {
    let k = prob.points.len();
    if k % 2 == 1 {
        return Err(Error::OddCount(k));
    }
    if k > SEARCH_LIMIT {
        return Err(Error::TooLarge { size: k, limit: SEARCH_LIMIT });
    }
    let mut pts = prob.points.clone();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() != k {
        return Err(Error::VertexReused(k));
    }
    let coords: Vec<Coord> = pts.iter().map(|&p| prob.base.coord(p)).collect();

    // usable edges and their pairwise conflicts
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if prob.admissible(pts[i], pts[j]) {
                edges.push((i, j));
            }
        }
    }
    let mut by_point: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (e, &(i, j)) in edges.iter().enumerate() {
        by_point[i].push(e);
        by_point[j].push(e);
    }
    for list in by_point.iter_mut() {
        list.sort_by(|&x, &y| {
            let len = |e: usize| coords[edges[e].0].sub(&coords[edges[e].1]).norm2();
            len(x).cmp(&len(y)).then_with(|| edges[x].cmp(&edges[y]))
        });
    }
    let words = (edges.len() + 63) / 64;
    let mut conflicts = vec![vec![0u64; words]; edges.len()];
    for x in 0..edges.len() {
        for y in x + 1..edges.len() {
            let (a, b) = edges[x];
            let (c, d) = edges[y];
            if segments_conflict(&coords[a], &coords[b], &coords[c], &coords[d]) {
                conflicts[x][y / 64] |= 1 << (y % 64);
                conflicts[y][x / 64] |= 1 << (x % 64);
            }
        }
    }

    let mut search = Search {
        edges: &edges,
        by_point: &by_point,
        conflicts: &conflicts,
        blocked: vec![0u32; edges.len()],
        matched: vec![false; k],
        chosen: Vec::new(),
    };
    if !search.run() {
        return Err(Error::NoMatching);
    }
    Matching::from_segments(prob.base.clone(), search.chosen.iter().map(|&e| Segment::new(pts[edges[e].0], pts[edges[e].1])))
}

struct Search<'a> {
    edges: &'a [(usize, usize)],
    by_point: &'a [Vec<usize>],
    conflicts: &'a [Vec<u64>],
    /// Number of chosen edges each edge conflicts with.
    blocked: Vec<u32>,
    matched: Vec<bool>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn usable(&self, e: usize) -> bool {
        let (i, j) = self.edges[e];
        self.blocked[e] == 0 && !self.matched[i] && !self.matched[j]
    }

    fn apply(&mut self, e: usize, delta: i32) {
        let (i, j) = self.edges[e];
        self.matched[i] = delta > 0;
        self.matched[j] = delta > 0;
        for (w, &bits) in self.conflicts[e].iter().enumerate() {
            let mut bits = bits;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let f = w * 64 + b;
                self.blocked[f] = (self.blocked[f] as i32 + delta) as u32;
            }
        }
    }

    fn run(&mut self) -> bool {
        let k = self.matched.len();
        // branch point and parity pruning
        let mut best: Option<(usize, usize)> = None;
        let mut uf = UnionFind::new(k);
        let mut any = false;
        for p in 0..k {
            if self.matched[p] {
                continue;
            }
            any = true;
            let count = self.by_point[p].iter().filter(|&&e| self.usable(e)).count();
            if count == 0 {
                return false;
            }
            if best.map_or(true, |(_, c)| count < c) {
                best = Some((p, count));
            }
            for &e in &self.by_point[p] {
                if self.usable(e) {
                    uf.union(self.edges[e].0, self.edges[e].1);
                }
            }
        }
        if !any {
            return true;
        }
        let mut sizes = BTreeMap::<usize, usize>::new();
        for p in (0..k).filter(|&p| !self.matched[p]) {
            *sizes.entry(uf.find(p)).or_default() += 1;
        }
        if sizes.values().any(|s| s % 2 == 1) {
            return false;
        }
        let (p, _) = best.expect("some point is unmatched");
        let options: Vec<usize> = self.by_point[p].iter().copied().filter(|&e| self.usable(e)).collect();
        for e in options {
            self.apply(e, 1);
            self.chosen.push(e);
            if self.run() {
                return true;
            }
            self.chosen.pop();
            self.apply(e, -1);
        }
        false
    }
}

/// Vertex-to-cell assignment induced by an orientation: each matching vertex
/// goes to the head of its dual edge.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CellAssignment {
    pub cell_of: BTreeMap<PointId, usize>,
    pub sets: BTreeMap<usize, Vec<PointId>>,
}

impl CellAssignment {
    pub fn from_orientation(g: &DualMultigraph, o: &EvenOrientation) -> Result<Self> {
        let mut a = CellAssignment::default();
        for e in &g.edges {
            let head = o.head(e.id).ok_or_else(|| Error::Internal(format!("dual edge {} is not oriented", e.id)))?;
            if head != e.left && head != e.right {
                return Err(Error::Internal(format!("dual edge {} points outside its ends", e.id)));
            }
            a.cell_of.insert(e.vertex, head);
            a.sets.entry(head).or_default().push(e.vertex);
        }
        if let Some((&cell, _)) = a.sets.iter().find(|(_, s)| s.len() % 2 == 1) {
            return Err(Error::Internal(format!("cell {cell} receives an odd number of vertices")));
        }
        Ok(a)
    }
}

/// Matches, inside each cell, the vertices the orientation sends there.
/// Only oriented dual edges take part, so a partial orientation gives a
/// partial matching.
pub fn assemble_from_orientation(
    m: &Matching,
    sub: &ConvexSubdivision,
    g: &DualMultigraph,
    o: &EvenOrientation,
    require_disjoint: bool,
) -> Result<Matching> {
    let oriented = DualMultigraph {
        vertex_count: g.vertex_count,
        edges: g.edges.iter().filter(|e| o.head(e.id).is_some()).cloned().collect(),
    };
    let assignment = CellAssignment::from_orientation(&oriented, o)?;
    let base = m.base();
    let mut edges = Vec::new();
    for (&cell, s_y) in &assignment.sets {
        if cell >= sub.cells.len() {
            return Err(Error::Internal(format!("cell {cell} out of range")));
        }
        let members: BTreeSet<PointId> = s_y.iter().copied().collect();
        let mb: Vec<Segment> = m.segments().filter(|s| members.contains(&s.a) && members.contains(&s.b)).collect();
        let part = if require_disjoint {
            if s_y.len() == 2 && !mb.is_empty() {
                return Err(Error::SameSegmentIndegreeTwo { cell });
            }
            convex_disjoint_matching(base, s_y, &mb)?
        } else {
            convex_compatible_matching(base, s_y, &mb)?
        };
        edges.extend(part.segments());
    }
    Matching::from_segments(base.clone(), edges)
}
