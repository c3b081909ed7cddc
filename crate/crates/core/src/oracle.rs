//! Brute-force ground truth for small instances: all non-crossing perfect
//! matchings, disjoint compatible existence, exact transformation distance,
//! visibility graphs and abstract perfect matchings.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{segments_conflict, Matching, PointId, PointSet, Segment};

/// Largest point count `enumerate_ncpm` accepts.
pub const CATALOG_LIMIT: usize = 16;
/// Largest point count `transformation_distance` accepts.
pub const DISTANCE_LIMIT: usize = 12;
/// Largest vertex count `graph_perfect_matching_exists` accepts.
pub const GRAPH_LIMIT: usize = 24;

/// Every non-crossing perfect matching of a point subset.
#[derive(Clone, Debug)]
pub struct MatchingCatalog {
    pub base: Arc<PointSet>,
    pub points: Vec<PointId>,
    pub matchings: Vec<Matching>,
}

impl MatchingCatalog {
    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }
}

/// Pair-conflict table over all point pairs of `ids`.
struct PairTable {
    ids: Vec<PointId>,
    index: HashMap<(usize, usize), usize>,
    pairs: Vec<(usize, usize)>,
    conflict: Vec<Vec<bool>>,
}

impl PairTable {
    fn new(base: &PointSet, ids: &[PointId]) -> Self {
        let k = ids.len();
        let mut pairs = Vec::new();
        let mut index = HashMap::new();
        for i in 0..k {
            for j in i + 1..k {
                index.insert((i, j), pairs.len());
                pairs.push((i, j));
            }
        }
        let coords: Vec<_> = ids.iter().map(|&p| base.coord(p)).collect();
        let mut conflict = vec![vec![false; pairs.len()]; pairs.len()];
        for x in 0..pairs.len() {
            for y in x + 1..pairs.len() {
                let (a, b) = pairs[x];
                let (c, d) = pairs[y];
                let hit = segments_conflict(&coords[a], &coords[b], &coords[c], &coords[d]);
                conflict[x][y] = hit;
                conflict[y][x] = hit;
            }
        }
        PairTable { ids: ids.to_vec(), index, pairs, conflict }
    }

    fn pair(&self, i: usize, j: usize) -> usize {
        self.index[&(i.min(j), i.max(j))]
    }

    fn segment(&self, e: usize) -> Segment {
        let (i, j) = self.pairs[e];
        Segment::new(self.ids[i], self.ids[j])
    }
}

/// All non-crossing perfect matchings of the whole point set.
pub fn enumerate_ncpm(base: &Arc<PointSet>) -> Result<MatchingCatalog> {
    let ids: Vec<PointId> = base.ids().collect();
    enumerate_ncpm_of(base, &ids)
}

/// All non-crossing perfect matchings of `ids`: the lowest unmatched point
/// branches on each partner whose edge crosses nothing chosen so far.
pub fn enumerate_ncpm_of(base: &Arc<PointSet>, ids: &[PointId]) -> Result<MatchingCatalog> {
    if ids.len() > CATALOG_LIMIT {
        return Err(Error::TooLarge { size: ids.len(), limit: CATALOG_LIMIT });
    }
    if ids.len() % 2 == 1 {
        return Err(Error::OddCount(ids.len()));
    }
    let table = PairTable::new(base, ids);
    let mut out = Vec::new();
    let mut used = vec![false; ids.len()];
    let mut chosen = Vec::new();
    enumerate_rec(&table, &mut used, &mut chosen, &mut out);
    let matchings = out
        .into_iter()
        .map(|edges: Vec<usize>| Matching::from_segments(base.clone(), edges.iter().map(|&e| table.segment(e))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MatchingCatalog { base: base.clone(), points: ids.to_vec(), matchings })
}

fn enumerate_rec(t: &PairTable, used: &mut [bool], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let Some(p) = used.iter().position(|u| !u) else {
        out.push(chosen.clone());
        return;
    };
    used[p] = true;
    for q in p + 1..used.len() {
        if used[q] {
            continue;
        }
        let e = t.pair(p, q);
        if chosen.iter().any(|&c| t.conflict[e][c]) {
            continue;
        }
        used[q] = true;
        chosen.push(e);
        enumerate_rec(t, used, chosen, out);
        chosen.pop();
        used[q] = false;
    }
    used[p] = false;
}

/// A perfect matching of `V(M)` disjoint and compatible with `M`, found by
/// filtering the full catalog.
pub fn has_disjoint_compatible_pm(m: &Matching) -> Result<Option<Matching>> {
    let ids: Vec<PointId> = m.vertex_ids().into_iter().collect();
    let catalog = enumerate_ncpm_of(m.base(), &ids)?;
    Ok(catalog.matchings.into_iter().find(|c| {
        crate::geom::disjoint(c, m).unwrap_or(false) && crate::geom::compatible(c, m).unwrap_or(false)
    }))
}

/// Shortest transformation length between two perfect matchings of the
/// same point set, by breadth-first search over the catalog.
pub fn transformation_distance(m: &Matching, m2: &Matching) -> Result<usize> {
    if m.base() != m2.base() || m.vertex_ids() != m2.vertex_ids() {
        return Err(Error::MismatchedVertexSet);
    }
    let ids: Vec<PointId> = m.vertex_ids().into_iter().collect();
    if ids.len() > DISTANCE_LIMIT {
        return Err(Error::TooLarge { size: ids.len(), limit: DISTANCE_LIMIT });
    }
    m.check_perfect()?;
    m2.check_perfect()?;
    if m == m2 {
        return Ok(0);
    }
    let catalog = enumerate_ncpm_of(m.base(), &ids)?;
    let table = PairTable::new(m.base(), &ids);
    let local: HashMap<PointId, usize> = ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let as_pairs = |x: &Matching| -> Vec<usize> { x.segments().map(|s| table.pair(local[&s.a], local[&s.b])).collect() };
    let nodes: Vec<Vec<usize>> = catalog.matchings.iter().map(as_pairs).collect();
    let key = |x: &Matching| as_pairs(x).into_iter().collect::<BTreeSet<_>>();
    let position: HashMap<BTreeSet<usize>, usize> =
        nodes.iter().enumerate().map(|(i, v)| (v.iter().copied().collect(), i)).collect();
    let start = *position.get(&key(m)).ok_or_else(|| Error::Internal("matching missing from catalog".into()))?;
    let goal = *position.get(&key(m2)).ok_or_else(|| Error::Internal("matching missing from catalog".into()))?;
    let compatible = |a: &[usize], b: &[usize]| a.iter().all(|&x| b.iter().all(|&y| x == y || !table.conflict[x][y]));

    let mut dist = vec![usize::MAX; nodes.len()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if u == goal {
            return Ok(dist[u]);
        }
        for v in 0..nodes.len() {
            if dist[v] == usize::MAX && compatible(&nodes[u], &nodes[v]) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    Err(Error::Unreachable)
}

/// Abstract graph on point ids.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VisibilityGraph {
    pub vertex_count: usize,
    pub edges: BTreeSet<(PointId, PointId)>,
}

impl VisibilityGraph {
    pub fn has_edge(&self, u: PointId, v: PointId) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbours(&self, u: PointId) -> Vec<PointId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| if a == u { Some(b) } else if b == u { Some(a) } else { None })
            .collect()
    }

    /// No two of `set` adjacent.
    pub fn is_independent(&self, set: &[PointId]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

/// `uv` is an edge iff the segment crosses no segment of `m` (touching at a
/// shared endpoint is fine); with `minus_m`, edges of `m` are left out.
pub fn visibility_graph(m: &Matching, minus_m: bool) -> VisibilityGraph {
    let base = m.base();
    let n = base.len();
    let segs: Vec<(Segment, _, _)> = m.segments().map(|s| (s, base.coord(s.a), base.coord(s.b))).collect();
    let mut edges = BTreeSet::new();
    for u in 0..n {
        let cu = base.coord(u);
        for v in u + 1..n {
            let uv = Segment::new(u, v);
            if m.contains(&uv) {
                if !minus_m {
                    edges.insert((u, v));
                }
                continue;
            }
            let cv = base.coord(v);
            if segs.iter().all(|(_, a, b)| !segments_conflict(&cu, &cv, a, b)) {
                edges.insert((u, v));
            }
        }
    }
    VisibilityGraph { vertex_count: n, edges }
}

/// Whether the abstract graph has a perfect matching; depth-first over the
/// lowest unmatched vertex with a memo of failed vertex sets.
pub fn graph_perfect_matching_exists(g: &VisibilityGraph) -> Result<bool> {
    let n = g.vertex_count;
    if n > GRAPH_LIMIT {
        return Err(Error::TooLarge { size: n, limit: GRAPH_LIMIT });
    }
    if n % 2 == 1 {
        return Ok(false);
    }
    let mut adj = vec![0u32; n];
    for &(u, v) in &g.edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut failed = HashSet::new();
    Ok(pm_rec(&adj, full, &mut failed))
}

fn pm_rec(adj: &[u32], unmatched: u32, failed: &mut HashSet<u32>) -> bool {
    if unmatched == 0 {
        return true;
    }
    if failed.contains(&unmatched) {
        return false;
    }
    let u = unmatched.trailing_zeros() as usize;
    let mut options = adj[u] & unmatched & !(1 << u);
    while options != 0 {
        let v = options.trailing_zeros();
        options &= options - 1;
        if pm_rec(adj, unmatched & !(1 << u) & !(1 << v), failed) {
            return true;
        }
    }
    failed.insert(unmatched);
    false
}
