//! Abstract multigraphs and their even orientations.
//!
//! An orientation is even when every vertex has even indegree; a multigraph
//! admits one exactly when each connected component has an even number of
//! edges. Construction: take a spanning tree per component, orient the
//! non-tree edges arbitrarily, then fix tree edges from the leaves inward so
//! every non-root vertex ends up even. The root is then even by counting.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub id: EdgeId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Multigraph with parallel edges; edge ids are arbitrary but unique.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph { vertex_count, edges: Vec::new() }
    }

    /// Edge ids are assigned by position.
    pub fn from_pairs(vertex_count: usize, pairs: &[(VertexId, VertexId)]) -> Self {
        let mut g = Multigraph::new(vertex_count);
        for (id, &(u, v)) in pairs.iter().enumerate() {
            g.add_edge(u, v, id);
        }
        g
    }

    /// Panics on self-loops, unknown vertices or a reused id.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, id: EdgeId) {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.vertex_count && v < self.vertex_count, "vertex out of range");
        assert!(self.edges.iter().all(|e| e.id != id), "duplicate edge id {id}");
        self.edges.push(Edge { u, v, id });
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Same vertices, only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> Multigraph {
        Multigraph { vertex_count: self.vertex_count, edges: self.edges.iter().copied().filter(|e| keep(e)).collect() }
    }

    /// Incident edge positions (indices into `edges()`) per vertex.
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
        inc
    }

    /// Component label per vertex, labels in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut root_label = BTreeMap::new();
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            let next = root_label.len();
            label[v] = *root_label.entry(r).or_insert(next);
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.components().iter().all(|&c| c == 0)
    }

    /// Connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.vertex_count >= 1 && self.edges.len() + 1 == self.vertex_count && self.is_connected()
    }

    /// Acyclic (parallel edges count as a cycle).
    pub fn is_forest(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        self.edges.iter().all(|e| uf.union(e.u, e.v))
    }

    /// Spanning tree of the vertex set: `|V| - 1` edges and acyclic.
    pub fn is_spanning_tree(&self) -> bool {
        self.edges.len() + 1 == self.vertex_count && self.is_forest()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }
}

/// Head vertex per oriented edge id.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EvenOrientation {
    pub heads: BTreeMap<EdgeId, VertexId>,
}

impl EvenOrientation {
    pub fn head(&self, id: EdgeId) -> Option<VertexId> {
        self.heads.get(&id).copied()
    }

    pub fn indegrees(&self, vertex_count: usize) -> Vec<usize> {
        let mut d = vec![0; vertex_count];
        for &h in self.heads.values() {
            d[h] += 1;
        }
        d
    }

    /// Orients every edge of `g`, heads are endpoints, all indegrees even.
    pub fn is_even_orientation_of(&self, g: &Multigraph) -> bool {
        self.heads.len() == g.edge_count()
            && g.edges().iter().all(|e| matches!(self.head(e.id), Some(h) if h == e.u || h == e.v))
            && self.indegrees(g.vertex_count()).iter().all(|d| d % 2 == 0)
    }

    fn merge(&mut self, other: EvenOrientation) {
        self.heads.extend(other.heads);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    First,
    Second,
}

impl Part {
    pub fn index(self) -> u8 {
        match self {
            Part::First => 1,
            Part::Second => 2,
        }
    }
}

/// Assignment of edge ids to one of two subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgePartition {
    pub parts: BTreeMap<EdgeId, Part>,
}

impl EdgePartition {
    pub fn part_of(&self, id: EdgeId) -> Option<Part> {
        self.parts.get(&id).copied()
    }

    pub fn subgraph(&self, g: &Multigraph, part: Part) -> Multigraph {
        g.filter_edges(|e| self.part_of(e.id) == Some(part))
    }
}

/// Even orientation of `g`, or the first odd component found.
pub fn even_orientation(g: &Multigraph) -> Result<EvenOrientation> {
    let labels = g.components();
    let mut edge_count = BTreeMap::<usize, usize>::new();
    for e in g.edges() {
        *edge_count.entry(labels[e.u]).or_default() += 1;
    }
    if let Some((&comp, _)) = edge_count.iter().find(|(_, &c)| c % 2 == 1) {
        let vertex = labels.iter().position(|&l| l == comp).unwrap();
        return Err(Error::NoEvenOrientation { vertex });
    }

    let inc = g.incidence();
    let edges = g.edges();
    let mut heads: BTreeMap<EdgeId, VertexId> = BTreeMap::new();
    let mut seen = vec![false; g.vertex_count()];
    let mut indeg = vec![0usize; g.vertex_count()];
    let mut tree_edge = vec![false; edges.len()];

    for root in 0..g.vertex_count() {
        if seen[root] {
            continue;
        }
        // BFS spanning tree: (vertex, parent edge position)
        let mut order: Vec<(VertexId, Option<usize>)> = Vec::new();
        let mut queue = VecDeque::from([(root, None)]);
        seen[root] = true;
        while let Some((x, pe)) = queue.pop_front() {
            order.push((x, pe));
            for &ei in &inc[x] {
                let y = edges[ei].other(x);
                if !seen[y] {
                    seen[y] = true;
                    tree_edge[ei] = true;
                    queue.push_back((y, Some(ei)));
                }
            }
        }
        for &(x, _) in &order {
            for &ei in &inc[x] {
                let e = edges[ei];
                if !tree_edge[ei] && !heads.contains_key(&e.id) {
                    heads.insert(e.id, e.v);
                    indeg[e.v] += 1;
                }
            }
        }
        for &(x, pe) in order.iter().rev() {
            let Some(ei) = pe else { continue };
            let e = edges[ei];
            let head = if indeg[x] % 2 == 1 { x } else { e.other(x) };
            heads.insert(e.id, head);
            indeg[head] += 1;
        }
    }
    Ok(EvenOrientation { heads })
}

/// The unique even orientation of an even tree: edge `vw` points to `w`
/// exactly when the subtree on `v`'s side (edge removed) has an even number
/// of edges.
pub fn tree_even_orientation(t: &Multigraph) -> Result<EvenOrientation> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if t.edge_count() % 2 == 1 {
        return Err(Error::OddTree);
    }
    let inc = t.incidence();
    let edges = t.edges();
    // root at 0; parent edge and DFS preorder
    let mut parent_edge = vec![None; t.vertex_count()];
    let mut order = Vec::with_capacity(t.vertex_count());
    let mut stack = vec![0];
    let mut visited = vec![false; t.vertex_count()];
    visited[0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &ei in &inc[x] {
            let y = edges[ei].other(x);
            if !visited[y] {
                visited[y] = true;
                parent_edge[y] = Some(ei);
                stack.push(y);
            }
        }
    }
    // edges strictly below each vertex
    let mut below = vec![0usize; t.vertex_count()];
    for &x in order.iter().rev() {
        if let Some(ei) = parent_edge[x] {
            let p = edges[ei].other(x);
            below[p] += below[x] + 1;
        }
    }
    let mut heads = BTreeMap::new();
    for x in 0..t.vertex_count() {
        if let Some(ei) = parent_edge[x] {
            let e = edges[ei];
            let parent = e.other(x);
            let head = if below[x] % 2 == 0 { parent } else { x };
            heads.insert(e.id, head);
        }
    }
    Ok(EvenOrientation { heads })
}

/// Union of independent even orientations of the two parts. Edges missing
/// from the partition are left unoriented.
pub fn orientation_from_partition(g: &Multigraph, p: &EdgePartition) -> Result<EvenOrientation> {
    let mut out = EvenOrientation::default();
    for part in [Part::First, Part::Second] {
        let sub = p.subgraph(g, part);
        match even_orientation(&sub) {
            Ok(o) => out.merge(o),
            Err(Error::NoEvenOrientation { vertex }) => {
                return Err(Error::OddComponentInPart { part: part.index(), vertex })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Number of components with an odd number of edges.
pub fn count_odd_components(g: &Multigraph) -> usize {
    let labels = g.components();
    let mut counts = BTreeMap::<usize, usize>::new();
    for e in g.edges() {
        *counts.entry(labels[e.u]).or_default() += 1;
    }
    counts.values().filter(|&&c| c % 2 == 1).count()
}

/// Removes one edge per odd component (a leaf edge when the component has a
/// leaf, otherwise the smallest edge id on the first cycle found by DFS
/// from the smallest vertex), leaving every component even.
pub fn prune_odd_components(g: &Multigraph) -> (Multigraph, Vec<EdgeId>) {
    let labels = g.components();
    let mut counts = BTreeMap::<usize, usize>::new();
    for e in g.edges() {
        *counts.entry(labels[e.u]).or_default() += 1;
    }
    let inc = g.incidence();
    let mut removed = Vec::new();
    for (&comp, &count) in &counts {
        if count % 2 == 0 {
            continue;
        }
        let members: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| labels[v] == comp).collect();
        let leaf = members.iter().copied().find(|&v| inc[v].len() == 1);
        let victim = match leaf {
            Some(v) => g.edges()[inc[v][0]].id,
            None => first_cycle_min_edge(g, &inc, members[0]),
        };
        removed.push(victim);
    }
    removed.sort_unstable();
    let pruned = g.filter_edges(|e| removed.binary_search(&e.id).is_err());
    (pruned, removed)
}

fn first_cycle_min_edge(g: &Multigraph, inc: &[Vec<usize>], start: VertexId) -> EdgeId {
    let edges = g.edges();
    let mut parent: BTreeMap<VertexId, Option<usize>> = BTreeMap::new();
    parent.insert(start, None);
    let mut stack = vec![(start, 0usize)];
    while let Some(&mut (x, ref mut next)) = stack.last_mut() {
        if *next == inc[x].len() {
            stack.pop();
            continue;
        }
        let ei = inc[x][*next];
        *next += 1;
        if parent[&x] == Some(ei) {
            continue;
        }
        let y = edges[ei].other(x);
        if parent.contains_key(&y) {
            // back edge x-y closes a cycle along the tree path y..x
            let mut best = edges[ei].id;
            let mut cur = x;
            while cur != y {
                let pe = parent[&cur].expect("tree path reaches the ancestor");
                best = best.min(edges[pe].id);
                cur = edges[pe].other(cur);
            }
            return best;
        }
        parent.insert(y, Some(ei));
        stack.push((y, 0));
    }
    unreachable!("component without leaves contains a cycle")
}

/// Plain union-find with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Every orientation by brute force; returns the even ones.
    fn all_even_orientations(g: &Multigraph) -> Vec<EvenOrientation> {
        let m = g.edge_count();
        assert!(m <= 16);
        (0u32..(1 << m))
            .map(|mask| EvenOrientation {
                heads: g
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.id, if mask >> i & 1 == 1 { e.v } else { e.u }))
                    .collect(),
            })
            .filter(|o| o.is_even_orientation_of(g))
            .collect()
    }

    #[test]
    fn two_parallel_edges() {
        let g = Multigraph::from_pairs(2, &[(0, 1), (0, 1)]);
        let o = even_orientation(&g).unwrap();
        let d = o.indegrees(2);
        assert!(d == vec![2, 0] || d == vec![0, 2]);
    }

    #[test]
    fn single_edge_has_none() {
        let g = Multigraph::from_pairs(2, &[(0, 1)]);
        assert_eq!(even_orientation(&g), Err(Error::NoEvenOrientation { vertex: 0 }));
    }

    #[test]
    fn path_points_to_center() {
        // a=0, b=1, c=2
        let g = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]);
        let o = tree_even_orientation(&g).unwrap();
        assert_eq!(o.head(0), Some(1));
        assert_eq!(o.head(1), Some(1));
    }

    #[test]
    fn star_points_inward() {
        let g = Multigraph::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let o = tree_even_orientation(&g).unwrap();
        assert!(o.heads.values().all(|&h| h == 0));
    }

    #[test]
    fn tree_errors() {
        let odd = Multigraph::from_pairs(2, &[(0, 1)]);
        assert_eq!(tree_even_orientation(&odd), Err(Error::OddTree));
        let cycle = Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(tree_even_orientation(&cycle), Err(Error::NotATree));
        let forest = Multigraph::from_pairs(4, &[(0, 1), (2, 3)]);
        assert_eq!(tree_even_orientation(&forest), Err(Error::NotATree));
    }

    #[test]
    fn partition_examples() {
        let c4 = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let p = EdgePartition {
            parts: [(0, Part::First), (2, Part::First), (1, Part::Second), (3, Part::Second)].into(),
        };
        assert!(matches!(orientation_from_partition(&c4, &p), Err(Error::OddComponentInPart { part: 1, .. })));

        let quad = Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1), (0, 1)]);
        let p = EdgePartition {
            parts: [(0, Part::First), (1, Part::First), (2, Part::Second), (3, Part::Second)].into(),
        };
        let o = orientation_from_partition(&quad, &p).unwrap();
        assert!(o.is_even_orientation_of(&quad));
    }

    #[test]
    fn odd_component_counts() {
        assert_eq!(count_odd_components(&Multigraph::from_pairs(2, &[(0, 1)])), 1);
        let tri_plus = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(count_odd_components(&tri_plus), 1);
    }

    #[test]
    fn pruning_examples() {
        let (g, removed) = prune_odd_components(&Multigraph::from_pairs(2, &[(0, 1)]));
        assert_eq!(removed, vec![0]);
        assert_eq!(g.edge_count(), 0);

        let (g, removed) = prune_odd_components(&Multigraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(removed, vec![0]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(count_odd_components(&g), 0);
        assert!(g.is_connected());
    }

    /// Enumerate every multigraph with `n` vertices and `m` edges as a
    /// multiset of unordered vertex pairs.
    fn multigraphs(n: usize, m: usize) -> Vec<Multigraph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(pairs: &[(usize, usize)], start: usize, m: usize, n: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Multigraph>) {
            if cur.len() == m {
                out.push(Multigraph::from_pairs(n, cur));
                return;
            }
            for i in start..pairs.len() {
                cur.push(pairs[i]);
                rec(pairs, i, m, n, cur, out);
                cur.pop();
            }
        }
        rec(&pairs, 0, m, n, &mut cur, &mut out);
        out
    }

    #[test]
    fn exhaustive_small_multigraphs() {
        let mut checked = 0;
        for n in 1..=4 {
            for m in 0..=6 {
                for g in multigraphs(n, m) {
                    let brute = all_even_orientations(&g);
                    let odd = count_odd_components(&g);
                    match even_orientation(&g) {
                        Ok(o) => {
                            assert!(o.is_even_orientation_of(&g));
                            assert_eq!(odd, 0);
                        }
                        Err(_) => {
                            assert!(odd > 0);
                            assert!(brute.is_empty());
                        }
                    }
                    assert_eq!(brute.is_empty(), odd > 0);
                    checked += 1;
                }
            }
        }
        assert!(checked > 500);
    }

    fn random_tree(edges: usize, seed: &[usize]) -> Multigraph {
        let pairs: Vec<(usize, usize)> = (1..=edges).map(|v| (seed[v - 1] % v, v)).collect();
        Multigraph::from_pairs(edges + 1, &pairs)
    }

    proptest! {
        #[test]
        fn tree_orientation_is_the_unique_one(half in 0usize..=5, seed in proptest::collection::vec(0usize..1000, 10)) {
            let t = random_tree(2 * half, &seed);
            let o = tree_even_orientation(&t).unwrap();
            let brute = all_even_orientations(&t);
            prop_assert_eq!(brute.len(), 1);
            prop_assert_eq!(&brute[0], &o);
            prop_assert_eq!(&even_orientation(&t).unwrap(), &o);
        }

        #[test]
        fn pruning_leaves_no_odd_component(n in 1usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..12)) {
            let pairs: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
            let g = Multigraph::from_pairs(n, &pairs);
            let f = count_odd_components(&g);
            let (pruned, removed) = prune_odd_components(&g);
            prop_assert_eq!(removed.len(), f);
            prop_assert_eq!(count_odd_components(&pruned), 0);
            // even components untouched
            let labels = g.components();
            for id in &removed {
                let e = g.edge(*id).unwrap();
                let comp = labels[e.u];
                let size = g.edges().iter().filter(|x| labels[x.u] == comp).count();
                prop_assert_eq!(size % 2, 1);
            }
        }

        #[test]
        fn indegrees_sum_to_edge_count(n in 1usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..14)) {
            let pairs: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
            let g = Multigraph::from_pairs(n, &pairs);
            if let Ok(o) = even_orientation(&g) {
                prop_assert_eq!(o.indegrees(n).iter().sum::<usize>(), g.edge_count());
                prop_assert!(o.is_even_orientation_of(&g));
            } else {
                prop_assert!(count_odd_components(&g) > 0);
            }
        }
    }
}
