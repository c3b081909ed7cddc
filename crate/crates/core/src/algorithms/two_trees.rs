//! Search for an extension whose dual splits into two spanning trees with
//! the two edges of every segment in different trees.

use std::cmp::Ordering;

use crate::error::Result;
use crate::geom::{Matching, Scalar, Segment};
use crate::orientation::UnionFind;
use crate::subdivision::{dual_multigraph, extend, Color, EndpointRole, ExtensionDirective, Region};
use crate::Error;

use super::hv::ColoredDual;

#[derive(Clone, Debug)]
pub struct TwoTreesWitness {
    /// Extension order, every segment extended both ways.
    pub order: Vec<Segment>,
    /// Dual with the two trees coloured red and green.
    pub colored: ColoredDual,
}

#[derive(Clone, Debug)]
pub enum TwoTreesOutcome {
    Found { witness: TwoTreesWitness, orders_tried: usize },
    Exhausted { orders_tried: usize, degenerate_orders: usize },
}

impl TwoTreesOutcome {
    pub fn witness(&self) -> Option<&TwoTreesWitness> {
        match self {
            TwoTreesOutcome::Found { witness, .. } => Some(witness),
            TwoTreesOutcome::Exhausted { .. } => None,
        }
    }
}

/// |dy/dx| with vertical segments last.
fn steepness(m: &Matching, s: &Segment) -> Option<Scalar> {
    let (a, b) = m.endpoints(s);
    let d = b.sub(&a);
    if d.x.is_zero() {
        None
    } else {
        Some((&d.y / &d.x).abs())
    }
}

fn by_steepness(m: &Matching) -> Vec<Segment> {
    let mut segs: Vec<(Option<Scalar>, Segment)> = m.segments().map(|s| (steepness(m, &s), s)).collect();
    segs.sort_by(|(x, s), (y, t)| {
        let k = match (x, y) {
            (Some(x), Some(y)) => x.cmp(y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        k.then(s.cmp(t))
    });
    segs.into_iter().map(|(_, s)| s).collect()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Tries up to `max_orders` extension orders: permutations of the segments
/// sorted by steepness, in lexicographic order. Orders that hit a degenerate
/// incidence are skipped and counted.
pub fn two_trees_search(m: &Matching, max_orders: usize) -> Result<TwoTreesOutcome> {
    m.check_perfect()?;
    let base_order = by_steepness(m);
    let mut perm: Vec<usize> = (0..base_order.len()).collect();
    let mut tried = 0;
    let mut degenerate = 0;
    while tried < max_orders {
        tried += 1;
        let order: Vec<Segment> = perm.iter().map(|&i| base_order[i]).collect();
        match try_order(m, &order) {
            Ok(Some(colored)) => {
                return Ok(TwoTreesOutcome::Found { witness: TwoTreesWitness { order, colored }, orders_tried: tried })
            }
            Ok(None) => {}
            Err(Error::DegenerateIncidence(_)) => degenerate += 1,
            Err(e) => return Err(e),
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(TwoTreesOutcome::Exhausted { orders_tried: tried, degenerate_orders: degenerate })
}

fn try_order(m: &Matching, order: &[Segment]) -> Result<Option<ColoredDual>> {
    let directives = ExtensionDirective::both_in_order(order.iter().copied());
    let (geometry, subdivision) = extend(m, &Region::around(m), &directives)?;
    let mut dual = dual_multigraph(&subdivision, m);

    // per segment: (edge at the left/bottom endpoint, edge at the other one)
    let mut pairs = Vec::with_capacity(order.len());
    for s in m.segments() {
        let find = |v| dual.edges.iter().position(|e| e.vertex == v).expect("every vertex has a dual edge");
        let (ea, eb) = (find(s.a), find(s.b));
        let first = matches!(dual.edges[ea].role, EndpointRole::LeftEnd | EndpointRole::BottomEnd);
        pairs.push(if first { (ea, eb) } else { (eb, ea) });
    }
    let k = dual.vertex_count;
    let mut choice = vec![false; pairs.len()];
    if !assign(&dual.edges, &pairs, 0, &mut choice, UnionFind::new(k), UnionFind::new(k)) {
        return Ok(None);
    }
    for (&(e0, e1), &swap) in pairs.iter().zip(&choice) {
        let (red, green) = if swap { (e1, e0) } else { (e0, e1) };
        dual.edges[red].color = Some(Color::Red);
        dual.edges[green].color = Some(Color::Green);
    }
    Ok(Some(ColoredDual { dual, subdivision, geometry }))
}

/// Both forests stay acyclic; with n edges each on n+1 vertices they end up
/// spanning trees.
fn assign(
    edges: &[crate::subdivision::DualEdge],
    pairs: &[(usize, usize)],
    i: usize,
    choice: &mut [bool],
    red: UnionFind,
    green: UnionFind,
) -> bool {
    if i == pairs.len() {
        return true;
    }
    for swap in [false, true] {
        let (r, g) = if swap { (pairs[i].1, pairs[i].0) } else { (pairs[i].0, pairs[i].1) };
        let (mut red2, mut green2) = (red.clone(), green.clone());
        if !red2.union(edges[r].left, edges[r].right) || !green2.union(edges[g].left, edges[g].right) {
            continue;
        }
        choice[i] = swap;
        if assign(edges, pairs, i + 1, choice, red2, green2) {
            return true;
        }
    }
    false
}
