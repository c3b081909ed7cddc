//! Large disjoint compatible matchings for even matchings: right rays, then
//! left rays, a spanning tree in one endpoint class and pruned odd
//! components in the other.

use crate::error::{Error, Result};
use crate::geom::{Matching, Segment};
use crate::matching_engine::assemble_from_orientation;
use crate::orientation::{count_odd_components, orientation_from_partition, prune_odd_components, EdgeId, EdgePartition, Part};
use crate::subdivision::{
    dual_multigraph, extend, Color, Directions, EndpointRole, ExtensionDirective, Region,
};

use super::hv::ColoredDual;

#[derive(Clone, Debug)]
pub struct FourFifthsReport {
    pub matching: Matching,
    pub n: usize,
    /// ⌈(4n−1)/5⌉
    pub guarantee: usize,
    pub achieved: usize,
    /// Odd components of the red subgraph before pruning.
    pub odd_components: usize,
    pub removed: Vec<EdgeId>,
    pub colored: ColoredDual,
}

impl FourFifthsReport {
    /// f(R) ≤ 2(n+1)/5, the odd-component bound used for the guarantee.
    pub fn odd_component_bound_holds(&self) -> bool {
        5 * self.odd_components <= 2 * (self.n + 1)
    }
}

pub fn guarantee(n: usize) -> usize {
    (4 * n).saturating_sub(1).div_ceil(5)
}

/// Extension with every right ray shot before any left ray, inside a box.
/// Right-endpoint edges are red, left-endpoint edges blue.
pub fn right_then_left(m: &Matching) -> Result<ColoredDual> {
    m.check_perfect()?;
    let segs: Vec<Segment> = m.segments().collect();
    let mut rights = Vec::with_capacity(segs.len());
    let mut lefts = Vec::with_capacity(segs.len());
    for s in &segs {
        let (a, b) = m.endpoints(s);
        match a.x.cmp(&b.x) {
            std::cmp::Ordering::Less => {
                lefts.push((*s, s.a));
                rights.push((*s, s.b));
            }
            std::cmp::Ordering::Greater => {
                lefts.push((*s, s.b));
                rights.push((*s, s.a));
            }
            std::cmp::Ordering::Equal => return Err(Error::VerticalSegment(*s)),
        }
    }
    let directives: Vec<ExtensionDirective> = rights
        .into_iter()
        .chain(lefts)
        .enumerate()
        .map(|(order_index, (segment, from))| ExtensionDirective {
            segment,
            directions: Directions::FromEndpoint(from),
            order_index,
        })
        .collect();
    let (geometry, subdivision) = extend(m, &Region::around(m), &directives)?;
    let mut dual = dual_multigraph(&subdivision, m);
    for e in &mut dual.edges {
        e.color = Some(if e.role == EndpointRole::RightEnd { Color::Red } else { Color::Blue });
    }
    Ok(ColoredDual { dual, subdivision, geometry })
}

/// Disjoint compatible matching with at least ⌈(4n−1)/5⌉ segments for a
/// perfect matching with an even number n of non-vertical segments.
pub fn four_fifths_matching(m: &Matching) -> Result<FourFifthsReport> {
    m.check_perfect()?;
    let n = m.len();
    if n % 2 == 1 {
        return Err(Error::OddMatching(n));
    }
    let colored = right_then_left(m)?;
    let blue = colored.dual.colored(Color::Blue);
    if !blue.is_spanning_tree() {
        return Err(Error::Internal("blue subgraph is not a spanning tree".into()));
    }
    let red = colored.dual.colored(Color::Red);
    let odd_components = count_odd_components(&red);
    let (pruned, removed) = prune_odd_components(&red);

    let mut parts: std::collections::BTreeMap<EdgeId, Part> = blue.edges().iter().map(|e| (e.id, Part::First)).collect();
    parts.extend(pruned.edges().iter().map(|e| (e.id, Part::Second)));
    let g = colored.dual.to_multigraph();
    let o = orientation_from_partition(&g, &EdgePartition { parts })?;
    let matching = assemble_from_orientation(m, &colored.subdivision, &colored.dual, &o, true)?;

    let achieved = matching.len();
    if 2 * achieved != 2 * n - odd_components {
        return Err(Error::Internal(format!("matched {achieved} segments with {odd_components} odd components")));
    }
    Ok(FourFifthsReport { matching, n, guarantee: guarantee(n), achieved, odd_components, removed, colored })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::generators::{gen_random_matching, Flavor};
    use crate::geom::{compatible, disjoint, Coord, PointSet};
    use std::sync::Arc;

    fn matching(pts: &[(i64, i64)], pairs: &[(usize, usize)]) -> Matching {
        let ps = PointSet::from_coords(pts.iter().map(|&(x, y)| Coord::new(x, y)));
        Matching::new(Arc::new(ps), pairs.iter().copied()).unwrap()
    }

    fn check(m: &Matching) -> FourFifthsReport {
        let r = four_fifths_matching(m).unwrap();
        assert!(disjoint(m, &r.matching).unwrap() && compatible(m, &r.matching).unwrap());
        assert!(r.achieved >= r.guarantee, "{} < {}", r.achieved, r.guarantee);
        assert!(r.colored.segments_split());
        r
    }

    #[test]
    fn guarantees() {
        assert_eq!([2, 4, 6, 10, 50].map(guarantee), [2, 3, 5, 8, 40]);
    }

    #[test]
    fn two_segments_give_a_perfect_matching() {
        let r = check(&matching(&[(0, 0), (4, 1), (1, 3), (5, 4)], &[(0, 1), (2, 3)]));
        assert_eq!(r.achieved, 2);
        assert!(r.matching.is_perfect());
    }

    #[test]
    fn errors() {
        let m = matching(&[(0, 0), (4, 1), (1, 3), (5, 4), (7, 0), (9, 2)], &[(0, 1), (2, 3), (4, 5)]);
        assert_eq!(four_fifths_matching(&m).unwrap_err(), Error::OddMatching(3));
        let m = matching(&[(0, 0), (0, 5), (1, 3), (5, 4)], &[(0, 1), (2, 3)]);
        assert_eq!(four_fifths_matching(&m).unwrap_err(), Error::VerticalSegment(Segment::new(0, 1)));
    }

    #[test]
    fn random_instances() {
        for n in (2..=20).step_by(2) {
            for seed in 0..3 {
                let r = check(&gen_random_matching(n, seed, Flavor::General).unwrap());
                assert!(r.odd_component_bound_holds());
            }
        }
    }

    #[test]
    fn left_endpoint_edges_form_the_tree() {
        // the right-endpoint class is not a tree in general
        let mut red_trees = 0;
        for seed in 0..40 {
            let m = gen_random_matching(8, seed, Flavor::General).unwrap();
            let c = right_then_left(&m).unwrap();
            assert!(c.dual.colored(Color::Blue).is_spanning_tree());
            red_trees += c.dual.colored(Color::Red).is_spanning_tree() as usize;
        }
        assert!(red_trees < 40);
    }
}
