//! Matchings made of horizontal and vertical segments: horizontals are
//! extended first, then verticals, and the two endpoint colour classes give
//! two spanning trees of the dual.

use crate::error::{Error, Result};
use crate::geom::{Matching, Segment};
use crate::matching_engine::assemble_from_orientation;
use crate::orientation::{orientation_from_partition, EdgePartition, Part};
use crate::subdivision::{
    dual_multigraph, extend, Color, ConvexSubdivision, DualMultigraph, EndpointRole, ExtensionDirective, ExtensionGeometry,
    Region,
};

/// Dual multigraph with every edge coloured, plus the extension it came from.
#[derive(Clone, Debug)]
pub struct ColoredDual {
    pub dual: DualMultigraph,
    pub subdivision: ConvexSubdivision,
    pub geometry: ExtensionGeometry,
}

impl ColoredDual {
    /// Both colour classes used by the edges, in order.
    pub fn colors(&self) -> Vec<Color> {
        let mut c: Vec<Color> = self.dual.edges.iter().filter_map(|e| e.color).collect();
        c.sort();
        c.dedup();
        c
    }

    /// The two edges of every segment carry different colours.
    pub fn segments_split(&self) -> bool {
        let mut seen = std::collections::BTreeMap::new();
        for e in &self.dual.edges {
            if let Some(prev) = seen.insert(e.segment, e.color) {
                if prev == e.color || e.color.is_none() {
                    return false;
                }
            }
        }
        true
    }

    pub fn partition(&self, first: Color) -> EdgePartition {
        let parts = self
            .dual
            .edges
            .iter()
            .filter_map(|e| e.color.map(|c| (e.id, if c == first { Part::First } else { Part::Second })))
            .collect();
        EdgePartition { parts }
    }
}

fn is_horizontal(m: &Matching, s: &Segment) -> bool {
    let (a, b) = m.endpoints(s);
    a.y == b.y
}

fn check_axis_parallel(m: &Matching) -> Result<()> {
    for s in m.segments() {
        let (a, b) = m.endpoints(&s);
        if a.x != b.x && a.y != b.y {
            return Err(Error::NotAxisParallel(s));
        }
    }
    Ok(())
}

/// Extension and red/green colouring; both colour classes are checked to be
/// spanning trees of the dual. Works for odd matchings too.
pub fn hv_two_trees(m: &Matching) -> Result<ColoredDual> {
    m.check_perfect()?;
    check_axis_parallel(m)?;
    let (horizontal, vertical): (Vec<Segment>, Vec<Segment>) = m.segments().partition(|s| is_horizontal(m, s));
    let directives = ExtensionDirective::both_in_order(horizontal.into_iter().chain(vertical));
    let region = Region::around(m);
    let (geometry, subdivision) = extend(m, &region, &directives)?;
    let mut dual = dual_multigraph(&subdivision, m);
    for e in &mut dual.edges {
        e.color = Some(match e.role {
            EndpointRole::LeftEnd | EndpointRole::BottomEnd => Color::Red,
            EndpointRole::RightEnd | EndpointRole::TopEnd => Color::Green,
        });
    }
    let out = ColoredDual { dual, subdivision, geometry };
    for c in [Color::Red, Color::Green] {
        if !out.dual.colored(c).is_spanning_tree() {
            return Err(Error::Internal(format!("{c:?} subgraph is not a spanning tree")));
        }
    }
    Ok(out)
}

/// Disjoint compatible perfect matching of an even axis-parallel matching,
/// from the even orientations of the red and green trees.
pub fn hv_disjoint_matching(m: &Matching) -> Result<(Matching, ColoredDual)> {
    let colored = hv_two_trees(m)?;
    if m.len() % 2 == 1 {
        return Err(Error::OddMatching(m.len()));
    }
    let g = colored.dual.to_multigraph();
    let o = orientation_from_partition(&g, &colored.partition(Color::Red))?;
    let out = assemble_from_orientation(m, &colored.subdivision, &colored.dual, &o, true)?;
    Ok((out, colored))
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

    fn check(m: &Matching) {
        let (out, colored) = hv_disjoint_matching(m).unwrap();
        assert!(out.is_perfect());
        assert!(disjoint(m, &out).unwrap());
        assert!(compatible(m, &out).unwrap());
        assert!(colored.segments_split());
    }

    #[test]
    fn stacked_horizontals() {
        check(&matching(&[(0, 0), (4, 0), (1, 3), (5, 3)], &[(0, 1), (2, 3)]));
    }

    #[test]
    fn mixed_directions() {
        // a horizontal, a vertical beside it, another horizontal and vertical
        let m = matching(&[(0, 0), (6, 0), (8, -3), (8, 5), (1, 7), (5, 7), (-2, 2), (-2, 9)], &[(0, 1), (2, 3), (4, 5), (6, 7)]);
        check(&m);
    }

    #[test]
    fn rejects_diagonal_and_odd() {
        let m = matching(&[(0, 0), (3, 1), (5, 5), (9, 5)], &[(0, 1), (2, 3)]);
        assert_eq!(hv_two_trees(&m).unwrap_err(), Error::NotAxisParallel(Segment::new(0, 1)));
        let m = matching(&[(0, 0), (3, 0), (5, 2), (5, 7), (1, 9), (4, 9)], &[(0, 1), (2, 3), (4, 5)]);
        let t = hv_two_trees(&m).unwrap();
        assert_eq!(t.dual.vertex_count, 4);
        assert_eq!(hv_disjoint_matching(&m).unwrap_err(), Error::OddMatching(3));
    }

    #[test]
    fn random_instances() {
        for n in [2, 5, 8, 13, 20] {
            for seed in 0..6 {
                let m = gen_random_matching(n, seed, Flavor::AxisParallel).unwrap();
                if n % 2 == 0 {
                    check(&m);
                } else {
                    assert!(hv_two_trees(&m).unwrap().segments_split());
                }
            }
        }
    }
}
