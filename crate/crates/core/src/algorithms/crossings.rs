//! Matchings of the left endpoints and of the right endpoints, each
//! non-crossing with the input; the two may cross each other.

use crate::error::{Error, Result};
use crate::geom::{Matching, PointId, Segment};
use crate::matching_engine::{constrained_matching, ConstrainedMatchProblem};
use crate::subdivision::{shoot_rays, Directions, ExtensionDirective, Region};

/// Endpoint of `s` with smaller x, then the other one.
fn left_right(m: &Matching, s: &Segment) -> Result<(PointId, PointId)> {
    let (a, b) = m.endpoints(s);
    match a.x.cmp(&b.x) {
        std::cmp::Ordering::Less => Ok((s.a, s.b)),
        std::cmp::Ordering::Greater => Ok((s.b, s.a)),
        std::cmp::Ordering::Equal => Err(Error::VerticalSegment(*s)),
    }
}

/// Perfect matching of `targets`, avoiding the segments of `m` and the rays
/// shot from `sources` (in segment order) inside a bounding box.
fn match_behind_rays(m: &Matching, sources: &[(Segment, PointId)], targets: Vec<PointId>) -> Result<Matching> {
    let region = Region::around(m);
    let directives: Vec<ExtensionDirective> = sources
        .iter()
        .enumerate()
        .map(|(order_index, &(segment, from))| ExtensionDirective {
            segment,
            directions: Directions::FromEndpoint(from),
            order_index,
        })
        .collect();
    let rays = shoot_rays(m, &region, &directives)?;
    let mut prob = ConstrainedMatchProblem::new(m.base().clone(), targets).with_segments(m, m.segments());
    prob.blockers.extend(rays.extensions.iter().map(|e| (e.origin.clone(), e.terminus.clone())));
    prob.region = Some(region.polygon()?);
    constrained_matching(&prob)
}

/// `(M_L, M_R)`: perfect matchings of the left and of the right endpoints of
/// an even matching without vertical segments, neither crossing `m`.
pub fn crossings_matchings(m: &Matching) -> Result<(Matching, Matching)> {
    m.check_perfect()?;
    if m.len() % 2 == 1 {
        return Err(Error::OddMatching(m.len()));
    }
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for s in m.segments() {
        let (l, r) = left_right(m, &s)?;
        lefts.push((s, l));
        rights.push((s, r));
    }
    let left_ids = lefts.iter().map(|&(_, v)| v).collect();
    let right_ids = rights.iter().map(|&(_, v)| v).collect();
    let m_r = match_behind_rays(m, &lefts, right_ids)?;
    let m_l = match_behind_rays(m, &rights, left_ids)?;
    Ok((m_l, m_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::generators::{gen_parallel_chords, gen_random_matching, Flavor};
    use crate::geom::{compatible, Coord, PointSet, Scalar};
    use crate::oracle::visibility_graph;
    use std::sync::Arc;

    fn matching(pts: &[(i64, i64)], pairs: &[(usize, usize)]) -> Matching {
        let ps = PointSet::from_coords(pts.iter().map(|&(x, y)| Coord::new(x, y)));
        Matching::new(Arc::new(ps), pairs.iter().copied()).unwrap()
    }

    fn check(m: &Matching) -> (Matching, Matching) {
        let (l, r) = crossings_matchings(m).unwrap();
        assert!(compatible(m, &l).unwrap() && compatible(m, &r).unwrap());
        let vis = visibility_graph(m, true);
        for s in l.segments().chain(r.segments()) {
            assert!(vis.has_edge(s.a, s.b), "{s} not visible");
        }
        assert_eq!(l.len() + r.len(), m.len());
        (l, r)
    }

    #[test]
    fn two_horizontals() {
        let (l, r) = check(&matching(&[(0, 0), (4, 0), (1, 3), (5, 3)], &[(0, 1), (2, 3)]));
        assert!(l.contains(&Segment::new(0, 2)));
        assert!(r.contains(&Segment::new(1, 3)));
    }

    #[test]
    fn four_parallel_chords() {
        check(&gen_parallel_chords(4, &Scalar::from(1000)).unwrap());
    }

    #[test]
    fn errors() {
        let m = matching(&[(0, 0), (4, 1), (1, 3), (5, 4), (7, 0), (9, 2)], &[(0, 1), (2, 3), (4, 5)]);
        assert_eq!(crossings_matchings(&m).unwrap_err(), Error::OddMatching(3));
        let m = matching(&[(0, 0), (0, 5), (1, 3), (5, 4)], &[(0, 1), (2, 3)]);
        assert_eq!(crossings_matchings(&m).unwrap_err(), Error::VerticalSegment(Segment::new(0, 1)));
    }

    #[test]
    fn random_instances() {
        for n in [2, 4, 8, 14, 20] {
            for seed in 0..4 {
                check(&gen_random_matching(n, seed, Flavor::General).unwrap());
            }
        }
    }
}
