//! Convex-hull-connected matchings: split at splitters, otherwise take
//! alternate hull gaps and match the remaining endpoints inside the hull.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geom::{convex_hull_of, orientation_test, Matching, Orientation, PointId, Segment};
use crate::matching_engine::{constrained_matching, ConstrainedMatchProblem};

/// Every segment has an endpoint on the hull of all endpoints.
pub fn check_chc(m: &Matching) -> Result<()> {
    let ids: Vec<PointId> = m.vertex_ids().into_iter().collect();
    if ids.len() < 3 {
        return Ok(());
    }
    let hull = convex_hull_of(m.base(), &ids)?;
    match m.segments().find(|s| !hull.contains_id(s.a) && !hull.contains_id(s.b)) {
        Some(s) => Err(Error::NotChc(s)),
        None => Ok(()),
    }
}

/// Disjoint compatible perfect matching of an even convex-hull-connected
/// perfect matching.
pub fn chc_disjoint_matching(m: &Matching) -> Result<Matching> {
    m.check_perfect()?;
    if m.len() % 2 == 1 {
        return Err(Error::OddMatching(m.len()));
    }
    check_chc(m)?;
    let segs: Vec<Segment> = m.segments().collect();
    let mut out = Vec::new();
    solve(m, &segs, &mut out)?;
    Matching::from_segments(m.base().clone(), out)
}

fn solve(m: &Matching, segs: &[Segment], out: &mut Vec<Segment>) -> Result<()> {
    if segs.is_empty() {
        return Ok(());
    }
    let ids: Vec<PointId> = segs.iter().flat_map(|s| [s.a, s.b]).collect();
    let hull = convex_hull_of(m.base(), &ids)?;

    let splitter = segs.iter().find(|s| hull.contains_id(s.a) && hull.contains_id(s.b) && !hull.consecutive(s.a, s.b));
    if let Some(&vw) = splitter {
        let (v, w) = m.endpoints(&vw);
        let (left, right): (Vec<Segment>, Vec<Segment>) = segs
            .iter()
            .filter(|&&s| s != vw)
            .partition(|s| orientation_test(&v, &w, &m.coord(s.a)) == Orientation::Left);
        let (mut odd, even) = if left.len() % 2 == 1 { (left, right) } else { (right, left) };
        odd.push(vw);
        solve(m, &odd, out)?;
        return solve(m, &even, out);
    }

    let k = hull.order.len();
    let gaps: Vec<Segment> = (0..k)
        .map(|i| Segment::new(hull.order[i], hull.order[(i + 1) % k]))
        .filter(|g| !m.contains(g))
        .collect();
    for offset in 0..2 {
        let b: Vec<Segment> = gaps.iter().skip(offset).step_by(2).copied().collect();
        let touched: BTreeSet<PointId> = b.iter().flat_map(|s| [s.a, s.b]).collect();
        let one_each = b.len() * 2 == touched.len()
            && segs.iter().all(|s| touched.contains(&s.a) != touched.contains(&s.b));
        if !one_each {
            continue;
        }
        let rest: Vec<PointId> = ids.iter().copied().filter(|p| !touched.contains(p)).collect();
        let prob = ConstrainedMatchProblem {
            region: Some(hull.polygon.clone()),
            ..ConstrainedMatchProblem::new(m.base().clone(), rest)
        }
        .with_segments(m, m.segments().chain(b.iter().copied()));
        let q = constrained_matching(&prob)?;
        out.extend(b);
        out.extend(q.segments());
        return Ok(());
    }
    Err(Error::Internal("no alternate gap set touches each segment once".into()))
}
