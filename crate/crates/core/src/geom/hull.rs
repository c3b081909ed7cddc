use super::predicates::{orientation_test, Orientation};
use super::types::{ConvexPolygon, Coord, PointId, PointSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    pub polygon: ConvexPolygon,
    /// Hull point ids, counterclockwise, starting at the lexicographically
    /// smallest point.
    pub order: Vec<PointId>,
    pub interior: Vec<PointId>,
}

impl Hull {
    pub fn contains_id(&self, id: PointId) -> bool {
        self.order.contains(&id)
    }

    /// Cyclic successor on the hull.
    pub fn next(&self, id: PointId) -> Option<PointId> {
        let i = self.order.iter().position(|&p| p == id)?;
        Some(self.order[(i + 1) % self.order.len()])
    }

    pub fn consecutive(&self, p: PointId, q: PointId) -> bool {
        self.next(p) == Some(q) || self.next(q) == Some(p)
    }
}

/// Counterclockwise hull of all points (Andrew's monotone chain); points on
/// hull edges but not corners count as interior.
pub fn convex_hull(ps: &PointSet) -> Result<Hull> {
    convex_hull_of(ps, &ps.ids().collect::<Vec<_>>())
}

pub fn convex_hull_of(ps: &PointSet, ids: &[PointId]) -> Result<Hull> {
    if ids.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: ids.len() });
    }
    let coords: Vec<(PointId, Coord)> = ids.iter().map(|&i| (i, ps.coord(i))).collect();
    let order = monotone_chain(&coords);
    if order.len() < 3 {
        return Err(Error::NotConvex);
    }
    let polygon = ConvexPolygon::new(order.iter().map(|&i| ps.coord(i)).collect())?;
    let interior = ids.iter().copied().filter(|i| !order.contains(i)).collect();
    Ok(Hull { polygon, order, interior })
}

fn monotone_chain(pts: &[(PointId, Coord)]) -> Vec<PointId> {
    let mut sorted: Vec<&(PointId, Coord)> = pts.iter().collect();
    sorted.sort_by(|a, b| a.1.cmp(&b.1));
    let mut lower: Vec<&(PointId, Coord)> = Vec::new();
    for p in &sorted {
        while lower.len() >= 2
            && orientation_test(&lower[lower.len() - 2].1, &lower[lower.len() - 1].1, &p.1) != Orientation::Left
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&(PointId, Coord)> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2
            && orientation_test(&upper[upper.len() - 2].1, &upper[upper.len() - 1].1, &p.1) != Orientation::Left
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.into_iter().chain(upper).map(|p| p.0).collect()
}

/// Ids in convex position ordered counterclockwise, or `None` if some point
/// is not a hull corner. Works for two points too.
pub fn convex_order(ps: &PointSet, ids: &[PointId]) -> Option<Vec<PointId>> {
    match ids.len() {
        0..=2 => {
            let mut v = ids.to_vec();
            v.sort();
            Some(v)
        }
        _ => {
            let hull = convex_hull_of(ps, ids).ok()?;
            hull.interior.is_empty().then_some(hull.order)
        }
    }
}
