//! Transformations between perfect matchings through the canonical matching,
//! built from repeated even cuts by vertical lines.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{compatible, BoundingBox, Matching, OrientedLine, PointId, PointSet, Scalar, Segment, Side};
use crate::matching_engine::assemble_from_orientation;
use crate::orientation::even_orientation;
use crate::subdivision::{dual_multigraph, extend, ExtensionDirective, Region};

/// Sequence of perfect matchings, consecutive ones compatible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformationSequence {
    pub matchings: Vec<Matching>,
}

impl TransformationSequence {
    /// Number of steps.
    pub fn length(&self) -> usize {
        self.matchings.len().saturating_sub(1)
    }

    pub fn first(&self) -> &Matching {
        &self.matchings[0]
    }

    pub fn last(&self) -> &Matching {
        self.matchings.last().expect("sequence is never empty")
    }

    /// Drops consecutive repeats.
    pub fn collapse(mut self) -> Self {
        self.matchings.dedup();
        self
    }

    /// Every entry perfect over one point set, consecutive entries compatible.
    pub fn verify(&self) -> Result<()> {
        let Some(first) = self.matchings.first() else {
            return Err(Error::Internal("empty sequence".into()));
        };
        for m in &self.matchings {
            m.check_perfect()?;
            if m.vertex_ids() != first.vertex_ids() {
                return Err(Error::MismatchedVertexSet);
            }
        }
        for w in self.matchings.windows(2) {
            if !compatible(&w[0], &w[1])? {
                return Err(Error::Internal("consecutive matchings cross".into()));
            }
        }
        Ok(())
    }
}

/// ⌈log₂ n⌉, with 0 for n ≤ 1.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn sorted_by_x(base: &PointSet, ids: &[PointId]) -> Result<Vec<PointId>> {
    let mut v = ids.to_vec();
    v.sort_by(|&a, &b| base.coord(a).cmp(&base.coord(b)));
    for w in v.windows(2) {
        if base.coord(w[0]).x == base.coord(w[1]).x {
            return Err(Error::DistinctXRequired(w[0], w[1]));
        }
    }
    Ok(v)
}

/// Pairs points consecutively in x-order.
pub fn canonical_matching(base: &Arc<PointSet>) -> Result<Matching> {
    let ids: Vec<PointId> = base.ids().collect();
    canonical_of(base, &ids)
}

fn canonical_of(base: &Arc<PointSet>, ids: &[PointId]) -> Result<Matching> {
    if ids.len() % 2 == 1 {
        return Err(Error::OddCount(ids.len()));
    }
    let order = sorted_by_x(base, ids)?;
    Matching::new(base.clone(), order.chunks(2).map(|c| (c[0], c[1])))
}

fn check_cut(m: &Matching, t: &OrientedLine) -> Result<usize> {
    let mut cut = 0;
    for s in m.segments() {
        let (a, b) = m.endpoints(&s);
        match (t.side(&a), t.side(&b)) {
            (None, _) => return Err(Error::VertexOnLine(s.a)),
            (_, None) => return Err(Error::VertexOnLine(s.b)),
            (Some(x), Some(y)) if x != y => cut += 1,
            _ => {}
        }
    }
    if cut % 2 == 1 {
        return Err(Error::OddCut(cut));
    }
    Ok(cut)
}

/// Perfect matching of the vertices of `m` on `side` of `t`, compatible
/// with `m`: extend inside the halfplane, evenly orient the dual, match
/// within each cell.
pub fn halfplane_matching(m: &Matching, t: &OrientedLine, side: Side) -> Result<Matching> {
    check_cut(m, t)?;
    let clip = BoundingBox::of_points(m.base());
    let region = Region::HalfPlane { line: t.clone(), side, clip };
    let directives = ExtensionDirective::standard(m, &region)?;
    if directives.is_empty() {
        return Ok(Matching::empty(m.base().clone()));
    }
    let (_, sub) = extend(m, &region, &directives)?;
    let g = dual_multigraph(&sub, m);
    let o = even_orientation(&g.to_multigraph())?;
    assemble_from_orientation(m, &sub, &g, &o, false)
}

/// Union of the halfplane matchings on both sides of `t`; no edge crosses `t`.
pub fn even_cut_matching(m: &Matching, t: &OrientedLine) -> Result<Matching> {
    let left = halfplane_matching(m, t, Side::Left)?;
    let right = halfplane_matching(m, t, Side::Right)?;
    Matching::from_segments(m.base().clone(), left.segments().chain(right.segments()))
}

/// Matchings from `m` to the canonical matching of its vertex set, at most
/// ⌈log₂ n⌉ steps.
pub fn transform_to_canonical(m: &Matching) -> Result<TransformationSequence> {
    m.check_perfect()?;
    let ids: Vec<PointId> = m.vertex_ids().into_iter().collect();
    sorted_by_x(m.base(), &ids)?;
    let steps = forward(m, &ids)?;
    Ok(TransformationSequence { matchings: steps }.collapse())
}

/// `m` perfect on `ids` (other points of the base untouched).
fn forward(m: &Matching, ids: &[PointId]) -> Result<Vec<Matching>> {
    let n = ids.len() / 2;
    if n <= 1 {
        return Ok(vec![m.clone()]);
    }
    let base = m.base();
    let order = sorted_by_x(base, ids)?;
    let split = 2 * (n / 2);
    let x = &(&base.coord(order[split - 1]).x + &base.coord(order[split]).x) / &Scalar::from(2);
    let t = OrientedLine::vertical(x);
    let cut = even_cut_matching(m, &t)?;
    let (left_ids, right_ids) = order.split_at(split);
    let restrict = |part: &[PointId]| -> Result<Matching> {
        let set: std::collections::BTreeSet<PointId> = part.iter().copied().collect();
        Matching::from_segments(base.clone(), cut.segments().filter(|s: &Segment| set.contains(&s.a)))
    };
    let left = forward(&restrict(left_ids)?, left_ids)?;
    let right = forward(&restrict(right_ids)?, right_ids)?;
    let steps = left.len().max(right.len());
    let mut out = vec![m.clone()];
    for i in 0..steps {
        let l = &left[i.min(left.len() - 1)];
        let r = &right[i.min(right.len() - 1)];
        out.push(Matching::from_segments(base.clone(), l.segments().chain(r.segments()))?);
    }
    Ok(out)
}

/// Transformation from `m` to `m2` through the canonical matching, at most
/// 2⌈log₂ n⌉ steps after collapsing repeats.
pub fn transform(m: &Matching, m2: &Matching) -> Result<TransformationSequence> {
    if m.base() != m2.base() || m.vertex_ids() != m2.vertex_ids() {
        return Err(Error::MismatchedVertexSet);
    }
    let there = transform_to_canonical(m)?;
    let back = transform_to_canonical(m2)?;
    let mut matchings = there.matchings;
    matchings.extend(back.matchings.into_iter().rev().skip(1));
    Ok(TransformationSequence { matchings }.collapse())
}
