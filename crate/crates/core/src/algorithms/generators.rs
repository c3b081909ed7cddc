//! Instance generators: random matchings of several flavors and the odd
//! constructions without a disjoint compatible perfect matching.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{orientation_test, segments_conflict, Coord, Matching, Orientation, PointSet, Scalar, Segment};
use crate::oracle::visibility_graph;
use crate::subdivision::{extend, ExtensionDirective, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    General,
    AxisParallel,
    /// Convex-hull-connected: every segment has an endpoint on the hull.
    Chc,
}

const COORD_RANGE: i64 = 1 << 14;
const ATTEMPTS: usize = 2000;

fn collinear_with_any(pts: &[Coord], c: &Coord) -> bool {
    pts.iter().any(|p| p == c)
        || pts
            .iter()
            .enumerate()
            .any(|(i, p)| pts[i + 1..].iter().any(|q| orientation_test(p, q, c) == Orientation::Collinear))
}

/// `count` random integer points in general position.
pub fn random_points(count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Coord>> {
    let mut pts: Vec<Coord> = Vec::with_capacity(count);
    let mut tries = 0;
    while pts.len() < count {
        tries += 1;
        if tries > ATTEMPTS * count.max(1) {
            return Err(Error::GenerationFailed("could not place points in general position".into()));
        }
        let c = Coord::new(rng.gen_range(-COORD_RANGE..=COORD_RANGE), rng.gen_range(-COORD_RANGE..=COORD_RANGE));
        // distinct x and y keep vertical cuts and sweeps simple
        if !pts.iter().any(|p| p.x == c.x || p.y == c.y) && !collinear_with_any(&pts, &c) {
            pts.push(c);
        }
    }
    Ok(pts)
}

/// Repeatedly replaces a crossing pair by one of its two uncrossed
/// re-pairings. Both have smaller total length, so this terminates; `valid`
/// restricts which re-pairings may be used.
pub fn uncross(pts: &[Coord], pairs: &mut [(usize, usize)], valid: impl Fn(usize, usize) -> bool) {
    let len = |(p, q): (usize, usize)| {
        let d = pts[p].sub(&pts[q]);
        d.norm2().to_f64().sqrt()
    };
    'scan: loop {
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                let (a, c) = pairs[i];
                let (b, d) = pairs[j];
                if !segments_conflict(&pts[a], &pts[c], &pts[b], &pts[d]) {
                    continue;
                }
                let options = [((a, b), (c, d)), ((a, d), (b, c))];
                let pick = options
                    .iter()
                    .filter(|(x, y)| valid(x.0, x.1) && valid(y.0, y.1))
                    .min_by(|x, y| (len(x.0) + len(x.1)).total_cmp(&(len(y.0) + len(y.1))))
                    .copied()
                    .expect("some re-pairing keeps the constraint");
                pairs[i] = pick.0;
                pairs[j] = pick.1;
                continue 'scan;
            }
        }
        return;
    }
}

fn build(pts: Vec<Coord>, pairs: &[(usize, usize)]) -> Result<Matching> {
    let ps = PointSet::from_coords(pts);
    ps.validate_general_position()?;
    Matching::new(Arc::new(ps), pairs.iter().copied())
}

fn random_pairing(k: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut ids: Vec<usize> = (0..k).collect();
    ids.shuffle(rng);
    ids.chunks(2).map(|c| (c[0], c[1])).collect()
}

/// Random non-crossing perfect matching with `n` segments, deterministic in
/// `seed`.
pub fn gen_random_matching(n: usize, seed: u64, flavor: Flavor) -> Result<Matching> {
    if n == 0 {
        return Err(Error::GenerationFailed("need at least one segment".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match flavor {
        Flavor::General => {
            let pts = random_points(2 * n, &mut rng)?;
            let mut pairs = random_pairing(2 * n, &mut rng);
            uncross(&pts, &mut pairs, |_, _| true);
            build(pts, &pairs)
        }
        Flavor::AxisParallel => gen_axis_parallel(n, &mut rng),
        Flavor::Chc => gen_chc(n, &mut rng),
    }
}

/// Two random non-crossing perfect matchings of one random point set.
pub fn gen_random_pair(n: usize, seed: u64) -> Result<(Matching, Matching)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_points(2 * n, &mut rng)?;
    let mut first = random_pairing(2 * n, &mut rng);
    let mut second = random_pairing(2 * n, &mut rng);
    uncross(&pts, &mut first, |_, _| true);
    uncross(&pts, &mut second, |_, _| true);
    let base = Arc::new(PointSet::from_coords(pts));
    base.validate_general_position()?;
    Ok((Matching::new(base.clone(), first)?, Matching::new(base, second)?))
}

fn gen_axis_parallel(n: usize, rng: &mut ChaCha8Rng) -> Result<Matching> {
    let mut pts: Vec<Coord> = Vec::with_capacity(2 * n);
    let mut pairs = Vec::with_capacity(n);
    let mut tries = 0;
    while pairs.len() < n {
        tries += 1;
        if tries > ATTEMPTS * n {
            return Err(Error::GenerationFailed("could not place axis-parallel segments".into()));
        }
        let x = rng.gen_range(-COORD_RANGE..=COORD_RANGE);
        let y = rng.gen_range(-COORD_RANGE..=COORD_RANGE);
        let len = rng.gen_range(1..=COORD_RANGE / 4);
        let (p, q) = if rng.gen_bool(0.5) {
            (Coord::new(x, y), Coord::new(x + len, y))
        } else {
            (Coord::new(x, y), Coord::new(x, y + len))
        };
        if collinear_with_any(&pts, &p) || collinear_with_any(&pts, &q) {
            continue;
        }
        // the new pair's line must avoid every existing point
        if pts.iter().any(|c| orientation_test(&p, &q, c) == Orientation::Collinear) {
            continue;
        }
        if pairs.iter().any(|&(a, b): &(usize, usize)| segments_conflict(&pts[a], &pts[b], &p, &q)) {
            continue;
        }
        pairs.push((pts.len(), pts.len() + 1));
        pts.push(p);
        pts.push(q);
    }
    build(pts, &pairs)
}

/// Rational point on the circle of radius `r` from the parameter `t`.
fn circle_point(r: &Scalar, t: &Scalar) -> Coord {
    let one = Scalar::one();
    let t2 = t * t;
    let den = &one + &t2;
    Coord { x: &(r * &(&one - &t2)) / &den, y: &(&(r * t) * &Scalar::from(2)) / &den }
}

fn gen_chc(n: usize, rng: &mut ChaCha8Rng) -> Result<Matching> {
    for _ in 0..ATTEMPTS {
        let extra = rng.gen_range(0..=n / 3);
        let outer_count = n + extra;
        let radius = Scalar::from(COORD_RANGE);
        let mut ts: Vec<i64> = Vec::new();
        while ts.len() < outer_count {
            let t = rng.gen_range(-256..=256);
            if !ts.contains(&t) {
                ts.push(t);
            }
        }
        let mut pts: Vec<Coord> = ts.iter().map(|&t| circle_point(&radius, &Scalar::ratio(t, 64))).collect();
        let mut ok = true;
        for _ in 0..n - extra {
            let mut placed = false;
            for _ in 0..ATTEMPTS {
                let c = Coord::new(rng.gen_range(-COORD_RANGE / 2..=COORD_RANGE / 2), rng.gen_range(-COORD_RANGE / 2..=COORD_RANGE / 2));
                // distinct x and y keep vertical cuts and sweeps simple
        if !pts.iter().any(|p| p.x == c.x || p.y == c.y) && !collinear_with_any(&pts, &c) {
                    pts.push(c);
                    placed = true;
                    break;
                }
            }
            if !placed {
                ok = false;
                break;
            }
        }
        if !ok || PointSet::from_coords(pts.clone()).validate_general_position().is_err() {
            continue;
        }
        // inner points get an outer partner, leftover outer points pair up
        let mut outer: Vec<usize> = (0..outer_count).collect();
        outer.shuffle(rng);
        let mut pairs: Vec<(usize, usize)> = (outer_count..2 * n).zip(outer.iter().copied()).map(|(i, o)| (o, i)).collect();
        let rest: Vec<usize> = outer[n - extra..].to_vec();
        pairs.extend(rest.chunks(2).map(|c| (c[0], c[1])));
        let is_outer = |p: usize| p < outer_count;
        uncross(&pts, &mut pairs, |p, q| is_outer(p) || is_outer(q));
        return build(pts, &pairs);
    }
    Err(Error::GenerationFailed("could not build a convex-hull-connected instance".into()))
}

/// `k` horizontal chords of a circle of the given radius, at heights given
/// by evenly spaced rational parameters. Points on a circle are in general
/// position automatically.
pub fn gen_parallel_chords(k: usize, radius: &Scalar) -> Result<Matching> {
    if k == 0 {
        return Err(Error::GenerationFailed("need at least one chord".into()));
    }
    let mut pts = Vec::with_capacity(2 * k);
    for i in 0..k {
        let t = Scalar::ratio(2 * i as i64 - k as i64 + 1, k as i64 + 1);
        let c = circle_point(radius, &t);
        pts.push(Coord { x: -c.x.clone(), y: c.y.clone() });
        pts.push(c);
    }
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (2 * i, 2 * i + 1)).collect();
    build(pts, &pairs)
}

/// `n` random black segments are extended into `n` blue segments that stop
/// just short of whatever blocked them; a short red segment goes into each
/// of the `n + 1` regions. The result has `2n + 1` segments and, as checked
/// before returning, the red vertices see no other red vertex.
pub fn gen_general_odd(n: usize) -> Result<Matching> {
    gen_general_odd_seeded(n, 0)
}

pub fn gen_general_odd_seeded(n: usize, seed: u64) -> Result<Matching> {
    let black = gen_random_matching(n, seed, Flavor::General)?;
    let region = Region::around(&black);
    let (_, sub) = extend(&black, &region, &ExtensionDirective::both_in_order(black.segments()))?;
    for attempt in 0..24u32 {
        // gap left at every blue end, as a fraction of the wall length
        let frac = Scalar::ratio(1, 1i64 << (4 + attempt / 3));
        let mut pts = Vec::new();
        let mut pairs = Vec::new();
        for w in &sub.walls {
            let d = w.end.sub(&w.start);
            pts.push(w.start.along(&d, &frac));
            pts.push(w.start.along(&d, &(Scalar::one() - frac.clone())));
            pairs.push((pts.len() - 2, pts.len() - 1));
        }
        let blue = pts.len();
        for cell in &sub.cells {
            let vs = cell.vertices();
            // positive weights keep the centre strictly inside the cell
            let weights: Vec<i64> = (0..vs.len()).map(|i| 1 + ((i as u32 + attempt) % 3) as i64).collect();
            let total = Scalar::from(weights.iter().sum::<i64>());
            let mut c = Coord::new(0, 0);
            for (v, w) in vs.iter().zip(&weights) {
                c = c.add(&v.scale(&Scalar::from(*w)));
            }
            let center = c.scale(&(Scalar::one() / total));
            let toward = vs[attempt as usize % vs.len()].sub(&center);
            let half = toward.scale(&(&frac / &Scalar::from(4)));
            pts.push(center.sub(&half));
            pts.push(center.add(&half));
            pairs.push((pts.len() - 2, pts.len() - 1));
        }
        let Ok(m) = build(pts, &pairs) else { continue };
        let red: Vec<usize> = (blue..m.base().len()).collect();
        if visibility_graph(&m, true).is_independent(&red) {
            return Ok(m);
        }
    }
    Err(Error::GenerationFailed("red vertices stayed mutually visible".into()))
}

/// Red (region) vertices of a `gen_general_odd` instance with `n` black
/// segments: the last `2n + 2` points.
pub fn general_odd_red_vertices(m: &Matching, n: usize) -> Vec<usize> {
    let total = m.base().len();
    (total - (2 * n + 2)..total).collect()
}

/// Whether every segment has an endpoint on the hull boundary.
pub fn is_convex_hull_connected(m: &Matching) -> bool {
    let ids: Vec<usize> = m.vertex_ids().into_iter().collect();
    match crate::geom::convex_hull_of(m.base(), &ids) {
        Ok(h) => m.segments().all(|s: Segment| h.contains_id(s.a) || h.contains_id(s.b)),
        Err(_) => m.len() == 1,
    }
}
