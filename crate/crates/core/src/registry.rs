//! Named strategies: each pipeline behind one trait, picked at runtime.

use std::collections::BTreeMap;

use crate::algorithms::chc::chc_disjoint_matching;
use crate::algorithms::crossings::crossings_matchings;
use crate::algorithms::four_fifths::{four_fifths_matching, guarantee};
use crate::algorithms::hv::{hv_disjoint_matching, ColoredDual};
use crate::algorithms::transform::{ceil_log2, transform, TransformationSequence};
use crate::algorithms::two_trees::{two_trees_search, TwoTreesOutcome};
use crate::error::{Error, Result};
use crate::geom::{compatible, disjoint, Matching};
use crate::oracle::{
    graph_perfect_matching_exists, has_disjoint_compatible_pm, transformation_distance, visibility_graph, CATALOG_LIMIT,
    DISTANCE_LIMIT, GRAPH_LIMIT,
};
use crate::orientation::count_odd_components;
use crate::subdivision::Color;

#[derive(Clone, Debug)]
pub struct RunInput {
    pub matchings: Vec<Matching>,
    /// Order budget for searches.
    pub max_orders: usize,
    pub seed: u64,
}

impl RunInput {
    pub fn single(m: Matching) -> Self {
        RunInput { matchings: vec![m], max_orders: 720, seed: 0 }
    }

    pub fn primary(&self) -> &Matching {
        &self.matchings[0]
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    /// `key: value` lines for the report.
    pub summary: Vec<(String, String)>,
    /// Output matchings with a file-name label.
    pub matchings: Vec<(String, Matching)>,
    pub sequence: Option<TransformationSequence>,
    pub colored: Option<ColoredDual>,
}

impl RunOutput {
    fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn matching(&self, label: &str) -> Option<&Matching> {
        self.matchings.iter().find(|(l, _)| l == label).map(|(_, m)| m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleCheck {
    Agreed(String),
    Skipped(String),
}

pub trait Strategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Number of input matchings.
    fn arity(&self) -> usize {
        1
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput>;
    /// Re-checks the output with the plain predicates.
    fn verify(&self, input: &RunInput, out: &RunOutput) -> Result<()>;
    /// Cross-check against exhaustive search when the instance is small.
    fn oracle(&self, _input: &RunInput, _out: &RunOutput) -> Result<OracleCheck> {
        Ok(OracleCheck::Skipped("no oracle for this strategy".into()))
    }
}

fn fail(what: impl Into<String>) -> Error {
    Error::Internal(format!("verification failed: {}", what.into()))
}

fn ensure(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(fail(what))
    }
}

fn need<'a>(out: &'a RunOutput, label: &str) -> Result<&'a Matching> {
    out.matching(label).ok_or_else(|| fail(format!("missing output `{label}`")))
}

fn disjoint_compatible(m: &Matching, out: &Matching) -> Result<()> {
    ensure(disjoint(m, out)?, "output shares a segment with the input")?;
    ensure(compatible(m, out)?, "output crosses the input")
}

/// The oracle must find a disjoint compatible perfect matching whenever the
/// strategy produced one.
fn oracle_existence(m: &Matching) -> Result<OracleCheck> {
    let size = m.vertex_ids().len();
    if size > CATALOG_LIMIT {
        return Ok(OracleCheck::Skipped(format!("{size} points exceed the catalog limit {CATALOG_LIMIT}")));
    }
    match has_disjoint_compatible_pm(m)? {
        Some(_) => Ok(OracleCheck::Agreed("exhaustive search also finds a disjoint compatible perfect matching".into())),
        None => Err(fail("oracle finds no disjoint compatible perfect matching")),
    }
}

struct Transform;

impl Strategy for Transform {
    fn name(&self) -> &'static str {
        "transform"
    }
    fn about(&self) -> &'static str {
        "transformation between two perfect matchings through the canonical matching"
    }
    fn arity(&self) -> usize {
        2
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput> {
        let (a, b) = (&input.matchings[0], &input.matchings[1]);
        let seq = transform(a, b)?;
        let mut out = RunOutput::default();
        out.note("n", a.len());
        out.note("length", seq.length());
        out.note("bound", 2 * ceil_log2(a.len()));
        out.sequence = Some(seq);
        Ok(out)
    }
    fn verify(&self, input: &RunInput, out: &RunOutput) -> Result<()> {
        let seq = out.sequence.as_ref().ok_or_else(|| fail("missing sequence"))?;
        seq.verify()?;
        ensure(seq.first() == &input.matchings[0] && seq.last() == &input.matchings[1], "sequence endpoints")?;
        ensure(seq.length() <= 2 * ceil_log2(input.primary().len()), "sequence longer than 2⌈log₂ n⌉")
    }
    fn oracle(&self, input: &RunInput, out: &RunOutput) -> Result<OracleCheck> {
        let size = input.primary().vertex_ids().len();
        if size > DISTANCE_LIMIT {
            return Ok(OracleCheck::Skipped(format!("{size} points exceed the distance limit {DISTANCE_LIMIT}")));
        }
        let d = transformation_distance(&input.matchings[0], &input.matchings[1])?;
        let len = out.sequence.as_ref().map_or(0, |s| s.length());
        ensure(d <= len, "shortest distance exceeds produced length")?;
        Ok(OracleCheck::Agreed(format!("shortest distance {d} ≤ produced length {len}")))
    }
}

struct Hv;

impl Strategy for Hv {
    fn name(&self) -> &'static str {
        "hv"
    }
    fn about(&self) -> &'static str {
        "disjoint compatible matching of horizontal and vertical segments via two spanning trees"
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput> {
        let (m, colored) = hv_disjoint_matching(input.primary())?;
        let mut out = RunOutput::default();
        out.note("n", input.primary().len());
        out.note("cells", colored.dual.vertex_count);
        out.note("output segments", m.len());
        out.matchings.push(("matching".into(), m));
        out.colored = Some(colored);
        Ok(out)
    }
    fn verify(&self, input: &RunInput, out: &RunOutput) -> Result<()> {
        let m = need(out, "matching")?;
        ensure(m.is_perfect(), "output is not perfect")?;
        disjoint_compatible(input.primary(), m)?;
        let c = out.colored.as_ref().ok_or_else(|| fail("missing dual"))?;
        ensure(c.dual.colored(Color::Red).is_spanning_tree(), "red subgraph is not a spanning tree")?;
        ensure(c.dual.colored(Color::Green).is_spanning_tree(), "green subgraph is not a spanning tree")?;
        ensure(c.segments_split(), "a segment has both dual edges in one tree")
    }
    fn oracle(&self, input: &RunInput, _out: &RunOutput) -> Result<OracleCheck> {
        oracle_existence(input.primary())
    }
}

struct Chc;

impl Strategy for Chc {
    fn name(&self) -> &'static str {
        "chc"
    }
    fn about(&self) -> &'static str {
        "disjoint compatible matching of a convex-hull-connected matching"
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput> {
        let m = chc_disjoint_matching(input.primary())?;
        let mut out = RunOutput::default();
        out.note("n", input.primary().len());
        out.note("output segments", m.len());
        out.matchings.push(("matching".into(), m));
        Ok(out)
    }
    fn verify(&self, input: &RunInput, out: &RunOutput) -> Result<()> {
        let m = need(out, "matching")?;
        ensure(m.is_perfect(), "output is not perfect")?;
        disjoint_compatible(input.primary(), m)
    }
    fn oracle(&self, input: &RunInput, _out: &RunOutput) -> Result<OracleCheck> {
        oracle_existence(input.primary())
    }
}

struct FourFifths;

impl Strategy for FourFifths {
    fn name(&self) -> &'static str {
        "four-fifths"
    }
    fn about(&self) -> &'static str {
        "disjoint compatible matching with at least ⌈(4n−1)/5⌉ segments"
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput> {
        let r = four_fifths_matching(input.primary())?;
        let mut out = RunOutput::default();
        out.note("n", r.n);
        out.note("guarantee", r.guarantee);
        out.note("achieved", r.achieved);
        out.note("odd components", r.odd_components);
        out.note("odd component bound holds", r.odd_component_bound_holds());
        out.note("removed edges", format!("{:?}", r.removed));
        out.matchings.push(("matching".into(), r.matching));
        out.colored = Some(r.colored);
        Ok(out)
    }
    fn verify(&self, input: &RunInput, out: &RunOutput) -> Result<()> {
        let m = need(out, "matching")?;
        let n = input.primary().len();
        disjoint_compatible(input.primary(), m)?;
        ensure(m.len() >= guarantee(n), "fewer segments than guaranteed")?;
        let c = out.colored.as_ref().ok_or_else(|| fail("missing dual"))?;
        ensure(c.dual.colored(Color::Blue).is_spanning_tree(), "blue subgraph is not a spanning tree")?;
        let f = count_odd_components(&c.dual.colored(Color::Red));
        ensure(2 * m.len() == 2 * n - f, "size differs from (2n − f)/2")
    }
    fn oracle(&self, input: &RunInput, out: &RunOutput) -> Result<OracleCheck> {
        let m = input.primary();
        let size = m.vertex_ids().len();
        if size > CATALOG_LIMIT {
            return Ok(OracleCheck::Skipped(format!("{size} points exceed the catalog limit {CATALOG_LIMIT}")));
        }
        let exists = has_disjoint_compatible_pm(m)?.is_some();
        let perfect = out.matching("matching").is_some_and(|x| x.len() == m.len());
        ensure(exists || !perfect, "perfect output where the oracle finds none")?;
        Ok(OracleCheck::Agreed(format!("disjoint compatible perfect matching exists: {exists}")))
    }
}

struct Crossings;

impl Strategy for Crossings {
    fn name(&self) -> &'static str {
        "crossings"
    }
    fn about(&self) -> &'static str {
        "matchings of the left and of the right endpoints, each non-crossing with the input"
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput> {
        let (l, r) = crossings_matchings(input.primary())?;
        let mut out = RunOutput::default();
        out.note("n", input.primary().len());
        out.note("left segments", l.len());
        out.note("right segments", r.len());
        out.matchings.push(("left".into(), l));
        out.matchings.push(("right".into(), r));
        Ok(out)
    }
    fn verify(&self, input: &RunInput, out: &RunOutput) -> Result<()> {
        let m = input.primary();
        let (l, r) = (need(out, "left")?, need(out, "right")?);
        ensure(compatible(m, l)? && compatible(m, r)?, "output crosses the input")?;
        ensure(l.len() + r.len() == m.len(), "left and right together are not perfect")?;
        let covered: std::collections::BTreeSet<_> = l.vertex_ids().union(&r.vertex_ids()).copied().collect();
        ensure(covered == m.vertex_ids(), "left and right do not cover every vertex")?;
        let vis = visibility_graph(m, true);
        ensure(l.segments().chain(r.segments()).all(|s| vis.has_edge(s.a, s.b)), "edge outside the visibility graph")
    }
    fn oracle(&self, input: &RunInput, _out: &RunOutput) -> Result<OracleCheck> {
        let m = input.primary();
        let size = m.vertex_ids().len();
        if size > GRAPH_LIMIT {
            return Ok(OracleCheck::Skipped(format!("{size} points exceed the graph limit {GRAPH_LIMIT}")));
        }
        ensure(graph_perfect_matching_exists(&visibility_graph(m, true))?, "visibility graph has no perfect matching")?;
        Ok(OracleCheck::Agreed("visibility graph minus E(M) has a perfect matching".into()))
    }
}

struct TwoTreesSearch;

impl Strategy for TwoTreesSearch {
    fn name(&self) -> &'static str {
        "two-trees-search"
    }
    fn about(&self) -> &'static str {
        "search extension orders for a dual that splits into two spanning trees"
    }
    fn run(&self, input: &RunInput) -> Result<RunOutput> {
        let mut out = RunOutput::default();
        out.note("n", input.primary().len());
        match two_trees_search(input.primary(), input.max_orders)? {
            TwoTreesOutcome::Found { witness, orders_tried } => {
                out.note("result", "found");
                out.note("orders tried", orders_tried);
                let order: Vec<String> = witness.order.iter().map(|s| s.to_string()).collect();
                out.note("order", order.join(" "));
                out.colored = Some(witness.colored);
            }
            TwoTreesOutcome::Exhausted { orders_tried, degenerate_orders } => {
                out.note("result", "exhausted");
                out.note("orders tried", orders_tried);
                out.note("degenerate orders", degenerate_orders);
            }
        }
        Ok(out)
    }
    fn verify(&self, _input: &RunInput, out: &RunOutput) -> Result<()> {
        let Some(c) = &out.colored else {
            return Ok(());
        };
        ensure(c.dual.colored(Color::Red).is_spanning_tree(), "first tree is not spanning")?;
        ensure(c.dual.colored(Color::Green).is_spanning_tree(), "second tree is not spanning")?;
        ensure(c.segments_split(), "a segment has both dual edges in one tree")
    }
}

/// Strategies by name.
pub struct Registry {
    strategies: BTreeMap<&'static str, Box<dyn Strategy>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry { strategies: BTreeMap::new() }
    }

    pub fn register(&mut self, s: Box<dyn Strategy>) {
        self.strategies.insert(s.name(), s);
    }

    pub fn builtin() -> Self {
        let mut r = Registry::empty();
        r.register(Box::new(Transform));
        r.register(Box::new(Hv));
        r.register(Box::new(Chc));
        r.register(Box::new(FourFifths));
        r.register(Box::new(Crossings));
        r.register(Box::new(TwoTreesSearch));
        r
    }

    pub fn get(&self, name: &str) -> Option<&dyn Strategy> {
        self.strategies.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Strategy> + '_ {
        self.strategies.values().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::generators::{gen_random_matching, gen_random_pair, Flavor};

    #[test]
    fn names() {
        let r = Registry::builtin();
        assert_eq!(
            r.names().collect::<Vec<_>>(),
            ["chc", "crossings", "four-fifths", "hv", "transform", "two-trees-search"]
        );
        assert!(r.get("nope").is_none());
        assert_eq!(r.get("transform").unwrap().arity(), 2);
    }

    fn run(name: &str, input: RunInput) -> RunOutput {
        let s = Registry::builtin();
        let s = s.get(name).unwrap();
        let out = s.run(&input).unwrap();
        s.verify(&input, &out).unwrap();
        assert!(matches!(s.oracle(&input, &out).unwrap(), OracleCheck::Agreed(_) | OracleCheck::Skipped(_)));
        out
    }

    #[test]
    fn every_strategy_runs_and_verifies() {
        let (a, b) = gen_random_pair(4, 3).unwrap();
        run("transform", RunInput { matchings: vec![a, b], max_orders: 1, seed: 3 });
        run("hv", RunInput::single(gen_random_matching(4, 3, Flavor::AxisParallel).unwrap()));
        run("chc", RunInput::single(gen_random_matching(4, 3, Flavor::Chc).unwrap()));
        let out = run("four-fifths", RunInput::single(gen_random_matching(10, 3, Flavor::General).unwrap()));
        assert!(out.summary.contains(&("guarantee".into(), "8".into())));
        run("crossings", RunInput::single(gen_random_matching(4, 3, Flavor::General).unwrap()));
        run("two-trees-search", RunInput::single(gen_random_matching(3, 3, Flavor::General).unwrap()));
    }

    #[test]
    fn tampered_output_fails_verification() {
        let input = RunInput::single(gen_random_matching(4, 5, Flavor::Chc).unwrap());
        let r = Registry::builtin();
        let s = r.get("chc").unwrap();
        let mut out = s.run(&input).unwrap();
        out.matchings[0].1 = input.primary().clone();
        assert!(s.verify(&input, &out).is_err());
    }
}
