//! Numerical certification of the walk theorems: transport suppression at
//! `alpha = pi/2`, the two mirror symmetries in `alpha`, stationarity of
//! symmetric graphs and the cancellation of bidirected edges.
//!
//! Every check produces a [`PropertyReport`] whose instance string is enough to
//! rerun the check (see [`replay`]).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{bipartition, CirculantSpec, DirectedGraph};
use crate::operator::{CouplingSeries, Phase};
use crate::walk::{run_walk, InitialState, Substrate, TimeGrid, WalkResult};

/// Exact-zero statements (suppression, stationarity).
pub const EXACT_TOL: f64 = 1e-10;
/// Statements routed through two spectral evaluations.
pub const TWO_ROUTE_TOL: f64 = 1e-9;

pub type HarnessRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> HarnessRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Precondition not met; nothing was measured.
    Rejected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Rejected => "rejected",
        })
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(Self::Pass),
            "fail" => Ok(Self::Fail),
            "rejected" => Ok(Self::Rejected),
            other => Err(Error::Parse {
                line: 1,
                message: format!("unknown verdict {other:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub property: String,
    pub instance: String,
    pub deviation: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl PropertyReport {
    pub fn measured(property: &str, instance: String, deviation: f64, tolerance: f64) -> Self {
        let verdict = if deviation <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            property: property.to_string(),
            instance,
            deviation,
            tolerance,
            verdict,
        }
    }

    pub fn rejected(property: &str, instance: String, tolerance: f64) -> Self {
        Self {
            property: property.to_string(),
            instance,
            deviation: f64::NAN,
            tolerance,
            verdict: Verdict::Rejected,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// `property,instance,deviation,tolerance,verdict`.
    pub fn to_record(&self) -> String {
        format!(
            "{},{},{:e},{:e},{}",
            self.property,
            self.instance.replace(',', ";"),
            self.deviation,
            self.tolerance,
            self.verdict
        )
    }

    pub fn parse_record(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        let bad = |message: String| Error::Parse { line: 1, message };
        if fields.len() != 5 {
            return Err(bad(format!("expected 5 fields, got {}", fields.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| bad(format!("bad number {s:?}: {e}")))
        };
        Ok(Self {
            property: fields[0].to_string(),
            instance: fields[1].to_string(),
            deviation: num(fields[2])?,
            tolerance: num(fields[3])?,
            verdict: fields[4].parse()?,
        })
    }
}

/// Which partition a suppression check measures against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionRule {
    /// The graph itself must be bipartite.
    Strict,
    /// Bidirected pairs are dropped before two-colouring; valid because they
    /// cancel from `A_H(pi/2) = i(A - A^T)`.
    IgnoreBidirected,
}

/// Starting nodes for a walk-based check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Node(usize),
    /// Every node of the even partition (suppression only).
    Partition,
}

/// Everything needed to rerun a check.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: DirectedGraph,
    pub graph2: Option<DirectedGraph>,
    pub series: CouplingSeries,
    pub grid: TimeGrid,
    pub start: Start,
    pub deltas: Vec<f64>,
    pub rule: PartitionRule,
}

impl Instance {
    pub fn new(graph: DirectedGraph, series: CouplingSeries, grid: TimeGrid, start: Start) -> Self {
        Self {
            graph,
            graph2: None,
            series,
            grid,
            start,
            deltas: Vec::new(),
            rule: PartitionRule::Strict,
        }
    }
}

fn graph_token(g: &DirectedGraph) -> String {
    match g.circulant_spec() {
        Some(c) => format!(
            "circ:{}",
            c.coefficients()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ),
        None => {
            let edges: Vec<String> = g.edges().map(|(i, j)| format!("{i}>{j}")).collect();
            format!("edges:{}:{}", g.node_count(), edges.join(" "))
        }
    }
}

fn parse_graph_token(s: &str) -> Result<DirectedGraph> {
    let bad = |m: String| Error::Parse {
        line: 1,
        message: m,
    };
    if let Some(rest) = s.strip_prefix("circ:") {
        let coeffs = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| bad(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        return CirculantSpec::new(coeffs)?.to_graph();
    }
    let rest = s
        .strip_prefix("edges:")
        .ok_or_else(|| bad(format!("bad graph {s:?}")))?;
    let (n, list) = rest
        .split_once(':')
        .ok_or_else(|| bad(format!("bad graph {s:?}")))?;
    let n = n
        .parse::<usize>()
        .map_err(|e| bad(format!("bad node count: {e}")))?;
    let edges = list
        .split_whitespace()
        .map(|e| {
            let (i, j) = e
                .split_once('>')
                .ok_or_else(|| bad(format!("bad edge {e:?}")))?;
            let i = i.parse::<usize>().map_err(|x| bad(x.to_string()))?;
            let j = j.parse::<usize>().map_err(|x| bad(x.to_string()))?;
            Ok((i, j))
        })
        .collect::<Result<Vec<_>>>()?;
    DirectedGraph::new(n, edges)
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph={}", graph_token(&self.graph))?;
        if let Some(g2) = &self.graph2 {
            write!(f, ";graph2={}", graph_token(g2))?;
        }
        write!(f, ";series={};grid={}", self.series, self.grid)?;
        match self.start {
            Start::Node(i) => write!(f, ";start={i}")?,
            Start::Partition => write!(f, ";start=partition")?,
        }
        if !self.deltas.is_empty() {
            let d: Vec<String> = self.deltas.iter().map(|x| x.to_string()).collect();
            write!(f, ";deltas={}", d.join(" "))?;
        }
        if self.rule == PartitionRule::IgnoreBidirected {
            write!(f, ";rule=ignore-bidirected")?;
        }
        Ok(())
    }
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse {
            line: 1,
            message: m,
        };
        let mut graph = None;
        let mut graph2 = None;
        let mut series = None;
        let mut grid = None;
        let mut start = Start::Partition;
        let mut deltas = Vec::new();
        let mut rule = PartitionRule::Strict;
        for part in s.split(';') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            match key {
                "graph" => graph = Some(parse_graph_token(value)?),
                "graph2" => graph2 = Some(parse_graph_token(value)?),
                "series" => series = Some(value.parse::<CouplingSeries>()?),
                "grid" => {
                    let p: Vec<&str> = value.split(':').collect();
                    if p.len() != 3 {
                        return Err(bad(format!("bad grid {value:?}")));
                    }
                    let f = |t: &str| t.parse::<f64>().map_err(|e| bad(e.to_string()));
                    let steps = p[2].parse::<usize>().map_err(|e| bad(e.to_string()))?;
                    grid = Some(TimeGrid::new(f(p[0])?, f(p[1])?, steps)?);
                }
                "start" => {
                    start = match value {
                        "partition" => Start::Partition,
                        v => Start::Node(v.parse().map_err(|e| bad(format!("bad start: {e}")))?),
                    }
                }
                "deltas" => {
                    deltas = value
                        .split_whitespace()
                        .map(|t| t.parse::<f64>().map_err(|e| bad(e.to_string())))
                        .collect::<Result<_>>()?
                }
                "rule" => {
                    rule = match value {
                        "ignore-bidirected" => PartitionRule::IgnoreBidirected,
                        "strict" => PartitionRule::Strict,
                        v => return Err(bad(format!("unknown rule {v:?}"))),
                    }
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(Self {
            graph: graph.ok_or_else(|| bad("missing graph".into()))?,
            graph2,
            series: series.ok_or_else(|| bad("missing series".into()))?,
            grid: grid.ok_or_else(|| bad("missing grid".into()))?,
            start,
            deltas,
            rule,
        })
    }
}

pub const SUPPRESSION: &str = "suppression";
pub const MIRROR_ZERO: &str = "mirror-zero";
pub const MIRROR_HALF_PI: &str = "mirror-half-pi";
pub const PERIOD_PI: &str = "period-pi";
pub const STATIONARY: &str = "stationary";
pub const CANCELLATION: &str = "cancellation";

fn localized(g: &DirectedGraph, start: Start) -> Result<InitialState> {
    match start {
        Start::Node(i) => InitialState::localized(g.node_count(), i),
        Start::Partition => InitialState::localized(g.node_count(), 0),
    }
}

/// Walks at `alpha = pi/2` from every node of the even partition and reports
/// the largest total probability found in the other partition.
pub fn check_transport_suppression(
    g: &DirectedGraph,
    series: &CouplingSeries,
    grid: &TimeGrid,
    rule: PartitionRule,
) -> Result<PropertyReport> {
    let mut inst = Instance::new(g.clone(), series.clone(), *grid, Start::Partition);
    inst.rule = rule;
    let partition = match rule {
        PartitionRule::Strict => bipartition(g),
        PartitionRule::IgnoreBidirected => bipartition(&g.without_bidirected()),
    }
    .ok_or_else(|| Error::Precondition(format!("{g} has no bipartition under {rule:?}")))?;

    let propagator = Substrate::auto(g).propagator(Phase::HALF_PI, series)?;
    let sides = partition.sides();
    let mut worst = 0.0_f64;
    for t in grid.times() {
        let u = propagator.operator(t);
        for &j in &partition.partition_even {
            let leaked: f64 = (0..g.node_count())
                .filter(|&i| sides[i])
                .map(|i| u[(i, j)].norm_sqr())
                .sum();
            worst = worst.max(leaked);
        }
    }
    Ok(PropertyReport::measured(
        SUPPRESSION,
        inst.to_string(),
        worst,
        EXACT_TOL,
    ))
}

/// Reports for the mirror symmetry around 0, around pi/2, and the implied
/// period of pi.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorReports {
    pub around_zero: PropertyReport,
    pub around_half_pi: PropertyReport,
    pub period_pi: PropertyReport,
}

impl MirrorReports {
    pub fn all(&self) -> [&PropertyReport; 3] {
        [&self.around_zero, &self.around_half_pi, &self.period_pi]
    }
}

fn walk_at(
    g: &DirectedGraph,
    alpha: f64,
    series: &CouplingSeries,
    psi: &InitialState,
    grid: &TimeGrid,
) -> Result<WalkResult> {
    run_walk(Substrate::auto(g), Phase::new(alpha)?, series, psi, grid)
}

/// `P_a = P_{-a}` for every graph; `P_{pi/2+d} = P_{pi/2-d}` and `P_a = P_{a+pi}`
/// for bipartite circulants started on one index parity.
pub fn check_mirror_symmetries(
    g: &DirectedGraph,
    series: &CouplingSeries,
    start: usize,
    grid: &TimeGrid,
    deltas: &[f64],
) -> Result<MirrorReports> {
    let mut inst = Instance::new(g.clone(), series.clone(), *grid, Start::Node(start));
    inst.deltas = deltas.to_vec();
    let instance = inst.to_string();
    let psi = localized(g, Start::Node(start))?;

    let mut zero_dev = 0.0_f64;
    for &d in deltas {
        for alpha in [d, PI / 2.0 + d] {
            let a = walk_at(g, alpha, series, &psi, grid)?;
            let b = walk_at(g, -alpha, series, &psi, grid)?;
            zero_dev = zero_dev.max(a.max_probability_deviation(&b));
        }
    }
    let around_zero =
        PropertyReport::measured(MIRROR_ZERO, instance.clone(), zero_dev, TWO_ROUTE_TOL);

    let eligible = g
        .circulant_spec()
        .is_some_and(CirculantSpec::is_bipartite_form)
        && psi.index_parity().is_some();
    let (around_half_pi, period_pi) = if eligible {
        let mut half_dev = 0.0_f64;
        let mut period_dev = 0.0_f64;
        for &d in deltas {
            let plus = walk_at(g, PI / 2.0 + d, series, &psi, grid)?;
            let minus = walk_at(g, PI / 2.0 - d, series, &psi, grid)?;
            half_dev = half_dev.max(plus.max_probability_deviation(&minus));
            let base = walk_at(g, d, series, &psi, grid)?;
            let shifted = walk_at(g, d + PI, series, &psi, grid)?;
            period_dev = period_dev.max(base.max_probability_deviation(&shifted));
        }
        (
            PropertyReport::measured(MIRROR_HALF_PI, instance.clone(), half_dev, TWO_ROUTE_TOL),
            PropertyReport::measured(PERIOD_PI, instance, period_dev, TWO_ROUTE_TOL),
        )
    } else {
        (
            PropertyReport::rejected(MIRROR_HALF_PI, instance.clone(), TWO_ROUTE_TOL),
            PropertyReport::rejected(PERIOD_PI, instance, TWO_ROUTE_TOL),
        )
    };
    Ok(MirrorReports {
        around_zero,
        around_half_pi,
        period_pi,
    })
}

/// `max_{t,i} |P(i,t) - P(i,0)|` at `alpha = pi/2` for a symmetric graph.
pub fn check_stationary_at_half_pi(
    g: &DirectedGraph,
    series: &CouplingSeries,
    start: usize,
    grid: &TimeGrid,
) -> Result<PropertyReport> {
    if !g.is_symmetric() {
        return Err(Error::Precondition(format!("{g} is not symmetric")));
    }
    let inst = Instance::new(g.clone(), series.clone(), *grid, Start::Node(start));
    let psi = localized(g, Start::Node(start))?;
    let r = walk_at(g, PI / 2.0, series, &psi, grid)?;
    let initial = psi.amplitudes().map(|z| z.norm_sqr());
    let mut dev = 0.0_f64;
    for s in 0..r.steps() {
        for i in 0..r.node_count() {
            dev = dev.max((r.probability(s, i) - initial[i]).abs());
        }
    }
    Ok(PropertyReport::measured(
        STATIONARY,
        inst.to_string(),
        dev,
        EXACT_TOL,
    ))
}

/// Walks on two graphs that differ only by bidirected pairs coincide at pi/2.
pub fn check_bidirected_edge_cancellation(
    g1: &DirectedGraph,
    g2: &DirectedGraph,
    series: &CouplingSeries,
    start: usize,
    grid: &TimeGrid,
) -> Result<PropertyReport> {
    if !g1.differs_only_by_bidirected(g2) {
        return Err(Error::Precondition(
            "graphs differ by at least one one-directional edge".into(),
        ));
    }
    let mut inst = Instance::new(g1.clone(), series.clone(), *grid, Start::Node(start));
    inst.graph2 = Some(g2.clone());
    let psi = localized(g1, Start::Node(start))?;
    let a = walk_at(g1, PI / 2.0, series, &psi, grid)?;
    let b = walk_at(g2, PI / 2.0, series, &psi, grid)?;
    Ok(PropertyReport::measured(
        CANCELLATION,
        inst.to_string(),
        a.max_probability_deviation(&b),
        TWO_ROUTE_TOL,
    ))
}

/// Reruns a check from its stored property name and instance string.
pub fn replay(property: &str, instance: &str) -> Result<PropertyReport> {
    let inst: Instance = instance.parse()?;
    let node = match inst.start {
        Start::Node(i) => i,
        Start::Partition => 0,
    };
    match property {
        SUPPRESSION => {
            check_transport_suppression(&inst.graph, &inst.series, &inst.grid, inst.rule)
        }
        MIRROR_ZERO | MIRROR_HALF_PI | PERIOD_PI => {
            let r =
                check_mirror_symmetries(&inst.graph, &inst.series, node, &inst.grid, &inst.deltas)?;
            Ok(match property {
                MIRROR_ZERO => r.around_zero,
                MIRROR_HALF_PI => r.around_half_pi,
                _ => r.period_pi,
            })
        }
        STATIONARY => check_stationary_at_half_pi(&inst.graph, &inst.series, node, &inst.grid),
        CANCELLATION => {
            let g2 = inst.graph2.as_ref().ok_or_else(|| Error::Parse {
                line: 1,
                message: "cancellation instance needs graph2".into(),
            })?;
            check_bidirected_edge_cancellation(&inst.graph, g2, &inst.series, node, &inst.grid)
        }
        other => Err(Error::Parse {
            line: 1,
            message: format!("unknown property {other:?}"),
        }),
    }
}

/// Random weakly connected bipartite digraph on `n >= 2` nodes: a uniformly
/// sized, randomly labelled partition with each cross edge present in each
/// direction with probability 1/2. Disconnected draws are rejected.
pub fn random_bipartite_graph<R: Rng>(rng: &mut R, n: usize) -> Result<DirectedGraph> {
    if n < 2 {
        return Err(Error::InvalidSize {
            family: "random bipartite graph",
            requirement: "n >= 2",
            n,
        });
    }
    loop {
        let p = rng.random_range(1..n);
        let mut labels: Vec<usize> = (0..n).collect();
        labels.shuffle(rng);
        let (left, right) = labels.split_at(p);
        let mut edges = Vec::new();
        for &a in left {
            for &b in right {
                if rng.random_bool(0.5) {
                    edges.push((a, b));
                }
                if rng.random_bool(0.5) {
                    edges.push((b, a));
                }
            }
        }
        let g = DirectedGraph::new(n, edges)?;
        if g.is_weakly_connected() {
            return Ok(g);
        }
    }
}

/// Random digraph with each ordered pair present with probability `density`.
pub fn random_directed_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Result<DirectedGraph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(density) {
                edges.push((i, j));
            }
        }
    }
    DirectedGraph::new(n, edges)
}

/// Real polynomial of degree `1..=max_degree` with coefficients in `[-1, 1]`.
pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> CouplingSeries {
    let degree = rng.random_range(1..=max_degree.max(1));
    CouplingSeries::Polynomial((0..=degree).map(|_| rng.random_range(-1.0..=1.0)).collect())
}
