//! JSON run configuration.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use dqwalk::render::Scale;
use dqwalk::{
    build_moebius_ladder, build_ring, build_star, CirculantSpec, CouplingSeries, DirectedGraph,
    Phase, TimeGrid,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Config problem, with the line it was found on when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

/// An angle in radians that remembers how it was written.
#[derive(Debug, Clone, PartialEq)]
pub struct Angle {
    pub token: String,
    pub radians: f64,
}

impl Angle {
    /// Accepts `pi`, `-pi/2`, `3pi/4`, `2*pi/3` and plain numbers.
    pub fn parse(token: &str) -> Result<Self, String> {
        let t: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || {
            format!("invalid angle {token:?}; expected a number or a multiple of pi such as pi/2")
        };
        let radians = if let Some(at) = t.find("pi") {
            let (coef, rest) = (&t[..at], &t[at + 2..]);
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let factor = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let divisor = match rest {
                "" => 1.0,
                r => r
                    .strip_prefix('/')
                    .and_then(|d| d.parse::<f64>().ok())
                    .filter(|d| *d != 0.0)
                    .ok_or_else(bad)?,
            };
            factor * PI / divisor
        } else {
            t.parse::<f64>().map_err(|_| bad())?
        };
        if !radians.is_finite() {
            return Err(bad());
        }
        Ok(Self {
            token: token.to_string(),
            radians,
        })
    }

    pub fn phase(&self) -> Phase {
        Phase::new(self.radians).expect("validated at parse time")
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct AngleVisitor;
        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an angle in radians or a token such as \"pi/2\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                Angle::parse(v).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Angle::parse(&v.to_string()).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                self.visit_f64(v as f64)
            }
        }
        d.deserialize_any(AngleVisitor)
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.token)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Star,
    Ring,
    Moebius,
    EdgeList,
    Circulant,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GraphBlock {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Stars and rings: one-directional edges. Moebius: directed outer ring.
    #[serde(default = "yes")]
    pub directed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
}

impl GraphBlock {
    pub fn build(&self, base: &Path) -> Result<DirectedGraph, String> {
        let size = || {
            self.size
                .ok_or_else(|| format!("graph family {:?} needs \"size\"", self.family))
        };
        let g = match self.family {
            Family::Star => build_star(size()?, self.directed),
            Family::Ring => build_ring(size()?, self.directed),
            Family::Moebius => build_moebius_ladder(size()?, self.directed),
            Family::Circulant => {
                let coeffs = self
                    .coefficients
                    .clone()
                    .ok_or("circulant graph needs \"coefficients\" (first row)")?;
                if self.size.is_some_and(|n| n != coeffs.len()) {
                    return Err(format!(
                        "size {} disagrees with {} coefficients",
                        self.size.unwrap_or_default(),
                        coeffs.len()
                    ));
                }
                CirculantSpec::new(coeffs).and_then(|c| c.to_graph())
            }
            Family::EdgeList => {
                let rel = self.path.as_ref().ok_or("edge-list graph needs \"path\"")?;
                let path = base.join(rel);
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let g = DirectedGraph::parse_edge_list(&text)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                if let Some(n) = self.size.filter(|&n| n != g.node_count()) {
                    return Err(format!(
                        "size {n} disagrees with edge list ({} nodes)",
                        g.node_count()
                    ));
                }
                Ok(g)
            }
        };
        g.map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    #[default]
    Exp,
    Sinh,
    Cosh,
    Identity,
    Polynomial,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingBlock {
    #[serde(default)]
    pub kind: CouplingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<f64>>,
}

impl CouplingBlock {
    pub fn series(&self) -> Result<CouplingSeries, String> {
        if self.kind != CouplingKind::Polynomial && self.coefficients.is_some() {
            return Err(format!(
                "coupling kind {:?} takes no coefficients",
                self.kind
            ));
        }
        Ok(match self.kind {
            CouplingKind::Exp => CouplingSeries::Exp,
            CouplingKind::Sinh => CouplingSeries::Sinh,
            CouplingKind::Cosh => CouplingSeries::Cosh,
            CouplingKind::Identity => CouplingSeries::Identity,
            CouplingKind::Polynomial => {
                let c = self
                    .coefficients
                    .clone()
                    .ok_or("polynomial coupling needs \"coefficients\"")?;
                CouplingSeries::polynomial(c).map_err(|e| e.to_string())?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TimeBlock {
    #[serde(default)]
    pub start: f64,
    #[serde(default = "TimeBlock::default_end")]
    pub end: f64,
    #[serde(default = "TimeBlock::default_steps")]
    pub steps: usize,
}

impl TimeBlock {
    fn default_end() -> f64 {
        TimeGrid::default().t_end
    }

    fn default_steps() -> usize {
        TimeGrid::default().steps
    }
}

impl Default for TimeBlock {
    fn default() -> Self {
        let g = TimeGrid::default();
        Self {
            start: g.t_start,
            end: g.t_end,
            steps: g.steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleName {
    #[default]
    Linear,
    Log,
}

impl From<ScaleName> for Scale {
    fn from(s: ScaleName) -> Self {
        match s {
            ScaleName::Linear => Scale::Linear,
            ScaleName::Log => Scale::Log,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "OutputBlock::default_csv")]
    pub csv: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heatmap: Option<PathBuf>,
    #[serde(default = "OutputBlock::default_report")]
    pub report: PathBuf,
    #[serde(default)]
    pub amplitudes: bool,
    #[serde(default)]
    pub scale: ScaleName,
}

impl OutputBlock {
    fn default_csv() -> PathBuf {
        "walk.csv".into()
    }

    fn default_report() -> PathBuf {
        "report.txt".into()
    }
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            csv: Self::default_csv(),
            heatmap: None,
            report: Self::default_report(),
            amplitudes: false,
            scale: ScaleName::Linear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropertyName {
    /// Strict bipartite suppression at pi/2.
    Suppression,
    /// Suppression with bidirected pairs ignored when partitioning.
    SuppressionRelaxed,
    Mirror,
    Stationary,
    Cancellation,
}

fn default_deltas() -> Vec<Angle> {
    ["0.1", "0.5", "1.0"]
        .iter()
        .map(|t| Angle::parse(t).unwrap())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    pub properties: Vec<PropertyName>,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<Angle>,
    /// Graphs to certify; defaults to the top-level graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graphs: Option<Vec<GraphBlock>>,
    /// Partner graph for the cancellation property.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<GraphBlock>,
    /// Extra seeded random bipartite graphs for the suppression properties.
    #[serde(default)]
    pub random_trials: usize,
}

fn default_alphas() -> Vec<Angle> {
    vec![Angle::parse("pi/4").unwrap()]
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphBlock,
    #[serde(default)]
    pub coupling: CouplingBlock,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<Angle>,
    #[serde(default)]
    pub time: TimeBlock,
    #[serde(default)]
    pub initial_node: usize,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
}

/// Everything a command needs, built and checked up front.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub graph: DirectedGraph,
    pub series: CouplingSeries,
    pub grid: TimeGrid,
    pub base: PathBuf,
}

/// 1-based line of the first occurrence of `"key"` in the source.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError {
            line: Some(e.line()),
            message: e.to_string(),
        })
    }

    /// Builds the graph, coupling and grid; `base` resolves relative paths.
    pub fn resolve(self, text: &str, base: &Path) -> Result<Resolved, ConfigError> {
        let at = |key: &str, message: String| ConfigError {
            line: line_of(text, key),
            message,
        };
        let graph = self.graph.build(base).map_err(|m| at("graph", m))?;
        let series = self.coupling.series().map_err(|m| at("coupling", m))?;
        let grid = TimeGrid::new(self.time.start, self.time.end, self.time.steps)
            .map_err(|e| at("time", e.to_string()))?;
        if self.alphas.is_empty() {
            return Err(at("alphas", "alphas must not be empty".into()));
        }
        if self.initial_node >= graph.node_count() {
            return Err(at(
                "initial_node",
                format!(
                    "initial_node {} out of range for {} nodes",
                    self.initial_node,
                    graph.node_count()
                ),
            ));
        }
        if let Some(v) = &self.verify {
            if v.properties.is_empty() {
                return Err(at(
                    "properties",
                    "verify needs at least one property".into(),
                ));
            }
            if v.properties.contains(&PropertyName::Cancellation) && v.compare.is_none() {
                return Err(at(
                    "verify",
                    "cancellation needs a \"compare\" graph".into(),
                ));
            }
            for g in v.graphs.iter().flatten().chain(&v.compare) {
                g.build(base).map_err(|m| at("verify", m))?;
            }
        }
        Ok(Resolved {
            config: self,
            graph,
            series,
            grid,
            base: base.to_path_buf(),
        })
    }
}

impl Resolved {
    /// Header echoed into every artifact.
    pub fn echo(&self, seed: u64) -> String {
        let json = serde_json::to_string(&self.config).expect("config serializes");
        format!(
            "dqwalk {}\nconfig: {json}\nseed: {seed}",
            env!("CARGO_PKG_VERSION")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_tokens() {
        let cases = [
            ("pi", PI),
            ("pi/2", PI / 2.0),
            ("-pi/4", -PI / 4.0),
            ("3pi/4", 3.0 * PI / 4.0),
            ("2*pi/3", 2.0 * PI / 3.0),
            ("0.3", 0.3),
            ("-1e-2", -0.01),
        ];
        for (t, want) in cases {
            assert_eq!(Angle::parse(t).unwrap().radians, want, "{t}");
        }
        for t in ["pie", "pi/0", "pi/x", "", "inf", "tau"] {
            assert!(Angle::parse(t).is_err(), "{t}");
        }
    }

    #[test]
    fn parses_minimal_and_rejects_unknown_keys() {
        let c = RunConfig::parse(r#"{"graph": {"family": "ring", "size": 8}}"#).unwrap();
        assert_eq!(c.alphas[0].radians, PI / 4.0);
        assert!(c.graph.directed);
        let err =
            RunConfig::parse("{\n\"graph\": {\"family\": \"ring\", \"size\": 8},\n\"colour\": 1}")
                .unwrap_err();
        assert_eq!(err.line, Some(3));
        let err = RunConfig::parse("{\"graph\": {\"family\": \"ring\"},\n\"alphas\": [\"pi/q\"]}")
            .unwrap_err();
        assert_eq!(err.line, Some(2));
    }

    #[test]
    fn semantic_errors_point_at_block() {
        let text = "{\n  \"graph\": {\"family\": \"ring\", \"size\": 2}\n}";
        let err = RunConfig::parse(text)
            .unwrap()
            .resolve(text, Path::new("."))
            .unwrap_err();
        assert_eq!(err.line, Some(2));
        let text = "{\n  \"graph\": {\"family\": \"star\", \"size\": 2},\n  \"initial_node\": 3\n}";
        let err = RunConfig::parse(text)
            .unwrap()
            .resolve(text, Path::new("."))
            .unwrap_err();
        assert_eq!(err.line, Some(3));
    }
}
