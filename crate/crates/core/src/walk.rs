//! Walk execution: initial states, time grids, probability fields and sweeps.

use std::fmt;

use nalgebra::{DMatrix, DVector};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{CirculantSpec, DirectedGraph};
use crate::operator::{
    assemble_hamiltonian, hermitian_eigendecomposition, CouplingSeries, EigenSystem,
    HermitianOperator, Phase,
};
use crate::spectral::CirculantPropagator;
use crate::C64;

pub const NORM_TOL: f64 = 1e-12;
pub const DEFAULT_ARRIVAL_THRESHOLD: f64 = 0.01;

/// Normalized state vector `psi(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    amplitudes: DVector<C64>,
}

impl InitialState {
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Unit amplitude on node `i0`.
    pub fn localized(n: usize, i0: usize) -> Result<Self> {
        if i0 >= n {
            return Err(Error::IndexOutOfRange { index: i0, len: n });
        }
        let mut amplitudes = DVector::zeros(n);
        amplitudes[i0] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn uniform(n: usize) -> Self {
        let a = 1.0 / (n as f64).sqrt();
        Self {
            amplitudes: DVector::from_element(n, C64::new(a, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// True when every amplitude outside `nodes` is exactly zero.
    pub fn is_supported_on(&self, nodes: &[usize]) -> bool {
        let mut inside = vec![false; self.dim()];
        for &i in nodes {
            if i < inside.len() {
                inside[i] = true;
            }
        }
        self.amplitudes
            .iter()
            .enumerate()
            .all(|(i, z)| inside[i] || *z == C64::new(0.0, 0.0))
    }

    /// Support restricted to nodes of a single index parity: `Some(0)` for
    /// even-index support, `Some(1)` for odd, `None` for mixed.
    pub fn index_parity(&self) -> Option<usize> {
        let zero = C64::new(0.0, 0.0);
        let evens = self.amplitudes.iter().step_by(2).any(|z| *z != zero);
        let odds = self
            .amplitudes
            .iter()
            .skip(1)
            .step_by(2)
            .any(|z| *z != zero);
        match (evens, odds) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        }
    }
}

/// Uniform grid from `t_start` to `t_end` inclusive, `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: 25.0,
            steps: 500,
        }
    }
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if t_start > t_end {
            return Err(Error::InvalidGrid(format!(
                "t_start {t_start} > t_end {t_end}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be positive".into()));
        }
        Ok(Self {
            t_start,
            t_end,
            steps,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.t_start];
        }
        let dt = (self.t_end - self.t_start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.t_end
                } else {
                    self.t_start + dt * k as f64
                }
            })
            .collect()
    }
}

impl fmt::Display for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.t_start, self.t_end, self.steps)
    }
}

/// Probability field `P(i, t)` with the amplitudes it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkResult {
    pub graph: String,
    pub alpha: Phase,
    pub times: Vec<f64>,
    /// Rows: time steps, columns: nodes.
    pub amplitudes: DMatrix<C64>,
    pub probabilities: DMatrix<f64>,
}

impl WalkResult {
    pub fn node_count(&self) -> usize {
        self.probabilities.ncols()
    }

    pub fn steps(&self) -> usize {
        self.times.len()
    }

    pub fn probability(&self, step: usize, node: usize) -> f64 {
        self.probabilities[(step, node)]
    }

    /// `max_t |sum_i P(i, t) - 1|`.
    pub fn normalization_defect(&self) -> f64 {
        self.probabilities
            .row_iter()
            .map(|row| (row.sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max |P_self - P_other|` over the common grid.
    pub fn max_probability_deviation(&self, other: &WalkResult) -> f64 {
        assert_eq!(self.probabilities.shape(), other.probabilities.shape());
        self.probabilities
            .iter()
            .zip(other.probabilities.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest probability found on any of `nodes` at any time.
    pub fn max_probability_on(&self, nodes: &[usize]) -> f64 {
        nodes
            .iter()
            .flat_map(|&i| {
                self.probabilities
                    .column(i)
                    .iter()
                    .copied()
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    /// CSV with header `t,node,probability` (plus `re,im` when requested),
    /// numbers at 17 significant digits. `comment` lines are emitted first,
    /// each prefixed with `# `.
    pub fn to_csv(&self, with_amplitudes: bool, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            for line in c.lines() {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push_str(if with_amplitudes {
            "t,node,probability,re,im\n"
        } else {
            "t,node,probability\n"
        });
        for (s, t) in self.times.iter().enumerate() {
            for i in 0..self.node_count() {
                out.push_str(&format!("{t:.16e},{i},{:.16e}", self.probabilities[(s, i)]));
                if with_amplitudes {
                    let z = self.amplitudes[(s, i)];
                    out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// `exp(-iHt) psi`, via whichever spectral representation is at hand.
#[derive(Debug, Clone)]
pub enum Propagator {
    Dense(EigenSystem),
    Circulant(CirculantPropagator),
}

impl Propagator {
    pub fn dense(h: &HermitianOperator) -> Result<Self> {
        Ok(Self::Dense(hermitian_eigendecomposition(h)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Dense(e) => e.dim(),
            Self::Circulant(c) => c.dim(),
        }
    }

    fn to_spectral(&self, psi: &DVector<C64>) -> DVector<C64> {
        match self {
            Self::Dense(e) => e.eigenvectors.ad_mul(psi),
            Self::Circulant(c) => c.to_fourier(psi),
        }
    }

    fn spectral_to_state(&self, coeffs: &DVector<C64>, t: f64) -> DVector<C64> {
        match self {
            Self::Dense(e) => {
                let phased = DVector::from_iterator(
                    coeffs.len(),
                    coeffs
                        .iter()
                        .zip(&e.eigenvalues)
                        .map(|(c, &l)| c * C64::from_polar(1.0, -l * t)),
                );
                &e.eigenvectors * phased
            }
            Self::Circulant(c) => c.evolve_fourier(coeffs, t),
        }
    }

    pub fn apply(&self, psi: &DVector<C64>, t: f64) -> DVector<C64> {
        self.spectral_to_state(&self.to_spectral(psi), t)
    }

    /// Full operator `U(t)`.
    pub fn operator(&self, t: f64) -> DMatrix<C64> {
        match self {
            Self::Dense(e) => {
                let w: Vec<C64> = e
                    .eigenvalues
                    .iter()
                    .map(|&l| C64::from_polar(1.0, -l * t))
                    .collect();
                e.reassemble(&w)
            }
            Self::Circulant(c) => c.evolution_operator(t),
        }
    }

    /// Amplitudes of `psi0` on every grid time, one row per time.
    pub fn amplitudes(&self, psi0: &InitialState, times: &[f64]) -> Result<DMatrix<C64>> {
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi0.dim(),
            });
        }
        let coeffs = self.to_spectral(psi0.amplitudes());
        // U(0) = I exactly, without the round trip through the eigenbasis
        let step = |t: &f64| {
            if *t == 0.0 {
                psi0.amplitudes().clone()
            } else {
                self.spectral_to_state(&coeffs, *t)
            }
        };
        #[cfg(feature = "parallel")]
        let rows: Vec<DVector<C64>> = times.par_iter().map(step).collect();
        #[cfg(not(feature = "parallel"))]
        let rows: Vec<DVector<C64>> = times.iter().map(step).collect();
        Ok(DMatrix::from_fn(times.len(), self.dim(), |s, i| rows[s][i]))
    }
}

/// `exp(-iHt) psi0` by spectral decomposition of `h`.
pub fn evolve(h: &HermitianOperator, psi0: &InitialState, t: f64) -> Result<DVector<C64>> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            actual: psi0.dim(),
        });
    }
    Ok(Propagator::dense(h)?.apply(psi0.amplitudes(), t))
}

/// What a walk runs on.
#[derive(Debug, Clone, Copy)]
pub enum Substrate<'a> {
    Graph(&'a DirectedGraph),
    Circulant(&'a CirculantSpec),
}

impl<'a> Substrate<'a> {
    /// Circulant path when the graph was built from a spec, dense otherwise.
    pub fn auto(g: &'a DirectedGraph) -> Self {
        match g.circulant_spec() {
            Some(c) => Self::Circulant(c),
            None => Self::Graph(g),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Self::Graph(g) => g.node_count(),
            Self::Circulant(c) => c.len(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Graph(g) => format!("graph n={} edges={}", g.node_count(), g.edge_count()),
            Self::Circulant(c) => format!("circulant [{}]", c.to_line()),
        }
    }

    pub fn propagator(&self, phase: Phase, series: &CouplingSeries) -> Result<Propagator> {
        match self {
            Self::Graph(g) => Propagator::dense(&assemble_hamiltonian(g, phase, series)?),
            Self::Circulant(c) => Ok(Propagator::Circulant(CirculantPropagator::new(
                c, phase, series,
            )?)),
        }
    }
}

impl<'a> From<&'a DirectedGraph> for Substrate<'a> {
    fn from(g: &'a DirectedGraph) -> Self {
        Self::Graph(g)
    }
}

impl<'a> From<&'a CirculantSpec> for Substrate<'a> {
    fn from(c: &'a CirculantSpec) -> Self {
        Self::Circulant(c)
    }
}

/// Runs a walk with a prebuilt propagator.
pub fn run_with(
    propagator: &Propagator,
    label: String,
    phase: Phase,
    psi0: &InitialState,
    grid: &TimeGrid,
) -> Result<WalkResult> {
    let times = grid.times();
    let amplitudes = propagator.amplitudes(psi0, &times)?;
    let probabilities = amplitudes.map(|z| z.norm_sqr());
    Ok(WalkResult {
        graph: label,
        alpha: phase,
        times,
        amplitudes,
        probabilities,
    })
}

/// `P(i, t) = |<i| exp(-iHt) |psi0>|^2` on the grid.
pub fn run_walk(
    substrate: Substrate<'_>,
    phase: Phase,
    series: &CouplingSeries,
    psi0: &InitialState,
    grid: &TimeGrid,
) -> Result<WalkResult> {
    let propagator = substrate.propagator(phase, series)?;
    run_with(&propagator, substrate.describe(), phase, psi0, grid)
}

/// One independent walk per phase, in the order given.
pub fn sweep_alpha(
    substrate: Substrate<'_>,
    series: &CouplingSeries,
    psi0: &InitialState,
    grid: &TimeGrid,
    alphas: &[Phase],
) -> Result<Vec<WalkResult>> {
    let one = |&alpha: &Phase| run_walk(substrate, alpha, series, psi0, grid);
    #[cfg(feature = "parallel")]
    let out = alphas.par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let out = alphas.iter().map(one).collect();
    out
}

/// First grid time with `P(node, t) >= threshold`.
pub fn arrival_time(result: &WalkResult, node: usize, threshold: f64) -> Option<f64> {
    if node >= result.node_count() {
        return None;
    }
    result
        .times
        .iter()
        .enumerate()
        .find(|&(s, _)| result.probabilities[(s, node)] >= threshold)
        .map(|(_, &t)| t)
}
