//! Hermitian adjacency matrices, coupling series and walk Hamiltonians.
//!
//! Every matrix function is evaluated spectrally: the operator is
//! eigendecomposed once and the scalar function is applied to the eigenvalues.
//! Reassembly accumulates `sum_k f(l_k) v_k v_k^H` in a fixed order, which makes
//! the result exactly Hermitian in floating point.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::C64;

/// Hermiticity tolerance, relative to `max(1, max |M_ij|)`.
pub const HERMITICITY_TOL: f64 = 1e-12;

const EIGEN_MAX_SWEEPS_PER_DIM: usize = 200;

/// Single phase angle in radians. Never reduced implicitly.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);
    pub const HALF_PI: Phase = Phase(PI / 2.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() {
            Ok(Self(alpha))
        } else {
            Err(Error::Precondition(format!(
                "phase must be finite, got {alpha}"
            )))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn negated(self) -> Self {
        Self(-self.0)
    }

    pub fn shifted(self, delta: f64) -> Self {
        Self(self.0 + delta)
    }

    /// `alpha^+ = pi/2 + delta`.
    pub fn half_pi_plus(delta: f64) -> Self {
        Self(PI / 2.0 + delta)
    }

    /// `alpha^- = pi/2 - delta`.
    pub fn half_pi_minus(delta: f64) -> Self {
        Self(PI / 2.0 - delta)
    }

    /// Canonical representative in `[0, 2pi)`.
    pub fn reduced(self) -> Self {
        Self(self.0.rem_euclid(2.0 * PI))
    }
}

impl From<Phase> for f64 {
    fn from(p: Phase) -> f64 {
        p.0
    }
}

/// Dense complex matrix satisfying `M = M^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<C64>,
}

/// `max_ij |M_ij - conj(M_ji)|`.
pub fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut defect = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    defect
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

impl HermitianOperator {
    /// Checks the hermiticity defect, then replaces `M` by `(M + M^H) / 2`.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let defect = hermiticity_defect(&matrix);
        let tolerance = HERMITICITY_TOL * max_abs(&matrix).max(1.0);
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        let mut matrix = matrix;
        let n = matrix.nrows();
        for i in 0..n {
            matrix[(i, i)] = C64::new(matrix[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
                matrix[(i, j)] = avg;
                matrix[(j, i)] = avg.conj();
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| C64::new(x, 0.0)))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }

    /// Entrywise `max |self - other|`.
    pub fn max_deviation(&self, other: &HermitianOperator) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }

    /// Row-major dump, one row per line, `re,im` pairs separated by spaces,
    /// 17 significant digits.
    pub fn to_dump(&self) -> String {
        dump_matrix(&self.matrix)
    }

    pub fn parse_dump(text: &str) -> Result<Self> {
        Self::new(parse_matrix_dump(text)?)
    }
}

pub fn dump_matrix(m: &DMatrix<C64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e},{:.16e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix_dump(text: &str) -> Result<DMatrix<C64>> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|pair| {
                let (re, im) = pair.split_once(',').ok_or_else(|| Error::Parse {
                    line: k + 1,
                    message: format!("expected `re,im`, got {pair:?}"),
                })?;
                let parse = |s: &str| {
                    s.parse::<f64>().map_err(|e| Error::Parse {
                        line: k + 1,
                        message: format!("bad number {s:?}: {e}"),
                    })
                };
                Ok(C64::new(parse(re)?, parse(im)?))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: k + 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

/// Coupling function `J(x) = sum_n j_n x^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingSeries {
    /// Coefficients `(j_0, j_1, ...)`.
    Polynomial(Vec<f64>),
    Exp,
    Sinh,
    Cosh,
    Identity,
}

impl CouplingSeries {
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Precondition(
                "polynomial coefficients must be finite".into(),
            ));
        }
        Ok(Self::Polynomial(coefficients))
    }

    /// Scalar value `J(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &cn| acc * x + cn),
            Self::Exp => x.exp(),
            Self::Sinh => x.sinh(),
            Self::Cosh => x.cosh(),
            Self::Identity => x,
        }
    }

    /// Constant term `j_0`.
    pub fn j0(&self) -> f64 {
        match self {
            Self::Polynomial(c) => c.first().copied().unwrap_or(0.0),
            Self::Exp | Self::Cosh => 1.0,
            Self::Sinh | Self::Identity => 0.0,
        }
    }

    /// Even part without the constant: `sum_{n>=1} j_{2n} x^{2n}`.
    pub fn even_part(&self, x: f64) -> f64 {
        (self.eval(x) + self.eval(-x)) / 2.0 - self.j0()
    }

    /// Odd part `sum_n j_{2n+1} x^{2n+1}`.
    pub fn odd_part(&self, x: f64) -> f64 {
        (self.eval(x) - self.eval(-x)) / 2.0
    }

    /// Series with every odd coefficient zero.
    pub fn is_even(&self) -> bool {
        match self {
            Self::Polynomial(c) => c.iter().skip(1).step_by(2).all(|&x| x == 0.0),
            Self::Cosh => true,
            _ => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Polynomial(_) => "polynomial",
            Self::Exp => "exp",
            Self::Sinh => "sinh",
            Self::Cosh => "cosh",
            Self::Identity => "identity",
        }
    }
}

impl fmt::Display for CouplingSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| format!("{x:e}")).collect();
                write!(f, "poly[{}]", parts.join(" "))
            }
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for CouplingSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "exp" => Ok(Self::Exp),
            "sinh" => Ok(Self::Sinh),
            "cosh" => Ok(Self::Cosh),
            "identity" => Ok(Self::Identity),
            _ => {
                let inner = s
                    .strip_prefix("poly[")
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse {
                        line: 1,
                        message: format!("unknown coupling {s:?}"),
                    })?;
                let coeffs = inner
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<f64>().map_err(|e| Error::Parse {
                            line: 1,
                            message: format!("bad coefficient {t:?}: {e}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::polynomial(coeffs)
            }
        }
    }
}

/// Eigenvalues in ascending order with matching unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `sum_k w_k v_k v_k^H` for real weights; exactly Hermitian.
    pub fn reassemble_real(&self, weights: &[f64]) -> DMatrix<C64> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    /// `sum_k w_k v_k v_k^H` for complex weights (e.g. `exp(-i l t)`).
    pub fn reassemble(&self, weights: &[C64]) -> DMatrix<C64> {
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, k| {
            self.eigenvectors[(i, k)] * weights[k]
        });
        scaled * self.eigenvectors.adjoint()
    }

    /// `max |V^H V - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.eigenvectors.adjoint() * &self.eigenvectors;
        max_abs(&(g - DMatrix::identity(self.dim(), self.dim())))
    }

    /// `max |M V - V diag(l)|`.
    pub fn residual(&self, m: &HermitianOperator) -> f64 {
        let mv = m.matrix() * &self.eigenvectors;
        let vl = DMatrix::from_fn(self.dim(), self.dim(), |i, k| {
            self.eigenvectors[(i, k)] * self.eigenvalues[k]
        });
        max_abs(&(mv - vl))
    }
}

/// Dense Hermitian eigendecomposition, eigenvalues ascending.
pub fn hermitian_eigendecomposition(m: &HermitianOperator) -> Result<EigenSystem> {
    let n = m.dim();
    if n == 0 {
        return Ok(EigenSystem {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }
    let max_iter = EIGEN_MAX_SWEEPS_PER_DIM * n;
    let eig = SymmetricEigen::try_new(m.matrix().clone(), f64::EPSILON, max_iter).ok_or(
        Error::NoConvergence {
            iterations: max_iter,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .total_cmp(&eig.eigenvalues[b])
            .then(a.cmp(&b))
    });
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// `A_H = e^{i alpha} A + e^{-i alpha} A^T`.
pub fn hermitian_adjacency(g: &DirectedGraph, phase: Phase) -> HermitianOperator {
    let n = g.node_count();
    let fwd = C64::from_polar(1.0, phase.radians());
    let bwd = fwd.conj();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for (i, j) in g.edges() {
        m[(i, j)] += fwd;
        m[(j, i)] += bwd;
    }
    HermitianOperator::new(m).expect("e^{ia}A + e^{-ia}A^T is Hermitian by construction")
}

/// `J(M)` evaluated on the spectrum of `M`.
pub fn apply_coupling(series: &CouplingSeries, m: &HermitianOperator) -> Result<HermitianOperator> {
    if matches!(series, CouplingSeries::Identity) {
        return Ok(m.clone());
    }
    let eig = hermitian_eigendecomposition(m)?;
    Ok(apply_coupling_with(series, &eig))
}

/// `J(M)` from a precomputed eigensystem of `M`.
pub fn apply_coupling_with(series: &CouplingSeries, eig: &EigenSystem) -> HermitianOperator {
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|&l| series.eval(l)).collect();
    HermitianOperator {
        matrix: eig.reassemble_real(&weights),
    }
}

/// `H = J(A_H) + J^T(A_H)`.
pub fn assemble_hamiltonian(
    g: &DirectedGraph,
    phase: Phase,
    series: &CouplingSeries,
) -> Result<HermitianOperator> {
    let ah = hermitian_adjacency(g, phase);
    let j = apply_coupling(series, &ah)?;
    Ok(symmetrize_coupling(j.matrix()))
}

/// `J + J^T`; exactly Hermitian whenever `J` is.
pub(crate) fn symmetrize_coupling(j: &DMatrix<C64>) -> HermitianOperator {
    let n = j.nrows();
    let h = DMatrix::from_fn(n, n, |r, c| j[(r, c)] + j[(c, r)]);
    HermitianOperator::new(h).expect("J + J^T of a Hermitian J is Hermitian")
}
