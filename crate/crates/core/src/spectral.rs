//! Fourier-basis path for circulant graphs.
//!
//! Every circulant matrix is diagonal in the basis `S_mn = e^{2 pi i mn/N}/sqrt(N)`,
//! so `A_H`, `H` and `U = exp(-iHt)` follow from closed-form spectra.
//!
//! Index convention: entry `m` of [`circulant_ah_spectrum`] is
//! `2 sum_k a_k cos(alpha - 2 pi m k / N)`, which is the eigenvalue of `A_H` on
//! Fourier column `(N - m) mod N`. The Hamiltonian spectrum is invariant under
//! `m -> -m`, so it pairs with either column labelling.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::CirculantSpec;
use crate::operator::{CouplingSeries, HermitianOperator, Phase};
use crate::C64;

/// Dense unitary Fourier basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBasis {
    matrix: DMatrix<C64>,
}

impl FourierBasis {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.matrix[(m, n)]
    }
}

/// `e^{2 pi i r / N}` with the exponent reduced modulo `N` first.
fn root_of_unity(r: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * ((r % n) as f64) / n as f64)
}

pub fn fourier_basis(n: usize) -> Result<FourierBasis> {
    if n == 0 {
        return Err(Error::InvalidSize {
            family: "fourier basis",
            requirement: "n >= 1",
            n,
        });
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(FourierBasis {
        matrix: DMatrix::from_fn(n, n, |m, k| root_of_unity(m * k, n) * scale),
    })
}

/// Diagonal of a circulant operator in the Fourier basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpectrum {
    pub values: Vec<f64>,
}

impl DiagonalSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at `m` with the index reduced modulo `N`.
    pub fn at(&self, m: isize) -> f64 {
        let n = self.values.len() as isize;
        self.values[m.rem_euclid(n) as usize]
    }
}

/// `[D_{A_H}(alpha)]_m = 2 sum_k a_k cos(alpha - 2 pi m k / N)`.
pub fn circulant_ah_spectrum(c: &CirculantSpec, phase: Phase) -> DiagonalSpectrum {
    let n = c.len();
    let alpha = phase.radians();
    let values = (0..n)
        .map(|m| {
            2.0 * c
                .coefficients()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0.0)
                .map(|(k, &a)| a * (alpha - 2.0 * PI * ((m * k) % n) as f64 / n as f64).cos())
                .sum::<f64>()
        })
        .collect();
    DiagonalSpectrum { values }
}

/// `[D_H]_m = J(d_m(alpha)) + J(d_m(-alpha))`.
pub fn circulant_hamiltonian_spectrum(
    c: &CirculantSpec,
    phase: Phase,
    series: &CouplingSeries,
) -> DiagonalSpectrum {
    let plus = circulant_ah_spectrum(c, phase);
    let minus = circulant_ah_spectrum(c, phase.negated());
    DiagonalSpectrum {
        values: plus
            .values
            .iter()
            .zip(&minus.values)
            .map(|(&a, &b)| series.eval(a) + series.eval(b))
            .collect(),
    }
}

/// Fourier basis together with a Hamiltonian spectrum; computes `H`, `U(t)`
/// and evolved states without any eigendecomposition.
#[derive(Debug, Clone)]
pub struct CirculantPropagator {
    basis: FourierBasis,
    spectrum: DiagonalSpectrum,
}

impl CirculantPropagator {
    pub fn new(c: &CirculantSpec, phase: Phase, series: &CouplingSeries) -> Result<Self> {
        Ok(Self {
            basis: fourier_basis(c.len())?,
            spectrum: circulant_hamiltonian_spectrum(c, phase, series),
        })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn spectrum(&self) -> &DiagonalSpectrum {
        &self.spectrum
    }

    pub fn basis(&self) -> &FourierBasis {
        &self.basis
    }

    /// `S diag(w) S^H` for a circulant result: row 0 of the product, shifted.
    fn circulant_from_weights(&self, weights: &[C64]) -> DMatrix<C64> {
        let n = self.dim();
        let s = self.basis.matrix();
        let row: Vec<C64> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|m| s[(0, m)] * weights[m] * s[(j, m)].conj())
                    .sum()
            })
            .collect();
        DMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
    }

    pub fn hamiltonian(&self) -> Result<HermitianOperator> {
        let w: Vec<C64> = self
            .spectrum
            .values
            .iter()
            .map(|&d| C64::new(d, 0.0))
            .collect();
        HermitianOperator::new(self.circulant_from_weights(&w))
    }

    /// `U(t) = S exp(-i D_H t) S^H`.
    pub fn evolution_operator(&self, t: f64) -> DMatrix<C64> {
        let w: Vec<C64> = self
            .spectrum
            .values
            .iter()
            .map(|&d| C64::from_polar(1.0, -d * t))
            .collect();
        self.circulant_from_weights(&w)
    }

    /// Fourier coefficients `S^H psi`, reusable across time points.
    pub fn to_fourier(&self, psi: &DVector<C64>) -> DVector<C64> {
        self.basis.matrix().ad_mul(psi)
    }

    /// `S exp(-i D_H t) c` for Fourier coefficients `c`.
    pub fn evolve_fourier(&self, coeffs: &DVector<C64>, t: f64) -> DVector<C64> {
        let phased = DVector::from_iterator(
            coeffs.len(),
            coeffs
                .iter()
                .zip(&self.spectrum.values)
                .map(|(c, &d)| c * C64::from_polar(1.0, -d * t)),
        );
        self.basis.matrix() * phased
    }

    pub fn evolve(&self, psi: &DVector<C64>, t: f64) -> DVector<C64> {
        self.evolve_fourier(&self.to_fourier(psi), t)
    }
}

/// `U = S exp(-i D_H t) S^H` for a circulant graph.
pub fn circulant_evolution(
    c: &CirculantSpec,
    phase: Phase,
    series: &CouplingSeries,
    t: f64,
) -> Result<DMatrix<C64>> {
    if !t.is_finite() {
        return Err(Error::Precondition(format!("time must be finite, got {t}")));
    }
    Ok(CirculantPropagator::new(c, phase, series)?.evolution_operator(t))
}
