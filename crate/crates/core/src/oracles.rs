//! Closed-form reference results: star-graph oscillations, the directed-ring
//! Hamiltonian as a binomial double sum, and the half-pi spectrum shift of
//! bipartite circulants.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{build_star, CirculantSpec};
use crate::operator::{hermitian_adjacency, max_abs, CouplingSeries, HermitianOperator, Phase};
use crate::spectral::{circulant_ah_spectrum, circulant_hamiltonian_spectrum, CirculantPropagator};
use crate::C64;

/// Hub-localized walk on a star with `n_peripheral` leaves and `J = exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarClosedForm {
    pub n_peripheral: usize,
    pub directed: bool,
    pub phase: Phase,
}

impl StarClosedForm {
    pub fn new(n_peripheral: usize, directed: bool, phase: Phase) -> Result<Self> {
        if n_peripheral == 0 {
            return Err(Error::InvalidSize {
                family: "star",
                requirement: "at least one peripheral node",
                n: 0,
            });
        }
        Ok(Self {
            n_peripheral,
            directed,
            phase,
        })
    }

    /// `4 sinh(sqrt N) cos alpha`, doubled for the undirected star.
    pub fn omega(&self) -> f64 {
        let factor = if self.directed { 4.0 } else { 8.0 };
        factor * (self.n_peripheral as f64).sqrt().sinh() * self.phase.radians().cos()
    }

    /// `(1 + cos wt)/2` on the hub, `(1 - cos wt)/(2N)` on each leaf.
    pub fn probability(&self, t: f64, node: usize) -> Result<f64> {
        let cos_wt = (self.omega() * t).cos();
        match node {
            0 => Ok((1.0 + cos_wt) / 2.0),
            i if i <= self.n_peripheral => Ok((1.0 - cos_wt) / (2.0 * self.n_peripheral as f64)),
            i => Err(Error::IndexOutOfRange {
                index: i,
                len: self.n_peripheral + 1,
            }),
        }
    }
}

pub fn star_probability(
    n: usize,
    directed: bool,
    phase: Phase,
    t: f64,
    node: usize,
) -> Result<f64> {
    StarClosedForm::new(n, directed, phase)?.probability(t, node)
}

/// Directed-star Hamiltonian from the even/odd split of `J`:
/// `2 j_0 I + (2/N) J_even(sqrt N) A_H^2 + (2 cos alpha / sqrt N) J_odd(sqrt N) A_H(0)`.
pub fn star_hamiltonian(
    n: usize,
    phase: Phase,
    series: &CouplingSeries,
) -> Result<HermitianOperator> {
    let g = build_star(n, true)?;
    let root = (n as f64).sqrt();
    let a0 = hermitian_adjacency(&g, Phase::ZERO).into_matrix();
    let ah = hermitian_adjacency(&g, phase).into_matrix();
    let ah2 = &ah * &ah;
    let dim = n + 1;
    let h = DMatrix::<C64>::identity(dim, dim) * C64::new(2.0 * series.j0(), 0.0)
        + ah2 * C64::new(2.0 * series.even_part(root) / n as f64, 0.0)
        + a0 * C64::new(
            2.0 * phase.radians().cos() * series.odd_part(root) / root,
            0.0,
        );
    HermitianOperator::new(h)
}

fn binomial(p: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (p - i) as f64 / (i + 1) as f64)
}

/// Directed-ring Hamiltonian by the binomial double sum
/// `H_mn = sum_p j_p sum_k C(p,k) [2k = m - n + p (mod N)] 2 cos(alpha (2k - p))`,
/// with `coefficients[p - 1] = j_p`. The congruence is taken modulo `N`:
/// paths winding around the ring contribute whenever `p >= N/2`.
pub fn ring_hamiltonian_closed_form(
    n: usize,
    phase: Phase,
    coefficients: &[f64],
) -> Result<HermitianOperator> {
    if n < 3 {
        return Err(Error::InvalidSize {
            family: "ring",
            requirement: "n >= 3",
            n,
        });
    }
    let alpha = phase.radians();
    // H is circulant: compute the first row by offset d = (n - m) mod N.
    let mut row = vec![0.0; n];
    for (idx, &jp) in coefficients.iter().enumerate() {
        if jp == 0.0 {
            continue;
        }
        let p = idx + 1;
        for k in 0..=p {
            // 2k - p = m - n (mod N)
            let diff = (2 * k + n * p - p) % n;
            // entry (0, d) has m - n = -d
            let d = (n - diff) % n;
            row[d] += jp * binomial(p, k) * 2.0 * (alpha * (2.0 * k as f64 - p as f64)).cos();
        }
    }
    let h = DMatrix::from_fn(n, n, |m, c| C64::new(row[(c + n - m) % n], 0.0));
    HermitianOperator::new(h)
}

/// Entries of the ring closed form that have at least one contributing term.
pub fn ring_support(n: usize, coefficients: &[f64]) -> DMatrix<bool> {
    let mut row = vec![false; n];
    for (idx, &jp) in coefficients.iter().enumerate() {
        if jp == 0.0 {
            continue;
        }
        let p = idx + 1;
        for k in 0..=p {
            let diff = (2 * k + n * p - p) % n;
            row[(n - diff) % n] = true;
        }
    }
    DMatrix::from_fn(n, n, |m, c| row[(c + n - m) % n])
}

/// Maximum deviations of the half-pi mirror identities for a bipartite circulant.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReport {
    pub delta: f64,
    /// `max_m |[D_{A_H}(+-a+)]_m - [D_{A_H}(-+a-)]_{m+N/2}|`.
    pub ah_shift: f64,
    /// `max_m |[D_H(a+)]_m - [D_H(a-)]_{m+N/2}|`.
    pub spectrum_shift: f64,
    /// `max_ij |H(a+)_ij - (-1)^{i+j} H(a-)_ij|`.
    pub hamiltonian_sign: f64,
    /// Same relation for `U(t)`, maximized over the probe times.
    pub evolution_sign: f64,
}

impl ShiftReport {
    pub fn max_deviation(&self) -> f64 {
        self.ah_shift
            .max(self.spectrum_shift)
            .max(self.hamiltonian_sign)
            .max(self.evolution_sign)
    }
}

fn sign_conjugation_deviation(plus: &DMatrix<C64>, minus: &DMatrix<C64>) -> f64 {
    let n = plus.nrows();
    let flipped = DMatrix::from_fn(n, n, |i, j| {
        if (i + j) % 2 == 0 {
            minus[(i, j)]
        } else {
            -minus[(i, j)]
        }
    });
    max_abs(&(plus - flipped))
}

/// Checks the spectrum shift `[D_H(a+)]_m = [D_H(a-)]_{m+N/2}` and the
/// `(-1)^{i+j}` conjugation of `H` and `U(t)` between `a+- = pi/2 +- delta`.
pub fn half_pi_spectrum_shift(
    c: &CirculantSpec,
    series: &CouplingSeries,
    delta: f64,
    times: &[f64],
) -> Result<ShiftReport> {
    if !c.is_bipartite_form() {
        return Err(Error::Precondition(
            "half-pi shift needs even N and a_k = 0 for every even k".into(),
        ));
    }
    let n = c.len() as isize;
    let half = n / 2;
    let plus = Phase::half_pi_plus(delta);
    let minus = Phase::half_pi_minus(delta);

    let mut ah_shift = 0.0_f64;
    for (lhs, rhs) in [(plus, minus.negated()), (plus.negated(), minus)] {
        let l = circulant_ah_spectrum(c, lhs);
        let r = circulant_ah_spectrum(c, rhs);
        for m in 0..n {
            ah_shift = ah_shift.max((l.at(m) - r.at(m + half)).abs());
        }
    }

    let dp = circulant_hamiltonian_spectrum(c, plus, series);
    let dm = circulant_hamiltonian_spectrum(c, minus, series);
    let spectrum_shift = (0..n)
        .map(|m| (dp.at(m) - dm.at(m + half)).abs())
        .fold(0.0, f64::max);

    let pp = CirculantPropagator::new(c, plus, series)?;
    let pm = CirculantPropagator::new(c, minus, series)?;
    let hamiltonian_sign =
        sign_conjugation_deviation(pp.hamiltonian()?.matrix(), pm.hamiltonian()?.matrix());
    let evolution_sign = times
        .iter()
        .map(|&t| sign_conjugation_deviation(&pp.evolution_operator(t), &pm.evolution_operator(t)))
        .fold(0.0, f64::max);

    Ok(ShiftReport {
        delta,
        ah_shift,
        spectrum_shift,
        hamiltonian_sign,
        evolution_sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_ring;
    use crate::operator::{assemble_hamiltonian, hermitian_adjacency};
    use std::f64::consts::PI;

    #[test]
    fn star_probability_cases() {
        for directed in [true, false] {
            let p = Phase::new(0.3).unwrap();
            assert_eq!(star_probability(4, directed, p, 0.0, 0).unwrap(), 1.0);
            assert_eq!(star_probability(4, directed, p, 0.0, 3).unwrap(), 0.0);
            for t in [0.0, 1.3, 7.0] {
                assert!(
                    (star_probability(5, directed, Phase::HALF_PI, t, 0).unwrap() - 1.0).abs()
                        < 1e-12
                );
                assert!(
                    star_probability(5, directed, Phase::HALF_PI, t, 2)
                        .unwrap()
                        .abs()
                        < 1e-12
                );
            }
        }
        let omega = 4.0 * 2f64.sinh();
        let t = PI / omega;
        assert!(star_probability(4, true, Phase::ZERO, t, 0).unwrap().abs() < 1e-15);
        assert!((star_probability(4, true, Phase::ZERO, t, 2).unwrap() - 0.25).abs() < 1e-14);
        assert!(matches!(
            star_probability(4, true, Phase::ZERO, t, 5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn star_frequency_ratio_is_two() {
        let a = StarClosedForm::new(8, true, Phase::new(0.4).unwrap()).unwrap();
        let b = StarClosedForm {
            directed: false,
            ..a
        };
        assert!((b.omega() / a.omega() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn star_hamiltonian_two_node_line() {
        let alpha = 0.55_f64;
        let h = star_hamiltonian(1, Phase::new(alpha).unwrap(), &CouplingSeries::Exp).unwrap();
        let d = 2.0 * 1f64.cosh();
        let off = 2.0 * 1f64.sinh() * alpha.cos();
        let want = DMatrix::from_row_slice(2, 2, &[d, off, off, d]).map(|x| C64::new(x, 0.0));
        assert!(max_abs(&(h.matrix() - want)) < 1e-14);
    }

    #[test]
    fn ring_closed_form_identity_coupling() {
        let alpha = 0.7_f64;
        let h = ring_hamiltonian_closed_form(7, Phase::new(alpha).unwrap(), &[1.0]).unwrap();
        let a = build_ring(7, true).unwrap().adjacency();
        let want = (&a + a.transpose()).map(|x| C64::new(2.0 * alpha.cos() * x, 0.0));
        assert!(max_abs(&(h.matrix() - want)) < 1e-15);
    }

    #[test]
    fn ring_support_parity() {
        // only j_2: contributions at m - n in {0, +-2}
        let s = ring_support(8, &[0.0, 1.0]);
        for m in 0..8 {
            for n in 0..8 {
                let d = (n + 8 - m) % 8;
                assert_eq!(s[(m, n)], matches!(d, 0 | 2 | 6), "({m},{n})");
            }
        }
    }

    #[test]
    fn ring_closed_form_wraps_modulo_n() {
        // p = 3 on a 4-ring: 2k - p in {-3, -1, 1, 3}, and +-3 = -+1 (mod 4)
        let coeffs = [0.0, 0.0, 1.0];
        let alpha = 0.4;
        let h = ring_hamiltonian_closed_form(4, Phase::new(alpha).unwrap(), &coeffs).unwrap();
        let g = build_ring(4, true).unwrap();
        let series = CouplingSeries::polynomial(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let dense = assemble_hamiltonian(&g, Phase::new(alpha).unwrap(), &series).unwrap();
        assert!(h.max_deviation(&dense) < 1e-12);
    }

    #[test]
    fn shift_report_rejects_even_coefficients() {
        let c = CirculantSpec::from_offsets(6, &[1, 2]).unwrap();
        assert!(matches!(
            half_pi_spectrum_shift(&c, &CouplingSeries::Exp, 0.2, &[1.0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn shift_report_ring_four() {
        let c = CirculantSpec::from_offsets(4, &[1]).unwrap();
        let r = half_pi_spectrum_shift(&c, &CouplingSeries::Exp, 0.2, &[0.5, 2.0]).unwrap();
        assert!(r.max_deviation() <= 1e-10, "{r:?}");
        let r = half_pi_spectrum_shift(&c, &CouplingSeries::Exp, 0.0, &[1.0]).unwrap();
        assert!(r.spectrum_shift <= 1e-12);
    }

    #[test]
    fn adjacency_powers_of_star() {
        // A_H^3 = N A_H
        let g = crate::graph::build_star(4, true).unwrap();
        let ah = hermitian_adjacency(&g, Phase::new(1.2).unwrap()).into_matrix();
        let cube = &ah * &ah * &ah;
        assert!(max_abs(&(cube - &ah * C64::new(4.0, 0.0))) < 1e-13);
    }
}
