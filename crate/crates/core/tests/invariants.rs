use std::f64::consts::PI;

use dqwalk::operator::max_abs;
use dqwalk::{
    assemble_hamiltonian, build_ring, circulant_ah_spectrum, circulant_block_decomposition,
    circulant_hamiltonian_spectrum, fourier_basis, hermitian_adjacency, CirculantPropagator,
    CirculantSpec, CouplingSeries, InitialState, Phase, Propagator, Substrate, TimeGrid, C64,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn sparse_spec() -> impl Strategy<Value = CirculantSpec> {
    (3usize..40)
        .prop_flat_map(|n| (Just(n), prop::collection::btree_set(1..n, 1..=3)))
        .prop_map(|(n, offs)| {
            CirculantSpec::from_offsets(n, &offs.into_iter().collect::<Vec<_>>()).unwrap()
        })
}

fn series() -> impl Strategy<Value = CouplingSeries> {
    prop_oneof![
        Just(CouplingSeries::Identity),
        Just(CouplingSeries::Exp),
        Just(CouplingSeries::Sinh),
        Just(CouplingSeries::Cosh),
        prop::collection::vec(-1.0f64..=1.0, 1..=4).prop_map(CouplingSeries::Polynomial),
    ]
}

fn phase() -> impl Strategy<Value = Phase> {
    (-PI..PI).prop_map(|a| Phase::new(a).unwrap())
}

fn real_part_defect(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_is_even_in_alpha(spec in sparse_spec(), s in series(), p in phase()) {
        let g = spec.to_graph().unwrap();
        let a = assemble_hamiltonian(&g, p, &s).unwrap();
        let b = assemble_hamiltonian(&g, p.negated(), &s).unwrap();
        prop_assert!(a.max_deviation(&b) <= 1e-9 * (1.0 + max_abs(a.matrix())));
        prop_assert!(real_part_defect(a.matrix()) <= 1e-10 * (1.0 + max_abs(a.matrix())));
    }

    #[test]
    fn spectrum_matches_direct_evaluation(spec in sparse_spec(), s in series(), p in phase()) {
        let n = spec.len();
        let d = circulant_ah_spectrum(&spec, p);
        let h = circulant_hamiltonian_spectrum(&spec, p, &s);
        let alpha = p.radians();
        for m in 0..n {
            let direct = |a: f64| -> f64 {
                2.0 * (0..n)
                    .map(|k| spec.coefficient(k) * (a - 2.0 * PI * (m * k) as f64 / n as f64).cos())
                    .sum::<f64>()
            };
            prop_assert!((d.values[m] - direct(alpha)).abs() <= 1e-12 * n as f64);
            let want = s.eval(direct(alpha)) + s.eval(direct(-alpha));
            prop_assert!((h.values[m] - want).abs() <= 1e-10 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn fourier_basis_diagonalizes(spec in sparse_spec(), p in phase()) {
        let n = spec.len();
        let s = fourier_basis(n).unwrap();
        let ah = hermitian_adjacency(&spec.to_graph().unwrap(), p);
        let d = s.matrix().adjoint() * ah.matrix() * s.matrix();
        let spectrum = circulant_ah_spectrum(&spec, p);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { spectrum.at(-(i as isize)) } else { 0.0 };
                prop_assert!((d[(i, j)] - C64::new(want, 0.0)).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn block_decomposition_reassembles(half in 2usize..20, bits in prop::collection::vec(any::<bool>(), 40)) {
        let n = 2 * half;
        let coeffs: Vec<f64> = (0..n).map(|k| if k > 0 && bits[k] { 1.0 } else { 0.0 }).collect();
        let spec = CirculantSpec::new(coeffs).unwrap();
        let b = circulant_block_decomposition(&spec).unwrap();
        let p = b.permutation_matrix();
        let permuted = &p * spec.matrix() * p.transpose();
        prop_assert_eq!(permuted, b.assembled());
    }

    #[test]
    fn circulant_and_dense_evolution_agree(spec in sparse_spec(), s in series(), p in phase(), t in 0.0f64..5.0) {
        let g = spec.to_graph().unwrap();
        let circ = CirculantPropagator::new(&spec, p, &s).unwrap().evolution_operator(t);
        let dense = Propagator::dense(&assemble_hamiltonian(&g, p, &s).unwrap()).unwrap().operator(t);
        prop_assert!(max_abs(&(&circ - &dense)) <= 1e-9);
        let n = spec.len();
        prop_assert!(max_abs(&(circ.adjoint() * &circ - DMatrix::identity(n, n))) <= 1e-10);
    }

    #[test]
    fn probabilities_stay_normalized(spec in sparse_spec(), s in series(), p in phase(), start in 0usize..40) {
        let g = spec.to_graph().unwrap();
        let n = spec.len();
        let psi = InitialState::localized(n, start % n).unwrap();
        let grid = TimeGrid::new(0.0, 5.0, 26).unwrap();
        let r = dqwalk::run_walk(Substrate::auto(&g), p, &s, &psi, &grid).unwrap();
        prop_assert!(r.normalization_defect() <= 1e-10);
    }

    #[test]
    fn ring_walk_is_mirror_symmetric(n in 3usize..60, p in phase(), start in 0usize..60, directed in any::<bool>()) {
        let ring = build_ring(n, directed).unwrap();
        let i0 = start % n;
        let psi = InitialState::localized(n, i0).unwrap();
        let grid = TimeGrid::new(0.0, 8.0, 17).unwrap();
        let r = dqwalk::run_walk(Substrate::auto(&ring), p, &CouplingSeries::Exp, &psi, &grid).unwrap();
        for s in 0..r.steps() {
            for i in 0..n {
                let a = r.probability(s, (i0 + i) % n);
                let b = r.probability(s, (i0 + n - i % n) % n);
                prop_assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn bipartite_circulant_walks_have_period_pi(
        half in 2usize..30,
        p in phase(),
        start in 0usize..60,
        s in series(),
    ) {
        let n = 2 * half;
        let offsets: Vec<usize> = if half % 2 == 1 { vec![1, half] } else { vec![1, 3 % n] };
        let spec = CirculantSpec::from_offsets(n, &offsets).unwrap();
        prop_assume!(spec.is_bipartite_form());
        let g = spec.to_graph().unwrap();
        let psi = InitialState::localized(n, start % n).unwrap();
        let grid = TimeGrid::new(0.0, 4.0, 9).unwrap();
        let a = dqwalk::run_walk(Substrate::auto(&g), p, &s, &psi, &grid).unwrap();
        let b = dqwalk::run_walk(Substrate::auto(&g), p.shifted(PI), &s, &psi, &grid).unwrap();
        prop_assert!(a.max_probability_deviation(&b) <= 1e-9);
    }
}

#[test]
fn basis_change_yields_diagonal_up_to_256() {
    for n in [64, 128, 256] {
        let spec = CirculantSpec::from_offsets(n, &[1, n / 2 + 1]).unwrap();
        let p = Phase::new(0.7).unwrap();
        let prop = CirculantPropagator::new(&spec, p, &CouplingSeries::Exp).unwrap();
        let h = prop.hamiltonian().unwrap();
        let s = prop.basis().matrix();
        let d = s.adjoint() * h.matrix() * s;
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(d[(i, j)].norm());
                }
            }
            let want = prop.spectrum().at(-(i as isize));
            assert!((d[(i, i)].re - want).abs() <= 1e-9 * (1.0 + want.abs()));
        }
        assert!(off <= 1e-9 * max_abs(h.matrix()).max(1.0), "N={n}: {off}");
    }
}
