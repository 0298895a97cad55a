use dqwalk::oracles::{
    ring_hamiltonian_closed_form, ring_support, star_hamiltonian, star_probability,
};
use dqwalk::{
    assemble_hamiltonian, build_ring, build_star, run_walk, CouplingSeries, InitialState, Phase,
    Substrate, TimeGrid,
};

#[test]
fn directed_star_frozen_values() {
    // omega = 4 sinh(2) for N = 4, alpha = 0
    let omega = 14.507441631388076_f64;
    assert!((4.0 * 2f64.sinh() - omega).abs() < 1e-12);
    let p = star_probability(4, true, Phase::ZERO, 0.1, 0).unwrap();
    assert!((p - 0.5 * (1.0 + (omega * 0.1).cos())).abs() < 1e-15);
    let p = star_probability(
        4,
        true,
        Phase::new(std::f64::consts::FRAC_PI_3).unwrap(),
        0.25,
        1,
    )
    .unwrap();
    assert!((p - (1.0 - (0.5 * omega * 0.25).cos()) / 8.0).abs() < 1e-14);
}

#[test]
fn directed_star_walk_matches_closed_form() {
    let grid = TimeGrid::new(0.0, 3.0, 61).unwrap();
    for n in [3, 9] {
        let g = build_star(n, true).unwrap();
        let phase = Phase::new(0.6).unwrap();
        let psi = InitialState::localized(n + 1, 0).unwrap();
        let r = run_walk(
            Substrate::auto(&g),
            phase,
            &CouplingSeries::Exp,
            &psi,
            &grid,
        )
        .unwrap();
        for (s, &t) in r.times.iter().enumerate() {
            for i in 0..=n {
                let want = star_probability(n, true, phase, t, i).unwrap();
                assert!((r.probability(s, i) - want).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn star_hamiltonian_matches_dense_assembly() {
    for n in [2, 5, 16] {
        for series in [
            CouplingSeries::Exp,
            CouplingSeries::Cosh,
            CouplingSeries::Polynomial(vec![0.3, -1.0, 0.5, 0.25]),
        ] {
            let phase = Phase::new(0.45).unwrap();
            let closed = star_hamiltonian(n, phase, &series).unwrap();
            let dense =
                assemble_hamiltonian(&build_star(n, true).unwrap(), phase, &series).unwrap();
            assert!(closed.max_deviation(&dense) < 1e-9, "n={n} {series}");
        }
    }
}

#[test]
fn ring_second_power_support() {
    // j_2 only: offsets 0 and +-2
    let n = 9;
    let support = ring_support(n, &[0.0, 1.0]);
    for j in 0..n {
        assert_eq!(support[(0, j)], matches!(j, 0 | 2 | 7), "column {j}");
    }
    let phase = Phase::new(0.3).unwrap();
    let closed = ring_hamiltonian_closed_form(n, phase, &[0.0, 1.0]).unwrap();
    let dense = assemble_hamiltonian(
        &build_ring(n, true).unwrap(),
        phase,
        &CouplingSeries::Polynomial(vec![0.0, 0.0, 1.0]),
    )
    .unwrap();
    assert!(closed.max_deviation(&dense) < 1e-12);
    assert!((closed.get(0, 0).re - 4.0).abs() < 1e-14);
    assert!((closed.get(0, 2).re - 2.0 * (2.0 * 0.3f64).cos()).abs() < 1e-14);
}
