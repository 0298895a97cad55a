use dqwalk_web::{circulant_spectrum, star_hub_curves, walk_heatmap};

#[test]
fn heatmap_shape_and_first_row() {
    let px = walk_heatmap("ring", 20, true, 0.5, 5.0, 11, 10, false).unwrap();
    assert_eq!(px.len(), 11 * 20);
    let first: Vec<usize> = (0..20).filter(|&i| px[i] > 0).collect();
    assert_eq!(first, vec![10]);
}

#[test]
fn half_pi_ladder_keeps_odd_columns_dark() {
    let px = walk_heatmap(
        "moebius",
        22,
        true,
        std::f64::consts::FRAC_PI_2,
        10.0,
        21,
        10,
        true,
    )
    .unwrap();
    for row in px.chunks(22) {
        assert!(row.iter().skip(1).step_by(2).all(|&p| p == 0));
    }
}

#[test]
fn star_curves_agree_for_directed_star() {
    let v = star_hub_curves(4, true, 0.3, 2.0, 101).unwrap();
    let (sim, closed) = v.split_at(101);
    for (a, b) in sim.iter().zip(closed) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn ring_spectrum_length() {
    let d = circulant_spectrum("ring", 12, true, 0.0).unwrap();
    assert_eq!(d.len(), 12);
    assert!((d[0] - 2.0 * 2f64.exp()).abs() < 1e-9);
}
