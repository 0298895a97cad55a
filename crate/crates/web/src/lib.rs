//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Everything crosses the boundary as flat numeric arrays; the page does the
//! drawing.

use dqwalk::oracles::StarClosedForm;
use dqwalk::render::{ProbabilityTable, Scale};
use dqwalk::{
    build_moebius_ladder, build_ring, build_star, circulant_hamiltonian_spectrum, run_walk,
    CouplingSeries, DirectedGraph, InitialState, Phase, Substrate, TimeGrid,
};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn graph(family: &str, n: usize, directed: bool) -> Result<DirectedGraph, JsError> {
    match family {
        "ring" => build_ring(n, directed),
        "moebius" => build_moebius_ladder(n, directed),
        "star" => build_star(n, directed),
        other => return Err(JsError::new(&format!("unknown family {other:?}"))),
    }
    .map_err(js_err)
}

/// Grey levels of the time-node heatmap, row-major with `steps` rows of `N`
/// pixels. Time runs down, node index across.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn walk_heatmap(
    family: &str,
    n: usize,
    directed: bool,
    alpha: f64,
    t_end: f64,
    steps: usize,
    start: usize,
    log_scale: bool,
) -> Result<Vec<u8>, JsError> {
    let g = graph(family, n, directed)?;
    let phase = Phase::new(alpha).map_err(js_err)?;
    let grid = TimeGrid::new(0.0, t_end, steps).map_err(js_err)?;
    let psi = InitialState::localized(g.node_count(), start).map_err(js_err)?;
    let r = run_walk(
        Substrate::auto(&g),
        phase,
        &CouplingSeries::Exp,
        &psi,
        &grid,
    )
    .map_err(js_err)?;
    let scale = if log_scale { Scale::Log } else { Scale::Linear };
    let px = ProbabilityTable::from(&r).pixels(scale);
    Ok((0..px.nrows())
        .flat_map(|s| (0..px.ncols()).map(move |i| (s, i)))
        .map(|(s, i)| px[(s, i)])
        .collect())
}

/// Hub probability on a star started at the hub: the simulated curve followed
/// by the closed-form curve, `steps` values each.
#[wasm_bindgen]
pub fn star_hub_curves(
    n_peripheral: usize,
    directed: bool,
    alpha: f64,
    t_end: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    let g = build_star(n_peripheral, directed).map_err(js_err)?;
    let phase = Phase::new(alpha).map_err(js_err)?;
    let grid = TimeGrid::new(0.0, t_end, steps).map_err(js_err)?;
    let psi = InitialState::localized(n_peripheral + 1, 0).map_err(js_err)?;
    let r = run_walk(
        Substrate::auto(&g),
        phase,
        &CouplingSeries::Exp,
        &psi,
        &grid,
    )
    .map_err(js_err)?;
    let oracle = StarClosedForm::new(n_peripheral, directed, phase).map_err(js_err)?;
    let simulated = (0..r.steps()).map(|s| r.probability(s, 0));
    let closed = r
        .times
        .iter()
        .map(|&t| oracle.probability(t, 0).unwrap_or(f64::NAN));
    Ok(simulated.chain(closed).collect())
}

/// Fourier-space spectrum of `H` for a ring or Moebius ladder with `J = exp`.
#[wasm_bindgen]
pub fn circulant_spectrum(
    family: &str,
    n: usize,
    directed: bool,
    alpha: f64,
) -> Result<Vec<f64>, JsError> {
    let g = graph(family, n, directed)?;
    let spec = g
        .circulant_spec()
        .ok_or_else(|| JsError::new("spectrum needs a circulant family (ring or moebius)"))?;
    let phase = Phase::new(alpha).map_err(js_err)?;
    Ok(circulant_hamiltonian_spectrum(spec, phase, &CouplingSeries::Exp).values)
}
