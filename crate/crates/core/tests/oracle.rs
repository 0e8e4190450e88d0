//! Wavepacket oracle against the closed-form amplitudes.

use chiral_diode::oracle::{
    build_dynamics, compare_to_analytic, evolve, scatter_wavepacket, simulate, Direction, EvolveOptions, ModeGrid,
    OracleSettings, OracleState, WavepacketSpec,
};
use chiral_diode::tuner::tune_pass;
use chiral_diode::{scatter, CouplingRates, Detuning, EmitterSpec, LaserDrive};

const TOL: f64 = 1e-2;

fn grid() -> ModeGrid {
    ModeGrid::new(512, 5.0).unwrap()
}

fn two_level(gl: f64, ga: f64) -> EmitterSpec {
    EmitterSpec::two_level(CouplingRates::new(1.0, gl, ga, 0.0).unwrap())
}

fn diode_lambda() -> EmitterSpec {
    EmitterSpec::lambda(CouplingRates::normalized(0.1, 0.9).unwrap(), LaserDrive::new(2.0, 1.0).unwrap())
}

fn packet(carrier: f64, direction: Direction) -> WavepacketSpec {
    WavepacketSpec::new(carrier, 0.02, direction)
}

#[test]
fn symmetric_emitter_reflects_fully() {
    let spec = EmitterSpec::two_level(CouplingRates::new(0.5, 0.5, 0.0, 0.0).unwrap());
    let res = scatter_wavepacket(&spec, &packet(0.0, Direction::FromLeft), &grid(), &OracleSettings::default()).unwrap();
    assert!(res.converged);
    assert!((res.r - 1.0).abs() < TOL, "R = {}", res.r);
    assert!(res.loss.abs() < 1e-6);
}

#[test]
fn critical_coupling_from_left() {
    let spec = two_level(0.1, 0.9);
    let res = scatter_wavepacket(&spec, &packet(0.0, Direction::FromLeft), &grid(), &OracleSettings::default()).unwrap();
    assert!(res.t.abs() < TOL, "T = {}", res.t);
    assert!((res.r - 0.1).abs() < TOL, "R = {}", res.r);
    assert!((res.loss - 0.9).abs() < 1.5e-2, "loss = {}", res.loss);
}

#[test]
fn eit_carrier_is_transparent() {
    let fine = ModeGrid::new(1024, 5.0).unwrap();
    let wp = WavepacketSpec::new(1.0, 0.01, Direction::FromLeft);
    let res = scatter_wavepacket(&diode_lambda(), &wp, &fine, &OracleSettings::default()).unwrap();
    assert!((res.t - 1.0).abs() < TOL, "T = {}", res.t);
}

#[test]
fn lossless_runs_are_unitary() {
    let specs = [
        two_level(0.3, 0.0),
        EmitterSpec::lambda(CouplingRates::new(1.0, 0.2, 0.0, 0.0).unwrap(), LaserDrive::new(1.0, 0.5).unwrap()),
    ];
    for spec in &specs {
        for dir in [Direction::FromLeft, Direction::FromRight] {
            let res = simulate(spec, &packet(0.4, dir), &grid(), &OracleSettings::default()).unwrap();
            for &(t, n) in &res.norm_history {
                assert!((n - 1.0).abs() < 1e-6, "norm {n} at t = {t}");
            }
            assert!(res.loss.abs() < 1e-6, "loss = {}", res.loss);
        }
    }
}

#[test]
fn excited_emitter_decays_at_total_rate() {
    let rates = CouplingRates::new(1.0, 0.1, 0.9, 0.0).unwrap();
    let spec = EmitterSpec::two_level(rates);
    // A wide band keeps the Lorentzian tails inside the grid.
    let wide = ModeGrid::new(4096, 80.0).unwrap();
    let wp = WavepacketSpec::new(0.0, 0.5, Direction::FromLeft);
    let dynamics = build_dynamics(&spec, &wide, &wp).unwrap();
    let mut initial = OracleState::vacuum(wide.n_modes());
    initial.beta_a = 1.0.into();
    let dt = 0.1 / dynamics.max_rate();
    let opts = EvolveOptions { dt, t_end: 3.0, sample_every: 10, keep_states: true };
    let traj = evolve(initial, &dynamics, &opts).unwrap();

    // Least-squares slope of ln|β_a|² over 0.5 ≤ t ≤ 3.
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.states)
        .filter(|(t, _)| **t >= 0.5)
        .map(|(t, s)| (*t, s.beta_a.norm_sqr().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let fitted = -sxy / sxx;
    let expected = rates.total_decay();
    assert!(((fitted - expected) / expected).abs() < 0.01, "fitted {fitted}, expected {expected}");
}

#[test]
fn mirrored_setup_gives_identical_numbers() {
    let spec = two_level(0.4, 0.3);
    let mirror = EmitterSpec::two_level(CouplingRates::new(0.4, 1.0, 0.3, 0.0).unwrap());
    let s = OracleSettings::default();
    let a = simulate(&spec, &packet(0.7, Direction::FromLeft), &grid(), &s).unwrap();
    let b = simulate(&mirror, &packet(0.7, Direction::FromRight), &grid(), &s).unwrap();
    assert!((a.t - b.t).abs() < 1e-10);
    assert!((a.r - b.r).abs() < 1e-10);
    assert!((a.loss - b.loss).abs() < 1e-10);
}

#[test]
fn reflection_is_direction_independent() {
    let spec = two_level(0.4, 0.3);
    let s = OracleSettings::default();
    for carrier in [0.0, 0.7] {
        let a = simulate(&spec, &packet(carrier, Direction::FromLeft), &grid(), &s).unwrap();
        let b = simulate(&spec, &packet(carrier, Direction::FromRight), &grid(), &s).unwrap();
        assert!((a.r - b.r).abs() < 2e-3, "carrier {carrier}: {} vs {}", a.r, b.r);
        assert!(a.loss > -1e-6 && b.loss > -1e-6);
    }
}

#[test]
fn narrower_packets_approach_the_plane_wave_result() {
    let spec = EmitterSpec::two_level(CouplingRates::new(0.5, 0.5, 0.0, 0.0).unwrap());
    let s = OracleSettings::default();
    let exact = scatter(&spec, Detuning(0.0)).unwrap().trans_r;
    let err = |sigma_k: f64| {
        let wp = WavepacketSpec::new(0.0, sigma_k, Direction::FromLeft);
        (simulate(&spec, &wp, &grid(), &s).unwrap().t - exact).abs()
    };
    let wide = err(0.08);
    let mid = err(0.04);
    let narrow = err(0.02);
    assert!(wide > mid && mid > narrow, "{wide} {mid} {narrow}");
}

#[test]
fn five_point_sweep_across_resonance() {
    let spec = two_level(0.4, 0.3);
    let carriers = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let report = compare_to_analytic(
        &spec,
        &carriers,
        &packet(0.0, Direction::FromLeft),
        &grid(),
        &OracleSettings::default(),
        TOL,
    )
    .unwrap();
    assert!(report.pass, "{report:?}");
    assert_eq!(report.rows.len(), 5);
}

#[test]
fn empty_carrier_list_passes() {
    let report = compare_to_analytic(
        &two_level(0.1, 0.9),
        &[],
        &packet(0.0, Direction::FromLeft),
        &grid(),
        &OracleSettings::default(),
        TOL,
    )
    .unwrap();
    assert!(report.pass && report.rows.is_empty());
}

#[test]
fn metastable_loss_matches_closed_form() {
    let rates = CouplingRates::new(1.0, 0.3, 0.5, 0.05).unwrap();
    let spec = EmitterSpec::lambda(rates, LaserDrive::new(1.5, -0.8).unwrap());
    let s = OracleSettings::default();
    let analytic = scatter(&spec, Detuning(1.2)).unwrap();
    let res = scatter_wavepacket(&spec, &packet(1.2, Direction::FromLeft), &grid(), &s).unwrap();
    assert!((res.t - analytic.trans_r).abs() < TOL, "{} vs {}", res.t, analytic.trans_r);
    assert!((res.r - analytic.refl).abs() < TOL, "{} vs {}", res.r, analytic.refl);
}

#[test]
fn pass_plan_is_transparent_in_simulation() {
    let rates = CouplingRates::normalized(0.1, 0.9).unwrap();
    let plan = tune_pass(-1.7, &rates, 0.4).unwrap();
    assert_eq!(plan.drive.delta_laser(), -1.7);
    let spec = EmitterSpec::lambda(rates, plan.drive);
    let fine = ModeGrid::new(1024, 4.0).unwrap();
    let wp = WavepacketSpec::new(-1.7, 0.01, Direction::FromLeft);
    let res = scatter_wavepacket(&spec, &wp, &fine, &OracleSettings::default()).unwrap();
    assert!(res.loss < TOL, "loss = {}", res.loss);
    assert!((res.t - 1.0).abs() < TOL, "T = {}", res.t);
}
