use etaspec_core::oracle::{
    fd_spectrum, shoot_eigenvalue, FdGrid, ShootingConfig, ShootingProblem,
};
use etaspec_core::radialwave::{node_positions, series_coefficients};
use etaspec_core::{
    binding_energy_stable, energy_eigenvalue, length_scale, BoundState, BranchSign,
    PhysicalConstants, SpinMode,
};
use nalgebra::DMatrix;

fn closed(state: &BoundState, c: &PhysicalConstants) -> f64 {
    energy_eigenvalue(state, c).unwrap().total_energy_ratio
}

fn shoot(mode: SpinMode, angular: i32, nodes: usize, config: &ShootingConfig) -> f64 {
    let c = PhysicalConstants::default();
    shoot_eigenvalue(mode, angular, nodes, BranchSign::Sommerfeld, config, &c).unwrap()
}

#[test]
fn shooting_is_insensitive_to_match_point() {
    let base = ShootingConfig::default();
    let moved = ShootingConfig {
        match_point: 2.0 * base.match_point,
        ..base
    };
    for (mode, angular, nodes) in [
        (SpinMode::Spinless, 0, 0),
        (SpinMode::Spinless, 1, 2),
        (SpinMode::SpinHalf, -1, 1),
        (SpinMode::SpinHalf, 2, 1),
    ] {
        let a = shoot(mode, angular, nodes, &base);
        let b = shoot(mode, angular, nodes, &moved);
        assert!(
            (a - b).abs() <= base.root_tolerance * a,
            "{mode} {angular} {nodes}: {a} vs {b}"
        );
    }
}

#[test]
fn shooting_is_insensitive_to_outer_radius() {
    let base = ShootingConfig::default();
    for r_max in [25.0, 40.0] {
        let other = ShootingConfig { r_max, ..base };
        for (mode, angular, nodes) in [(SpinMode::Spinless, 0, 3), (SpinMode::SpinHalf, 1, 1)] {
            let a = shoot(mode, angular, nodes, &base);
            let b = shoot(mode, angular, nodes, &other);
            assert!(
                (a - b).abs() <= base.root_tolerance * a,
                "r_max {r_max}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn mismatch_changes_sign_once_per_level() {
    let c = PhysicalConstants::default();
    let config = ShootingConfig::default();
    for (mode, angular) in [(SpinMode::Spinless, 0), (SpinMode::SpinHalf, -1)] {
        let levels: Vec<f64> = (0..=4)
            .map(|n_r| {
                let s = BoundState::new(
                    mode,
                    n_r,
                    angular,
                    BranchSign::Sommerfeld,
                    Default::default(),
                )
                .unwrap();
                1.0 - closed(&s, &c)
            })
            .collect();
        for nodes in 1..=3usize {
            let problem =
                ShootingProblem::new(mode, angular, BranchSign::Sommerfeld, nodes, config, &c)
                    .unwrap();
            let lo = 0.5 * (levels[nodes + 1] + levels[nodes]);
            let hi = 0.5 * (levels[nodes] + levels[nodes - 1]);
            let samples = 400;
            let mut changes = 0;
            let mut previous: Option<f64> = None;
            for i in 0..=samples {
                let w = lo + (hi - lo) * i as f64 / samples as f64;
                let m = problem.probe(w).unwrap().mismatch;
                if let Some(p) = previous {
                    if p.signum() != m.signum() {
                        changes += 1;
                    }
                }
                previous = Some(m);
            }
            assert_eq!(changes, 1, "{mode} angular {angular} nodes {nodes}");
        }
    }
}

#[test]
fn finite_difference_agrees_with_shooting() {
    let c = PhysicalConstants::default();
    let config = ShootingConfig::default();
    for (mode, angular) in [
        (SpinMode::Spinless, 1),
        (SpinMode::SpinHalf, -1),
        (SpinMode::SpinHalf, 1),
    ] {
        let grid = FdGrid::for_levels(3, 20_000, c.alpha);
        let fd = fd_spectrum(mode, angular, BranchSign::Sommerfeld, &grid, 3, &c).unwrap();
        for (nodes, e_fd) in fd.iter().enumerate() {
            let e_shoot =
                shoot_eigenvalue(mode, angular, nodes, BranchSign::Sommerfeld, &config, &c)
                    .unwrap();
            assert!(
                (e_fd - e_shoot).abs() / e_shoot <= 1e-5,
                "{mode} {angular} {nodes}: {e_fd} vs {e_shoot}"
            );
        }
    }
}

#[test]
fn node_count_matches_companion_matrix_roots() {
    let c = PhysicalConstants::default();
    for l in 0..=2 {
        let state = BoundState::spinless(3, l, BranchSign::Sommerfeld).unwrap();
        let e = energy_eigenvalue(&state, &c).unwrap();
        let scale = length_scale(&e, &c).unwrap();
        let series = series_coefficients(&state, &e, &scale).unwrap();
        let b = series.scaled_coefficients();
        let degree = b.len() - 1;
        let mut companion = DMatrix::<f64>::zeros(degree, degree);
        for i in 1..degree {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..degree {
            companion[(i, degree - 1)] = -b[i] / b[degree];
        }
        let mut oracle: Vec<f64> = companion
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() < 1e-9 * z.norm() && z.re > 0.0)
            .map(|z| z.re * series.r0)
            .collect();
        oracle.sort_by(f64::total_cmp);
        let found = node_positions(&series).unwrap();
        assert_eq!(found.len(), 3);
        assert_eq!(oracle.len(), found.len(), "l = {l}");
        for (a, b) in oracle.iter().zip(&found) {
            assert!((a - b).abs() <= 1e-8 * b, "l = {l}: {a} vs {b}");
        }
    }
}

#[test]
fn stable_binding_matches_naive_form_and_survives_tiny_alpha() {
    let c = PhysicalConstants::default();
    let ground = energy_eigenvalue(
        &BoundState::spinless(0, 0, BranchSign::Sommerfeld).unwrap(),
        &c,
    )
    .unwrap();
    let naive = (ground.total_energy_ratio - 1.0) * c.electron_rest_energy;
    let stable = binding_energy_stable(ground.coulomb_ratio, &c);
    assert!((naive - stable).abs() <= 4.0 * f64::EPSILON * c.electron_rest_energy);

    let tiny = c.with_alpha(1e-9).unwrap();
    let e = energy_eigenvalue(
        &BoundState::spinless(0, 0, BranchSign::Sommerfeld).unwrap(),
        &tiny,
    )
    .unwrap();
    let bohr = -0.5 * 1e-18 * c.electron_rest_energy;
    assert!((e.binding_energy / bohr - 1.0).abs() < 1e-12);
    // the naive difference rounds to zero here
    assert_eq!(e.total_energy_ratio - 1.0, 0.0);
}

#[test]
fn levels_rise_with_principal_number() {
    let c = PhysicalConstants::default();
    for mode in [SpinMode::Spinless, SpinMode::SpinHalf] {
        let angular = if mode == SpinMode::Spinless { 0 } else { -1 };
        let mut previous = f64::NEG_INFINITY;
        for n_r in 0..8 {
            let s = BoundState::new(
                mode,
                n_r,
                angular,
                BranchSign::Sommerfeld,
                Default::default(),
            )
            .unwrap();
            let b = energy_eigenvalue(&s, &c).unwrap().binding_energy;
            assert!(b > previous, "{mode} n_r {n_r}");
            previous = b;
        }
    }
}

#[test]
fn spinless_levels_split_by_angular_momentum() {
    let c = PhysicalConstants::default();
    for n in [2u32, 3, 4] {
        let bindings: Vec<f64> = (0..n as i32)
            .map(|l| {
                let s = BoundState::spinless_principal(n, l, BranchSign::Sommerfeld).unwrap();
                energy_eigenvalue(&s, &c).unwrap().binding_energy
            })
            .collect();
        for pair in bindings.windows(2) {
            assert!(pair[0] < pair[1], "n = {n}: {bindings:?}");
            assert!(pair[1] - pair[0] > 1e-7, "n = {n}: split too small");
        }
    }
}
