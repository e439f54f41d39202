use proptest::prelude::*;
use stobgk::audit::{check_comparison, check_max_principle};
use stobgk::bgk::{run_simulation, BgkConfig};
use stobgk::counterexample::field::{g, g_inverse, g_inverse_log};
use stobgk::flow::{flow_forward, BrownianPath};
use stobgk::kinetic::{
    maxwellian_cell, DensityField, FieldPreset, FluxPreset, KineticField, ProblemSpec, SpatialGrid,
    VelocityGrid,
};
use stobgk::oracles::godunov_solve;

const CELLS: usize = 32;

fn grid() -> SpatialGrid {
    SpatialGrid::new(1, 4.0, CELLS).unwrap()
}

fn density(values: Vec<f64>) -> DensityField {
    DensityField::from_values(grid(), values).unwrap()
}

/// Compactly supported densities: the outer quarter of the box stays zero so
/// that short runs never reach the boundary.
fn supported() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, CELLS / 2).prop_map(|inner| {
        let mut v = vec![0.0; CELLS];
        v[CELLS / 4..CELLS / 4 + inner.len()].copy_from_slice(&inner);
        v
    })
}

fn burgers(field: FieldPreset) -> ProblemSpec {
    ProblemSpec::from_presets(1, &FluxPreset::Burgers, &field).unwrap()
}

fn short_run(spec: &ProblemSpec, rho0: &DensityField, vgrid: VelocityGrid, seed: u64) -> stobgk::bgk::Trajectory {
    let dt = 0.125;
    let cfg = BgkConfig::new(dt, dt, 0.5);
    let path = BrownianPath::sample(1, dt, 0.5, seed, 0).unwrap();
    run_simulation(spec, rho0, vgrid, &cfg, &path).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_then_integrate_recovers_density(v in prop::collection::vec(-1.0f64..1.0, CELLS)) {
        let rho = density(v);
        let vgrid = VelocityGrid::covering(1.0, 16).unwrap();
        let back = KineticField::lift(&rho, vgrid).unwrap().density();
        for (a, b) in rho.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() <= 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn maxwellian_cells_carry_the_sign_of_rho(rho in -1.0f64..1.0, j in 0usize..16) {
        let vgrid = VelocityGrid::covering(1.0, 16).unwrap();
        let u = maxwellian_cell(&vgrid, rho, j);
        prop_assert!((-1.0..=1.0).contains(&u));
        prop_assert!(u * rho >= 0.0);
    }

    #[test]
    fn splitting_keeps_the_maximum_principle(v in supported(), seed in 0u64..1000) {
        let rho0 = density(v);
        let vgrid = VelocityGrid::covering(rho0.sup_norm().max(1e-3), 16).unwrap();
        let traj = short_run(&burgers(FieldPreset::Sine { amplitude: 0.5 }), &rho0, vgrid, seed);
        prop_assert!(check_max_principle(&traj).pass);
    }

    #[test]
    fn ordered_data_stay_ordered(v in supported(), lift in prop::collection::vec(0.0f64..0.5, CELLS), seed in 0u64..1000) {
        let lower = density(v);
        let upper_vals = lower.values().iter().zip(&lift).map(|(a, b)| a + b).collect();
        let upper = density(upper_vals);
        let vgrid = VelocityGrid::covering(upper.sup_norm().max(lower.sup_norm()), 16).unwrap();
        let spec = burgers(FieldPreset::Constant { value: vec![1.0] });
        let a = short_run(&spec, &lower, vgrid, seed);
        let b = short_run(&spec, &upper, vgrid, seed);
        prop_assert!(check_comparison(&a, &b).unwrap().measured >= -1e-12);
    }

    #[test]
    fn constant_field_contracts_l1_distance(u in supported(), w in supported(), seed in 0u64..1000) {
        let (a0, b0) = (density(u), density(w));
        let vgrid = VelocityGrid::covering(1.0, 16).unwrap();
        let spec = burgers(FieldPreset::Constant { value: vec![1.0] });
        let a = short_run(&spec, &a0, vgrid, seed);
        let b = short_run(&spec, &b0, vgrid, seed);
        let before = a0.l1_distance(&b0).unwrap();
        let after = a.last().l1_distance(b.last()).unwrap();
        prop_assert!(after <= before + 1e-12, "{after} > {before}");
    }

    #[test]
    fn g_inverse_inverts_g(y in 0.0f64..5.0) {
        let back = g_inverse(g(y)).unwrap();
        prop_assert!((back - y).abs() <= 1e-12 * y.max(1.0));
    }

    #[test]
    fn log_form_agrees_where_both_are_finite(l in -30.0f64..30.0) {
        let direct = g_inverse(l.exp()).unwrap();
        prop_assert!((direct - g_inverse_log(l)).abs() <= 1e-14 * direct.max(1.0));
    }

    #[test]
    fn forward_flow_is_monotone_in_space(x in -2.0f64..2.0, gap in 1e-3f64..1.0, v in -1.0f64..1.0, seed in 0u64..1000) {
        let spec = burgers(FieldPreset::Sine { amplitude: 0.5 });
        let path = BrownianPath::sample(1, 0.01, 1.0, seed, 0).unwrap();
        let a = flow_forward(&spec, v, &path, 0.0, 1.0, &[x, 0.0]).unwrap();
        let b = flow_forward(&spec, v, &path, 0.0, 1.0, &[x + gap, 0.0]).unwrap();
        prop_assert!(a[0] < b[0]);
    }

    #[test]
    fn coarsening_keeps_the_nodes(seed in 0u64..1000, factor in prop::sample::select(vec![1usize, 2, 4, 8])) {
        let fine = BrownianPath::sample(2, 1.0 / 64.0, 1.0, seed, 0).unwrap();
        let coarse = fine.coarsen(factor).unwrap();
        for k in 0..=coarse.steps() {
            let (p, q) = (coarse.node(k), fine.node(k * factor));
            prop_assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn conservative_resampling_keeps_mass(v in prop::collection::vec(-1.0f64..1.0, CELLS)) {
        let rho = density(v);
        let fine = rho.resample_conservative(grid().refined(4).unwrap()).unwrap();
        let back = fine.resample_conservative(grid()).unwrap();
        let mass = |d: &DensityField| d.values().iter().sum::<f64>() * d.grid().cell_volume();
        prop_assert!((mass(&rho) - mass(&fine)).abs() < 1e-12);
        for (a, b) in rho.values().iter().zip(back.values()) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn godunov_conserves_mass_away_from_the_boundary(v in supported()) {
        let rho0 = density(v);
        let flux = stobgk::kinetic::Flux::burgers();
        let out = godunov_solve(&flux, &rho0, 0.1, 0.5, usize::MAX).unwrap();
        let mass = |d: &DensityField| d.values().iter().sum::<f64>();
        prop_assert!((mass(&rho0) - mass(out.last())).abs() < 1e-10);
    }
}
