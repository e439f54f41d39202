//! Named configurations, reachable as `--config preset:NAME`.

use stobgk::counterexample::{Profile, StochasticSetup};
use stobgk::kinetic::{FieldPreset, FluxPreset, InitialData};

use crate::config::*;

pub const NAMES: &[&str] = &[
    "burgers_shock",
    "burgers_continuation",
    "linear_bump",
    "sine_growth",
    "shear_bump",
    "counterexample",
    "levy",
];

pub fn named(name: &str) -> Option<RunConfig> {
    Some(match name {
        "burgers_shock" => burgers_shock(),
        "burgers_continuation" => burgers_continuation(),
        "linear_bump" => linear_bump(),
        "sine_growth" => sine_growth(),
        "shear_bump" => shear_bump(),
        "counterexample" => counterexample(),
        "levy" => levy(),
        _ => return None,
    })
}

fn base(experiment: &str) -> RunConfig {
    RunConfig {
        experiment: experiment.into(),
        dim: 1,
        flux: FluxPreset::Burgers,
        field: FieldPreset::Constant { value: vec![1.0] },
        initial: InitialData::Plateau { lo: -1.0, hi: 0.0, value: 1.0 },
        grid: GridSection { half_width: 8.0, cells: 512 },
        velocity: VelocitySection { cells: 64 },
        bgk: BgkSection { epsilon: vec![1.0 / 32.0], dt: 1.0 / 32.0, t_final: 1.0, snapshot_stride: 1 },
        monte_carlo: MonteCarloSection { paths: 1, master_seed: 2024, noise: Noise::Brownian },
        audits: AuditToggles::default(),
        convergence: None,
        counterexample: None,
        paths: None,
        out: None,
    }
}

/// Riemann step under Burgers with transport noise: one shock, one
/// rarefaction.
pub fn burgers_shock() -> RunConfig {
    RunConfig {
        convergence: Some(ConvergenceSection {
            levels: vec![256, 512, 1024, 2048],
            oracle: OracleKind::Shift,
            dt_per_h: 1.0,
            eps_per_dt: 1.0,
            velocity_ratio: 16,
            oracle_refine: 4,
            oracle_cfl: 0.5,
        }),
        ..base("burgers_shock")
    }
}

/// Smooth bump steepening into a shock, relaxed at decreasing ε.
pub fn burgers_continuation() -> RunConfig {
    RunConfig {
        initial: InitialData::Bump { center: vec![0.0], radius: 1.5, height: 1.0 },
        grid: GridSection { half_width: 10.0, cells: 1280 },
        bgk: BgkSection {
            epsilon: vec![0.04, 0.02, 0.01],
            dt: 1.0 / 256.0,
            t_final: 1.0,
            snapshot_stride: 32,
        },
        ..base("burgers_continuation")
    }
}

/// Linear advection without noise, checked against exact characteristics.
pub fn linear_bump() -> RunConfig {
    RunConfig {
        flux: FluxPreset::Linear { speed: 1.0 },
        initial: InitialData::Bump { center: vec![0.0], radius: 1.5, height: 1.0 },
        grid: GridSection { half_width: 10.0, cells: 640 },
        velocity: VelocitySection { cells: 16 },
        monte_carlo: MonteCarloSection { paths: 1, master_seed: 2024, noise: Noise::Zero },
        convergence: Some(ConvergenceSection {
            levels: vec![160, 320, 640, 1280],
            oracle: OracleKind::Characteristics,
            dt_per_h: 0.5,
            eps_per_dt: 1.0,
            velocity_ratio: 64,
            oracle_refine: 4,
            oracle_cfl: 0.5,
        }),
        ..base("linear_bump")
    }
}

/// Compressible field `a sin x`: the L¹ norm may grow, within `e^{C0 t}`.
pub fn sine_growth() -> RunConfig {
    RunConfig {
        field: FieldPreset::Sine { amplitude: 0.5 },
        initial: InitialData::Bump { center: vec![0.0], radius: 1.5, height: 1.0 },
        grid: GridSection { half_width: 8.0, cells: 256 },
        velocity: VelocitySection { cells: 32 },
        bgk: BgkSection { epsilon: vec![0.05], dt: 0.025, t_final: 1.0, snapshot_stride: 1 },
        ..base("sine_growth")
    }
}

/// Planar Burgers bump in the divergence-free shear `(a sin y, 0)`.
pub fn shear_bump() -> RunConfig {
    RunConfig {
        dim: 2,
        field: FieldPreset::Shear { amplitude: 0.5 },
        initial: InitialData::Bump { center: vec![0.0, 0.0], radius: 1.0, height: 1.0 },
        grid: GridSection { half_width: 6.0, cells: 96 },
        velocity: VelocitySection { cells: 16 },
        bgk: BgkSection { epsilon: vec![0.0625], dt: 0.0625, t_final: 0.5, snapshot_stride: 1 },
        ..base("shear_bump")
    }
}

/// Non-uniqueness field: deterministic and stochastic BV ladders.
pub fn counterexample() -> RunConfig {
    RunConfig {
        dim: 2,
        flux: FluxPreset::Linear { speed: 1.0 },
        field: FieldPreset::Counterexample,
        initial: InitialData::Cusp,
        grid: GridSection { half_width: 6.0, cells: 128 },
        velocity: VelocitySection { cells: 4 },
        bgk: BgkSection { epsilon: vec![0.02], dt: 0.02, t_final: 1.0, snapshot_stride: 50 },
        counterexample: Some(CounterexampleSection {
            half_width: 3.0,
            t: 1.0,
            deterministic_levels: vec![128, 256, 512, 1024],
            stochastic_levels: vec![64, 128, 256],
            stochastic_profiles: vec![Profile::Cusp],
            stochastic: StochasticSetup::default(),
            figure_cells: 128,
        }),
        ..base("counterexample")
    }
}

/// Lévy modulus statistic in one and two dimensions.
pub fn levy() -> RunConfig {
    RunConfig {
        paths: Some(PathsSection { dims: vec![1, 2], delta_log2: 14, steps_per_delta: 4, paths: 100, horizon: 1.0 }),
        ..base("levy")
    }
}
