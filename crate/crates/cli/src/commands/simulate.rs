use stobgk::bgk::{epsilon_continuation, run_simulation, BgkConfig};
use stobgk::flow::BrownianPath;
use stobgk::kinetic::VelocityGrid;

use super::{seal, stamp, Outcome, RunOptions};
use crate::bundle::BundleWriter;
use crate::config::{Noise, RunConfig};
use crate::csvio::{num, opt_num, Table};
use crate::error::CliResult;
use crate::stored::{audit_run, decode, encode};

/// One path, one spec: runs the scheme, stores the trajectory and audits the
/// stored copy. A decreasing ε list adds a continuation table on the same
/// path.
pub fn cmd_simulate(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Outcome> {
    let spec = cfg.spec()?;
    let grid = cfg.spatial_grid()?;
    let rho0 = cfg.initial.discretize(grid);
    spec.check_padding(&rho0, cfg.bgk.t_final)?;
    let vgrid = VelocityGrid::covering(rho0.sup_norm(), cfg.velocity.cells)?;
    let path = match cfg.monte_carlo.noise {
        Noise::Brownian => BrownianPath::sample(cfg.dim, cfg.bgk.dt, cfg.bgk.t_final, cfg.monte_carlo.master_seed, 0)?,
        Noise::Zero => BrownianPath::zero(cfg.dim, cfg.bgk.dt, cfg.bgk.t_final)?,
    };
    let eps = cfg.bgk.epsilon[0];
    let bgk = BgkConfig::new(eps, cfg.bgk.dt, cfg.bgk.t_final)
        .with_stride(cfg.bgk.snapshot_stride)
        .with_exec(opts.exec);
    log::info!("simulate {}: {} cells, {} velocity cells", cfg.experiment, grid.len(), vgrid.cells());
    let traj = run_simulation(&spec, &rho0, vgrid, &bgk, &path)?;

    let stamp = stamp(cfg);
    let files = encode(&traj, eps, &stamp);
    let lookup = |name: &str| -> CliResult<String> {
        Ok(files.iter().find(|(n, _)| *n == name).map(|(_, s)| s.clone()).unwrap_or_default())
    };
    let stored = decode(cfg, &lookup)?;
    let (report, mut notes) = audit_run(cfg, &stored);
    notes.extend(traj.warnings.iter().cloned());

    let mut w = BundleWriter::create(&opts.bundle_dir("simulate"), "simulate")?;
    for (name, text) in &files {
        w.write(name, text)?;
    }
    if cfg.bgk.epsilon.len() > 1 {
        let base = bgk.clone().with_stride(usize::MAX);
        let rows = epsilon_continuation(&spec, &rho0, vgrid, &base, &cfg.bgk.epsilon, &path)?;
        let mut t = Table::new(&["epsilon", "nonequilibrium_l1", "cauchy_l1"]);
        for r in &rows {
            t.push(vec![num(r.epsilon), num(r.nonequilibrium), opt_num(r.cauchy)]);
        }
        w.write("continuation.csv", &t.render(&stamp))?;
    }
    let bundle = seal(w, cfg, &report, &notes)?;
    Ok(Outcome { bundle: Some(bundle), report, notes })
}
