use super::config::BgkConfig;
use super::defect::{accumulate_defect, DefectAccumulator, SlabDefect};
use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::flow::BrownianPath;
use crate::kinetic::field::{blend, check_velocity_range};
use crate::kinetic::{
    maxwellian_cell, DensityField, KineticField, Point, ProblemSpec, SpatialGrid, VelocityGrid,
};
use crate::par::{self, Exec};

/// Precomputed geometry for repeated transport-relaxation steps.
pub struct Stepper<'a> {
    spec: &'a ProblemSpec,
    grid: SpatialGrid,
    vgrid: VelocityGrid,
    centers: Vec<Point>,
    drift: Vec<Point>,
    speeds: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(spec: &'a ProblemSpec, grid: SpatialGrid, vgrid: VelocityGrid) -> Result<Self> {
        if spec.dim != grid.dim() {
            return Err(Error::GridMismatch(format!(
                "problem is {}-dimensional, grid is {}-dimensional",
                spec.dim,
                grid.dim()
            )));
        }
        let centers: Vec<Point> = (0..grid.len()).map(|i| grid.center(i)).collect();
        let drift = centers.iter().map(|c| spec.field.eval(c)).collect();
        let speeds = (0..vgrid.cells()).map(|j| spec.flux.derivative(vgrid.center(j))).collect();
        Ok(Self { spec, grid, vgrid, centers, drift, speeds })
    }

    pub fn spec(&self) -> &ProblemSpec {
        self.spec
    }

    /// Foot of the backward characteristic through cell `c` for velocity
    /// cell `j` over one step.
    #[inline]
    pub fn foot(&self, c: usize, j: usize, dt: f64, db: &Point) -> Point {
        let s = dt * self.speeds[j];
        let x = &self.centers[c];
        let b = &self.drift[c];
        [x[0] - s * b[0] - db[0], x[1] - s * b[1] - db[1]]
    }

    /// Foot of the backward characteristic through an arbitrary point.
    #[inline]
    pub fn foot_at(&self, x: &Point, j: usize, dt: f64, db: &Point) -> Point {
        let s = dt * self.speeds[j];
        let b = self.spec.field.eval(x);
        if self.grid.dim() == 1 {
            [x[0] - s * b[0] - db[0], 0.0]
        } else {
            [x[0] - s * b[0] - db[0], x[1] - s * b[1] - db[1]]
        }
    }

    /// Semi-Lagrangian free transport of every velocity plane.
    pub fn transport(&self, input: &KineticField, out: &mut KineticField, dt: f64, db: &Point, exec: Exec) {
        let n = self.grid.len();
        let db = if self.grid.dim() == 1 { [db[0], 0.0] } else { *db };
        par::for_each_chunk_mut(exec, out.values_mut(), n, |j, plane| {
            let src = input.plane(j);
            for (c, o) in plane.iter_mut().enumerate() {
                *o = sample(&self.grid, src, &self.foot(c, j, dt, &db));
            }
        });
    }

    /// Relaxes `state` towards the equilibrium of its own density:
    /// `u ← χ + e^{-dt/ε}(u - χ)`, clamped between `u` and `χ`.
    pub fn relax(&self, state: &mut KineticField, epsilon: f64, dt: f64, exec: Exec) -> DensityField {
        let rho = state.density();
        let a = (-dt / epsilon).exp();
        let n = self.grid.len();
        let vg = self.vgrid;
        let rv = rho.values();
        par::for_each_chunk_mut(exec, state.values_mut(), n, |j, plane| {
            for (u, &r) in plane.iter_mut().zip(rv) {
                let chi = maxwellian_cell(&vg, r, j);
                *u = blend(chi, *u, a);
            }
        });
        rho
    }

    /// One transport step followed by relaxation; returns the transported
    /// state and the defect released in the slab.
    pub fn step(
        &self,
        state: &mut KineticField,
        scratch: &mut KineticField,
        epsilon: f64,
        dt: f64,
        db: &Point,
        keep_cells: bool,
        exec: Exec,
    ) -> Result<SlabDefect> {
        self.transport(state, scratch, dt, db, exec);
        let slab = accumulate_defect(scratch, epsilon, dt, keep_cells, exec)?;
        state.values_mut().copy_from_slice(scratch.values());
        self.relax(state, epsilon, dt, exec);
        Ok(slab)
    }
}

/// Bilinear sample at `p` with clamped blends and zero outside the box.
#[inline]
fn sample(grid: &SpatialGrid, values: &[f64], p: &Point) -> f64 {
    crate::kinetic::interpolate_plane(grid, values, p)
}

/// Runs the splitting scheme from `rho0` along `path` up to `config.t_final`.
pub fn run_simulation(
    spec: &ProblemSpec,
    rho0: &DensityField,
    vgrid: VelocityGrid,
    config: &BgkConfig,
    path: &BrownianPath,
) -> Result<Trajectory> {
    let warnings = config.validate()?;
    for w in &warnings {
        log::warn!("{w}");
    }
    let steps = config.steps()?;
    check_path(path, rho0.grid().dim(), config.dt, steps)?;
    check_velocity_range(rho0, &vgrid)?;

    let grid = *rho0.grid();
    let stepper = Stepper::new(spec, grid, vgrid)?;
    let mut state = KineticField::lift(rho0, vgrid)?;
    let mut scratch = KineticField::zeros(grid, vgrid);
    let stride = config.snapshot_stride;
    let exec = config.exec;

    let mut traj = Trajectory {
        spec: spec.clone(),
        path: path.clone(),
        config: Some(config.clone()),
        vgrid: Some(vgrid),
        times: vec![0.0],
        steps: vec![0],
        densities: vec![rho0.clone()],
        kinetic: Vec::new(),
        transported: Vec::new(),
        kinetic_l1: vec![state.l1_norm()],
        nonequilibrium_l1: vec![0.0],
        defect: DefectAccumulator::new(config.dt),
        warnings,
    };
    if config.keep_kinetic {
        traj.kinetic.push(state.clone());
        traj.transported.push(state.clone());
    }

    for k in 0..steps {
        let slab = stepper.step(
            &mut state,
            &mut scratch,
            config.epsilon,
            config.dt,
            &path.increment(k),
            config.keep_kinetic,
            exec,
        )?;
        traj.defect.push(slab);
        let done = k + 1;
        if done % stride == 0 || done == steps {
            let rho = state.density();
            if let Some(i) = rho.values().iter().position(|v| !v.is_finite()) {
                return Err(Error::NumericalAbort {
                    step: done,
                    time: done as f64 * config.dt,
                    detail: format!("non-finite density at cell {i}"),
                });
            }
            traj.times.push(done as f64 * config.dt);
            traj.steps.push(done);
            traj.kinetic_l1.push(state.l1_norm());
            traj.nonequilibrium_l1.push(state.distance_to_equilibrium());
            traj.densities.push(rho);
            if config.keep_kinetic {
                traj.kinetic.push(state.clone());
                traj.transported.push(scratch.clone());
            }
        }
    }
    Ok(traj)
}

pub(crate) fn check_path(path: &BrownianPath, dim: usize, dt: f64, steps: usize) -> Result<()> {
    if path.dim() != dim {
        return Err(Error::Config(format!(
            "path is {}-dimensional, grid is {dim}-dimensional",
            path.dim()
        )));
    }
    if ((path.dt() - dt) / dt).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "path step {} differs from scheme step {dt}",
            path.dt()
        )));
    }
    if path.steps() < steps {
        return Err(Error::Config(format!(
            "path covers {} steps, run needs {steps}",
            path.steps()
        )));
    }
    Ok(())
}

/// Runs `paths` independent realizations and maps each trajectory through
/// `reduce`. Paths are drawn from `(master_seed, index)`, so the output is
/// independent of scheduling.
#[allow(clippy::too_many_arguments)]
pub fn run_ensemble<R, F>(
    spec: &ProblemSpec,
    rho0: &DensityField,
    vgrid: VelocityGrid,
    config: &BgkConfig,
    master_seed: u64,
    paths: usize,
    exec: Exec,
    reduce: F,
) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(usize, &Trajectory) -> R + Sync + Send,
{
    let inner = config.clone().with_exec(Exec::Sequential);
    let dim = rho0.grid().dim();
    par::try_map_indexed(exec, paths, |i| {
        let path = BrownianPath::sample(dim, config.dt, config.t_final, master_seed, i as u64)?;
        let traj = run_simulation(spec, rho0, vgrid, &inner, &path)?;
        Ok(reduce(i, &traj))
    })
}
