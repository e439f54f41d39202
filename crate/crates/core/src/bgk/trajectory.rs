use super::config::BgkConfig;
use super::defect::DefectAccumulator;
use crate::error::{Error, Result};
use crate::flow::BrownianPath;
use crate::kinetic::{DensityField, KineticField, ProblemSpec, VelocityGrid};

/// Stored output of a run: snapshots, diagnostics and the defect record.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub spec: ProblemSpec,
    pub path: BrownianPath,
    pub config: Option<BgkConfig>,
    pub vgrid: Option<VelocityGrid>,
    pub times: Vec<f64>,
    /// Path node index of each snapshot.
    pub steps: Vec<usize>,
    pub densities: Vec<DensityField>,
    /// Relaxed kinetic states, when kept.
    pub kinetic: Vec<KineticField>,
    /// Transported states before relaxation, aligned with `kinetic`; the
    /// first entry repeats the initial state.
    pub transported: Vec<KineticField>,
    pub kinetic_l1: Vec<f64>,
    pub nonequilibrium_l1: Vec<f64>,
    pub defect: DefectAccumulator,
    pub warnings: Vec<String>,
}

impl Trajectory {
    /// A density-only trajectory, e.g. one read back from disk or built from
    /// a closed form. Snapshots must sit on path nodes.
    pub fn from_densities(
        spec: ProblemSpec,
        path: BrownianPath,
        times: Vec<f64>,
        densities: Vec<DensityField>,
    ) -> Result<Self> {
        if times.len() != densities.len() || times.is_empty() {
            return Err(Error::Config(format!(
                "{} times for {} snapshots",
                times.len(),
                densities.len()
            )));
        }
        let steps = times.iter().map(|&t| path.node_index(t)).collect::<Result<Vec<_>>>()?;
        if steps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("snapshot times must increase strictly".into()));
        }
        for d in &densities[1..] {
            densities[0].check_same_grid(d)?;
        }
        Ok(Self {
            spec,
            path,
            config: None,
            vgrid: None,
            times,
            steps,
            densities,
            kinetic: Vec::new(),
            transported: Vec::new(),
            kinetic_l1: Vec::new(),
            nonequilibrium_l1: Vec::new(),
            defect: DefectAccumulator::default(),
            warnings: Vec::new(),
        })
    }

    pub fn initial(&self) -> &DensityField {
        &self.densities[0]
    }

    pub fn last(&self) -> &DensityField {
        self.densities.last().expect("trajectory holds at least one snapshot")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least one snapshot")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn has_kinetic(&self) -> bool {
        !self.kinetic.is_empty()
    }

    /// Snapshot index closest to time `t`.
    pub fn index_near(&self, t: f64) -> usize {
        let mut best = 0;
        for (i, &s) in self.times.iter().enumerate() {
            if (s - t).abs() < (self.times[best] - t).abs() {
                best = i;
            }
        }
        best
    }
}
