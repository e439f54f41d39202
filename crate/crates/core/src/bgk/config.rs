use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::step_count;
use crate::par::Exec;

fn one() -> usize {
    1
}

/// Parameters of a BGK run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BgkConfig {
    /// Relaxation time.
    pub epsilon: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Store every `snapshot_stride`-th step; the final step is always kept.
    #[serde(default = "one")]
    pub snapshot_stride: usize,
    /// Keep kinetic snapshots and per-cell defect slabs, needed by the
    /// kinetic weak-form audit.
    #[serde(default)]
    pub keep_kinetic: bool,
    #[serde(default)]
    pub exec: Exec,
}

impl BgkConfig {
    pub fn new(epsilon: f64, dt: f64, t_final: f64) -> Self {
        Self { epsilon, dt, t_final, snapshot_stride: 1, keep_kinetic: false, exec: Exec::default() }
    }

    pub fn with_kinetic(mut self) -> Self {
        self.keep_kinetic = true;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn steps(&self) -> Result<usize> {
        step_count(self.dt, self.t_final)
    }

    /// Validates the configuration and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config(format!("relaxation time must be positive, got {}", self.epsilon)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Config("snapshot stride must be at least 1".into()));
        }
        self.steps()?;
        let mut warnings = Vec::new();
        if self.epsilon < self.dt {
            warnings.push(format!(
                "relaxation time {} is below the time step {}; relaxation is not resolved",
                self.epsilon, self.dt
            ));
        }
        Ok(warnings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(BgkConfig::new(0.1, 0.01, 1.0).validate().unwrap().is_empty());
        assert_eq!(BgkConfig::new(0.001, 0.01, 1.0).validate().unwrap().len(), 1);
        assert!(matches!(BgkConfig::new(0.1, 2.0, 1.0).validate(), Err(Error::Config(_))));
        assert!(BgkConfig::new(-1.0, 0.1, 1.0).validate().is_err());
        assert!(BgkConfig::new(0.1, 0.1, 1.0).with_stride(0).validate().is_err());
    }
}
