use std::fmt::Write as _;

/// One row of an audit: a measured quantity against a bound.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub check: String,
    pub measured: f64,
    pub bound: f64,
    pub tol: f64,
    pub pass: bool,
}

impl AuditEntry {
    /// Passes when `measured <= bound + tol`.
    pub fn at_most(check: impl Into<String>, measured: f64, bound: f64, tol: f64) -> Self {
        let pass = measured <= bound + tol;
        Self { check: check.into(), measured, bound, tol, pass }
    }

    /// Passes when `measured >= bound - tol`.
    pub fn at_least(check: impl Into<String>, measured: f64, bound: f64, tol: f64) -> Self {
        let pass = measured >= bound - tol;
        Self { check: check.into(), measured, bound, tol, pass }
    }

    /// Passes when `lo <= measured <= hi`; `bound` records the midpoint and
    /// `tol` the half-width.
    pub fn within(check: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Self {
        let pass = measured >= lo && measured <= hi;
        Self { check: check.into(), measured, bound: 0.5 * (lo + hi), tol: 0.5 * (hi - lo), pass }
    }

    pub fn status(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: AuditEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn get(&self, check: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.check == check)
    }

    /// `check,measured,bound,tol,status` with shortest round-trip floats.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,measured,bound,tol,status\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{:?},{:?},{:?},{}", e.check, e.measured, e.bound, e.tol, e.status());
        }
        s
    }

    pub fn to_table(&self) -> String {
        let width = self.entries.iter().map(|e| e.check.len()).max().unwrap_or(5).max(5);
        let mut s = format!("{:<width$}  {:>14}  {:>14}  {:>10}  status\n", "check", "measured", "bound", "tol");
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<width$}  {:>14.6e}  {:>14.6e}  {:>10.2e}  {}",
                e.check,
                e.measured,
                e.bound,
                e.tol,
                e.status()
            );
        }
        s
    }
}
