//! Flat `key = value` reports and the trajectory table.

use std::fmt::Display;
use std::io::{self, Write};

use blowup_core::solver::Trajectory;

/// Column names of `trajectory.csv`.
pub const TRAJECTORY_HEADER: &str = "t,dt,M,Nmax,argmax_u,argmax_v,sup_u_interior,sup_v_interior,flux_u,flux_v";

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Skipped => "skipped",
        }
    }

    /// Worst of two outcomes; fail dominates, skipped counts as nothing.
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Skipped, x) | (x, Skipped) => x,
            (Pass, Pass) => Pass,
        }
    }
}

impl Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordered key-value lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn put_opt<V: Display>(&mut self, key: impl Into<String>, value: Option<V>) {
        match value {
            Some(v) => self.put(key, v),
            None => self.put(key, "none"),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{k} = {v}")?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("write to memory");
        String::from_utf8(out).expect("utf8")
    }
}

/// Writes the samples; floats use Rust's shortest round-trip formatting.
pub fn write_trajectory<W: Write>(traj: &Trajectory<f64>, mut w: W) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for s in &traj.samples {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            s.t, s.dt, s.max_u, s.max_v, s.argmax_u, s.argmax_v, s.sup_u_interior, s.sup_v_interior, s.flux_u, s.flux_v
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_order() {
        assert_eq!(Status::Pass.combine(Status::Skipped), Status::Pass);
        assert_eq!(Status::Pass.combine(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.combine(Status::Fail), Status::Fail);
        assert_eq!(Status::Skipped.combine(Status::Skipped), Status::Skipped);
    }

    #[test]
    fn report_lines() {
        let mut r = Report::new();
        r.put("blowup.T_hat", 0.25);
        r.put_opt::<f64>("rate.alpha_hat", None);
        assert_eq!(r.render(), "blowup.T_hat = 0.25\nrate.alpha_hat = none\n");
        assert_eq!(r.get("blowup.T_hat"), Some("0.25"));
    }

    #[test]
    fn shortest_round_trip() {
        let x = 0.1f64 + 0.2;
        let s = format!("{x}");
        assert_eq!(s.parse::<f64>().unwrap(), x);
        assert_eq!(s, "0.30000000000000004");
    }
}
