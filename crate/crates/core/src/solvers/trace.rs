use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

pub const CSV_HEADER: &str = "projections,nu_s,nu_d,g,seconds";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub projections: u64,
    pub nu_s: f64,
    pub nu_d: f64,
    pub g: f64,
    pub seconds: f64,
}

/// Gap history of a run, keyed by strictly increasing projection counts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GapTrace {
    records: Vec<TraceRecord>,
}

impl GapTrace {
    /// Records at an already-seen projection count replace the previous one.
    pub fn push(&mut self, rec: TraceRecord) {
        match self.records.last_mut() {
            Some(last) if last.projections >= rec.projections => *last = rec,
            _ => self.records.push(rec),
        }
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn first(&self) -> Option<&TraceRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// First recorded projection count at which `ν_s ≤ threshold`.
    pub fn projections_to_reach(&self, threshold: f64) -> Option<u64> {
        self.records
            .iter()
            .find(|r| r.nu_s <= threshold)
            .map(|r| r.projections)
    }

    /// Like [`Self::projections_to_reach`] with the threshold taken relative
    /// to the first recorded `ν_s`.
    pub fn projections_to_reach_relative(&self, fraction: f64) -> Option<u64> {
        let base = self.first()?.nu_s;
        self.projections_to_reach(fraction * base)
    }

    /// CSV with header `projections,nu_s,nu_d,g,seconds`; floats carry 17
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.projections, r.nu_s, r.nu_d, r.g, r.seconds
            )
            .unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: u64, nu_s: f64) -> TraceRecord {
        TraceRecord {
            projections: p,
            nu_s,
            nu_d: 0.5,
            g: 2.0,
            seconds: 0.0,
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = GapTrace::default();
        t.push(rec(0, 1.0));
        t.push(rec(10, 0.1));
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "0,1.0000000000000000e0,5.0000000000000000e-1,2.0000000000000000e0,0.0000000000000000e0"
        );
        // 17 significant digits survive a parse round trip
        let v: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 0.1);
    }

    #[test]
    fn duplicate_projection_counts_collapse() {
        let mut t = GapTrace::default();
        t.push(rec(5, 1.0));
        t.push(rec(5, 0.5));
        assert_eq!(t.len(), 1);
        assert_eq!(t.last().unwrap().nu_s, 0.5);
    }

    #[test]
    fn reach_thresholds() {
        let mut t = GapTrace::default();
        for (p, v) in [(0, 8.0), (4, 1.0), (8, 0.01)] {
            t.push(rec(p, v));
        }
        assert_eq!(t.projections_to_reach(1.0), Some(4));
        assert_eq!(t.projections_to_reach_relative(1e-2), Some(8));
        assert_eq!(t.projections_to_reach(1e-9), None);
    }
}
