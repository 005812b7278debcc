//! Trace files: arrivals in seconds, lengths in bits, optional schedule.

use std::path::Path;

use ncdelay_core::{SimResult, Trace};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFile {
    #[serde(rename = "L_max")]
    pub max_length: f64,
    pub packets: Vec<PacketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<ScheduleEntry>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketEntry {
    #[serde(rename = "A")]
    pub arrival: f64,
    pub l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    #[serde(rename = "Q")]
    pub start: f64,
    #[serde(rename = "D")]
    pub departure: f64,
}

impl TraceFile {
    pub fn from_trace(trace: &Trace, schedule: Option<&[(f64, f64)]>) -> Self {
        TraceFile {
            max_length: trace.max_length(),
            packets: trace
                .packets()
                .iter()
                .map(|p| PacketEntry {
                    arrival: p.arrival,
                    l: p.length,
                })
                .collect(),
            schedule: schedule.map(|s| {
                s.iter()
                    .map(|&(start, departure)| ScheduleEntry { start, departure })
                    .collect()
            }),
        }
    }

    pub fn from_result(result: &SimResult, max_length: f64) -> Result<Self, CliError> {
        let trace = Trace::new(
            result.packets.iter().map(|p| (p.arrival, p.length)),
            max_length,
        )?;
        Ok(Self::from_trace(&trace, Some(&result.schedule())))
    }

    pub fn to_trace(&self) -> Result<Trace, CliError> {
        Trace::new(
            self.packets.iter().map(|p| (p.arrival, p.l)),
            self.max_length,
        )
        .map_err(|e| CliError::Config(format!("trace: {e}")))
    }

    pub fn schedule_pairs(&self) -> Option<Vec<(f64, f64)>> {
        self.schedule
            .as_ref()
            .map(|s| s.iter().map(|e| (e.start, e.departure)).collect())
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read trace {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("trace {}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).expect("plain data serializes");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}
