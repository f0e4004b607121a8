use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use vimc::kernel::KernelReport;

/// One run's outcome. Serialized as a single JSON line with every field
/// present (null when it does not apply), so downstream tooling can rely
/// on the shape. The verdict is data, never the exit status.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdict: Option<bool>,
    pub integrity: Option<usize>,
    pub separator: Option<Vec<usize>>,
    pub kernel: Option<KernelReport>,
    /// Numeric result for oracles that return a count.
    pub value: Option<u64>,
    pub elapsed_millis: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn new(command: &str, inputs: &[&Path]) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            verdict: None,
            integrity: None,
            separator: None,
            kernel: None,
            value: None,
            elapsed_millis: BTreeMap::new(),
        }
    }

    pub fn phase(&mut self, name: &str, since: Instant) {
        self.elapsed_millis
            .insert(name.to_string(), since.elapsed().as_millis() as u64);
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_field_is_present_even_when_null() {
        let report = RunReport::new("vi", &[Path::new("g.graph")]);
        let json: serde_json::Value = serde_json::from_str(&report.to_json_line()).unwrap();
        for key in [
            "command",
            "inputs",
            "verdict",
            "integrity",
            "separator",
            "kernel",
            "value",
            "elapsed_millis",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!(json["verdict"].is_null());
        assert_eq!(json["command"], "vi");
    }
}
