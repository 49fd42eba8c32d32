//! Self-describing run reports, emitted as canonical JSON or as CSV rows.

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub config: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    /// Present only when timing was requested, so that reports stay
    /// byte-identical across runs by default.
    pub timing: Option<Map<String, Value>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_value(&self) -> Value {
        let checks: Vec<Value> = self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect();
        let mut out = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "summary": {"passed": self.passed(), "checks": checks},
        });
        if let Some(t) = &self.timing {
            out["timing"] = Value::Object(t.clone());
        }
        out
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialise");
        s.push('\n');
        s
    }

    /// One row per check.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["command", "check", "passed", "detail"]).expect("in-memory write");
        for c in &self.checks {
            w.write_record([self.command.as_str(), c.name.as_str(), if c.passed { "true" } else { "false" }, c.detail.as_str()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut config = Map::new();
        config.insert("seed".into(), json!(0));
        config.insert("kappa".into(), json!(3));
        Report {
            command: "bset".into(),
            config,
            results: json!({"z": 1, "a": [1, 2]}),
            checks: vec![Check::new("property_1", true, "size 2"), Check::new("property_2", false, "clique of size 3, with comma")],
            timing: None,
        }
    }

    #[test]
    fn json_keys_are_sorted() {
        let text = sample().to_json();
        let a = text.find("\"a\"").unwrap();
        let z = text.find("\"z\"").unwrap();
        assert!(a < z);
        assert!(text.find("\"command\"").unwrap() < text.find("\"config\"").unwrap());
        assert_eq!(text, sample().to_json());
        assert!(!text.contains("timing"));
    }

    #[test]
    fn csv_has_one_row_per_check() {
        let text = sample().to_csv();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "bset,property_2,false,\"clique of size 3, with comma\"");
        assert!(!sample().passed());
    }
}
