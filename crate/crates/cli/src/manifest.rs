use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::Value;

/// What was run and with which resolved settings. Reports embed the
/// timestamp-free form; `manifest.json` also carries the timestamps.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub started_at: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<String>,
    #[serde(skip)]
    start: Option<DateTime<Utc>>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config: BTreeMap::new(),
            started_at: None,
            finished_at: None,
            start: Some(Utc::now()),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("config values serialize");
        self.config.insert(key.to_string(), value);
    }

    /// The form embedded in report bodies.
    pub fn body(&self) -> RunManifest {
        RunManifest {
            started_at: None,
            finished_at: None,
            start: None,
            ..self.clone()
        }
    }

    pub fn finished(&self) -> RunManifest {
        let stamp = |t: DateTime<Utc>| t.to_rfc3339_opts(SecondsFormat::Millis, true);
        RunManifest {
            started_at: self.start.map(stamp),
            finished_at: Some(stamp(Utc::now())),
            ..self.clone()
        }
    }
}
