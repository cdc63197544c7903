use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::args::Command;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub tool_version: String,
    pub wall_time: f64,
    pub results: Value,
}

/// SHA-256 of the canonical JSON of every input that affects the results.
pub fn config_hash(command: &Command, degrees: bool) -> String {
    let canonical = serde_json::json!({
        "command": command.name(),
        "args": command,
        "degrees": degrees,
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}
