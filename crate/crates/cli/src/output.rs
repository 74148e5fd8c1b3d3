//! Key=value text output mirrored into a JSON run record.

use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Collected results of one command. Every `kv` lands in both the text
/// output and the JSON `outputs` map; `line` is text-only decoration.
#[derive(Default)]
pub struct Out {
    text: Vec<String>,
    outputs: Map<String, Value>,
    /// `false` as soon as a requested check fails.
    pub ok: bool,
}

impl Out {
    pub fn new() -> Out {
        Out { ok: true, ..Default::default() }
    }

    pub fn kv(&mut self, key: &str, value: impl Into<Value>) {
        let value = value.into();
        self.text.push(format!("{key}={}", render(&value)));
        self.outputs.insert(key.to_string(), value);
    }

    /// A boolean check; a failure makes the run exit nonzero.
    pub fn check(&mut self, key: &str, passed: bool) {
        self.ok &= passed;
        self.kv(key, passed);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.text.push(text.into());
    }

    /// JSON-only value (the text already shows it in another form).
    pub fn json(&mut self, key: &str, value: impl Into<Value>) {
        self.outputs.insert(key.to_string(), value.into());
    }

    pub fn text(&self) -> String {
        let mut s = self.text.join("\n");
        s.push('\n');
        s
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(render).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

/// Inputs, seed and outputs of one invocation. Identical inputs and seed
/// give identical `outputs`; only `wall_seconds` varies.
pub struct RunRecord {
    command: String,
    inputs: Map<String, Value>,
    seed: u64,
    start: Instant,
}

impl RunRecord {
    pub fn new(command: &str, seed: u64) -> RunRecord {
        RunRecord { command: command.to_string(), inputs: Map::new(), seed, start: Instant::now() }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(path.display().to_string(), Value::String(format!("sha256:{hex}")));
    }

    pub fn to_json(&self, out: &Out) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "outputs": out.outputs,
            "ok": out.ok,
            "wall_seconds": self.start.elapsed().as_secs_f64(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let mut out = Out::new();
        out.kv("rank", 2);
        out.kv("group", json!([4, 4]));
        out.check("agree", false);
        assert_eq!(out.text(), "rank=2\ngroup=[4,4]\nagree=false\n");
        assert!(!out.ok);
        let mut rec = RunRecord::new("code", 0);
        rec.add_input(Path::new("x.coc"), b"abc");
        let j = rec.to_json(&out);
        assert_eq!(j["outputs"]["group"], json!([4, 4]));
        assert_eq!(
            j["inputs"]["x.coc"],
            "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
