//! Run reports: a command echo, an input digest, the seed, and output
//! lines. Reruns with identical inputs and seed produce a byte-identical
//! body; the wall-clock line is appended outside the body so tests can
//! compare reports exactly.

use std::time::Instant;

pub struct RunReport {
    command: String,
    digest: Option<u64>,
    seed: Option<u64>,
    lines: Vec<String>,
    started: Instant,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            digest: None,
            seed: None,
            lines: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn set_input(&mut self, bytes: &[u8]) {
        self.digest = Some(fnv1a64(bytes));
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// Deterministic part of the report.
    pub fn body(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        if let Some(d) = self.digest {
            out.push_str(&format!("input-digest: {d:016x}\n"));
        }
        if let Some(s) = self.seed {
            out.push_str(&format!("seed: {s}\n"));
        }
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    /// Body plus the wall-clock line.
    pub fn render(&self) -> String {
        format!(
            "{}wall-clock-ms: {}\n",
            self.body(),
            self.started.elapsed().as_millis()
        )
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
