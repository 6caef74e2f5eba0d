//! Report envelopes and writers.

use serde::Serialize;

/// Run provenance embedded in every JSON report.
#[derive(Serialize, Clone)]
pub struct RunConfig {
    pub mode: String,
    pub seed: u64,
    pub tol: f64,
}

#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub command: String,
    pub config: RunConfig,
    pub report: T,
}

/// Writes to `--out` or standard output.
pub fn emit(text: &str, out: &Option<std::path::PathBuf>) -> i32 {
    match out {
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            0
        }
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                1
            }
        },
    }
}

pub fn to_json<T: Serialize>(envelope: &Envelope<T>) -> String {
    serde_json::to_string_pretty(envelope).expect("reports serialise")
}
