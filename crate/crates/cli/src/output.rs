use std::path::Path;

use serde_json::Value;

use crate::{Format, Mode};

/// Why a run did not produce a report.
#[derive(Debug, thiserror::Error)]
pub enum Failure {
    /// bad flags or inputs
    #[error("{0}")]
    Config(String),
    /// the computation itself failed or ran out of budget
    #[error("{0}")]
    Compute(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Compute(_) => 3,
        }
    }
}

/// A finished report in every format the mode supports.
#[derive(Debug)]
pub struct Report {
    /// file stem under `--out`
    pub stem: String,
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
    pub dot: Option<String>,
    /// some result disagrees with the bundled reference values
    pub mismatch: bool,
}

impl Report {
    pub fn new(stem: impl Into<String>, json: Value, text: String) -> Self {
        Report {
            stem: stem.into(),
            json,
            text,
            csv: None,
            dot: None,
            mismatch: false,
        }
    }

    fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Json => Some(serde_json::to_string_pretty(&self.json).expect("JSON values serialize") + "\n"),
            Format::Text => Some(self.text.clone()),
            Format::Csv => self.csv.clone(),
            Format::Dot => self.dot.clone(),
        }
    }
}

/// 0 ok, 2 config error, 3 computation error, 4 fixture mismatch.
pub fn exit_code(result: &Result<Report, Failure>) -> u8 {
    match result {
        Ok(r) if r.mismatch => 4,
        Ok(_) => 0,
        Err(f) => f.code(),
    }
}

pub fn supported(mode: Mode) -> &'static [Format] {
    match mode {
        Mode::Classify | Mode::Context => &[Format::Json, Format::Text, Format::Csv, Format::Dot],
        Mode::Search | Mode::Props | Mode::Table2 | Mode::Wigner => &[Format::Json, Format::Text, Format::Csv],
    }
}

/// Prints the requested format, or with `out` writes every available format.
pub fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let Some(dir) = out else {
        // a mode without data for a format still prints an empty document
        print!("{}", report.render(format).unwrap_or_default());
        return Ok(());
    };
    std::fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("{}: {e}", dir.display())))?;
    for f in [Format::Json, Format::Text, Format::Csv, Format::Dot] {
        if let Some(body) = report.render(f) {
            let path = dir.join(format!("{}.{}", report.stem, f.extension()));
            std::fs::write(&path, body).map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let ok = || Report::new("x", Value::Null, String::new());
        let mut bad = ok();
        bad.mismatch = true;
        assert_eq!(exit_code(&Ok(ok())), 0);
        assert_eq!(exit_code(&Err(Failure::Config("c".into()))), 2);
        assert_eq!(exit_code(&Err(Failure::Compute("c".into()))), 3);
        assert_eq!(exit_code(&Ok(bad)), 4);
    }

    #[test]
    fn out_dir_gets_every_available_format() {
        let dir = std::env::temp_dir().join(format!("permagic-emit-{}", std::process::id()));
        let mut r = Report::new("t", serde_json::json!({"a": 1}), "text\n".into());
        r.csv = Some("a\n1\n".into());
        emit(&r, Format::Text, Some(&dir)).unwrap();
        assert!(dir.join("t.json").exists() && dir.join("t.csv").exists() && dir.join("t.txt").exists());
        assert!(!dir.join("t.dot").exists());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
