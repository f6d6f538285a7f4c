use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use super::{Format, SCHEMA};
use crate::analysis::Verdict;
use crate::error::{Error, Result};
use crate::measures::Warning;

/// A command's results in every supported format.
pub(super) struct Rendered {
    pub text: String,
    pub csv: Option<String>,
    pub warnings: Vec<Warning>,
    pub results: Value,
}

impl Rendered {
    pub fn verdict(v: &Verdict, results: Value) -> Rendered {
        let witness = v.witness.map_or("-".to_string(), |w| w.to_string());
        let text = format!(
            "holds         {}\nmax_violation {:e}\ntolerance     {:e}\nwitness       {}\nskipped       {}\n",
            v.holds, v.max_violation, v.tolerance, witness, v.skipped
        );
        let csv = format!(
            "holds,max_violation,tolerance,witness,skipped\n{},{},{},{},{}\n",
            v.holds,
            v.max_violation,
            v.tolerance,
            v.witness.unwrap_or(f64::NAN),
            v.skipped
        );
        Rendered {
            text,
            csv: Some(csv),
            warnings: Vec::new(),
            results,
        }
    }

    pub fn format(self, format: Format, command: &str, inputs: &Value) -> Result<Vec<u8>> {
        Ok(match format {
            Format::Json => {
                let env = json!({
                    "schema": SCHEMA,
                    "command": command,
                    "inputs": inputs,
                    "results": self.results,
                    "warnings": self.warnings,
                });
                let mut s = serde_json::to_string_pretty(&env).expect("JSON values always serialize");
                s.push('\n');
                s.into_bytes()
            }
            Format::Csv => self
                .csv
                .ok_or_else(|| Error::Parse(format!("{command} has no CSV output")))?
                .into_bytes(),
            Format::Text => {
                let mut s = self.text;
                for w in &self.warnings {
                    s.push_str(&format!("warning: {w}\n"));
                }
                s.into_bytes()
            }
        })
    }
}

/// Writes to `path` through a temporary sibling and a rename, or to `stdout`.
pub(super) fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    let Some(path) = path else {
        stdout.write_all(bytes)?;
        return Ok(());
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(Error::Io(format!("{}: {e}", path.display())));
    }
    Ok(())
}
