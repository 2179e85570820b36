use std::io::Write;
use std::path::{Path, PathBuf};

use cpainleve_core::Table;
use tempfile::NamedTempFile;

use crate::args::Format;
use crate::Failure;

pub const OUT_DIR_VAR: &str = "CPAINLEVE_OUT_DIR";

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv_string(),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&table.to_json())
                .expect("tables always serialize");
            text.push('\n');
            text
        }
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never observe a partial file.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn emit(table: &Table, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let text = render(table, format);
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()) {
                // A closed downstream pipe (`| head`) is not a failure.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(e.to_string())),
                _ => Ok(()),
            }
        }
        Some(path) => {
            let path = resolve(path);
            write_atomic(&path, &text)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
        }
    }
}
