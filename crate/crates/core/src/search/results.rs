use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// Append-only counterexample log: `conjecture \t n \t g6 \t score \t seed`, one per line.
#[derive(Debug, Clone)]
pub struct ResultsFile {
    path: PathBuf,
}

/// Score with 17 significant digits.
pub fn format_score(score: f64) -> String {
    format!("{score:.16e}")
}

impl ResultsFile {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends and flushes one record.
    pub fn append(&self, conjecture: &str, n: usize, g6: &str, score: f64, seed: u64) -> io::Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{conjecture}\t{n}\t{g6}\t{}\t{seed}", format_score(score))?;
        file.sync_data()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appends_tab_separated_lines() {
        let dir = tempfile::tempdir().unwrap();
        let file = ResultsFile::new(dir.path().join("found.tsv"));
        file.append("wagner21", 18, "Q[aCCA?_A?G?O?O?G?A??O?@???", 0.021810091708, 7).unwrap();
        file.append("brouwer", 11, "J??????????", 1.0, 8).unwrap();
        let text = std::fs::read_to_string(file.path()).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let fields: Vec<_> = lines[0].split('\t').collect();
        assert_eq!(fields, ["wagner21", "18", "Q[aCCA?_A?G?O?O?G?A??O?@???", "2.1810091707999999e-2", "7"]);
        assert_eq!(fields[3].parse::<f64>().unwrap(), 0.021810091708);
    }
}
