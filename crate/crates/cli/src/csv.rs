//! CSV tables: header line, units line, then data rows.

use std::io::Write;
use std::path::Path;

use crate::error::CliResult;

/// 17 significant digits, so values round-trip exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub units: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<I, S, J, T>(header: I, units: J) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        J: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let header: Vec<String> = header.into_iter().map(Into::into).collect();
        let units: Vec<String> = units.into_iter().map(Into::into).collect();
        assert_eq!(header.len(), units.len(), "header and units differ in length");
        Table {
            header,
            units,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| num(x)).collect());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header)
            .chain(std::iter::once(&self.units))
            .chain(&self.rows)
        {
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Write through a temporary file in the target directory and rename it into
/// place, so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn render_has_lf_and_two_header_lines() {
        let mut t = Table::new(["a", "b"], ["1", "omega_ref"]);
        t.push_numbers(&[1.0, 2.0]);
        let s = t.render();
        assert!(!s.contains('\r'));
        assert_eq!(s.lines().count(), 3);
        assert!(s.starts_with("a,b\n1,omega_ref\n"));
    }
}
