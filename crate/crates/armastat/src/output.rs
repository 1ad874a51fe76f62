//! Atomic file output and CSV tables.

use std::io::{self, Write};
use std::path::Path;

use armastat_core::linalg::CVec;
use armastat_core::rational::LaurentSeries;

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Shortest text that parses back to the same double.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn finish(writer: csv::Writer<Vec<u8>>) -> io::Result<Vec<u8>> {
    writer.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

/// Columns j, ‖M_j‖, then re/im of each entry in row-major order.
pub fn laurent_csv(series: &LaurentSeries) -> io::Result<Vec<u8>> {
    let (rows, cols) = series.shape();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::from("j"), String::from("norm")];
    for r in 1..=rows {
        for c in 1..=cols {
            header.push(format!("re(M_{r}{c})"));
            header.push(format!("im(M_{r}{c})"));
        }
    }
    w.write_record(&header)?;
    for (j, m) in series.iter() {
        let mut record = vec![j.to_string(), num(m.norm())];
        for r in 0..rows {
            for c in 0..cols {
                record.push(num(m[(r, c)].re));
                record.push(num(m[(r, c)].im));
            }
        }
        w.write_record(&record)?;
    }
    finish(w)
}

/// Header `t,re(Y_1),im(Y_1),...`, one row per time.
pub fn path_csv(y: &[CVec]) -> io::Result<Vec<u8>> {
    let dim = y.first().map_or(0, |v| v.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::from("t")];
    for i in 1..=dim {
        header.push(format!("re(Y_{i})"));
        header.push(format!("im(Y_{i})"));
    }
    w.write_record(&header)?;
    for (t, v) in y.iter().enumerate() {
        let mut record = vec![t.to_string()];
        for z in v.iter() {
            record.push(num(z.re));
            record.push(num(z.im));
        }
        w.write_record(&record)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn path_csv_round_trips_doubles() {
        let x = 0.1 + 0.2;
        let y = vec![CVec::from_vec(vec![Complex64::new(x, -1e-300)])];
        let text = String::from_utf8(path_csv(&y).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,re(Y_1),im(Y_1)"));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[1].parse::<f64>().unwrap(), x);
        assert_eq!(fields[2].parse::<f64>().unwrap(), -1e-300);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"second");
    }
}
