//! CSV and binary graymap output.
//!
//! Floats are written in their shortest round-trip decimal form, so files are
//! byte-identical for identical inputs and parse back to the same bits.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::propagator::FigureGrid;

/// Shortest decimal that parses back to `v`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

/// Writes a header row and numeric rows.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Domain(format!("row has {} fields, header {}", row.len(), header.len())));
        }
        w.write_record(row.iter().map(|&v| format_float(v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Linear range `[min, max]` mapped to gray levels 0..=255.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub min: f64,
    pub max: f64,
}

/// Writes a binary (P5) graymap. `values` are row-major with row 0 at the top.
pub fn write_pgm<W: Write>(mut out: W, width: usize, height: usize, values: &[f64]) -> Result<Normalization> {
    if values.len() != width * height {
        return Err(Error::Domain(format!("{} values for a {width}x{height} image", values.len())));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let pixels: Vec<u8> = values
        .iter()
        .map(|&v| if span > 0.0 { ((v - min) / span * 255.0).round() as u8 } else { 0 })
        .collect();
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(&pixels)?;
    out.flush()?;
    Ok(Normalization { min, max })
}

/// Files written by [`write_figure`].
#[derive(Debug, Clone, PartialEq)]
pub struct FigureFiles {
    pub csv: PathBuf,
    pub images: Vec<PathBuf>,
    pub sidecar: PathBuf,
}

const CHANNELS: [(&str, fn(Complex64) -> f64); 3] =
    [("re", |z| z.re), ("im", |z| z.im), ("abs", |z| z.norm())];

/// Writes `<stem>.csv` with columns `u, v, re, im, abs`, one graymap per channel
/// (`<stem>_re.pgm`, ...) with `v` increasing upwards, and `<stem>_pgm.txt` holding
/// each channel's normalization.
pub fn write_figure(grid: &FigureGrid, dir: &Path, stem: &str) -> Result<FigureFiles> {
    std::fs::create_dir_all(dir)?;
    let res = grid.spec.res;
    let csv_path = dir.join(format!("{stem}.csv"));
    let rows = (0..res).flat_map(|j| {
        (0..res).map(move |i| {
            let z = grid.get(i, j);
            vec![grid.spec.node(i), grid.spec.node(j), z.re, z.im, z.norm()]
        })
    });
    write_csv(BufWriter::new(File::create(&csv_path)?), &["u", "v", "re", "im", "abs"], rows)?;
    let mut images = Vec::new();
    let mut sidecar = String::from("channel,min,max\n");
    for (name, f) in CHANNELS {
        let values: Vec<f64> =
            (0..res).rev().flat_map(|j| (0..res).map(move |i| f(grid.get(i, j)))).collect();
        let path = dir.join(format!("{stem}_{name}.pgm"));
        let norm = write_pgm(BufWriter::new(File::create(&path)?), res, res, &values)?;
        sidecar.push_str(&format!("{name},{},{}\n", format_float(norm.min), format_float(norm.max)));
        images.push(path);
    }
    let sidecar_path = dir.join(format!("{stem}_pgm.txt"));
    std::fs::write(&sidecar_path, sidecar)?;
    Ok(FigureFiles { csv: csv_path, images, sidecar: sidecar_path })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagator::{figure_grid, GridSpec};
    use proptest::prelude::*;

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![vec![0.1, -2.5e-300, 1.0 / 3.0], vec![f64::MAX, 0.0, -0.0]];
        write_csv(File::create(&path).unwrap(), &["a", "b", "c"], rows.clone()).unwrap();
        let (header, back) = read_csv(&path).unwrap();
        assert_eq!(header, ["a", "b", "c"]);
        for (r, s) in rows.iter().zip(&back) {
            for (x, y) in r.iter().zip(s) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert!(write_csv(Vec::new(), &["a"], vec![vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn pgm_layout() {
        let mut buf = Vec::new();
        let n = write_pgm(&mut buf, 2, 2, &[0.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(n, Normalization { min: 0.0, max: 4.0 });
        assert!(buf.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(&buf[buf.len() - 4..], &[0, 64, 128, 255]);
    }

    #[test]
    fn figure_files_are_deterministic() {
        let spec = GridSpec { lo: -2.0, hi: 2.0, res: 9 };
        let grid = figure_grid(None, &[-1.0, 0.0, 1.0], 0.3, 1.0, spec).unwrap();
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let fa = write_figure(&grid, a.path(), "k").unwrap();
        let fb = write_figure(&grid, b.path(), "k").unwrap();
        assert_eq!(std::fs::read(&fa.csv).unwrap(), std::fs::read(&fb.csv).unwrap());
        for (x, y) in fa.images.iter().zip(&fb.images) {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
        let (_, rows) = read_csv(&fa.csv).unwrap();
        assert_eq!(rows.len(), 81);
        assert!(std::fs::read_to_string(&fa.sidecar).unwrap().starts_with("channel,min,max\nre,"));
    }

    proptest! {
        #[test]
        fn float_format_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(format_float(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
