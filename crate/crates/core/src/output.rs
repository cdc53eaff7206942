//! CSV serialisation of sweeps.
//!
//! Numbers are written as `{:.16e}` (17 significant digits, dot decimal
//! separator) and rows end in `\n`, so identical results give identical bytes.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::phase::SweepResult;

pub const CSV_HEADER: &str = "param,cos_phi,phi_ac_principal,phi_ac_continued,axis_x,axis_y,axis_z";

/// 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the header and one row per sweep point. A missing continued phase
/// is written as `NaN`.
pub fn write_sweep_csv<W: Write>(mut w: W, sweep: &SweepResult) -> io::Result<()> {
    w.write_all(CSV_HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    for (param, r) in &sweep.points {
        let continued = r.phi_ac_continued.unwrap_or(f64::NAN);
        let fields = [
            *param,
            r.cos_phi,
            r.phi_ac_principal,
            continued,
            r.axis[0],
            r.axis[1],
            r.axis[2],
        ];
        let line = fields.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",");
        w.write_all(line.as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn sweep_csv_string(sweep: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, sweep).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn write_sweep_csv_file(path: &Path, sweep: &SweepResult) -> io::Result<()> {
    fs::write(path, sweep_csv_string(sweep))
}
