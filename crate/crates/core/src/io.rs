//! CSV formats. Lines starting with `#` are metadata; the first other line
//! is the column header.
//!
//! * pulses: `t,omega,phi,delta` on a uniform grid starting at `t = 0`,
//! * curves: `t,rx,ry,rz`,
//! * sweeps: `<axis>,<quantity>`.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{ControlPulse, Parameterization, SpaceCurve, Vec3};
use crate::sim::TimeGrid;
use crate::sweep::SweepTable;

pub const PULSE_COLUMNS: [&str; 4] = ["t", "omega", "phi", "delta"];
pub const CURVE_COLUMNS: [&str; 4] = ["t", "rx", "ry", "rz"];

/// `# key: value` lines.
pub fn write_header<W: Write>(w: &mut W, entries: &[(String, String)]) -> Result<()> {
    for (k, v) in entries {
        writeln!(w, "# {k}: {v}")?;
    }
    Ok(())
}

fn write_rows<W: Write>(w: &mut W, columns: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_pulse_csv<W: Write>(w: &mut W, pulse: &ControlPulse, header: &[(String, String)]) -> Result<()> {
    write_header(w, header)?;
    let grid = pulse.grid();
    let rows = (0..grid.len()).map(|k| vec![grid.time(k), pulse.omega()[k], pulse.phi()[k], pulse.delta()[k]]);
    write_rows(w, &PULSE_COLUMNS, rows)
}

pub fn write_curve_csv<W: Write>(w: &mut W, curve: &SpaceCurve, header: &[(String, String)]) -> Result<()> {
    write_header(w, header)?;
    let rows = curve.times().into_iter().zip(curve.points()).map(|(t, p)| vec![t, p.x, p.y, p.z]);
    write_rows(w, &CURVE_COLUMNS, rows)
}

pub fn write_sweep_csv<W: Write>(w: &mut W, table: &SweepTable, header: &[(String, String)]) -> Result<()> {
    write_header(w, header)?;
    let columns = [table.axis.as_str(), table.quantity.as_str()];
    write_rows(w, &columns, table.x.iter().zip(&table.y).map(|(x, y)| vec![*x, *y]))
}

/// Numeric rows with their 1-based file line numbers.
fn read_table<R: Read>(reader: R, source: &str, columns: &[&str]) -> Result<Vec<(u64, Vec<f64>)>> {
    let parse_err = |line: u64, message: String| Error::Parse { path: source.to_string(), line, message };
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).has_headers(true).from_reader(reader);
    let found = rdr.headers().map_err(|e| parse_err(e.position().map_or(1, |p| p.line()), e.to_string()))?.clone();
    if found.is_empty() || (found.len() == 1 && found[0].is_empty()) {
        return Err(parse_err(1, "no header row".into()));
    }
    let names: Vec<&str> = found.iter().collect();
    if names != columns {
        return Err(parse_err(1, format!("expected columns {}, found {}", columns.join(","), names.join(","))));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(columns.len());
        for (field, name) in rec.iter().zip(columns) {
            let v: f64 = field.parse().map_err(|_| parse_err(line, format!("{name}: cannot parse {field:?} as a number")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("{name}: non-finite value")));
            }
            row.push(v);
        }
        rows.push((line, row));
    }
    if rows.len() < 2 {
        return Err(parse_err(1, format!("need at least 2 data rows, found {}", rows.len())));
    }
    Ok(rows)
}

/// Checks `t_k = k·dt` from zero and returns the grid.
fn uniform_grid(rows: &[(u64, Vec<f64>)], source: &str) -> Result<TimeGrid> {
    let n = rows.len() - 1;
    let t_end = rows[n].1[0];
    let grid = TimeGrid::new(t_end, n).map_err(|e| Error::Parse { path: source.into(), line: rows[n].0, message: e.to_string() })?;
    for (k, (line, row)) in rows.iter().enumerate() {
        if (row[0] - grid.time(k)).abs() > 1e-9 * t_end {
            return Err(Error::Parse {
                path: source.into(),
                line: *line,
                message: format!("time {} breaks the uniform grid (expected {})", row[0], grid.time(k)),
            });
        }
    }
    Ok(grid)
}

pub fn parse_pulse_csv<R: Read>(reader: R, source: &str) -> Result<ControlPulse> {
    let rows = read_table(reader, source, &PULSE_COLUMNS)?;
    let grid = uniform_grid(&rows, source)?;
    let col = |j: usize| rows.iter().map(|(_, r)| r[j]).collect();
    ControlPulse::new(grid, col(1), col(2), col(3))
}

pub fn parse_curve_csv<R: Read>(reader: R, source: &str) -> Result<SpaceCurve> {
    let rows = read_table(reader, source, &CURVE_COLUMNS)?;
    let grid = uniform_grid(&rows, source)?;
    let points = rows.iter().map(|(_, r)| Vec3::new(r[1], r[2], r[3])).collect();
    SpaceCurve::new(grid.t_end(), points, Parameterization::General)
}

pub fn read_pulse_csv(path: &Path) -> Result<ControlPulse> {
    parse_pulse_csv(std::fs::File::open(path)?, &path.display().to_string())
}

pub fn read_curve_csv(path: &Path) -> Result<SpaceCurve> {
    parse_curve_csv(std::fs::File::open(path)?, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_pulse() -> ControlPulse {
        let grid = TimeGrid::new(1.5, 30).unwrap();
        ControlPulse::from_fn(grid, |t| (t.sin() + 0.1, 0.3 * t, -t * t)).unwrap()
    }

    #[test]
    fn pulse_round_trip_is_exact() {
        let p = sample_pulse();
        let mut buf = Vec::new();
        write_pulse_csv(&mut buf, &p, &[("seed".into(), "3".into())]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# seed: 3\nt,omega,phi,delta\n"));
        let q = parse_pulse_csv(buf.as_slice(), "mem").unwrap();
        assert_eq!(p.omega(), q.omega());
        assert_eq!(p.phi(), q.phi());
        assert_eq!(p.delta(), q.delta());
        assert_eq!(p.grid().n_steps(), q.grid().n_steps());
    }

    #[test]
    fn curve_round_trip() {
        let grid = TimeGrid::new(2.0, 20).unwrap();
        let c = SpaceCurve::from_fn(&grid, |t| Vec3::new(t.cos() - 1.0, t.sin(), 0.5 * t), Parameterization::General).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &c, &[]).unwrap();
        let d = parse_curve_csv(buf.as_slice(), "mem").unwrap();
        assert_eq!(c.points(), d.points());
    }

    fn parse_line(text: &str) -> (u64, String) {
        match parse_pulse_csv(text.as_bytes(), "p.csv") {
            Err(Error::Parse { line, message, .. }) => (line, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(parse_line("").0, 1);
        let (line, msg) = parse_line("# c\nt,omega,phi,delta\n0,1,0,0\n0.5,x,0,0\n1,1,0,0\n");
        assert_eq!(line, 4);
        assert!(msg.contains("omega"));
        assert_eq!(parse_line("t,omega,phi,delta\n0,1,0,0\n0.5,1,0\n1,1,0,0\n").0, 3);
        assert_eq!(parse_line("t,omega,phi,delta\n0,1,0,0\n0.7,1,0,0\n1,1,0,0\n").0, 3);
        assert!(parse_line("t,omega,phase,delta\n0,1,0,0\n1,1,0,0\n").1.contains("expected columns"));
        assert!(parse_line("t,omega,phi,delta\n0,1,0,0\n").1.contains("at least 2"));
    }
}
