use super::SolutionField;
use crate::error::{Error, Result};
use crate::greens::GreenParams;
use crate::grid::SpatialGrid;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

/// Record of one run: everything needed to reproduce the output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub program: String,
    pub version: String,
    pub command: String,
    pub params: GreenParams,
    pub grid: SpatialGrid,
    pub times: Vec<f64>,
    /// Human-readable description of `f`, `g` and `Φ`.
    pub data: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, f64>,
    pub masses: Vec<f64>,
    pub outputs: Vec<String>,
    /// Wall-clock time of the run; the only non-deterministic field.
    pub timestamp: Option<String>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl SolutionField {
    /// Global `#`-metadata, then one block per time: `# time=`, `# mass=`,
    /// the header `x,value` and one row per node.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        let p = self.params();
        let g = self.grid();
        writeln!(w, "# alpha={:.16e}", p.alpha)?;
        writeln!(w, "# theta={:.16e}", p.theta)?;
        writeln!(w, "# beta={:.16e}", p.beta)?;
        writeln!(w, "# eta={:.16e}", p.eta)?;
        writeln!(w, "# x_min={:.16e}", g.x_min())?;
        writeln!(w, "# x_max={:.16e}", g.x_max())?;
        writeln!(w, "# num_points={}", g.num_points())?;
        writeln!(w, "# num_times={}", self.times().len())?;
        for ((t, m), row) in self.times().iter().zip(self.masses()).zip(self.values()) {
            writeln!(w, "# time={t:.16e}")?;
            writeln!(w, "# mass={m:.16e}")?;
            writeln!(w, "x,value")?;
            for (j, v) in row.iter().enumerate() {
                writeln!(w, "{:.16e},{:.16e}", g.x(j), v)?;
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Reads the format of [`write_csv`](Self::write_csv).
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut meta = BTreeMap::new();
        let mut times = Vec::new();
        let mut rows: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut in_block = false;
        for (n, line) in r.lines().enumerate() {
            let n = n + 1;
            let line = line.map_err(|e| Error::Parse(format!("line {n}: {e}")))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("line {n}: expected key=value")))?;
                let (k, v) = (k.trim(), v.trim());
                match k {
                    "time" => {
                        times.push(parse_num(v, n)?);
                        rows.push(Vec::new());
                        in_block = false;
                    }
                    // recomputed from the values
                    "mass" if !times.is_empty() => {}
                    _ if !times.is_empty() => {
                        return Err(Error::Parse(format!("line {n}: unexpected key '{k}' inside a block")))
                    }
                    _ => {
                        if meta.insert(k.to_string(), v.to_string()).is_some() {
                            return Err(Error::Parse(format!("line {n}: duplicate key '{k}'")));
                        }
                    }
                }
            } else if line == "x,value" {
                if times.is_empty() || in_block {
                    return Err(Error::Parse(format!("line {n}: header outside a time block")));
                }
                in_block = true;
            } else {
                if !in_block {
                    return Err(Error::Parse(format!("line {n}: data before header")));
                }
                let (x, v) = line
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("line {n}: expected two columns")))?;
                let row = rows.last_mut().expect("block open");
                row.push((parse_num(x, n)?, parse_num(v, n)?));
            }
        }
        let get = |k: &str| -> Result<&String> {
            meta.get(k).ok_or_else(|| Error::Parse(format!("missing metadata '{k}'")))
        };
        let num = |k: &str| -> Result<f64> { parse_num(get(k)?, 0) };
        let count = |k: &str| -> Result<usize> {
            get(k)?.parse().map_err(|_| Error::Parse(format!("bad integer for '{k}'")))
        };
        let num_points = count("num_points")?;
        let num_times = count("num_times")?;
        let grid = SpatialGrid::new(num("x_min")?, num("x_max")?, num_points)
            .map_err(|e| Error::Parse(e.to_string()))?;
        if times.len() != num_times {
            return Err(Error::Parse(format!("{} blocks for num_times = {num_times}", times.len())));
        }
        let tol = 1e-12 * grid.x_max().abs().max(grid.x_min().abs());
        let mut values = Vec::with_capacity(rows.len());
        for (b, row) in rows.into_iter().enumerate() {
            if row.len() != num_points {
                return Err(Error::Parse(format!(
                    "block {} has {} rows for num_points = {num_points}",
                    b + 1,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().enumerate().position(|(j, (x, _))| (x - grid.x(j)).abs() > tol) {
                return Err(Error::Parse(format!("block {}, row {} is off the grid", b + 1, j + 1)));
            }
            values.push(row.into_iter().map(|(_, v)| v).collect());
        }
        let params = GreenParams {
            alpha: num("alpha")?,
            theta: num("theta")?,
            beta: num("beta")?,
            eta: num("eta")?,
            gamma: 1.0,
        };
        Self::new(grid, times, values, params).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn parse_num(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number '{}'", s.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse(format!("line {line}: non-finite value")))
    }
}
