use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenParams {
    pub alpha: f64,
    pub theta: f64,
    pub beta: f64,
    pub eta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    ClosedForm,
    Hfunction,
}

/// How grid values relate to the density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Point values (of the periodized density on the spectral path).
    Point,
    /// Averages of the periodized density over the cells `[x_j ± h/2]`.
    CellAverage,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::ClosedForm => "closed_form",
            Method::Hfunction => "hfunction",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "closed_form" => Ok(Method::ClosedForm),
            "hfunction" => Ok(Method::Hfunction),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

impl fmt::Display for Sampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sampling::Point => "point",
            Sampling::CellAverage => "cell_average",
        })
    }
}

impl FromStr for Sampling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "point" => Ok(Sampling::Point),
            "cell_average" => Ok(Sampling::CellAverage),
            _ => Err(Error::Parse(format!("unknown sampling '{s}'"))),
        }
    }
}

/// A density sampled on a grid at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    grid: SpatialGrid,
    values: Vec<f64>,
    time: f64,
    params: GreenParams,
    method: Method,
    sampling: Sampling,
    mass: f64,
}

impl DensityProfile {
    pub fn new(
        grid: SpatialGrid,
        values: Vec<f64>,
        time: f64,
        params: GreenParams,
        method: Method,
        sampling: Sampling,
    ) -> Result<Self> {
        if values.len() != grid.num_points() {
            return Err(Error::invalid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.num_points()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonConvergent(format!(
                "non-finite density at x = {}",
                grid.x(j)
            )));
        }
        let mass = grid.integrate(&values);
        Ok(Self {
            grid,
            values,
            time,
            params,
            method,
            sampling,
            mass,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn time(&self) -> f64 {
        self.time
    }
    pub fn params(&self) -> GreenParams {
        self.params
    }
    pub fn method(&self) -> Method {
        self.method
    }
    pub fn sampling(&self) -> Sampling {
        self.sampling
    }
    /// Trapezoid mass `spacing·Σ values`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Writes `#`-prefixed metadata lines, the header `x,value` and one row
    /// per node, numbers with 17 significant digits.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        let p = &self.params;
        writeln!(w, "# time={:.16e}", self.time)?;
        writeln!(w, "# alpha={:.16e}", p.alpha)?;
        writeln!(w, "# theta={:.16e}", p.theta)?;
        writeln!(w, "# beta={:.16e}", p.beta)?;
        writeln!(w, "# eta={:.16e}", p.eta)?;
        writeln!(w, "# gamma={:.16e}", p.gamma)?;
        writeln!(w, "# method={}", self.method)?;
        writeln!(w, "# sampling={}", self.sampling)?;
        writeln!(w, "# mass={:.16e}", self.mass)?;
        writeln!(w, "# x_min={:.16e}", self.grid.x_min())?;
        writeln!(w, "# x_max={:.16e}", self.grid.x_max())?;
        writeln!(w, "# num_points={}", self.grid.num_points())?;
        writeln!(w, "x,value")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.16e},{:.16e}", self.grid.x(j), v)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Reads the format of [`write_csv`](Self::write_csv). The recorded mass
    /// is recomputed from the values.
    pub fn read_csv(r: impl BufRead) -> Result<Self> {
        let mut meta = std::collections::HashMap::new();
        let mut xs = Vec::new();
        let mut values = Vec::new();
        let mut header = false;
        for (n, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(format!("line {}: {e}", n + 1)))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if header {
                    return Err(Error::Parse(format!("line {}: metadata after header", n + 1)));
                }
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", n + 1)))?;
                if meta.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                    return Err(Error::Parse(format!("line {}: duplicate key '{}'", n + 1, k.trim())));
                }
            } else if !header {
                if line != "x,value" {
                    return Err(Error::Parse(format!("line {}: expected header 'x,value'", n + 1)));
                }
                header = true;
            } else {
                let (x, v) = line
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("line {}: expected two columns", n + 1)))?;
                xs.push(parse_num(x, n + 1)?);
                values.push(parse_num(v, n + 1)?);
            }
        }
        if !header {
            return Err(Error::Parse("missing header 'x,value'".into()));
        }
        let get = |k: &str| -> Result<&String> {
            meta.get(k)
                .ok_or_else(|| Error::Parse(format!("missing metadata '{k}'")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number for '{k}'")))
        };
        let num_points: usize = get("num_points")?
            .parse()
            .map_err(|_| Error::Parse("bad num_points".into()))?;
        let grid = SpatialGrid::new(num("x_min")?, num("x_max")?, num_points)
            .map_err(|e| Error::Parse(e.to_string()))?;
        if values.len() != num_points {
            return Err(Error::Parse(format!(
                "{} rows for num_points = {num_points}",
                values.len()
            )));
        }
        let tol = 1e-12 * grid.x_max().abs().max(grid.x_min().abs());
        if let Some(j) = xs.iter().enumerate().position(|(j, &x)| (x - grid.x(j)).abs() > tol) {
            return Err(Error::Parse(format!("row {} is not on the recorded grid", j + 1)));
        }
        let params = GreenParams {
            alpha: num("alpha")?,
            theta: num("theta")?,
            beta: num("beta")?,
            eta: num("eta")?,
            gamma: num("gamma")?,
        };
        let time = num("time")?;
        let method = get("method")?.parse()?;
        let sampling = get("sampling")?.parse()?;
        Self::new(grid, values, time, params, method, sampling).map_err(|e| Error::Parse(e.to_string()))
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

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DensityProfile {
        let grid = SpatialGrid::symmetric(4.0, 16).unwrap();
        let values = grid.points().iter().map(|x| (-x * x).exp() / 3.0).collect();
        let params = GreenParams {
            alpha: 1.5,
            theta: 0.3,
            beta: 0.7,
            eta: 1.0,
            gamma: 1.0,
        };
        DensityProfile::new(grid, values, 0.1, params, Method::Spectral, Sampling::CellAverage).unwrap()
    }

    #[test]
    fn csv_round_trips_bit_exactly() {
        let p = sample();
        let text = p.to_csv_string();
        assert!(text.contains("# method=spectral"));
        let back = DensityProfile::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn csv_rejects_damage() {
        let text = sample().to_csv_string();
        let cases = [
            text.replace("x,value", "x;value"),
            text.replace("# num_points=16", "# num_points=32"),
            text.replace("# method=spectral", "# method=magic"),
            text.lines().take(20).collect::<Vec<_>>().join("\n"),
            text.replacen("e-1,", "e-1;", 1),
        ];
        for bad in cases {
            assert!(matches!(DensityProfile::read_csv(bad.as_bytes()), Err(Error::Parse(_))));
        }
    }
}
