//! Flag values and input files.
//!
//! Flag values that do not parse are invalid input (exit 2); files that
//! cannot be read or do not have the documented shape are malformed
//! (exit 65).

use std::fs;
use std::path::Path;

use fiberatlas_core::fiber::GeometricSample;
use fiberatlas_core::grid::Grid;
use fiberatlas_core::newton::BivarPolynomial;
use fiberatlas_core::numerics::ExplicitCycle;
use fiberatlas_core::overlap::{parse_rational, OrientedPolygon, QPoint};
use fiberatlas_core::Complex64;
use serde_json::Value;

use crate::Failure;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn malformed(msg: impl Into<String>) -> Failure {
    Failure::Malformed(msg.into())
}

fn float(s: &str, what: &str) -> Result<f64, Failure> {
    let x: f64 = s.trim().parse().map_err(|_| invalid(format!("{what}: '{s}' is not a number")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("{what}: '{s}' is not finite")))
    }
}

/// `RE,IM`.
pub fn complex(s: &str, what: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(invalid(format!("{what}: expected RE,IM, got '{s}'")));
    }
    Ok(Complex64::new(float(parts[0], what)?, float(parts[1], what)?))
}

/// `RE,IM;RE,IM;...`.
pub fn complex_list(s: &str, what: &str) -> Result<Vec<Complex64>, Failure> {
    s.split(';').map(|p| complex(p, what)).collect()
}

/// `x0,x1,y0,y1,nx,ny`.
pub fn grid(s: &str) -> Result<Grid, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 6 {
        return Err(invalid(format!("--grid: expected x0,x1,y0,y1,nx,ny, got '{s}'")));
    }
    let count = |p: &str| p.trim().parse::<usize>().map_err(|_| invalid(format!("--grid: '{p}' is not a node count")));
    let g = Grid::new(
        float(parts[0], "--grid")?,
        float(parts[1], "--grid")?,
        float(parts[2], "--grid")?,
        float(parts[3], "--grid")?,
        count(parts[4])?,
        count(parts[5])?,
    )?;
    Ok(g)
}

pub fn positive(x: f64, flag: &str) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("{flag} must be positive, got {x}")))
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

/// A polynomial file: plain text, a JSON string, or `{"expr": "..."}`.
pub fn polynomial_file(path: &Path) -> Result<BivarPolynomial, Failure> {
    let text = read_text(path)?;
    let expr = match serde_json::from_str::<Value>(&text) {
        Ok(Value::String(s)) => s,
        Ok(Value::Object(map)) => match map.get("expr") {
            Some(Value::String(s)) => s.clone(),
            _ => return Err(malformed(format!("{}: expected an \"expr\" string", path.display()))),
        },
        _ => text,
    };
    BivarPolynomial::parse(expr.trim()).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn pair<'a>(v: &'a Value, what: &str) -> Result<(&'a Value, &'a Value), Failure> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(malformed(format!("{what}: expected a [re, im] pair, got {v}"))),
    }
}

fn json_float(v: &Value, what: &str) -> Result<f64, Failure> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| malformed(format!("{what}: expected a finite number, got {v}")))
}

pub fn json_complex(v: &Value, what: &str) -> Result<Complex64, Failure> {
    let (a, b) = pair(v, what)?;
    Ok(Complex64::new(json_float(a, what)?, json_float(b, what)?))
}

/// A polygon file: a JSON list of `[x, y]`, each coordinate a number
/// (snapped to a dyadic rational) or an exact rational string `"p/q"`.
pub fn polygon(v: &Value) -> Result<OrientedPolygon, Failure> {
    let list = v.as_array().ok_or_else(|| malformed("polygon: expected a list of [x, y] pairs"))?;
    let mut pts = Vec::with_capacity(list.len());
    for item in list {
        let (x, y) = pair(item, "polygon")?;
        let mut coords = [x, y].into_iter().map(|c| match c {
            Value::String(s) => parse_rational(s).ok_or_else(|| malformed(format!("polygon: '{s}' is not a rational"))),
            Value::Number(_) => {
                let f = json_float(c, "polygon")?;
                QPoint::snapped(f, 0.0).map(|p| p.x).ok_or_else(|| malformed(format!("polygon: cannot represent {f}")))
            }
            _ => Err(malformed(format!("polygon: bad coordinate {c}"))),
        });
        let (x, y) = (coords.next().unwrap()?, coords.next().unwrap()?);
        pts.push(QPoint::new(x, y));
    }
    Ok(OrientedPolygon::new(pts)?)
}

fn grid_from_json(v: &Value) -> Result<Grid, Failure> {
    let get = |k: &str| v.get(k).ok_or_else(|| malformed(format!("sample grid: missing '{k}'")));
    let f = |k: &str| json_float(get(k)?, "sample grid");
    let n = |k: &str| {
        get(k)?
            .as_u64()
            .map(|x| x as usize)
            .ok_or_else(|| malformed(format!("sample grid: '{k}' must be a node count")))
    };
    Ok(Grid::new(f("x0")?, f("x1")?, f("y0")?, f("y1")?, n("nx")?, n("ny")?)?)
}

/// A sample file: `{grid: {x0, x1, y0, y1, nx, ny}, J: nx x ny x n, J0: nx x ny (x 1)}`
/// with `[re, im]` entries.
pub fn sample(v: &Value) -> Result<GeometricSample, Failure> {
    let grid = grid_from_json(v.get("grid").ok_or_else(|| malformed("sample: missing 'grid'"))?)?;
    let j = v.get("J").and_then(Value::as_array).ok_or_else(|| malformed("sample: missing 'J'"))?;
    let j0 = v.get("J0").and_then(Value::as_array).ok_or_else(|| malformed("sample: missing 'J0'"))?;
    if j.len() != grid.nx || j0.len() != grid.nx {
        return Err(malformed(format!("sample: expected {} rows", grid.nx)));
    }
    let mut jv = Vec::with_capacity(grid.len());
    let mut j0v = Vec::with_capacity(grid.len());
    for i in 0..grid.nx {
        let (row, row0) = (j[i].as_array(), j0[i].as_array());
        let (Some(row), Some(row0)) = (row, row0) else {
            return Err(malformed(format!("sample: row {i} is not a list")));
        };
        if row.len() != grid.ny || row0.len() != grid.ny {
            return Err(malformed(format!("sample: row {i} must have {} nodes", grid.ny)));
        }
        for jj in 0..grid.ny {
            let vals = row[jj].as_array().ok_or_else(|| malformed(format!("sample: J[{i}][{jj}] is not a list")))?;
            jv.push(vals.iter().map(|c| json_complex(c, "sample J")).collect::<Result<Vec<_>, _>>()?);
            // J0 entries may be [re, im] or [[re, im]]
            let entry = match row0[jj].as_array().map(Vec::as_slice) {
                Some([inner @ Value::Array(_)]) => inner,
                _ => &row0[jj],
            };
            j0v.push(json_complex(entry, "sample J0")?);
        }
    }
    let n = jv.first().map_or(0, Vec::len);
    if jv.iter().any(|r| r.len() != n) {
        return Err(malformed("sample: every node needs the same number of values"));
    }
    Ok(GeometricSample::new(grid, jv, j0v)?)
}

/// A cycles file: `{cycles: [{path: [[re, im], ...], w0: [re, im]}, ...]}`.
pub fn cycles(v: &Value) -> Result<Vec<ExplicitCycle>, Failure> {
    // either {"cycles": [...]} or the bare list
    let list = v
        .as_array()
        .or_else(|| v.get("cycles").and_then(Value::as_array))
        .ok_or_else(|| malformed("cycles: expected a list of {path, w0}"))?;
    list.iter()
        .map(|c| {
            let path = c
                .get("path")
                .and_then(Value::as_array)
                .ok_or_else(|| malformed("cycles: missing 'path'"))?
                .iter()
                .map(|p| json_complex(p, "cycles path"))
                .collect::<Result<Vec<_>, _>>()?;
            let w0 = json_complex(c.get("w0").ok_or_else(|| malformed("cycles: missing 'w0'"))?, "cycles w0")?;
            Ok(ExplicitCycle { path, w0 })
        })
        .collect()
}
