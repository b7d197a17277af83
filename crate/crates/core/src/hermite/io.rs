//! File formats for coefficient tensors and grid functions.
//!
//! Coefficients: JSON `{dim, box, coeffs: [[re, im], ...]}` in lexicographic order, or
//! CSV with columns `a1..ad,re,im`. Grid functions: CSV with columns `x1..xd,re,im`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expansion::GridFunction;
use super::quadrature::{gauss_hermite_rule, Grid};
use super::tensor::{CoeffTensor, TruncationBox};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoeffJson {
    dim: usize,
    #[serde(rename = "box")]
    bx: Vec<usize>,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for CoeffTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffJson {
            dim: self.dim(),
            bx: self.truncation().max_degree().to_vec(),
            coeffs: self.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffTensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CoeffJson::deserialize(d)?;
        if raw.dim != raw.bx.len() {
            return Err(serde::de::Error::custom("dim does not match box length"));
        }
        let bx = TruncationBox::new(raw.bx).map_err(serde::de::Error::custom)?;
        let coeffs = raw.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        CoeffTensor::new(bx, coeffs).map_err(serde::de::Error::custom)
    }
}

pub fn coeffs_to_json(c: &CoeffTensor) -> Result<String> {
    Ok(serde_json::to_string_pretty(c)?)
}

pub fn coeffs_from_json(text: &str) -> Result<CoeffTensor> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_coeffs_csv(c: &CoeffTensor, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=c.dim()).map(|j| format!("a{j}")).collect();
    header.extend(["re".into(), "im".into()]);
    w.write_record(&header)?;
    for (alpha, v) in c.truncation().iter().zip(c.coeffs()) {
        let mut rec: Vec<String> = alpha.iter().map(usize::to_string).collect();
        rec.push(v.re.to_string());
        rec.push(v.im.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `a1..ad,re,im` rows. The box is the smallest one containing every row;
/// missing entries are zero.
pub fn read_coeffs_csv(input: impl Read) -> Result<CoeffTensor> {
    let mut r = csv::Reader::from_reader(input);
    let d = r.headers()?.len().checked_sub(2).filter(|d| *d >= 1).ok_or_else(|| {
        Error::domain("coefficient CSV needs index columns followed by re,im")
    })?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let alpha = (0..d)
            .map(|j| rec[j].trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::domain(format!("bad multi-index: {e}")))?;
        let re = parse_f64(&rec[d])?;
        let im = parse_f64(&rec[d + 1])?;
        rows.push((alpha, Complex64::new(re, im)));
    }
    let mut maxdeg = vec![0; d];
    for (a, _) in &rows {
        for (m, &v) in maxdeg.iter_mut().zip(a) {
            *m = (*m).max(v);
        }
    }
    let mut c = CoeffTensor::zeros(TruncationBox::new(maxdeg)?);
    for (a, v) in rows {
        c.set(&a, v)?;
    }
    Ok(c)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|e| Error::domain(format!("bad number {s:?}: {e}")))
}

pub fn write_grid_csv(f: &GridFunction, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=f.dim()).map(|j| format!("x{j}")).collect();
    header.extend(["re".into(), "im".into()]);
    w.write_record(&header)?;
    for (i, v) in f.values().iter().enumerate() {
        let mut rec: Vec<String> = f.grid().point(i).iter().map(f64::to_string).collect();
        rec.push(v.re.to_string());
        rec.push(v.im.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `x1..xd,re,im` rows covering a full tensor grid (any row order).
///
/// The grid is recognised as Gauss–Hermite when every axis matches the rule of its
/// size, otherwise as uniform; anything else is rejected.
pub fn read_grid_csv(input: impl Read) -> Result<GridFunction> {
    let mut r = csv::Reader::from_reader(input);
    let d = r.headers()?.len().checked_sub(2).filter(|d| *d >= 1).ok_or_else(|| {
        Error::domain("grid CSV needs coordinate columns followed by re,im")
    })?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let x = (0..d).map(|j| parse_f64(&rec[j])).collect::<Result<Vec<_>>>()?;
        rows.push((x, Complex64::new(parse_f64(&rec[d])?, parse_f64(&rec[d + 1])?)));
    }
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut axis: Vec<f64> = rows.iter().map(|(x, _)| x[j]).collect();
            axis.sort_by(f64::total_cmp);
            axis.dedup();
            axis
        })
        .collect();
    let grid = infer_grid(axes)?;
    if grid.len() != rows.len() {
        return Err(Error::domain("grid CSV does not cover a full tensor grid"));
    }
    let mut values = vec![Complex64::new(f64::NAN, 0.0); grid.len()];
    let shape = grid.shape();
    for (x, v) in rows {
        let mut flat = 0;
        for j in 0..d {
            let k = grid.axis(j).iter().position(|&n| n == x[j]).expect("axis built from rows");
            flat = flat * shape[j] + k;
        }
        values[flat] = v;
    }
    if values.iter().any(|v| v.re.is_nan()) {
        return Err(Error::domain("grid CSV has duplicate points"));
    }
    GridFunction::new(grid, values)
}

fn infer_grid(axes: Vec<Vec<f64>>) -> Result<Grid> {
    let gh = axes.iter().all(|a| {
        let rule = gauss_hermite_rule(a.len());
        a.iter().zip(&rule.nodes).all(|(x, y)| (x - y).abs() <= 1e-12 * y.abs().max(1.0))
    });
    if gh {
        let rules: Vec<_> = axes.iter().map(|a| gauss_hermite_rule(a.len())).collect();
        return Grid::gauss_hermite(
            axes,
            rules.iter().map(|r| r.weights.clone()).collect(),
        );
    }
    Grid::uniform(axes).map_err(|e| Error::precondition(format!("unrecognised grid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::{gauss_hermite_grid, synthesize};

    fn sample() -> CoeffTensor {
        let bx = TruncationBox::new(vec![2, 3]).unwrap();
        CoeffTensor::from_fn(bx, |a| Complex64::new(a[0] as f64, -(a[1] as f64) / 3.0))
    }

    #[test]
    fn json_round_trip_and_shape() {
        let c = sample();
        let text = coeffs_to_json(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["box"], serde_json::json!([2, 3]));
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 12);
        assert_eq!(coeffs_from_json(&text).unwrap(), c);
    }

    #[test]
    fn json_rejects_wrong_length() {
        let bad = r#"{"dim":1,"box":[2],"coeffs":[[1,0]]}"#;
        assert!(coeffs_from_json(bad).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let c = sample();
        let mut buf = Vec::new();
        write_coeffs_csv(&c, &mut buf).unwrap();
        assert_eq!(read_coeffs_csv(buf.as_slice()).unwrap(), c);
    }

    #[test]
    fn grid_csv_round_trip_detects_gauss_hermite() {
        let grid = gauss_hermite_grid(7, 2).unwrap();
        let f = synthesize(&sample(), &grid).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&f, &mut buf).unwrap();
        let back = read_grid_csv(buf.as_slice()).unwrap();
        assert_eq!(back.grid().kind(), crate::hermite::GridKind::GaussHermite);
        assert!(back.sup_distance(&f).unwrap() == 0.0);
    }
}
