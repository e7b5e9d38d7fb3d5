//! CSV and JSON serialization of grid results.

use std::io::Write;

use serde_json::{json, Value};

use super::GridResult;
use crate::analytics::ucpb_condition_residual;

pub const CSV_HEADER: &str = "delta0,delta_a,g,epsilon,kappa,gamma,g2_numeric,g2_analytic,\
log10_g2_numeric,mean_n,cpb_residual,ucpb_residual_re,ucpb_residual_im,status";

fn num(x: Option<f64>) -> String {
    format!("{:e}", x.unwrap_or(f64::NAN))
}

/// One header, then every cell of every grid in column-major order.
/// Missing values are written as NaN; `status` is `ok` or an error tag.
pub fn write_csv<W: Write>(mut out: W, grids: &[GridResult]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for grid in grids {
        for cell in &grid.cells {
            let p = &cell.params;
            let record = cell.outcome.as_ref().ok();
            let g2n = record.and_then(|r| r.g2_numeric);
            let ucpb = ucpb_condition_residual(p);
            let status = match &cell.outcome {
                Ok(_) => "ok",
                Err(e) => e.tag(),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                num(Some(p.delta0)),
                num(Some(p.delta_a)),
                num(Some(p.g)),
                num(Some(p.epsilon)),
                num(Some(p.kappa)),
                num(Some(p.gamma)),
                num(g2n),
                num(record.and_then(|r| r.g2_analytic)),
                num(g2n.map(f64::log10)),
                num(record.map(|r| r.mean_n)),
                num(Some(p.cpb_residual())),
                num(Some(ucpb.re)),
                num(Some(ucpb.im)),
                status,
            )?;
        }
    }
    Ok(())
}

fn column(grid: &GridResult, f: impl Fn(&super::PointRecord) -> Option<f64>) -> Value {
    grid.cells
        .iter()
        .map(|c| {
            c.outcome
                .as_ref()
                .ok()
                .and_then(&f)
                .filter(|v| v.is_finite())
                .map_or(Value::Null, Value::from)
        })
        .collect()
}

pub fn grid_json(grid: &GridResult) -> Value {
    let failures: Vec<Value> = grid
        .failures()
        .into_iter()
        .map(|(i1, i2, e)| json!({ "index": [i1, i2], "error": e.tag(), "message": e.to_string() }))
        .collect();
    json!({
        "spec": grid.spec,
        "shape": [grid.shape().0, grid.shape().1],
        "layout": "column-major",
        "axis1_values": grid.spec.axis1.values(),
        "axis2_values": grid.spec.axis2.map(|a| a.values()),
        "g2_numeric": column(grid, |r| r.g2_numeric),
        "g2_analytic": column(grid, |r| r.g2_analytic),
        "log10_g2_numeric": column(grid, |r| r.g2_numeric.map(f64::log10)),
        "mean_n": column(grid, |r| Some(r.mean_n)),
        "status": grid.cells.iter().map(|c| match &c.outcome {
            Ok(_) => "ok",
            Err(e) => e.tag(),
        }).collect::<Vec<_>>(),
        "failures": failures,
    })
}

pub fn write_json<W: Write>(out: W, grids: &[GridResult]) -> std::io::Result<()> {
    let doc = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "grids": grids.iter().map(grid_json).collect::<Vec<_>>(),
    });
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Param, SystemParams};
    use crate::sweep::{run_grid, Axis, SweepSpec};

    fn grid() -> GridResult {
        let fixed = SystemParams::with_detunings(1.0, 1.0, 1.0);
        run_grid(&SweepSpec::line(
            Axis::new(Param::Epsilon, 0.0, 0.01, 3),
            fixed,
        ))
        .unwrap()
    }

    #[test]
    fn csv_schema() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[grid()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 14);
        }
        assert!(lines[1].ends_with(",no_excitation"));
        assert!(lines[1].contains("NaN"));
        assert!(lines[3].ends_with(",ok"));
        let g2: f64 = lines[3].split(',').nth(6).unwrap().parse().unwrap();
        assert!(g2 > 0.0 && g2.is_finite());
    }

    #[test]
    fn json_has_nulls_and_failures() {
        let mut buf = Vec::new();
        write_json(&mut buf, &[grid()]).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        let g = &v["grids"][0];
        assert!(g["g2_numeric"][0].is_null());
        assert!(g["g2_numeric"][2].is_number());
        assert_eq!(g["failures"].as_array().unwrap().len(), 1);
        assert_eq!(g["spec"]["axis1"]["param"], "epsilon");
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    }
}
