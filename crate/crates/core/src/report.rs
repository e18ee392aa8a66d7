//! Error metrics, gaining coefficients and the CSV outputs.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::grid::{CellField, Grid};
use crate::iteration::{direct_solution, iterate_with, run_grid, IterationRow, IterationTrace};
use crate::models::{ModelSpec, RunDefaults};
use crate::reference::reference_on;

/// `dx * sum_i |a_i - b_i|`.
pub fn l1_error(a: &CellField, b: &CellField, dx: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(dx
        * a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>())
}

/// `err_k / err_direct`: how the iterate's error compares with the
/// conventional scheme's.
pub fn gaining(err_k: f64, err_direct: f64) -> Result<f64> {
    if !(err_direct > 0.0) {
        return Err(Error::ZeroDirectError);
    }
    Ok(err_k / err_direct)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub beta: f64,
    pub err: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub model_name: String,
    pub rows: Vec<ConvergenceRow>,
    /// L1 error of the direct solve against the reference.
    pub err_direct: f64,
    pub settings: RunDefaults,
}

impl ConvergenceTable {
    pub fn last_row(&self) -> Option<&ConvergenceRow> {
        self.rows.last()
    }
}

pub fn build_table(
    model_name: &str,
    settings: RunDefaults,
    trace: &IterationTrace,
    reference: &CellField,
    direct: &CellField,
    grid: &Grid,
) -> Result<ConvergenceTable> {
    if trace.final_levels.len() != trace.rows.len() {
        return Err(Error::LengthMismatch {
            left: trace.final_levels.len(),
            right: trace.rows.len(),
        });
    }
    let err_direct = l1_error(direct, reference, grid.dx())?;
    let rows = trace
        .rows
        .iter()
        .zip(&trace.final_levels)
        .map(|(row, level)| {
            let err = l1_error(level, reference, grid.dx())?;
            Ok(ConvergenceRow {
                n: row.n,
                beta: row.beta,
                err,
                tau: gaining(err, err_direct)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        model_name: model_name.to_string(),
        rows,
        err_direct,
        settings,
    })
}

/// Everything produced by the full comparison pipeline.
#[derive(Debug, Clone)]
pub struct TableRun {
    pub table: ConvergenceTable,
    pub trace: IterationTrace,
    pub direct: CellField,
    pub reference: CellField,
    pub grid: Grid,
}

/// Iterate, solve directly and build the reference, then tabulate.
pub fn convergence_table(model: &ModelSpec, cfg: &RunDefaults) -> Result<TableRun> {
    convergence_table_with(model, cfg, |_| {})
}

pub fn convergence_table_with(
    model: &ModelSpec,
    cfg: &RunDefaults,
    observe: impl FnMut(&IterationRow),
) -> Result<TableRun> {
    let trace = iterate_with(model, cfg, observe)?;
    let direct = direct_solution(model, cfg)?.into_final_level();
    let grid = run_grid(model, cfg)?;
    let reference = reference_on(model, &grid, cfg)?;
    let table = build_table(&model.name, *cfg, &trace, &reference, &direct, &grid)?;
    Ok(TableRun {
        table,
        trace,
        direct,
        reference,
        grid,
    })
}

/// Formats `v` with `digits` significant digits, fixed notation for
/// moderate magnitudes and scientific otherwise.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

pub const TABLE_HEADER: &str = "n,beta,err,tau";

pub fn emit_csv(table: &ConvergenceTable, mut out: impl Write) -> Result<()> {
    writeln!(out, "{TABLE_HEADER}")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.n,
            format_significant(r.beta, 9),
            format_significant(r.err, 9),
            format_significant(r.tau, 9)
        )?;
    }
    out.flush()?;
    Ok(())
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        reason: format!("`{field}` is not a number"),
    })
}

/// Reads rows written by [`emit_csv`].
pub fn parse_table_csv(input: impl BufRead) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != TABLE_HEADER {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!("expected header `{TABLE_HEADER}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let n = fields[0].trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            reason: format!("`{}` is not an iteration index", fields[0]),
        })?;
        rows.push(ConvergenceRow {
            n,
            beta: parse_f64(fields[1], lineno)?,
            err: parse_f64(fields[2], lineno)?,
            tau: parse_f64(fields[3], lineno)?,
        });
    }
    Ok(rows)
}

pub const PROFILE_HEADER: &str = "x,q";

/// Writes a solution profile as `x,q` lines at full precision.
pub fn write_profile(grid: &Grid, field: &CellField, mut out: impl Write) -> Result<()> {
    if grid.len() != field.len() {
        return Err(Error::LengthMismatch {
            left: grid.len(),
            right: field.len(),
        });
    }
    writeln!(out, "{PROFILE_HEADER}")?;
    for (x, q) in grid.centers().iter().zip(field.values()) {
        writeln!(out, "{x:e},{q:e}")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an `x,q` profile back into centre coordinates and values.
pub fn read_profile(input: impl BufRead) -> Result<(Vec<f64>, CellField)> {
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != PROFILE_HEADER {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!("expected header `{PROFILE_HEADER}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (x, q) = line.split_once(',').ok_or_else(|| Error::Parse {
            line: lineno,
            reason: "expected two fields".into(),
        })?;
        xs.push(parse_f64(x, lineno)?);
        qs.push(parse_f64(q, lineno)?);
    }
    Ok((xs, CellField::new(qs)?))
}
