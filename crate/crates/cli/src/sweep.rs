//! Separable-witness parameter sweeps.
//!
//! Grid syntax: `a:<lo>:<hi>:<count>,b:auto,phi:<lo>:<hi>:<count>`; `b:auto`
//! takes b = 0.99·√(a(1−a)) per a, an explicit `b:<lo>:<hi>:<count>` is
//! checked against the admissibility domain b² ≤ a(1−a).

use std::path::Path;

use anyhow::{bail, Context, Result};
use impq_core::nonlocality::separable_witness;

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    Linear { lo: f64, hi: f64, count: usize },
    Auto,
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        match self {
            Axis::Auto => Vec::new(),
            Axis::Linear { lo, hi, count } => {
                if *count == 1 {
                    vec![*lo]
                } else {
                    (0..*count)
                        .map(|k| lo + (hi - lo) * k as f64 / (*count as f64 - 1.0))
                        .collect()
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct GridSpec {
    pub a: Axis,
    pub b: Axis,
    pub phi: Axis,
}

pub fn parse_grid(spec: &str) -> Result<GridSpec> {
    let mut a = None;
    let mut b = None;
    let mut phi = None;
    for part in spec.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        let axis = match fields.as_slice() {
            [_, "auto"] => Axis::Auto,
            [_, lo, hi, count] => Axis::Linear {
                lo: lo.parse().with_context(|| format!("bad bound in '{part}'"))?,
                hi: hi.parse().with_context(|| format!("bad bound in '{part}'"))?,
                count: count
                    .parse()
                    .with_context(|| format!("bad count in '{part}'"))?,
            },
            _ => bail!("malformed grid component '{part}'"),
        };
        match fields[0] {
            "a" => a = Some(axis),
            "b" => b = Some(axis),
            "phi" => phi = Some(axis),
            other => bail!("unknown grid variable '{other}'"),
        }
    }
    let (Some(a), Some(b), Some(phi)) = (a, b, phi) else {
        bail!("grid must specify a, b and phi");
    };
    if matches!(a, Axis::Auto) || matches!(phi, Axis::Auto) {
        bail!("only b supports auto");
    }
    if let Axis::Linear { count, .. } = a {
        if count == 0 {
            bail!("a axis needs at least one point");
        }
    }
    Ok(GridSpec { a, b, phi })
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub max_abs_diff: f64,
    pub min_value: f64,
}

pub fn run_sweep(grid: &GridSpec) -> Result<SweepResult> {
    let mut rows = Vec::new();
    let mut max_abs_diff = 0.0f64;
    let mut min_value = f64::INFINITY;
    for a in grid.a.values() {
        let b_values = match &grid.b {
            Axis::Auto => vec![0.99 * (a * (1.0 - a)).sqrt()],
            axis => axis.values(),
        };
        for b in b_values {
            for phi in grid.phi.values() {
                let value = separable_witness(a, b, phi)
                    .with_context(|| format!("witness at a={a}, b={b}, phi={phi}"))?;
                let abs_diff = value.mismatch();
                max_abs_diff = max_abs_diff.max(abs_diff);
                min_value = min_value.min(value.numeric).min(value.closed_form);
                rows.push(SweepRow {
                    a,
                    b,
                    phi,
                    numeric: value.numeric,
                    closed_form: value.closed_form,
                    abs_diff,
                });
            }
        }
    }
    Ok(SweepResult {
        rows,
        max_abs_diff,
        min_value,
    })
}

pub const CSV_HEADER: &str = "a,b,phi,numeric,closed_form,abs_diff";

pub fn write_csv(path: &Path, result: &SweepResult) -> Result<()> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.a, row.b, row.phi, row.numeric, row.closed_form, row.abs_diff
        ));
    }
    std::fs::write(path, out.as_bytes())
        .with_context(|| format!("writing csv {}", path.display()))?;
    // self-validation: the file must parse under its own schema
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != CSV_HEADER {
        bail!("csv self-validation failed: bad header");
    }
    let mut parsed = 0usize;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            bail!("csv self-validation failed: row with {} fields", fields.len());
        }
        for field in fields {
            field
                .parse::<f64>()
                .with_context(|| format!("csv self-validation failed on '{field}'"))?;
        }
        parsed += 1;
    }
    if parsed != result.rows.len() {
        bail!("csv self-validation failed: row count mismatch");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_grid() {
        let grid = parse_grid("a:0:1:11,b:auto,phi:0:6.283:12").unwrap();
        assert_eq!(grid.a.values().len(), 11);
        assert!(matches!(grid.b, Axis::Auto));
        assert_eq!(grid.phi.values().len(), 12);
    }

    #[test]
    fn rejects_unknown_variable() {
        assert!(parse_grid("a:0:1:3,b:auto,theta:0:1:3").is_err());
    }

    #[test]
    fn spot_values() {
        let grid = parse_grid("a:0.5:1:2,b:0:0:1,phi:0:0:1").unwrap();
        let result = run_sweep(&grid).unwrap();
        // rows: (0.5, 0, 0) → 0 and (1, 0, 0) → 1/12
        assert_eq!(result.rows.len(), 2);
        assert!(result.rows[0].numeric.abs() < 1e-13);
        assert!((result.rows[1].numeric - 1.0 / 12.0).abs() < 1e-13);
        assert!(result.max_abs_diff < 1e-12);
    }

    #[test]
    fn explicit_inadmissible_b_is_a_domain_error() {
        let grid = parse_grid("a:0:0:1,b:0.5:0.5:1,phi:0:0:1").unwrap();
        assert!(run_sweep(&grid).is_err());
    }
}
