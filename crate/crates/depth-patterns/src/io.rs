//! CSV and JSON interchange.
//!
//! CSV is the tabular format throughout; JSON carries nested summaries and
//! walk-parameter files. Lines starting with `#` are metadata comments and
//! are skipped by every reader here.

use crate::depth::ReferenceDistribution;
use crate::geom::{Point2, PointSet2};
use crate::inference::ConvergencePoint;
use crate::modelsel::{GridCell, GridSpec};
use crate::movement::{InitialHeading, WalkParams};
use crate::patterns::{DepthPattern, PatternDistribution, Trajectory};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader)
}

// ---------------------------------------------------------------- point sets

#[derive(Debug, Serialize, Deserialize)]
struct PointRow {
    x: f64,
    y: f64,
}

/// Writes a point set as CSV with header `x,y`.
pub fn write_point_set<W: Write>(writer: W, set: &PointSet2) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for p in set.iter() {
        w.serialize(PointRow { x: p.x1, y: p.x2 })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a point set from CSV with header `x,y`.
pub fn read_point_set<R: Read>(reader: R) -> Result<PointSet2> {
    let mut r = csv_reader(reader);
    let mut points = Vec::new();
    for (i, row) in r.deserialize::<PointRow>().enumerate() {
        let row = row.map_err(|e| Error::parse(format!("point row {}", i + 1), e.to_string()))?;
        points.push(Point2::new(row.x, row.y));
    }
    PointSet2::new(points)
}

// --------------------------------------------------------------- trajectories

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryRow {
    id: String,
    t: i64,
    x: f64,
    y: f64,
}

/// A trajectory together with the time stamps it was read with.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub trajectory: Trajectory,
    pub times: Vec<i64>,
}

/// Writes trajectories as CSV with header `id,t,x,y`, time-stamped 0..n-1.
pub fn write_trajectories<W: Write>(writer: W, trajectories: &[Trajectory]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for traj in trajectories {
        for (t, p) in traj.points().iter().enumerate() {
            w.serialize(TrajectoryRow {
                id: traj.id.clone(),
                t: t as i64,
                x: p.x1,
                y: p.x2,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads one or more trajectories from CSV with header `id,t,x,y`. Rows of
/// one id must be contiguous with strictly increasing `t`.
pub fn read_trajectories<R: Read>(reader: R) -> Result<Vec<TrajectoryRecord>> {
    let mut r = csv_reader(reader);
    let mut out: Vec<TrajectoryRecord> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut current: Option<(String, Vec<i64>, Vec<Point2>)> = None;

    let finish = |cur: Option<(String, Vec<i64>, Vec<Point2>)>,
                  out: &mut Vec<TrajectoryRecord>|
     -> Result<()> {
        if let Some((id, times, points)) = cur {
            out.push(TrajectoryRecord {
                trajectory: Trajectory::new(id, points)?,
                times,
            });
        }
        Ok(())
    };

    for (i, row) in r.deserialize::<TrajectoryRow>().enumerate() {
        let location = || format!("trajectory row {}", i + 1);
        let row = row.map_err(|e| Error::parse(location(), e.to_string()))?;
        let start_new = match &current {
            Some((id, _, _)) => *id != row.id,
            None => true,
        };
        if start_new {
            if seen.contains(&row.id) {
                return Err(Error::parse(
                    location(),
                    format!("id {:?} appears in non-contiguous blocks", row.id),
                ));
            }
            seen.push(row.id.clone());
            finish(current.take(), &mut out)?;
            current = Some((row.id.clone(), Vec::new(), Vec::new()));
        }
        let (_, times, points) = current.as_mut().expect("current trajectory exists");
        if let Some(&last) = times.last() {
            if row.t <= last {
                return Err(Error::parse(
                    location(),
                    format!("time {} not increasing after {}", row.t, last),
                ));
            }
        }
        times.push(row.t);
        points.push(Point2::new(row.x, row.y));
    }
    finish(current, &mut out)?;
    if out.is_empty() {
        return Err(Error::parse("trajectory file", "no rows"));
    }
    Ok(out)
}

// ------------------------------------------------------- pattern distributions

/// Writes `pattern,frequency,count` rows in alphabet order.
pub fn write_pattern_distribution<W: Write>(writer: W, dist: &PatternDistribution) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["pattern", "frequency", "count"])?;
    let freqs = dist.freqs();
    for (i, pattern) in dist.alphabet().iter().enumerate() {
        w.write_record([
            pattern.label(),
            freqs[i].to_string(),
            dist.counts()[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed row of a pattern-distribution CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub pattern: DepthPattern,
    pub frequency: f64,
    pub count: u64,
}

/// Reads `pattern,frequency,count` rows back.
pub fn read_pattern_rows<R: Read>(reader: R, order: usize) -> Result<Vec<PatternRow>> {
    let mut r = csv_reader(reader);
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let location = || format!("pattern row {}", i + 1);
        let row = row.map_err(|e| Error::parse(location(), e.to_string()))?;
        if row.len() != 3 {
            return Err(Error::parse(location(), "expected 3 fields"));
        }
        let pattern = DepthPattern::parse_label(&row[0], order)?;
        let frequency: f64 = row[1]
            .parse()
            .map_err(|e| Error::parse(location(), format!("bad frequency: {e}")))?;
        let count: u64 = row[2]
            .parse()
            .map_err(|e| Error::parse(location(), format!("bad count: {e}")))?;
        out.push(PatternRow {
            pattern,
            frequency,
            count,
        });
    }
    Ok(out)
}

/// JSON object keyed by pattern label, with frequencies as values.
pub fn pattern_distribution_json(dist: &PatternDistribution) -> serde_json::Value {
    let freqs = dist.freqs();
    let map: serde_json::Map<String, serde_json::Value> = dist
        .alphabet()
        .iter()
        .zip(&freqs)
        .map(|(pattern, &f)| (pattern.label(), serde_json::json!(f)))
        .collect();
    serde_json::json!({
        "order": dist.order(),
        "n_windows": dist.n_windows(),
        "n_tied_windows": dist.n_tied_windows(),
        "frequencies": serde_json::Value::Object(map),
    })
}

// ------------------------------------------------------------- walk parameters

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum HeadingField {
    Angle(f64),
    Keyword(String),
}

/// Flat JSON form of walk parameters plus the simulation seed.
#[derive(Debug, Serialize, Deserialize)]
pub struct WalkParamsFile {
    pub lambda: f64,
    pub r: i8,
    pub beta: f64,
    pub kappa: f64,
    pub center_x: f64,
    pub center_y: f64,
    pub n_steps: usize,
    pub x0_x: f64,
    pub x0_y: f64,
    a0: HeadingField,
    pub seed: u64,
}

impl WalkParamsFile {
    pub fn new(params: &WalkParams, seed: u64) -> Self {
        WalkParamsFile {
            lambda: params.lambda,
            r: params.r,
            beta: params.beta,
            kappa: params.kappa,
            center_x: params.center.x1,
            center_y: params.center.x2,
            n_steps: params.n_steps,
            x0_x: params.x0.x1,
            x0_y: params.x0.x2,
            a0: match params.a0 {
                InitialHeading::Fixed(a) => HeadingField::Angle(a),
                InitialHeading::UniformRandom => {
                    HeadingField::Keyword("uniform-random".to_string())
                }
            },
            seed,
        }
    }

    pub fn into_params(self) -> Result<(WalkParams, u64)> {
        let a0 = match &self.a0 {
            HeadingField::Angle(a) => InitialHeading::Fixed(*a),
            HeadingField::Keyword(k) if k == "uniform-random" => InitialHeading::UniformRandom,
            HeadingField::Keyword(k) => {
                return Err(Error::parse(
                    "a0",
                    format!("expected angle or \"uniform-random\", found {k:?}"),
                ))
            }
        };
        let params = WalkParams {
            lambda: self.lambda,
            r: self.r,
            beta: self.beta,
            kappa: self.kappa,
            center: Point2::new(self.center_x, self.center_y),
            n_steps: self.n_steps,
            x0: Point2::new(self.x0_x, self.x0_y),
            a0,
        };
        params.validate()?;
        Ok((params, self.seed))
    }
}

/// Reads a walk-parameter JSON file.
pub fn read_walk_params<R: Read>(reader: R) -> Result<(WalkParams, u64)> {
    let file: WalkParamsFile = serde_json::from_reader(reader)?;
    file.into_params()
}

/// Writes a walk-parameter JSON file.
pub fn write_walk_params<W: Write>(writer: W, params: &WalkParams, seed: u64) -> Result<()> {
    serde_json::to_writer_pretty(writer, &WalkParamsFile::new(params, seed))?;
    Ok(())
}

// ------------------------------------------------------------------ depth rows

/// Writes `id,t,depth` rows.
pub fn write_depth_rows<W: Write>(writer: W, rows: &[(String, i64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["id", "t", "depth"])?;
    for (id, t, depth) in rows {
        w.write_record([id.clone(), t.to_string(), depth.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

// ------------------------------------------------------------------ diagnostics

/// Writes a convergence table as CSV `n,median_sup_error`.
pub fn write_convergence_csv<W: Write>(writer: W, table: &[ConvergencePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["n", "median_sup_error"])?;
    for point in table {
        w.write_record([point.n.to_string(), point.median_sup_error.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// One pattern's frequency with its confidence interval and CLT scale,
/// written as CSV `pattern,freq,ci_low,ci_high,sigma2,bandwidth`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCiRow {
    pub pattern: DepthPattern,
    pub freq: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub sigma2: f64,
    pub bandwidth: usize,
}

pub fn write_pattern_ci_csv<W: Write>(writer: W, rows: &[PatternCiRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["pattern", "freq", "ci_low", "ci_high", "sigma2", "bandwidth"])?;
    for row in rows {
        w.write_record([
            row.pattern.label(),
            row.freq.to_string(),
            row.ci_low.to_string(),
            row.ci_high.to_string(),
            row.sigma2.to_string(),
            row.bandwidth.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// ------------------------------------------------------------------ grid scans

/// Writes scan cells as CSV `r,kappa,beta,objective,stderr`.
pub fn write_scan_csv<W: Write>(writer: W, cells: &[GridCell]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["r", "kappa", "beta", "objective", "stderr"])?;
    for cell in cells {
        w.write_record([
            cell.r.to_string(),
            cell.kappa.to_string(),
            cell.beta.to_string(),
            cell.objective.to_string(),
            cell.stderr.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads scan cells back from `r,kappa,beta,objective,stderr` CSV.
pub fn read_scan_csv<R: Read>(reader: R) -> Result<Vec<(i8, f64, f64, f64, f64)>> {
    let mut r = csv_reader(reader);
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let location = || format!("scan row {}", i + 1);
        let row = row.map_err(|e| Error::parse(location(), e.to_string()))?;
        let field = |k: usize| -> Result<f64> {
            row.get(k)
                .ok_or_else(|| Error::parse(location(), "missing field"))?
                .parse::<f64>()
                .map_err(|e| Error::parse(location(), e.to_string()))
        };
        out.push((
            field(0)? as i8,
            field(1)?,
            field(2)?,
            field(3)?,
            field(4)?,
        ));
    }
    Ok(out)
}

/// Writes the wide objective table: one row per `(r, kappa)`, one column per
/// `beta` value.
pub fn write_scan_pivot_csv<W: Write>(writer: W, cells: &[GridCell]) -> Result<()> {
    let mut betas: Vec<f64> = Vec::new();
    for cell in cells {
        if !betas.iter().any(|&b| b == cell.beta) {
            betas.push(cell.beta);
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["r".to_string(), "kappa".to_string()];
    header.extend(betas.iter().map(|b| format!("beta={b}")));
    w.write_record(&header)?;
    let mut row_keys: Vec<(i8, f64)> = Vec::new();
    for cell in cells {
        if !row_keys.iter().any(|&(r, k)| r == cell.r && k == cell.kappa) {
            row_keys.push((cell.r, cell.kappa));
        }
    }
    for (r, kappa) in row_keys {
        let mut record = vec![r.to_string(), kappa.to_string()];
        for &beta in &betas {
            let value = cells
                .iter()
                .find(|c| c.r == r && c.kappa == kappa && c.beta == beta)
                .map(|c| c.objective.to_string())
                .unwrap_or_default();
            record.push(value);
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON summary of a scan: the grid, every cell, and the argmin cell.
pub fn scan_summary_json(grid: &GridSpec, cells: &[GridCell]) -> serde_json::Value {
    let argmin = crate::modelsel::argmin_cell(cells);
    serde_json::json!({
        "grid": grid,
        "argmin": argmin,
        "cells": cells,
    })
}

/// Renders a reference distribution for metadata lines.
pub fn reference_description(reference: &ReferenceDistribution) -> String {
    match reference {
        ReferenceDistribution::Empirical(set) => format!("empirical(m={})", set.len()),
        ReferenceDistribution::Disc => "disc".to_string(),
        ReferenceDistribution::Gaussian { mean, cov } => {
            let (s11, s12, s22) = cov.entries();
            format!(
                "gaussian(mean=({},{}),cov=({},{},{}))",
                mean.x1, mean.x2, s11, s12, s22
            )
        }
    }
}
