//! Model selection over the random-walk family.
//!
//! For each parameter cell a Monte-Carlo average of self-referenced pattern
//! frequencies is computed over repeated walks and scored against observed
//! per-animal frequency vectors by the sum of Euclidean distances. The
//! frequency table of the tracked animals ships with the crate as
//! `data/fwb_animals.csv`; row C22 duplicates row C17 in the published
//! table and is kept as printed.

use crate::movement::{simulate_walk, WalkParams};
use crate::patterns::{
    estimate_pattern_distribution, DepthPattern, PatternDistribution, TiePolicy,
};
use crate::seed::{derive_seed, f64_component, rng_for};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::Path;

/// Column labels of the order-3 animal tables, deepest-first rank vectors
/// rendered zero-based.
pub const PATTERN_COLUMN_LABELS: [&str; 6] = [
    "(0, 1, 2)",
    "(0, 2, 1)",
    "(2, 0, 1)",
    "(2, 1, 0)",
    "(1, 2, 0)",
    "(1, 0, 2)",
];

/// The tie-free order-3 patterns in table column order.
pub fn pattern_columns() -> Vec<DepthPattern> {
    PATTERN_COLUMN_LABELS
        .iter()
        .map(|label| DepthPattern::parse_label(label, 3).expect("static labels are valid"))
        .collect()
}

/// Observed order-3 pattern frequencies of one animal, in column order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnimalFrequencies {
    pub id: String,
    pub freqs: [f64; 6],
}

/// Frequency rows may be rounded; sums must be within this tolerance of 1.
const ROW_SUM_TOLERANCE: f64 = 5e-4;

#[derive(Debug, Deserialize)]
struct AnimalRow {
    id: String,
    p012: f64,
    p021: f64,
    p201: f64,
    p210: f64,
    p120: f64,
    p102: f64,
}

/// Parses animal frequencies from CSV with header
/// `id,p012,p021,p201,p210,p120,p102`. Each frequency must lie in `[0, 1]`
/// and each row must sum to 1 within `5e-4`.
pub fn read_animal_frequencies<R: Read>(reader: R) -> Result<Vec<AnimalFrequencies>> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader);
    let expected = ["id", "p012", "p021", "p201", "p210", "p120", "p102"];
    let headers = csv_reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::parse(
            "header",
            format!("expected {:?}, found {:?}", expected.join(","), headers),
        ));
    }
    let mut out = Vec::new();
    for (i, row) in csv_reader.deserialize::<AnimalRow>().enumerate() {
        let location = || format!("animal row {}", i + 1);
        let row = row.map_err(|e| Error::parse(location(), e.to_string()))?;
        let freqs = [row.p012, row.p021, row.p201, row.p210, row.p120, row.p102];
        if freqs.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::parse(
                format!("animal row {} ({})", i + 1, row.id),
                "frequency outside [0, 1]",
            ));
        }
        let sum: f64 = freqs.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::parse(
                format!("animal row {} ({})", i + 1, row.id),
                format!("frequencies sum to {sum}, expected 1 within {ROW_SUM_TOLERANCE}"),
            ));
        }
        out.push(AnimalFrequencies { id: row.id, freqs });
    }
    if out.is_empty() {
        return Err(Error::parse("animal table", "no rows"));
    }
    Ok(out)
}

/// Loads an animal-frequency CSV from disk.
pub fn load_animal_frequencies(path: impl AsRef<Path>) -> Result<Vec<AnimalFrequencies>> {
    read_animal_frequencies(std::fs::File::open(path)?)
}

/// The frequency table bundled with the crate.
pub fn bundled_animal_frequencies() -> Vec<AnimalFrequencies> {
    read_animal_frequencies(include_str!("../data/fwb_animals.csv").as_bytes())
        .expect("bundled table is valid")
}

/// Sum of Euclidean distances between each animal's frequency vector and a
/// candidate vector `q` over the same alphabet order.
pub fn distance_objective(animals: &[AnimalFrequencies], q: &[f64]) -> Result<f64> {
    if q.len() != 6 {
        return Err(Error::LengthMismatch {
            context: "distance_objective",
            left: q.len(),
            right: 6,
        });
    }
    Ok(animals
        .iter()
        .map(|a| {
            a.freqs
                .iter()
                .zip(q)
                .map(|(p, qk)| (p - qk) * (p - qk))
                .sum::<f64>()
                .sqrt()
        })
        .sum())
}

/// Sums vectors pairwise (tournament order), which fixes the rounding
/// pattern regardless of how the inputs were produced.
fn pairwise_sum(vectors: &[Vec<f64>]) -> Vec<f64> {
    match vectors.len() {
        0 => Vec::new(),
        1 => vectors[0].clone(),
        n => {
            let (a, b) = vectors.split_at(n / 2);
            let left = pairwise_sum(a);
            let right = pairwise_sum(b);
            left.iter().zip(&right).map(|(x, y)| x + y).collect()
        }
    }
}

/// Monte-Carlo average of self-referenced pattern frequencies over
/// replicated walks, with per-pattern standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McPatternDistribution {
    pub order: usize,
    pub alphabet: Vec<DepthPattern>,
    /// Entrywise average of the per-replication frequency vectors.
    pub mean_freqs: Vec<f64>,
    /// Monte-Carlo standard error of each mean frequency.
    pub stderr: Vec<f64>,
    pub reps: usize,
    pub n_tied_windows_total: u64,
}

/// Per-replication frequency vectors in the order of `columns`.
///
/// Each replication simulates one walk on its own derived seed, estimates
/// the case of an unknown reference by the walk's own empirical measure,
/// and breaks depth ties by temporal index. Replications run in parallel;
/// output order is by replication index.
fn mc_runs(
    params: &WalkParams,
    reps: usize,
    columns: &[DepthPattern],
    seed: u64,
) -> Result<(Vec<Vec<f64>>, u64)> {
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    params.validate()?;
    let p = columns
        .first()
        .map(|c| c.order())
        .expect("nonempty column set");
    let results: Vec<(Vec<f64>, u64)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng_for(seed, &[rep as u64]);
            let traj = simulate_walk(params, &mut rng)?;
            let dist = estimate_pattern_distribution(
                &traj,
                &traj.self_reference(),
                p,
                TiePolicy::BreakByIndex,
            )?;
            Ok((dist.freqs_in(columns), dist.n_tied_windows()))
        })
        .collect::<Result<_>>()?;
    let tied = results.iter().map(|(_, t)| t).sum();
    Ok((results.into_iter().map(|(f, _)| f).collect(), tied))
}

fn mean_and_stderr(runs: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let reps = runs.len();
    let mean: Vec<f64> = pairwise_sum(runs)
        .into_iter()
        .map(|s| s / reps as f64)
        .collect();
    let stderr = if reps < 2 {
        vec![0.0; mean.len()]
    } else {
        (0..mean.len())
            .map(|k| {
                let var = runs
                    .iter()
                    .map(|r| (r[k] - mean[k]) * (r[k] - mean[k]))
                    .sum::<f64>()
                    / (reps - 1) as f64;
                (var / reps as f64).sqrt()
            })
            .collect()
    };
    (mean, stderr)
}

/// Averages the pattern frequencies of `reps` independent walks.
pub fn mc_pattern_distribution(
    params: &WalkParams,
    reps: usize,
    p: usize,
    seed: u64,
) -> Result<McPatternDistribution> {
    let alphabet = crate::patterns::enumerate_patterns(p, false)?;
    let (runs, tied) = mc_runs(params, reps, &alphabet, seed)?;
    let (mean_freqs, stderr) = mean_and_stderr(&runs);
    Ok(McPatternDistribution {
        order: p,
        alphabet,
        mean_freqs,
        stderr,
        reps,
        n_tied_windows_total: tied,
    })
}

/// A parameter grid for [`grid_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_values: Vec<i8>,
    pub kappa_values: Vec<f64>,
    pub beta_values: Vec<f64>,
    pub reps: usize,
    pub steps: usize,
    pub lambda: f64,
    pub p: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() || self.kappa_values.is_empty() || self.beta_values.is_empty()
        {
            return Err(Error::InvalidParameter {
                name: "grid values",
                value: 0.0,
                requirement: "nonempty r/kappa/beta lists",
            });
        }
        if self.reps == 0 || self.steps == 0 {
            return Err(Error::InvalidParameter {
                name: "reps/steps",
                value: 0.0,
                requirement: ">= 1",
            });
        }
        if self.p != 3 {
            return Err(Error::InvalidParameter {
                name: "p",
                value: self.p as f64,
                requirement: "= 3 (animal tables are order 3)",
            });
        }
        WalkParams::new(
            self.lambda,
            self.r_values[0],
            self.beta_values[0],
            self.kappa_values[0],
            self.steps,
        )
        .validate()
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub r: i8,
    pub kappa: f64,
    pub beta: f64,
    /// Distance objective at the cell's Monte-Carlo mean frequencies.
    pub objective: f64,
    /// Jackknife standard error of the objective over replications.
    pub stderr: f64,
    /// Monte-Carlo mean frequencies in table column order.
    pub mean_freqs: [f64; 6],
}

/// Evaluates the distance objective on every `(r, kappa, beta)` cell.
///
/// Cell seeds derive from the grid seed and the cell coordinates, and
/// per-replication merging is pairwise in replication order, so the scan is
/// reproducible bit for bit regardless of thread count.
pub fn grid_scan(grid: &GridSpec, animals: &[AnimalFrequencies]) -> Result<Vec<GridCell>> {
    grid.validate()?;
    if animals.is_empty() {
        return Err(Error::parse("animal table", "no rows"));
    }
    let columns = pattern_columns();
    let mut cells = Vec::new();
    for &r in &grid.r_values {
        for &kappa in &grid.kappa_values {
            for &beta in &grid.beta_values {
                let params = WalkParams::new(grid.lambda, r, beta, kappa, grid.steps);
                let cell_seed = derive_seed(
                    grid.seed,
                    &[r as u64, f64_component(kappa), f64_component(beta)],
                );
                let (runs, _) = mc_runs(&params, grid.reps, &columns, cell_seed)?;
                let (mean, _) = mean_and_stderr(&runs);
                let objective = distance_objective(animals, &mean)?;
                let stderr = jackknife_objective_stderr(animals, &runs, &mean)?;
                let mut mean_freqs = [0.0; 6];
                mean_freqs.copy_from_slice(&mean);
                cells.push(GridCell {
                    r,
                    kappa,
                    beta,
                    objective,
                    stderr,
                    mean_freqs,
                });
            }
        }
    }
    Ok(cells)
}

/// Leave-one-replication-out standard error of the objective.
fn jackknife_objective_stderr(
    animals: &[AnimalFrequencies],
    runs: &[Vec<f64>],
    mean: &[f64],
) -> Result<f64> {
    let reps = runs.len();
    if reps < 2 {
        return Ok(0.0);
    }
    let sums: Vec<f64> = mean.iter().map(|m| m * reps as f64).collect();
    let mut loo = Vec::with_capacity(reps);
    for run in runs {
        let q: Vec<f64> = sums
            .iter()
            .zip(run)
            .map(|(s, f)| (s - f) / (reps - 1) as f64)
            .collect();
        loo.push(distance_objective(animals, &q)?);
    }
    let loo_mean = loo.iter().sum::<f64>() / reps as f64;
    let var = loo.iter().map(|o| (o - loo_mean) * (o - loo_mean)).sum::<f64>();
    Ok(((reps - 1) as f64 / reps as f64 * var).sqrt())
}

/// The grid cell with the smallest objective.
pub fn argmin_cell(cells: &[GridCell]) -> Option<&GridCell> {
    cells
        .iter()
        .min_by(|a, b| a.objective.partial_cmp(&b.objective).unwrap())
}

/// Convenience: one cell's Monte-Carlo mean frequencies in column order.
pub fn mc_column_freqs(
    params: &WalkParams,
    reps: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let columns = pattern_columns();
    let (runs, _) = mc_runs(params, reps, &columns, seed)?;
    Ok(mean_and_stderr(&runs))
}

/// Projects a [`PatternDistribution`] onto the table column order.
pub fn column_freqs(dist: &PatternDistribution) -> Vec<f64> {
    dist.freqs_in(&pattern_columns())
}
