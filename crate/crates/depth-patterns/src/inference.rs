//! Uncertainty quantification and diagnostics for pattern frequencies.
//!
//! The frequency of one pattern is a mean of dependent window indicators;
//! its CLT scale is the long-run variance of that indicator series, which
//! [`lrv_estimate`] estimates with a Bartlett-kernel truncated sum of sample
//! autocovariances. [`check_separation`] reports exact or near ties in a
//! depth sequence (tied depths make patterns ambiguous), and
//! [`depth_convergence_curve`] measures how fast empirical depth approaches
//! an analytic reference.

use crate::depth::{depth_series, ReferenceDistribution};
use crate::patterns::{
    extract_pattern, extract_pattern_break_by_index, DepthPattern, TiePolicy, Trajectory,
};
use crate::seed::rng_for;
use crate::{Error, Point2, PointSet2, Result};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

/// Minimum series length for the long-run variance estimator.
const MIN_LRV_LEN: usize = 8;

/// Bartlett-kernel long-run variance estimate of a window-indicator series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrvEstimate {
    /// Estimated long-run variance, clamped below at zero.
    pub sigma2_hat: f64,
    /// Truncation lag actually used.
    pub bandwidth: usize,
    /// Series length.
    pub n: usize,
    /// True when the raw estimate was negative and clamped to zero.
    pub clamped: bool,
}

/// Tie diagnostics for a depth sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationReport {
    /// Number of pairs whose absolute depth gap is within the tolerance.
    pub n_pairs_tied: u64,
    /// Smallest pairwise absolute gap.
    pub min_depth_gap: f64,
    /// Tolerance the report was computed with.
    pub tolerance: f64,
}

/// One row of an empirical-to-analytic depth convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub n: usize,
    pub median_sup_error: f64,
}

/// 0/1 series indicating which sliding windows of the trajectory carry the
/// pattern `pi`.
pub fn indicator_series(
    traj: &Trajectory,
    reference: &ReferenceDistribution,
    pi: &DepthPattern,
    tie_policy: TiePolicy,
) -> Result<Vec<u8>> {
    let p = pi.order();
    if traj.len() < p {
        return Err(Error::SeriesTooShort {
            len: traj.len(),
            min: p,
        });
    }
    let depths = depth_series(traj.points(), reference)?;
    depths
        .windows(p)
        .map(|w| {
            let pattern = match tie_policy {
                TiePolicy::KeepTies => extract_pattern(w)?,
                TiePolicy::BreakByIndex => extract_pattern_break_by_index(w)?,
            };
            Ok(u8::from(pattern == *pi))
        })
        .collect()
}

/// Long-run variance via the Bartlett kernel:
/// `sigma2 = g(0) + 2 * sum_{k=1}^{B} (1 - k/(B+1)) g(k)` with sample
/// autocovariances `g` and default bandwidth `B = floor(n^(1/3))`. Negative
/// results are clamped to zero and flagged.
pub fn lrv_estimate(series: &[f64], bandwidth: Option<usize>) -> Result<LrvEstimate> {
    let n = series.len();
    if n < MIN_LRV_LEN {
        return Err(Error::SeriesTooShort {
            len: n,
            min: MIN_LRV_LEN,
        });
    }
    if series.iter().any(|y| !y.is_finite()) {
        return Err(Error::NonFinite {
            context: "indicator series",
        });
    }
    let b = match bandwidth {
        Some(b) if b >= n => {
            return Err(Error::InvalidParameter {
                name: "bandwidth",
                value: b as f64,
                requirement: "< series length",
            })
        }
        Some(b) => b,
        None => (n as f64).cbrt().floor() as usize,
    };
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|y| y - mean).collect();
    let gamma = |k: usize| {
        centered[..n - k]
            .iter()
            .zip(&centered[k..])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / n as f64
    };
    let mut sigma2 = gamma(0);
    for k in 1..=b {
        sigma2 += 2.0 * (1.0 - k as f64 / (b as f64 + 1.0)) * gamma(k);
    }
    let clamped = sigma2 < 0.0;
    Ok(LrvEstimate {
        sigma2_hat: sigma2.max(0.0),
        bandwidth: b,
        n,
        clamped,
    })
}

/// Normal-limit confidence interval `freq ± z * sqrt(sigma2/n)`, clipped to
/// `[0, 1]`.
pub fn pattern_ci(freq: f64, lrv: &LrvEstimate, level: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&freq) || !freq.is_finite() {
        return Err(Error::InvalidParameter {
            name: "freq",
            value: freq,
            requirement: "in [0, 1]",
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter {
            name: "level",
            value: level,
            requirement: "in (0, 1)",
        });
    }
    let z = Normal::new(0.0, 1.0)
        .expect("unit normal")
        .inverse_cdf((1.0 + level) / 2.0);
    let half = z * (lrv.sigma2_hat / lrv.n as f64).sqrt();
    Ok(((freq - half).max(0.0), (freq + half).min(1.0)))
}

/// Minimum pairwise depth gap and the number of pairs within `tolerance`.
pub fn check_separation(depths: &[f64], tolerance: f64) -> Result<SeparationReport> {
    if depths.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: depths.len(),
            min: 2,
        });
    }
    if depths.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite {
            context: "depth sequence",
        });
    }
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            value: tolerance,
            requirement: ">= 0 and finite",
        });
    }
    let mut sorted = depths.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let min_gap = sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    // Pairs within tolerance, counted over the sorted order with a sliding
    // lower pointer.
    let mut tied = 0u64;
    let mut lo = 0usize;
    for (hi, &d) in sorted.iter().enumerate() {
        while d - sorted[lo] > tolerance {
            lo += 1;
        }
        tied += (hi - lo) as u64;
    }
    Ok(SeparationReport {
        n_pairs_tied: tied,
        min_depth_gap: min_gap,
        tolerance,
    })
}

/// For each sample size, draws `reps` reference samples with the supplied
/// sampler and records the median over repetitions of the maximum depth
/// error over the grid, comparing empirical depth against the analytic
/// reference. Repetitions run in parallel on derived seeds, so the table is
/// independent of thread scheduling.
pub fn depth_convergence_curve<S>(
    reference: &ReferenceDistribution,
    sampler: S,
    grid: &[Point2],
    sizes: &[usize],
    reps: usize,
    base_seed: u64,
) -> Result<Vec<ConvergencePoint>>
where
    S: Fn(usize, &mut ChaCha12Rng) -> Result<PointSet2> + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: 0.0,
            requirement: "nonempty",
        });
    }
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "sizes",
            value: f64::NAN,
            requirement: "nonempty and strictly increasing",
        });
    }
    let analytic: Vec<f64> = grid
        .iter()
        .map(|&x| crate::depth::analytic_depth(x, reference).map(|d| d.value()))
        .collect::<Result<_>>()?;

    sizes
        .iter()
        .map(|&n| {
            let mut errors: Vec<f64> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = rng_for(base_seed, &[n as u64, rep as u64]);
                    let sample = sampler(n, &mut rng)?;
                    let reference = ReferenceDistribution::Empirical(sample);
                    let empirical = depth_series(grid, &reference)?;
                    Ok(empirical
                        .iter()
                        .zip(&analytic)
                        .map(|(e, a)| (e - a).abs())
                        .fold(0.0f64, f64::max))
                })
                .collect::<Result<Vec<f64>>>()?;
            errors.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            let median = if errors.len() % 2 == 1 {
                errors[errors.len() / 2]
            } else {
                0.5 * (errors[errors.len() / 2 - 1] + errors[errors.len() / 2])
            };
            Ok(ConvergencePoint {
                n,
                median_sup_error: median,
            })
        })
        .collect()
}
