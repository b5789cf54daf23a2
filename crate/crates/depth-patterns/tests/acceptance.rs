//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line with the measured quantities (visible with `--nocapture`).
//!
//! Criteria 4a, 4b, and 4d encode published model-selection table values
//! that the model as specified does not reproduce at concentrations
//! `kappa >= 0.5`; they are expected to fail and are kept red deliberately
//! rather than loosened. The companion low-concentration cell (checked in
//! 4c alongside the ordering property) and every other criterion pass.

use depth_patterns::depth::{
    analytic_depth, empirical_depth, oracle_depth, sample_disc, sample_gaussian, Cov2,
    ReferenceDistribution,
};
use depth_patterns::inference::{depth_convergence_curve, lrv_estimate};
use depth_patterns::modelsel::{
    bundled_animal_frequencies, distance_objective, grid_scan, mc_column_freqs, GridSpec,
};
use depth_patterns::movement::{sample_step_length, sample_von_mises, WalkParams};
use depth_patterns::patterns::{
    enumerate_patterns, extract_pattern, DepthPattern, PatternDistribution, TiePolicy,
};
use depth_patterns::seed::rng_for;
use depth_patterns::{Point2, PointSet2};
use statrs::distribution::{ContinuousCDF, Normal};

fn set(pairs: &[(f64, f64)]) -> PointSet2 {
    PointSet2::from_pairs(pairs.iter().copied()).unwrap()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_1_figure_depths_exact() {
    let panel3 = set(&[(3.0, 3.0), (-1.0, 1.0), (1.0, -2.0)]);
    let panel6 = set(&[
        (3.0, 3.0),
        (-1.0, 1.0),
        (1.0, -2.0),
        (-1.0, -2.0),
        (-2.0, -3.0),
        (-1.0, -4.0),
    ]);
    let panel7 = set(&[
        (3.0, 3.0),
        (-1.0, 1.0),
        (1.0, -2.0),
        (-1.0, -2.0),
        (-2.0, -3.0),
        (-1.0, -4.0),
        (2.0, -3.0),
    ]);
    let queries = [
        Point2::new(2.0, 2.0),
        Point2::new(-2.1, -1.0),
        Point2::new(-1.0, -3.15),
    ];
    // Exact recomputation on the drawn coordinates. The third panel's third
    // value is 1/7: the printed caption value 2/7 contradicts the drawing
    // (closed halfplane with inward normal (0,-1) contains one reference
    // point); the recomputation governs.
    let expected: [(&PointSet2, [f64; 3]); 3] = [
        (&panel3, [1.0 / 3.0, 0.0, 0.0]),
        (&panel6, [1.0 / 6.0, 0.0, 1.0 / 6.0]),
        (&panel7, [1.0 / 7.0, 0.0, 1.0 / 7.0]),
    ];
    let mut all = Vec::new();
    for (reference, values) in expected {
        for (q, want) in queries.iter().zip(values) {
            let got = empirical_depth(*q, reference).unwrap().value();
            all.push((got, want));
        }
    }
    let pass = all.iter().all(|(g, w)| g == w);
    report(
        "1 figure-exactness",
        pass,
        &format!("nine panel depths, zero tolerance; m=7 third value is the exact 1/7, not the caption's 2/7: {all:?}"),
    );
    for (got, want) in all {
        assert_eq!(got, want);
    }
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_2_sweep_equals_oracle() {
    let mut rng = rng_for(0xACCE97, &[2]);
    use rand::Rng;
    let mut checked = 0usize;

    // 200 seeded 15-point instances, half continuous, half on a coarse grid
    // that forces collinear and coincident configurations.
    for case in 0..200usize {
        let gridded = case % 2 == 0;
        let coord = |rng: &mut rand_chacha::ChaCha12Rng| -> f64 {
            if gridded {
                (rng.gen_range(-8i32..=8) as f64) / 2.0
            } else {
                rng.gen::<f64>() * 6.0 - 3.0
            }
        };
        let pts: Vec<(f64, f64)> = (0..15).map(|_| (coord(&mut rng), coord(&mut rng))).collect();
        let reference = set(&pts);
        let query = if case % 5 == 0 {
            Point2::from(pts[case % 15])
        } else {
            Point2::new(coord(&mut rng), coord(&mut rng))
        };
        let a = empirical_depth(query, &reference).unwrap().value();
        let b = oracle_depth(query, &reference).unwrap().value();
        assert_eq!(a, b, "case {case} at {query:?} over {pts:?}");
        checked += 1;
    }

    // Degenerate fixtures: collinear sets, duplicated points, query on a
    // reference point, and the open-arc minimum configuration.
    let fixtures: Vec<(Point2, PointSet2)> = vec![
        (Point2::new(0.0, 0.0), set(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])),
        (Point2::new(2.0, 0.0), set(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)])),
        (Point2::new(1.0, 1.0), set(&[(1.0, 1.0), (1.0, 1.0), (2.0, 2.0)])),
        (Point2::new(0.0, 0.0), set(&[(1.0, 0.0), (0.0, 1.0)])),
        (Point2::new(5.0, 5.0), set(&[(5.0, 5.0)])),
        (Point2::new(0.5, 0.5), set(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5)])),
    ];
    for (query, reference) in &fixtures {
        let a = empirical_depth(*query, reference).unwrap().value();
        let b = oracle_depth(*query, reference).unwrap().value();
        assert_eq!(a, b, "fixture at {query:?}");
        checked += 1;
    }
    report(
        "2 oracle-equivalence",
        true,
        &format!("{checked} instances, exact equality"),
    );
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_uniform_walk_table() {
    let expected = [0.2482, 0.126, 0.126, 0.249, 0.126, 0.126];
    let tolerance = 0.015;
    let params = WalkParams::new(0.02, 1, 0.0, 0.0, 1000);
    let (mean, _) = mc_column_freqs(&params, 500, 0xACCE97).unwrap();
    let deviations: Vec<f64> = mean
        .iter()
        .zip(expected)
        .map(|(m, e)| (m - e).abs())
        .collect();
    let worst = deviations.iter().cloned().fold(0.0f64, f64::max);
    let pass = worst <= tolerance;
    report(
        "3 uniform-walk-table",
        pass,
        &format!("500 reps of 1000 steps; frequencies {mean:?}, worst deviation {worst:.4} (tolerance {tolerance})"),
    );
    assert!(pass, "worst deviation {worst} > {tolerance}; mean = {mean:?}");
}

// ---------------------------------------------------------------- criterion 4

/// Published objective for the antipersistent spot cell.
const SPOT_A: (f64, f64) = (0.409, 0.10);
/// Published objective for the persistent spot cell.
const SPOT_B: (f64, f64) = (5.526, 0.15);

#[test]
fn criterion_4a_spot_cell_antipersistent_kappa_1() {
    let animals = bundled_animal_frequencies();
    let params = WalkParams::new(0.02, -1, 0.0, 1.0, 1000);
    let (mean, _) = mc_column_freqs(&params, 300, 0xACCE97 ^ 0x41).unwrap();
    let objective = distance_objective(&animals, &mean).unwrap();
    let (target, tol) = SPOT_A;
    let pass = (objective - target).abs() <= tol;
    report(
        "4a spot-cell r=-1 kappa=1 beta=0",
        pass,
        &format!("objective {objective:.3} vs published {target} ± {tol}; frequencies {mean:?}"),
    );
    assert!(
        pass,
        "objective {objective:.3} outside {target} ± {tol}: the walk as specified does not \
         reproduce this published cell (see the repository notes on the model-selection table)"
    );
}

#[test]
fn criterion_4b_spot_cell_persistent_kappa_4_beta_02() {
    let animals = bundled_animal_frequencies();
    let params = WalkParams::new(0.02, 1, 0.2, 4.0, 1000);
    let (mean, _) = mc_column_freqs(&params, 300, 0xACCE97 ^ 0x42).unwrap();
    let objective = distance_objective(&animals, &mean).unwrap();
    let (target, tol) = SPOT_B;
    let pass = (objective - target).abs() <= tol;
    report(
        "4b spot-cell r=+1 kappa=4 beta=0.2",
        pass,
        &format!("objective {objective:.3} vs published {target} ± {tol}"),
    );
    assert!(
        pass,
        "objective {objective:.3} outside {target} ± {tol}: the walk as specified does not \
         reproduce this published cell (see the repository notes on the model-selection table)"
    );
}

#[test]
fn criterion_4c_persistent_exceeds_antipersistent_and_low_kappa_anchors() {
    let animals = bundled_animal_frequencies();
    let grid = GridSpec {
        r_values: vec![1, -1],
        kappa_values: vec![0.25, 0.5, 1.0, 2.0, 4.0],
        beta_values: vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0],
        reps: 100,
        steps: 1000,
        lambda: 0.02,
        p: 3,
        seed: 0xACCE97 ^ 0x43,
    };
    let cells = grid_scan(&grid, &animals).unwrap();
    let mean_of = |r: i8| -> f64 {
        let objs: Vec<f64> = cells.iter().filter(|c| c.r == r).map(|c| c.objective).collect();
        objs.iter().sum::<f64>() / objs.len() as f64
    };
    let persistent = mean_of(1);
    let antipersistent = mean_of(-1);
    let ordering = persistent > antipersistent;

    // Anchor: the low-concentration persistent cell, where the model and
    // the published table agree closely.
    let anchor = cells
        .iter()
        .find(|c| c.r == 1 && c.kappa == 0.25 && c.beta == 0.0)
        .unwrap();
    let anchor_ok = (anchor.objective - 2.276).abs() < 0.25;

    let pass = ordering && anchor_ok;
    report(
        "4c r-ordering over the full grid",
        pass,
        &format!(
            "mean objective r=+1: {persistent:.3} > r=-1: {antipersistent:.3}; anchor cell \
             (+1, 0.25, 0) = {:.3} vs published 2.276",
            anchor.objective
        ),
    );
    assert!(ordering, "{persistent} vs {antipersistent}");
    assert!(anchor_ok, "anchor {:.3}", anchor.objective);
}

#[test]
fn criterion_4d_beta0_column_minimum_at_kappa_1() {
    let animals = bundled_animal_frequencies();
    let grid = GridSpec {
        r_values: vec![-1],
        kappa_values: vec![0.25, 0.5, 1.0, 2.0, 4.0],
        beta_values: vec![0.0],
        reps: 300,
        steps: 1000,
        lambda: 0.02,
        p: 3,
        seed: 0xACCE97 ^ 0x44,
    };
    let cells = grid_scan(&grid, &animals).unwrap();
    let column: Vec<(f64, f64)> = cells.iter().map(|c| (c.kappa, c.objective)).collect();
    let argmin = cells
        .iter()
        .min_by(|a, b| a.objective.partial_cmp(&b.objective).unwrap())
        .unwrap()
        .kappa;
    let pass = argmin == 1.0;
    report(
        "4d beta=0 column argmin",
        pass,
        &format!("column {column:?}; argmin kappa = {argmin}, published table has 1"),
    );
    assert!(
        pass,
        "beta=0 column at r=-1 attains its minimum at kappa={argmin}, not 1; column {column:?} \
         (see the repository notes on the model-selection table)"
    );
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_5_pattern_alphabet_sizes() {
    let tie_free_3 = enumerate_patterns(3, false).unwrap().len();
    let full_3 = enumerate_patterns(3, true).unwrap().len();
    let tie_free_4 = enumerate_patterns(4, false).unwrap().len();

    // Brute-force oracle: extract the pattern of every order-3 depth
    // assignment over {1, 2, 3}, deduplicated.
    let mut brute = std::collections::BTreeSet::new();
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                brute.insert(extract_pattern(&[a as f64, b as f64, c as f64]).unwrap());
            }
        }
    }
    let pass = tie_free_3 == 6 && full_3 == 13 && tie_free_4 == 24 && brute.len() == 13;
    report(
        "5 alphabet-sizes",
        pass,
        &format!("(6, 13, 24) got ({tie_free_3}, {full_3}, {tie_free_4}), brute-forced {}", brute.len()),
    );
    assert!(pass);
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_6_exchangeable_consistency() {
    let reference = ReferenceDistribution::Gaussian {
        mean: Point2::new(0.0, 0.0),
        cov: Cov2::identity(),
    };
    let n = 20_000usize;
    let runs = 100usize;
    let patterns = enumerate_patterns(3, false).unwrap();
    let mut covered = vec![0usize; patterns.len()];
    for run in 0..runs {
        let mut rng = rng_for(0xACCE97, &[6, run as u64]);
        let sample = sample_gaussian(n, Point2::new(0.0, 0.0), Cov2::identity(), &mut rng).unwrap();
        let depths: Vec<f64> = sample
            .iter()
            .map(|&p| analytic_depth(p, &reference).unwrap().value())
            .collect();
        let dist = PatternDistribution::from_depth_series(&depths, 3, TiePolicy::KeepTies).unwrap();
        for (k, pattern) in patterns.iter().enumerate() {
            let freq = dist.freq_of(pattern);
            let indicator: Vec<f64> = depths
                .windows(3)
                .map(|w| f64::from(extract_pattern(w).unwrap() == *pattern))
                .collect();
            let lrv = lrv_estimate(&indicator, None).unwrap();
            let bound = 3.0 * (lrv.sigma2_hat / lrv.n as f64).sqrt();
            if (freq - 1.0 / 6.0).abs() < bound {
                covered[k] += 1;
            }
        }
    }
    let worst = covered.iter().min().unwrap();
    let pass = *worst >= 95;
    report(
        "6 exchangeable-consistency",
        pass,
        &format!("per-pattern coverage over {runs} runs at n = {n}: {covered:?} (need >= 95)"),
    );
    assert!(pass, "coverage {covered:?}");
}

// ---------------------------------------------------------------- criterion 7

#[test]
fn criterion_7_clt_shape() {
    let reference = ReferenceDistribution::Gaussian {
        mean: Point2::new(0.0, 0.0),
        cov: Cov2::identity(),
    };
    let pattern = DepthPattern::new(vec![1, 2, 3]).unwrap();
    let n = 5000usize;
    let reps = 500usize;
    let p_true = 1.0 / 6.0;
    let mut zs: Vec<f64> = (0..reps)
        .map(|rep| {
            let mut rng = rng_for(0xACCE97, &[7, rep as u64]);
            let sample =
                sample_gaussian(n, Point2::new(0.0, 0.0), Cov2::identity(), &mut rng).unwrap();
            let depths: Vec<f64> = sample
                .iter()
                .map(|&p| analytic_depth(p, &reference).unwrap().value())
                .collect();
            let indicator: Vec<f64> = depths
                .windows(3)
                .map(|w| f64::from(extract_pattern(w).unwrap() == pattern))
                .collect();
            let m = indicator.len() as f64;
            let phat = indicator.iter().sum::<f64>() / m;
            let lrv = lrv_estimate(&indicator, None).unwrap();
            m.sqrt() * (phat - p_true) / lrv.sigma2_hat.sqrt()
        })
        .collect();
    zs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let normal = Normal::new(0.0, 1.0).unwrap();
    let ks = zs
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let f = normal.cdf(z);
            let lo = i as f64 / reps as f64;
            let hi = (i + 1) as f64 / reps as f64;
            (f - lo).abs().max((hi - f).abs())
        })
        .fold(0.0f64, f64::max);
    let critical = 1.6276 / (reps as f64).sqrt();
    let pass = ks < critical;
    report(
        "7 clt-shape",
        pass,
        &format!("KS statistic {ks:.4} vs critical {critical:.4} over {reps} replications at n = {n}"),
    );
    assert!(pass, "KS {ks} >= {critical}");
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_8_disc_depth_convergence() {
    let mut grid = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            grid.push(Point2::new(-0.6 + 0.3 * i as f64, -0.6 + 0.3 * j as f64));
        }
    }
    let table = depth_convergence_curve(
        &ReferenceDistribution::Disc,
        |n, rng| sample_disc(n, rng),
        &grid,
        &[100, 1000, 10_000],
        15,
        0xACCE97 ^ 0x8,
    )
    .unwrap();
    let errors: Vec<f64> = table.iter().map(|p| p.median_sup_error).collect();
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let small_enough = errors[2] <= 0.02;
    let pass = decreasing && small_enough;
    report(
        "8 disc-convergence",
        pass,
        &format!("median sup-errors {errors:?} over n in (100, 1000, 10000); need decreasing and <= 0.02 at 10000"),
    );
    assert!(pass, "errors {errors:?}");
}

// ---------------------------------------------------------------- criterion 9

#[test]
fn criterion_9_sampler_moments() {
    let mut rng = rng_for(0xACCE97, &[9]);
    let n = 100_000usize;
    let mean = (0..n)
        .map(|_| sample_step_length(0.02, &mut rng).unwrap())
        .sum::<f64>()
        / n as f64;
    let mean_ok = (mean - 50.0).abs() <= 1.0;

    // I1/I0 by power series, the mean-resultant-length oracle.
    let bessel = |nu: u32, x: f64| -> f64 {
        let half = x / 2.0;
        (0..60u32)
            .map(|j| {
                let mut term = half.powi((2 * j + nu) as i32);
                for k in 1..=j {
                    term /= k as f64;
                }
                for k in 1..=(j + nu) {
                    term /= k as f64;
                }
                term
            })
            .sum()
    };
    let mut resultants = Vec::new();
    let mut resultant_ok = true;
    for kappa in [0.25, 1.0, 4.0] {
        let (mut s, mut c) = (0.0, 0.0);
        for _ in 0..n {
            let a = sample_von_mises(0.0, kappa, &mut rng).unwrap();
            s += a.sin();
            c += a.cos();
        }
        let r = (s * s + c * c).sqrt() / n as f64;
        let expected = bessel(1, kappa) / bessel(0, kappa);
        resultants.push((kappa, r, expected));
        resultant_ok &= (r - expected).abs() < 0.02;
    }
    let pass = mean_ok && resultant_ok;
    report(
        "9 sampler-moments",
        pass,
        &format!("exponential mean {mean:.3} (want 50 ± 1); resultants {resultants:?} (tolerance 0.02)"),
    );
    assert!(pass, "mean {mean}, resultants {resultants:?}");
}
