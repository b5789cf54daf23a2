//! Tie-aware rank patterns of depth sequences.
//!
//! The pattern of a window `(d_1, ..., d_p)` of depth values is the vector
//! `tau` with `tau(i) = #{j : d_j >= d_i}`: the deeper the point, the
//! smaller its entry. Equal depths produce equal entries, so patterns live
//! in the space of Cayley permutations `T_p`; when all depths are distinct
//! the pattern is an ordinary permutation.

use crate::depth::{depth_series, ReferenceDistribution};
use crate::geom::{Point2, PointSet2};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Supported pattern orders.
pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 8;

fn check_order(p: usize) -> Result<()> {
    if (MIN_ORDER..=MAX_ORDER).contains(&p) {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange { p })
    }
}

/// A tie-aware rank vector over one window. Entry `tau(i)` counts how many
/// window members are at least as deep as member `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DepthPattern {
    tau: Vec<u8>,
}

impl DepthPattern {
    /// Validates the Cayley condition: every value `v` that occurs satisfies
    /// `#{i : tau(i) <= v} = v`.
    pub fn new(tau: Vec<u8>) -> Result<Self> {
        let p = tau.len();
        if p < MIN_ORDER {
            return Err(Error::OrderOutOfRange { p });
        }
        let valid = tau.iter().all(|&t| t >= 1 && (t as usize) <= p)
            && tau.iter().all(|&v| {
                tau.iter().filter(|&&t| t <= v).count() == v as usize
            });
        if valid {
            Ok(DepthPattern { tau })
        } else {
            Err(Error::InvalidPattern { tau })
        }
    }

    pub fn order(&self) -> usize {
        self.tau.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.tau
    }

    /// True when no two entries coincide, i.e. the pattern is a permutation.
    pub fn is_tie_free(&self) -> bool {
        let mut seen = [false; MAX_ORDER + 1];
        self.tau.iter().all(|&t| {
            let fresh = !seen[t as usize];
            seen[t as usize] = true;
            fresh
        })
    }

    /// The pattern read backwards in time.
    pub fn reversed(&self) -> DepthPattern {
        let mut tau = self.tau.clone();
        tau.reverse();
        DepthPattern { tau }
    }

    /// Zero-based display form used in tables: `(0, 1, 2)` for tau `(1, 2, 3)`.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.tau.iter().map(|&t| (t - 1).to_string()).collect();
        format!("({})", inner.join(", "))
    }

    /// Parses a zero-based label back into a pattern of order `p`.
    pub fn parse_label(s: &str, p: usize) -> Result<DepthPattern> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(s, "expected parenthesized tuple"))?;
        let entries: Vec<u8> = inner
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u8>()
                    .map_err(|e| Error::parse(s, format!("bad entry {tok:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if entries.len() != p {
            return Err(Error::parse(
                s,
                format!("expected {p} entries, found {}", entries.len()),
            ));
        }
        DepthPattern::new(entries.iter().map(|&e| e + 1).collect())
    }
}

impl fmt::Display for DepthPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Extracts the pattern of a depth window, keeping ties as equal entries.
pub fn extract_pattern(depths: &[f64]) -> Result<DepthPattern> {
    let p = depths.len();
    if p < MIN_ORDER {
        return Err(Error::OrderOutOfRange { p });
    }
    if depths.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite {
            context: "depth window",
        });
    }
    let tau = depths
        .iter()
        .map(|&di| depths.iter().filter(|&&dj| dj >= di).count() as u8)
        .collect();
    Ok(DepthPattern { tau })
}

/// Extracts a tie-free pattern, ranking equal depths by temporal index:
/// the earlier observation is treated as the deeper one.
pub fn extract_pattern_break_by_index(depths: &[f64]) -> Result<DepthPattern> {
    let p = depths.len();
    if p < MIN_ORDER {
        return Err(Error::OrderOutOfRange { p });
    }
    if depths.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite {
            context: "depth window",
        });
    }
    let tau = (0..p)
        .map(|i| {
            let deeper = depths
                .iter()
                .enumerate()
                .filter(|&(j, &dj)| dj > depths[i] || (dj == depths[i] && j < i))
                .count();
            (deeper + 1) as u8
        })
        .collect();
    Ok(DepthPattern { tau })
}

/// Whether any two entries of the window coincide.
pub fn window_has_tie(depths: &[f64]) -> bool {
    depths
        .iter()
        .enumerate()
        .any(|(i, &di)| depths[..i].iter().any(|&dj| dj == di))
}

/// All patterns of order `p`, lexicographically sorted. With
/// `ties_allowed = false` these are the `p!` permutations; with ties the
/// full Cayley space `T_p`, generated as ordered set partitions (blocks
/// ordered deepest first).
pub fn enumerate_patterns(p: usize, ties_allowed: bool) -> Result<Vec<DepthPattern>> {
    check_order(p)?;
    let mut out = Vec::new();
    if ties_allowed {
        // blocks[b] holds the window indices in the b-th deepest tie class
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        gen_ordered_partitions(p, 0, &mut blocks, &mut out);
    } else {
        let mut tau: Vec<u8> = (1..=p as u8).collect();
        heap_permutations(&mut tau, p, &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

fn partition_to_pattern(p: usize, blocks: &[Vec<usize>]) -> DepthPattern {
    let mut tau = vec![0u8; p];
    let mut cum = 0u8;
    for block in blocks {
        cum += block.len() as u8;
        for &i in block {
            tau[i] = cum;
        }
    }
    DepthPattern { tau }
}

fn gen_ordered_partitions(
    p: usize,
    item: usize,
    blocks: &mut Vec<Vec<usize>>,
    out: &mut Vec<DepthPattern>,
) {
    if item == p {
        out.push(partition_to_pattern(p, blocks));
        return;
    }
    for b in 0..blocks.len() {
        blocks[b].push(item);
        gen_ordered_partitions(p, item + 1, blocks, out);
        blocks[b].pop();
    }
    for pos in 0..=blocks.len() {
        blocks.insert(pos, vec![item]);
        gen_ordered_partitions(p, item + 1, blocks, out);
        blocks.remove(pos);
    }
}

fn heap_permutations(tau: &mut Vec<u8>, k: usize, out: &mut Vec<DepthPattern>) {
    if k <= 1 {
        out.push(DepthPattern { tau: tau.clone() });
        return;
    }
    for i in 0..k {
        heap_permutations(tau, k - 1, out);
        if k % 2 == 0 {
            tau.swap(i, k - 1);
        } else {
            tau.swap(0, k - 1);
        }
    }
}

/// How equal depths within a window are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    /// Tie patterns appear as their own alphabet entries.
    KeepTies,
    /// Ties are broken by temporal index (earlier is deeper), so every
    /// window yields a permutation pattern.
    BreakByIndex,
}

/// A planar time series with uniform sampling interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub id: String,
    points: Vec<Point2>,
}

impl Trajectory {
    pub fn new(id: impl Into<String>, points: Vec<Point2>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::SeriesTooShort { len: 0, min: 1 });
        }
        for p in &points {
            p.ensure_finite("trajectory coordinate")?;
        }
        Ok(Trajectory {
            id: id.into(),
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn reversed(&self) -> Trajectory {
        let mut points = self.points.clone();
        points.reverse();
        Trajectory {
            id: self.id.clone(),
            points,
        }
    }

    /// The empirical measure of the trajectory itself, for self-referenced
    /// depth (the full trajectory, including each window's own points).
    pub fn self_reference(&self) -> ReferenceDistribution {
        ReferenceDistribution::Empirical(
            PointSet2::new(self.points.clone()).expect("trajectory is nonempty and finite"),
        )
    }
}

/// Relative frequencies of patterns over the sliding windows of one
/// trajectory. The alphabet is the full enumerated pattern space for the
/// order and tie policy, so absent patterns appear with frequency zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternDistribution {
    order: usize,
    alphabet: Vec<DepthPattern>,
    counts: Vec<u64>,
    n_windows: u64,
    n_tied_windows: u64,
}

impl PatternDistribution {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn alphabet(&self) -> &[DepthPattern] {
        &self.alphabet
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_windows(&self) -> u64 {
        self.n_windows
    }

    /// Number of windows in which at least two depths were equal.
    pub fn n_tied_windows(&self) -> u64 {
        self.n_tied_windows
    }

    /// Relative frequencies in alphabet order; each entry is exactly
    /// `count / n_windows`.
    pub fn freqs(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.n_windows as f64)
            .collect()
    }

    pub fn freq_of(&self, pattern: &DepthPattern) -> f64 {
        self.alphabet
            .iter()
            .position(|q| q == pattern)
            .map(|i| self.counts[i] as f64 / self.n_windows as f64)
            .unwrap_or(0.0)
    }

    /// Frequencies projected onto a caller-chosen pattern order.
    pub fn freqs_in(&self, order: &[DepthPattern]) -> Vec<f64> {
        order.iter().map(|q| self.freq_of(q)).collect()
    }

    /// Builds a distribution directly from a precomputed depth series.
    pub fn from_depth_series(depths: &[f64], p: usize, tie_policy: TiePolicy) -> Result<Self> {
        check_order(p)?;
        let n = depths.len();
        if n < p {
            return Err(Error::SeriesTooShort { len: n, min: p });
        }
        let alphabet = enumerate_patterns(p, matches!(tie_policy, TiePolicy::KeepTies))?;
        let index: HashMap<&DepthPattern, usize> =
            alphabet.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let mut counts = vec![0u64; alphabet.len()];
        let mut n_tied = 0u64;
        for window in depths.windows(p) {
            if window_has_tie(window) {
                n_tied += 1;
            }
            let pattern = match tie_policy {
                TiePolicy::KeepTies => extract_pattern(window)?,
                TiePolicy::BreakByIndex => extract_pattern_break_by_index(window)?,
            };
            counts[index[&pattern]] += 1;
        }
        Ok(PatternDistribution {
            order: p,
            alphabet,
            counts,
            n_windows: (n - p + 1) as u64,
            n_tied_windows: n_tied,
        })
    }
}

/// Estimates the pattern distribution of a trajectory: depths are computed
/// once per point against `reference`, then a window of length `p` slides
/// over the series and relative frequencies use divisor `n - p + 1`.
pub fn estimate_pattern_distribution(
    traj: &Trajectory,
    reference: &ReferenceDistribution,
    p: usize,
    tie_policy: TiePolicy,
) -> Result<PatternDistribution> {
    check_order(p)?;
    if traj.len() < p {
        return Err(Error::SeriesTooShort {
            len: traj.len(),
            min: p,
        });
    }
    let depths = depth_series(traj.points(), reference)?;
    PatternDistribution::from_depth_series(&depths, p, tie_policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::Cov2;

    fn pat(tau: &[u8]) -> DepthPattern {
        DepthPattern::new(tau.to_vec()).unwrap()
    }

    #[test]
    fn extraction_counts_dominating_depths() {
        assert_eq!(extract_pattern(&[0.3, 0.1, 0.2]).unwrap(), pat(&[1, 3, 2]));
        assert_eq!(extract_pattern(&[0.2, 0.2, 0.1]).unwrap(), pat(&[2, 2, 3]));
        assert_eq!(
            extract_pattern(&[0.7, 0.7, 0.7, 0.7]).unwrap(),
            pat(&[4, 4, 4, 4])
        );
        assert!(extract_pattern(&[0.5]).is_err());
        assert!(extract_pattern(&[0.5, f64::NAN]).is_err());
    }

    #[test]
    fn admissible_and_inadmissible_rank_vectors() {
        // (2, 4, 4, 2) is reachable, (2, 2, 2, 2) is not.
        assert!(DepthPattern::new(vec![2, 4, 4, 2]).is_ok());
        assert!(DepthPattern::new(vec![1, 2, 4, 4]).is_ok());
        assert!(DepthPattern::new(vec![2, 2, 2, 2]).is_err());
        assert!(DepthPattern::new(vec![1, 3, 3, 3]).is_err());
        assert!(DepthPattern::new(vec![0, 1, 2]).is_err());
    }

    #[test]
    fn index_tie_break_ranks_earlier_deeper() {
        assert_eq!(
            extract_pattern_break_by_index(&[0.2, 0.2, 0.1]).unwrap(),
            pat(&[1, 2, 3])
        );
        assert_eq!(
            extract_pattern_break_by_index(&[0.1, 0.2, 0.2]).unwrap(),
            pat(&[3, 1, 2])
        );
        // No effect on distinct depths.
        assert_eq!(
            extract_pattern_break_by_index(&[0.3, 0.1, 0.2]).unwrap(),
            extract_pattern(&[0.3, 0.1, 0.2]).unwrap()
        );
    }

    #[test]
    fn cayley_invariant_holds_for_extracted_patterns() {
        // Exhaustive over all depth-value assignments of orders 2..4.
        for p in 2..=4usize {
            let mut assignment = vec![1usize; p];
            loop {
                let depths: Vec<f64> = assignment.iter().map(|&v| v as f64).collect();
                let pattern = extract_pattern(&depths).unwrap();
                for &v in pattern.entries() {
                    let below = pattern.entries().iter().filter(|&&t| t <= v).count();
                    assert_eq!(below, v as usize);
                }
                // odometer over {1..p}^p
                let mut i = 0;
                while i < p && assignment[i] == p {
                    assignment[i] = 1;
                    i += 1;
                }
                if i == p {
                    break;
                }
                assignment[i] += 1;
            }
        }
    }

    #[test]
    fn extraction_is_invariant_under_increasing_transforms() {
        let depths = [0.12f64, 0.5, 0.12, 0.9, 0.31];
        let squashed: Vec<f64> = depths.iter().map(|d| d.tanh()).collect();
        let scaled: Vec<f64> = depths.iter().map(|d| 3.0 * d + 1.0).collect();
        let base = extract_pattern(&depths).unwrap();
        assert_eq!(extract_pattern(&squashed).unwrap(), base);
        assert_eq!(extract_pattern(&scaled).unwrap(), base);
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        assert_eq!(enumerate_patterns(3, false).unwrap().len(), 6);
        assert_eq!(enumerate_patterns(3, true).unwrap().len(), 13);
        assert_eq!(enumerate_patterns(4, false).unwrap().len(), 24);
        assert_eq!(enumerate_patterns(4, true).unwrap().len(), 75);
        // Fubini numbers continue 541, 4683, ...
        assert_eq!(enumerate_patterns(5, true).unwrap().len(), 541);
        assert_eq!(
            enumerate_patterns(2, true).unwrap(),
            vec![pat(&[1, 2]), pat(&[2, 1]), pat(&[2, 2])]
        );
        assert!(enumerate_patterns(1, true).is_err());
        assert!(enumerate_patterns(9, true).is_err());

        // Brute force: every assignment of values {1..p} to p slots,
        // deduplicated, must reproduce the tie-allowed alphabet.
        for p in 2..=4usize {
            let mut brute: Vec<DepthPattern> = Vec::new();
            let mut assignment = vec![1usize; p];
            loop {
                let depths: Vec<f64> = assignment.iter().map(|&v| v as f64).collect();
                brute.push(extract_pattern(&depths).unwrap());
                let mut i = 0;
                while i < p && assignment[i] == p {
                    assignment[i] = 1;
                    i += 1;
                }
                if i == p {
                    break;
                }
                assignment[i] += 1;
            }
            brute.sort_unstable();
            brute.dedup();
            assert_eq!(brute, enumerate_patterns(p, true).unwrap(), "order {p}");
        }
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(pat(&[1, 2, 3]).label(), "(0, 1, 2)");
        assert_eq!(pat(&[3, 2, 1]).label(), "(2, 1, 0)");
        for pattern in enumerate_patterns(3, true).unwrap() {
            let back = DepthPattern::parse_label(&pattern.label(), 3).unwrap();
            assert_eq!(back, pattern);
        }
        assert!(DepthPattern::parse_label("0, 1, 2", 3).is_err());
        assert!(DepthPattern::parse_label("(0, 1)", 3).is_err());
        assert!(DepthPattern::parse_label("(0, x, 2)", 3).is_err());
    }

    fn hand_trajectory() -> Trajectory {
        Trajectory::new(
            "hand",
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(4.0, 0.0),
                Point2::new(2.0, 1.0),
                Point2::new(2.0, -1.0),
                Point2::new(1.0, 3.0),
                Point2::new(2.0, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn hand_trajectory_matches_manual_window_tally() {
        // Self-referenced depths are (1/6, 1/6, 1/3, 1/6, 1/6, 1/2); the
        // four windows were tallied by hand with the brute-force oracle.
        let traj = hand_trajectory();
        let reference = traj.self_reference();
        let depths = depth_series(traj.points(), &reference).unwrap();
        let expected = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0.5];
        assert_eq!(depths, expected);

        let kept =
            estimate_pattern_distribution(&traj, &reference, 3, TiePolicy::KeepTies).unwrap();
        assert_eq!(kept.n_windows(), 4);
        assert_eq!(kept.n_tied_windows(), 4);
        assert_eq!(kept.freq_of(&pat(&[3, 3, 1])), 0.5);
        assert_eq!(kept.freq_of(&pat(&[3, 1, 3])), 0.25);
        assert_eq!(kept.freq_of(&pat(&[1, 3, 3])), 0.25);

        let broken =
            estimate_pattern_distribution(&traj, &reference, 3, TiePolicy::BreakByIndex).unwrap();
        assert_eq!(broken.n_tied_windows(), 4);
        assert_eq!(broken.freq_of(&pat(&[2, 3, 1])), 0.5);
        assert_eq!(broken.freq_of(&pat(&[2, 1, 3])), 0.25);
        assert_eq!(broken.freq_of(&pat(&[1, 2, 3])), 0.25);
    }

    #[test]
    fn constant_trajectory_is_all_ties() {
        let traj = Trajectory::new("c", vec![Point2::new(1.0, 1.0); 10]).unwrap();
        let dist =
            estimate_pattern_distribution(&traj, &traj.self_reference(), 3, TiePolicy::KeepTies)
                .unwrap();
        assert_eq!(dist.freq_of(&pat(&[3, 3, 3])), 1.0);
        assert_eq!(dist.n_tied_windows(), dist.n_windows());
    }

    #[test]
    fn gaussian_reference_single_window() {
        let traj = Trajectory::new(
            "g",
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(10.0, 0.0),
                Point2::new(5.0, 0.0),
            ],
        )
        .unwrap();
        let reference = ReferenceDistribution::Gaussian {
            mean: Point2::new(0.0, 0.0),
            cov: Cov2::identity(),
        };
        let dist =
            estimate_pattern_distribution(&traj, &reference, 3, TiePolicy::KeepTies).unwrap();
        assert_eq!(dist.n_windows(), 1);
        assert_eq!(dist.freq_of(&pat(&[1, 3, 2])), 1.0);
    }

    #[test]
    fn too_short_trajectory_is_rejected() {
        let traj = Trajectory::new("s", vec![Point2::new(0.0, 0.0); 2]).unwrap();
        assert!(matches!(
            estimate_pattern_distribution(&traj, &traj.self_reference(), 3, TiePolicy::KeepTies),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn frequencies_sum_to_one_and_are_exact_ratios() {
        let traj = hand_trajectory();
        for policy in [TiePolicy::KeepTies, TiePolicy::BreakByIndex] {
            let dist =
                estimate_pattern_distribution(&traj, &traj.self_reference(), 3, policy).unwrap();
            let total: f64 = dist.freqs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            let count_sum: u64 = dist.counts().iter().sum();
            assert_eq!(count_sum, dist.n_windows());
        }
    }

    #[test]
    fn reversal_maps_frequencies_to_reversed_patterns() {
        let traj = hand_trajectory();
        let forward =
            estimate_pattern_distribution(&traj, &traj.self_reference(), 3, TiePolicy::KeepTies)
                .unwrap();
        let rev = traj.reversed();
        let backward =
            estimate_pattern_distribution(&rev, &rev.self_reference(), 3, TiePolicy::KeepTies)
                .unwrap();
        for pattern in forward.alphabet() {
            assert_eq!(
                forward.freq_of(pattern),
                backward.freq_of(&pattern.reversed()),
                "pattern {pattern}"
            );
        }
    }

    #[test]
    fn large_empirical_disc_reference_approaches_the_analytic_one() {
        // The same fixed trajectory, scored once against the analytic disc
        // law and once against a large sample from it.
        use crate::depth::{sample_disc, ReferenceDistribution};
        use crate::seed::rng_for;
        let mut rng = rng_for(2718, &[0]);
        let traj = Trajectory::new(
            "fixed",
            sample_disc(200, &mut rng).unwrap().points().to_vec(),
        )
        .unwrap();
        let analytic =
            estimate_pattern_distribution(&traj, &ReferenceDistribution::Disc, 3, TiePolicy::KeepTies)
                .unwrap();
        let sample = sample_disc(50_000, &mut rng).unwrap();
        let empirical = estimate_pattern_distribution(
            &traj,
            &ReferenceDistribution::Empirical(sample),
            3,
            TiePolicy::KeepTies,
        )
        .unwrap();
        for pattern in analytic.alphabet() {
            let gap = (analytic.freq_of(pattern) - empirical.freq_of(pattern)).abs();
            assert!(gap < 0.06, "pattern {pattern}: gap {gap}");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn extracted_patterns_satisfy_the_cayley_condition(
                depths in prop::collection::vec((0u8..5).prop_map(|v| v as f64 / 4.0), 2..8),
            ) {
                let pattern = extract_pattern(&depths).unwrap();
                for &v in pattern.entries() {
                    let below = pattern.entries().iter().filter(|&&t| t <= v).count();
                    prop_assert_eq!(below, v as usize);
                }
                prop_assert!(DepthPattern::new(pattern.entries().to_vec()).is_ok());
            }

            #[test]
            fn extraction_ignores_increasing_transforms(
                depths in prop::collection::vec(0.0f64..1.0, 2..8),
                scale in 0.1f64..10.0,
                shift in -5.0f64..5.0,
            ) {
                let transformed: Vec<f64> =
                    depths.iter().map(|d| scale * d + shift).collect();
                prop_assert_eq!(
                    extract_pattern(&depths).unwrap(),
                    extract_pattern(&transformed).unwrap()
                );
            }

            #[test]
            fn tie_policies_agree_on_distinct_windows(
                seed_depths in prop::collection::vec(0.0f64..1.0, 3..9),
            ) {
                // continuous draws are distinct with probability one
                prop_assume!(!window_has_tie(&seed_depths));
                prop_assert_eq!(
                    extract_pattern(&seed_depths).unwrap(),
                    extract_pattern_break_by_index(&seed_depths).unwrap()
                );
            }

            #[test]
            fn reversing_a_depth_series_reverses_every_pattern(
                depths in prop::collection::vec((0u8..7).prop_map(|v| v as f64 / 6.0), 4..24),
            ) {
                let forward =
                    PatternDistribution::from_depth_series(&depths, 3, TiePolicy::KeepTies)
                        .unwrap();
                let mut reversed = depths.clone();
                reversed.reverse();
                let backward =
                    PatternDistribution::from_depth_series(&reversed, 3, TiePolicy::KeepTies)
                        .unwrap();
                for pattern in forward.alphabet() {
                    prop_assert_eq!(
                        forward.freq_of(pattern),
                        backward.freq_of(&pattern.reversed())
                    );
                }
            }

            #[test]
            fn frequencies_are_exact_window_ratios(
                depths in prop::collection::vec((0u8..4).prop_map(|v| v as f64 / 3.0), 3..20),
            ) {
                let dist =
                    PatternDistribution::from_depth_series(&depths, 3, TiePolicy::BreakByIndex)
                        .unwrap();
                let n_windows = depths.len() as u64 - 2;
                prop_assert_eq!(dist.n_windows(), n_windows);
                prop_assert_eq!(dist.counts().iter().sum::<u64>(), n_windows);
                let total: f64 = dist.freqs().iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-12);
            }
        }
    }
}
