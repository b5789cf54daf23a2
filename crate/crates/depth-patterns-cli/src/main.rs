//! Command-line driver: depth computation, pattern estimation with
//! confidence intervals, walk simulation, parameter-grid scans, and
//! statistical diagnostics.
//!
//! Every output file starts with a metadata comment (`#` line for CSV, a
//! `meta` object for JSON) carrying the version, the command, its
//! parameters, and the seed, so published numbers can be regenerated.
//! Exit codes: 0 success, 1 runtime or data error, 2 usage error.

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};
use depth_patterns::depth::{
    depth_series, sample_disc, sample_gaussian, Cov2, ReferenceDistribution,
};
use depth_patterns::inference::{
    check_separation, depth_convergence_curve, indicator_series, lrv_estimate, pattern_ci,
};
use depth_patterns::io::{self, PatternCiRow, TrajectoryRecord};
use depth_patterns::modelsel::{
    bundled_animal_frequencies, grid_scan, load_animal_frequencies, pattern_columns, GridSpec,
};
use depth_patterns::movement::{simulate_walk, InitialHeading, WalkParams};
use depth_patterns::patterns::{
    estimate_pattern_distribution, DepthPattern, TiePolicy, Trajectory,
};
use depth_patterns::seed::rng_for;
use depth_patterns::Point2;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Fixed default seed: published numbers reproduce unless `--seed random`
/// opts out.
const DEFAULT_SEED: u64 = 1_000_003;

const THREADS_ENV: &str = "DEPTH_PATTERNS_THREADS";

#[derive(Parser)]
#[command(
    name = "depth-patterns",
    version,
    about = "Halfspace-depth ordinal patterns for planar trajectories"
)]
struct Cli {
    /// RNG seed (an unsigned integer, or "random" for entropy).
    #[arg(long, global = true, default_value = "1000003")]
    seed: String,

    /// Worker thread cap (default: DEPTH_PATTERNS_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute per-point depths of trajectories against a reference.
    Depth(DepthArgs),
    /// Estimate pattern frequencies with CLT confidence intervals.
    Patterns(PatternsArgs),
    /// Simulate biased (anti)persistent random walks.
    Simulate(SimulateArgs),
    /// Scan a (r, kappa, beta) grid against observed animal frequencies.
    Scan(ScanArgs),
    /// Convergence, CLT, and separation diagnostics.
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("reference").required(true)
    .args(["ref_empirical", "ref_disc", "ref_gaussian"])))]
struct ReferenceArgs {
    /// Empirical reference: a point-set CSV (header x,y), or "self" for
    /// each trajectory's own empirical measure.
    #[arg(long, value_name = "FILE|self")]
    ref_empirical: Option<String>,

    /// The unit-disc reference with depth (1 - ‖x‖)/2.
    #[arg(long)]
    ref_disc: bool,

    /// Gaussian reference "mx,my,s11,s12,s22".
    #[arg(long, value_name = "MX,MY,S11,S12,S22")]
    ref_gaussian: Option<String>,
}

/// A reference that is either fixed or rebuilt per trajectory.
enum ReferenceChoice {
    Fixed(ReferenceDistribution),
    SelfReference,
}

impl ReferenceArgs {
    fn parse(&self) -> anyhow::Result<ReferenceChoice> {
        if self.ref_disc {
            return Ok(ReferenceChoice::Fixed(ReferenceDistribution::Disc));
        }
        if let Some(spec) = &self.ref_gaussian {
            let v = parse_f64_list(spec)?;
            if v.len() != 5 {
                bail!("--ref-gaussian expects 5 numbers mx,my,s11,s12,s22");
            }
            return Ok(ReferenceChoice::Fixed(ReferenceDistribution::Gaussian {
                mean: Point2::new(v[0], v[1]),
                cov: Cov2::new(v[2], v[3], v[4])?,
            }));
        }
        match self.ref_empirical.as_deref() {
            Some("self") => Ok(ReferenceChoice::SelfReference),
            Some(path) => {
                let set = io::read_point_set(File::open(path).with_context(|| path.to_string())?)?;
                Ok(ReferenceChoice::Fixed(ReferenceDistribution::Empirical(set)))
            }
            None => bail!("a reference must be chosen"),
        }
    }

    fn describe(&self) -> String {
        if self.ref_disc {
            "disc".into()
        } else if let Some(g) = &self.ref_gaussian {
            format!("gaussian({g})")
        } else {
            format!("empirical({})", self.ref_empirical.as_deref().unwrap_or("?"))
        }
    }
}

impl ReferenceChoice {
    fn for_trajectory(&self, traj: &Trajectory) -> ReferenceDistribution {
        match self {
            ReferenceChoice::Fixed(r) => r.clone(),
            ReferenceChoice::SelfReference => traj.self_reference(),
        }
    }
}

#[derive(Args)]
struct DepthArgs {
    /// Trajectory CSV (header id,t,x,y).
    #[arg(long)]
    input: PathBuf,

    #[command(flatten)]
    reference: ReferenceArgs,

    /// Output CSV (header id,t,depth).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PatternsArgs {
    /// Trajectory CSV (header id,t,x,y).
    #[arg(long)]
    input: PathBuf,

    #[command(flatten)]
    reference: ReferenceArgs,

    /// Pattern order p.
    #[arg(long, default_value_t = 3)]
    order: usize,

    /// Tie handling: keep ties as own patterns, or break by index.
    #[arg(long, value_parser = ["keep", "break"], default_value = "keep")]
    ties: String,

    /// Confidence level for the intervals.
    #[arg(long, default_value_t = 0.95)]
    level: f64,

    /// Output CSV: id,pattern,freq,count,ci_low,ci_high,sigma2,bandwidth,
    /// n_windows,n_tied_windows.
    #[arg(long)]
    out: PathBuf,

    /// Optional JSON output keyed by trajectory id.
    #[arg(long)]
    json_out: Option<PathBuf>,

    /// Optional wide table (header id,p012,...,p102), reusable as a scan
    /// animal table. Requires --order 3 --ties break.
    #[arg(long)]
    animal_table: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Walk-parameter JSON file; when given, the individual parameter
    /// flags below are ignored (an explicit --seed still wins).
    #[arg(long)]
    params: Option<PathBuf>,

    #[arg(long, default_value_t = 0.02)]
    lambda: f64,

    /// Persistence sign, +1 or -1.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    r: i8,

    #[arg(long, default_value_t = 0.0)]
    beta: f64,

    #[arg(long, default_value_t = 0.0)]
    kappa: f64,

    #[arg(long, default_value_t = 1000)]
    steps: usize,

    /// Bias center "x,y".
    #[arg(long, default_value = "0,0")]
    center: String,

    /// Start position "x,y".
    #[arg(long, default_value = "0,0")]
    x0: String,

    /// Initial heading: an angle in radians, or "uniform".
    #[arg(long, default_value = "uniform")]
    a0: String,

    /// Number of independent walks.
    #[arg(long, default_value_t = 1)]
    reps: usize,

    /// Output trajectory CSV (ids sim_0000, sim_0001, ...).
    #[arg(long)]
    out: PathBuf,

    /// Also write the resolved parameters (with the seed) as JSON.
    #[arg(long)]
    params_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Grid JSON file (fields r_values, kappa_values, beta_values, reps,
    /// steps, lambda, p, seed); flags below are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, default_value = "1,-1", allow_hyphen_values = true)]
    r_values: String,

    #[arg(long, default_value = "0.25,0.5,1,2,4")]
    kappa_values: String,

    #[arg(long, default_value = "0,0.2,0.4,0.6,0.8,1")]
    beta_values: String,

    #[arg(long, default_value_t = 300)]
    reps: usize,

    #[arg(long, default_value_t = 1000)]
    steps: usize,

    #[arg(long, default_value_t = 0.02)]
    lambda: f64,

    #[arg(long, default_value_t = 3)]
    order: usize,

    /// Animal-frequency CSV, or "bundled" for the packaged table.
    #[arg(long, default_value = "bundled")]
    animals: String,

    /// Output CSV r,kappa,beta,objective,stderr.
    #[arg(long)]
    out: PathBuf,

    /// Optional wide objective table (rows r,kappa; columns beta).
    #[arg(long)]
    pivot_out: Option<PathBuf>,

    /// Optional JSON summary with the argmin cell.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true)
    .args(["convergence", "clt", "separation"])))]
struct DiagnoseArgs {
    /// Empirical-to-analytic depth convergence over growing sample sizes.
    #[arg(long)]
    convergence: bool,

    /// Standardized pattern-frequency statistics on an exchangeable
    /// synthetic process.
    #[arg(long)]
    clt: bool,

    /// Tie diagnostics of a depth sequence.
    #[arg(long)]
    separation: bool,

    /// (convergence) analytic reference: "disc" or "gaussian:mx,my,s11,s12,s22".
    #[arg(long, default_value = "disc")]
    reference: String,

    /// (convergence) grid CSV (header x,y); defaults to a 5x5 interior grid.
    #[arg(long)]
    grid_file: Option<PathBuf>,

    /// (convergence) comma-separated sample sizes.
    #[arg(long, default_value = "100,1000,10000")]
    sizes: String,

    /// (convergence, clt) repetitions.
    #[arg(long, default_value_t = 7)]
    reps: usize,

    /// (clt) trajectory length per repetition.
    #[arg(long, default_value_t = 5000)]
    n: usize,

    /// (clt) pattern label, e.g. "(0, 1, 2)".
    #[arg(long, default_value = "(0, 1, 2)")]
    pattern: String,

    /// (clt) pattern order.
    #[arg(long, default_value_t = 3)]
    order: usize,

    /// (separation) trajectory CSV.
    #[arg(long)]
    input: Option<PathBuf>,

    /// (separation) reference: "self", "disc", "gaussian:...", or a
    /// point-set CSV path.
    #[arg(long, default_value = "self")]
    sep_reference: String,

    /// (separation) tie tolerance.
    #[arg(long, default_value_t = 0.0)]
    tolerance: f64,

    /// Output CSV.
    #[arg(long)]
    out: PathBuf,
}

fn parse_f64_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|e| anyhow!("bad number {tok:?}: {e}"))
        })
        .collect()
}

fn parse_usize_list(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| anyhow!("bad count {tok:?}: {e}"))
        })
        .collect()
}

fn parse_point(s: &str) -> anyhow::Result<Point2> {
    let v = parse_f64_list(s)?;
    if v.len() != 2 {
        bail!("expected \"x,y\", found {s:?}");
    }
    Ok(Point2::new(v[0], v[1]))
}

fn parse_seed(s: &str) -> anyhow::Result<u64> {
    if s == "random" {
        Ok(rand::random())
    } else {
        s.parse::<u64>()
            .map_err(|e| anyhow!("--seed expects an unsigned integer or \"random\": {e}"))
    }
}

/// Opens the output file and writes the metadata comment line.
fn create_csv_output(path: &Path, meta: &str) -> anyhow::Result<File> {
    let mut file =
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    writeln!(file, "# depth-patterns v{} {}", depth_patterns::VERSION, meta)?;
    Ok(file)
}

fn meta_json(meta: &str) -> serde_json::Value {
    serde_json::json!({
        "version": depth_patterns::VERSION,
        "parameters": meta,
    })
}

fn read_trajectory_file(path: &Path) -> anyhow::Result<Vec<TrajectoryRecord>> {
    Ok(io::read_trajectories(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    )?)
}

fn cmd_depth(args: &DepthArgs, seed: u64) -> anyhow::Result<()> {
    let records = read_trajectory_file(&args.input)?;
    let choice = args.reference.parse()?;
    let mut rows = Vec::new();
    for record in &records {
        let reference = choice.for_trajectory(&record.trajectory);
        let depths = depth_series(record.trajectory.points(), &reference)?;
        for (t, d) in record.times.iter().zip(depths) {
            rows.push((record.trajectory.id.clone(), *t, d));
        }
    }
    let meta = format!(
        "cmd=depth seed={seed} input={} reference={}",
        args.input.display(),
        args.reference.describe()
    );
    let file = create_csv_output(&args.out, &meta)?;
    io::write_depth_rows(file, &rows)?;
    Ok(())
}

fn tie_policy(ties: &str) -> TiePolicy {
    match ties {
        "break" => TiePolicy::BreakByIndex,
        _ => TiePolicy::KeepTies,
    }
}

fn cmd_patterns(args: &PatternsArgs, seed: u64) -> anyhow::Result<()> {
    let records = read_trajectory_file(&args.input)?;
    let choice = args.reference.parse()?;
    let policy = tie_policy(&args.ties);
    if args.animal_table.is_some() && (args.order != 3 || policy != TiePolicy::BreakByIndex) {
        bail!("--animal-table requires --order 3 --ties break");
    }

    let meta = format!(
        "cmd=patterns seed={seed} input={} reference={} order={} ties={} level={}",
        args.input.display(),
        args.reference.describe(),
        args.order,
        args.ties,
        args.level,
    );

    let mut csv_rows: Vec<(String, PatternCiRow, u64, u64, u64)> = Vec::new();
    let mut json_by_id = serde_json::Map::new();
    let mut animal_rows: Vec<(String, Vec<f64>)> = Vec::new();
    let columns = pattern_columns();

    for record in &records {
        let traj = &record.trajectory;
        let reference = choice.for_trajectory(traj);
        let dist = estimate_pattern_distribution(traj, &reference, args.order, policy)?;
        let freqs = dist.freqs();
        for (i, pattern) in dist.alphabet().iter().enumerate() {
            let indicators = indicator_series(traj, &reference, pattern, policy)?;
            let series: Vec<f64> = indicators.iter().map(|&b| f64::from(b)).collect();
            let lrv = lrv_estimate(&series, None)?;
            let (ci_low, ci_high) = pattern_ci(freqs[i], &lrv, args.level)?;
            csv_rows.push((
                traj.id.clone(),
                PatternCiRow {
                    pattern: pattern.clone(),
                    freq: freqs[i],
                    ci_low,
                    ci_high,
                    sigma2: lrv.sigma2_hat,
                    bandwidth: lrv.bandwidth,
                },
                dist.counts()[i],
                dist.n_windows(),
                dist.n_tied_windows(),
            ));
        }
        json_by_id.insert(traj.id.clone(), io::pattern_distribution_json(&dist));
        if args.animal_table.is_some() {
            animal_rows.push((traj.id.clone(), dist.freqs_in(&columns)));
        }
    }

    let mut file = create_csv_output(&args.out, &meta)?;
    {
        let mut w = csv::Writer::from_writer(&mut file);
        w.write_record([
            "id",
            "pattern",
            "freq",
            "count",
            "ci_low",
            "ci_high",
            "sigma2",
            "bandwidth",
            "n_windows",
            "n_tied_windows",
        ])?;
        for (id, row, count, n_windows, n_tied) in &csv_rows {
            w.write_record([
                id.clone(),
                row.pattern.label(),
                row.freq.to_string(),
                count.to_string(),
                row.ci_low.to_string(),
                row.ci_high.to_string(),
                row.sigma2.to_string(),
                row.bandwidth.to_string(),
                n_windows.to_string(),
                n_tied.to_string(),
            ])?;
        }
        w.flush()?;
    }

    if let Some(path) = &args.json_out {
        let body = serde_json::json!({
            "meta": meta_json(&meta),
            "trajectories": serde_json::Value::Object(json_by_id),
        });
        serde_json::to_writer_pretty(File::create(path)?, &body)?;
    }

    if let Some(path) = &args.animal_table {
        let file = create_csv_output(path, &meta)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["id", "p012", "p021", "p201", "p210", "p120", "p102"])?;
        for (id, freqs) in &animal_rows {
            let mut record = vec![id.clone()];
            record.extend(freqs.iter().map(|f| f.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, cli_seed: u64, seed_was_explicit: bool) -> anyhow::Result<()> {
    let (params, seed) = match &args.params {
        Some(path) => {
            let (params, file_seed) = io::read_walk_params(File::open(path)?)?;
            (
                params,
                if seed_was_explicit { cli_seed } else { file_seed },
            )
        }
        None => {
            let a0 = if args.a0 == "uniform" {
                InitialHeading::UniformRandom
            } else {
                InitialHeading::Fixed(
                    args.a0
                        .parse::<f64>()
                        .map_err(|e| anyhow!("--a0 expects an angle or \"uniform\": {e}"))?,
                )
            };
            let params = WalkParams {
                lambda: args.lambda,
                r: args.r,
                beta: args.beta,
                kappa: args.kappa,
                center: parse_point(&args.center)?,
                n_steps: args.steps,
                x0: parse_point(&args.x0)?,
                a0,
            };
            (params, cli_seed)
        }
    };
    params.validate()?;
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }

    let mut trajectories = Vec::with_capacity(args.reps);
    for rep in 0..args.reps {
        let mut rng = rng_for(seed, &[rep as u64]);
        let mut traj = simulate_walk(&params, &mut rng)?;
        traj.id = format!("sim_{rep:04}");
        trajectories.push(traj);
    }

    let meta = format!(
        "cmd=simulate seed={seed} lambda={} r={} beta={} kappa={} steps={} reps={}",
        params.lambda, params.r, params.beta, params.kappa, params.n_steps, args.reps
    );
    let file = create_csv_output(&args.out, &meta)?;
    io::write_trajectories(file, &trajectories)?;

    if let Some(path) = &args.params_out {
        io::write_walk_params(File::create(path)?, &params, seed)?;
    }
    Ok(())
}

fn cmd_scan(args: &ScanArgs, cli_seed: u64, seed_was_explicit: bool) -> anyhow::Result<()> {
    let grid = match &args.config {
        Some(path) => {
            let mut grid: GridSpec = serde_json::from_reader(File::open(path)?)?;
            if seed_was_explicit {
                grid.seed = cli_seed;
            }
            grid
        }
        None => GridSpec {
            r_values: parse_f64_list(&args.r_values)?
                .into_iter()
                .map(|v| v as i8)
                .collect(),
            kappa_values: parse_f64_list(&args.kappa_values)?,
            beta_values: parse_f64_list(&args.beta_values)?,
            reps: args.reps,
            steps: args.steps,
            lambda: args.lambda,
            p: args.order,
            seed: cli_seed,
        },
    };
    let animals = if args.animals == "bundled" {
        bundled_animal_frequencies()
    } else {
        load_animal_frequencies(&args.animals)?
    };

    let cells = grid_scan(&grid, &animals)?;

    let meta = format!(
        "cmd=scan seed={} animals={} reps={} steps={} lambda={} p={}",
        grid.seed, args.animals, grid.reps, grid.steps, grid.lambda, grid.p
    );
    let file = create_csv_output(&args.out, &meta)?;
    io::write_scan_csv(file, &cells)?;

    if let Some(path) = &args.pivot_out {
        let file = create_csv_output(path, &meta)?;
        io::write_scan_pivot_csv(file, &cells)?;
    }
    if let Some(path) = &args.json_out {
        let mut summary = io::scan_summary_json(&grid, &cells);
        summary["meta"] = meta_json(&meta);
        serde_json::to_writer_pretty(File::create(path)?, &summary)?;
    }
    Ok(())
}

fn parse_analytic_reference(spec: &str) -> anyhow::Result<ReferenceDistribution> {
    if spec == "disc" {
        return Ok(ReferenceDistribution::Disc);
    }
    if let Some(rest) = spec.strip_prefix("gaussian:") {
        let v = parse_f64_list(rest)?;
        if v.len() != 5 {
            bail!("gaussian reference expects 5 numbers mx,my,s11,s12,s22");
        }
        return Ok(ReferenceDistribution::Gaussian {
            mean: Point2::new(v[0], v[1]),
            cov: Cov2::new(v[2], v[3], v[4])?,
        });
    }
    bail!("unknown reference {spec:?}; use \"disc\" or \"gaussian:mx,my,s11,s12,s22\"")
}

fn default_interior_grid() -> Vec<Point2> {
    let mut grid = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            grid.push(Point2::new(
                -0.6 + 0.3 * i as f64,
                -0.6 + 0.3 * j as f64,
            ));
        }
    }
    grid
}

fn cmd_diagnose(args: &DiagnoseArgs, seed: u64) -> anyhow::Result<()> {
    if args.convergence {
        let reference = parse_analytic_reference(&args.reference)?;
        let grid = match &args.grid_file {
            Some(path) => io::read_point_set(File::open(path)?)?.points().to_vec(),
            None => default_interior_grid(),
        };
        let sizes = parse_usize_list(&args.sizes)?;
        let table = match &reference {
            ReferenceDistribution::Disc => depth_convergence_curve(
                &reference,
                |n, rng| sample_disc(n, rng),
                &grid,
                &sizes,
                args.reps,
                seed,
            )?,
            ReferenceDistribution::Gaussian { mean, cov } => {
                let (mean, cov) = (*mean, *cov);
                depth_convergence_curve(
                    &reference,
                    move |n, rng| sample_gaussian(n, mean, cov, rng),
                    &grid,
                    &sizes,
                    args.reps,
                    seed,
                )?
            }
            ReferenceDistribution::Empirical(_) => unreachable!("parse_analytic_reference"),
        };
        let meta = format!(
            "cmd=diagnose-convergence seed={seed} reference={} sizes={} reps={} grid_points={}",
            args.reference,
            args.sizes,
            args.reps,
            grid.len()
        );
        let file = create_csv_output(&args.out, &meta)?;
        io::write_convergence_csv(file, &table)?;
        return Ok(());
    }

    if args.clt {
        // Exchangeable synthetic process: iid standard Gaussian points with
        // the analytic Gaussian reference, so each tie-free pattern of
        // order p has probability 1/p!.
        let pattern = DepthPattern::parse_label(&args.pattern, args.order)?;
        if !pattern.is_tie_free() {
            bail!("the CLT diagnostic needs a tie-free pattern");
        }
        let reference = ReferenceDistribution::Gaussian {
            mean: Point2::new(0.0, 0.0),
            cov: Cov2::identity(),
        };
        let p_true = 1.0 / (1..=args.order).product::<usize>() as f64;
        let meta = format!(
            "cmd=diagnose-clt seed={seed} pattern={} order={} n={} reps={} p_true={p_true}",
            args.pattern, args.order, args.n, args.reps
        );
        let file = create_csv_output(&args.out, &meta)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["rep", "phat", "sigma2", "z"])?;
        for rep in 0..args.reps {
            let mut rng = rng_for(seed, &[rep as u64]);
            let sample = sample_gaussian(args.n, Point2::new(0.0, 0.0), Cov2::identity(), &mut rng)?;
            let traj = Trajectory::new(format!("rep{rep}"), sample.points().to_vec())?;
            let indicators =
                indicator_series(&traj, &reference, &pattern, TiePolicy::KeepTies)?;
            let series: Vec<f64> = indicators.iter().map(|&b| f64::from(b)).collect();
            let n_windows = series.len() as f64;
            let phat = series.iter().sum::<f64>() / n_windows;
            let lrv = lrv_estimate(&series, None)?;
            let z = if lrv.sigma2_hat > 0.0 {
                n_windows.sqrt() * (phat - p_true) / lrv.sigma2_hat.sqrt()
            } else {
                f64::NAN
            };
            w.write_record([
                rep.to_string(),
                phat.to_string(),
                lrv.sigma2_hat.to_string(),
                z.to_string(),
            ])?;
        }
        w.flush()?;
        return Ok(());
    }

    // separation
    let input = args
        .input
        .as_ref()
        .ok_or_else(|| anyhow!("--separation requires --input"))?;
    let records = read_trajectory_file(input)?;
    let meta = format!(
        "cmd=diagnose-separation seed={seed} input={} reference={} tolerance={}",
        input.display(),
        args.sep_reference,
        args.tolerance
    );
    let file = create_csv_output(&args.out, &meta)?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["id", "n_pairs_tied", "min_depth_gap", "tolerance"])?;
    for record in &records {
        let reference = match args.sep_reference.as_str() {
            "self" => record.trajectory.self_reference(),
            "disc" => ReferenceDistribution::Disc,
            spec if spec.starts_with("gaussian:") => parse_analytic_reference(spec)?,
            path => ReferenceDistribution::Empirical(io::read_point_set(File::open(path)?)?),
        };
        let depths = depth_series(record.trajectory.points(), &reference)?;
        let report = check_separation(&depths, args.tolerance)?;
        w.write_record([
            record.trajectory.id.clone(),
            report.n_pairs_tied.to_string(),
            report.min_depth_gap.to_string(),
            report.tolerance.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let threads = cli.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool already initialised")?;
    }
    let seed = parse_seed(&cli.seed)?;
    let seed_was_explicit = cli.seed != "1000003";
    debug_assert_eq!(DEFAULT_SEED, 1_000_003);

    match &cli.command {
        Command::Depth(args) => cmd_depth(args, seed),
        Command::Patterns(args) => cmd_patterns(args, seed),
        Command::Simulate(args) => cmd_simulate(args, seed, seed_was_explicit),
        Command::Scan(args) => cmd_scan(args, seed, seed_was_explicit),
        Command::Diagnose(args) => cmd_diagnose(args, seed),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(&cli) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
