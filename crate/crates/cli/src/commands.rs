//! Command implementations.

use crate::manifest::ManifestBuilder;
use crate::{Cli, Command};
use anyhow::{bail, Context, Result};
use netmed_core::lsm::select_dimension;
use netmed_core::mediation::OutcomeModel;
use netmed_core::net::{load_network, ActorData, AdjacencyMatrix, NetworkFormat, SymmetrizeRule};
use netmed_core::rng::{stream, STREAM_ISOMETRY};
use netmed_core::sampler::{
    run_chain, summarize, ChainConfig, ChainDraws, PosteriorSummary, PriorSpec,
};
use netmed_core::simstudy::{
    aggregate_csv, generate_dataset, plot_data_csv, replication_csv, run_grid, SimCondition,
};
use netmed_core::transforms::{invariance_check, Isometry};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub fn dispatch(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Generate {
            dim,
            n,
            med,
            cprime,
            out,
        } => generate(cli, *dim, *n, *med, *cprime, out),
        Command::Fit {
            network,
            actors,
            dim,
            iters,
            burnin,
            thin,
            outcome,
            format,
            symmetrize,
            out,
            draws,
        } => fit(
            cli,
            network,
            actors,
            *dim,
            *iters,
            *burnin,
            *thin,
            outcome,
            format,
            symmetrize.as_deref(),
            out,
            draws.as_deref(),
        ),
        Command::SelectDim {
            network,
            dims,
            iters,
            burnin,
            format,
            symmetrize,
            out,
        } => select_dim(
            cli,
            network,
            dims,
            *iters,
            *burnin,
            format,
            symmetrize.as_deref(),
            out,
        ),
        Command::Simulate {
            grid,
            reps,
            iters,
            burnin,
            paper_scale,
            plot_data,
            out,
        } => simulate(cli, grid, *reps, *iters, *burnin, *paper_scale, *plot_data, out),
        Command::CheckInvariance {
            instances,
            isometries,
            n,
            dim,
            tolerance,
        } => check_invariance(cli, *instances, *isometries, *n, *dim, *tolerance),
        Command::Summarize { draws, level, out } => resummarize(cli, draws, *level, out),
    }
}

fn progress(cli: &Cli, msg: &str) {
    if !cli.quiet {
        eprintln!("netmed: {msg}");
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

fn parse_format(s: &str) -> Result<NetworkFormat> {
    match s {
        "auto" => Ok(NetworkFormat::Auto),
        "matrix" => Ok(NetworkFormat::Matrix),
        "edgelist" => Ok(NetworkFormat::EdgeList),
        other => bail!("unknown network format '{other}' (auto|matrix|edgelist)"),
    }
}

fn load_network_file(
    path: &Path,
    format: &str,
    symmetrize: Option<&str>,
) -> Result<AdjacencyMatrix> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading network file {}", path.display()))?;
    let rule = symmetrize
        .map(|s| s.parse::<SymmetrizeRule>())
        .transpose()?;
    let net = load_network(&text, parse_format(format)?, rule)?;
    Ok(net)
}

fn load_actor_file(path: &Path) -> Result<ActorData> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading actor file {}", path.display()))?;
    Ok(ActorData::from_csv(&text)?)
}

// ---------------------------------------------------------------------------
// generate

fn generate(
    cli: &Cli,
    dim: usize,
    n: usize,
    med: f64,
    cprime: f64,
    out: &Path,
) -> Result<ExitCode> {
    let cond = SimCondition {
        dim,
        n,
        med_level: med,
        c_prime: cprime,
        n_reps: 1,
        base_seed: cli.seed,
    };
    let manifest = ManifestBuilder::new(
        "generate",
        cli.seed,
        json!({"dim": dim, "n": n, "med": med, "c_prime": cprime}),
    );
    let (net, data, truth) = generate_dataset(&cond, cli.seed)?;
    std::fs::create_dir_all(out)?;
    write_text(&out.join("net.csv"), &net.to_matrix_string())?;
    write_text(&out.join("actors.csv"), &data.to_csv())?;
    write_json(
        &out.join("truth.json"),
        &json!({
            "schema_version": 1,
            "condition": {"dim": dim, "n": n, "med": med, "c_prime": cprime},
            "seed": cli.seed,
            "params": truth.params,
            "med": truth.med,
            "total": truth.total,
        }),
    )?;
    manifest.write(out)?;
    progress(
        cli,
        &format!(
            "wrote net.csv, actors.csv, truth.json to {} (density {:.4})",
            out.display(),
            netmed_core::net::density(&net)
        ),
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// fit

/// Fit report: the effect estimates in the layout of the empirical table
/// (estimate with equal-tail bounds), the remaining parameters, and chain
/// diagnostics.
#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    outcome: &'a str,
    dim: usize,
    n_actors: usize,
    chain: serde_json::Value,
    estimates: serde_json::Value,
    parameters: serde_json::Value,
    acceptance: serde_json::Value,
    diagnostics: serde_json::Value,
}

fn summary_to_report<'a>(
    summary: &PosteriorSummary,
    outcome: &'a str,
    dim: usize,
    n_actors: usize,
    cfg: &ChainConfig,
) -> FitReport<'a> {
    FitReport {
        schema_version: 1,
        outcome,
        dim,
        n_actors,
        chain: json!({
            "n_iter": cfg.n_iter,
            "burn_in": cfg.burn_in,
            "thin": cfg.thin,
            "seed": cfg.seed,
            "adapt": cfg.adapt,
        }),
        estimates: json!({
            "c_prime": summary.c_prime,
            "med": summary.med,
            "tot": summary.tot,
        }),
        parameters: json!({
            "alpha": summary.alpha,
            "i1": summary.i1,
            "i2": summary.i2,
            "a": summary.a,
            "b": summary.b,
            "sigma1_sq": summary.sigma1_sq,
            "sigma2_sq": summary.sigma2_sq,
        }),
        acceptance: json!({
            "positions": summary.accept_positions,
            "alpha": summary.accept_alpha,
        }),
        diagnostics: json!({
            "level": summary.level,
            "n_retained": summary.n_retained,
            "rhat_med": summary.rhat_med,
            "warnings": summary.warnings,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn fit(
    cli: &Cli,
    network: &Path,
    actors: &Path,
    dim: usize,
    iters: usize,
    burnin: usize,
    thin: usize,
    outcome: &str,
    format: &str,
    symmetrize: Option<&str>,
    out: &Path,
    draws_out: Option<&Path>,
) -> Result<ExitCode> {
    let mut manifest = ManifestBuilder::new(
        "fit",
        cli.seed,
        json!({
            "dim": dim, "iters": iters, "burnin": burnin, "thin": thin,
            "outcome": outcome, "format": format, "symmetrize": symmetrize,
        }),
    );
    manifest.add_input(network)?;
    manifest.add_input(actors)?;

    let net = load_network_file(network, format, symmetrize)?;
    let data = load_actor_file(actors)?;
    validate_labels(&net, &data)?;
    let outcome_model: OutcomeModel = outcome.parse::<OutcomeModel>()?;
    let cfg = ChainConfig {
        n_iter: iters,
        burn_in: burnin,
        thin,
        seed: cli.seed,
        ..ChainConfig::default()
    };
    progress(
        cli,
        &format!(
            "fitting D={dim} to {} actors ({} iterations, {} burn-in)",
            net.n_actors(),
            iters,
            burnin
        ),
    );
    let (draws, summary) = run_chain(&net, &data, outcome_model, dim, &cfg, &PriorSpec::default())?;

    let report = summary_to_report(&summary, outcome, dim, net.n_actors(), &cfg);
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    write_json(&out.to_path_buf(), &report)?;
    if let Some(draws_path) = draws_out {
        write_text(draws_path, &draws.to_csv(cfg.burn_in, cfg.thin))?;
    }
    let manifest_dir = out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    manifest.write(manifest_dir)?;
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    progress(
        cli,
        &format!(
            "med {:.4} [{:.4}, {:.4}], c' {:.4}, tot {:.4} -> {}",
            summary.med.mean,
            summary.med.ci_lower,
            summary.med.ci_upper,
            summary.c_prime.mean,
            summary.tot.mean,
            out.display()
        ),
    );
    Ok(ExitCode::SUCCESS)
}

/// When the network file carried its own labels, they must agree with the
/// actor file's ids (row order defines the actor order in both).
fn validate_labels(net: &AdjacencyMatrix, data: &ActorData) -> Result<()> {
    if net.n_actors() != data.len() {
        bail!(
            "network has {} actors but the actor file has {} rows",
            net.n_actors(),
            data.len()
        );
    }
    let default: Vec<String> = (1..=net.n_actors()).map(|i| i.to_string()).collect();
    if net.labels() != default.as_slice() && net.labels() != data.ids.as_slice() {
        bail!("network labels and actor ids disagree; row order must match");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// select-dim

#[allow(clippy::too_many_arguments)]
fn select_dim(
    cli: &Cli,
    network: &Path,
    dims: &[usize],
    iters: usize,
    burnin: usize,
    format: &str,
    symmetrize: Option<&str>,
    out: &Path,
) -> Result<ExitCode> {
    if dims.is_empty() {
        bail!("no candidate dimensions given (use --dims 1,2,3)");
    }
    let mut manifest = ManifestBuilder::new(
        "select-dim",
        cli.seed,
        json!({"dims": dims, "iters": iters, "burnin": burnin, "format": format, "symmetrize": symmetrize}),
    );
    manifest.add_input(network)?;
    let net = load_network_file(network, format, symmetrize)?;
    let cfg = ChainConfig {
        n_iter: iters,
        burn_in: burnin,
        seed: cli.seed,
        ..ChainConfig::default()
    };
    progress(
        cli,
        &format!("sweeping dimensions {dims:?} on {} actors", net.n_actors()),
    );
    let selection = select_dimension(&net, dims, &cfg, &PriorSpec::default())?;

    let mut csv = String::from("D,fpr,fnr,correct,bic\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in &selection.table {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.dim,
            opt(row.fpr),
            opt(row.fnr),
            opt(row.correct),
            opt(row.bic)
        ));
        if let Some(err) = &row.error {
            eprintln!("warning: D={} failed: {err}", row.dim);
        }
    }
    std::fs::create_dir_all(out)?;
    write_text(&out.join("select_dim.csv"), &csv)?;
    write_json(
        &out.join("best_d.json"),
        &json!({
            "schema_version": 1,
            "best_d": selection.best_d,
            "candidates": dims,
            "failed": selection.table.iter().filter(|r| r.error.is_some()).count(),
        }),
    )?;
    manifest.write(out)?;
    progress(cli, &format!("best D = {}", selection.best_d));
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Deserialize)]
struct GridCell {
    #[serde(rename = "D")]
    d: usize,
    n: usize,
    med: f64,
    c_prime: f64,
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    cli: &Cli,
    grid_path: &Path,
    reps: usize,
    iters: usize,
    burnin: usize,
    paper_scale: bool,
    plot_data: bool,
    out: &Path,
) -> Result<ExitCode> {
    let (reps, iters, burnin) = if paper_scale {
        (500, 20_000, 6_000)
    } else {
        (reps, iters, burnin)
    };
    let mut manifest = ManifestBuilder::new(
        "simulate",
        cli.seed,
        json!({"reps": reps, "iters": iters, "burnin": burnin, "paper_scale": paper_scale, "plot_data": plot_data}),
    );
    manifest.add_input(grid_path)?;

    let grid_text = std::fs::read_to_string(grid_path)
        .with_context(|| format!("reading grid {}", grid_path.display()))?;
    let cells: Vec<GridCell> = serde_json::from_str(&grid_text)
        .with_context(|| "grid must be a JSON list of {D, n, med, c_prime}")?;
    if cells.is_empty() {
        bail!("empty simulation grid");
    }
    let conditions: Vec<SimCondition> = cells
        .iter()
        .map(|c| SimCondition {
            dim: c.d,
            n: c.n,
            med_level: c.med,
            c_prime: c.c_prime,
            n_reps: reps,
            base_seed: cli.seed,
        })
        .collect();
    for cond in &conditions {
        cond.coefficients()?;
    }

    // Rough wall-clock estimate from the per-iteration cost model.
    let secs: f64 = conditions
        .iter()
        .map(|c| c.n_reps as f64 * iters as f64 * (c.n * c.n) as f64 * 3.0e-8)
        .sum();
    progress(
        cli,
        &format!(
            "{} condition(s) x {} replication(s), {} iterations each; rough sequential estimate {:.0}s",
            conditions.len(),
            reps,
            iters,
            secs
        ),
    );

    let cfg = ChainConfig {
        n_iter: iters,
        burn_in: burnin,
        seed: cli.seed,
        ..ChainConfig::default()
    };
    let reports = run_grid(&conditions, &cfg);

    std::fs::create_dir_all(out)?;
    write_text(&out.join("aggregate.csv"), &aggregate_csv(&reports))?;
    write_json(&out.join("aggregate.json"), &reports)?;
    for report in &reports {
        let name = format!("replications_{}.csv", report.condition.label());
        write_text(&out.join(name), &replication_csv(report))?;
        if let Some(err) = &report.condition_error {
            eprintln!(
                "warning: condition {} failed: {err}",
                report.condition.label()
            );
        }
    }
    if plot_data {
        write_text(&out.join("plot_data.csv"), &plot_data_csv(&reports))?;
    }
    manifest.write(out)?;
    progress(cli, &format!("wrote results to {}", out.display()));
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// check-invariance

fn check_invariance(
    cli: &Cli,
    instances: usize,
    isometries: usize,
    n: usize,
    dim: usize,
    tolerance: f64,
) -> Result<ExitCode> {
    if instances == 0 || isometries == 0 {
        bail!("need at least one instance and one isometry");
    }
    let per_instance = isometries.div_ceil(instances);
    let mut rng = stream(cli.seed, STREAM_ISOMETRY);
    let mut max_med = 0.0f64;
    let mut max_direct = 0.0f64;
    for _ in 0..instances {
        let (config, x, y) = random_structural_instance(n, dim, &mut rng)?;
        for _ in 0..per_instance {
            let iso = Isometry::random(dim, &mut rng);
            let (dm, dc) = invariance_check(&config, &x, &y, &iso)?;
            max_med = max_med.max(dm);
            max_direct = max_direct.max(dc);
        }
    }
    println!(
        "checked {} isometries on {instances} instances (N={n}, D={dim}): max |delta med| = {max_med:.3e}, max |delta direct| = {max_direct:.3e}",
        per_instance * instances
    );
    if max_med > tolerance || max_direct > tolerance {
        eprintln!("error: effect drift exceeds the tolerance {tolerance:.1e}");
        return Ok(ExitCode::from(3));
    }
    progress(cli, "invariance holds");
    Ok(ExitCode::SUCCESS)
}

/// A random mediation-structured instance for the invariance harness.
fn random_structural_instance(
    n: usize,
    dim: usize,
    rng: &mut impl rand::Rng,
) -> Result<(netmed_core::lsm::LatentConfiguration, Vec<f64>, Vec<f64>)> {
    let a: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    let b: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    let c: f64 = StandardNormal.sample(rng);
    let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let mut positions = Vec::with_capacity(n * dim);
    let mut y = Vec::with_capacity(n);
    for &xi in &x {
        let zi: Vec<f64> = (0..dim)
            .map(|k| a[k] * xi + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let mut yi = c * xi + rng.sample::<f64, _>(StandardNormal);
        for k in 0..dim {
            yi += b[k] * zi[k];
        }
        positions.extend(zi);
        y.push(yi);
    }
    Ok((
        netmed_core::lsm::LatentConfiguration::new(n, dim, positions)?,
        x,
        y,
    ))
}

// ---------------------------------------------------------------------------
// summarize

fn resummarize(cli: &Cli, draws_path: &Path, level: f64, out: &Path) -> Result<ExitCode> {
    let mut manifest = ManifestBuilder::new("summarize", cli.seed, json!({"level": level}));
    manifest.add_input(draws_path)?;
    let text = std::fs::read_to_string(draws_path)
        .with_context(|| format!("reading draws {}", draws_path.display()))?;
    let draws = ChainDraws::from_csv(&text)?;
    // The draws file already contains only retained iterations.
    let summary = summarize(&draws, 0, 1, level)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    write_json(&out.to_path_buf(), &summary)?;
    let manifest_dir = out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or_else(|| Path::new("."));
    manifest.write(manifest_dir)?;
    progress(
        cli,
        &format!(
            "med {:.4} [{:.4}, {:.4}] at level {level}",
            summary.med.mean, summary.med.ci_lower, summary.med.ci_upper
        ),
    );
    Ok(ExitCode::SUCCESS)
}
