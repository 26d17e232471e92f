//! Implementations behind the subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use num_bigint::BigUint;
use serde::Serialize;
use spinlb_core::{
    basis_size_formula, check_dependencies, constraint_set, enumerate_basis, run_verify,
    sandwich_check, trace_inner, variational_bound, ClusterModel, DependencyReport, Monomial,
    OptimizerConfig, OptimizerDiagnostics, Sector, VariationalState, VerifyLevel,
};

use crate::artifacts::{now_stamp, RunManifest, TensorCache, Timestamps};

/// Largest cluster size the bound pipeline accepts; structure tensors and
/// dense Anderson spectra beyond this are impractical on a desktop.
const MAX_BOUND_SIZE: usize = 8;

/// Largest cluster size for the formula column of the counting table.
const MAX_COUNT_SIZE: usize = 60;

/// Largest cluster size whose basis is enumerated for cross-checking.
const MAX_ENUM_SIZE: usize = 12;

fn usage(message: &str) -> anyhow::Result<u8> {
    eprintln!("usage error: {message}");
    Ok(2)
}

/// Formats with 5 significant digits for the text tables.
fn sig5(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.4}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (4 - magnitude).clamp(0, 12) as usize;
    format!("{x:.decimals$}")
}

fn write_json<T: Serialize>(path: &Path, doc: &T) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(doc).context("serializing result document")?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn print_aligned(rows: &[Vec<String>]) {
    let columns = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{cell:<width$}", width = widths[i]));
        }
        println!("{}", line.trim_end());
    }
}

pub fn table1(n_max: usize) -> anyhow::Result<u8> {
    if !(2..=MAX_COUNT_SIZE).contains(&n_max) {
        return usage(&format!("--n-max must lie in 2..={MAX_COUNT_SIZE}"));
    }
    let mut rows = vec![vec![
        "N".to_string(),
        "invariant count".to_string(),
        "enumerated".to_string(),
        "4^N".to_string(),
    ]];
    let mut mismatch = None;
    for n in 2..=n_max {
        let formula = basis_size_formula(n) - 1u32;
        let full_space = BigUint::from(4u32).pow(n as u32);
        let enumerated = if n <= MAX_ENUM_SIZE {
            let count = enumerate_basis(n, Sector::ScalarOnly)
                .with_context(|| format!("enumerating the basis for n={n}"))?
                .len()
                - 1;
            if BigUint::from(count) != formula {
                mismatch = Some((n, count, formula.clone()));
            }
            count.to_string()
        } else {
            "-".to_string()
        };
        rows.push(vec![
            n.to_string(),
            formula.to_string(),
            enumerated,
            full_space.to_string(),
        ]);
    }
    print_aligned(&rows);
    if let Some((n, count, formula)) = mismatch {
        eprintln!("count mismatch at n={n}: enumerated {count}, formula {formula}");
        return Ok(1);
    }
    Ok(0)
}

#[derive(Serialize)]
struct Table2Row {
    cluster_size: usize,
    anderson_per_spin: f64,
    variational_per_spin: f64,
    bethe_reference: f64,
    optimizer_restarts_used: usize,
    best_constraint_residual: f64,
    feasible: bool,
    sandwich_ok: bool,
    diagnostics: OptimizerDiagnostics,
    state: VariationalState,
}

#[derive(Serialize)]
struct Table2Doc {
    manifest: RunManifest,
    rows: Vec<Table2Row>,
}

pub fn table2(
    sizes: &[usize],
    config_path: Option<&Path>,
    out: Option<&Path>,
    seed: Option<u64>,
    restarts: Option<usize>,
    cache_dir: &Path,
) -> anyhow::Result<u8> {
    if sizes.is_empty() {
        return usage("--sizes needs at least one cluster size");
    }
    if let Some(&bad) = sizes.iter().find(|&&n| !(2..=MAX_BOUND_SIZE).contains(&n)) {
        return usage(&format!(
            "cluster size {bad} is outside the supported range 2..={MAX_BOUND_SIZE}"
        ));
    }
    let mut config = match config_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()));
            let text = match text {
                Ok(t) => t,
                Err(e) => return usage(&format!("{e:#}")),
            };
            match serde_json::from_str::<OptimizerConfig>(&text) {
                Ok(c) => c,
                Err(e) => return usage(&format!("config {}: {e}", path.display())),
            }
        }
        None => OptimizerConfig::default(),
    };
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(r) = restarts {
        config.restarts = r;
    }
    if let Err(e) = config.validate() {
        return usage(&e.to_string());
    }

    let started = now_stamp();
    let clock = Instant::now();
    let mut cache = TensorCache::new(cache_dir.to_path_buf());
    let mut stage_wall = BTreeMap::new();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &n in sizes {
        let stage = Instant::now();
        log::info!("computing bounds for cluster size {n}");
        let tensor = cache.load_or_build(n)?;
        let model = ClusterModel::chain(n)?;
        let constraints = constraint_set(n, tensor.basis())?;
        let report = variational_bound(&model, &tensor, &constraints, &config)?;
        let sandwich_ok = sandwich_check(&report);
        if !report.feasible || !sandwich_ok {
            all_ok = false;
        }
        stage_wall.insert(format!("size_{n}"), stage.elapsed().as_secs_f64());
        rows.push(Table2Row {
            cluster_size: report.cluster_size,
            anderson_per_spin: report.anderson_per_spin,
            variational_per_spin: report.variational_per_spin,
            bethe_reference: report.bethe_reference,
            optimizer_restarts_used: report.optimizer_restarts_used,
            best_constraint_residual: report.best_constraint_residual,
            feasible: report.feasible,
            sandwich_ok,
            diagnostics: report.diagnostics,
            state: report.state,
        });
    }

    let mut text_rows = vec![vec![
        "cluster size".to_string(),
        "Anderson bound".to_string(),
        "variational bound".to_string(),
    ]];
    for row in &rows {
        let variational = if row.feasible {
            let mut cell = sig5(row.variational_per_spin);
            if !row.sandwich_ok {
                cell.push_str(" (sandwich violated)");
            }
            cell
        } else {
            "FAILED".to_string()
        };
        text_rows.push(vec![
            row.cluster_size.to_string(),
            sig5(row.anderson_per_spin),
            variational,
        ]);
    }
    text_rows.push(vec![
        "Bethe reference".to_string(),
        String::new(),
        sig5(spinlb_core::BETHE_REFERENCE),
    ]);
    print_aligned(&text_rows);

    if let Some(path) = out {
        let timestamps = Timestamps {
            started,
            finished: now_stamp(),
            wall_seconds: clock.elapsed().as_secs_f64(),
            stage_wall_seconds: stage_wall,
        };
        let manifest = RunManifest::new(
            config.seed,
            serde_json::to_value(&config).context("serializing config snapshot")?,
            cache.used_paths(),
            timestamps,
        );
        write_json(path, &Table2Doc { manifest, rows })?;
    }
    Ok(if all_ok { 0 } else { 1 })
}

pub fn verify(level: VerifyLevel) -> anyhow::Result<u8> {
    let results = run_verify(level);
    let mut failed = 0;
    for r in &results {
        println!(
            "{} {} ({})",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} checks, {failed} failed", results.len());
    Ok(if failed == 0 { 0 } else { 1 })
}

#[derive(Serialize)]
struct GramDoc {
    manifest: RunManifest,
    n: usize,
    members: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

pub fn gram(n: usize, out: Option<&Path>, seed: Option<u64>) -> anyhow::Result<u8> {
    if !(2..=10).contains(&n) || !n.is_multiple_of(2) {
        return usage(
            "--n must be an even cluster size in 2..=10 so pair products cover every site",
        );
    }
    let started = now_stamp();
    let clock = Instant::now();
    let members: Vec<Monomial> = enumerate_basis(n, Sector::ScalarOnly)
        .with_context(|| format!("enumerating the basis for n={n}"))?
        .into_iter()
        .filter(|m| m.pairs().len() * 2 == n)
        .collect();
    let norm = (1u64 << n) as f64;
    let matrix: Vec<Vec<f64>> = members
        .iter()
        .map(|x| {
            members
                .iter()
                .map(|y| trace_inner(x, y, n) / norm)
                .collect()
        })
        .collect();

    let mut text_rows: Vec<Vec<String>> = Vec::new();
    for (member, row) in members.iter().zip(&matrix) {
        let mut cells = vec![member.to_string()];
        cells.extend(row.iter().map(|&v| {
            if (v - v.round()).abs() < 1e-9 {
                format!("{}", v.round() as i64)
            } else {
                sig5(v)
            }
        }));
        text_rows.push(cells);
    }
    print_aligned(&text_rows);

    if let Some(path) = out {
        let timestamps = Timestamps {
            started,
            finished: now_stamp(),
            wall_seconds: clock.elapsed().as_secs_f64(),
            stage_wall_seconds: BTreeMap::new(),
        };
        let manifest = RunManifest::new(
            seed.unwrap_or_else(|| OptimizerConfig::default().seed),
            serde_json::Value::Null,
            Vec::new(),
            timestamps,
        );
        let doc = GramDoc {
            manifest,
            n,
            members: members.iter().map(|m| m.to_string()).collect(),
            matrix,
        };
        write_json(path, &doc)?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct DepsDoc {
    manifest: RunManifest,
    report: DependencyReport,
}

pub fn deps(n: usize, out: Option<&Path>, seed: Option<u64>) -> anyhow::Result<u8> {
    if !(2..=MAX_BOUND_SIZE).contains(&n) {
        return usage(&format!("--n must lie in 2..={MAX_BOUND_SIZE}"));
    }
    let started = now_stamp();
    let clock = Instant::now();
    let report = check_dependencies(n).with_context(|| format!("dependency check for n={n}"))?;
    let ok = report.verified && !report.ill_conditioned;
    println!(
        "n={} set size {} gram rank {} predicted rank {}{}",
        report.n,
        report.set_size,
        report.gram_rank,
        report.predicted_rank,
        if report.ill_conditioned {
            " (ill-conditioned)"
        } else {
            ""
        }
    );
    println!("{}", if ok { "PASS" } else { "FAIL" });

    if let Some(path) = out {
        let timestamps = Timestamps {
            started,
            finished: now_stamp(),
            wall_seconds: clock.elapsed().as_secs_f64(),
            stage_wall_seconds: BTreeMap::new(),
        };
        let manifest = RunManifest::new(
            seed.unwrap_or_else(|| OptimizerConfig::default().seed),
            serde_json::Value::Null,
            Vec::new(),
            timestamps,
        );
        write_json(path, &DepsDoc { manifest, report })?;
    }
    Ok(if ok { 0 } else { 1 })
}
