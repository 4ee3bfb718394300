//! Implementations behind the CLI subcommands. Each writes its outputs under
//! the configured output directory and prints a short summary; outputs are
//! byte-identical for identical configuration and seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::clustering::{find_optimum, KmeansOptions};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiments::{fit_power_law, run_realization, run_sweep};
use crate::language::random_baseline;
use crate::output::{
    read_cache_file, read_sweep_csv, write_fit_csv, write_optimum_json, write_realizations_jsonl,
    write_sweep_csv, FitRow,
};

/// Runs a single realization and writes it as one JSON record to
/// `<out_dir>/realization.jsonl`.
pub fn cmd_run(config: &RunConfig) -> Result<()> {
    let params = config.model_params();
    let result = run_realization(&params, &config.cluster_options())?;
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join("realization.jsonl");
    write_realizations_jsonl(&path, std::slice::from_ref(&result))?;
    println!(
        "{} N={} r={} seed={}: W(P)={:.4} after {} generations (baseline 1/M = {:.4})",
        params.strategy,
        params.n,
        params.r_rel,
        params.seed,
        result.final_w,
        params.generations,
        random_baseline(params.m),
    );
    match result.i_star {
        Some(i_star) => println!(
            "communities: K*={} W*={:.4} I*={:.4}",
            result.k_star, result.w_star, i_star
        ),
        None => println!("communities: K*=1 W*={:.4}", result.w_star),
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// Runs the configured sweep and writes `<out_dir>/sweep.csv` plus
/// `<out_dir>/realizations.jsonl`.
pub fn cmd_sweep(config: &RunConfig) -> Result<()> {
    let (summary, records) = run_sweep(&config.sweep_spec())?;
    fs::create_dir_all(&config.out_dir)?;
    let csv_path = config.out_dir.join("sweep.csv");
    write_sweep_csv(&csv_path, &summary)?;
    let jsonl_path = config.out_dir.join("realizations.jsonl");
    write_realizations_jsonl(&jsonl_path, &records)?;
    println!(
        "{} cells x {} realizations -> {} rows",
        summary.rows.len(),
        config.realizations,
        summary.rows.len()
    );
    println!("wrote {}", csv_path.display());
    println!("wrote {}", jsonl_path.display());
    Ok(())
}

/// Detects the optimum community structure of a stored comprehension matrix
/// and writes it to `<out_dir>/optimum.json`.
pub fn cmd_cluster(cache_path: &Path, config: &RunConfig) -> Result<()> {
    let cache = read_cache_file(cache_path)?;
    let k_max = config.k_max.min(cache.n());
    let k_min = config.k_min.min(k_max);
    let options = KmeansOptions {
        max_passes: config.max_passes,
        include_self: false,
    };
    let optimum = find_optimum(&cache, k_min, k_max, config.restarts, &options, config.seed);
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join("optimum.json");
    write_optimum_json(&path, &optimum)?;
    match optimum.i_star {
        Some(i_star) => println!(
            "N={}: K*={} W*={:.4} I*={:.4}",
            cache.n(),
            optimum.k_star,
            optimum.w_star,
            i_star
        ),
        None => println!(
            "N={}: K*={} W*={:.4}",
            cache.n(),
            optimum.k_star,
            optimum.w_star
        ),
    }
    println!("wrote {}", path.display());
    Ok(())
}

/// Fits the community-count power law per (model, N) group of a sweep table
/// and writes `<out_dir>/fit.csv`. Groups without enough points above the
/// cutoff (the Base Model rows in particular) are skipped.
pub fn cmd_fit(summary_path: &Path, config: &RunConfig) -> Result<()> {
    let summary = read_sweep_csv(summary_path)?;
    let mut groups: BTreeMap<(u64, usize), Vec<(f64, f64)>> = BTreeMap::new();
    let mut strategy_of = BTreeMap::new();
    for row in &summary.rows {
        let key = (row.strategy.tag(), row.n);
        strategy_of.insert(key, row.strategy);
        groups
            .entry(key)
            .or_default()
            .push((row.r_rel, row.mean_k_star));
    }

    let mut rows = Vec::new();
    let mut first_error = None;
    for (key, points) in &groups {
        let strategy = strategy_of[key];
        match fit_power_law(points, config.r_cutoff) {
            Ok(fit) => {
                println!(
                    "{} N={}: gamma={:.4} (r^2={:.4}, {} points, r > {})",
                    strategy, key.1, fit.gamma, fit.r_squared, fit.n_points, fit.r_cutoff
                );
                rows.push(FitRow {
                    strategy,
                    n: key.1,
                    fit,
                });
            }
            Err(err) => {
                println!("{} N={}: skipped ({err})", strategy, key.1);
                if first_error.is_none() {
                    first_error = Some(err);
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(first_error.unwrap_or(Error::TooFewPoints(0)));
    }
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join("fit.csv");
    write_fit_csv(&path, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
