// temporary measurement harness; deleted before delivery
use langev::{
    fit_power_law, run_sweep, ClusterOptions, ModelParams, Strategy, SweepSpec,
};

fn spec(models: Vec<Strategy>, r_grid: Vec<f64>, generations: usize, realizations: usize) -> SweepSpec {
    SweepSpec {
        models,
        n_values: vec![100],
        r_grid,
        realizations,
        base_seed: 20260809,
        base: ModelParams {
            generations,
            ..ModelParams::default()
        },
        cluster: ClusterOptions::default(),
    }
}

#[test]
#[ignore]
fn timing_one_realization() {
    let start = std::time::Instant::now();
    let s = spec(vec![Strategy::ModelA], vec![0.1], 300, 1);
    let (summary, _) = run_sweep(&s).unwrap();
    eprintln!(
        "300 generations N=100 + clustering took {:.2?}; W={:.4} K*={:.1}",
        start.elapsed(),
        summary.rows[0].mean_w,
        summary.rows[0].mean_k_star
    );
}

#[test]
#[ignore]
fn criterion_5_gamma() {
    let start = std::time::Instant::now();
    let s = spec(
        vec![Strategy::ModelA, Strategy::ModelB],
        vec![0.04, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5],
        300,
        20,
    );
    let (summary, _) = run_sweep(&s).unwrap();
    for model in [Strategy::ModelA, Strategy::ModelB] {
        let points: Vec<(f64, f64)> = summary
            .rows
            .iter()
            .filter(|row| row.strategy == model)
            .map(|row| (row.r_rel, row.mean_k_star))
            .collect();
        eprintln!("{model} K* curve: {points:?}");
        let fit = fit_power_law(&points, 0.03).unwrap();
        eprintln!(
            "{model}: gamma = {:.4} (r^2 = {:.4}, {} points)",
            fit.gamma, fit.r_squared, fit.n_points
        );
    }
    eprintln!("criterion 5 sweep took {:.2?}", start.elapsed());
}

#[test]
#[ignore]
fn gamma_b_spread() {
    for (base_seed, generations) in [
        (1u64, 300usize),
        (2, 300),
        (3, 300),
        (20260809, 500),
    ] {
        let mut s = spec(
            vec![Strategy::ModelB],
            vec![0.04, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5],
            generations,
            20,
        );
        s.base_seed = base_seed;
        let (summary, _) = run_sweep(&s).unwrap();
        let points: Vec<(f64, f64)> = summary
            .rows
            .iter()
            .map(|row| (row.r_rel, row.mean_k_star))
            .collect();
        let fit = fit_power_law(&points, 0.03).unwrap();
        eprintln!(
            "seed {base_seed} gens {generations}: gamma_B = {:.4} (r^2 {:.3}) curve {:?}",
            fit.gamma,
            fit.r_squared,
            points
                .iter()
                .map(|(r, k)| format!("{r}:{k:.1}"))
                .collect::<Vec<_>>()
        );
    }
}

#[test]
#[ignore]
fn criteria_2_3_4() {
    let start = std::time::Instant::now();
    let s = spec(
        vec![Strategy::ModelA, Strategy::ModelB],
        vec![0.02, 0.1],
        200,
        10,
    );
    let (summary, _) = run_sweep(&s).unwrap();
    for row in &summary.rows {
        eprintln!(
            "{} r={:.2}: mean_w={:.4} mean_w_star={:.4} mean_i_star={:?} mean_k_star={:.2}",
            row.strategy, row.r_rel, row.mean_w, row.mean_w_star, row.mean_i_star, row.mean_k_star
        );
    }
    eprintln!("criteria 2+3 sweep took {:.2?}", start.elapsed());

    let start = std::time::Instant::now();
    let s4 = spec(vec![Strategy::ModelA], vec![0.7], 300, 10);
    let (_, records) = run_sweep(&s4).unwrap();
    let ones = records.iter().filter(|r| r.k_star == 1).count();
    eprintln!(
        "criterion 4: K*=1 in {ones}/10 realizations (took {:.2?})",
        start.elapsed()
    );
    let ks: Vec<usize> = records.iter().map(|r| r.k_star).collect();
    eprintln!("k_stars: {ks:?}");
}
