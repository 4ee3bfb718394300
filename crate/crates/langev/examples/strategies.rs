//! The four teacher-selection strategies side by side.
//!
//! The Base Model draws teachers fitness-proportionally from the whole
//! population. Models A/B/C restrict the draw to an imitation set of R
//! agents around the parent: language-closest, ring-closest, or uniformly
//! random. Restriction to correlated candidates (A and B) is what breaks the
//! global language apart.
//!
//! ```bash
//! cargo run --release -p langev --example strategies
//! ```

use langev::{random_baseline, run_sweep, ClusterOptions, ModelParams, Strategy, SweepSpec};

fn main() {
    let r = 0.1;
    let spec = SweepSpec {
        models: Strategy::ALL.to_vec(),
        n_values: vec![60],
        r_grid: vec![r],
        realizations: 3,
        base_seed: 11,
        base: ModelParams {
            generations: 120,
            ..ModelParams::default()
        },
        cluster: ClusterOptions::default(),
    };
    println!(
        "=== N = 60, r = {r}, {} generations, {} realizations per strategy ===\n",
        spec.base.generations, spec.realizations
    );

    let (summary, _) = run_sweep(&spec).unwrap();
    let floor = random_baseline(spec.base.m);

    println!("strategy   mean W(P)   mean W*   mean K*");
    for row in &summary.rows {
        println!(
            "{:<8}   {:>9.4}   {:>7.4}   {:>7.2}",
            row.strategy.name(),
            row.mean_w,
            row.mean_w_star,
            row.mean_k_star
        );
    }
    println!("\nfloor 1/M = {floor:.4}");
    println!(
        "\nThe Base Model and Model C sustain one shared language; Models A \
         and B split into subcommunities at this imitation-set size."
    );
}
