//! Uniform codes and the 1/M comprehension floor.
//!
//! A population whose association matrices are all-constant encodes every
//! meaning uniformly over signals and decodes every signal uniformly over
//! meanings. Any two such agents understand each other with probability
//! exactly 1/M, which is the level a population must beat before its signals
//! deserve to be called a language.
//!
//! ```bash
//! cargo run --release -p langev --example baseline
//! ```

use langev::{
    init_population, overall_comprehension, random_baseline, Agent, AssociationMatrix,
    ComprehensionCache, ModelParams, Strategy,
};

fn main() {
    let m = 8;
    let s = 15;
    let n = 20;

    println!("=== The 1/M comprehension floor (M = {m}, S = {s}) ===\n");

    let agents: Vec<Agent> = (0..n)
        .map(|id| Agent::new(id, id, AssociationMatrix::constant(m, s, 1.0)).unwrap())
        .collect();
    let cache = ComprehensionCache::build(&agents);
    let w = overall_comprehension(&cache);
    println!("{n} agents with fully uniform codes:");
    println!("  W(P)      = {w:.12}");
    println!("  1/M       = {:.12}", random_baseline(m));
    println!("  deviation = {:.3e}\n", (w - random_baseline(m)).abs());

    // Freshly initialized agents draw Q random signals per meaning, so their
    // codes are random but not uniform; W(P) lands near the floor.
    let mut total = 0.0;
    let seeds = 20;
    for seed in 0..seeds {
        let params = ModelParams {
            n,
            m,
            s,
            strategy: Strategy::ModelC,
            generations: 0,
            seed,
            ..ModelParams::default()
        };
        total += init_population(&params).unwrap().overall_comprehension();
    }
    println!("random generation-0 populations ({seeds} seeds):");
    println!("  mean W(P) = {:.4}  (floor = {:.4})", total / seeds as f64, random_baseline(m));
    println!("\nAnything evolution achieves must be judged against this floor.");
}
