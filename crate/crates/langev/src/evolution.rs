//! Generational engine: population initialization, fitness, the four
//! teacher-selection strategies, Q-sample learning, and the generation step.
//!
//! Every generation is replaced wholesale. Each agent has exactly one child,
//! the child inherits its parent's ring site, and the child's language comes
//! from sampling a teacher's encoding Q times per meaning. Strategies differ
//! only in how the teacher is chosen: the Base Model draws fitness
//! proportionally from the whole population, while Models A/B/C first build
//! an imitation set of R candidates around the parent (language-closest,
//! ring-closest, or uniform) and then draw from it weighted by mutual
//! comprehension with the parent.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::{Agent, AssociationMatrix, ComprehensionCache};
use crate::seed;

/// Teacher-selection strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Fitness-proportional selection from the entire population.
    Base,
    /// Imitation set of the R agents closest to the parent language-wise.
    ModelA,
    /// Imitation set of the R agents closest to the parent on the ring.
    ModelB,
    /// Imitation set of R agents drawn uniformly at random.
    ModelC,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Base,
        Strategy::ModelA,
        Strategy::ModelB,
        Strategy::ModelC,
    ];

    pub fn uses_imitation_set(self) -> bool {
        !matches!(self, Strategy::Base)
    }

    /// Stable numeric id used for seed derivation and row ordering.
    pub fn tag(self) -> u64 {
        match self {
            Strategy::Base => 0,
            Strategy::ModelA => 1,
            Strategy::ModelB => 2,
            Strategy::ModelC => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Base => "base",
            Strategy::ModelA => "model_a",
            Strategy::ModelB => "model_b",
            Strategy::ModelC => "model_c",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "base" => Ok(Strategy::Base),
            "model_a" => Ok(Strategy::ModelA),
            "model_b" => Ok(Strategy::ModelB),
            "model_c" => Ok(Strategy::ModelC),
            other => Err(format!(
                "unknown strategy `{other}` (expected base, model_a, model_b, or model_c)"
            )),
        }
    }
}

/// Parameters of one simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Population size N.
    pub n: usize,
    /// Meaning count M.
    pub m: usize,
    /// Signal count S.
    pub s: usize,
    /// Sampling size Q: teacher responses per meaning during learning.
    pub q: usize,
    pub strategy: Strategy,
    /// Relative imitation-set size r = R/N; ignored by the Base Model.
    pub r_rel: f64,
    /// Generations to run after generation 0.
    pub generations: usize,
    /// Whether the parent occupies a slot in its own imitation set.
    pub include_parent: bool,
    /// Whether fitness sums include the self term F(i, i).
    pub fitness_includes_self: bool,
    pub seed: u64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            n: 100,
            m: 8,
            s: 15,
            q: 4,
            strategy: Strategy::ModelA,
            r_rel: 0.1,
            generations: 500,
            include_parent: true,
            fitness_includes_self: true,
            seed: 42,
        }
    }
}

impl ModelParams {
    /// Imitation-set size R = max(1, round(r * N)).
    pub fn imitation_set_size(&self) -> usize {
        ((self.r_rel * self.n as f64).round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::config("n", "population size must be at least 1"));
        }
        if self.m < 1 {
            return Err(Error::config("m", "meaning count must be at least 1"));
        }
        if self.s < 1 {
            return Err(Error::config("s", "signal count must be at least 1"));
        }
        if self.q < 1 {
            return Err(Error::config("q", "sampling size must be at least 1"));
        }
        if self.strategy.uses_imitation_set() {
            if !(self.r_rel > 0.0 && self.r_rel <= 1.0) {
                return Err(Error::config("r", "relative set size must be in (0, 1]"));
            }
            let r = self.imitation_set_size();
            if r > self.n {
                return Err(Error::config("r", "imitation set cannot exceed N"));
            }
            if !self.include_parent && r > self.n - 1 {
                return Err(Error::config(
                    "r",
                    "without the parent, only N - 1 candidates exist",
                ));
            }
        }
        Ok(())
    }
}

/// One generation: N agents plus their pairwise comprehension cache.
#[derive(Clone, Debug)]
pub struct Population {
    generation: usize,
    agents: Vec<Agent>,
    cache: ComprehensionCache,
}

impl Population {
    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn cache(&self) -> &ComprehensionCache {
        &self.cache
    }

    /// W(P) for this generation.
    pub fn overall_comprehension(&self) -> f64 {
        crate::language::overall_comprehension(&self.cache)
    }
}

/// Generation 0: each meaning row is filled with Q uniform signal draws, the
/// same mechanism learning uses, so early generations are dimensionally
/// comparable to later ones.
pub fn init_population(params: &ModelParams) -> Result<Population> {
    params.validate()?;
    let mut agents = Vec::with_capacity(params.n);
    for i in 0..params.n {
        let mut rng = seed::init_agent_rng(params.seed, i);
        let mut assoc = AssociationMatrix::zeros(params.m, params.s);
        for mu in 0..params.m {
            for _ in 0..params.q {
                let x = rng.random_range(0..params.s);
                assoc.add(mu, x, 1.0);
            }
        }
        agents.push(Agent::new(i, i, assoc).expect("q >= 1 guarantees positive rows"));
    }
    let cache = ComprehensionCache::build(&agents);
    Ok(Population {
        generation: 0,
        agents,
        cache,
    })
}

/// f(i) = sum_j F(i, j), with the self term included iff `include_self`.
pub fn fitness(i: usize, cache: &ComprehensionCache, include_self: bool) -> f64 {
    let row_sum: f64 = cache.mutual_row(i).iter().sum();
    if include_self {
        row_sum
    } else {
        row_sum - cache.mutual(i, i)
    }
}

/// Fitness of every agent, in index order.
pub fn fitness_weights(cache: &ComprehensionCache, include_self: bool) -> Vec<f64> {
    (0..cache.n())
        .map(|i| fitness(i, cache, include_self))
        .collect()
}

/// Roulette-wheel draw: index i with probability w_i / sum(w). An all-zero
/// weight vector falls back to a uniform draw rather than crashing.
pub fn roulette(weights: &[f64], rng: &mut impl Rng) -> usize {
    assert!(!weights.is_empty(), "weights must be nonempty");
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return rng.random_range(0..weights.len());
    }
    let mut u = rng.random_range(0.0..total);
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // float round-off pushed u past the last band
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .expect("total > 0 implies a positive weight")
}

/// Base Model teacher: drawn from the whole population proportional to
/// fitness.
pub fn select_base_teacher(
    cache: &ComprehensionCache,
    include_self: bool,
    rng: &mut impl Rng,
) -> usize {
    roulette(&fitness_weights(cache, include_self), rng)
}

/// Builds the imitation set of `parent` for Models A/B/C: exactly R distinct
/// agent indices, sorted.
///
/// With `include_parent` the parent occupies one slot and R - 1 others are
/// chosen; otherwise R non-parent agents are chosen. Ranking ties are broken
/// uniformly at random from `rng`. Model B candidates are visited in
/// relative-offset order around the parent's site, so a relabeling of the
/// ring rotates the chosen set along with it.
pub fn build_imitation_set(
    parent: usize,
    population: &Population,
    params: &ModelParams,
    rng: &mut impl Rng,
) -> Vec<usize> {
    assert!(
        params.strategy.uses_imitation_set(),
        "the Base Model has no imitation set"
    );
    let n = population.agents.len();
    let r = params.imitation_set_size();
    assert!(r <= n, "imitation set cannot exceed the population");
    let want_others = if params.include_parent { r - 1 } else { r };
    assert!(
        want_others <= n - 1,
        "not enough non-parent candidates for R = {r}"
    );

    let mut chosen: Vec<usize> = match params.strategy {
        Strategy::ModelA => {
            // rank by descending mutual comprehension with the parent
            let cache = &population.cache;
            let mut ranked: Vec<(f64, u64, usize)> = (0..n)
                .filter(|&j| j != parent)
                .map(|j| (cache.mutual(parent, j), rng.next_u64(), j))
                .collect();
            ranked.sort_by(|a, b| {
                b.0.partial_cmp(&a.0)
                    .expect("comprehension values are finite")
                    .then(a.1.cmp(&b.1))
            });
            ranked.into_iter().take(want_others).map(|t| t.2).collect()
        }
        Strategy::ModelB => {
            // rank by ascending ring distance to the parent's site
            let mut index_at_site = vec![usize::MAX; n];
            for (idx, agent) in population.agents.iter().enumerate() {
                index_at_site[agent.position()] = idx;
            }
            let site = population.agents[parent].position();
            let mut ranked: Vec<(usize, u64, usize)> = Vec::with_capacity(n - 1);
            for d in 1..=n / 2 {
                ranked.push((d, rng.next_u64(), index_at_site[(site + d) % n]));
                if 2 * d != n {
                    ranked.push((d, rng.next_u64(), index_at_site[(site + n - d) % n]));
                }
            }
            ranked.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
            ranked.into_iter().take(want_others).map(|t| t.2).collect()
        }
        Strategy::ModelC => {
            let picks = rand::seq::index::sample(rng, n - 1, want_others);
            picks
                .into_iter()
                .map(|k| if k < parent { k } else { k + 1 })
                .collect()
        }
        Strategy::Base => unreachable!(),
    };

    if params.include_parent {
        chosen.push(parent);
    }
    chosen.sort_unstable();
    debug_assert_eq!(chosen.len(), r);
    chosen
}

/// Draws the teacher from an imitation set, member l with probability
/// F(parent, l) / sum over the set. All-zero weights fall back to uniform.
pub fn select_teacher(
    parent: usize,
    imitation_set: &[usize],
    cache: &ComprehensionCache,
    rng: &mut impl Rng,
) -> usize {
    assert!(!imitation_set.is_empty(), "imitation set must be nonempty");
    let weights: Vec<f64> = imitation_set
        .iter()
        .map(|&j| cache.mutual(parent, j))
        .collect();
    imitation_set[roulette(&weights, rng)]
}

/// The child samples Q responses per meaning from the teacher's encoding and
/// tallies them into a fresh association matrix; every row sums to Q.
pub fn learn_from_teacher(teacher: &Agent, q: usize, rng: &mut impl Rng) -> AssociationMatrix {
    assert!(q >= 1, "sampling size must be at least 1");
    let (m, s) = (teacher.meanings(), teacher.signals());
    let mut assoc = AssociationMatrix::zeros(m, s);
    for mu in 0..m {
        let row = teacher.encoding().row(mu);
        for _ in 0..q {
            let x = roulette(row, rng);
            assoc.add(mu, x, 1.0);
        }
    }
    assoc
}

/// Produces the next generation: one child per parent, each child taught by
/// a strategy-selected teacher, positions inherited, cache rebuilt.
///
/// Every child draws from its own substream keyed on
/// (seed, generation, child), so trajectories are reproducible and
/// independent of evaluation order.
pub fn step_generation(population: &Population, params: &ModelParams) -> Population {
    let n = population.agents.len();
    let next_generation = population.generation + 1;
    let mut agents = Vec::with_capacity(n);
    for child in 0..n {
        let mut rng = seed::child_rng(params.seed, next_generation, child);
        let teacher = match params.strategy {
            Strategy::Base => {
                select_base_teacher(&population.cache, params.fitness_includes_self, &mut rng)
            }
            _ => {
                let set = build_imitation_set(child, population, params, &mut rng);
                select_teacher(child, &set, &population.cache, &mut rng)
            }
        };
        let assoc = learn_from_teacher(&population.agents[teacher], params.q, &mut rng);
        let position = population.agents[child].position();
        agents.push(Agent::new(child, position, assoc).expect("learned rows sum to Q"));
    }
    let cache = ComprehensionCache::build(&agents);
    Population {
        generation: next_generation,
        agents,
        cache,
    }
}
