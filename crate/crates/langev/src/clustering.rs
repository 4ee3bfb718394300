//! Language-community detection on a comprehension cache.
//!
//! Standard k-means needs coordinate means, which agents do not have. The
//! adapted algorithm works directly on mutual comprehension: every pass
//! simultaneously reassigns each agent to the cluster whose members it
//! comprehends best on average, until a pass changes nothing. Clusters that
//! everyone abandons stay empty, so the number of communities that actually
//! emerge can be smaller than the requested K. Scanning cluster counts and
//! keeping the best average within-community comprehension yields the
//! optimum community count K* and its value W*. A brute-force enumeration
//! over all set partitions serves as the test oracle at small N.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::language::{within_community_comprehension, ComprehensionCache};
use crate::seed;

/// A division of agent indices into K disjoint nonempty clusters.
///
/// Canonical form: each cluster sorted ascending, clusters ordered by their
/// smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    clusters: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates and canonicalizes a partition of `0..n`.
    pub fn new(mut clusters: Vec<Vec<usize>>, n: usize) -> Self {
        assert!(!clusters.is_empty(), "partition needs at least one cluster");
        let mut seen = vec![false; n];
        let mut covered = 0usize;
        for cluster in &mut clusters {
            assert!(!cluster.is_empty(), "clusters must be nonempty");
            cluster.sort_unstable();
            for &i in cluster.iter() {
                assert!(i < n, "agent index {i} out of range");
                assert!(!seen[i], "agent {i} appears in two clusters");
                seen[i] = true;
                covered += 1;
            }
        }
        assert_eq!(covered, n, "partition must cover every agent");
        clusters.sort_by_key(|c| c[0]);
        Partition { clusters }
    }

    /// Builds a partition from cluster labels, dropping labels nobody holds.
    fn from_assignments(assignments: &[usize], k: usize) -> Self {
        let mut clusters = vec![Vec::new(); k];
        for (agent, &c) in assignments.iter().enumerate() {
            clusters[c].push(agent);
        }
        clusters.retain(|c| !c.is_empty());
        Partition::new(clusters, assignments.len())
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }
}

/// Outcome of one k-means run at a fixed cluster count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusteringResult {
    pub partition: Partition,
    /// Average within-community comprehension W(P_K).
    pub w_avg: f64,
    /// Average inter-community comprehension I(P_K); undefined for K = 1.
    pub i_avg: Option<f64>,
    /// Sweeps over the agents executed before stopping.
    pub passes: usize,
    pub converged: bool,
}

/// Outcome of the optimum-K scan.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimumResult {
    /// Number of communities in the winning partition. Can fall below the
    /// scanned cluster count when clusters empty out during a run.
    pub k_star: usize,
    /// W* of the winning partition.
    pub w_star: f64,
    /// I* of the winning partition; undefined when `k_star` is 1.
    pub i_star: Option<f64>,
    pub partition: Partition,
    /// Best W(P_K) per scanned K, ascending in K.
    pub scan: Vec<(usize, f64)>,
}

/// Options for a k-means run.
#[derive(Clone, Copy, Debug)]
pub struct KmeansOptions {
    /// Pass limit; monotone convergence is not guaranteed, so runs are capped.
    pub max_passes: usize,
    /// Count the agent's own self comprehension when scoring its current
    /// cluster, as the membership average literally reads. On by default:
    /// the self term is what keeps synchronized passes from oscillating
    /// (without it, symmetric states make the other cluster always look
    /// better and whole groups swap forever). The cost is that a lone agent
    /// scores its own cluster F(i,i) and can sit in a singleton community.
    pub include_self: bool,
}

impl Default for KmeansOptions {
    fn default() -> Self {
        KmeansOptions {
            max_passes: 100,
            include_self: true,
        }
    }
}

/// (1/K) sum of within-community comprehensions; singleton clusters score 0.
pub fn avg_within(partition: &Partition, cache: &ComprehensionCache) -> f64 {
    let total: f64 = partition
        .clusters()
        .iter()
        .map(|c| within_community_comprehension(c, cache))
        .sum();
    total / partition.k() as f64
}

/// Mean mutual comprehension across two disjoint clusters; equals the
/// symmetrized directed cluster-to-cluster means because F already averages
/// both directions.
pub fn inter_community(a: &[usize], b: &[usize], cache: &ComprehensionCache) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "clusters must be nonempty");
    debug_assert!(
        a.iter().all(|i| !b.contains(i)),
        "clusters must be disjoint"
    );
    let mut sum = 0.0;
    for &i in a {
        for &j in b {
            sum += cache.mutual(i, j);
        }
    }
    sum / (a.len() * b.len()) as f64
}

/// Mean inter-community comprehension over unordered cluster pairs.
pub fn avg_inter(partition: &Partition, cache: &ComprehensionCache) -> f64 {
    let k = partition.k();
    assert!(k >= 2, "inter-community comprehension requires K >= 2");
    let clusters = partition.clusters();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for a in 0..k {
        for b in (a + 1)..k {
            sum += inter_community(&clusters[a], &clusters[b], cache);
            pairs += 1;
        }
    }
    sum / pairs as f64
}

fn result_for(assignments: &[usize], cache: &ComprehensionCache) -> (Partition, f64) {
    let k = assignments.iter().max().map_or(1, |&c| c + 1);
    let partition = Partition::from_assignments(assignments, k);
    let w = avg_within(&partition, cache);
    (partition, w)
}

/// Adapted k-means: starts from a random assignment over `k` clusters, then
/// repeats synchronized passes in which every agent is reassigned to the
/// cluster whose previous-pass members it comprehends best on average (self
/// term excluded by default). A cluster everyone abandons stays empty, so
/// fewer than `k` communities can emerge; the returned partition carries the
/// nonempty clusters. Stops when a pass changes nothing, or after
/// `max_passes` (synchronized updates can cycle).
pub fn kmeans_language(
    cache: &ComprehensionCache,
    k: usize,
    rng: &mut impl Rng,
    options: &KmeansOptions,
) -> ClusteringResult {
    let n = cache.n();
    assert!(k >= 1 && k <= n, "cluster count must be in 1..=N");
    assert!(options.max_passes >= 1);

    // Random initial assignment with every cluster nonempty: a shuffled
    // permutation seeds one agent per cluster, the rest land uniformly.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut assignment = vec![0usize; n];
    for (slot, &agent) in order.iter().enumerate() {
        assignment[agent] = if slot < k { slot } else { rng.random_range(0..k) };
    }

    let mut size = vec![0usize; k];
    let mut member_sum = vec![0.0f64; n * k];
    let mut next = vec![0usize; n];
    let mut passes = 0;
    let mut converged = false;
    while passes < options.max_passes {
        size.fill(0);
        for &c in &assignment {
            size[c] += 1;
        }
        // member_sum[i * k + c] = sum of F(i, j) over current members j of c
        member_sum.fill(0.0);
        for i in 0..n {
            let row = cache.mutual_row(i);
            let sums = &mut member_sum[i * k..(i + 1) * k];
            for (j, &f) in row.iter().enumerate() {
                sums[assignment[j]] += f;
            }
        }
        for i in 0..n {
            let current = assignment[i];
            let self_f = cache.mutual(i, i);
            let mut best = current;
            let mut best_score = f64::NEG_INFINITY;
            for c in 0..k {
                if size[c] == 0 {
                    continue; // an abandoned cluster has no members to score
                }
                let (sum, count) = if c == current && !options.include_self {
                    (member_sum[i * k + c] - self_f, size[c] - 1)
                } else {
                    (member_sum[i * k + c], size[c])
                };
                if count == 0 {
                    continue; // alone in the cluster, nothing to average
                }
                let score = sum / count as f64;
                if score > best_score || (score == best_score && c == current) {
                    best = c;
                    best_score = score;
                }
            }
            next[i] = best;
        }
        passes += 1;
        if next == assignment {
            converged = true;
            break;
        }
        assignment.copy_from_slice(&next);
    }

    let (partition, w_avg) = result_for(&assignment, cache);
    let i_avg = (partition.k() >= 2).then(|| avg_inter(&partition, cache));
    ClusteringResult {
        partition,
        w_avg,
        i_avg,
        passes,
        converged,
    }
}

/// Scans K over `k_min..=k_max` with `restarts` seeded restarts per K and
/// keeps the partition with the best within-community comprehension, ties
/// going to the smaller scanned K. K* is the winning partition's community
/// count.
///
/// Restart `r` at count `k` uses the substream `(seed, CLUSTER, k, r)`, so
/// cells may run in any order or in parallel without changing the result.
pub fn find_optimum(
    cache: &ComprehensionCache,
    k_min: usize,
    k_max: usize,
    restarts: usize,
    options: &KmeansOptions,
    seed: u64,
) -> OptimumResult {
    assert!(
        k_min >= 1 && k_min <= k_max && k_max <= cache.n(),
        "scan range must satisfy 1 <= k_min <= k_max <= N"
    );
    assert!(restarts >= 1);

    let mut scan = Vec::with_capacity(k_max - k_min + 1);
    let mut best: Option<ClusteringResult> = None;
    for k in k_min..=k_max {
        let mut best_for_k: Option<ClusteringResult> = None;
        for restart in 0..restarts {
            let mut rng = seed::cluster_rng(seed, k, restart);
            let result = kmeans_language(cache, k, &mut rng, options);
            if best_for_k
                .as_ref()
                .is_none_or(|cur| result.w_avg > cur.w_avg)
            {
                best_for_k = Some(result);
            }
        }
        let best_for_k = best_for_k.expect("restarts >= 1");
        scan.push((k, best_for_k.w_avg));
        if best.as_ref().is_none_or(|cur| best_for_k.w_avg > cur.w_avg) {
            best = Some(best_for_k);
        }
    }
    let result = best.expect("scan range is nonempty");
    OptimumResult {
        k_star: result.partition.k(),
        w_star: result.w_avg,
        i_star: result.i_avg,
        partition: result.partition,
        scan,
    }
}

/// Exhaustive oracle: the partition of `0..n` into exactly `k` nonempty
/// blocks maximizing [`avg_within`], found by enumerating all of them.
/// Restricted to N <= 12.
pub fn brute_force_best(cache: &ComprehensionCache, k: usize) -> ClusteringResult {
    let n = cache.n();
    assert!(n <= 12, "exhaustive enumeration is limited to N <= 12");
    assert!(k >= 1 && k <= n, "cluster count must be in 1..=N");

    fn recurse(
        next: usize,
        n: usize,
        k: usize,
        blocks: &mut Vec<Vec<usize>>,
        cache: &ComprehensionCache,
        best: &mut Option<(f64, Vec<Vec<usize>>)>,
    ) {
        if blocks.len() + (n - next) < k {
            return; // cannot reach k blocks any more
        }
        if next == n {
            if blocks.len() == k {
                let total: f64 = blocks
                    .iter()
                    .map(|b| within_community_comprehension(b, cache))
                    .sum();
                let w = total / k as f64;
                if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
                    *best = Some((w, blocks.clone()));
                }
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(next);
            recurse(next + 1, n, k, blocks, cache, best);
            blocks[b].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![next]);
            recurse(next + 1, n, k, blocks, cache, best);
            blocks.pop();
        }
    }

    let mut best = None;
    recurse(0, n, k, &mut Vec::new(), cache, &mut best);
    let (w_avg, blocks) = best.expect("at least one partition exists for k <= n");
    let partition = Partition::new(blocks, n);
    let i_avg = (k >= 2).then(|| avg_inter(&partition, cache));
    ClusteringResult {
        partition,
        w_avg,
        i_avg,
        passes: 0,
        converged: true,
    }
}
