//! Structural descriptors of a pruned dependency tree.

mod mla;

pub use mla::{
    min_arrangement_of_edges, min_arrangement_subset_dp, min_linear_arrangement, SUBSET_DP_MAX_NODES,
};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::DependencyTree;
use crate::Real;

/// Per-sentence descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeMetrics<T> {
    pub n: usize,
    pub mhd: T,
    pub d_obs: usize,
    pub d_min: usize,
    pub d_rand: T,
    /// Undefined below three nodes.
    pub omega: Option<T>,
    pub sub_unevenness: T,
    pub b2: T,
}

impl<T: Real> TreeMetrics<T> {
    /// All descriptors, with B2 in bits.
    pub fn compute(tree: &DependencyTree) -> Self {
        Self::compute_with_base(tree, T::lit(2.0))
    }

    pub fn compute_with_base(tree: &DependencyTree, b2_base: T) -> Self {
        let n = tree.len();
        let d_obs = total_dependency_length(tree);
        let d_min = min_linear_arrangement(tree);
        Self {
            n,
            mhd: mean_hierarchical_distance(tree),
            d_obs,
            d_min,
            d_rand: random_baseline(n),
            omega: omega_from_lengths(n, d_obs, d_min),
            sub_unevenness: subtree_unevenness(tree),
            b2: b2_index(tree, b2_base),
        }
    }
}

/// Mean root distance of the non-root nodes; 0 for a single node.
pub fn mean_hierarchical_distance<T: Real>(tree: &DependencyTree) -> T {
    let n = tree.len();
    if n < 2 {
        return T::zero();
    }
    let total: usize = tree.depths().iter().sum();
    T::from_count(total) / T::from_count(n - 1)
}

/// Sum of `|head - dependent|` over all edges in the sentence order.
pub fn total_dependency_length(tree: &DependencyTree) -> usize {
    tree.edges().iter().map(|&(h, d)| h.abs_diff(d)).sum()
}

/// Expected total length under a uniformly random linearization: `(n² - 1) / 3`.
pub fn random_baseline<T: Real>(n: usize) -> T {
    if n == 0 {
        return T::zero();
    }
    T::from_count(n * n - 1) / T::lit(3.0)
}

/// `(d_rand - d_obs) / (d_rand - d_min)`, or `None` when `n < 3`.
pub fn omega<T: Real>(tree: &DependencyTree) -> Option<T> {
    omega_from_lengths(
        tree.len(),
        total_dependency_length(tree),
        min_linear_arrangement(tree),
    )
}

pub fn omega_from_lengths<T: Real>(n: usize, d_obs: usize, d_min: usize) -> Option<T> {
    if n < 3 {
        return None;
    }
    let d_rand = random_baseline::<T>(n);
    Some((d_rand - T::from_count(d_obs)) / (d_rand - T::from_count(d_min)))
}

/// Entropy (bits) of the distribution `p(v) = s(v) / Σ s(u)` over subtree sizes.
pub fn subtree_unevenness<T: Real>(tree: &DependencyTree) -> T {
    let sizes = tree.subtree_sizes();
    let total = T::from_count(sizes.iter().sum());
    entropy(sizes.iter().map(|&s| T::from_count(s) / total), T::lit(2.0))
}

/// Entropy, in the given log base, of the probabilities of reaching each
/// leaf by a walk from the root that picks a child uniformly at every step.
pub fn b2_index<T: Real>(tree: &DependencyTree, base: T) -> T {
    let children = tree.children();
    let mut reach = vec![T::zero(); tree.len()];
    reach[tree.root() - 1] = T::one();
    let mut leaves = Vec::new();
    for v in tree.bfs_order() {
        let ch = &children[v];
        if ch.is_empty() {
            leaves.push(reach[v]);
            continue;
        }
        let share = reach[v] / T::from_count(ch.len());
        for &c in ch {
            reach[c] = share;
        }
    }
    entropy(leaves.into_iter(), base)
}

/// Leaf-reaching probabilities, indexed by 0-based node (0 for internal nodes).
pub fn leaf_probabilities<T: Real>(tree: &DependencyTree) -> Vec<T> {
    let children = tree.children();
    let mut reach = vec![T::zero(); tree.len()];
    reach[tree.root() - 1] = T::one();
    for v in tree.bfs_order() {
        let ch = &children[v];
        if ch.is_empty() {
            continue;
        }
        let share = reach[v] / T::from_count(ch.len());
        for &c in ch {
            reach[c] = share;
        }
        reach[v] = T::zero();
    }
    reach
}

fn entropy<T: Real>(probs: impl Iterator<Item = T>, base: T) -> T {
    let ln_base = base.ln();
    let h: T = probs
        .filter(|&p| p > T::zero())
        .map(|p| -p * p.ln())
        .sum();
    h / ln_base
}

/// Mean total dependency length over `samples` uniformly random orderings
/// of the nodes.
pub fn monte_carlo_baseline<R: Rng + ?Sized>(tree: &DependencyTree, samples: usize, rng: &mut R) -> f64 {
    let edges = tree.edges();
    let mut pos: Vec<usize> = (0..tree.len()).collect();
    let mut total = 0u64;
    for _ in 0..samples {
        pos.shuffle(rng);
        total += edges
            .iter()
            .map(|&(a, b)| pos[a].abs_diff(pos[b]) as u64)
            .sum::<u64>();
    }
    total as f64 / samples.max(1) as f64
}

/// Sentence-averaged descriptors of one text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextTreeMetrics<T> {
    pub n_sentences: usize,
    pub mean_mhd: T,
    pub mean_omega: Option<T>,
    pub omega_defined_count: usize,
    pub mean_sub_unevenness: T,
    pub mean_b2: T,
}

/// Arithmetic means across sentences; undefined Ω values are skipped.
/// `None` when there is no sentence.
pub fn average_tree_metrics<T: Real>(trees: &[TreeMetrics<T>]) -> Option<TextTreeMetrics<T>> {
    if trees.is_empty() {
        return None;
    }
    let mean = |f: &dyn Fn(&TreeMetrics<T>) -> T| {
        trees.iter().map(f).sum::<T>() / T::from_count(trees.len())
    };
    let omegas: Vec<T> = trees.iter().filter_map(|t| t.omega).collect();
    let mean_omega =
        (!omegas.is_empty()).then(|| omegas.iter().copied().sum::<T>() / T::from_count(omegas.len()));
    Some(TextTreeMetrics {
        n_sentences: trees.len(),
        mean_mhd: mean(&|t| t.mhd),
        mean_omega,
        omega_defined_count: omegas.len(),
        mean_sub_unevenness: mean(&|t| t.sub_unevenness),
        mean_b2: mean(&|t| t.b2),
    })
}
