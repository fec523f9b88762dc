//! Exact minimum linear arrangement of free trees.
//!
//! The solver recurses on centroids. For an unanchored tree with centroid
//! `u` and branches `T0 >= T1 >= ...` (by size), an optimal arrangement
//! either places `T0` on one side of the rest, or places the `2q` largest
//! branches alternately left and right of a central block containing `u`
//! (largest outermost, each branch's root facing the centre). With equally
//! many edges leaving `u` on both sides, the position of `u` inside the
//! central block does not affect the cost, so the block is itself an
//! unanchored subproblem. The anchored case (an extra edge from the root to
//! the outside) is handled the same way with `2p + 1` outer branches, the
//! extra one on the side away from the anchor. Every admissible `q` / `p`
//! is evaluated and subproblems are memoized on their node set.

use std::collections::HashMap;

use crate::corpus::DependencyTree;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct NodeSet(Vec<u64>);

impl NodeSet {
    fn empty(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] & (1 << (v % 64)) != 0
    }

    fn remove_all(&mut self, other: &NodeSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

struct Branch {
    size: usize,
    root: usize,
    nodes: NodeSet,
}

struct Solver {
    adj: Vec<Vec<usize>>,
    free_memo: HashMap<NodeSet, usize>,
    anchored_memo: HashMap<(NodeSet, usize), usize>,
}

impl Solver {
    fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        Self {
            adj,
            free_memo: HashMap::new(),
            anchored_memo: HashMap::new(),
        }
    }

    /// Connected components of `set \ {u}`, each hanging from a neighbour of
    /// `u`, by decreasing size (ties: smallest member first).
    fn branches(&self, set: &NodeSet, u: usize) -> Vec<Branch> {
        let n = self.adj.len();
        let mut out = Vec::new();
        for &w in &self.adj[u] {
            if !set.contains(w) {
                continue;
            }
            let mut nodes = NodeSet::empty(n);
            nodes.insert(w);
            let mut stack = vec![(w, u)];
            let mut size = 1;
            while let Some((x, from)) = stack.pop() {
                for &y in &self.adj[x] {
                    if y != from && set.contains(y) {
                        nodes.insert(y);
                        size += 1;
                        stack.push((y, x));
                    }
                }
            }
            out.push(Branch { size, root: w, nodes });
        }
        out.sort_by_key(|b| (std::cmp::Reverse(b.size), b.nodes.first()));
        out
    }

    /// Lowest-numbered node whose removal leaves no component above half the set.
    fn centroid(&self, set: &NodeSet) -> usize {
        let m = set.len();
        let start = set.first().expect("non-empty set");
        let mut order = vec![start];
        let mut parent = HashMap::from([(start, usize::MAX)]);
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &y in &self.adj[x] {
                if set.contains(y) && parent[&x] != y {
                    parent.insert(y, x);
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut size: HashMap<usize, usize> = order.iter().map(|&v| (v, 1)).collect();
        let mut heaviest: HashMap<usize, usize> = order.iter().map(|&v| (v, 0)).collect();
        for &v in order.iter().rev() {
            let p = parent[&v];
            if p != usize::MAX {
                let sv = size[&v];
                *size.get_mut(&p).unwrap() += sv;
                let h = heaviest.get_mut(&p).unwrap();
                *h = (*h).max(sv);
            }
        }
        set.iter()
            .find(|v| heaviest[v].max(m - size[v]) <= m / 2)
            .expect("every tree has a centroid")
    }

    fn free(&mut self, set: &NodeSet) -> usize {
        if set.len() <= 1 {
            return 0;
        }
        if let Some(&c) = self.free_memo.get(set) {
            return c;
        }
        let u = self.centroid(set);
        let branches = self.branches(set, u);
        let inner: Vec<usize> = branches
            .iter()
            .map(|b| self.anchored(&b.nodes, b.root))
            .collect();

        // T0 on one side, the remainder anchored towards it.
        let mut rest = set.clone();
        rest.remove_all(&branches[0].nodes);
        let mut best = inner[0] + self.anchored(&rest, u) + 1;

        for q in 1..=branches.len() / 2 {
            let outer = 2 * q;
            let mut centre = set.clone();
            for b in &branches[..outer] {
                centre.remove_all(&b.nodes);
            }
            let sizes: Vec<usize> = branches[..outer].iter().map(|b| b.size).collect();
            let cost = inner[..outer].iter().sum::<usize>()
                + self.free(&centre)
                + q * centre.len()
                + q
                + nesting_cost(&sizes);
            best = best.min(cost);
        }
        self.free_memo.insert(set.clone(), best);
        best
    }

    /// Cost of arranging `set` when `root` also has an edge leaving the block
    /// on one side; includes the distance from `root` to that block boundary.
    fn anchored(&mut self, set: &NodeSet, root: usize) -> usize {
        if set.len() <= 1 {
            return 0;
        }
        let key = (set.clone(), root);
        if let Some(&c) = self.anchored_memo.get(&key) {
            return c;
        }
        let branches = self.branches(set, root);
        let inner: Vec<usize> = branches
            .iter()
            .map(|b| self.anchored(&b.nodes, b.root))
            .collect();
        let mut best = usize::MAX;
        for p in 0..=(branches.len() - 1) / 2 {
            let outer = 2 * p + 1;
            let mut centre = set.clone();
            for b in &branches[..outer] {
                centre.remove_all(&b.nodes);
            }
            let sizes: Vec<usize> = branches[..outer].iter().map(|b| b.size).collect();
            // Branches on the anchor side are crossed by the anchor edge.
            let anchor_side: usize = sizes.iter().skip(1).step_by(2).sum();
            let cost = inner[..outer].iter().sum::<usize>()
                + self.free(&centre)
                + (p + 1) * centre.len()
                + p
                + nesting_cost(&sizes)
                + anchor_side;
            best = best.min(cost);
        }
        self.anchored_memo.insert(key, best);
        best
    }
}

/// Extra length paid by root edges of outer branches that must cross the
/// branches nested inside them. Branches sorted by decreasing size alternate
/// sides; on each side every branch is crossed by the edges of all larger
/// (outer) branches on that side.
fn nesting_cost(sizes: &[usize]) -> usize {
    let side = |start: usize| -> usize {
        let s: Vec<usize> = sizes.iter().copied().skip(start).step_by(2).collect();
        s.iter().enumerate().map(|(i, &sz)| i * sz).sum()
    };
    side(0) + side(1)
}

/// Minimum, over all orderings of the nodes, of the total dependency length.
/// Exact for any tree size; the linear order and the root are irrelevant.
pub fn min_linear_arrangement(tree: &DependencyTree) -> usize {
    min_arrangement_of_edges(tree.len(), &tree.edges())
}

/// As [`min_linear_arrangement`] for a free tree on nodes `0..n` given by its edges.
pub fn min_arrangement_of_edges(n: usize, edges: &[(usize, usize)]) -> usize {
    assert!(n >= 1, "tree must have at least one node");
    assert_eq!(edges.len(), n - 1, "a tree on {n} nodes has {} edges", n - 1);
    Solver::new(n, edges).free(&NodeSet::full(n))
}

/// Largest tree accepted by [`min_arrangement_subset_dp`].
pub const SUBSET_DP_MAX_NODES: usize = 22;

/// Exact minimum linear arrangement by dynamic programming over prefix sets:
/// the total length equals the sum, over the `n - 1` gaps, of the number of
/// edges crossing the gap. `O(2^n n)`; returns `None` above
/// [`SUBSET_DP_MAX_NODES`].
pub fn min_arrangement_subset_dp(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    if n == 0 || n > SUBSET_DP_MAX_NODES {
        return None;
    }
    let mut adj = vec![0u32; n];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let full = (1u32 << n) - 1;
    let mut cut = vec![0u32; 1 << n];
    let mut best = vec![u32::MAX; 1 << n];
    best[0] = 0;
    for set in 1..=full {
        let low = set.trailing_zeros() as usize;
        let prev = set & !(1 << low);
        cut[set as usize] = cut[prev as usize] + adj[low].count_ones() - 2 * (adj[low] & prev).count_ones();
        let mut m = u32::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            m = m.min(best[(set & !(1 << v)) as usize]);
        }
        best[set as usize] = m + if set == full { 0 } else { cut[set as usize] };
    }
    Some(best[full as usize] as usize)
}
