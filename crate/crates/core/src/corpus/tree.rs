use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Sentence, Token};

/// The sentence had no non-punctuation token left after pruning.
#[derive(Debug, Clone, Copy, Error, PartialEq, Eq)]
#[error("sentence {sent_idx} consists only of punctuation")]
pub struct EmptyTree {
    pub sent_idx: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InvalidTree {
    #[error("tree has no nodes")]
    Empty,
    #[error("expected exactly one root, found {0}")]
    RootCount(usize),
    #[error("node {node} has head {head} outside 0..={len}")]
    HeadOutOfRange { node: usize, head: usize, len: usize },
    #[error("node {0} does not reach the root")]
    Cycle(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub surface: String,
    /// 0 for the root, otherwise the 1-based index of the head.
    pub head: usize,
    pub deprel: String,
}

/// A rooted dependency tree over consecutively numbered nodes `1..=n`,
/// numbered in the sentence's linear order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyTree {
    nodes: Vec<TreeNode>,
    root: usize,
}

impl DependencyTree {
    /// Builds and validates a tree from 1-based head indices (0 marks the root).
    pub fn from_heads(heads: &[usize]) -> Result<Self, InvalidTree> {
        let nodes = heads
            .iter()
            .enumerate()
            .map(|(i, &head)| TreeNode {
                surface: format!("w{}", i + 1),
                head,
                deprel: if head == 0 { "root" } else { "dep" }.to_string(),
            })
            .collect();
        Self::from_nodes(nodes)
    }

    pub fn from_nodes(nodes: Vec<TreeNode>) -> Result<Self, InvalidTree> {
        let n = nodes.len();
        if n == 0 {
            return Err(InvalidTree::Empty);
        }
        for (i, node) in nodes.iter().enumerate() {
            if node.head > n || node.head == i + 1 {
                return Err(InvalidTree::HeadOutOfRange {
                    node: i + 1,
                    head: node.head,
                    len: n,
                });
            }
        }
        let roots: Vec<usize> = (1..=n).filter(|&i| nodes[i - 1].head == 0).collect();
        if roots.len() != 1 {
            return Err(InvalidTree::RootCount(roots.len()));
        }
        let tree = Self {
            nodes,
            root: roots[0],
        };
        if let Some(bad) = (1..=n).find(|&i| !tree.reaches_root(i)) {
            return Err(InvalidTree::Cycle(bad));
        }
        Ok(tree)
    }

    fn reaches_root(&self, mut v: usize) -> bool {
        for _ in 0..=self.len() {
            if v == self.root {
                return true;
            }
            v = self.nodes[v - 1].head;
            if v == 0 {
                return false;
            }
        }
        false
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false: a tree has at least its root.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// 1-based index of the root.
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// Head of the 1-based node `v` (0 for the root).
    pub fn head(&self, v: usize) -> usize {
        self.nodes[v - 1].head
    }

    /// 0-based parent array, `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        self.nodes
            .iter()
            .map(|n| n.head.checked_sub(1))
            .collect()
    }

    /// 0-based child lists in increasing linear order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (i, p) in self.parents().into_iter().enumerate() {
            if let Some(p) = p {
                ch[p].push(i);
            }
        }
        ch
    }

    /// Undirected edges as 0-based `(head, dependent)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parents()
            .into_iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (p, i)))
            .collect()
    }

    /// Nodes in breadth-first order from the root (0-based).
    pub fn bfs_order(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.len());
        order.push(self.root - 1);
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&children[order[i]]);
            i += 1;
        }
        order
    }

    /// Edge distance from the root, indexed 0-based.
    pub fn depths(&self) -> Vec<usize> {
        let parents = self.parents();
        let mut depth = vec![0usize; self.len()];
        for v in self.bfs_order() {
            if let Some(p) = parents[v] {
                depth[v] = depth[p] + 1;
            }
        }
        depth
    }

    /// Number of nodes dominated by each node, itself included (0-based).
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let parents = self.parents();
        let mut size = vec![1usize; self.len()];
        for v in self.bfs_order().into_iter().rev() {
            if let Some(p) = parents[v] {
                size[p] += size[v];
            }
        }
        size
    }

    /// Converts the tree back into a sentence, e.g. to feed it through pruning again.
    pub fn to_sentence(&self, sent_idx: usize) -> Sentence {
        let tokens = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| Token::new(n.surface.clone(), i + 1, n.head, n.deprel.clone()))
            .collect();
        Sentence::new(tokens, sent_idx)
    }
}

/// Removes punctuation tokens and returns the reindexed dependency tree.
///
/// Dependents of a removed token are reattached to its nearest
/// non-punctuation ancestor. Root repair: when several nodes end up
/// unattached (the marked root was punctuation), the first of them becomes
/// the root and the others attach to it; when no node is marked root, the
/// first remaining token is promoted. Nodes caught in a head cycle are
/// attached to the root.
pub fn prune_punctuation(sentence: &Sentence) -> Result<DependencyTree, EmptyTree> {
    let tokens = &sentence.tokens;
    let n = tokens.len();
    let mut new_index = vec![0usize; n + 1];
    let mut kept = Vec::new();
    for t in tokens.iter().filter(|t| !t.is_punct) {
        kept.push(t);
        new_index[t.index] = kept.len();
    }
    if kept.is_empty() {
        return Err(EmptyTree {
            sent_idx: sentence.sent_idx,
        });
    }

    // Some(0): attached to the virtual root; None: lost in a punct cycle.
    let mut heads: Vec<Option<usize>> = kept
        .iter()
        .map(|t| {
            let mut h = t.head;
            for _ in 0..=n {
                if h == 0 || h > n {
                    return Some(0);
                }
                if new_index[h] != 0 {
                    return Some(new_index[h]);
                }
                h = tokens[h - 1].head;
            }
            None
        })
        .collect();

    let m = kept.len();
    let mut deprels: Vec<String> = kept.iter().map(|t| t.deprel.clone()).collect();
    let root = match heads.iter().position(|h| *h == Some(0)) {
        Some(r) => r + 1,
        None => 1,
    };
    for (i, h) in heads.iter_mut().enumerate() {
        if i + 1 == root {
            *h = Some(0);
        } else if *h == Some(0) {
            *h = Some(root);
        }
    }
    if deprels[root - 1] != "root" && kept[root - 1].head != 0 {
        deprels[root - 1] = "root".to_string();
    }

    // Break any remaining cycles by hanging the first unreachable node on the root.
    let mut resolved: Vec<usize> = heads.iter().map(|h| h.unwrap_or(usize::MAX)).collect();
    for v in 1..=m {
        let mut cur = v;
        let mut ok = false;
        for _ in 0..=m {
            if cur == root {
                ok = true;
                break;
            }
            let h = resolved[cur - 1];
            if h == 0 || h == usize::MAX {
                break;
            }
            cur = h;
        }
        if !ok {
            resolved[v - 1] = root;
        }
    }

    let nodes = kept
        .iter()
        .zip(resolved)
        .zip(deprels)
        .map(|((t, head), deprel)| TreeNode {
            surface: t.surface.clone(),
            head,
            deprel,
        })
        .collect();
    Ok(DependencyTree { nodes, root })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn sentence(rows: &[(&str, usize, &str)]) -> Sentence {
        let tokens = rows
            .iter()
            .enumerate()
            .map(|(i, (w, h, rel))| Token::new(*w, i + 1, *h, *rel))
            .collect();
        Sentence::new(tokens, 0)
    }

    #[test]
    fn punct_free_sentence_is_fixpoint() {
        let s = fixtures::mother_sentence();
        let tree = prune_punctuation(&s).unwrap();
        assert_eq!(tree.len(), 8);
        assert_eq!(tree.root(), 3);
        let heads: Vec<usize> = (1..=8).map(|v| tree.head(v)).collect();
        assert_eq!(heads, vec![2, 3, 0, 5, 3, 5, 8, 5]);
    }

    #[test]
    fn final_period_is_removed() {
        let mut s = fixtures::mother_sentence();
        s.tokens.push(Token::new(".", 9, 3, "punct"));
        let s = Sentence::new(s.tokens, 0);
        let with_period = prune_punctuation(&s).unwrap();
        let plain = prune_punctuation(&fixtures::mother_sentence()).unwrap();
        assert_eq!(with_period, plain);
    }

    #[test]
    fn punct_dependent_reattached_to_punct_head() {
        // "a , b" where b hangs off the comma, which hangs off a.
        let s = sentence(&[("a", 0, "root"), (",", 1, "punct"), ("b", 2, "conj")]);
        let tree = prune_punctuation(&s).unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(tree.head(2), 1);
        assert_eq!(tree.nodes()[1].surface, "b");
    }

    #[test]
    fn pruned_root_promotes_first_dependent() {
        let s = sentence(&[("x", 2, "dep"), ("!", 0, "punct"), ("y", 2, "dep")]);
        let tree = prune_punctuation(&s).unwrap();
        assert_eq!(tree.root(), 1);
        assert_eq!(tree.head(2), 1);
        assert_eq!(tree.nodes()[0].deprel, "root");
    }

    #[test]
    fn missing_root_promotes_first_token() {
        let s = sentence(&[("x", 2, "dep"), ("y", 1, "dep"), ("z", 2, "dep")]);
        let tree = prune_punctuation(&s).unwrap();
        assert_eq!(tree.root(), 1);
        assert_eq!(tree.head(1), 0);
        assert_eq!(tree.head(2), 1);
        assert_eq!(tree.head(3), 2);
    }

    #[test]
    fn all_punct_is_empty_tree() {
        let s = sentence(&[("!", 0, "punct"), ("?", 1, "punct")]);
        assert_eq!(prune_punctuation(&s), Err(EmptyTree { sent_idx: 0 }));
    }

    #[test]
    fn from_heads_validation() {
        assert!(DependencyTree::from_heads(&[0, 1, 2]).is_ok());
        assert_eq!(DependencyTree::from_heads(&[]), Err(InvalidTree::Empty));
        assert_eq!(DependencyTree::from_heads(&[0, 0]), Err(InvalidTree::RootCount(2)));
        assert!(matches!(
            DependencyTree::from_heads(&[0, 3, 2]),
            Err(InvalidTree::Cycle(_))
        ));
    }

    #[test]
    fn depths_and_sizes_of_worked_tree() {
        let tree = prune_punctuation(&fixtures::mother_sentence()).unwrap();
        assert_eq!(tree.depths(), vec![2, 1, 0, 2, 1, 2, 3, 2]);
        assert_eq!(tree.subtree_sizes(), vec![1, 2, 8, 1, 5, 1, 1, 2]);
    }

    /// Random sentence: random heads (possibly cyclic, possibly rootless) and random punctuation.
    fn arb_sentence() -> impl Strategy<Value = Sentence> {
        (1usize..14).prop_flat_map(|n| {
            (
                proptest::collection::vec(0..=n, n),
                proptest::collection::vec(proptest::bool::weighted(0.3), n),
            )
                .prop_map(move |(heads, punct)| {
                    let mut seen_root = false;
                    let tokens = (0..n)
                        .map(|i| {
                            let mut h = heads[i];
                            if h == i + 1 || (h == 0 && seen_root) {
                                h = if i == 0 { 2.min(n) } else { 1 };
                                if h == i + 1 {
                                    h = 0;
                                }
                            }
                            if h == 0 {
                                seen_root = true;
                            }
                            let rel = if punct[i] { "punct" } else { "dep" };
                            Token::new(format!("t{i}"), i + 1, h, rel)
                        })
                        .collect();
                    Sentence::new(tokens, 0)
                })
        })
    }

    proptest! {
        #[test]
        fn pruning_yields_rooted_tree(s in arb_sentence()) {
            let n_punct = s.tokens.iter().filter(|t| t.is_punct).count();
            match prune_punctuation(&s) {
                Err(_) => prop_assert_eq!(n_punct, s.len()),
                Ok(tree) => {
                    prop_assert_eq!(tree.len(), s.len() - n_punct);
                    // Validates single root and acyclicity.
                    let rebuilt = DependencyTree::from_nodes(tree.nodes().to_vec());
                    prop_assert!(rebuilt.is_ok());
                    let again = prune_punctuation(&tree.to_sentence(0)).unwrap();
                    prop_assert_eq!(again, tree);
                }
            }
        }
    }
}
