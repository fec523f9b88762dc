use gramcomp::corpus::DependencyTree;
use gramcomp::deptree::{min_arrangement_subset_dp, min_linear_arrangement, total_dependency_length};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_tree(n: usize, rng: &mut StdRng) -> DependencyTree {
    // Random recursive attachment, then a random relabelling so the root and
    // the word order are both arbitrary.
    let mut parent = vec![None; n];
    for (v, p) in parent.iter_mut().enumerate().skip(1) {
        *p = Some(rng.random_range(0..v));
    }
    let mut label: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        label.swap(i, rng.random_range(0..=i));
    }
    let mut heads = vec![0; n];
    for v in 0..n {
        heads[label[v]] = parent[v].map_or(0, |p| label[p] + 1);
    }
    DependencyTree::from_heads(&heads).unwrap()
}

fn exhaustive(tree: &DependencyTree) -> usize {
    let edges = tree.edges();
    let n = tree.len();
    let mut pos: Vec<usize> = (0..n).collect();
    let cost = |p: &[usize]| edges.iter().map(|&(a, b)| p[a].abs_diff(p[b])).sum::<usize>();
    let mut best = cost(&pos);
    // Heap's algorithm over node positions.
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                pos.swap(0, i);
            } else {
                pos.swap(c[i], i);
            }
            best = best.min(cost(&pos));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best
}

#[test]
fn matches_exhaustive_search_small_trees() {
    let mut rng = StdRng::seed_from_u64(2024);
    for n in 1..=8 {
        for _ in 0..40 {
            let t = random_tree(n, &mut rng);
            assert_eq!(min_linear_arrangement(&t), exhaustive(&t), "heads {:?}", t.parents());
        }
    }
}

#[test]
fn matches_subset_dp_medium_trees() {
    let mut rng = StdRng::seed_from_u64(5);
    for n in [10, 12, 14, 16, 18] {
        for _ in 0..10 {
            let t = random_tree(n, &mut rng);
            let dp = min_arrangement_subset_dp(n, &t.edges()).unwrap();
            assert_eq!(min_linear_arrangement(&t), dp, "heads {:?}", t.parents());
        }
    }
}

#[test]
fn closed_forms() {
    for n in 2..40 {
        let path: Vec<usize> = (0..n).collect();
        let t = DependencyTree::from_heads(&path).unwrap();
        assert_eq!(min_linear_arrangement(&t), n - 1);
        // Star: leaves split evenly on both sides of the centre.
        let mut star = vec![1; n];
        star[0] = 0;
        let t = DependencyTree::from_heads(&star).unwrap();
        let (l, r) = ((n - 1) / 2, n - 1 - (n - 1) / 2);
        assert_eq!(min_linear_arrangement(&t), l * (l + 1) / 2 + r * (r + 1) / 2);
    }
}

#[test]
fn bounded_by_observed_length() {
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..200 {
        let n = rng.random_range(1..60);
        let t = random_tree(n, &mut rng);
        let d_min = min_linear_arrangement(&t);
        assert!(d_min <= total_dependency_length(&t));
        assert!(d_min >= n.saturating_sub(1));
    }
}

#[test]
fn large_sentences_are_fast() {
    let mut rng = StdRng::seed_from_u64(9);
    let start = std::time::Instant::now();
    for _ in 0..50 {
        let t = random_tree(100, &mut rng);
        min_linear_arrangement(&t);
    }
    assert!(start.elapsed().as_secs() < 20);
}
