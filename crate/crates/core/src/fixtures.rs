//! Shared test fixtures.

use crate::corpus::{parse_conllu, DependencyTree, Sentence};

pub const MOTHER: &str = "\
# text = The mother forgot to turn off the water
1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_
2\tmother\tmother\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tforgot\tforget\tVERB\t_\t_\t0\troot\t_\t_
4\tto\tto\tPART\t_\t_\t5\tmark\t_\t_
5\tturn\tturn\tVERB\t_\t_\t3\txcomp\t_\t_
6\toff\toff\tADP\t_\t_\t5\tcompound:prt\t_\t_
7\tthe\tthe\tDET\t_\t_\t8\tdet\t_\t_
8\twater\twater\tNOUN\t_\t_\t5\tobj\t_\t_
";

pub fn mother_sentence() -> Sentence {
    parse_conllu(MOTHER.as_bytes()).unwrap()[0].sentences[0].clone()
}

pub fn mother_tree() -> DependencyTree {
    DependencyTree::from_heads(&[2, 3, 0, 5, 3, 5, 8, 5]).unwrap()
}
