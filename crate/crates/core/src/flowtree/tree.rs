use std::fmt;

use serde_json::Value;

use crate::quiver::DimVec;

/// A rooted tree whose leaves carry the labels `0..r` (printed 1-based).
///
/// The univalent root is implicit: it sits above the top node. Binary
/// topologies have exactly two children at every node; contracted shapes
/// may have more.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabeledTree {
    Leaf(usize),
    Node(Vec<LabeledTree>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("tree JSON must be a leaf index or a nested array")]
    Shape,
    #[error("leaf labels must be 1..{0}, each used once")]
    Labels(usize),
    #[error("internal vertex with fewer than two children")]
    Unary,
}

impl LabeledTree {
    pub fn leaf(i: usize) -> Self {
        LabeledTree::Leaf(i)
    }

    pub fn node(children: Vec<LabeledTree>) -> Self {
        LabeledTree::Node(children)
    }

    pub fn pair(a: LabeledTree, b: LabeledTree) -> Self {
        LabeledTree::Node(vec![a, b])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, LabeledTree::Leaf(_))
    }

    pub fn children(&self) -> &[LabeledTree] {
        match self {
            LabeledTree::Leaf(_) => &[],
            LabeledTree::Node(c) => c,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            LabeledTree::Leaf(_) => 1,
            LabeledTree::Node(c) => c.iter().map(LabeledTree::leaf_count).sum(),
        }
    }

    /// Leaf labels below this node, sorted.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out.sort_unstable();
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            LabeledTree::Leaf(i) => out.push(*i),
            LabeledTree::Node(c) => c.iter().for_each(|t| t.collect_leaves(out)),
        }
    }

    pub fn min_leaf(&self) -> usize {
        match self {
            LabeledTree::Leaf(i) => *i,
            LabeledTree::Node(c) => c.iter().map(LabeledTree::min_leaf).min().unwrap_or(usize::MAX),
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            LabeledTree::Leaf(_) => 0,
            LabeledTree::Node(c) => 1 + c.iter().map(LabeledTree::internal_count).sum::<usize>(),
        }
    }

    pub fn is_binary(&self) -> bool {
        match self {
            LabeledTree::Leaf(_) => true,
            LabeledTree::Node(c) => c.len() == 2 && c.iter().all(LabeledTree::is_binary),
        }
    }

    /// Children ordered by their smallest leaf, recursively. Two trees are
    /// labeled-isomorphic iff their canonical forms are equal.
    pub fn canonical(&self) -> LabeledTree {
        match self {
            LabeledTree::Leaf(i) => LabeledTree::Leaf(*i),
            LabeledTree::Node(c) => {
                let mut kids: Vec<LabeledTree> = c.iter().map(LabeledTree::canonical).collect();
                kids.sort_by_key(LabeledTree::min_leaf);
                LabeledTree::Node(kids)
            }
        }
    }

    /// Canonical text encoding such as `((1,2),3)`.
    pub fn encode(&self) -> String {
        self.canonical().to_string()
    }

    /// `γ_E` for the edge above this node: the sum of the leaf classes below.
    pub fn class(&self, parts: &[DimVec]) -> DimVec {
        let leaves = self.leaves();
        let mut acc = DimVec::zero(parts[0].len());
        for i in leaves {
            acc = &acc + &parts[i];
        }
        acc
    }

    /// Nested arrays of 1-based labels.
    pub fn to_json(&self) -> Value {
        match self {
            LabeledTree::Leaf(i) => Value::from(*i + 1),
            LabeledTree::Node(c) => Value::Array(c.iter().map(LabeledTree::to_json).collect()),
        }
    }

    /// Parses nested arrays of 1-based labels and checks that the labels
    /// are exactly `1..=r`.
    pub fn from_json(v: &Value) -> Result<LabeledTree, TreeError> {
        let t = Self::from_json_inner(v)?;
        let leaves = t.leaves();
        let r = leaves.len();
        if leaves.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(TreeError::Labels(r));
        }
        Ok(t)
    }

    fn from_json_inner(v: &Value) -> Result<LabeledTree, TreeError> {
        match v {
            Value::Number(n) => {
                let i = n.as_u64().filter(|&i| i >= 1).ok_or(TreeError::Shape)?;
                Ok(LabeledTree::Leaf(i as usize - 1))
            }
            Value::Array(items) => {
                if items.len() < 2 {
                    return Err(TreeError::Unary);
                }
                items
                    .iter()
                    .map(Self::from_json_inner)
                    .collect::<Result<Vec<_>, _>>()
                    .map(LabeledTree::Node)
            }
            _ => Err(TreeError::Shape),
        }
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledTree::Leaf(i) => write!(f, "{}", i + 1),
            LabeledTree::Node(c) => {
                write!(f, "(")?;
                for (k, t) in c.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All leaf-labeled rooted binary trees on `r` leaves, in canonical form,
/// sorted by encoding. Built by inserting leaf `k` on every edge of every
/// tree on the first `k` leaves, which reaches each tree exactly once.
pub fn enumerate_binary_trees(r: usize) -> Vec<LabeledTree> {
    assert!(r >= 1, "a tree needs at least one leaf");
    let mut trees = vec![LabeledTree::Leaf(0)];
    for k in 1..r {
        let mut next = Vec::with_capacity(trees.len() * (2 * k - 1));
        for t in &trees {
            insert_everywhere(t, k, &mut next);
        }
        trees = next;
    }
    let mut out: Vec<LabeledTree> = trees.iter().map(LabeledTree::canonical).collect();
    out.sort_by_cached_key(LabeledTree::to_string);
    out
}

fn insert_everywhere(t: &LabeledTree, k: usize, out: &mut Vec<LabeledTree>) {
    out.push(LabeledTree::pair(t.clone(), LabeledTree::Leaf(k)));
    if let LabeledTree::Node(c) = t {
        let (a, b) = (&c[0], &c[1]);
        let mut left = Vec::new();
        insert_everywhere(a, k, &mut left);
        out.extend(left.into_iter().map(|x| LabeledTree::pair(x, b.clone())));
        let mut right = Vec::new();
        insert_everywhere(b, k, &mut right);
        out.extend(right.into_iter().map(|x| LabeledTree::pair(a.clone(), x)));
    }
}

/// `(2r-3)!!`, the number of rooted binary trees on `r ≥ 2` labeled leaves.
pub fn binary_tree_count(r: usize) -> u64 {
    (1..r).map(|k| (2 * k - 1) as u64).product::<u64>().max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts_match_double_factorial() {
        assert_eq!(enumerate_binary_trees(1).len(), 1);
        assert_eq!(enumerate_binary_trees(2).len(), 1);
        assert_eq!(enumerate_binary_trees(3).len(), 3);
        assert_eq!(enumerate_binary_trees(4).len(), 15);
        for r in 1..=7 {
            let trees = enumerate_binary_trees(r);
            assert_eq!(trees.len() as u64, binary_tree_count(r));
            let distinct: BTreeSet<String> = trees.iter().map(|t| t.encode()).collect();
            assert_eq!(distinct.len(), trees.len());
            assert!(trees.iter().all(|t| t.is_binary() && t.leaf_count() == r));
        }
    }

    #[test]
    fn three_leaf_encodings() {
        let enc: Vec<String> = enumerate_binary_trees(3).iter().map(|t| t.encode()).collect();
        assert_eq!(enc, vec!["((1,2),3)", "((1,3),2)", "(1,(2,3))"]);
    }

    #[test]
    fn canonical_ignores_child_order() {
        let a = LabeledTree::pair(
            LabeledTree::Leaf(2),
            LabeledTree::pair(LabeledTree::Leaf(1), LabeledTree::Leaf(0)),
        );
        assert_eq!(a.encode(), "((1,2),3)");
    }

    #[test]
    fn json_roundtrip() {
        let v: Value = serde_json::from_str("[[1,2],3]").unwrap();
        let t = LabeledTree::from_json(&v).unwrap();
        assert_eq!(t.encode(), "((1,2),3)");
        assert_eq!(t.to_json(), v);
        let bad: Value = serde_json::from_str("[[1,2],4]").unwrap();
        assert!(LabeledTree::from_json(&bad).is_err());
        let unary: Value = serde_json::from_str("[[1],2]").unwrap();
        assert_eq!(LabeledTree::from_json(&unary), Err(TreeError::Unary));
    }
}
