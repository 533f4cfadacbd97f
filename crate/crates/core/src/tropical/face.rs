use serde::{Deserialize, Serialize};

use super::TropicalError;
use crate::flowtree::LabeledTree;
use crate::quiver::{contract, DimVec, SkewForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceChild {
    Leg(usize),
    /// Internal edge to the given vertex.
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceVertex {
    /// Class of the edge (or `L_out`) above the vertex.
    pub class: DimVec,
    pub parent: Option<usize>,
    pub children: Vec<FaceChild>,
}

/// Combinatorial type of a tropical face: a rooted tree with legs
/// `L_1..L_r`, the outgoing leg `L_out` above vertex 0, and the edge
/// classes it induces. Vertices are numbered in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceType {
    tree: LabeledTree,
    parts: Vec<DimVec>,
    omega: SkewForm,
    vertices: Vec<FaceVertex>,
}

impl FaceType {
    pub fn new(tree: &LabeledTree, parts: &[DimVec], omega: &SkewForm) -> Result<Self, TropicalError> {
        let d = omega.dim();
        if d < 2 {
            return Err(TropicalError::DimensionTooSmall);
        }
        if let Some(p) = parts.iter().find(|p| p.len() != d) {
            return Err(TropicalError::DimensionMismatch {
                expected: d,
                got: p.len(),
            });
        }
        let tree = tree.canonical();
        let leaves = tree.leaves();
        if leaves.len() != parts.len() || leaves.iter().enumerate().any(|(k, &i)| k != i) {
            return Err(TropicalError::LeafLabels);
        }
        if tree.is_leaf() {
            return Err(TropicalError::NoVertex);
        }
        if let Some(i) = parts.iter().position(DimVec::is_zero) {
            return Err(TropicalError::ZeroClass(i));
        }
        if let Some(i) = parts.iter().position(|p| contract(omega, p).iter().all(|&x| x == 0)) {
            return Err(TropicalError::ZeroDirection(i));
        }
        let mut vertices = Vec::new();
        push_vertex(&tree, None, parts, &mut vertices);
        if vertices[0].class.is_zero() {
            return Err(TropicalError::ZeroTotal);
        }
        Ok(FaceType {
            tree,
            parts: parts.to_vec(),
            omega: omega.clone(),
            vertices,
        })
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    pub fn parts(&self) -> &[DimVec] {
        &self.parts
    }

    pub fn omega(&self) -> &SkewForm {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn vertices(&self) -> &[FaceVertex] {
        &self.vertices
    }

    pub fn is_trivalent(&self) -> bool {
        self.tree.is_binary()
    }

    /// Number of internal edges.
    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn total_class(&self) -> &DimVec {
        &self.vertices[0].class
    }

    pub fn child_class(&self, c: FaceChild) -> &DimVec {
        match c {
            FaceChild::Leg(i) => &self.parts[i],
            FaceChild::Edge(w) => &self.vertices[w].class,
        }
    }

    /// `u_E = -ι_{γ_E} ω`, the weighted direction pointing from the leaves
    /// towards the root.
    pub fn direction(&self, class: &DimVec) -> Vec<i64> {
        contract(&self.omega, class).into_iter().map(|x| -x).collect()
    }

    pub fn to_file(&self) -> FaceFile {
        FaceFile {
            tree: self.tree.to_json(),
            parts: self.parts.iter().map(|p| p.entries().to_vec()).collect(),
            skew_form: self.omega.entries().to_vec(),
        }
    }
}

fn push_vertex(
    node: &LabeledTree,
    parent: Option<usize>,
    parts: &[DimVec],
    out: &mut Vec<FaceVertex>,
) -> usize {
    let idx = out.len();
    out.push(FaceVertex {
        class: node.class(parts),
        parent,
        children: Vec::new(),
    });
    let mut children = Vec::new();
    for c in node.children() {
        match c {
            LabeledTree::Leaf(i) => children.push(FaceChild::Leg(*i)),
            LabeledTree::Node(_) => {
                let w = push_vertex(c, Some(idx), parts, out);
                children.push(FaceChild::Edge(w));
            }
        }
    }
    out[idx].children = children;
    idx
}

/// JSON form: the tree as nested arrays of 1-based leaf indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceFile {
    pub tree: serde_json::Value,
    pub parts: Vec<Vec<i64>>,
    pub skew_form: Vec<Vec<i64>>,
}

impl FaceFile {
    pub fn parse(text: &str) -> Result<Self, TropicalError> {
        serde_json::from_str(text).map_err(|e| TropicalError::Json(e.to_string()))
    }

    pub fn face(&self) -> Result<FaceType, TropicalError> {
        let tree = LabeledTree::from_json(&self.tree).map_err(|e| TropicalError::Json(e.to_string()))?;
        let omega =
            SkewForm::new(self.skew_form.clone()).map_err(|e| TropicalError::Json(e.to_string()))?;
        let parts: Vec<DimVec> = self.parts.iter().cloned().map(DimVec::new).collect();
        FaceType::new(&tree, &parts, &omega)
    }
}
