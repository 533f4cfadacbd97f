//! Limits of perturbed flow trees and their grouping into attractor trees.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::flow::{
    perturb, run_flow, validate_inputs, FlowChild, FlowEmbedding, FlowMode, FlowOutcome,
    GammaConstraint, PerturbationSpec,
};
use super::tree::{enumerate_binary_trees, LabeledTree};
use super::FlowError;
use crate::quiver::{Covector, DimVec, SkewForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttractorChild {
    Leaf(usize),
    Vertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorVertex {
    pub class: DimVec,
    pub position: Covector,
    /// Ordered by smallest leaf.
    pub children: Vec<AttractorChild>,
    pub leaves: Vec<usize>,
}

/// A limit flow tree with zero-length edges contracted. Vertex 0 is the end
/// of the root edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorTree {
    pub root: Covector,
    pub vertices: Vec<AttractorVertex>,
}

impl AttractorTree {
    /// Contracted combinatorial shape, canonical.
    pub fn shape(&self) -> LabeledTree {
        self.shape_at(0)
    }

    fn shape_at(&self, v: usize) -> LabeledTree {
        LabeledTree::Node(
            self.vertices[v]
                .children
                .iter()
                .map(|c| match c {
                    AttractorChild::Leaf(i) => LabeledTree::Leaf(*i),
                    AttractorChild::Vertex(w) => self.shape_at(*w),
                })
                .collect(),
        )
    }

    /// `{pos:child,...}` recursively, children by smallest leaf, leaves
    /// 1-based. Equal encodings mean equal shape and equal positions.
    pub fn encode(&self) -> String {
        self.encode_at(0)
    }

    fn encode_at(&self, v: usize) -> String {
        let vert = &self.vertices[v];
        let kids: Vec<String> = vert
            .children
            .iter()
            .map(|c| match c {
                AttractorChild::Leaf(i) => (i + 1).to_string(),
                AttractorChild::Vertex(w) => self.encode_at(*w),
            })
            .collect();
        format!("{{{}:{}}}", vert.position.encode(), kids.join(","))
    }

    /// Valence of each vertex counting the incoming edge.
    pub fn valences(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.children.len() + 1).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitOutcome {
    Tree(AttractorTree),
    /// A limit flow parameter is negative: the perturbation was not small.
    NotSmallEnough,
    Degenerate,
}

/// Runs the unperturbed flow from `θ` and contracts every edge of length 0.
pub fn limit_tree(
    t: &LabeledTree,
    theta: &Covector,
    parts: &[DimVec],
    omega: &SkewForm,
) -> Result<LimitOutcome, FlowError> {
    let c = GammaConstraint::linear(parts);
    let e = match run_flow(t, theta, &c, omega, FlowMode::Limit) {
        FlowOutcome::Embedded(e) => e,
        FlowOutcome::Invalid => return Ok(LimitOutcome::NotSmallEnough),
        FlowOutcome::Degenerate => return Ok(LimitOutcome::Degenerate),
        FlowOutcome::GenericityFailure => unreachable!("limit runs accept t = 0"),
    };
    if e.vertices[0].t.is_zero() {
        return Err(FlowError::NonGenericTheta);
    }
    Ok(LimitOutcome::Tree(contract_embedding(&e, omega, parts)))
}

fn contract_embedding(e: &FlowEmbedding, omega: &SkewForm, parts: &[DimVec]) -> AttractorTree {
    let mut out = Vec::new();
    build(e, 0, omega, parts, &mut out);
    AttractorTree {
        root: e.root.clone(),
        vertices: out,
    }
}

fn build(
    e: &FlowEmbedding,
    v: usize,
    omega: &SkewForm,
    parts: &[DimVec],
    out: &mut Vec<AttractorVertex>,
) -> usize {
    let idx = out.len();
    out.push(AttractorVertex {
        class: e.vertices[v].class.clone(),
        position: e.vertices[v].position.clone(),
        children: Vec::new(),
        leaves: e.vertices[v].leaves.clone(),
    });
    // Absorb children reached along zero-length edges.
    let mut merged: Vec<FlowChild> = Vec::new();
    let mut stack: Vec<FlowChild> = e.vertices[v].children.iter().rev().cloned().collect();
    while let Some(c) = stack.pop() {
        match c {
            FlowChild::Vertex(w) if e.vertices[w].t.is_zero() => {
                debug_assert_eq!(e.vertices[w].position, e.vertices[v].position);
                stack.extend(e.vertices[w].children.iter().rev().cloned());
            }
            other => merged.push(other),
        }
    }
    let mut kids: Vec<(usize, AttractorChild)> = merged
        .into_iter()
        .map(|c| match c {
            FlowChild::Leaf(i) => (i, AttractorChild::Leaf(i)),
            FlowChild::Vertex(w) => {
                let key = e.vertices[w].leaves[0];
                (key, AttractorChild::Vertex(build(e, w, omega, parts, out)))
            }
        })
        .collect();
    kids.sort_by_key(|(k, _)| *k);
    let children: Vec<AttractorChild> = kids.into_iter().map(|(_, c)| c).collect();

    // Some pair of adjacent edges must have ω ≠ 0; the deepest merged
    // binary vertex always supplies one.
    let classes: Vec<DimVec> = children
        .iter()
        .map(|c| match c {
            AttractorChild::Leaf(i) => parts[*i].clone(),
            AttractorChild::Vertex(w) => out[*w].class.clone(),
        })
        .collect();
    let ok = (0..classes.len())
        .any(|a| (a + 1..classes.len()).any(|b| omega.eval(&classes[a], &classes[b]) != 0));
    assert!(ok, "attractor vertex with pairwise ω-orthogonal edges");
    out[idx].children = children;
    idx
}

/// A perturbed topology in the fiber over an attractor tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberMember {
    pub topology: LabeledTree,
    pub weight: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorGroup {
    pub tree: AttractorTree,
    pub members: Vec<FiberMember>,
}

impl AttractorGroup {
    /// `F_{r,h}`: total weight of the fiber.
    pub fn weight(&self) -> BigInt {
        self.members.iter().map(|m| &m.weight).sum()
    }
}

/// Attractor trees keyed by canonical encoding, with the accepted
/// perturbation that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttractorMap {
    pub groups: BTreeMap<String, AttractorGroup>,
    pub scale: BigRational,
    pub attempt: u64,
}

impl AttractorMap {
    pub fn total_weight(&self) -> BigInt {
        self.groups.values().map(AttractorGroup::weight).sum()
    }
}

enum Evaluation {
    Groups(BTreeMap<String, AttractorGroup>),
    NotSmallEnough,
    GenericityFailure,
}

/// Groups the valid perturbed binary flows by their limit attractor tree.
///
/// A run is accepted once it is generic (no zero flow parameter, distinct
/// parallel constraints), every valid topology has a nonnegative limit, and
/// the grouping is unchanged when the scale is halved once more. Genericity
/// failures move to a fresh random substream; the other failures halve the
/// scale.
pub fn enumerate_attractor_trees(
    omega: &SkewForm,
    theta: &Covector,
    parts: &[DimVec],
    spec: &PerturbationSpec,
) -> Result<AttractorMap, FlowError> {
    validate_inputs(omega, theta, parts)?;
    if parts.len() < 2 {
        return Err(FlowError::SingleLeaf);
    }
    let mut candidates = Vec::new();
    for t in enumerate_binary_trees(parts.len()) {
        match limit_tree(&t, theta, parts, omega)? {
            LimitOutcome::Degenerate => {}
            LimitOutcome::Tree(h) => candidates.push((t, Some(h))),
            LimitOutcome::NotSmallEnough => candidates.push((t, None)),
        }
    }

    let two = BigRational::from_integer(BigInt::from(2));
    let mut scale = spec.scale.clone();
    let mut attempt = 0u64;
    for _ in 0..=spec.max_retries {
        match evaluate(omega, theta, parts, &candidates, spec.seed, attempt, &scale) {
            Evaluation::GenericityFailure => attempt += 1,
            Evaluation::NotSmallEnough => scale /= &two,
            Evaluation::Groups(groups) => {
                let half = &scale / &two;
                match evaluate(omega, theta, parts, &candidates, spec.seed, attempt, &half) {
                    Evaluation::Groups(g2) if g2 == groups => {
                        return Ok(AttractorMap {
                            groups,
                            scale,
                            attempt,
                        })
                    }
                    Evaluation::GenericityFailure => attempt += 1,
                    _ => scale = half,
                }
            }
        }
    }
    Err(FlowError::RetriesExhausted {
        attempts: spec.max_retries + 1,
    })
}

fn evaluate(
    omega: &SkewForm,
    theta: &Covector,
    parts: &[DimVec],
    candidates: &[(LabeledTree, Option<AttractorTree>)],
    seed: u64,
    attempt: u64,
    scale: &BigRational,
) -> Evaluation {
    let (root, c) = perturb(theta, parts, seed, attempt, scale);
    let mut groups: BTreeMap<String, AttractorGroup> = BTreeMap::new();
    for (t, limit) in candidates {
        match run_flow(t, &root, &c, omega, FlowMode::Perturbed) {
            FlowOutcome::Embedded(e) => {
                let Some(h) = limit else {
                    return Evaluation::NotSmallEnough;
                };
                groups
                    .entry(h.encode())
                    .or_insert_with(|| AttractorGroup {
                        tree: h.clone(),
                        members: Vec::new(),
                    })
                    .members
                    .push(FiberMember {
                        topology: t.clone(),
                        weight: e.weight,
                    });
            }
            FlowOutcome::Invalid => {}
            FlowOutcome::Degenerate => unreachable!("filtered by the limit pass"),
            FlowOutcome::GenericityFailure => return Evaluation::GenericityFailure,
        }
    }
    Evaluation::Groups(groups)
}
