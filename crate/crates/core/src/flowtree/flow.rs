//! Discrete attractor flow along a fixed binary topology.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rng::SplitMix64;
use super::tree::LabeledTree;
use super::FlowError;
use crate::quiver::{contract, pair, Covector, DimVec, SkewForm};

/// Affine constraints `<x, γ_i> = ε_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaConstraint {
    pub parts: Vec<DimVec>,
    pub eps: Vec<BigRational>,
}

impl GammaConstraint {
    /// The linear constraint `A⁰`.
    pub fn linear(parts: &[DimVec]) -> Self {
        GammaConstraint {
            parts: parts.to_vec(),
            eps: vec![BigRational::zero(); parts.len()],
        }
    }

    /// `c_E`: the sum of `ε_i` over the leaves below a node.
    pub fn constant(&self, node: &LabeledTree) -> BigRational {
        node.leaves()
            .into_iter()
            .fold(BigRational::zero(), |a, i| a + &self.eps[i])
    }

    /// For parallel parts, `ε_i / |γ_i|` must differ.
    pub fn is_general(&self) -> bool {
        let n = self.parts.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.parts[i].is_parallel(&self.parts[j]) {
                    let a = &self.eps[i] / BigRational::from_integer(self.parts[i].divisibility().into());
                    let b = &self.eps[j] / BigRational::from_integer(self.parts[j].divisibility().into());
                    if a == b {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationSpec {
    pub seed: u64,
    pub scale: BigRational,
    pub max_retries: usize,
}

pub const DEFAULT_SCALE_LOG2: u32 = 40;
pub const DEFAULT_MAX_RETRIES: usize = 12;

impl PerturbationSpec {
    pub fn new(seed: u64, scale: BigRational) -> Result<Self, FlowError> {
        if !scale.is_positive() {
            return Err(FlowError::NonPositiveScale);
        }
        Ok(PerturbationSpec {
            seed,
            scale,
            max_retries: DEFAULT_MAX_RETRIES,
        })
    }

    pub fn with_seed(seed: u64) -> Self {
        PerturbationSpec {
            seed,
            scale: default_scale(),
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// `2^-40`.
pub fn default_scale() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << DEFAULT_SCALE_LOG2)
}

/// Checks the entry conditions shared by every flow computation: matching
/// dimensions, `<θ, γ> = 0`, and nonzero contractions of the parts and of
/// the total class.
pub fn validate_inputs(
    omega: &SkewForm,
    theta: &Covector,
    parts: &[DimVec],
) -> Result<DimVec, FlowError> {
    if parts.is_empty() {
        return Err(FlowError::NoParts);
    }
    let d = omega.dim();
    if theta.len() != d {
        return Err(FlowError::DimensionMismatch {
            expected: d,
            got: theta.len(),
        });
    }
    if let Some(p) = parts.iter().find(|p| p.len() != d) {
        return Err(FlowError::DimensionMismatch {
            expected: d,
            got: p.len(),
        });
    }
    if let Some(i) = parts.iter().position(DimVec::is_zero) {
        return Err(FlowError::ZeroPart(i));
    }
    let gamma = total_class(parts);
    if !pair(theta, &gamma).expect("dimensions checked").is_zero() {
        return Err(FlowError::ThetaNotOrthogonal);
    }
    for (i, p) in parts.iter().enumerate() {
        if contract(omega, p).iter().all(|&x| x == 0) {
            return Err(FlowError::ZeroContraction(Some(i)));
        }
    }
    if contract(omega, &gamma).iter().all(|&x| x == 0) {
        return Err(FlowError::ZeroContraction(None));
    }
    Ok(gamma)
}

pub fn total_class(parts: &[DimVec]) -> DimVec {
    parts.iter().sum::<Option<DimVec>>().expect("nonempty parts")
}

/// Seeded general perturbation `(θ̃, ε)` of `(θ, A⁰)`.
///
/// `attempt` selects an independent substream so that a retry after a
/// genericity failure draws fresh values. The integer draws depend only on
/// `(seed, attempt)`; `scale` multiplies `ε` and `scale²` the tangential
/// jitter, so positions are polynomials of degree two in `scale`.
pub fn perturb(
    theta: &Covector,
    parts: &[DimVec],
    seed: u64,
    attempt: u64,
    scale: &BigRational,
) -> (Covector, GammaConstraint) {
    let d = theta.len();
    let gamma = total_class(parts);
    let mut rng = if attempt == 0 {
        SplitMix64::new(seed)
    } else {
        let mut outer = SplitMix64::new(seed);
        let mut s = 0;
        for _ in 0..attempt {
            s = outer.next_u64();
        }
        SplitMix64::new(s)
    };

    let constraint = loop {
        let eta: Vec<i64> = (0..parts.len()).map(|_| rng.next_odd()).collect();
        let mut sorted = eta.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let eps: Vec<BigRational> = eta
            .iter()
            .map(|&e| scale * BigRational::from_integer(e.into()))
            .collect();
        let c = GammaConstraint {
            parts: parts.to_vec(),
            eps,
        };
        if c.is_general() {
            break c;
        }
    };

    let k = gamma
        .entries()
        .iter()
        .position(|&g| g != 0)
        .expect("total class is nonzero");
    let gk = BigRational::from_integer(gamma.entries()[k].into());

    // Jitter w projected into γ^⊥ along e_k.
    let w: Vec<BigRational> = (0..d)
        .map(|_| BigRational::from_integer(rng.next_signed().into()))
        .collect();
    let wg = w
        .iter()
        .zip(gamma.entries())
        .fold(BigRational::zero(), |a, (x, &g)| a + x * BigRational::from_integer(g.into()));
    let scale2 = scale * scale;
    let mut coords = theta.entries().to_vec();
    for (j, x) in coords.iter_mut().enumerate() {
        let mut wj = w[j].clone();
        if j == k {
            wj -= &wg / &gk;
        }
        *x += &scale2 * wj;
    }
    let theta_j = Covector(coords);
    let shift = (constraint.eps.iter().fold(BigRational::zero(), |a, e| a + e)
        - pair(&theta_j, &gamma).expect("same dimension"))
        / &gk;
    let mut coords = theta_j.0;
    coords[k] += shift;
    (Covector(coords), constraint)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    Perturbed,
    Limit,
}

/// A child of a flow vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowChild {
    Leaf(usize),
    Vertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowVertex {
    /// Class of the edge arriving from the parent (or from the root).
    pub class: DimVec,
    /// Flow parameter of that edge: `x_v = x_parent + t ι_{γ_E} ω`.
    pub t: BigRational,
    pub position: Covector,
    pub children: Vec<FlowChild>,
    /// Leaves below this vertex, sorted.
    pub leaves: Vec<usize>,
}

/// Exact embedding of a binary topology. Vertex 0 is the end of the root
/// edge; the others follow in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowEmbedding {
    pub topology: LabeledTree,
    pub root: Covector,
    pub vertices: Vec<FlowVertex>,
    pub weight: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowOutcome {
    Embedded(FlowEmbedding),
    /// Some flow parameter is negative.
    Invalid,
    /// Some vertex has `ω(γ_{E₁}, γ_{E₂}) = 0`.
    Degenerate,
    /// Some flow parameter vanishes in a perturbed run.
    GenericityFailure,
}

impl FlowOutcome {
    pub fn embedding(&self) -> Option<&FlowEmbedding> {
        match self {
            FlowOutcome::Embedded(e) => Some(e),
            _ => None,
        }
    }
}

/// `∏_v |ω(γ_{E₁,v}, γ_{E₂,v})|` over the internal vertices; zero exactly
/// when the topology is degenerate.
pub fn topology_weight(t: &LabeledTree, omega: &SkewForm, parts: &[DimVec]) -> BigInt {
    match t {
        LabeledTree::Leaf(_) => BigInt::one(),
        LabeledTree::Node(c) => {
            assert_eq!(c.len(), 2, "binary topology expected");
            let w = omega.eval(&c[0].class(parts), &c[1].class(parts)).abs();
            if w == 0 {
                return BigInt::zero();
            }
            BigInt::from(w) * topology_weight(&c[0], omega, parts) * topology_weight(&c[1], omega, parts)
        }
    }
}

/// Runs the flow from `root` down the topology `t`.
///
/// At the vertex below an edge of class `γ_E` with children `E₁, E₂`, the
/// parameter `t = (c_{E₁} - <x, γ_{E₁}>) / ω(γ_E, γ_{E₁})` is the unique
/// point of the half-line meeting the first child's constraint. The second
/// child's constraint then holds by additivity, which is asserted.
pub fn run_flow(
    t: &LabeledTree,
    root: &Covector,
    c: &GammaConstraint,
    omega: &SkewForm,
    mode: FlowMode,
) -> FlowOutcome {
    let parts = &c.parts;
    let LabeledTree::Node(_) = t else {
        panic!("run_flow needs at least two leaves");
    };
    let weight = topology_weight(t, omega, parts);
    if weight.is_zero() {
        return FlowOutcome::Degenerate;
    }
    let mut vertices = Vec::new();
    match descend(t, root, c, omega, mode, &mut vertices) {
        Ok(_) => FlowOutcome::Embedded(FlowEmbedding {
            topology: t.clone(),
            root: root.clone(),
            vertices,
            weight,
        }),
        Err(o) => o,
    }
}

fn descend(
    node: &LabeledTree,
    start: &Covector,
    c: &GammaConstraint,
    omega: &SkewForm,
    mode: FlowMode,
    out: &mut Vec<FlowVertex>,
) -> Result<usize, FlowOutcome> {
    let kids = node.children();
    let parts = &c.parts;
    let class = node.class(parts);
    let dir = contract(omega, &class);
    let c_e = c.constant(node);
    assert_eq!(pair(start, &class).expect("dimension"), c_e, "edge constraint");

    let first = &kids[0];
    let g1 = first.class(parts);
    let denom = omega.eval(&class, &g1);
    let c1 = c.constant(first);
    let t = (c1 - pair(start, &g1).expect("dimension"))
        / BigRational::from_integer(denom.into());
    if t.is_negative() {
        return Err(FlowOutcome::Invalid);
    }
    if t.is_zero() && mode == FlowMode::Perturbed {
        return Err(FlowOutcome::GenericityFailure);
    }
    let x = start.shifted(&t, &dir);
    for k in kids {
        assert_eq!(
            pair(&x, &k.class(parts)).expect("dimension"),
            c.constant(k),
            "child constraint at flow vertex"
        );
    }
    // Constant along the edge.
    assert_eq!(pair(&x, &class).expect("dimension"), c.constant(node));

    let idx = out.len();
    out.push(FlowVertex {
        class,
        t,
        position: x.clone(),
        children: Vec::new(),
        leaves: node.leaves(),
    });
    let mut children = Vec::with_capacity(kids.len());
    for k in kids {
        match k {
            LabeledTree::Leaf(i) => children.push(FlowChild::Leaf(*i)),
            LabeledTree::Node(_) => {
                let j = descend(k, &x, c, omega, mode, out)?;
                children.push(FlowChild::Vertex(j));
            }
        }
    }
    out[idx].children = children;
    Ok(idx)
}
