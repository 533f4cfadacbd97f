//! Lattice invariants of a face: the gluing map, its cokernel, the
//! tropical coefficient, and the two product formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::face::{FaceChild, FaceType};
use super::TropicalError;
use crate::exactlin::{
    cokernel_order, index_in_saturation, kernel_basis, lattice_sum_index, rank, relative_index,
    saturate, IntMatrix, Order, Sublattice,
};
use crate::quiver::DimVec;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// The gluing matrix augmented by one relation column `u_E` per internal
/// edge, so that its cokernel is the cokernel of `gl_σ` with codomain
/// blocks `M / Z u_E`.
///
/// Columns: `d` per vertex, then one per edge. Rows: `d` per edge (vertex
/// order, skipping the top vertex), then one per leg `L_i`, which maps `m`
/// to `<m, γ_i> / |γ_i|`.
pub fn gluing_matrix(face: &FaceType) -> IntMatrix {
    let d = face.dim();
    let nv = face.vertices().len();
    let ne = face.edge_count();
    let r = face.parts().len();
    let mut m = IntMatrix::zeros(ne * d + r, nv * d + ne);
    for w in 1..nv {
        let e = w - 1;
        let v = face.vertices()[w].parent.expect("non-top vertex has a parent");
        for k in 0..d {
            m[(e * d + k, v * d + k)] = BigInt::one();
            m[(e * d + k, w * d + k)] = -BigInt::one();
        }
        let u = face.direction(&face.vertices()[w].class);
        for (k, x) in u.iter().enumerate() {
            m[(e * d + k, nv * d + e)] = BigInt::from(*x);
        }
    }
    for (v, vert) in face.vertices().iter().enumerate() {
        for c in &vert.children {
            if let FaceChild::Leg(i) = *c {
                let g = &face.parts()[i];
                let div = g.divisibility();
                for k in 0..d {
                    m[(ne * d + i, v * d + k)] = BigInt::from(g.entries()[k] / div);
                }
            }
        }
    }
    m
}

/// `T_σ = ker gl_σ` inside `∏_v M`.
pub fn tangent_lattice(face: &FaceType) -> Sublattice {
    let d = face.dim();
    let nv = face.vertices().len();
    let k = kernel_basis(&gluing_matrix(face));
    let gens = k
        .generators()
        .iter()
        .map(|g| g[..nv * d].to_vec())
        .collect();
    Sublattice::new(nv * d, gens)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingCokernel {
    pub n_trop: BigInt,
    pub tangent: Sublattice,
}

/// `N_σ^trop = |coker gl_σ|` together with `T_σ`.
pub fn gluing_cokernel(face: &FaceType) -> Result<GluingCokernel, TropicalError> {
    if !face.is_trivalent() {
        return Err(TropicalError::NotTrivalent);
    }
    match cokernel_order(&gluing_matrix(face)) {
        Order::Finite(n) => Ok(GluingCokernel {
            n_trop: n,
            tangent: tangent_lattice(face),
        }),
        Order::Infinite => Err(TropicalError::InfiniteCokernel),
    }
}

/// `k = |L^sat / L|` for `L = p(T) + Z u_{L_out}`, with `p` the projection
/// to the top vertex. Works for trivalent and contracted types alike.
pub fn k_coefficient(face: &FaceType, tangent: &Sublattice) -> Result<BigInt, TropicalError> {
    let d = face.dim();
    let mut gens: Vec<Vec<BigInt>> = tangent
        .generators()
        .iter()
        .map(|g| g[..d].to_vec())
        .collect();
    let projected_rank = Sublattice::new(d, gens.clone()).rank();
    gens.push(big(&face.direction(face.total_class())));
    let l = Sublattice::new(d, gens);
    if projected_rank != d - 2 || l.rank() != d - 1 {
        return Err(TropicalError::RankViolation);
    }
    Ok(index_in_saturation(&l).expect("rank d-1 lattice is nonzero"))
}

/// `k_ρ` of a (possibly contracted) type from its own tangent lattice.
pub fn k_contracted(face: &FaceType) -> Result<BigInt, TropicalError> {
    k_coefficient(face, &tangent_lattice(face))
}

/// `(|γ| / ∏|γ_i|) ∏_v |ω(γ_{E₁,v}, γ_{E₂,v})|`.
pub fn product_formula(face: &FaceType) -> Result<BigRational, TropicalError> {
    if !face.is_trivalent() {
        return Err(TropicalError::NotTrivalent);
    }
    let mut num = BigInt::from(face.total_class().divisibility());
    for v in face.vertices() {
        let a = face.child_class(v.children[0]);
        let b = face.child_class(v.children[1]);
        num *= BigInt::from(face.omega().eval(a, b).abs());
    }
    let den: BigInt = face
        .parts()
        .iter()
        .map(|p| BigInt::from(p.divisibility()))
        .product();
    Ok(BigRational::new(num, den))
}

/// The pair `(L_{1,v}, L_{2,v})` at every vertex, built from the legs up:
/// a leg gives `γ_i^⊥`, an edge to `w` gives `L_{1,w} ∩ L_{2,w} + Z u_E`.
pub fn child_lattices(face: &FaceType) -> Result<Vec<(Sublattice, Sublattice)>, TropicalError> {
    if !face.is_trivalent() {
        return Err(TropicalError::NotTrivalent);
    }
    let n = face.vertices().len();
    let mut out: Vec<Option<(Sublattice, Sublattice)>> = vec![None; n];
    // Preorder numbering puts children after parents.
    for v in (0..n).rev() {
        let kids = &face.vertices()[v].children;
        let mut pair = Vec::with_capacity(2);
        for &c in kids {
            let l = match c {
                FaceChild::Leg(i) => Sublattice::orthogonal_to(&face.parts()[i].to_big()),
                FaceChild::Edge(w) => {
                    let (a, b) = out[w].as_ref().expect("children first");
                    let u = big(&face.direction(&face.vertices()[w].class));
                    a.intersect(b).with_generator(u)
                }
            };
            if l.rank() != face.dim() - 1 {
                return Err(TropicalError::RankViolation);
            }
            pair.push(l);
        }
        let b = pair.pop().expect("two children");
        let a = pair.pop().expect("two children");
        out[v] = Some((a, b));
    }
    Ok(out.into_iter().map(|p| p.expect("filled")).collect())
}

/// `∏_v |M / (L_{1,v} + L_{2,v})|`.
pub fn n_trop_from_children(face: &FaceType) -> Result<BigInt, TropicalError> {
    let mut acc = BigInt::one();
    for (a, b) in child_lattices(face)? {
        match lattice_sum_index(&a, &b) {
            Order::Finite(n) => acc *= n,
            Order::Infinite => return Err(TropicalError::InfiniteCokernel),
        }
    }
    Ok(acc)
}

/// `k_σ` from the recursive lattices: `L_{1,v₀} ∩ L_{2,v₀} + Z u_{L_out}`.
pub fn k_from_children(face: &FaceType) -> Result<BigInt, TropicalError> {
    let lat = child_lattices(face)?;
    let (a, b) = &lat[0];
    let l = a
        .intersect(b)
        .with_generator(big(&face.direction(face.total_class())));
    if l.rank() != face.dim() - 1 {
        return Err(TropicalError::RankViolation);
    }
    Ok(index_in_saturation(&l).expect("nonzero lattice"))
}

/// `T_v = ∩_{children} γ^⊥` at every vertex; rank `d - 2` is required.
pub fn vertex_tangents(face: &FaceType) -> Result<Vec<Sublattice>, TropicalError> {
    let d = face.dim();
    face.vertices()
        .iter()
        .map(|v| {
            let rows: Vec<Vec<BigInt>> = v
                .children
                .iter()
                .map(|&c| face.child_class(c).to_big())
                .collect();
            let t = kernel_basis(&IntMatrix::from_big_rows(d, &rows));
            if t.generators().len() != d - 2 {
                return Err(TropicalError::RankViolation);
            }
            Ok(t)
        })
        .collect()
}

/// `|coker Ψ_σ|` for `Ψ_σ : ∏_v T_v × Z^E → ∏_E γ_E^⊥`,
/// `((m_v), (ℓ_E)) ↦ (m_{∂⁺E} - m_{∂⁻E} + ℓ_E u_E)`.
pub fn psi_cokernel(face: &FaceType) -> Result<Order, TropicalError> {
    if !face.is_trivalent() {
        return Err(TropicalError::NotTrivalent);
    }
    let d = face.dim();
    let ne = face.edge_count();
    if ne == 0 {
        return Ok(Order::Finite(BigInt::one()));
    }
    let tangents = vertex_tangents(face)?;
    let mut image: Vec<Vec<BigInt>> = Vec::new();
    for (v, t) in tangents.iter().enumerate() {
        for b in t.generators() {
            let mut col = vec![BigInt::zero(); ne * d];
            // Edge e joins vertex e+1 to its parent.
            for w in 1..face.vertices().len() {
                let e = w - 1;
                let parent = face.vertices()[w].parent.expect("parent");
                let sign = if parent == v {
                    1
                } else if w == v {
                    -1
                } else {
                    continue;
                };
                for k in 0..d {
                    col[e * d + k] += &b[k] * sign;
                }
            }
            image.push(col);
        }
    }
    for w in 1..face.vertices().len() {
        let e = w - 1;
        let mut col = vec![BigInt::zero(); ne * d];
        for (k, x) in face.direction(&face.vertices()[w].class).into_iter().enumerate() {
            col[e * d + k] = BigInt::from(x);
        }
        image.push(col);
    }
    // ∏_E γ_E^⊥ is saturated in M^E, so the cokernel is finite iff the image
    // has full rank |E|(d-1), and then equals the index in the saturation.
    let m = IntMatrix::from_columns(ne * d, &image);
    if rank(&m) != ne * (d - 1) {
        return Ok(Order::Infinite);
    }
    let img = Sublattice::new(ne * d, image);
    Ok(Order::Finite(index_in_saturation(&img).expect("nonzero image")))
}

/// `∏_v |(L_{1,v}^sat + L_{2,v}^sat) / (L_{1,v} + L_{2,v})|`.
pub fn psi_rhs(face: &FaceType) -> Result<BigInt, TropicalError> {
    let mut acc = BigInt::one();
    for (a, b) in child_lattices(face)? {
        let outer = saturate(&a).sum(&saturate(&b));
        match relative_index(&outer, &a.sum(&b)).expect("L ⊆ L^sat") {
            Order::Finite(n) => acc *= n,
            Order::Infinite => return Err(TropicalError::InfiniteCokernel),
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TropMult {
    #[serde(rename = "N_trop", serialize_with = "crate::json::serialize_bigint")]
    pub n_trop: BigInt,
    #[serde(serialize_with = "crate::json::serialize_bigint")]
    pub k_sigma: BigInt,
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub product_formula: BigRational,
    pub psi_coker: Order,
}

pub fn tropical_multiplicity(face: &FaceType) -> Result<TropMult, TropicalError> {
    let g = gluing_cokernel(face)?;
    let k = k_coefficient(face, &g.tangent)?;
    Ok(TropMult {
        n_trop: g.n_trop,
        k_sigma: k,
        product_formula: product_formula(face)?,
        psi_coker: psi_cokernel(face)?,
    })
}

/// `k_ρ` and `N^toric = (Σ_σ k_σ N_σ^trop) / k_ρ` for a contracted type
/// `rho` and the trivalent faces over it.
pub fn log_gw(rho: &FaceType, fibers: &[FaceType]) -> Result<(BigRational, BigInt), TropicalError> {
    let k_rho = k_contracted(rho)?;
    let mut sum = BigInt::zero();
    for f in fibers {
        let g = gluing_cokernel(f)?;
        sum += k_coefficient(f, &g.tangent)? * g.n_trop;
    }
    Ok((BigRational::new(sum, k_rho.clone()), k_rho))
}

/// Total divisibility factor `∏|γ_i| / |γ|` of the correspondence.
pub fn divisibility_ratio(parts: &[DimVec]) -> BigRational {
    let total = crate::flowtree::total_class(parts);
    let num: BigInt = parts.iter().map(|p| BigInt::from(p.divisibility())).product();
    BigRational::new(num, BigInt::from(total.divisibility()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flowtree::LabeledTree;
    use num_traits::Signed;
    use crate::quiver::SkewForm;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn leaf(i: usize) -> LabeledTree {
        LabeledTree::Leaf(i)
    }

    fn dv(v: &[i64]) -> DimVec {
        DimVec::new(v.to_vec())
    }

    fn worked_face() -> FaceType {
        FaceType::new(
            &LabeledTree::pair(LabeledTree::pair(leaf(0), leaf(1)), leaf(2)),
            &[dv(&[1, 0]), dv(&[0, 1]), dv(&[0, 1])],
            &SkewForm::kronecker(2),
        )
        .unwrap()
    }

    #[test]
    fn worked_gluing_matrix() {
        let m = gluing_matrix(&worked_face());
        assert_eq!((m.rows(), m.cols()), (5, 5));
        assert_eq!(m.determinant().abs(), b(2));
    }

    #[test]
    fn worked_face_invariants() {
        let f = worked_face();
        let g = gluing_cokernel(&f).unwrap();
        assert_eq!(g.n_trop, b(2));
        assert!(g.tangent.generators().is_empty());
        assert_eq!(k_coefficient(&f, &g.tangent).unwrap(), b(2));
        assert_eq!(product_formula(&f).unwrap(), BigRational::from_integer(b(4)));
        assert_eq!(psi_cokernel(&f).unwrap(), Order::Finite(b(2)));
        assert_eq!(psi_rhs(&f).unwrap(), b(2));
        assert_eq!(n_trop_from_children(&f).unwrap(), b(2));
        assert_eq!(k_from_children(&f).unwrap(), b(2));
        let lat = child_lattices(&f).unwrap();
        // Top vertex: L₁ = Z(2,-2) from the edge, L₂ = e₂^⊥ = Z(1,0).
        assert!(lat[0].0.same_lattice(&Sublattice::from_i64(2, &[vec![2, -2]])));
        assert!(lat[0].1.same_lattice(&Sublattice::from_i64(2, &[vec![1, 0]])));
    }

    #[test]
    fn two_leg_faces() {
        let t = LabeledTree::pair(leaf(0), leaf(1));
        let w = SkewForm::kronecker(2);
        let f = FaceType::new(&t, &[dv(&[1, 0]), dv(&[0, 1])], &w).unwrap();
        assert_eq!(gluing_cokernel(&f).unwrap().n_trop, b(1));
        assert_eq!(psi_cokernel(&f).unwrap(), Order::Finite(b(1)));
        let f = FaceType::new(&t, &[dv(&[1, 0]), dv(&[1, 2])], &w).unwrap();
        assert_eq!(gluing_cokernel(&f).unwrap().n_trop, b(2));
        let f = FaceType::new(&t, &[dv(&[1, 0]), dv(&[0, 2])], &w).unwrap();
        assert_eq!(product_formula(&f).unwrap(), BigRational::from_integer(b(2)));
        let g = gluing_cokernel(&f).unwrap();
        assert_eq!(k_coefficient(&f, &g.tangent).unwrap() * g.n_trop, b(2));
    }

    #[test]
    fn proportional_children_give_zero_product() {
        let f = FaceType::new(
            &LabeledTree::pair(leaf(0), LabeledTree::pair(leaf(1), leaf(2))),
            &[dv(&[1, 0]), dv(&[0, 1]), dv(&[0, 1])],
            &SkewForm::kronecker(2),
        )
        .unwrap();
        assert!(product_formula(&f).unwrap().is_zero());
        assert_eq!(gluing_cokernel(&f), Err(TropicalError::InfiniteCokernel));
    }

    #[test]
    fn contracted_star_and_log_gw() {
        let w = SkewForm::kronecker(2);
        let parts = [dv(&[1, 0]), dv(&[0, 1]), dv(&[0, 1])];
        let star = FaceType::new(&LabeledTree::node(vec![leaf(0), leaf(1), leaf(2)]), &parts, &w)
            .unwrap();
        assert_eq!(k_contracted(&star).unwrap(), b(2));
        let (n, k) = log_gw(&star, &[worked_face()]).unwrap();
        assert_eq!((n, k), (BigRational::from_integer(b(2)), b(2)));
        let (n, _) = log_gw(&star, &[]).unwrap();
        assert!(n.is_zero());

        let two = [dv(&[1, 0]), dv(&[0, 1])];
        let rho = FaceType::new(&LabeledTree::pair(leaf(0), leaf(1)), &two, &w).unwrap();
        let (n, k) = log_gw(&rho, std::slice::from_ref(&rho)).unwrap();
        assert_eq!((n, k), (BigRational::one(), b(2)));
    }
}
