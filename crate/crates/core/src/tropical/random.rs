use super::face::FaceType;
use crate::flowtree::{topology_weight, validate_inputs, LabeledTree, SplitMix64};
use crate::quiver::{Covector, DimVec, SkewForm};

fn below(rng: &mut SplitMix64, n: u64) -> u64 {
    rng.next_u64() % n
}

fn in_range(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + below(rng, (hi - lo + 1) as u64) as i64
}

/// Random skew form on `Z^d` with entries in `[-bound, bound]`.
pub fn random_skew_form(rng: &mut SplitMix64, d: usize, bound: i64) -> SkewForm {
    let mut e = vec![vec![0; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let x = in_range(rng, -bound, bound);
            e[i][j] = x;
            e[j][i] = -x;
        }
    }
    SkewForm::new(e).expect("antisymmetric by construction")
}

/// Uniform random rooted binary tree on `r` leaves (random leaf insertion).
pub fn random_binary_tree(rng: &mut SplitMix64, r: usize) -> LabeledTree {
    fn insert(t: LabeledTree, k: usize, mut at: u64) -> (LabeledTree, u64) {
        if at == 0 {
            return (LabeledTree::pair(t, LabeledTree::Leaf(k)), u64::MAX);
        }
        at -= 1;
        match t {
            LabeledTree::Leaf(_) => (t, at),
            LabeledTree::Node(mut c) => {
                let b = c.pop().expect("binary");
                let a = c.pop().expect("binary");
                let (a, at) = insert(a, k, at);
                if at == u64::MAX {
                    return (LabeledTree::pair(a, b), at);
                }
                let (b, at) = insert(b, k, at);
                (LabeledTree::pair(a, b), at)
            }
        }
    }
    let mut t = LabeledTree::Leaf(0);
    for k in 1..r {
        // A tree on k leaves has 2k - 1 places to attach a new leaf.
        let at = below(rng, (2 * k - 1) as u64);
        t = insert(t, k, at).0;
    }
    t.canonical()
}

/// A random trivalent face with `ω(γ_{E₁,v}, γ_{E₂,v}) ≠ 0` at every
/// vertex, `2 ≤ d ≤ max_d`, `2 ≤ r ≤ max_r`. Parts have small entries of
/// either sign so that imprimitive classes and torsion occur.
pub fn random_valid_face(rng: &mut SplitMix64, max_d: usize, max_r: usize) -> FaceType {
    assert!(max_d >= 2 && max_r >= 2);
    loop {
        let d = 2 + below(rng, (max_d - 1) as u64) as usize;
        let r = 2 + below(rng, (max_r - 1) as u64) as usize;
        let omega = random_skew_form(rng, d, 3);
        let parts: Vec<DimVec> = (0..r)
            .map(|_| DimVec::new((0..d).map(|_| in_range(rng, -2, 3)).collect()))
            .collect();
        if parts.iter().any(DimVec::is_zero) {
            continue;
        }
        let t = random_binary_tree(rng, r);
        if topology_weight(&t, &omega, &parts) == 0.into() {
            continue;
        }
        if let Ok(f) = FaceType::new(&t, &parts, &omega) {
            return f;
        }
    }
}

/// A random input for the flow pipeline: a skew form on `Z^d`, `r` nonzero
/// nonnegative parts, and an integer `θ` with `<θ, γ> = 0`, all passing
/// `validate_inputs`. `θ` is not checked for genericity.
pub fn random_flow_instance(
    rng: &mut SplitMix64,
    max_d: usize,
    max_r: usize,
) -> (SkewForm, Vec<DimVec>, Covector) {
    assert!(max_d >= 2 && max_r >= 2);
    loop {
        let d = 2 + below(rng, (max_d - 1) as u64) as usize;
        let r = 2 + below(rng, (max_r - 1) as u64) as usize;
        let omega = random_skew_form(rng, d, 3);
        let parts: Vec<DimVec> = (0..r)
            .map(|_| DimVec::new((0..d).map(|_| in_range(rng, 0, 2)).collect()))
            .collect();
        if parts.iter().any(DimVec::is_zero) {
            continue;
        }
        let gamma = parts.iter().fold(DimVec::zero(d), |a, p| &a + p);
        let c: Vec<i64> = (0..d).map(|_| in_range(rng, -3, 3)).collect();
        let norm: i64 = gamma.entries().iter().map(|x| x * x).sum();
        let dot: i64 = gamma.entries().iter().zip(&c).map(|(a, b)| a * b).sum();
        let theta: Vec<i64> = c
            .iter()
            .zip(gamma.entries())
            .map(|(ci, gi)| norm * ci - dot * gi)
            .collect();
        if theta.iter().all(|&x| x == 0) {
            continue;
        }
        let theta = Covector::from_ints(&theta);
        if validate_inputs(&omega, &theta, &parts).is_ok() {
            return (omega, parts, theta);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn random_trees_cover_all_shapes() {
        let mut rng = SplitMix64::new(3);
        let mut seen = BTreeMap::new();
        for _ in 0..3000 {
            *seen.entry(random_binary_tree(&mut rng, 4).encode()).or_insert(0) += 1;
        }
        assert_eq!(seen.len(), 15);
        assert!(seen.values().all(|&n| n > 100));
    }

    #[test]
    fn faces_are_valid() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..50 {
            let f = random_valid_face(&mut rng, 5, 6);
            assert!(f.is_trivalent());
            assert!((2..=5).contains(&f.dim()));
            assert!((2..=6).contains(&f.parts().len()));
        }
    }
}
