use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::hnf::hermite_basis;
use super::snf::{invariant_factors, smith_normal_form};
use super::{ExactLinError, IntMatrix};

/// Order of a finitely generated abelian group that is either finite or
/// has positive free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => crate::json::serialize_bigint(n, s),
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// A sublattice of `Z^ambient_rank` given by (possibly dependent) generators.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient_rank: usize,
    generators: Vec<Vec<BigInt>>,
}

impl Sublattice {
    pub fn new(ambient_rank: usize, generators: Vec<Vec<BigInt>>) -> Self {
        for g in &generators {
            assert_eq!(g.len(), ambient_rank, "generator outside the ambient lattice");
        }
        Sublattice {
            ambient_rank,
            generators,
        }
    }

    pub fn from_i64(ambient_rank: usize, generators: &[Vec<i64>]) -> Self {
        Self::new(
            ambient_rank,
            generators.iter().map(|g| super::matrix::to_big(g)).collect(),
        )
    }

    pub fn zero(ambient_rank: usize) -> Self {
        Self::new(ambient_rank, Vec::new())
    }

    pub fn full(ambient_rank: usize) -> Self {
        let gens = (0..ambient_rank)
            .map(|i| {
                (0..ambient_rank)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self::new(ambient_rank, gens)
    }

    /// The orthogonal complement `{x : <x, v> = 0}` of a single vector.
    pub fn orthogonal_to(v: &[BigInt]) -> Self {
        let m = IntMatrix::from_big_rows(v.len(), &[v.to_vec()]);
        kernel_basis(&m)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Matrix with the generators as columns.
    pub fn generator_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient_rank, &self.generators)
    }

    pub fn rank(&self) -> usize {
        super::snf::rank(&self.generator_matrix())
    }

    /// Canonical basis (row-style Hermite normal form).
    pub fn hnf_basis(&self) -> Vec<Vec<BigInt>> {
        hermite_basis(self.ambient_rank, &self.generators)
    }

    pub fn normalized(&self) -> Sublattice {
        Sublattice::new(self.ambient_rank, self.hnf_basis())
    }

    pub fn same_lattice(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank && self.hnf_basis() == other.hnf_basis()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_sublattice_of(&self, other: &Sublattice) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// Integer coordinates of `v` with respect to the Hermite basis, if `v`
    /// lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank);
        let basis = self.hnf_basis();
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(basis.len());
        for b in &basis {
            let col = b.iter().position(|x| !x.is_zero()).expect("zero basis row");
            let (q, r) = rest[col].div_rem(&b[col]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(b) {
                *x -= y * &q;
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// Lattice sum `self + other`.
    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Sublattice::new(self.ambient_rank, gens)
    }

    pub fn with_generator(&self, v: Vec<BigInt>) -> Sublattice {
        let mut gens = self.generators.clone();
        gens.push(v);
        Sublattice::new(self.ambient_rank, gens)
    }

    /// Lattice intersection, computed from the integer relations between
    /// the two generating sets.
    pub fn intersect(&self, other: &Sublattice) -> Sublattice {
        assert_eq!(self.ambient_rank, other.ambient_rank);
        let n = self.ambient_rank;
        let a = self.generators.len();
        let mut cols = self.generators.clone();
        cols.extend(
            other
                .generators
                .iter()
                .map(|g| g.iter().map(|x| -x).collect::<Vec<_>>()),
        );
        let m = IntMatrix::from_columns(n, &cols);
        let relations = kernel_basis(&m);
        let gens = relations
            .generators
            .iter()
            .map(|rel| {
                let mut v = vec![BigInt::zero(); n];
                for (c, g) in rel[..a].iter().zip(&self.generators) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(g) {
                        *x += c * y;
                    }
                }
                v
            })
            .collect();
        Sublattice::new(n, gens).normalized()
    }
}

/// Lattice equality, not generator-list equality.
impl PartialEq for Sublattice {
    fn eq(&self, other: &Self) -> bool {
        self.same_lattice(other)
    }
}

impl Eq for Sublattice {}

/// Basis of the (automatically saturated) integer kernel `{x : m x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> Sublattice {
    let s = smith_normal_form(m);
    let gens = (s.rank..m.cols()).map(|j| s.right.column(j)).collect();
    Sublattice::new(m.cols(), gens)
}

/// `|Z^rows / im(m)|`.
pub fn cokernel_order(m: &IntMatrix) -> Order {
    let factors = invariant_factors(m);
    if factors.len() < m.rows() {
        return Order::Infinite;
    }
    Order::Finite(factors.iter().product())
}

/// `|Z^b / (im(map) + span(relations))|`.
pub fn quotient_cokernel_order(map: &IntMatrix, relations: &[Vec<BigInt>]) -> Order {
    let rel = IntMatrix::from_columns(map.rows(), relations);
    cokernel_order(&map.hconcat(&rel))
}

/// `(L ⊗ Q) ∩ Z^n` as a basis.
pub fn saturate(s: &Sublattice) -> Sublattice {
    let n = s.ambient_rank();
    if s.generators().is_empty() {
        return Sublattice::zero(n);
    }
    let rows = IntMatrix::from_big_rows(n, s.generators());
    let perp = kernel_basis(&rows);
    if perp.generators().is_empty() {
        return Sublattice::full(n);
    }
    let perp_rows = IntMatrix::from_big_rows(n, perp.generators());
    kernel_basis(&perp_rows)
}

/// `|L^sat / L|`, the product of the nonzero invariant factors of the
/// generator matrix.
pub fn index_in_saturation(s: &Sublattice) -> Result<BigInt, ExactLinError> {
    let factors = invariant_factors(&s.generator_matrix());
    if factors.is_empty() {
        return Err(ExactLinError::ZeroLattice);
    }
    Ok(factors.iter().product())
}

/// `|Z^n / (a + b)|`.
pub fn lattice_sum_index(a: &Sublattice, b: &Sublattice) -> Order {
    assert_eq!(a.ambient_rank(), b.ambient_rank(), "ambient rank mismatch");
    cokernel_order(&a.sum(b).generator_matrix())
}

/// `|outer / inner|` for `inner ⊆ outer`; infinite when the ranks differ.
pub fn relative_index(outer: &Sublattice, inner: &Sublattice) -> Result<Order, ExactLinError> {
    let basis = outer.hnf_basis();
    let coords = inner
        .generators()
        .iter()
        .map(|g| outer.coordinates(g).ok_or(ExactLinError::NotContained))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(cokernel_order(&IntMatrix::from_columns(basis.len(), &coords)))
}

/// gcd of the entries of a nonzero vector.
pub fn divisibility(v: &[BigInt]) -> Result<BigInt, ExactLinError> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        Err(ExactLinError::ZeroVector)
    } else {
        Ok(g.abs())
    }
}

pub fn divisibility_i64(v: &[i64]) -> Result<i64, ExactLinError> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        Err(ExactLinError::ZeroVector)
    } else {
        Ok(g.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::to_big;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn cokernel_examples() {
        let m = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(cokernel_order(&m), Order::Finite(big(6)));
        assert_eq!(cokernel_order(&IntMatrix::identity(3)), Order::Finite(big(1)));
        // Z^1 -> Z^2 padded with zeros cannot be surjective over Q
        let m = IntMatrix::from_rows(1, &[vec![1], vec![0]]);
        assert_eq!(cokernel_order(&m), Order::Infinite);
        // map onto Z^0
        assert_eq!(cokernel_order(&IntMatrix::zeros(0, 3)), Order::Finite(big(1)));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(2, &[vec![1, 1]]));
        assert!(k.same_lattice(&Sublattice::from_i64(2, &[vec![1, -1]])));
        assert!(kernel_basis(&IntMatrix::identity(2)).generators().is_empty());
        let k = kernel_basis(&IntMatrix::from_rows(2, &[vec![2, -2]]));
        assert!(k.same_lattice(&Sublattice::from_i64(2, &[vec![1, 1]])));
    }

    #[test]
    fn saturate_examples() {
        let s = saturate(&Sublattice::from_i64(2, &[vec![2, 4]]));
        assert!(s.same_lattice(&Sublattice::from_i64(2, &[vec![1, 2]])));
        let s = saturate(&Sublattice::from_i64(2, &[vec![1, 0], vec![0, 1]]));
        assert!(s.same_lattice(&Sublattice::full(2)));
        let s = saturate(&Sublattice::from_i64(2, &[vec![2, -2], vec![1, 0]]));
        assert!(s.same_lattice(&Sublattice::full(2)));
    }

    #[test]
    fn index_examples() {
        assert_eq!(
            index_in_saturation(&Sublattice::from_i64(2, &[vec![-4, 2]])).unwrap(),
            big(2)
        );
        assert_eq!(index_in_saturation(&Sublattice::full(4)).unwrap(), big(1));
        assert_eq!(
            index_in_saturation(&Sublattice::from_i64(2, &[vec![2, -2], vec![1, 0]])).unwrap(),
            big(2)
        );
        assert_eq!(
            index_in_saturation(&Sublattice::from_i64(2, &[vec![0, 0]])),
            Err(ExactLinError::ZeroLattice)
        );
    }

    #[test]
    fn sum_index_examples() {
        let a = Sublattice::from_i64(2, &[vec![0, 1]]);
        let b = Sublattice::from_i64(2, &[vec![-2, 1]]);
        assert_eq!(lattice_sum_index(&a, &b), Order::Finite(big(2)));
        let a = Sublattice::from_i64(2, &[vec![1, 0]]);
        let b = Sublattice::from_i64(2, &[vec![0, 1]]);
        assert_eq!(lattice_sum_index(&a, &b), Order::Finite(big(1)));
        let b = Sublattice::from_i64(2, &[vec![2, 0]]);
        assert_eq!(lattice_sum_index(&a, &b), Order::Infinite);
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(divisibility(&to_big(&[-4, 2])).unwrap(), big(2));
        assert_eq!(divisibility(&to_big(&[2, 4, 6])).unwrap(), big(2));
        assert_eq!(divisibility(&to_big(&[1, 0, 0])).unwrap(), big(1));
        assert_eq!(divisibility(&to_big(&[0, 0])), Err(ExactLinError::ZeroVector));
    }

    #[test]
    fn quotient_cokernel_examples() {
        assert_eq!(
            quotient_cokernel_order(&IntMatrix::identity(2), &[]),
            Order::Finite(big(1))
        );
        assert_eq!(
            quotient_cokernel_order(&IntMatrix::zeros(2, 0), &[to_big(&[2, -2])]),
            Order::Infinite
        );
    }

    #[test]
    fn intersection_and_relative_index() {
        let a = Sublattice::from_i64(3, &[vec![1, 0, 0], vec![0, 2, 0]]);
        let b = Sublattice::from_i64(3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersect(&b);
        assert!(i.same_lattice(&Sublattice::from_i64(3, &[vec![0, 2, 0]])));
        let outer = Sublattice::from_i64(3, &[vec![0, 1, 0]]);
        assert_eq!(relative_index(&outer, &i).unwrap(), Order::Finite(big(2)));
        assert_eq!(
            relative_index(&i, &outer),
            Err(ExactLinError::NotContained)
        );
    }

    fn small_lattice() -> impl proptest::strategy::Strategy<Value = Sublattice> {
        proptest::collection::vec(proptest::collection::vec(-5i64..=5, 3), 1..=4)
            .prop_filter("nonzero", |g| g.iter().any(|v| v.iter().any(|&x| x != 0)))
            .prop_map(|g| Sublattice::from_i64(3, &g))
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn saturation_is_idempotent(l in small_lattice()) {
            let s = saturate(&l);
            prop_assert!(saturate(&s).same_lattice(&s));
            prop_assert!(l.is_sublattice_of(&s));
            prop_assert_eq!(s.rank(), l.rank());
        }

        #[test]
        fn saturation_index_factors(l in small_lattice()) {
            let s = saturate(&l);
            let idx = index_in_saturation(&l).unwrap();
            prop_assert_eq!(relative_index(&s, &l).unwrap(), Order::Finite(idx.clone()));
            // |Z^n / L| = |Z^n / L^sat| · |L^sat / L|, both sides infinite below full rank.
            let whole = quotient_cokernel_order(&IntMatrix::zeros(3, 0), l.generators());
            let outer = quotient_cokernel_order(&IntMatrix::zeros(3, 0), s.generators());
            match (whole, outer) {
                (Order::Finite(w), Order::Finite(o)) => prop_assert_eq!(w, o * idx),
                (w, o) => { prop_assert!(!w.is_finite()); prop_assert!(!o.is_finite()); }
            }
        }
    }
}

