//! Independent reference values used to cross-check the main pipeline.
//!
//! Nothing here calls into `exactlin` beyond its `Order` type: the cokernel
//! is counted by brute force over residue classes, with its own elimination.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::dt::binomial;
use crate::exactlin::Order;

/// Most residue classes the search will visit.
pub const RESIDUE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("residue search exceeded {RESIDUE_CAP} elements")]
    Overflow,
    #[error("vectors have inconsistent lengths")]
    Shape,
    #[error("no reference value for m = {m}, k = {k}")]
    OutOfRange { m: u32, k: u32 },
}

/// Order of `Z^m / (im A + span(relations))`, where `map` lists the rows of
/// `A` and each relation is a vector of `Z^m`.
///
/// The image is put in triangular form by its own gcd elimination, which
/// gives a canonical representative for every residue class. A breadth-first
/// search from `0` along the unit vectors then visits each class once.
pub fn brute_cokernel(map: &[Vec<i64>], relations: &[Vec<i64>]) -> Result<Order, OracleError> {
    let m = map.len();
    let n = map.first().map_or(0, Vec::len);
    if map.iter().any(|r| r.len() != n) || relations.iter().any(|r| r.len() != m) {
        return Err(OracleError::Shape);
    }
    let mut gens: Vec<Vec<BigInt>> = (0..n)
        .map(|j| map.iter().map(|r| BigInt::from(r[j])).collect())
        .collect();
    gens.extend(relations.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()));

    let Some(basis) = triangular_basis(gens, m) else {
        return Ok(Order::Infinite);
    };
    let reduce = |mut v: Vec<BigInt>| -> Vec<BigInt> {
        for (i, row) in basis.iter().enumerate() {
            let q = v[i].div_floor(&row[i]);
            if !q.is_zero() {
                for (x, b) in v.iter_mut().zip(row) {
                    *x -= &q * b;
                }
            }
        }
        v
    };

    let start = vec![BigInt::zero(); m];
    let mut seen: HashSet<Vec<BigInt>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for j in 0..m {
            let mut w = v.clone();
            w[j] += 1;
            let w = reduce(w);
            if seen.insert(w.clone()) {
                if seen.len() > RESIDUE_CAP {
                    return Err(OracleError::Overflow);
                }
                queue.push_back(w);
            }
        }
    }
    Ok(Order::Finite(BigInt::from(seen.len())))
}

/// Upper triangular basis with positive diagonal for the span of `gens`, or
/// `None` when the span has rank below `m`.
fn triangular_basis(mut gens: Vec<Vec<BigInt>>, m: usize) -> Option<Vec<Vec<BigInt>>> {
    let mut basis = Vec::with_capacity(m);
    for col in 0..m {
        // Euclid on column `col` across all remaining generators.
        loop {
            gens.retain(|g| g.iter().any(|x| !x.is_zero()));
            let p = gens
                .iter()
                .enumerate()
                .filter(|(_, g)| !g[col].is_zero())
                .min_by_key(|(_, g)| g[col].abs())
                .map(|(i, _)| i)?;
            let pivot = gens.swap_remove(p);
            let mut done = true;
            for g in gens.iter_mut() {
                let q = g[col].div_floor(&pivot[col]);
                if !q.is_zero() {
                    for (x, b) in g.iter_mut().zip(&pivot) {
                        *x -= &q * b;
                    }
                }
                if !g[col].is_zero() {
                    done = false;
                }
            }
            if done {
                let pivot = if pivot[col].is_negative() {
                    pivot.iter().map(|x| -x).collect()
                } else {
                    pivot
                };
                basis.push(pivot);
                break;
            }
            gens.push(pivot);
        }
    }
    Some(basis)
}

/// `Ω(1, k)` for the `m`-Kronecker quiver in the nonempty chamber: the Euler
/// characteristic of `Gr(k, m)`.
pub fn kronecker_known(m: u32, k: u32) -> Result<BigInt, OracleError> {
    if m > 6 || k > m {
        return Err(OracleError::OutOfRange { m, k });
    }
    Ok(binomial(u64::from(m), u64::from(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{cokernel_order, IntMatrix};
    use proptest::prelude::*;

    fn fin(n: i64) -> Order {
        Order::Finite(BigInt::from(n))
    }

    #[test]
    fn small_cokernels() {
        assert_eq!(brute_cokernel(&[vec![2, 0], vec![0, 3]], &[]).unwrap(), fin(6));
        assert_eq!(brute_cokernel(&[vec![2, 4]], &[]).unwrap(), fin(2));
        assert_eq!(brute_cokernel(&[vec![2], vec![0]], &[]).unwrap(), Order::Infinite);
        assert_eq!(brute_cokernel(&[vec![2], vec![0]], &[vec![0, 5]]).unwrap(), fin(10));
        assert_eq!(brute_cokernel(&[vec![4, 6], vec![6, 4]], &[]).unwrap(), fin(20));
        assert_eq!(brute_cokernel(&[vec![1, 0], vec![0, 1]], &[]).unwrap(), fin(1));
    }

    #[test]
    fn worked_gluing_matrix() {
        use crate::flowtree::LabeledTree;
        use crate::quiver::{DimVec, SkewForm};
        use crate::tropical::{gluing_matrix, FaceType};
        let t = LabeledTree::pair(
            LabeledTree::pair(LabeledTree::Leaf(0), LabeledTree::Leaf(1)),
            LabeledTree::Leaf(2),
        );
        let parts: Vec<DimVec> = [[1, 0], [0, 1], [0, 1]].iter().map(|v| DimVec::new(v.to_vec())).collect();
        let g = gluing_matrix(&FaceType::new(&t, &parts, &SkewForm::kronecker(2)).unwrap());
        let rows: Vec<Vec<i64>> = (0..g.rows())
            .map(|i| (0..4).map(|j| i64::try_from(&g[(i, j)]).unwrap()).collect())
            .collect();
        let relation: Vec<i64> = g.column(4).iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(relation[..2], [2, -2]);
        assert_eq!(brute_cokernel(&rows, &[relation]).unwrap(), fin(2));
    }

    #[test]
    fn overflow_is_reported() {
        let big = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let scaled: Vec<Vec<i64>> = big.iter().map(|r| r.iter().map(|x| x * 10_007).collect()).collect();
        assert_eq!(brute_cokernel(&scaled, &[vec![1, 0, 0]]), Err(OracleError::Overflow));
    }

    #[test]
    fn kronecker_table() {
        assert_eq!(kronecker_known(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(kronecker_known(6, 3).unwrap(), BigInt::from(20));
        assert!(kronecker_known(7, 1).is_err());
        assert!(kronecker_known(2, 3).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_smith_form(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 2..=3)) {
            let m = IntMatrix::from_rows(3, &rows);
            let brute = brute_cokernel(&rows, &[]);
            if let Ok(b) = brute {
                prop_assert_eq!(b, cokernel_order(&m));
            }
        }
    }
}
