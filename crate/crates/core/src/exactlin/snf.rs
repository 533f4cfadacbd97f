//! Smith normal form over the integers.
//!
//! Elimination always pivots on an entry of minimal absolute value and
//! reduces with nearest-integer quotients, so every remainder is at most
//! half the pivot. This keeps entry growth modest on the sparse, small-entry
//! matrices produced by gluing maps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `left · m · right = diag(diagonal)` with `diagonal[i] | diagonal[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Length `min(rows, cols)`; nonzero entries first, trailing zeros after.
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero invariant factors.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diagonal[..self.rank]
    }

    /// The diagonal matrix with the same shape as the input.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let mut left = IntMatrix::identity(m.rows());
    let mut right = IntMatrix::identity(m.cols());
    let rank = reduce(&mut a, Some((&mut left, &mut right)));
    let n = m.rows().min(m.cols());
    let diagonal = (0..n).map(|i| a[(i, i)].clone()).collect();
    SmithForm {
        diagonal,
        left,
        right,
        rank,
    }
}

/// Nonzero invariant factors without tracking transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let rank = reduce(&mut a, None);
    (0..rank).map(|i| a[(i, i)].clone()).collect()
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// round(a / p) for p > 0, ties toward +infinity.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + p).div_floor(&(p * &two))
}

struct Ops<'a> {
    a: &'a mut IntMatrix,
    t: Option<(&'a mut IntMatrix, &'a mut IntMatrix)>,
}

impl Ops<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some((l, _)) = self.t.as_mut() {
            l.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some((_, r)) = self.t.as_mut() {
            r.swap_cols(i, j);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        if let Some((l, _)) = self.t.as_mut() {
            l.add_row_multiple(dst, src, q);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        if let Some((_, r)) = self.t.as_mut() {
            r.add_col_multiple(dst, src, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some((l, _)) = self.t.as_mut() {
            l.negate_row(i);
        }
    }
}

/// Reduces `a` in place to Smith form, returning the rank.
fn reduce(a: &mut IntMatrix, transforms: Option<(&mut IntMatrix, &mut IntMatrix)>) -> usize {
    let rows = a.rows();
    let cols = a.cols();
    let mut ops = Ops { a, t: transforms };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(ops.a, t) else {
            break;
        };
        ops.swap_rows(t, pi);
        ops.swap_cols(t, pj);
        loop {
            if ops.a[(t, t)].is_negative() {
                ops.negate_row(t);
            }
            clear_cross(&mut ops, t);
            // Divisibility: every remaining entry must be a multiple of the pivot.
            let p = ops.a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !ops.a[(i, j)].is_multiple_of(&p))
            });
            match bad {
                Some(i) => ops.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        t += 1;
    }
    t
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let done = ax.is_one();
                best = Some((i, j, ax));
                if done {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Zeroes row `t` and column `t` outside the pivot, moving any smaller
/// remainder into the pivot position until the pivot divides the cross.
fn clear_cross(ops: &mut Ops<'_>, t: usize) {
    let rows = ops.a.rows();
    let cols = ops.a.cols();
    loop {
        if ops.a[(t, t)].is_negative() {
            ops.negate_row(t);
        }
        let p = ops.a[(t, t)].clone();
        for i in t + 1..rows {
            if !ops.a[(i, t)].is_zero() {
                let q = nearest_quotient(&ops.a[(i, t)], &p);
                ops.add_row(i, t, &-q);
            }
        }
        for j in t + 1..cols {
            if !ops.a[(t, j)].is_zero() {
                let q = nearest_quotient(&ops.a[(t, j)], &p);
                ops.add_col(j, t, &-q);
            }
        }
        // Remainders are strictly smaller than the pivot in absolute value.
        let mut best: Option<(bool, usize, BigInt)> = None;
        for i in t + 1..rows {
            let x = ops.a[(i, t)].abs();
            if !x.is_zero() && best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((true, i, x));
            }
        }
        for j in t + 1..cols {
            let x = ops.a[(t, j)].abs();
            if !x.is_zero() && best.as_ref().is_none_or(|(_, _, b)| x < *b) {
                best = Some((false, j, x));
            }
        }
        match best {
            None => return,
            Some((true, i, _)) => ops.swap_rows(t, i),
            Some((false, j, _)) => ops.swap_cols(t, j),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .diagonal
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    fn check_reconstruction(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal_matrix());
        assert!(s.left.determinant().abs().is_one());
        assert!(s.right.determinant().abs().is_one());
        for w in s.diagonal.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                // zeros only trail
            }
        }
    }

    #[test]
    fn diag_2_3() {
        let m = IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(diag(&m), vec![1, 6]);
        check_reconstruction(&m);
    }

    #[test]
    fn identity() {
        assert_eq!(diag(&IntMatrix::identity(2)), vec![1, 1]);
    }

    #[test]
    fn two_four_six_eight() {
        let m = IntMatrix::from_rows(2, &[vec![2, 4], vec![6, 8]]);
        assert_eq!(diag(&m), vec![2, 4]);
        check_reconstruction(&m);
    }

    #[test]
    fn rectangular_and_zero() {
        let m = IntMatrix::from_rows(3, &[vec![0, 0, 0], vec![4, 6, 0]]);
        assert_eq!(diag(&m), vec![2, 0]);
        check_reconstruction(&m);
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(diag(&z), vec![0, 0]);
        let empty = IntMatrix::zeros(0, 3);
        assert!(diag(&empty).is_empty());
    }

    #[test]
    fn divisibility_fixup() {
        // diag(4, 6) -> (2, 12)
        let m = IntMatrix::from_rows(2, &[vec![4, 0], vec![0, 6]]);
        assert_eq!(diag(&m), vec![2, 12]);
        check_reconstruction(&m);
    }

    proptest::proptest! {
        #[test]
        fn reconstruction_on_random_matrices(
            rows in proptest::collection::vec(proptest::collection::vec(-6i64..=6, 4), 1..=5)
        ) {
            let m = IntMatrix::from_rows(4, &rows);
            check_reconstruction(&m);
            proptest::prop_assert_eq!(invariant_factors(&m).len(), rank(&m));
        }
    }
}
