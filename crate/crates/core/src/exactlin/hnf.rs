use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Row-style Hermite normal form of the lattice spanned by `generators`
/// (each of length `n`). Returns the nonzero rows: echelon shape, positive
/// pivots, and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_basis(n: usize, generators: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for g in &rows {
        assert_eq!(g.len(), n, "generator of wrong length");
    }
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let pivot = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(p) = pivot else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                sub_multiple(&mut rows, i, r, &q);
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            for k in 0..r {
                let q = rows[k][col].div_floor(&rows[r][col]);
                sub_multiple(&mut rows, k, r, &q);
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn sub_multiple(rows: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= y * q;
        }
    }
}
