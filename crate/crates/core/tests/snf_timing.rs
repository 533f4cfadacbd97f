use std::time::{Duration, Instant};

use quiver_dt::exactlin::{smith_normal_form, IntMatrix};
use quiver_dt::flowtree::SplitMix64;

/// Banded matrix with a few random off-band entries, like a gluing map.
fn sparse(n: usize, seed: u64) -> IntMatrix {
    let mut rng = SplitMix64::new(seed);
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 1 + (rng.next_u64() % 3) as i64;
        if i + 1 < n {
            row[i + 1] = -1;
        }
        let j = (rng.next_u64() % n as u64) as usize;
        row[j] += (rng.next_u64() % 5) as i64 - 2;
    }
    IntMatrix::from_rows(n, &rows)
}

#[test]
fn sparse_200_by_200_under_one_second() {
    let m = sparse(200, 99);
    let start = Instant::now();
    let s = smith_normal_form(&m);
    let elapsed = start.elapsed();
    assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal_matrix());
    println!("200x200 SNF: {elapsed:?}, rank {}", s.rank);
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
}
