//! Fixtures shared by the benchmarks.

use nine_fields::{Field, QuadInt, WeierstrassModel};

/// A deterministic spread of elements with coordinates in `[-r, r]`.
pub fn sample_elements(k: Field, r: i64) -> Vec<QuadInt> {
    (-r..=r).flat_map(|x| (-r..=r).map(move |y| k.elt(x, y))).collect()
}

/// Curves with a few bad primes each, for the reduction benchmarks.
pub fn sample_curves(k: Field) -> Vec<WeierstrassModel> {
    [
        [0, -1, 1, -10, -20],
        [0, -1, 1, 0, 0],
        [1, 0, 1, 4, -6],
        [0, 1, 1, -9, -15],
        [0, 0, 1, -2, 1],
        [1, -1, 1, -3, 3],
    ]
    .into_iter()
    .map(|a| WeierstrassModel::from_ints(k, a))
    .collect()
}
