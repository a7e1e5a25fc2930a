use std::ops::Add;

const BASE_BLOCK: usize = 8;

/// Pairwise (cascade) summation in fixed index order.
///
/// The result depends only on the order of `terms`, never on how the caller
/// produced them, so parallel producers that collect into a `Vec` first get
/// bit-identical totals.
pub fn pairwise_sum<V>(terms: &[V]) -> V
where
    V: Copy + Add<Output = V> + num_traits::Zero,
{
    if terms.len() <= BASE_BLOCK {
        return terms.iter().fold(V::zero(), |acc, &x| acc + x);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}
