//! Fixed-tree pairwise reduction.
//!
//! The tree depends only on the number of terms, so every reduction in the
//! crate is bit-reproducible.

const LEAF: usize = 32;

/// Pairwise sum of `term(i)` for `i` in `0..n`.
pub fn pairwise_sum_by(n: usize, term: &mut impl FnMut(usize) -> f64) -> f64 {
    sum_range(0, n, term)
}

fn sum_range(lo: usize, hi: usize, term: &mut impl FnMut(usize) -> f64) -> f64 {
    if hi - lo <= LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += term(i);
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    sum_range(lo, mid, term) + sum_range(mid, hi, term)
}

pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), &mut |i| values[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_exactly_representable_values() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn beats_naive_accumulation() {
        let v = vec![0.1; 1 << 20];
        let exact = 0.1 * (1 << 20) as f64;
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - exact).abs() <= (naive - exact).abs());
    }
}
