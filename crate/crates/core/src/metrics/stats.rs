use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation (n - 1 denominator).
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

pub fn standard_error(xs: &[f64]) -> Option<f64> {
    Some(std_dev(xs)? / (xs.len() as f64).sqrt())
}

/// Nearest-rank percentile, `q` in [0, 1].
pub fn percentile(xs: &[f64], q: f64) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    Some(v[rank - 1])
}

/// Ranks starting at 1, ties given their average rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let mx = mean(xs)?;
    let my = mean(ys)?;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let denom = (sxx * syy).sqrt();
    (denom > 0.0).then(|| sxy / denom)
}

/// Spearman rank correlation; `None` when either side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    pearson(&ranks(xs), &ranks(ys))
}

/// One-sided permutation test of `mean(a) < mean(b)`. Returns
/// `(1 + #{permutations with mean(b') - mean(a') ≥ observed}) / (1 + n_perm)`.
pub fn permutation_test_one_sided(sample_a: &[f64], sample_b: &[f64], n_perm: usize, rng_seed: u64) -> Result<f64> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::Undefined("permutation test of an empty sample"));
    }
    let na = sample_a.len();
    let mean_of = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let observed = mean_of(sample_b) - mean_of(sample_a);
    let mut pooled: Vec<f64> = sample_a.iter().chain(sample_b).copied().collect();
    let scale = pooled.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let tol = 1e-12 * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut hits = 0usize;
    for _ in 0..n_perm {
        pooled.shuffle(&mut rng);
        let (a, b) = pooled.split_at(na);
        if mean_of(b) - mean_of(a) >= observed - tol {
            hits += 1;
        }
    }
    Ok((1 + hits) as f64 / (1 + n_perm) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn spearman_cases() {
        assert_abs_diff_eq!(spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 40.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 1.0, 0.0]).unwrap(), -1.0);
        assert_eq!(spearman(&[1.0, 2.0], &[5.0, 5.0]), None);
        // ties: ranks (1.5, 1.5, 3) vs (1, 2, 3)
        assert_abs_diff_eq!(
            spearman(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap(),
            0.866_025_403_784_438_6,
            epsilon = 1e-12
        );
    }

    #[test]
    fn summary_stats() {
        assert_abs_diff_eq!(std_dev(&[1.0, 3.0]).unwrap(), 2f64.sqrt());
        assert_eq!(percentile(&[5.0, 1.0, 3.0, 2.0, 4.0], 0.99), Some(5.0));
        assert_eq!(percentile(&[5.0, 1.0, 3.0, 2.0, 4.0], 0.4), Some(2.0));
        assert_eq!(mean(&[]), None);
    }

    #[test]
    fn permutation_examples() {
        let same = [0.3; 10];
        assert_abs_diff_eq!(permutation_test_one_sided(&same, &same, 1000, 1).unwrap(), 1.0);
        let p = permutation_test_one_sided(&[0.01; 10], &[0.9; 10], 10_000, 1).unwrap();
        assert!(p <= 0.001, "{p}");
        let sym = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
        let p = permutation_test_one_sided(&sym, &sym, 10_000, 3).unwrap();
        assert!((p - 0.5).abs() < 0.1, "{p}");
        assert!(permutation_test_one_sided(&[], &[1.0], 100, 0).is_err());
    }
}
