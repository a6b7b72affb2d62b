/// Growable Fenwick tree over non-negative weights with exact
/// proportional sampling.
#[derive(Clone, Debug, Default)]
pub(crate) struct WeightedSampler {
    // 1-based Fenwick array; tree[0] unused
    tree: Vec<f64>,
    weights: Vec<f64>,
    total: f64,
}

#[inline]
fn lowbit(i: usize) -> usize {
    i & i.wrapping_neg()
}

impl WeightedSampler {
    pub(crate) fn new() -> Self {
        WeightedSampler {
            tree: vec![0.0],
            weights: Vec::new(),
            total: 0.0,
        }
    }

    pub(crate) fn total(&self) -> f64 {
        self.total
    }

    pub(crate) fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    fn prefix(&self, mut i: usize) -> f64 {
        let mut s = 0.0;
        while i > 0 {
            s += self.tree[i];
            i -= lowbit(i);
        }
        s
    }

    pub(crate) fn push(&mut self, weight: f64) {
        debug_assert!(weight >= 0.0);
        let i = self.weights.len() + 1;
        let node = weight + self.prefix(i - 1) - self.prefix(i - lowbit(i));
        self.tree.push(node);
        self.weights.push(weight);
        self.total += weight;
    }

    pub(crate) fn set(&mut self, idx: usize, weight: f64) {
        debug_assert!(weight >= 0.0);
        let delta = weight - self.weights[idx];
        self.weights[idx] = weight;
        self.total += delta;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += lowbit(i);
        }
    }

    /// Index of the item whose cumulative-weight interval contains `r`,
    /// skipping zero-weight items.
    pub(crate) fn find(&self, r: f64) -> usize {
        let n = self.weights.len();
        let mut pos = 0;
        let mut rem = r;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            step >>= 1;
        }
        // float drift can land past the last positive weight
        let mut idx = pos.min(n - 1);
        while self.weights[idx] <= 0.0 && idx > 0 {
            idx -= 1;
        }
        while self.weights[idx] <= 0.0 && idx + 1 < n {
            idx += 1;
        }
        idx
    }

    #[cfg(test)]
    pub(crate) fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if !(self.total > 0.0) || self.weights.is_empty() {
            return None;
        }
        Some(self.find(rng.random::<f64>() * self.total))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prefix_sums_track_updates() {
        let mut s = WeightedSampler::new();
        for w in [1.0, 0.0, 3.0, 2.0, 0.5] {
            s.push(w);
        }
        s.set(1, 4.0);
        s.set(3, 0.0);
        let expected = [1.0, 4.0, 3.0, 0.0, 0.5];
        let mut acc = 0.0;
        for (i, w) in expected.iter().enumerate() {
            acc += w;
            assert!((s.prefix(i + 1) - acc).abs() < 1e-12);
        }
        assert!((s.total() - 8.5).abs() < 1e-12);
        assert_eq!(s.find(0.5), 0);
        assert_eq!(s.find(1.0), 1);
        assert_eq!(s.find(7.9), 2);
        assert_eq!(s.find(8.2), 4);
    }

    #[test]
    fn sampling_frequencies() {
        let mut s = WeightedSampler::new();
        for w in [4.0, 2.0, 0.0, 2.0] {
            s.push(w);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut counts = [0usize; 4];
        for _ in 0..80_000 {
            counts[s.sample(&mut rng).unwrap()] += 1;
        }
        assert_eq!(counts[2], 0);
        assert!((counts[0] as f64 / 80_000.0 - 0.5).abs() < 0.01);
        assert!((counts[3] as f64 / 80_000.0 - 0.25).abs() < 0.01);
    }
}
