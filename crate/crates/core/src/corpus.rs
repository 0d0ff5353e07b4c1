//! Reproducible random metric spaces: a random symmetric positive integer
//! matrix replaced by its shortest-path closure.

use alloc::string::ToString;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::FiniteMetricSpace;
use crate::rational::int;

/// Random metric on `n` points with raw weights drawn from `1..=max_weight`.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, max_weight: u32) -> FiniteMetricSpace {
    let mut w = alloc::vec![alloc::vec![0u64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = u64::from(rng.random_range(1..=max_weight.max(1)));
            w[i][j] = x;
            w[j][i] = x;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i][k] + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    let dist = w.iter().map(|r| r.iter().map(|&x| int(x as i64)).collect()).collect();
    FiniteMetricSpace::new(labels, dist).expect("shortest-path closure is a metric")
}

/// `count` spaces with point counts cycling through `sizes`, derived from one seed.
pub fn corpus(seed: u64, count: usize, sizes: &[usize], max_weight: u32) -> Vec<FiniteMetricSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_metric(&mut rng, sizes[i % sizes.len()], max_weight)).collect()
}
