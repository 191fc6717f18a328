//! Offline clustering of whole samples by generating distribution.
//!
//! The `κ` centers are chosen by farthest-first traversal starting from the
//! first sample, and every other sample joins its nearest center. Only
//! distances to centers are ever computed: at most `κN` of them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{distance, Truncation};
use crate::error::{Error, Result};
use crate::sample::{common_alphabet, Sample};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    /// `assignment[i]` is the cluster of sample `i`, in `0..κ`.
    pub assignment: Vec<usize>,
    /// `centers[c]` is the sample at the center of cluster `c`.
    pub centers: Vec<usize>,
    pub distance_evaluations: usize,
}

impl Clustering {
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.centers.len()];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

/// Partitions `samples` into `k` clusters. Ties in both the farthest-point
/// and the nearest-center choice go to the lowest index.
pub fn cluster_offline(samples: &[Sample], k: usize, t: &Truncation) -> Result<Clustering> {
    let n = samples.len();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "cluster count must lie in 1..={n} (the number of samples), got {k}; \
             an unknown number of clusters cannot be recovered consistently"
        )));
    }
    common_alphabet(samples)?;
    t.check_for(samples[0].values().is_some())?;

    let mut centers = vec![0usize];
    let mut is_center = vec![false; n];
    is_center[0] = true;
    // dist[c][i]: distance from sample i to center c (0 for centers)
    let mut dist: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut evaluations = 0;
    loop {
        let c = *centers.last().unwrap();
        let row = (0..n)
            .into_par_iter()
            .map(|i| {
                if is_center[i] {
                    Ok(0.0)
                } else {
                    distance(&samples[i], &samples[c], t).map(|d| d.value)
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        evaluations += n - centers.len();
        dist.push(row);
        if centers.len() == k {
            break;
        }
        let next = (0..n)
            .filter(|&i| !is_center[i])
            .map(|i| (i, dist.iter().map(|r| r[i]).fold(f64::INFINITY, f64::min)))
            .fold(None, |best: Option<(usize, f64)>, (i, d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((i, d)),
            })
            .map(|(i, _)| i)
            .expect("fewer centers than samples");
        is_center[next] = true;
        centers.push(next);
    }

    let assignment = (0..n)
        .map(|i| {
            if let Some(c) = centers.iter().position(|&s| s == i) {
                return c;
            }
            let mut best = 0;
            for c in 1..k {
                if dist[c][i] < dist[best][i] {
                    best = c;
                }
            }
            best
        })
        .collect();
    Ok(Clustering { assignment, centers, distance_evaluations: evaluations })
}

/// Fraction of samples misassigned under the best matching of cluster labels
/// to `truth` labels.
pub fn clustering_error(c: &Clustering, truth: &[usize]) -> Result<f64> {
    partition_error(&c.assignment, truth)
}

/// [`clustering_error`] on raw label vectors.
pub fn partition_error(labels: &[usize], truth: &[usize]) -> Result<f64> {
    if labels.len() != truth.len() {
        return Err(Error::LengthMismatch(format!(
            "{} assignments against {} ground-truth labels",
            labels.len(),
            truth.len()
        )));
    }
    if labels.is_empty() {
        return Ok(0.0);
    }
    let dense = |v: &[usize]| {
        let mut keys: Vec<usize> = v.to_vec();
        keys.sort_unstable();
        keys.dedup();
        let ids: Vec<usize> = v.iter().map(|x| keys.binary_search(x).unwrap()).collect();
        (ids, keys.len())
    };
    let (a, na) = dense(labels);
    let (b, nb) = dense(truth);
    let size = na.max(nb);
    let mut agree = vec![vec![0i64; size]; size];
    for (&i, &j) in a.iter().zip(&b) {
        agree[i][j] += 1;
    }
    let cost: Vec<Vec<i64>> = agree.iter().map(|r| r.iter().map(|&x| -x).collect()).collect();
    let matched: i64 = hungarian(&cost)
        .iter()
        .enumerate()
        .map(|(i, &j)| agree[i][j])
        .sum();
    Ok(1.0 - matched as f64 / labels.len() as f64)
}

/// Minimum-cost perfect matching on a square matrix; returns the column
/// assigned to each row.
fn hungarian(cost: &[Vec<i64>]) -> Vec<usize> {
    let n = cost.len();
    let inf = i64::MAX / 4;
    // 1-based potentials, as in the classic shortest-augmenting-path form
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::processes::ProcessModel;

    fn bin(s: &str) -> Sample {
        Sample::binary(s).unwrap()
    }

    fn brute_error(labels: &[usize], truth: &[usize]) -> f64 {
        let k = labels.iter().chain(truth).max().map_or(0, |m| m + 1);
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = labels.len();
        permute(&mut perm, 0, &mut |p| {
            let wrong = labels.iter().zip(truth).filter(|(&a, &b)| p[a] != b).count();
            best = best.min(wrong);
        });
        best as f64 / labels.len() as f64
    }

    fn permute(v: &mut Vec<usize>, at: usize, f: &mut dyn FnMut(&[usize])) {
        if at == v.len() {
            f(v);
            return;
        }
        for i in at..v.len() {
            v.swap(at, i);
            permute(v, at + 1, f);
            v.swap(at, i);
        }
    }

    #[test]
    fn trivial_cluster_counts() {
        let s = vec![bin("0011"), bin("0101"), bin("1111"), bin("0000")];
        let t = Truncation::words(2);
        let all = cluster_offline(&s, 4, &t).unwrap();
        let mut a = all.assignment.clone();
        a.sort_unstable();
        assert_eq!(a, vec![0, 1, 2, 3]);
        let one = cluster_offline(&s, 1, &t).unwrap();
        assert_eq!(one.assignment, vec![0; 4]);
        assert_eq!(one.centers, vec![0]);
        assert!(cluster_offline(&s, 0, &t).is_err());
        assert!(cluster_offline(&s, 5, &t).is_err());
    }

    #[test]
    fn identical_samples_keep_centers_apart() {
        let s = vec![bin("0101"); 3];
        let c = cluster_offline(&s, 3, &Truncation::words(2)).unwrap();
        assert_eq!(c.centers, vec![0, 1, 2]);
        assert_eq!(c.assignment, vec![0, 1, 2]);
    }

    #[test]
    fn bernoulli_groups_recovered() {
        let t = Truncation::words(4);
        let s: Vec<Sample> = (0..6)
            .map(|i| {
                let p = if i % 2 == 0 { 0.1 } else { 0.9 };
                ProcessModel::bernoulli(p).unwrap().sample(2000, 100 + i).unwrap()
            })
            .collect();
        let c = cluster_offline(&s, 2, &t).unwrap();
        assert_eq!(clustering_error(&c, &[0, 1, 0, 1, 0, 1]).unwrap(), 0.0);
        assert!(c.distance_evaluations <= 2 * 6);
    }

    #[test]
    fn error_examples() {
        let truth = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        assert_eq!(partition_error(&truth, &truth).unwrap(), 0.0);
        let mut one = truth;
        one[3] = 1;
        assert!((partition_error(&one, &truth).unwrap() - 0.1).abs() < 1e-15);
        let relabeled: Vec<usize> = truth.iter().map(|&x| 7 - x).collect();
        assert_eq!(partition_error(&relabeled, &truth).unwrap(), 0.0);
        assert!(partition_error(&[0], &[0, 1]).is_err());
    }

    proptest! {
        #[test]
        fn hungarian_matches_permutation_search(
            pairs in prop::collection::vec((0usize..4, 0usize..4), 1..30)
        ) {
            let (a, b): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
            let fast = partition_error(&a, &b).unwrap();
            prop_assert!((fast - brute_error(&a, &b)).abs() < 1e-12);
        }
    }
}
