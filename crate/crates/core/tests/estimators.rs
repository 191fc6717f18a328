use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ergodist::changepoint::{
    list_changepoints, multi_changepoint_known_k, score_delta, single_changepoint,
};
use ergodist::classify::{three_sample, Label};
use ergodist::cluster::cluster_offline;
use ergodist::distance::{
    dd_discrete, dd_model_model, default_truncation, default_words, sum_information, Truncation,
};
use ergodist::processes::rng::derive_seed;
use ergodist::processes::ProcessModel;
use ergodist::sample::Sample;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn bern(p: f64) -> ProcessModel {
    ProcessModel::bernoulli(p).unwrap()
}

fn concat(parts: &[(f64, usize)], seed: u64) -> Sample {
    let mut v = Vec::new();
    for (i, &(p, len)) in parts.iter().enumerate() {
        v.extend_from_slice(bern(p).sample(len, derive_seed(seed, i as u64)).unwrap().symbols().unwrap());
    }
    Sample::discrete(2, v).unwrap()
}

fn occupancy(v: &[f64], l: u32) -> usize {
    let mut h: HashMap<i64, usize> = HashMap::new();
    for x in v {
        *h.entry((x * 2f64.powi(l as i32)).floor() as i64).or_default() += 1;
    }
    h.into_values().max().unwrap()
}

#[test]
fn default_level_follows_occupancy_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let n = 10_000;
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let t = default_truncation(&Sample::real(x.clone()).unwrap(), &Sample::real(y.clone()).unwrap()).unwrap();
    let Truncation::Cells { m_max, l_max } = t else { panic!("{t:?}") };
    assert_eq!(m_max, 14);
    assert!(occupancy(&x, l_max) <= 14 && occupancy(&y, l_max) <= 14);
    assert!(occupancy(&x, l_max - 1) > 14 || occupancy(&y, l_max - 1) > 14);
}

#[test]
fn markov_estimates_approach_model_distance() {
    let p = ProcessModel::two_state_markov(0.2, 0.6).unwrap();
    let q = ProcessModel::two_state_markov(0.3, 0.3).unwrap();
    let medians: Vec<f64> = [1_000usize, 10_000, 100_000]
        .iter()
        .map(|&n| {
            let t = default_words(n);
            let truth = dd_model_model(&p, &q, &t).unwrap().value;
            median(
                (0..50u64)
                    .into_par_iter()
                    .map(|i| {
                        let x = p.sample(n, derive_seed(n as u64, 2 * i)).unwrap();
                        let y = q.sample(n, derive_seed(n as u64, 2 * i + 1)).unwrap();
                        (dd_discrete(&x, &y, &t).unwrap().value - truth).abs()
                    })
                    .collect(),
            )
        })
        .collect();
    assert!(medians[0] > medians[1] && medians[1] > medians[2], "{medians:?}");
}

#[test]
fn independent_coins_carry_little_sum_information() {
    // plug-in entropy bias grows like 4^k / n, so keep k well below log2 n
    let t = Truncation::words(8);
    let x = bern(0.5).sample(100_000, 1).unwrap();
    let y = bern(0.5).sample(100_000, 2).unwrap();
    let independent = sum_information(&[x.clone(), y], &t).unwrap().value;
    assert!(independent <= 0.01, "{independent}");

    let noisy: Vec<u32> = x.symbols().unwrap().iter().enumerate().map(|(i, &s)| if i % 10 == 0 { 1 - s } else { s }).collect();
    let dependent = sum_information(&[x, Sample::discrete(2, noisy).unwrap()], &t).unwrap().value;
    assert!(dependent > 0.1, "{dependent}");
}

#[test]
fn delta_inside_one_segment_is_small_at_short_words() {
    // longer words add sampling noise of their own: at k_max = 3 only about
    // nine windows in ten stay under 0.05
    let t = Truncation::words(2);
    let small = (0..100u64)
        .filter(|&i| {
            let z = bern(0.5).sample(4000, derive_seed(77, i)).unwrap();
            score_delta(&z, 1, 4000, &t).unwrap() <= 0.05
        })
        .count();
    assert!(small >= 95, "{small}");
}

#[test]
fn block_estimate_moves_with_prepended_prefix() {
    for m in 0..=10 {
        let mut v = vec![0u32; 500 + m];
        v.extend(vec![1u32; 500]);
        let z = Sample::discrete(2, v).unwrap();
        let e = single_changepoint(&z, 0.1, 0.9, &default_words(z.len())).unwrap();
        assert_eq!(e.splits[0], 500 + m);
    }
}

#[test]
fn one_change_reduces_to_single_scan() {
    for i in 0..5u64 {
        let n = 20_000;
        let z = concat(&[(0.2, 7000 + 1000 * i as usize), (0.8, 13_000 - 1000 * i as usize)], derive_seed(90, i));
        let t = default_words(n);
        let single = single_changepoint(&z, 0.1, 0.9, &t).unwrap().splits[0];
        let lambda = 0.5;
        let multi = multi_changepoint_known_k(&z, 1, lambda, &t).unwrap().splits[0];
        let window = (n as f64 * lambda / 3.0).floor() as usize;
        assert!(single.abs_diff(multi) <= window, "{single} vs {multi}");
    }
}

#[test]
fn constant_sample_has_no_dominant_candidate() {
    let z = Sample::discrete(2, vec![1; 10_000]).unwrap();
    let list = list_changepoints(&z, 0.2, &default_words(10_000)).unwrap();
    assert!(list.iter().all(|c| c.score <= 0.05));
    assert!(list.len() <= 5 + 2);
}

#[test]
fn classification_error_shrinks_with_length() {
    let a = ProcessModel::two_state_markov(0.25, 0.35).unwrap();
    let b = ProcessModel::two_state_markov(0.35, 0.25).unwrap();
    let rates: Vec<f64> = [100usize, 400, 1600]
        .iter()
        .map(|&n| {
            let t = default_words(n);
            let wrong = (0..300u64)
                .into_par_iter()
                .filter(|&i| {
                    let s = derive_seed(n as u64 + 5, i);
                    let x = a.sample(n, derive_seed(s, 0)).unwrap();
                    let y = b.sample(n, derive_seed(s, 1)).unwrap();
                    let z = a.sample(n, derive_seed(s, 2)).unwrap();
                    three_sample(&x, &y, &z, &t).unwrap().label != Label::X
                })
                .count();
            wrong as f64 / 300.0
        })
        .collect();
    assert!(rates[0] >= rates[1] && rates[1] >= rates[2], "{rates:?}");
    assert!(rates[0] > 0.0);
}

#[test]
fn centers_come_from_distinct_groups() {
    let probs = [0.2, 0.5, 0.8];
    let n = 5000;
    let t = default_words(n);
    let good = (0..100u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(123, i));
            let truth: Vec<usize> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            let samples: Vec<Sample> = truth
                .iter()
                .enumerate()
                .map(|(j, &g)| bern(probs[g]).sample(n, derive_seed(derive_seed(124, i), j as u64)).unwrap())
                .collect();
            let c = cluster_offline(&samples, 3, &t).unwrap();
            let mut groups: Vec<usize> = c.centers.iter().map(|&j| truth[j]).collect();
            groups.sort();
            groups.dedup();
            groups.len() == 3 || truth.iter().collect::<std::collections::HashSet<_>>().len() < 3
        })
        .count();
    assert!(good >= 90, "{good}");
}

fn binary(max_len: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(prop_oneof![3 => Just(0u32), 1 => Just(1u32)], 2..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_estimate_stays_in_range(v in binary(300), a in 0.05f64..0.5, w in 0.0f64..0.45) {
        let z = Sample::discrete(2, v).unwrap();
        let beta = a + w;
        if let Ok(e) = single_changepoint(&z, a, beta, &Truncation::words(4)) {
            prop_assert!(e.thetas[0] >= a - 1e-9 && e.thetas[0] <= beta + 1e-9);
        }
    }

    #[test]
    fn known_k_points_are_increasing_and_separated(seed in 0u64..1000, k in 1usize..4, lambda in 0.1f64..0.3) {
        let z = concat(&[(0.1, 1500), (0.9, 1500), (0.4, 1500)], seed);
        if let Ok(e) = multi_changepoint_known_k(&z, k, lambda, &default_words(4500)) {
            prop_assert_eq!(e.thetas.len(), k);
            for p in e.thetas.windows(2) {
                prop_assert!(p[1] - p[0] > lambda / 2.0 - 1e-9);
            }
        }
    }

    #[test]
    fn ranked_list_is_bounded_and_sorted(seed in 0u64..1000, lambda in 0.05f64..0.5) {
        let z = concat(&[(0.3, 2000), (0.7, 2000)], seed);
        let list = list_changepoints(&z, lambda, &Truncation::words(6)).unwrap();
        prop_assert!(list.len() <= (1.0 / lambda).ceil() as usize + 2);
        for p in list.windows(2) {
            prop_assert!(p[0].score >= p[1].score);
        }
    }
}
