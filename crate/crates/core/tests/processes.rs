use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ergodist::index::KGramIndex;
use ergodist::processes::{
    stationary_init, AdversaryStart, AdversaryState, DiagonalAdversary, Hmm, Init, Markov, ProcessModel,
    Translation,
};

fn all_words(a: u32, k: usize) -> Vec<Vec<u32>> {
    (0..a.pow(k as u32)).map(|c| (0..k).map(|i| c / a.pow(i as u32) % a).collect()).collect()
}

#[test]
fn fair_markov_bigrams_within_three_sigma() {
    let m = ProcessModel::two_state_markov(0.5, 0.5).unwrap();
    let n = 100_000;
    let x = m.sample(n, 2024).unwrap();
    let idx = KGramIndex::build(&x).unwrap();
    let windows = (n - 1) as f64;
    let sigma = (0.25 * 0.75 / windows).sqrt();
    for w in all_words(2, 2) {
        let nu = idx.frequency(&w).unwrap().value();
        assert!((nu - 0.25).abs() <= 3.0 * sigma, "{w:?}: {nu}");
    }
}

fn power_iteration(p: &[Vec<f64>]) -> Vec<f64> {
    let s = p.len();
    let mut v = vec![1.0 / s as f64; s];
    for _ in 0..100_000 {
        let mut next = vec![0.0; s];
        for i in 0..s {
            for j in 0..s {
                next[j] += v[i] * p[i][j];
            }
        }
        let change: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        if change < 1e-15 {
            break;
        }
    }
    v
}

#[test]
fn stationary_law_matches_power_iteration() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..50 {
        let p: Vec<Vec<f64>> = (0..4)
            .map(|_| {
                let row: Vec<f64> = (0..4).map(|_| rng.gen_range(0.05..1.0)).collect();
                let t: f64 = row.iter().sum();
                row.into_iter().map(|v| v / t).collect()
            })
            .collect();
        let pi = stationary_init(&Markov::new(1, p.clone(), Init::Stationary).unwrap()).unwrap();
        let oracle = power_iteration(&p);
        for (a, b) in pi.iter().zip(&oracle) {
            assert!((a - b).abs() <= 1e-8, "{pi:?} vs {oracle:?}");
        }
    }
}

/// Sum over every hidden path, no recursion shared with the library.
fn hmm_word_prob(t: &[Vec<f64>], e: &[Vec<f64>], pi: &[f64], word: &[u32]) -> f64 {
    let s = t.len();
    let k = word.len();
    let mut total = 0.0;
    for code in 0..s.pow(k as u32) {
        let path: Vec<usize> = (0..k).map(|i| code / s.pow(i as u32) % s).collect();
        let mut p = pi[path[0]] * e[path[0]][word[0] as usize];
        for i in 1..k {
            p *= t[path[i - 1]][path[i]] * e[path[i]][word[i] as usize];
        }
        total += p;
    }
    total
}

#[test]
fn hmm_marginals_match_path_enumeration() {
    let t = vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.5, 0.3], vec![0.3, 0.3, 0.4]];
    let e = vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.8, 0.1], vec![0.25, 0.25, 0.5]];
    let m = ProcessModel::Hmm(Hmm::new(t.clone(), e.clone(), Init::Stationary).unwrap());
    let pi = power_iteration(&t);
    for k in 1..=4 {
        for w in all_words(3, k) {
            let exact = m.marginal_prob(&w).unwrap();
            let oracle = hmm_word_prob(&t, &e, &pi, &w);
            assert!((exact - oracle).abs() <= 1e-12, "{w:?}: {exact} vs {oracle}");
        }
    }
}

#[test]
fn sampling_is_reproducible_for_every_model() {
    let models = [
        r#"{"type": "iid", "probs": [0.2, 0.5, 0.3]}"#,
        r#"{"type": "markov", "order": 2, "transitions": [[0.9, 0.1], [0.4, 0.6], [0.5, 0.5], [0.1, 0.9]], "init": "stationary"}"#,
        r#"{"type": "hmm", "transitions": [[0.9, 0.1], [0.2, 0.8]], "emissions": [[0.5, 0.5], [0.1, 0.9]], "init": [0.5, 0.5]}"#,
        r#"{"type": "translation", "alpha": 0.41421356237309503}"#,
        r#"{"type": "diagonal", "delta": 0.2, "levels": [1, 3, 6]}"#,
    ];
    for text in models {
        let m = ProcessModel::from_json(text).unwrap();
        let a = m.sample(5000, 99).unwrap();
        assert_eq!(a, m.sample(5000, 99).unwrap(), "{text}");
        assert_ne!(a, m.sample(5000, 100).unwrap(), "{text}");
    }
}

#[test]
fn rotation_word_frequency_is_interval_length() {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let m = ProcessModel::Translation(Translation::new(alpha, None).unwrap());
    let n = 100_000;
    let idx = KGramIndex::build(&m.sample(n, 5).unwrap()).unwrap();
    assert!((idx.frequency(&[1]).unwrap().value() - 0.5).abs() <= 1e-3);
    assert!((idx.frequency(&[1, 1]).unwrap().value() - (0.5 - alpha)).abs() <= 1e-3);
}

#[test]
fn diagonal_chain_returns_at_rate_delta() {
    let delta = 0.05;
    let d = DiagonalAdversary::new(delta, vec![3, 10, 40, 200]).unwrap();
    let n = 100_000;
    let tr = d.simulate(n, 8);
    let rate = tr.returns_to_zero as f64 / n as f64;
    let sigma = (delta * (1.0 - delta) / n as f64).sqrt();
    assert!((rate - delta).abs() <= 4.0 * sigma, "{rate}");
    let zeros = tr.states.iter().filter(|s| matches!(s, AdversaryState::Ordinary(0))).count();
    assert_eq!(zeros, tr.returns_to_zero + usize::from(tr.states[0] == AdversaryState::Ordinary(0)));
}

#[test]
fn diagonal_output_marks_up_branches() {
    let d = DiagonalAdversary::new(0.1, vec![2, 6]).unwrap().with_start(AdversaryStart::Zero);
    let tr = d.simulate(20_000, 3);
    for (s, &x) in tr.states.iter().zip(&tr.symbols) {
        assert_eq!(x, u32::from(!matches!(s, AdversaryState::Up(_))));
    }
    let ups = tr.states.iter().filter(|s| matches!(s, AdversaryState::Up(_))).count();
    assert!(ups > 0 && ups < tr.states.len());
}
