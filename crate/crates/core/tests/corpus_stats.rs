//! Statistical oracle for the sub-dialogue sampler: an independent
//! re-implementation of the printed sampling rules generates a reference
//! sample, and the two empirical distributions are compared by chi-square.

mod common;

use landmark_core::audio::{Dialogue, Label, Speaker, Utterance};
use landmark_core::corpus::{shuffle_subdialogues, AugmentConfig, SubDialogue};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const T: usize = 20;
const SAMPLES: usize = 10_000;
const EPS_LOW: f64 = 0.5;
const EPS_HIGH: f64 = 1.0;

fn corpus() -> Vec<Dialogue> {
    let make = |id: &str, label| {
        let utterances = (0..T)
            .map(|j| Utterance::new(Speaker::Participant, format!("u{j}"), j as f64, j as f64 + 0.5))
            .collect();
        Dialogue::new(id, utterances, label)
    };
    vec![make("pos", Label::Depressed), make("neg", Label::Healthy)]
}

/// The printed sampling rules, written straight from the algorithm with a
/// plain seeded generator (no shared code with the library).
fn reference_sample(n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let eps: f64 = rng.random_range(EPS_LOW..EPS_HIGH);
            let d = ((eps * T as f64 - 1.0).round() as i64).clamp(1, T as i64 - 1) as usize;
            let s = rng.random_range(0..T - d);
            (d, s)
        })
        .collect()
}

fn d_histogram(pairs: &[(usize, usize)]) -> Vec<u64> {
    let mut h = vec![0u64; T];
    for &(d, _) in pairs {
        h[d] += 1;
    }
    h
}

#[test]
fn sampler_matches_independent_monte_carlo() {
    let cfg = AugmentConfig {
        m_plus: SAMPLES,
        eps_low: EPS_LOW,
        eps_high: EPS_HIGH,
        rng_seed: 2024,
    };
    let subs: Vec<SubDialogue> = shuffle_subdialogues(&corpus(), &cfg)
        .unwrap()
        .into_iter()
        .filter(|s| s.parent_id == "pos")
        .collect();
    assert_eq!(subs.len(), SAMPLES);
    let ours: Vec<(usize, usize)> = subs
        .iter()
        .map(|s| (s.end_idx - s.start_idx, s.start_idx))
        .collect();
    let theirs = reference_sample(SAMPLES, 7777);

    // Span length distribution.
    let (stat, dof) = common::chi_square_two_sample(&d_histogram(&ours), &d_histogram(&theirs));
    let critical = common::chi_square_critical(dof);
    assert!(
        stat < critical,
        "d distribution diverges: chi2 {stat:.1} >= {critical:.1} at {dof} dof"
    );

    // Start-index distribution, conditioned on the most common span.
    let mode_d = (0..T)
        .max_by_key(|&d| ours.iter().filter(|&&(dd, _)| dd == d).count())
        .unwrap();
    let s_hist = |pairs: &[(usize, usize)]| {
        let mut h = vec![0u64; T - mode_d];
        for &(d, s) in pairs {
            if d == mode_d {
                h[s] += 1;
            }
        }
        h
    };
    let (stat, dof) = common::chi_square_two_sample(&s_hist(&ours), &s_hist(&theirs));
    let critical = common::chi_square_critical(dof);
    assert!(
        stat < critical,
        "s|d distribution diverges: chi2 {stat:.1} >= {critical:.1} at {dof} dof"
    );
}

#[test]
fn d_covers_its_range_roughly_uniformly() {
    let cfg = AugmentConfig {
        m_plus: SAMPLES,
        eps_low: EPS_LOW,
        eps_high: EPS_HIGH,
        rng_seed: 11,
    };
    let subs = shuffle_subdialogues(&corpus(), &cfg).unwrap();
    let hist = d_histogram(
        &subs
            .iter()
            .filter(|s| s.parent_id == "pos")
            .map(|s| (s.end_idx - s.start_idx, s.start_idx))
            .collect::<Vec<_>>(),
    );
    // d = round(eps*20 - 1) for eps in (0.5, 1): interior values 10..=18
    // each get ~1/10 of the mass; the edge values 9 and 19 get ~1/20.
    for d in 10..=18 {
        let share = hist[d] as f64 / SAMPLES as f64;
        assert!((share - 0.1).abs() < 0.02, "d={d} share {share:.3}");
    }
    for d in [9usize, 19] {
        let share = hist[d] as f64 / SAMPLES as f64;
        assert!((share - 0.05).abs() < 0.015, "d={d} share {share:.3}");
    }
    assert_eq!(hist[..9].iter().sum::<u64>(), 0);
}
