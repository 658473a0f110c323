use manifold_volumes::haar::{qr_oracle_batch, sample_batch, sample_qr_oracle, GroupSample, HaarGroup};
use manifold_volumes::integrate::stream_rng;
use manifold_volumes::stats::{ks_two_sample, mean_and_std_error};

fn trace_norm_sq(s: &[GroupSample]) -> Vec<f64> {
    s.iter().map(|g| g.trace().norm_sqr()).collect()
}

fn within(mean: f64, se: f64, target: f64, sigmas: f64) -> bool {
    (mean - target).abs() <= sigmas * se
}

#[test]
fn su2_second_moment() {
    let batch = sample_batch(HaarGroup::Su2, 1_000_000, 21, 16);
    let (m, se) = mean_and_std_error(&trace_norm_sq(&batch.samples));
    assert!(within(m, se, 1.0, 3.0), "{m} ± {se}");
}

#[test]
fn so3_character_orthogonality() {
    // E[Tr R] = ∫_0^π (1 + 2cos θ)(1 − cos θ)/π dθ = (1/π)(π − 2·π/2) = 0
    let batch = sample_batch(HaarGroup::So3, 1_000_000, 22, 16);
    let traces: Vec<f64> = batch.samples.iter().map(|g| g.trace().re).collect();
    let (m, se) = mean_and_std_error(&traces);
    assert!(within(m, se, 0.0, 3.0), "{m} ± {se}");
    // E[(Tr R)²] = 1 for the irreducible 3-dimensional representation
    let squares: Vec<f64> = traces.iter().map(|t| t * t).collect();
    let (m2, se2) = mean_and_std_error(&squares);
    assert!(within(m2, se2, 1.0, 3.0), "{m2} ± {se2}");
}

#[test]
fn su3_moments_match_oracle() {
    let chart = sample_batch(HaarGroup::Su3, 100_000, 23, 16);
    assert!(chart.acceptance_rate() > 0.0);
    let oracle = qr_oracle_batch(3, 100_000, 24, 16).unwrap();
    let (m1, se1) = mean_and_std_error(&trace_norm_sq(&chart.samples));
    let (m2, se2) = mean_and_std_error(&trace_norm_sq(&oracle));
    assert!(within(m1, se1, 1.0, 3.0), "chart {m1} ± {se1}");
    assert!(within(m2, se2, 1.0, 3.0), "oracle {m2} ± {se2}");
    assert!((m1 - m2).abs() <= 3.0 * (se1 * se1 + se2 * se2).sqrt());
}

#[test]
fn left_translation_preserves_the_law() {
    let mut rng = stream_rng(25, 0);
    for (group, n) in [(HaarGroup::Su2, 2), (HaarGroup::Su3, 3)] {
        let g = sample_qr_oracle(n, &mut rng).unwrap().matrix;
        let batch = sample_batch(group, 40_000, 26, 8);
        let moved: Vec<GroupSample> = batch.samples.iter().map(|s| s.left_multiplied(&g)).collect();
        let (m0, se0) = mean_and_std_error(&trace_norm_sq(&batch.samples));
        let (m1, se1) = mean_and_std_error(&trace_norm_sq(&moved));
        assert!((m0 - m1).abs() <= 3.0 * (se0 * se0 + se1 * se1).sqrt(), "{group}");
        let oracle = qr_oracle_batch(n, 40_000, 27, 8).unwrap();
        let a: Vec<f64> = moved.iter().map(|s| s.trace().norm()).collect();
        let b: Vec<f64> = oracle.iter().map(|s| s.trace().norm()).collect();
        assert!(ks_two_sample(&a, &b).passes(0.001), "{group}");
    }
}

#[test]
fn identical_seed_identical_sequence() {
    let a = sample_batch(HaarGroup::Su3, 500, 99, 5);
    let b = sample_batch(HaarGroup::Su3, 500, 99, 5);
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.proposals, b.proposals);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    let c = pool.install(|| sample_batch(HaarGroup::Su3, 500, 99, 5));
    assert_eq!(a.samples, c.samples);
}
