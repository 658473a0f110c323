use std::f64::consts::PI;

use manifold_volumes::charts::{su2_matrix_chart, su3_matrix_chart, MatrixChart};
use manifold_volumes::haar::sample_qr_oracle;
use manifold_volumes::integrate::{integrate_mc, stream_rng};
use manifold_volumes::linalg::CMat;
use rand::Rng;

fn interior_point<R: Rng>(chart: &MatrixChart, rng: &mut R) -> Vec<f64> {
    chart
        .ranges()
        .iter()
        .map(|&(lo, hi)| lo + (hi - lo) * rng.gen_range(0.01..0.99))
        .collect()
}

fn oracle_cmat(n: usize, seed: u64) -> CMat {
    let mut rng = stream_rng(seed, 0);
    let g = sample_qr_oracle(n, &mut rng).unwrap().matrix;
    let mut m = CMat::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, g[(i, j)]);
        }
    }
    m
}

#[test]
fn su2_engine_density_is_sin_two_beta() {
    let chart = su2_matrix_chart();
    let mut rng = stream_rng(101, 0);
    for _ in 0..1000 {
        let a = interior_point(&chart, &mut rng);
        let d = chart.maurer_cartan_density(&a).unwrap();
        assert!((d - (2.0 * a[1]).sin()).abs() < 1e-10, "at {a:?}: {d}");
    }
}

#[test]
fn insertion_derivatives_match_central_differences() {
    let chart = su3_matrix_chart();
    let mut rng = stream_rng(202, 0);
    let h = 1e-6;
    for _ in 0..100 {
        let a = interior_point(&chart, &mut rng);
        for p in 0..chart.dim() {
            let mut plus = a.clone();
            let mut minus = a.clone();
            plus[p] += h;
            minus[p] -= h;
            let fd = (chart.element(&plus).unwrap() - chart.element(&minus).unwrap())
                .scale(num_complex::Complex64::new(0.5 / h, 0.0));
            let exact = chart.derivative(&a, p).unwrap();
            assert!((fd - exact).max_abs() < 1e-6, "parameter {p} at {a:?}");
        }
    }
}

#[test]
fn su3_density_matches_product_formula() {
    // |det J| = ½ sin 2α2 · sin 2α4 sin²α4 · sin 2α6 on the interior
    let chart = su3_matrix_chart();
    let mut rng = stream_rng(303, 0);
    for _ in 0..500 {
        let a = interior_point(&chart, &mut rng);
        let expected = 0.5 * (2.0 * a[1]).sin() * (2.0 * a[3]).sin() * a[3].sin().powi(2) * (2.0 * a[5]).sin();
        let d = chart.maurer_cartan_density(&a).unwrap();
        assert!((d - expected).abs() < 1e-10, "at {a:?}: {d} vs {expected}");
    }
}

#[test]
fn decomposition_residual_stays_small() {
    let mut rng = stream_rng(404, 0);
    for chart in [su2_matrix_chart(), su3_matrix_chart()] {
        for _ in 0..2000 {
            let a = interior_point(&chart, &mut rng);
            assert!(chart.frame(&a).unwrap().residual < 1e-9);
        }
    }
}

#[test]
fn density_is_left_invariant_pointwise() {
    let chart = su3_matrix_chart();
    let translated = chart.left_translated(oracle_cmat(3, 9));
    let mut rng = stream_rng(505, 0);
    for _ in 0..200 {
        let a = interior_point(&chart, &mut rng);
        let d0 = chart.maurer_cartan_density(&a).unwrap();
        let d1 = translated.maurer_cartan_density(&a).unwrap();
        assert!((d0 - d1).abs() < 1e-10);
    }
}

#[test]
fn left_translated_volume_agrees_within_one_percent() {
    let chart = su3_matrix_chart();
    let translated = chart.left_translated(oracle_cmat(3, 17));
    let a = integrate_mc(&chart.to_chart(), 400_000, 77, 16).unwrap();
    let b = integrate_mc(&translated.to_chart(), 400_000, 78, 16).unwrap();
    assert!((a.estimate - b.estimate).abs() / a.estimate < 0.01, "{a:?} {b:?}");
    let truth = 3f64.sqrt() * PI.powi(5);
    assert!((b.estimate - truth).abs() < 4.0 * b.std_error);
}

#[test]
fn su2_matrix_chart_volume_by_quadrature() {
    let r = manifold_volumes::integrate::integrate_tensor(&su2_matrix_chart().to_chart(), 24).unwrap();
    assert!((r.estimate - 2.0 * PI * PI).abs() < 1e-10 * 2.0 * PI * PI);
}
