use std::f64::consts::{FRAC_PI_2, PI};

use pnc::syncerr::{
    freq_penalty_db, phase_penalty_avg_db, phase_penalty_db, phase_penalty_monte_carlo_db, raised_cosine,
    time_penalty_avg_db, time_penalty_db, DEFAULT_ISI_SPAN,
};

fn gauss_legendre_5(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [0.0, -0.5384693101056831, 0.5384693101056831, -0.906179845938664, 0.906179845938664];
    const W: [f64; 5] =
        [0.5688888888888889, 0.47862867049936647, 0.47862867049936647, 0.23692688505618908, 0.23692688505618908];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            X.iter().zip(W).map(|(x, w)| w * f(c + r * x)).sum::<f64>() * r
        })
        .sum()
}

#[test]
fn phase_average_against_quadrature() {
    let lin = gauss_legendre_5(|t| (t / 2.0).cos().powi(2) / PI, -FRAC_PI_2, FRAC_PI_2, 64);
    assert!((10.0 * lin.log10() - phase_penalty_avg_db()).abs() < 1e-10);
    assert!((phase_penalty_avg_db() + 0.8708220198395217).abs() < 1e-12);
}

#[test]
fn phase_penalty_even_and_monotone() {
    let grid: Vec<f64> = (0..1001).map(|k| -FRAC_PI_2 + PI * k as f64 / 1001.0).collect();
    for &t in &grid {
        let p = phase_penalty_db(t).unwrap();
        assert!(p <= 0.0);
        assert!((p - phase_penalty_db(-t).unwrap()).abs() < 1e-12);
    }
    let pos: Vec<f64> = (0..=1000).map(|k| phase_penalty_db(FRAC_PI_2 * k as f64 / 1001.0).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn freq_penalty_first_lobe() {
    let v: Vec<f64> = (0..=1000).map(|k| freq_penalty_db(0.1 * k as f64 / 1000.0).unwrap()).collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    assert!(v.iter().all(|&p| p <= 0.0 && p > -0.6));
}

#[test]
fn raised_cosine_limit_is_continuous() {
    for beta in [0.25, 0.5, 0.75, 1.0] {
        let t0 = 1.0 / (2.0 * beta);
        let lim = raised_cosine(t0, beta);
        for d in [1e-7, -1e-7] {
            assert!((raised_cosine(t0 + d, beta) - lim).abs() < 1e-5, "beta {beta}");
        }
    }
}

#[test]
fn isi_truncation_is_stable() {
    for k in -50..=50 {
        let dt = k as f64 / 100.0;
        let a = time_penalty_db(dt, 0.5, 10.0, 64).unwrap().penalty_db;
        let b = time_penalty_db(dt, 0.5, 10.0, 256).unwrap().penalty_db;
        assert!((a - b).abs() < 0.01, "dt {dt}");
    }
}

#[test]
fn time_penalty_is_nonpositive_and_zero_only_at_origin() {
    for k in -50..=50 {
        let dt = k as f64 / 100.0;
        let p = time_penalty_db(dt, 0.5, 10.0, DEFAULT_ISI_SPAN).unwrap().penalty_db;
        if k == 0 {
            assert!(p.abs() < 1e-12);
        } else {
            assert!(p < 0.0);
        }
    }
}

#[test]
fn time_average_vs_worst_and_snr() {
    let worst = (-500..=500)
        .map(|k| time_penalty_db(k as f64 / 1000.0, 0.5, 10.0, DEFAULT_ISI_SPAN).unwrap().penalty_db)
        .fold(f64::INFINITY, f64::min);
    let avg = time_penalty_avg_db(0.5, 10.0).unwrap();
    assert!(avg >= worst);
    let a0 = time_penalty_avg_db(0.5, 0.0).unwrap();
    let a20 = time_penalty_avg_db(0.5, 20.0).unwrap();
    assert!(a0.abs() < avg.abs() && avg.abs() < a20.abs());
    for a in [a0, avg] {
        assert!((-3.0..=0.0).contains(&a));
    }
}

#[test]
fn waveform_monte_carlo_matches_phase_penalty() {
    for theta in [PI / 6.0, PI / 3.0] {
        let mc = phase_penalty_monte_carlo_db(theta, 100_000, 10.0, 3).unwrap();
        let exact = phase_penalty_db(theta).unwrap();
        assert!((mc - exact).abs() < 0.05, "theta {theta}: {mc} vs {exact}");
    }
}
