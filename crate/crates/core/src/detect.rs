//! MAP detection at the relay and BER of the three relaying schemes.
//!
//! The relay sees `r = a1 + a3 + n` with `a1 + a3 ∈ {-2, 0, 2}` at prior
//! probabilities `{1/4, 1/2, 1/4}`. The MAP rule declares the XOR bit `1`
//! inside `(γ1, γ2)` and `0` outside.

use std::fmt;
use std::str::FromStr;

use crate::channel::{p2p_awgn, superpose_awgn, ChannelParams, NoiseDensity, NoiseStream};
use crate::mapping::bpsk_modulate;
use crate::{Error, Result};

/// Minimum trial count accepted by the Monte Carlo estimators.
pub const MIN_TRIALS: u64 = 10_000;

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn q_func(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// `P(lo < X < hi)` for `X ~ N(mean, sigma^2)`, evaluated on whichever tail
/// keeps the subtraction well conditioned.
pub fn gaussian_interval(lo: f64, hi: f64, mean: f64, sigma: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let zl = (lo - mean) / sigma;
    let zh = (hi - mean) / sigma;
    if zl >= 0.0 {
        q_func(zl) - q_func(zh)
    } else if zh <= 0.0 {
        q_func(-zh) - q_func(-zl)
    } else {
        1.0 - q_func(zh) - q_func(-zl)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Thresholds {
    /// Symmetric pair `(-gamma2, gamma2)`.
    pub fn symmetric(gamma2: f64) -> Self {
        Self { gamma1: -gamma2, gamma2 }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self { gamma1: self.gamma1 * factor, gamma2: self.gamma2 * factor }
    }
}

/// Closed-form MAP thresholds
/// `γ2 = 1 + (N0/4) ln(1 + sqrt(1 - exp(-8/N0)))`, `γ1 = -γ2`.
pub fn optimal_thresholds(n0: NoiseDensity) -> Thresholds {
    let n0 = n0.value();
    let root = (-(-8.0 / n0).exp_m1()).sqrt();
    Thresholds::symmetric(1.0 + n0 / 4.0 * root.ln_1p())
}

/// Posterior odds `P(a1+a3 = 0 | r) / P(a1+a3 ≠ 0 | r)`.
///
/// Equals one exactly at the MAP thresholds.
pub fn map_likelihood_ratio(r: f64, n0: NoiseDensity) -> f64 {
    let n0 = n0.value();
    // 2 e^{-r²/N0} / (e^{-(r-2)²/N0} + e^{-(r+2)²/N0}), divided through by e^{-r²/N0}
    2.0 / (((4.0 * r - 4.0) / n0).exp() + ((-4.0 * r - 4.0) / n0).exp())
}

/// Hard decision on the XOR bit. Samples exactly on a threshold go to the
/// outer region.
pub fn detect_xor(r: f64, thr: &Thresholds) -> u8 {
    u8::from(thr.gamma1 < r && r < thr.gamma2)
}

/// BER of one BPSK hop, `Q(sqrt(2/N0))`.
pub fn ber_bpsk(n0: NoiseDensity) -> f64 {
    q_func((2.0 / n0.value()).sqrt())
}

/// XOR of two independently detected BPSK bits: `2p(1-p)`.
pub fn ber_snc_xor(n0: NoiseDensity) -> f64 {
    let p = ber_bpsk(n0);
    2.0 * p * (1.0 - p)
}

/// BER of the XOR bit decided directly from the superposition with the MAP
/// thresholds.
pub fn ber_pnc_xor(n0: NoiseDensity) -> f64 {
    ber_pnc_xor_with(n0, &optimal_thresholds(n0))
}

/// Same as [`ber_pnc_xor`] for arbitrary thresholds.
pub fn ber_pnc_xor_with(n0: NoiseDensity, thr: &Thresholds) -> f64 {
    let s = n0.sigma();
    let (g1, g2) = (thr.gamma1, thr.gamma2);
    // sum = 0 (prob 1/2) decided outside; sum = ±2 (prob 1/4 each) decided inside
    0.5 * gaussian_interval(f64::NEG_INFINITY, g1, 0.0, s)
        + 0.5 * gaussian_interval(g2, f64::INFINITY, 0.0, s)
        + 0.25 * gaussian_interval(g1, g2, -2.0, s)
        + 0.25 * gaussian_interval(g1, g2, 2.0, s)
}

/// Small-BER approximation of the end-to-end BER over cascaded hops.
pub fn ber_end_to_end(per_hop: &[f64]) -> f64 {
    debug_assert!(per_hop.iter().all(|p| (0.0..0.5).contains(p)));
    per_hop.iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub std_err: f64,
}

impl BerEstimate {
    pub fn from_counts(errors: u64, trials: u64) -> Self {
        let p_hat = errors as f64 / trials as f64;
        Self { errors, trials, p_hat, std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt() }
    }

    /// `|p_hat - reference|` measured in standard errors. A zero standard error
    /// only agrees with an exact match.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = (self.p_hat - reference).abs();
        if self.std_err > 0.0 {
            d / self.std_err
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Reception being simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BerScheme {
    /// One BPSK hop.
    TraditionalHop,
    /// Two independent hops, XOR of the hard decisions.
    SncXor,
    /// Superposed reception, MAP decision on the XOR bit.
    PncXor,
}

impl BerScheme {
    pub const ALL: [BerScheme; 3] = [BerScheme::TraditionalHop, BerScheme::SncXor, BerScheme::PncXor];

    pub fn name(self) -> &'static str {
        match self {
            BerScheme::TraditionalHop => "traditional-hop",
            BerScheme::SncXor => "snc-xor",
            BerScheme::PncXor => "pnc-xor",
        }
    }

    pub fn analytic(self, n0: NoiseDensity) -> f64 {
        match self {
            BerScheme::TraditionalHop => ber_bpsk(n0),
            BerScheme::SncXor => ber_snc_xor(n0),
            BerScheme::PncXor => ber_pnc_xor(n0),
        }
    }
}

impl fmt::Display for BerScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BerScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "traditional-hop" | "traditional" | "bpsk" => Ok(BerScheme::TraditionalHop),
            "snc-xor" | "snc" => Ok(BerScheme::SncXor),
            "pnc-xor" | "pnc" => Ok(BerScheme::PncXor),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

/// Splits `trials` over `workers` shards; shard `w` draws from stream `w`.
fn shard_sizes(trials: u64, workers: usize) -> Vec<u64> {
    let w = workers.max(1) as u64;
    (0..w).map(|i| trials / w + u64::from(i < trials % w)).collect()
}

/// Runs `job(stream, trials)` once per shard, on scoped threads when there is
/// more than one, and returns the per-shard results in shard order.
fn run_sharded<T, F>(trials: u64, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    let sizes = shard_sizes(trials, workers);
    if sizes.len() == 1 {
        return vec![job(0, sizes[0])];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(w, &n)| {
                let job = &job;
                scope.spawn(move || job(w as u64, n))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("Monte Carlo worker panicked")).collect()
    })
}

fn count_errors(scheme: BerScheme, params: &ChannelParams, noise: &mut NoiseStream, trials: u64) -> u64 {
    let mut errors = 0u64;
    match scheme {
        BerScheme::TraditionalHop => {
            for _ in 0..trials {
                let b = noise.bit();
                let r = p2p_awgn(bpsk_modulate(b), params, noise);
                errors += u64::from((r > 0.0) != b);
            }
        }
        BerScheme::SncXor => {
            for _ in 0..trials {
                let (b1, b3) = (noise.bit(), noise.bit());
                let r1 = p2p_awgn(bpsk_modulate(b1), params, noise);
                let r3 = p2p_awgn(bpsk_modulate(b3), params, noise);
                errors += u64::from(((r1 > 0.0) ^ (r3 > 0.0)) != (b1 ^ b3));
            }
        }
        BerScheme::PncXor => {
            let thr = optimal_thresholds(params.n0);
            for _ in 0..trials {
                let (b1, b3) = (noise.bit(), noise.bit());
                let r = superpose_awgn(bpsk_modulate(b1), bpsk_modulate(b3), params, noise);
                errors += u64::from((detect_xor(r, &thr) == 1) != (b1 ^ b3));
            }
        }
    }
    errors
}

/// Fixed-trial Monte Carlo BER. The result depends only on
/// `(params.seed, trials, workers)`.
pub fn ber_monte_carlo(scheme: BerScheme, params: &ChannelParams, trials: u64, workers: usize) -> Result<BerEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { min: MIN_TRIALS, got: trials });
    }
    let errors: u64 =
        run_sharded(trials, workers, |stream, n| count_errors(scheme, params, &mut params.noise(stream), n))
            .into_iter()
            .sum();
    Ok(BerEstimate::from_counts(errors, trials))
}

/// PNC XOR-bit BER for several threshold pairs on the same noise samples,
/// so differences between the estimates are paired.
pub fn pnc_threshold_sweep(
    params: &ChannelParams,
    thresholds: &[Thresholds],
    trials: u64,
    workers: usize,
) -> Result<Vec<BerEstimate>> {
    if trials < MIN_TRIALS {
        return Err(Error::TooFewTrials { min: MIN_TRIALS, got: trials });
    }
    let shards = run_sharded(trials, workers, |stream, n| {
        let mut noise = params.noise(stream);
        let mut errors = vec![0u64; thresholds.len()];
        for _ in 0..n {
            let (b1, b3) = (noise.bit(), noise.bit());
            let r = superpose_awgn(bpsk_modulate(b1), bpsk_modulate(b3), params, &mut noise);
            for (e, thr) in errors.iter_mut().zip(thresholds) {
                *e += u64::from((detect_xor(r, thr) == 1) != (b1 ^ b3));
            }
        }
        errors
    });
    Ok((0..thresholds.len()).map(|k| BerEstimate::from_counts(shards.iter().map(|s| s[k]).sum(), trials)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n0(v: f64) -> NoiseDensity {
        NoiseDensity::new(v).unwrap()
    }

    #[test]
    fn q_func_basics() {
        assert_eq!(q_func(0.0), 0.5);
        for x in [0.5, 1.0, 2.0, 5.0] {
            assert!((q_func(x) + q_func(-x) - 1.0).abs() < 1e-15);
        }
        assert!(q_func(40.0) >= 0.0 && q_func(40.0) < 1e-300);
        assert_eq!(q_func(f64::INFINITY), 0.0);
        assert_eq!(q_func(f64::NEG_INFINITY), 1.0);
    }

    #[test]
    fn gaussian_interval_regions() {
        let s = 0.7;
        let total = gaussian_interval(f64::NEG_INFINITY, f64::INFINITY, 0.3, s);
        assert!((total - 1.0).abs() < 1e-15);
        let a = gaussian_interval(-1.0, 0.2, 0.3, s);
        let b = gaussian_interval(0.2, 2.5, 0.3, s);
        let c = gaussian_interval(-1.0, 2.5, 0.3, s);
        assert!((a + b - c).abs() < 1e-15);
        assert_eq!(gaussian_interval(1.0, 1.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn thresholds_limits() {
        let t = optimal_thresholds(n0(1e-6));
        assert!((t.gamma2 - 1.0).abs() < 1e-6);
        for v in [0.1, 1.0, 10.0] {
            let t = optimal_thresholds(n0(v));
            assert_eq!(t.gamma1, -t.gamma2);
            assert!(t.gamma2 > 1.0);
        }
        // large N0: 1 - e^{-8/N0} must not cancel to zero
        let t = optimal_thresholds(n0(1e6));
        assert!(t.gamma2 > 1.0 && t.gamma2.is_finite());
    }

    #[test]
    fn likelihood_ratio_is_one_at_threshold() {
        for v in [0.1, 1.0, 10.0] {
            let nd = n0(v);
            let t = optimal_thresholds(nd);
            let lr = map_likelihood_ratio(t.gamma2, nd);
            assert!((lr - 1.0).abs() < 1e-9, "N0={v}: {lr}");
            assert!((map_likelihood_ratio(t.gamma1, nd) - 1.0).abs() < 1e-9);
            assert!(map_likelihood_ratio(0.0, nd) > 1.0);
            assert!(map_likelihood_ratio(t.gamma2 + 0.5, nd) < 1.0);
        }
    }

    #[test]
    fn detect_xor_regions() {
        let t = optimal_thresholds(n0(1.0));
        assert_eq!(detect_xor(0.0, &t), 1);
        assert_eq!(detect_xor(3.0, &t), 0);
        assert_eq!(detect_xor(-3.0, &t), 0);
        assert_eq!(detect_xor(t.gamma2, &t), 0);
        assert_eq!(detect_xor(t.gamma1, &t), 0);
    }

    #[test]
    fn analytic_bers() {
        let one = n0(1.0);
        assert!((ber_bpsk(one) - 0.0786496035251426).abs() < 1e-12);
        let p = ber_bpsk(one);
        assert!((ber_snc_xor(one) - 2.0 * p * (1.0 - p)).abs() < 1e-15);
        assert!((ber_snc_xor(one) - 0.1449).abs() < 1e-4);
        assert!((ber_pnc_xor(one) - 0.109).abs() < 1e-3);
        let tiny = n0(1e-4);
        assert!(ber_bpsk(tiny) < 1e-300 && ber_snc_xor(tiny) < 1e-300 && ber_pnc_xor(tiny) < 1e-300);
        let grid: Vec<f64> = (1..=100).map(|k| ber_bpsk(n0(k as f64 / 10.0))).collect();
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn fig5_ordering() {
        for tenth_db in -20..=120 {
            let nd = NoiseDensity::from_snr_db(tenth_db as f64 / 10.0).unwrap();
            let (b, s, p) = (ber_bpsk(nd), ber_snc_xor(nd), ber_pnc_xor(nd));
            assert!(b <= p && p <= s, "snr {}: {b} {p} {s}", tenth_db as f64 / 10.0);
        }
    }

    #[test]
    fn perturbed_thresholds_are_worse_analytically() {
        for v in [0.5, 1.0, 2.0] {
            let nd = n0(v);
            let opt = optimal_thresholds(nd);
            let best = ber_pnc_xor_with(nd, &opt);
            for f in [0.99, 1.01] {
                assert!(ber_pnc_xor_with(nd, &opt.scaled(f)) > best);
            }
        }
    }

    #[test]
    fn end_to_end_sum() {
        assert!((ber_end_to_end(&[0.01, 0.01]) - 0.02).abs() < 1e-15);
        assert_eq!(ber_end_to_end(&[0.0]), 0.0);
        assert_eq!(ber_end_to_end(&[0.03, 0.0]), 0.03);
    }

    #[test]
    fn scheme_parsing() {
        for s in BerScheme::ALL {
            assert_eq!(s.name().parse::<BerScheme>().unwrap(), s);
        }
        assert_eq!("qam".parse::<BerScheme>(), Err(Error::UnknownScheme("qam".into())));
    }

    #[test]
    fn monte_carlo_guards_and_determinism() {
        let p = ChannelParams::new(1.0, 9).unwrap();
        assert_eq!(
            ber_monte_carlo(BerScheme::PncXor, &p, 100, 1),
            Err(Error::TooFewTrials { min: MIN_TRIALS, got: 100 })
        );
        let a = ber_monte_carlo(BerScheme::SncXor, &p, 50_000, 3).unwrap();
        let b = ber_monte_carlo(BerScheme::SncXor, &p, 50_000, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trials, 50_000);
        assert!((a.p_hat - a.errors as f64 / 50_000.0).abs() < 1e-15);
    }

    #[test]
    fn noiseless_monte_carlo_has_no_errors() {
        let p = ChannelParams::new(1e-6, 3).unwrap();
        for s in BerScheme::ALL {
            assert_eq!(ber_monte_carlo(s, &p, MIN_TRIALS, 2).unwrap().errors, 0);
        }
    }

    #[test]
    fn shards_cover_all_trials() {
        assert_eq!(shard_sizes(10, 3), vec![4, 3, 3]);
        assert_eq!(shard_sizes(10, 0), vec![10]);
        assert_eq!(shard_sizes(7, 7).iter().sum::<u64>(), 7);
    }

    #[test]
    fn z_score_edges() {
        let e = BerEstimate::from_counts(0, 10_000);
        assert_eq!(e.z_score(0.0), 0.0);
        assert!(e.z_score(1e-3).is_infinite());
    }
}
