//! AWGN channels and the reproducible noise source.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// One-sided noise power spectral density `N0` with unit bit energy.
///
/// Noise samples have variance `N0 / 2`; SNR in dB is `-10 log10(N0)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseDensity(f64);

impl NoiseDensity {
    pub fn new(n0: f64) -> Result<Self> {
        if n0 > 0.0 && n0.is_finite() {
            Ok(Self(n0))
        } else {
            Err(Error::InvalidNoiseDensity(n0))
        }
    }

    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::new(10f64.powf(-snr_db / 10.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn snr_db(self) -> f64 {
        -10.0 * self.0.log10()
    }

    /// Standard deviation of one noise sample, `sqrt(N0 / 2)`.
    pub fn sigma(self) -> f64 {
        (self.0 / 2.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub n0: NoiseDensity,
    pub seed: u64,
}

impl ChannelParams {
    pub fn new(n0: f64, seed: u64) -> Result<Self> {
        Ok(Self { n0: NoiseDensity::new(n0)?, seed })
    }

    pub fn noise(&self, stream: u64) -> NoiseStream {
        NoiseStream::new(self.seed, stream)
    }
}

/// Deterministic Gaussian and bit source keyed by `(seed, stream)`.
///
/// Backed by ChaCha8 with the stream index mapped onto the cipher's stream
/// selector, so workers with distinct indices never share a keystream.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    rng: ChaCha8Rng,
    bits: u64,
    bits_left: u32,
}

impl NoiseStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, bits: 0, bits_left: 0 }
    }

    /// Standard normal sample.
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Gaussian sample with variance `N0 / 2`.
    pub fn sample(&mut self, n0: NoiseDensity) -> f64 {
        n0.sigma() * self.standard_normal()
    }

    /// Uniform source bit.
    pub fn bit(&mut self) -> bool {
        if self.bits_left == 0 {
            self.bits = self.rng.next_u64();
            self.bits_left = 64;
        }
        let b = self.bits & 1 == 1;
        self.bits >>= 1;
        self.bits_left -= 1;
        b
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform sample in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Mixes a base seed with a path of indices (grid point, scheme, ...) into a
/// new seed. SplitMix64 finalizer per step.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix(seed), |acc, &p| splitmix(acc ^ splitmix(p.wrapping_add(0x9E37_79B9_7F4A_7C15))))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `r = a + n` with `n ~ N(0, N0/2)`.
pub fn p2p_awgn(a: f64, params: &ChannelParams, noise: &mut NoiseStream) -> f64 {
    a + noise.sample(params.n0)
}

/// Two synchronous transmitters at equal power: `r = a1 + a3 + n`.
pub fn superpose_awgn(a1: f64, a3: f64, params: &ChannelParams, noise: &mut NoiseStream) -> f64 {
    a1 + a3 + noise.sample(params.n0)
}

pub const DEFAULT_SIR_TOLERANCE: f64 = 1e-12;

/// SIR in dB of a receiver in an infinite PNC chain.
///
/// The nearest interferers are three hops away on either side, so
/// `SIR = 1 / (2 Σ_{l>=1} (2l+1)^-α)` (the hop distance cancels). The series is
/// summed until the next term drops below `tolerance` times the partial sum.
pub fn chain_sir_db(alpha: f64, tolerance: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(Error::DivergentInterference(alpha));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidTolerance(tolerance));
    }
    let mut sum = 0.0;
    let mut l = 1u64;
    loop {
        let term = ((2 * l + 1) as f64).powf(-alpha);
        if sum > 0.0 && term < tolerance * sum {
            break;
        }
        sum += term;
        l += 1;
    }
    Ok(-10.0 * (2.0 * sum).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_density_validation() {
        assert!(NoiseDensity::new(0.0).is_err());
        assert!(NoiseDensity::new(-1.0).is_err());
        assert!(NoiseDensity::new(f64::NAN).is_err());
        assert!(NoiseDensity::new(f64::INFINITY).is_err());
        let n0 = NoiseDensity::from_snr_db(10.0).unwrap();
        assert!((n0.value() - 0.1).abs() < 1e-15);
        assert!((n0.snr_db() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn zero_noise_limit() {
        let p = ChannelParams::new(1e-30, 7).unwrap();
        let mut ns = p.noise(0);
        assert!((p2p_awgn(1.0, &p, &mut ns) - 1.0).abs() < 1e-12);
        assert!(superpose_awgn(1.0, -1.0, &p, &mut ns).abs() < 1e-12);
        assert!((superpose_awgn(1.0, 1.0, &p, &mut ns) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = {
            let mut s = NoiseStream::new(42, 3);
            (0..100).map(|_| s.standard_normal()).collect()
        };
        let b: Vec<f64> = {
            let mut s = NoiseStream::new(42, 3);
            (0..100).map(|_| s.standard_normal()).collect()
        };
        let c: Vec<f64> = {
            let mut s = NoiseStream::new(42, 4);
            (0..100).map(|_| s.standard_normal()).collect()
        };
        assert_eq!(
            a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_ne!(a, c);
    }

    #[test]
    fn derived_seeds_differ() {
        let s = derive_seed(1, &[0, 0]);
        assert_ne!(s, derive_seed(1, &[0, 1]));
        assert_ne!(s, derive_seed(1, &[1, 0]));
        assert_ne!(s, derive_seed(2, &[0, 0]));
        assert_eq!(s, derive_seed(1, &[0, 0]));
    }

    #[test]
    fn sir_errors() {
        assert_eq!(chain_sir_db(2.0, 1e-12), Err(Error::DivergentInterference(2.0)));
        assert!(chain_sir_db(1.5, 1e-12).is_err());
        assert!(chain_sir_db(4.0, 0.0).is_err());
    }

    #[test]
    fn sir_increases_with_alpha() {
        let v: Vec<f64> =
            [2.5, 3.0, 3.5, 4.0, 5.0].iter().map(|&a| chain_sir_db(a, DEFAULT_SIR_TOLERANCE).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]), "{v:?}");
        assert!(chain_sir_db(60.0, DEFAULT_SIR_TOLERANCE).unwrap() > 250.0);
    }
}
