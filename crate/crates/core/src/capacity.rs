//! Capacity per transmission cycle for the traditional, straightforward
//! network coding and PNC schemes.
//!
//! All entropies are in bits with `0 log 0 = 0`.

use crate::channel::NoiseDensity;
use crate::detect::{ber_bpsk, gaussian_interval, optimal_thresholds, q_func};
use crate::{Error, Result};

const SUM_SLACK: f64 = 1e-12;

/// Entropy of `probs` plus the implicit remainder `1 - Σ probs`.
pub fn entropy(probs: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &p in probs {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        total += p;
    }
    if total > 1.0 + SUM_SLACK {
        return Err(Error::ProbabilitySum(total));
    }
    Ok(h(probs))
}

fn plog(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Unchecked entropy for probabilities produced internally.
fn h(probs: &[f64]) -> f64 {
    let rest = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    probs.iter().map(|&p| plog(p)).sum::<f64>() + plog(rest)
}

/// Crossover probabilities of the hard-decision ternary channel
/// `{-2, 0, 2} -> {-2, 0, 2}` seen by the relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverProbs {
    /// `P(decide ±2 | sum = 0)`, per side.
    pub p1: f64,
    /// `P(decide 0 | sum = ±2)`.
    pub p2: f64,
    /// `P(decide ∓2 | sum = ±2)`.
    pub p3: f64,
}

impl CrossoverProbs {
    /// XOR-bit error rate implied by the crossovers.
    pub fn xor_ber(&self) -> f64 {
        0.5 * (2.0 * self.p1) + 0.5 * self.p2
    }
}

pub fn crossover_probs(n0: NoiseDensity) -> CrossoverProbs {
    let g = optimal_thresholds(n0).gamma2;
    let s = n0.sigma();
    CrossoverProbs { p1: q_func(g / s), p2: gaussian_interval(-g, g, 2.0, s), p3: q_func((g + 2.0) / s) }
}

/// `1 - H(p)`.
pub fn bsc_capacity(p: f64) -> Result<f64> {
    Ok(1.0 - entropy(&[p])?)
}

fn bsc(p: f64) -> f64 {
    1.0 - h(&[p])
}

/// Four slots per exchange.
pub fn cap_traditional(n0: NoiseDensity) -> f64 {
    bsc(ber_bpsk(n0)) / 4.0
}

/// Three slots per exchange.
pub fn cap_snc(n0: NoiseDensity) -> f64 {
    bsc(ber_bpsk(n0)) / 3.0
}

/// Upper bound on the multiple-access capacity, closed form.
pub fn mac_upper(x: &CrossoverProbs) -> f64 {
    let CrossoverProbs { p1, p2, p3 } = *x;
    let q = (1.0 - p2 + 2.0 * p1) / 4.0;
    h(&[(1.0 - p2 + 2.0 * p1) / 2.0]) * (1.0 - (h(&[p2, p3]) + h(&[p1, p1])) / (2.0 * h(&[q, q])))
}

/// The same bound as the product of the ternary mutual information and the
/// ratio of binary to ternary output entropy.
pub fn mac_upper_product(x: &CrossoverProbs) -> f64 {
    let CrossoverProbs { p1, p2, p3 } = *x;
    let q = (1.0 - p2 + 2.0 * p1) / 4.0;
    let ternary_out = h(&[q, q]);
    let mutual = ternary_out - 0.5 * (h(&[p2, p3]) + h(&[p1, p1]));
    mutual * h(&[(1.0 - p2 + 2.0 * p1) / 2.0]) / ternary_out
}

/// Lower bound on the multiple-access capacity, clamped at zero.
pub fn mac_lower(x: &CrossoverProbs) -> f64 {
    let CrossoverProbs { p1, p2, .. } = *x;
    (h(&[(1.0 - 2.0 * p1 + p2) / 2.0]) - h(&[2.0 * p1]) / 2.0 - h(&[p2]) / 2.0).max(0.0)
}

/// Time-sharing combination of multiple-access and broadcast phases.
fn harmonic(cm: f64, cb: f64) -> f64 {
    if cm <= 0.0 || cb <= 0.0 {
        0.0
    } else {
        1.0 / (1.0 / cm + 1.0 / cb)
    }
}

pub fn cap_pnc_upper(n0: NoiseDensity) -> f64 {
    harmonic(mac_upper(&crossover_probs(n0)), bsc(ber_bpsk(n0)))
}

pub fn cap_pnc_lower(n0: NoiseDensity) -> f64 {
    harmonic(mac_lower(&crossover_probs(n0)), bsc(ber_bpsk(n0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityReport {
    pub snr_db: f64,
    pub c_traditional: f64,
    pub c_snc: f64,
    pub c_pnc_upper: f64,
    pub c_pnc_lower: f64,
    pub gain_upper: f64,
    pub gain_lower: f64,
    pub gain_snc: f64,
}

impl CapacityReport {
    pub fn at_snr_db(snr_db: f64) -> Result<Self> {
        let n0 = NoiseDensity::from_snr_db(snr_db)?;
        let c1 = cap_traditional(n0);
        let c2 = cap_snc(n0);
        let up = cap_pnc_upper(n0);
        let lo = cap_pnc_lower(n0);
        Ok(Self {
            snr_db,
            c_traditional: c1,
            c_snc: c2,
            c_pnc_upper: up,
            c_pnc_lower: lo,
            gain_upper: up / c1,
            gain_lower: lo / c1,
            gain_snc: c2 / c1,
        })
    }
}

pub fn gain_table(snr_db: &[f64]) -> Result<Vec<CapacityReport>> {
    snr_db.iter().map(|&s| CapacityReport::at_snr_db(s)).collect()
}
