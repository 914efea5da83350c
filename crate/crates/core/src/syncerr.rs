//! SNR penalties caused by imperfect synchronization between the two
//! transmitters of a PNC exchange.
//!
//! Three offsets are treated separately:
//!
//! - carrier phase `θ`, with the receiver mixing at `θ/2`;
//! - carrier frequency `2Δf`, with the receiver mixing at the nominal carrier;
//! - symbol timing `Δt`, with raised-cosine pulses and the receiver sampling
//!   halfway between the two arrivals.
//!
//! Phase and frequency offsets only scale the useful signal. A timing offset
//! also leaks neighboring symbols into the sample, so its penalty depends on
//! the operating SNR.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::channel::NoiseStream;
use crate::{Error, Result};

/// Largest `Δf·T` accepted by the frequency model.
pub const MAX_DF_T: f64 = 0.25;
/// Largest operating SNR accepted by the timing model, in dB.
pub const MAX_SNR0_DB: f64 = 30.0;
pub const DEFAULT_ISI_SPAN: usize = 64;
pub const MIN_ISI_SPAN: usize = 16;

fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Offsets between the two transmitters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncOffsets {
    /// Carrier-phase offset in radians, in `[-π/2, π/2)`.
    pub theta: f64,
    /// Half the carrier-frequency offset times the symbol period.
    pub df_t: f64,
    /// Timing offset as a fraction of the symbol period.
    pub dt_frac: f64,
    /// Raised-cosine roll-off.
    pub beta: f64,
}

impl SyncOffsets {
    /// Validates the offsets. `theta` may be any finite angle and is brought
    /// into `[-π/2, π/2)`.
    pub fn new(theta: f64, df_t: f64, dt_frac: f64, beta: f64) -> Result<Self> {
        let (theta, _) = normalize_phase(theta)?;
        check_df_t(df_t)?;
        check_dt_frac(dt_frac)?;
        check_beta(beta)?;
        Ok(Self { theta, df_t, dt_frac, beta })
    }
}

/// Penalty of one offset, with the quantities it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyResult {
    pub penalty_db: f64,
    /// Useful signal power relative to perfect synchronization.
    pub desired_power: f64,
    /// Variance of the inter-symbol interference, timing offsets only.
    pub isi_variance: Option<f64>,
}

/// Brings `theta` into `[-π/2, π/2)`.
///
/// Each shift by `π` is absorbed by negating the second transmitter's symbol;
/// the returned flag says whether an odd number of shifts was needed.
pub fn normalize_phase(theta: f64) -> Result<(f64, bool)> {
    if !theta.is_finite() {
        return Err(Error::OutsideModel { name: "theta", value: theta, range: "finite" });
    }
    let k = ((theta + FRAC_PI_2) / PI).floor();
    let mut t = theta - k * PI;
    // rounding can land exactly on the open end
    if t >= FRAC_PI_2 {
        t -= PI;
    }
    Ok((t, k.rem_euclid(2.0) == 1.0))
}

/// `10 log10(cos²(θ/2))`.
pub fn phase_penalty_db(theta: f64) -> Result<f64> {
    let (t, _) = normalize_phase(theta)?;
    Ok(to_db((t / 2.0).cos().powi(2)))
}

/// Linear-domain average of `cos²(θ/2)` over `θ` uniform on `[-π/2, π/2]`,
/// in dB: `10 log10(1/π + 1/2)`.
pub fn phase_penalty_avg_db() -> f64 {
    to_db(1.0 / PI + 0.5)
}

fn check_df_t(df_t: f64) -> Result<()> {
    if (0.0..=MAX_DF_T).contains(&df_t) {
        Ok(())
    } else {
        Err(Error::OutsideModel { name: "df_t", value: df_t, range: "[0, 0.25]" })
    }
}

fn check_dt_frac(dt: f64) -> Result<()> {
    if (-0.5..=0.5).contains(&dt) {
        Ok(())
    } else {
        Err(Error::OutsideModel { name: "dt_frac", value: dt, range: "[-0.5, 0.5]" })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideModel { name: "beta", value: beta, range: "(0, 1]" })
    }
}

fn check_snr0(snr0_db: f64) -> Result<()> {
    if snr0_db.is_finite() && snr0_db <= MAX_SNR0_DB {
        Ok(())
    } else {
        Err(Error::OutsideModel { name: "snr0_db", value: snr0_db, range: "(-inf, 30]" })
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `10 log10(sin²(2πΔfT) / (2πΔfT)²)`.
pub fn freq_penalty_db(df_t: f64) -> Result<f64> {
    check_df_t(df_t)?;
    Ok(to_db(sinc(2.0 * df_t).powi(2)))
}

/// Raised-cosine pulse at `t/T`. The removable singularities at
/// `t/T = ±1/(2β)` return their limit `(π/4) sinc(1/(2β))`.
pub fn raised_cosine(t: f64, beta: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let bt = 2.0 * beta * t;
    if (bt.abs() - 1.0).abs() < 1e-10 {
        return PI / 4.0 * sinc(1.0 / (2.0 * beta));
    }
    sinc(t) * (PI * beta * t).cos() / (1.0 - bt * bt)
}

/// SINR penalty of a timing offset relative to the noise-limited SNR.
///
/// The two pulses arrive `±Δt/2` around the sampling instant. Symbols are
/// independent with unit power, so the interference variance is the sum of
/// the squared pulse tails of both transmitters over `1 ≤ |m| ≤ isi_span`.
pub fn time_penalty_db(dt_frac: f64, beta: f64, snr0_db: f64, isi_span: usize) -> Result<PenaltyResult> {
    check_dt_frac(dt_frac)?;
    check_beta(beta)?;
    check_snr0(snr0_db)?;
    if isi_span < MIN_ISI_SPAN {
        return Err(Error::OutsideModel { name: "isi_span", value: isi_span as f64, range: "[16, inf)" });
    }
    let half = dt_frac / 2.0;
    let desired = raised_cosine(half, beta).powi(2);
    let mut isi = 0.0;
    for m in 1..=isi_span as i64 {
        for m in [m as f64, -(m as f64)] {
            isi += 0.25 * (raised_cosine(m + half, beta).powi(2) + raised_cosine(m - half, beta).powi(2));
        }
    }
    let noise = 10f64.powf(-snr0_db / 10.0);
    Ok(PenaltyResult {
        penalty_db: to_db(desired) - to_db((isi + noise) / noise),
        desired_power: desired,
        isi_variance: Some(isi),
    })
}

/// Composite Simpson rule on `[a, b]` with `intervals` (rounded up to even).
fn simpson(a: f64, b: f64, intervals: usize, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let n = intervals.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut s = f(a)? + f(b)?;
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h)?;
    }
    Ok(s * h / 3.0)
}

const AVG_INTERVALS: usize = 2000;

/// Average of the dB-domain timing penalty over `Δt/T` uniform on
/// `[-0.5, 0.5]`.
pub fn time_penalty_avg_db(beta: f64, snr0_db: f64) -> Result<f64> {
    simpson(-0.5, 0.5, AVG_INTERVALS, |dt| Ok(time_penalty_db(dt, beta, snr0_db, DEFAULT_ISI_SPAN)?.penalty_db))
}

/// Waveform-level estimate of the phase penalty.
///
/// Two BPSK carriers with phase offset `theta` are sampled over each symbol,
/// noise is added per sample and a correlator mixes at `θ/2`. The amplitude
/// gain relative to perfect alignment is fitted by least squares and returned
/// as `10 log10(gain²)`. `snr_db` is the per-transmitter SNR at the correlator
/// output.
pub fn phase_penalty_monte_carlo_db(theta: f64, symbols: u64, snr_db: f64, seed: u64) -> Result<f64> {
    const SAMPLES: usize = 32;
    const CYCLES: f64 = 4.0;
    let (folded, flip) = normalize_phase(theta)?;
    if symbols == 0 {
        return Err(Error::TooFewTrials { min: 1, got: 0 });
    }
    let dt = 1.0 / SAMPLES as f64;
    // correlator noise variance (T/2)² 10^(-snr/10) spread over the samples
    let out_var = 0.25 * 10f64.powf(-snr_db / 10.0);
    let sample_std = (out_var / (dt * 0.5)).sqrt();
    let mut noise = NoiseStream::new(seed, 0);
    // the receiver works with the folded offset and reads a2 with flipped sign
    let sign2 = if flip { -1.0 } else { 1.0 };
    let mix: Vec<f64> = (0..SAMPLES).map(|k| (TAU * CYCLES * (k as f64 + 0.5) * dt + folded / 2.0).cos()).collect();
    let c1: Vec<f64> = (0..SAMPLES).map(|k| (TAU * CYCLES * (k as f64 + 0.5) * dt).cos()).collect();
    let c2: Vec<f64> = (0..SAMPLES).map(|k| (TAU * CYCLES * (k as f64 + 0.5) * dt + theta).cos()).collect();
    let (mut num, mut den) = (0.0, 0.0);
    for _ in 0..symbols {
        let a1 = if noise.bit() { 1.0 } else { -1.0 };
        let a2 = if noise.bit() { 1.0 } else { -1.0 };
        let mut r = 0.0;
        for k in 0..SAMPLES {
            let s = a1 * c1[k] + a2 * c2[k] + sample_std * noise.standard_normal();
            r += s * mix[k] * dt;
        }
        let ideal = (a1 + sign2 * a2) * 0.5;
        num += r * ideal;
        den += ideal * ideal;
    }
    let gain = num / den;
    Ok(to_db(gain * gain))
}
