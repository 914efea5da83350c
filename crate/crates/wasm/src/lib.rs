//! Browser bindings: each export takes plain numbers and returns a JSON
//! string of curves ready to plot. The `*_json` functions hold the logic and
//! are usable natively; the exported wrappers only convert errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use pnc::capacity::CapacityReport;
use pnc::channel::{derive_seed, ChannelParams, NoiseDensity};
use pnc::detect::{ber_monte_carlo, optimal_thresholds, BerScheme};
use pnc::syncerr::{
    freq_penalty_db, phase_penalty_avg_db, phase_penalty_db, time_penalty_avg_db, time_penalty_db, DEFAULT_ISI_SPAN,
    MAX_DF_T,
};

const MAX_POINTS: usize = 2001;

#[derive(Debug, Serialize)]
pub struct BerCurves {
    pub snr_db: Vec<f64>,
    pub traditional_hop: Vec<f64>,
    pub snc_xor: Vec<f64>,
    pub pnc_xor: Vec<f64>,
    pub gamma2: Vec<f64>,
    /// PNC Monte Carlo estimates, one per grid point, when requested.
    pub pnc_monte_carlo: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct CapacityCurves {
    pub snr_db: Vec<f64>,
    pub c_trad: Vec<f64>,
    pub c_snc: Vec<f64>,
    pub c_pnc_lo: Vec<f64>,
    pub c_pnc_up: Vec<f64>,
    pub gain_lo: Vec<f64>,
    pub gain_up: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Curve {
    pub offset: Vec<f64>,
    pub penalty_db: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct SyncCurves {
    pub phase: Curve,
    pub freq: Curve,
    pub time: Curve,
    pub phase_avg_db: f64,
    pub time_avg_db: f64,
}

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must be in [2, {MAX_POINTS}], got {points}"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need a finite range with lo < hi, got [{lo}, {hi}]"));
    }
    Ok((0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Analytic BER of the three relaying schemes over an SNR range, plus
/// optional PNC Monte Carlo points (`mc_trials = 0` skips them).
pub fn ber_curves_json(lo_db: f64, hi_db: f64, points: usize, mc_trials: u32, seed: u32) -> Result<String, String> {
    let snr_db = linspace(lo_db, hi_db, points)?;
    let n0: Vec<NoiseDensity> =
        snr_db.iter().map(|&s| NoiseDensity::from_snr_db(s)).collect::<pnc::Result<_>>().map_err(|e| e.to_string())?;
    let curve = |scheme: BerScheme| n0.iter().map(|&n| scheme.analytic(n)).collect();
    let pnc_monte_carlo = if mc_trials == 0 {
        None
    } else {
        let est = n0
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let params = ChannelParams { n0: n, seed: derive_seed(u64::from(seed), &[k as u64]) };
                // a single worker: the browser has no threads to shard over
                ber_monte_carlo(BerScheme::PncXor, &params, u64::from(mc_trials), 1).map(|e| e.p_hat)
            })
            .collect::<pnc::Result<_>>()
            .map_err(|e| e.to_string())?;
        Some(est)
    };
    to_json(&BerCurves {
        traditional_hop: curve(BerScheme::TraditionalHop),
        snc_xor: curve(BerScheme::SncXor),
        pnc_xor: curve(BerScheme::PncXor),
        gamma2: n0.iter().map(|&n| optimal_thresholds(n).gamma2).collect(),
        snr_db,
        pnc_monte_carlo,
    })
}

/// Capacities and gains over traditional relaying across an SNR range.
pub fn capacity_curves_json(lo_db: f64, hi_db: f64, points: usize) -> Result<String, String> {
    let snr_db = linspace(lo_db, hi_db, points)?;
    let rows: Vec<CapacityReport> =
        snr_db.iter().map(|&s| CapacityReport::at_snr_db(s)).collect::<pnc::Result<_>>().map_err(|e| e.to_string())?;
    let col = |f: fn(&CapacityReport) -> f64| rows.iter().map(f).collect();
    to_json(&CapacityCurves {
        c_trad: col(|r| r.c_traditional),
        c_snc: col(|r| r.c_snc),
        c_pnc_lo: col(|r| r.c_pnc_lower),
        c_pnc_up: col(|r| r.c_pnc_upper),
        gain_lo: col(|r| r.gain_lower),
        gain_up: col(|r| r.gain_upper),
        snr_db,
    })
}

/// Phase, frequency and timing penalty curves for one roll-off and
/// operating SNR.
pub fn sync_curves_json(beta: f64, snr0_db: f64, points: usize) -> Result<String, String> {
    let err = |e: pnc::Error| e.to_string();
    let curve = |xs: Vec<f64>, f: &dyn Fn(f64) -> pnc::Result<f64>| -> Result<Curve, String> {
        let penalty_db = xs.iter().map(|&x| f(x)).collect::<pnc::Result<_>>().map_err(err)?;
        Ok(Curve { offset: xs, penalty_db })
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    to_json(&SyncCurves {
        phase: curve(linspace(-half_pi, half_pi, points)?, &phase_penalty_db)?,
        freq: curve(linspace(0.0, MAX_DF_T, points)?, &freq_penalty_db)?,
        time: curve(linspace(-0.5, 0.5, points)?, &|dt| {
            Ok(time_penalty_db(dt, beta, snr0_db, DEFAULT_ISI_SPAN)?.penalty_db)
        })?,
        phase_avg_db: phase_penalty_avg_db(),
        time_avg_db: time_penalty_avg_db(beta, snr0_db).map_err(err)?,
    })
}

#[wasm_bindgen]
pub fn ber_curves(lo_db: f64, hi_db: f64, points: usize, mc_trials: u32, seed: u32) -> Result<String, JsError> {
    ber_curves_json(lo_db, hi_db, points, mc_trials, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn capacity_curves(lo_db: f64, hi_db: f64, points: usize) -> Result<String, JsError> {
    capacity_curves_json(lo_db, hi_db, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sync_curves(beta: f64, snr0_db: f64, points: usize) -> Result<String, JsError> {
    sync_curves_json(beta, snr0_db, points).map_err(|e| JsError::new(&e))
}
