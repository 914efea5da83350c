//! Physical-layer network coding (PNC) toolkit.
//!
//! The crate covers the full path of a two-way relay exchange:
//!
//! - [`mapping`]: symbol alphabets, network-coding arithmetic, modulation and
//!   PNC demodulation maps, and the existence check for a demodulation map.
//! - [`channel`]: AWGN point-to-point and superposition channels driven by a
//!   reproducible noise source, plus the linear-chain SIR series.
//! - [`detect`]: MAP thresholds for the relay, analytic BER of the three
//!   relaying schemes and the matching Monte Carlo estimators.
//! - [`capacity`]: per-cycle capacities of traditional, straightforward-NC and
//!   PNC relaying, including the PNC multiple-access bounds.
//! - [`chain`]: the slot-synchronous frame-forwarding state machine for an
//!   N-node regular linear network, and the synchronization overhead model.
//! - [`syncerr`]: SNR penalties caused by carrier-phase, carrier-frequency and
//!   symbol-timing offsets between the two transmitters.
//!
//! All energies are normalized so that one received bit has unit energy; the
//! noise level is carried by [`NoiseDensity`] and `snr_db = -10 log10(N0)`.

pub mod capacity;
pub mod chain;
pub mod channel;
pub mod detect;
mod error;
pub mod mapping;
pub mod syncerr;

pub use channel::{ChannelParams, NoiseDensity, NoiseStream};
pub use error::{Error, Result};
