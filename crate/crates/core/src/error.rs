use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("noise density must be positive and finite, got {0}")]
    InvalidNoiseDensity(f64),

    #[error("symbol alphabet needs at least 2 symbols, got {0}")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} is outside the alphabet 0..{size}")]
    SymbolOutOfRange { symbol: usize, size: usize },

    #[error("{0} is not a valid noiseless superposition")]
    InvalidSuperposition(f64),

    #[error("modulation map is not one-to-one: symbols {0} and {1} share amplitude {2}")]
    NonInjectiveModulation(usize, usize, f64),

    #[error("modulation map has {got} amplitudes for an alphabet of {expected}")]
    ModulationSize { expected: usize, got: usize },

    #[error("no PNC demodulation map exists: {0}")]
    MappingViolation(String),

    #[error("path-loss exponent {0} <= 2: interference series diverges")]
    DivergentInterference(f64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("probabilities sum to {0} > 1")]
    ProbabilitySum(f64),

    #[error("Monte Carlo run needs at least {min} trials, got {got}")]
    TooFewTrials { min: u64, got: u64 },

    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),

    #[error("frame lengths differ: {0} vs {1} bits")]
    FrameLength(usize, usize),

    #[error("frames must carry at least one bit")]
    EmptyFrame,

    #[error("unidirectional mode carries no reverse traffic, but Y frame {0} is not null")]
    ReverseTraffic(usize),

    #[error("chain needs at least 3 nodes, got {0}")]
    ChainTooShort(usize),

    #[error("chain run needs at least {min} slots, got {got}")]
    TooFewSlots { min: u64, got: u64 },

    #[error("protocol violation at slot {slot}, node {node}: {detail}")]
    Protocol { slot: u64, node: usize, detail: String },

    #[error("source rate {0} outside [0, 0.5] frame/slot")]
    InvalidRate(f64),

    #[error("sync budget infeasible: Ts = {ts} s exceeds Tp = {tp} s")]
    InfeasibleSyncBudget { ts: f64, tp: f64 },

    #[error("{name} = {value} is outside the model range {range}")]
    OutsideModel { name: &'static str, value: f64, range: &'static str },
}
