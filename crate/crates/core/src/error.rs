use thiserror::Error;

use crate::fock::FockState2;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("transmittance must lie in [0, 1], got {0}")]
    InvalidTransmittance(f64),

    #[error("gain must be finite and at least 1, got {0}")]
    InvalidGain(f64),

    #[error("state {state} lies outside the truncation n_max = {n_max}")]
    OutsideTruncation { state: FockState2, n_max: u32 },

    #[error("qubit {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("qubit {0} appears more than once in a gate")]
    DuplicateQubit(usize),

    #[error("gate block is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("gate {kind} expects {expected}, got {got}")]
    GateArity {
        kind: &'static str,
        expected: String,
        got: String,
    },

    #[error("state vector of length {0} is not a power of two")]
    BadStateLength(usize),

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("qubits ({0}, {1}) are not in a |00> product factor")]
    NotInZeroState(usize, usize),

    #[error("post-selection onto {0} has zero probability")]
    ZeroProbability(String),

    #[error("shot count must be at least 1")]
    NoShots,

    #[error("value {value} does not fit in {width} bits")]
    EncodingOverflow { value: u64, width: u32 },

    #[error("invalid bit string {0:?}")]
    InvalidBits(String),

    #[error("physical encoding supports sectors up to {max}, got {got}")]
    UnsupportedSector { got: u32, max: u32 },

    #[error("input {0} is not supported by the q = 1 circuit")]
    UnsupportedInput(FockState2),

    #[error("circuit realisation is only available for q = 1, got q = {0}")]
    UnsupportedOrder(u32),

    #[error("element <{out}|U|{input}> did not converge: n_max {n_max} -> {doubled} changed it by {change:.3e}")]
    NonConvergence {
        out: FockState2,
        input: FockState2,
        n_max: u32,
        doubled: u32,
        change: f64,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
