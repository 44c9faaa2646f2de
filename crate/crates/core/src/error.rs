use thiserror::Error;

/// Errors raised by the simulator, protocols and codecs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty bit sequence")]
    EmptyBits,
    #[error("register of {0} qubits is outside the supported range 1..=24")]
    QubitCount(usize),
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },
    #[error("state norm {norm} deviates from 1 beyond tolerance")]
    NormViolation { norm: f64 },
    #[error("state norm {norm} is below the corruption threshold")]
    CorruptState { norm: f64 },
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("control and target must differ (both {0})")]
    SameQubit(usize),
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("expected a {expected}-qubit state, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("forced outcome {outcome} on qubit {qubit} has zero probability")]
    ImpossibleOutcome { qubit: usize, outcome: u8 },
    #[error("bit value {0} is not 0 or 1")]
    NotABit(u8),
    #[error("not a CBS: register is in superposition")]
    NotCbs,
    #[error("input is not one of the four encoded Bell states")]
    NotEncodedBell,
    #[error("qubit {0} is entangled with the rest of the register")]
    Entangled(usize),
    #[error("zero-norm branch")]
    ZeroNormBranch,
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed image: {0}")]
    MalformedImage(String),
    #[error("bitplane mismatch: {0}")]
    PlaneMismatch(String),
    #[error("length mismatch: sent {sent}, received {received}")]
    LengthMismatch { sent: usize, received: usize },
    #[error("requested {requested} samples from a population of {population}")]
    SampleTooLarge { requested: usize, population: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
