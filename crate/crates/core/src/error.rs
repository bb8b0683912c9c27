use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate network: {0}")]
    DegenerateNetwork(&'static str),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("frequency mismatch: {left} Hz vs {right} Hz")]
    FrequencyMismatch { left: f64, right: f64 },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("stub length {length} λ is within tolerance of a tan/cot pole")]
    StubSingularity { length: f64 },
    #[error("reflection coefficient 1 maps to an open circuit")]
    OpenCircuit,

    #[error("malformed option line: {0}")]
    MalformedOptionLine(String),
    #[error("frequency {freq} Hz on line {line} does not increase")]
    NonMonotonicFrequency { line: usize, freq: f64 },
    #[error("line {line}: expected 9 columns, found {found}")]
    WrongColumnCount { line: usize, found: usize },
    #[error("line {line}: cannot parse number {token:?}")]
    BadNumber { line: usize, token: String },
    #[error("unsupported parameter type {0}: only S-parameters are accepted")]
    UnsupportedParamType(String),
    #[error("unsupported Touchstone version: found keyword {0}, only v1 files are accepted")]
    UnsupportedVersion(String),
    #[error("document contains no data records")]
    EmptyDocument,
    #[error("frequency {freq} Hz outside data band [{min}, {max}] Hz")]
    OutOfBand { freq: f64, min: f64, max: f64 },

    #[error("K factor undefined for a unilateral device (|s12·s21| below threshold)")]
    UnilateralDevice,
    #[error("stability circle center at infinity ({0} side): boundary is a straight line")]
    CircleDegenerate(&'static str),
    #[error("K-Δ test and μ-test disagree (K = {k}, |Δ| = {delta_mag}, μ = {mu})")]
    StabilityTestDisagreement { k: f64, delta_mag: f64, mu: f64 },

    #[error("device is potentially unstable (K = {k}, |Δ| = {delta_mag}); consult the stability circles instead of a conjugate match")]
    PotentiallyUnstable { k: f64, delta_mag: f64 },
    #[error("negative discriminant in the conjugate-match quadratic")]
    NegativeDiscriminant,
    #[error("simultaneous match inconsistent: |Γ_in − Γ_S*| = {residual}")]
    MatchInconsistent { residual: f64 },
    #[error("gain routes disagree by {diff_db} dB")]
    GainCrossCheck { diff_db: f64 },
    #[error("reflection coefficient magnitude {0} is not inside the unit disk")]
    ReflectionOutOfDisk(f64),
    #[error("invalid noise parameters: {0}")]
    InvalidNoiseParams(String),
    #[error("target noise factor {target} is below F_min {f_min}")]
    TargetBelowFmin { target: f64, f_min: f64 },

    #[error("target is already matched to the reference impedance")]
    AlreadyMatched,
    #[error("no realizable L-section for this target")]
    NoRealizableSection,
    #[error("no stub solution found: {0}")]
    NoSolution(String),
    #[error("unknown synthesizer {0:?}")]
    UnknownSynthesizer(String),

    #[error("w/h = {0} outside the supported range [0.01, 100]")]
    AspectRatioOutOfRange(f64),
    #[error("impedance {0} Ω cannot be synthesized on this substrate")]
    TargetOutOfRange(f64),
    #[error("invalid substrate: {0}")]
    InvalidSubstrate(String),

    #[error("infeasible bias specification: {0}")]
    InfeasibleSpec(String),
    #[error("no DC operating point: transistor in cutoff (V_X = {v_x} V)")]
    NoOperatingPoint { v_x: f64 },

    #[error("config error: {0}")]
    Config(String),
    #[error("verification failed at f0: {0}")]
    VerificationFailed(String),
    #[error("unknown report form {0:?}")]
    UnknownReportForm(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
