use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("precision N = {0} is too small to Hensel-lift")]
    PrecisionTooSmall(u32),

    #[error("p^d or p^N exceeds the supported 126-bit modulus (p = {p}, d = {d}, N = {n})")]
    ModulusTooWide { p: u64, d: usize, n: u32 },

    #[error("zero input: {0}")]
    ZeroInput(&'static str),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("context too small for zeta_{m}: residue degree {have} given, {min_degree} required")]
    ContextTooSmall { m: u64, have: usize, min_degree: usize },

    #[error("zeta_{m} needs residue degree {needed}, above the cap {cap}")]
    DegreeCapExceeded { m: u64, needed: usize, cap: usize },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("p = {p} is not totally split in the field of conductor {f}")]
    NotSplit { p: u64, f: u64 },

    #[error("prime {ell} ramifies in the field of conductor {m}")]
    Ramified { ell: u64, m: u64 },

    #[error("field of conductor {sub} is not a subfield of the field of conductor {sup}")]
    NotSubfield { sub: u64, sup: u64 },

    #[error("mismatched operands: {0}")]
    Mismatch(String),

    #[error("unsupported character: {0}")]
    UnsupportedCharacter(String),

    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),

    #[error("discriminant {d} exceeds the bound {bound}")]
    DiscriminantTooLarge { d: i64, bound: i64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("internal consistency check failed: {0}")]
    SelfCheck(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
