use alloc::string::String;
use core::fmt;

/// Errors raised by the group, orbit and formula engines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    NotPrimePower(u64),
    InvalidExponent(u32),
    ModulusTooLarge(u64),
    LevelMismatch {
        left: u32,
        right: u32,
    },
    NonUnitDeterminant {
        det: u32,
        modulus: u32,
    },
    EntryOutOfRange {
        entry: u64,
        modulus: u32,
    },
    IncompatiblePrime {
        expected: u32,
        found: u32,
    },
    InvalidTargetLevel {
        from: u32,
        to: u32,
    },
    /// Closure (or an enumeration of the same size) would exceed the element cap.
    ClosureTooLarge {
        cap: usize,
    },
    /// The ambient module of an isogeny scan exceeds the configured cap.
    AmbientTooLarge {
        ambient: u64,
        cap: u64,
    },
    NotStable,
    InvalidSubgroupOrder {
        r: u32,
        level_k: u32,
    },
    ModulusTooSmall {
        modulus: u32,
        minimum: u32,
    },
    NoOddDegreePoints {
        ell: u32,
        k: u32,
    },
    InconsistentFlags(String),
    InvalidDiscriminant(i64),
    NotFundamental(i64),
    UnknownBuiltin(String),
    BuiltinRequiresPrime {
        name: &'static str,
        ell: u32,
    },
    InvalidArgument(&'static str),
    /// An exact result does not fit the output integer type.
    Overflow(&'static str),
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::NotPrimePower(n) => write!(f, "{n} is not a prime power >= 2"),
            Error::InvalidExponent(k) => write!(f, "exponent must be >= 1, got {k}"),
            Error::ModulusTooLarge(n) => write!(f, "modulus {n} exceeds 2^31"),
            Error::LevelMismatch { left, right } => {
                write!(f, "level mismatch: {left} vs {right}")
            }
            Error::NonUnitDeterminant { det, modulus } => {
                write!(f, "determinant {det} is not a unit mod {modulus}")
            }
            Error::EntryOutOfRange { entry, modulus } => {
                write!(f, "entry {entry} is not a canonical residue mod {modulus}")
            }
            Error::IncompatiblePrime { expected, found } => {
                write!(f, "incompatible prime: expected {expected}, found {found}")
            }
            Error::InvalidTargetLevel { from, to } => {
                write!(
                    f,
                    "cannot move a group from exponent {from} to exponent {to}"
                )
            }
            Error::ClosureTooLarge { cap } => {
                write!(f, "closure too large: exceeds cap of {cap} elements")
            }
            Error::AmbientTooLarge { ambient, cap } => {
                write!(f, "ambient level {ambient} exceeds ambient cap {cap}")
            }
            Error::NotStable => write!(f, "cyclic subgroup is not stable under the group"),
            Error::InvalidSubgroupOrder { r, level_k } => {
                write!(f, "no cyclic subgroup of order l^{r} at exponent {level_k}")
            }
            Error::ModulusTooSmall { modulus, minimum } => {
                write!(f, "modulus {modulus} is below the minimum {minimum}")
            }
            Error::NoOddDegreePoints { ell, k } => {
                write!(f, "no odd-degree points on X1({ell}^{k})")
            }
            Error::InconsistentFlags(msg) => write!(f, "inconsistent class flags: {msg}"),
            Error::InvalidDiscriminant(d) => write!(f, "{d} is not a negative discriminant"),
            Error::NotFundamental(d) => write!(f, "{d} is not a fundamental discriminant"),
            Error::UnknownBuiltin(name) => write!(f, "unknown builtin group '{name}'"),
            Error::BuiltinRequiresPrime { name, ell } => {
                write!(f, "builtin '{name}' is only defined for l = {ell}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::Overflow(what) => write!(f, "{what} overflows"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
