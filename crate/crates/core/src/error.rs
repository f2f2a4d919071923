use alloc::format;
use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// Elimination met a pivot below the singularity threshold.
    Singular(String),
    /// A measurement provider has no value for a required ray.
    MissingRay(String),
    /// A ray clips a regularizing ball without passing through its center.
    NotInTDoublePrime(String),
    /// Malformed input: mismatched orders, dimensions, or inconsistent records.
    Invalid(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Prefixes the message with where the error happened.
    pub fn context(self, place: impl fmt::Display) -> Self {
        let wrap = |m: String| format!("{place}: {m}");
        match self {
            Error::Domain(m) => Error::Domain(wrap(m)),
            Error::Singular(m) => Error::Singular(wrap(m)),
            Error::MissingRay(m) => Error::MissingRay(m),
            Error::NotInTDoublePrime(m) => Error::NotInTDoublePrime(wrap(m)),
            Error::Invalid(m) => Error::Invalid(wrap(m)),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Singular(m) => write!(f, "singular matrix: {m}"),
            Error::MissingRay(m) => write!(f, "missing measurement for ray {m}"),
            Error::NotInTDoublePrime(m) => {
                write!(f, "ray clips a regularizing ball off-center: {m}")
            }
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl core::error::Error for Error {}
