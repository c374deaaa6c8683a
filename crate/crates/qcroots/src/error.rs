use std::fmt;

/// Why a candidate discriminant was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscriminantReason {
    Zero,
    PerfectSquare,
    /// Divisible by `p²`.
    SquareFactor(u64),
    OneModFour,
}

impl fmt::Display for DiscriminantReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscriminantReason::Zero => write!(f, "discriminant is zero"),
            DiscriminantReason::PerfectSquare => write!(f, "discriminant is a perfect square"),
            DiscriminantReason::SquareFactor(p) => {
                write!(f, "discriminant has the square factor {}", p * p)
            }
            DiscriminantReason::OneModFour => write!(f, "discriminant ≡ 1 mod 4"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid D = {d}: {reason}")]
    InvalidDiscriminant { d: i64, reason: DiscriminantReason },
    #[error("D = {0} is not positive; closed geodesics need a real quadratic field")]
    NotRealQuadratic(i64),
    #[error("modulus {m} exceeds the factor table bound {bound}")]
    ModulusOutOfRange { m: u64, bound: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("congruence filter n = {n}, nu = {nu} admits no roots: nu² ≢ D mod n")]
    InvalidFilter { n: u64, nu: u64 },
    #[error("no root with m ≡ 0, mu ≡ {nu} (mod {n}) in class {l} below m = {bound}")]
    NoFilteredRoot { n: u64, nu: u64, l: usize, bound: u64 },
    #[error("reduced form {0:?} does not lie in any class cycle")]
    NoClassMatch([i128; 3]),
    #[error("{what}: budget of {budget} exceeded")]
    Budget { what: &'static str, budget: u64 },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },
    #[error("empty point sequence")]
    EmptySequence,
}

pub type Result<T> = std::result::Result<T, Error>;
