//! Failure taxonomy for the whole pipeline.
//!
//! Hypothesis failures (the input is simply not in the class the theory
//! covers) and internal inconsistencies (the theory promised something the
//! computation contradicts) are distinct variants so callers can tell a bad
//! input from a bug.

use alloc::string::String;
use core::fmt;

use crate::jacobian::JacobianReport;
use crate::mapform::ScatterWitness;
use crate::poly::{BivarPoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// f or g has a nonzero degree-0 coefficient; the pipeline expects maps
    /// fixing the origin.
    ConstantTermPresent { f_constant: Rational, g_constant: Rational },
    /// Degree 1 is missing from the decomposition.
    NoLinearPart,
    /// The degree-1 part has determinant zero (so the Jacobian vanishes at
    /// the origin and cannot be a nonzero constant).
    SingularLinearPart,
    /// The degree set has a repeated pairwise sum; the witness quadruple
    /// satisfies d_i + d_j = d_p + d_q with {d_i,d_j} != {d_p,d_q}.
    NotScattered(ScatterWitness),
    /// The Jacobian is zero or has a positive-degree term.
    JacobianNotUnit(JacobianReport),
    /// Coefficient extraction at `degree` hit a nonzero forced Jacobian
    /// coefficient: residual = (d-j+1)*s_{d-j+1,j-1} + j*t_{d-j,j}.
    InconsistentCoefficients { degree: u32, j: u32, residual: Rational },
    /// The squared-minor identity needs both degrees >= 2.
    DegreeTooSmall { degree: u32 },
    /// A structural consequence that vanishing minors guarantee failed to
    /// hold. On an input that passed the scattered and Jacobian gates this
    /// indicates an internal bug, never a property of the input.
    StructureInconsistent(String),
    /// A synthesized inverse failed composition verification; `residual` is
    /// the first nonzero difference, `identity` names which of the four
    /// compositions produced it.
    VerificationFailed { identity: &'static str, residual: BivarPoly },
    /// A generator request that cannot be satisfied (bad degree set, zero
    /// bound, singular twist, ...).
    InvalidSpec(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ConstantTermPresent { f_constant, g_constant } => write!(
                f,
                "map has constant terms (f: {}, g: {}); translate them away first",
                f_constant, g_constant
            ),
            Error::NoLinearPart => write!(f, "map has no degree-1 component"),
            Error::SingularLinearPart => write!(f, "degree-1 component is singular"),
            Error::NotScattered(w) => write!(
                f,
                "degree set is not scattered: {} + {} = {} + {} with different degree pairs",
                w.d_i, w.d_j, w.d_p, w.d_q
            ),
            Error::JacobianNotUnit(report) => match &report.nonconstant_witness {
                Some((i, j, c)) => write!(
                    f,
                    "jacobian is not a nonzero constant: coefficient of x^{}*y^{} is {}",
                    i, j, c
                ),
                None => write!(f, "jacobian is identically zero"),
            },
            Error::InconsistentCoefficients { degree, j, residual } => write!(
                f,
                "coefficient extraction failed at degree {}, position j={}: forced jacobian coefficient {} is nonzero",
                degree, j, residual
            ),
            Error::DegreeTooSmall { degree } => {
                write!(f, "squared-minor identity needs degree >= 2, got {}", degree)
            }
            Error::StructureInconsistent(detail) => {
                write!(f, "internal structure inconsistency: {}", detail)
            }
            Error::VerificationFailed { identity, residual } => write!(
                f,
                "inverse verification failed: {} left residual {}",
                identity, residual
            ),
            Error::InvalidSpec(detail) => write!(f, "invalid generator request: {}", detail),
        }
    }
}
