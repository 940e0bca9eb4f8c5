//! Boundary integral solvers for Laplace and Helmholtz problems on high
//! aspect ratio ellipses.
//!
//! Five discretisations are provided: the periodic trapezoid rule (PTR), its
//! mirror-corrected variant (MTR), Kress product quadrature (PQR) and its
//! mirror-corrected variant (MPQR), and the parity asymptotic scheme (QPAX),
//! which treats the even and odd parts of the data under `s -> pi - s` with
//! different scalings in the aspect ratio `eps`.
//!
//! Everything is generic over [`Real`]; the aliases below fix `f64`.

pub mod error;
pub mod geometry;
pub mod helmholtz;
pub mod incident;
pub mod laplace;
pub mod linalg;
pub mod mathieu;
pub mod scalar;
pub mod specfun;
pub mod spectral;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Ptr,
    Mtr,
    Pqr,
    Mpqr,
    Qpax,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Ptr, Method::Mtr, Method::Pqr, Method::Mpqr, Method::Qpax];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ptr => "ptr",
            Self::Mtr => "mtr",
            Self::Pqr => "pqr",
            Self::Mpqr => "mpqr",
            Self::Qpax => "qpax",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    SoundHard,
    SoundSoft,
}

pub type C64 = Cx<f64>;
pub type Ellipse = geometry::EllipseShape<f64>;
pub type Grid = spectral::QuadratureGrid<f64>;
pub type Pair = spectral::ParityPair<f64>;
pub type Ops = spectral::SpectralOps<f64>;
pub type RealMatrix = linalg::Matrix<f64>;
pub type ComplexMatrix = linalg::Matrix<C64>;
pub type Laplace = laplace::LaplaceProblem<f64>;
pub type Density = laplace::DensitySolution<f64>;
pub type Scattering = helmholtz::ScatteringProblem<f64>;
pub type BoundaryField = helmholtz::BoundaryFieldSolution<f64>;
pub type Basis = mathieu::MathieuBasis<f64>;
pub type Field = mathieu::MathieuField<f64>;
pub type Oracle = mathieu::ScatteringOracle<f64>;
