//! Source descriptors: `cos:m`, `sin:m`, `mce:m`, `mse:m`, `planewave:alpha`.
//!
//! Laplace sources may be summed with `+` and scaled with `@amp`, as in
//! `cos:0+cos:2@0.8+sin:3@-0.5`.

use std::fmt;
use std::str::FromStr;

use qpax_core::laplace::{TrigKind, TrigTerm};
use qpax_core::mathieu::MathieuKind;
use qpax_core::Field;

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq)]
pub enum SourceSpec {
    Trig(Vec<TrigTerm<f64>>),
    Mode(MathieuKind, u32),
    PlaneWave(f64),
}

fn parse_order(s: &str, what: &str) -> Result<u32, HarnessError> {
    s.parse().map_err(|_| HarnessError::Config(format!("bad order `{s}` in {what}")))
}

fn parse_trig(term: &str) -> Result<TrigTerm<f64>, HarnessError> {
    let (body, amp) = match term.split_once('@') {
        Some((b, a)) => {
            let amp: f64 = a.parse().map_err(|_| HarnessError::Config(format!("bad amplitude `{a}` in `{term}`")))?;
            if !amp.is_finite() {
                return Err(HarnessError::Config(format!("amplitude must be finite in `{term}`")));
            }
            (b, amp)
        }
        None => (term, 1.0),
    };
    let (kind, m) = body.split_once(':').ok_or_else(|| HarnessError::Config(format!("bad source term `{term}`")))?;
    let kind = match kind {
        "cos" => TrigKind::Cos,
        "sin" => TrigKind::Sin,
        _ => return Err(HarnessError::Config(format!("unknown source family `{kind}`"))),
    };
    let m = parse_order(m, term)?;
    if kind == TrigKind::Sin && m == 0 {
        return Err(HarnessError::Config("sin:0 is identically zero".into()));
    }
    Ok(TrigTerm { kind, m, amp })
}

impl FromStr for SourceSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let s = s.trim();
        let (head, tail) = s.split_once(':').ok_or_else(|| HarnessError::Config(format!("bad source `{s}`")))?;
        match head {
            "cos" | "sin" => s.split('+').map(|t| parse_trig(t.trim())).collect::<Result<_, _>>().map(Self::Trig),
            "mce" => Ok(Self::Mode(MathieuKind::Ce, parse_order(tail, s)?)),
            "mse" => match parse_order(tail, s)? {
                0 => Err(HarnessError::Config("mse:0 does not exist".into())),
                m => Ok(Self::Mode(MathieuKind::Se, m)),
            },
            "planewave" => match tail.parse::<f64>() {
                Ok(a) if a.is_finite() => Ok(Self::PlaneWave(a)),
                _ => Err(HarnessError::Config(format!("bad incidence angle `{tail}`"))),
            },
            _ => Err(HarnessError::Config(format!("unknown source family `{head}`"))),
        }
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trig(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    let kind = if t.kind == TrigKind::Cos { "cos" } else { "sin" };
                    write!(f, "{kind}:{}", t.m)?;
                    if t.amp != 1.0 {
                        write!(f, "@{}", t.amp)?;
                    }
                }
                Ok(())
            }
            Self::Mode(MathieuKind::Ce, m) => write!(f, "mce:{m}"),
            Self::Mode(MathieuKind::Se, m) => write!(f, "mse:{m}"),
            Self::PlaneWave(a) => write!(f, "planewave:{a}"),
        }
    }
}

impl SourceSpec {
    pub fn is_laplace(&self) -> bool {
        matches!(self, Self::Trig(_))
    }

    /// Incident field for a scattering run; plane waves use the angle given
    /// here unless `alpha` overrides it.
    pub fn incident(&self, k: f64, epsilon: f64, alpha: Option<f64>) -> Result<Field, HarnessError> {
        let f = match (self, alpha) {
            (Self::Mode(kind, m), None) => Field::mode(*kind, *m, k, epsilon)?,
            (Self::Mode(..), Some(_)) => {
                return Err(HarnessError::Config("an incidence angle needs a planewave source".into()))
            }
            (Self::PlaneWave(a), alpha) => qpax_core::mathieu::plane_wave_incident(alpha.unwrap_or(*a), k, epsilon)?,
            (Self::Trig(_), _) => {
                return Err(HarnessError::Config(format!("`{self}` is a Laplace source; use mce, mse or planewave")))
            }
        };
        Ok(f)
    }
}
