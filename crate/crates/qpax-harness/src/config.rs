use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qpax_core::Method;
use serde::Deserialize;

use crate::source::SourceSpec;
use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    LaplaceConvergence,
    HelmholtzConvergence,
    SoftConvergence,
    AngleSweep,
    FieldMap,
    Selftest,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        Self::LaplaceConvergence,
        Self::HelmholtzConvergence,
        Self::SoftConvergence,
        Self::AngleSweep,
        Self::FieldMap,
        Self::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::LaplaceConvergence => "laplace-convergence",
            Self::HelmholtzConvergence => "helmholtz-convergence",
            Self::SoftConvergence => "soft-convergence",
            Self::AngleSweep => "angle-sweep",
            Self::FieldMap => "field-map",
            Self::Selftest => "selftest",
        }
    }

    fn is_scattering(self) -> bool {
        !matches!(self, Self::LaplaceConvergence | Self::Selftest)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> From<OneOrMany<T>> for Vec<T> {
    fn from(v: OneOrMany<T>) -> Self {
        match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(v) => v,
        }
    }
}

fn one_or_many<'de, D, T>(d: D) -> Result<Option<Vec<T>>, D::Error>
where
    D: serde::Deserializer<'de>,
    T: Deserialize<'de>,
{
    Ok(Option::<OneOrMany<T>>::deserialize(d)?.map(Vec::from))
}

/// Raw settings from flags or a JSON document; keys mirror the flag names.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    pub experiment: Option<String>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub method: Option<Vec<String>>,
    pub n: Option<usize>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub eps_count: Option<usize>,
    pub eps: Option<f64>,
    pub k: Option<f64>,
    pub source: Option<String>,
    #[serde(default, deserialize_with = "one_or_many")]
    pub alpha: Option<Vec<f64>>,
    pub grid: Option<usize>,
    pub extent: Option<f64>,
    pub out: Option<PathBuf>,
    pub timing: Option<bool>,
}

impl Settings {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            experiment: self.experiment.or(base.experiment),
            method: self.method.or(base.method),
            n: self.n.or(base.n),
            eps_min: self.eps_min.or(base.eps_min),
            eps_max: self.eps_max.or(base.eps_max),
            eps_count: self.eps_count.or(base.eps_count),
            eps: self.eps.or(base.eps),
            k: self.k.or(base.k),
            source: self.source.or(base.source),
            alpha: self.alpha.or(base.alpha),
            grid: self.grid.or(base.grid),
            extent: self.extent.or(base.extent),
            out: self.out.or(base.out),
            timing: self.timing.or(base.timing),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldMapSpec {
    pub epsilon: f64,
    pub grid: usize,
    pub extent: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub methods: Vec<Method>,
    /// Half the number of quadrature points.
    pub n: usize,
    pub eps: Vec<f64>,
    pub k: f64,
    pub source: SourceSpec,
    pub alphas: Vec<f64>,
    pub field: Option<FieldMapSpec>,
    pub out: Option<PathBuf>,
    pub timing: bool,
}

/// `count` log-spaced values from `min` to `max`, both included.
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>, HarnessError> {
    if count < 2 {
        return Err(HarnessError::Config(format!("eps-count must be at least 2, got {count}")));
    }
    for e in [min, max] {
        if !(e > 0.0 && e < 1.0) {
            return Err(HarnessError::Config(format!("eps values must lie in (0, 1), got {e}")));
        }
    }
    if min > max {
        return Err(HarnessError::Config(format!("eps-min {min} exceeds eps-max {max}")));
    }
    let (a, b) = (min.log10(), max.log10());
    let step = (b - a) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| match i {
            0 => min,
            _ if i == count - 1 => max,
            _ => 10f64.powf(a + step * i as f64),
        })
        .collect())
}

fn reject(kind: ExperimentKind, key: &str, set: bool) -> Result<(), HarnessError> {
    if set {
        Err(HarnessError::Config(format!("`{key}` does not apply to {kind}")))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn resolve(s: Settings) -> Result<Self, HarnessError> {
        let kind: ExperimentKind =
            s.experiment.as_deref().ok_or_else(|| HarnessError::Config("no experiment given".into()))?.parse()?;
        use ExperimentKind::*;
        let sweep = matches!(kind, AngleSweep);
        let map = matches!(kind, FieldMap);
        reject(kind, "alpha", s.alpha.is_some() && !sweep)?;
        reject(kind, "eps", s.eps.is_some() && !map)?;
        reject(kind, "grid", s.grid.is_some() && !map)?;
        reject(kind, "extent", s.extent.is_some() && !map)?;
        reject(kind, "k", s.k.is_some() && !kind.is_scattering())?;
        for (key, set) in [("eps-min", s.eps_min.is_some()), ("eps-max", s.eps_max.is_some()), ("eps-count", s.eps_count.is_some())] {
            reject(kind, key, set && map)?;
        }
        if kind == Selftest {
            let any = s.method.is_some() || s.n.is_some() || s.eps_min.is_some() || s.eps_max.is_some()
                || s.eps_count.is_some() || s.source.is_some() || s.out.is_some();
            reject(kind, "solver settings", any)?;
        }

        let default_methods: &[Method] = match kind {
            LaplaceConvergence => &[Method::Ptr, Method::Mtr, Method::Qpax],
            HelmholtzConvergence | SoftConvergence => &[Method::Pqr, Method::Mpqr, Method::Qpax],
            AngleSweep | FieldMap => &[Method::Qpax],
            Selftest => &[],
        };
        let methods = match &s.method {
            Some(list) => list.iter().map(|m| m.parse::<Method>()).collect::<Result<Vec<_>, _>>()?,
            None => default_methods.to_vec(),
        };
        for (i, m) in methods.iter().enumerate() {
            if methods[..i].contains(m) {
                return Err(HarnessError::Config(format!("method {m} listed twice")));
            }
            let ok = match kind {
                LaplaceConvergence => matches!(m, Method::Ptr | Method::Mtr | Method::Qpax),
                _ => matches!(m, Method::Pqr | Method::Mpqr | Method::Qpax),
            };
            if !ok {
                return Err(HarnessError::Config(format!("method {m} does not apply to {kind}")));
            }
        }
        if kind != Selftest && methods.is_empty() {
            return Err(HarnessError::Config("empty method list".into()));
        }
        if map && methods.len() != 1 {
            return Err(HarnessError::Config("field-map takes exactly one method".into()));
        }

        let n = s.n.unwrap_or(32);
        if n < 2 {
            return Err(HarnessError::Config(format!("n must be at least 2, got {n}")));
        }
        let k = s.k.unwrap_or(2.0);
        if !k.is_finite() || k <= 0.0 {
            return Err(HarnessError::Config(format!("k must be positive, got {k}")));
        }

        let default_source = match kind {
            LaplaceConvergence | Selftest => "cos:4",
            HelmholtzConvergence | SoftConvergence => "mce:3",
            AngleSweep | FieldMap => "planewave:0",
        };
        let source: SourceSpec = s.source.as_deref().unwrap_or(default_source).parse()?;
        match kind {
            LaplaceConvergence if !source.is_laplace() => {
                return Err(HarnessError::Config(format!("{kind} needs a cos or sin source, got `{source}`")))
            }
            HelmholtzConvergence | SoftConvergence | FieldMap if source.is_laplace() => {
                return Err(HarnessError::Config(format!("{kind} needs an mce, mse or planewave source, got `{source}`")))
            }
            AngleSweep if !matches!(source, SourceSpec::PlaneWave(_)) => {
                return Err(HarnessError::Config(format!("{kind} needs a planewave source, got `{source}`")))
            }
            _ => {}
        }

        let (lo, hi) = if sweep { (1e-8, 0.9) } else { (1e-6, 1e-1) };
        let eps = if map || kind == Selftest {
            Vec::new()
        } else {
            log_grid(s.eps_min.unwrap_or(lo), s.eps_max.unwrap_or(hi), s.eps_count.unwrap_or(12))?
        };

        let alphas = if sweep {
            let pi = std::f64::consts::PI;
            let a = s.alpha.clone().unwrap_or_else(|| (0..5).map(|i| i as f64 * pi / 8.0).collect());
            if a.is_empty() || a.iter().any(|x| !x.is_finite()) {
                return Err(HarnessError::Config("alpha list must be non-empty and finite".into()));
            }
            a
        } else {
            Vec::new()
        };

        let field = if map {
            let epsilon = s.eps.unwrap_or(0.01);
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(HarnessError::Config(format!("eps must lie in (0, 1), got {epsilon}")));
            }
            let grid = s.grid.unwrap_or(41);
            let extent = s.extent.unwrap_or(5.0);
            if grid < 2 || !extent.is_finite() || extent <= 0.0 {
                return Err(HarnessError::Config("field-map needs grid >= 2 and a positive extent".into()));
            }
            Some(FieldMapSpec { epsilon, grid, extent })
        } else {
            None
        };

        Ok(Self {
            kind,
            methods,
            n,
            eps,
            k,
            source,
            alphas,
            field,
            out: s.out,
            timing: s.timing.unwrap_or(false),
        })
    }
}
