use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use qpax_core::helmholtz::{evaluate_exterior_point, solve as solve_scattering, ScatteringProblem};
use qpax_core::incident::IncidentField;
use qpax_core::laplace::{solve as solve_laplace, LaplaceSource};
use qpax_core::linalg::rel_err_inf;
use qpax_core::{BoundaryCondition, Ellipse, Error, Laplace, Method, Ops, Oracle};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::source::SourceSpec;
use crate::HarnessError;

pub const CSV_HEADER: &str = "method,epsilon,two_n,alpha,rel_err_inf,runtime_ms,status";
pub const FIELD_HEADER: &str = "x,y,abs_total,re_scattered,im_scattered,abs_oracle,status";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    IllConditioned,
    SolverError,
    OracleError,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Self::Ok => "ok",
            Self::IllConditioned => "ill-conditioned",
            Self::SolverError => "solver-error",
            Self::OracleError => "oracle-error",
        }
    }

    /// True when the record carries the `NA` sentinel.
    pub fn is_failure(self) -> bool {
        matches!(self, Self::SolverError | Self::OracleError)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub method: Method,
    pub epsilon: f64,
    pub two_n: usize,
    pub alpha: Option<f64>,
    pub rel_err_inf: Option<f64>,
    pub runtime_ms: f64,
    pub status: Status,
}

impl ConvergenceRecord {
    pub fn csv_row(&self) -> String {
        let alpha = self.alpha.map(|a| format!("{a:.16e}")).unwrap_or_default();
        let err = self.rel_err_inf.map(|e| format!("{e:.16e}")).unwrap_or_else(|| "NA".into());
        let runtime = if self.runtime_ms == 0.0 { "0".to_string() } else { format!("{:.3}", self.runtime_ms) };
        format!(
            "{},{:.16e},{},{},{},{},{}",
            self.method,
            self.epsilon,
            self.two_n,
            alpha,
            err,
            runtime,
            self.status.name()
        )
    }
}

pub fn write_csv(records: &[ConvergenceRecord], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    out.flush()
}

struct Cell {
    method: Method,
    alpha: Option<f64>,
    epsilon: f64,
}

fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    let alphas: Vec<Option<f64>> =
        if config.alphas.is_empty() { vec![None] } else { config.alphas.iter().copied().map(Some).collect() };
    let mut eps = config.eps.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::new();
    for &method in &config.methods {
        for &alpha in &alphas {
            for &epsilon in &eps {
                out.push(Cell { method, alpha, epsilon });
            }
        }
    }
    out
}

fn bc_of(kind: ExperimentKind) -> BoundaryCondition {
    match kind {
        ExperimentKind::SoftConvergence => BoundaryCondition::SoundSoft,
        _ => BoundaryCondition::SoundHard,
    }
}

fn ill(flag: bool) -> Status {
    if flag {
        Status::IllConditioned
    } else {
        Status::Ok
    }
}

fn run_cell(config: &ExperimentConfig, ops: &Arc<Ops>, cell: &Cell) -> (Option<f64>, Status) {
    let shape = match Ellipse::new(cell.epsilon) {
        Ok(s) => s,
        Err(_) => return (None, Status::SolverError),
    };
    match &config.source {
        SourceSpec::Trig(terms) => {
            let p = Laplace::with_ops(shape, LaplaceSource::Trig(terms.clone()), ops.clone());
            match solve_laplace(&p, cell.method) {
                Ok(sol) => match rel_err_inf(&sol.values, &p.analytic_samples()) {
                    Ok(e) if e.is_finite() => (Some(e), ill(sol.ill_conditioned)),
                    _ => (None, Status::OracleError),
                },
                Err(_) => (None, Status::SolverError),
            }
        }
        src => {
            let bc = bc_of(config.kind);
            let Ok(field) = src.incident(config.k, cell.epsilon, cell.alpha) else {
                return (None, Status::OracleError);
            };
            let Ok(oracle) = Oracle::new(bc, field.clone(), cell.epsilon) else {
                return (None, Status::OracleError);
            };
            let Ok(p) = ScatteringProblem::with_ops(shape, config.k, bc, Arc::new(field), ops.clone()) else {
                return (None, Status::SolverError);
            };
            match solve_scattering(&p, cell.method) {
                Ok(sol) => match rel_err_inf(&sol.values, &oracle.boundary_samples(&ops.grid)) {
                    Ok(e) if e.is_finite() => (Some(e), ill(sol.ill_conditioned)),
                    Ok(_) => (None, Status::SolverError),
                    Err(_) => (None, Status::OracleError),
                },
                Err(_) => (None, Status::SolverError),
            }
        }
    }
}

/// Runs every (method, alpha, eps) cell of a convergence or sweep experiment.
/// Records come back ordered by method, then alpha, then eps descending.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>, HarnessError> {
    match config.kind {
        ExperimentKind::FieldMap | ExperimentKind::Selftest => {
            return Err(HarnessError::Config(format!("{} does not produce convergence records", config.kind)))
        }
        _ => {}
    }
    let ops = Arc::new(Ops::new(config.n)?);
    let records = cells(config)
        .par_iter()
        .map(|cell| {
            let start = Instant::now();
            let (err, status) = run_cell(config, &ops, cell);
            let runtime_ms = if config.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            ConvergenceRecord {
                method: cell.method,
                epsilon: cell.epsilon,
                two_n: 2 * config.n,
                alpha: cell.alpha,
                rel_err_inf: err,
                runtime_ms,
                status,
            }
        })
        .collect();
    Ok(records)
}

/// Least squares slope of `log10(err)` against `log10(eps)`, using only
/// errors in `[1e-13, 0.5]`.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<f64, HarnessError> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(e, r)| *e > 0.0 && (1e-13..=0.5).contains(r))
        .map(|(e, r)| (e.log10(), r.log10()))
        .collect();
    if pts.len() < 4 {
        return Err(HarnessError::Fit(format!("{} usable points, need at least 4", pts.len())));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::Fit("all usable points share one eps".into()));
    }
    Ok(sxy / sxx)
}

/// Records of one method (and one alpha, when given).
pub fn series(records: &[ConvergenceRecord], method: Method, alpha: Option<f64>) -> Vec<(f64, f64)> {
    records
        .iter()
        .filter(|r| r.method == method && r.alpha == alpha)
        .filter_map(|r| r.rel_err_inf.map(|e| (r.epsilon, e)))
        .collect()
}

/// One fitted slope per (method, alpha) group, in record order.
pub fn slopes(records: &[ConvergenceRecord]) -> Vec<(Method, Option<f64>, Result<f64, HarnessError>)> {
    let mut keys: Vec<(Method, Option<f64>)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.method, r.alpha)) {
            keys.push((r.method, r.alpha));
        }
    }
    keys.into_iter().map(|(m, a)| (m, a, fit_slope(&series(records, m, a)))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldPoint {
    pub x: f64,
    pub y: f64,
    /// Total field magnitude and scattered field, absent where refused.
    pub value: Option<(f64, f64, f64)>,
    pub oracle: f64,
}

impl FieldPoint {
    pub fn csv_row(&self) -> String {
        match self.value {
            Some((a, re, im)) => {
                format!("{:.16e},{:.16e},{a:.16e},{re:.16e},{im:.16e},{:.16e},ok", self.x, self.y, self.oracle)
            }
            None => format!("{:.16e},{:.16e},NA,NA,NA,{:.16e},refused", self.x, self.y, self.oracle),
        }
    }
}

/// Total field amplitude on a square grid; points inside the scatterer or
/// too close to it are refused rather than evaluated.
pub fn run_field_map(config: &ExperimentConfig) -> Result<Vec<FieldPoint>, HarnessError> {
    let spec = config
        .field
        .as_ref()
        .ok_or_else(|| HarnessError::Config(format!("{} is not a field map", config.kind)))?;
    let e = spec.epsilon;
    let bc = BoundaryCondition::SoundHard;
    let field = config.source.incident(config.k, e, None)?;
    let oracle = Oracle::new(bc, field.clone(), e)?;
    let p = ScatteringProblem::new(Ellipse::new(e)?, config.k, bc, Arc::new(field.clone()), config.n)?;
    let sol = solve_scattering(&p, config.methods[0])?;
    let g = spec.grid;
    let step = 2.0 * spec.extent / (g - 1) as f64;
    let coords: Vec<(f64, f64)> = (0..g)
        .flat_map(|j| (0..g).map(move |i| (i, j)))
        .map(|(i, j)| (-spec.extent + i as f64 * step, -spec.extent + j as f64 * step))
        .collect();
    coords
        .par_iter()
        .map(|&(x, y)| {
            let oracle_abs = if qpax_core::helmholtz::boundary_distance(x, y, &p.shape).is_some() {
                oracle.total(x, y).norm()
            } else {
                0.0
            };
            match evaluate_exterior_point(&sol, &p, x, y) {
                Ok(u) => {
                    let total = u + field.value(x, y);
                    Ok(FieldPoint { x, y, value: Some((total.norm(), u.re, u.im)), oracle: oracle_abs })
                }
                Err(Error::TooClose { .. } | Error::Domain(_)) => Ok(FieldPoint { x, y, value: None, oracle: oracle_abs }),
                Err(other) => Err(HarnessError::Core(other)),
            }
        })
        .collect()
}

pub fn write_field_csv(points: &[FieldPoint], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{FIELD_HEADER}")?;
    for p in points {
        writeln!(out, "{}", p.csv_row())?;
    }
    out.flush()
}
