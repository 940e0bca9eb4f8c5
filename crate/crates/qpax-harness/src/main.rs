use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qpax_harness::experiment::{slopes, write_csv, write_field_csv};
use qpax_harness::selftest::{run_selftest, SelftestOptions};
use qpax_harness::{run_experiment, run_field_map, ExperimentConfig, ExperimentKind, HarnessError, Settings};

/// Convergence studies for boundary integral solvers on thin ellipses.
#[derive(Debug, Parser)]
#[command(name = "qpax", version)]
struct Cli {
    /// laplace-convergence, helmholtz-convergence, soft-convergence,
    /// angle-sweep, field-map or selftest; may come from --config instead
    experiment: Option<String>,
    /// Comma separated: ptr, mtr, pqr, mpqr, qpax
    #[arg(long, value_delimiter = ',')]
    method: Option<Vec<String>>,
    /// Half the number of quadrature points
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eps_min: Option<f64>,
    #[arg(long)]
    eps_max: Option<f64>,
    #[arg(long)]
    eps_count: Option<usize>,
    /// Aspect ratio of a field map
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    /// cos:m, sin:m, mce:m, mse:m or planewave:alpha
    #[arg(long, allow_hyphen_values = true)]
    source: Option<String>,
    /// Comma separated incidence angles for angle-sweep
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Points per side of a field map
    #[arg(long)]
    grid: Option<usize>,
    /// Half width of the field map square
    #[arg(long)]
    extent: Option<f64>,
    /// CSV destination; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON document with the same keys as the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall clock times instead of zeros
    #[arg(long)]
    timing: bool,
}

impl Cli {
    fn settings(self) -> Result<Settings, HarnessError> {
        let file = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let flags = Settings {
            experiment: self.experiment,
            method: self.method,
            n: self.n,
            eps_min: self.eps_min,
            eps_max: self.eps_max,
            eps_count: self.eps_count,
            eps: self.eps,
            k: self.k,
            source: self.source,
            alpha: self.alpha,
            grid: self.grid,
            extent: self.extent,
            out: self.out,
            timing: self.timing.then_some(true),
        };
        Ok(flags.over(file))
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, HarnessError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<u8, HarnessError> {
    let config = ExperimentConfig::resolve(cli.settings()?)?;
    match config.kind {
        ExperimentKind::Selftest => {
            let report = run_selftest(&SelftestOptions::default());
            print!("{}", report.render());
            Ok(if report.passed() { 0 } else { 4 })
        }
        ExperimentKind::FieldMap => {
            let points = run_field_map(&config)?;
            write_field_csv(&points, &mut *sink(&config.out)?)?;
            let refused = points.iter().filter(|p| p.value.is_none()).count();
            eprintln!("{} points, {refused} refused (inside or too close to the boundary)", points.len());
            Ok(0)
        }
        _ => {
            let records = run_experiment(&config)?;
            write_csv(&records, &mut *sink(&config.out)?)?;
            for (m, alpha, slope) in slopes(&records) {
                let tag = alpha.map(|a| format!(" alpha={a}")).unwrap_or_default();
                match slope {
                    Ok(s) => eprintln!("slope {m}{tag}: {s:.3}"),
                    Err(e) => eprintln!("slope {m}{tag}: {e}"),
                }
            }
            let failed = records.iter().filter(|r| r.status.is_failure()).count();
            if failed > 0 {
                eprintln!("{failed} cells failed");
                return Ok(3);
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
