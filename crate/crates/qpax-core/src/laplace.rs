//! Interior Dirichlet problem for Laplace's equation on the ellipse, solved
//! for the double layer density `mu` in `(1/2 - K^L) mu = f`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::Result;
use crate::geometry::{laplace_kernel, EllipseShape};
use crate::linalg::{lu_solve, DenseSystem, Matrix};
use crate::scalar::{cx, re, Cx, Real};
use crate::spectral::{parity_recombine, parity_split, ParityPair, SpectralOps};
use crate::Method;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigKind {
    Cos,
    Sin,
}

/// `amp * cos(m s)` or `amp * sin(m s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigTerm<T> {
    pub kind: TrigKind,
    pub m: u32,
    pub amp: T,
}

impl<T: Real> TrigTerm<T> {
    pub fn cos(m: u32) -> Self {
        Self { kind: TrigKind::Cos, m, amp: T::one() }
    }

    pub fn sin(m: u32) -> Self {
        Self { kind: TrigKind::Sin, m, amp: T::one() }
    }

    pub fn eval(&self, s: T) -> T {
        let a = T::of(self.m as usize) * s;
        self.amp
            * match self.kind {
                TrigKind::Cos => a.cos(),
                TrigKind::Sin => a.sin(),
            }
    }

    /// `cos(m s)` has parity `(-1)^m` and `sin(m s)` has parity `(-1)^(m+1)`.
    pub fn is_even(&self) -> bool {
        match self.kind {
            TrigKind::Cos => self.m % 2 == 0,
            TrigKind::Sin => self.m % 2 == 1,
        }
    }
}

pub type SourceFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
pub enum LaplaceSource<T> {
    Trig(Vec<TrigTerm<T>>),
    Callable(SourceFn<T>),
}

impl<T: Real> std::fmt::Debug for LaplaceSource<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Trig(t) => f.debug_tuple("Trig").field(t).finish(),
            Self::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

impl<T: Real> LaplaceSource<T> {
    pub fn eval(&self, s: T) -> T {
        match self {
            Self::Trig(terms) => terms.iter().fold(T::zero(), |acc, t| acc + t.eval(s)),
            Self::Callable(f) => f(s),
        }
    }

    /// Fourier coefficients; callables are projected with a 4096 point rule
    /// onto `|m| <= 64`.
    pub fn fourier(&self) -> FourierSeries<T> {
        match self {
            Self::Trig(terms) => FourierSeries::from_trig(terms),
            Self::Callable(f) => FourierSeries::project(|s| f(s), 64, 4096),
        }
    }
}

/// Finite Fourier series `sum c_m e^{i m s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierSeries<T> {
    pub coeffs: Vec<(i64, Cx<T>)>,
}

impl<T: Real> FourierSeries<T> {
    pub fn from_trig(terms: &[TrigTerm<T>]) -> Self {
        let mut out = Self { coeffs: Vec::new() };
        let half = T::lit(0.5);
        for t in terms {
            let m = t.m as i64;
            if m == 0 {
                if t.kind == TrigKind::Cos {
                    out.add(0, re(t.amp));
                }
                continue;
            }
            match t.kind {
                TrigKind::Cos => {
                    out.add(m, re(t.amp * half));
                    out.add(-m, re(t.amp * half));
                }
                TrigKind::Sin => {
                    out.add(m, cx(T::zero(), -t.amp * half));
                    out.add(-m, cx(T::zero(), t.amp * half));
                }
            }
        }
        out
    }

    /// Trapezoid projection of a periodic function onto `|m| <= mmax`.
    pub fn project(f: impl Fn(T) -> T, mmax: usize, points: usize) -> Self {
        let h = T::TAU() / T::of(points);
        let vals: Vec<T> = (0..points).map(|j| f(T::of(j) * h)).collect();
        let mut coeffs = Vec::new();
        for m in -(mmax as i64)..=(mmax as i64) {
            let mut acc = Cx::new(T::zero(), T::zero());
            for (j, v) in vals.iter().enumerate() {
                let ph = -T::of_i(m) * T::of(j) * h;
                acc += cx(ph.cos(), ph.sin()) * *v;
            }
            coeffs.push((m, acc / T::of(points)));
        }
        Self { coeffs }
    }

    fn add(&mut self, m: i64, c: Cx<T>) {
        if let Some(e) = self.coeffs.iter_mut().find(|(k, _)| *k == m) {
            e.1 += c;
        } else {
            self.coeffs.push((m, c));
        }
    }

    pub fn coeff(&self, m: i64) -> Cx<T> {
        self.coeffs.iter().find(|(k, _)| *k == m).map_or(Cx::new(T::zero(), T::zero()), |e| e.1)
    }

    pub fn eval(&self, s: T) -> Cx<T> {
        self.coeffs.iter().fold(Cx::new(T::zero(), T::zero()), |acc, &(m, c)| {
            let ph = T::of_i(m) * s;
            acc + c * cx(ph.cos(), ph.sin())
        })
    }
}

/// `rho = (eps - 1) / (eps + 1)`.
pub fn rho<T: Real>(epsilon: T) -> T {
    (epsilon - T::one()) / (epsilon + T::one())
}

/// `(1 + rho^a, 1 - rho^a)` without cancellation as `rho -> -1`.
fn one_pm_rho_pow<T: Real>(epsilon: T, a: u64) -> (T, T) {
    let two = T::lit(2.0);
    // rho = -q with ln q = ln(1 - 2 eps / (1 + eps))
    let lq = (-two * epsilon / (T::one() + epsilon)).ln_1p();
    let x = T::of(a as usize) * lq;
    let qa = x.exp();
    let small = -x.exp_m1();
    if a % 2 == 0 {
        (T::one() + qa, small)
    } else {
        (small, T::one() + qa)
    }
}

/// Exact density for a finite Fourier source.
pub fn analytic_density<T: Real>(f: &FourierSeries<T>, epsilon: T) -> FourierSeries<T> {
    let coeffs = f
        .coeffs
        .iter()
        .map(|&(m, c)| {
            if m == 0 {
                return (0, c);
            }
            let (plus, minus) = one_pm_rho_pow(epsilon, m.unsigned_abs());
            let d = f.coeff(-m);
            (m, (c + d) / plus + (c - d) / minus)
        })
        .collect();
    FourierSeries { coeffs }
}

#[derive(Clone, Debug)]
pub struct LaplaceProblem<T: Real> {
    pub shape: EllipseShape<T>,
    pub source: LaplaceSource<T>,
    pub ops: Arc<SpectralOps<T>>,
}

impl<T: Real> LaplaceProblem<T> {
    pub fn new(shape: EllipseShape<T>, source: LaplaceSource<T>, n: usize) -> Result<Self> {
        Ok(Self { shape, source, ops: Arc::new(SpectralOps::new(n)?) })
    }

    pub fn with_ops(shape: EllipseShape<T>, source: LaplaceSource<T>, ops: Arc<SpectralOps<T>>) -> Self {
        Self { shape, source, ops }
    }

    pub fn samples(&self) -> Vec<Cx<T>> {
        self.ops.grid.nodes().iter().map(|&s| re(self.source.eval(s))).collect()
    }

    /// Parity split of the source. Trigonometric sources are split term by
    /// term so each part is exactly zero when the source has one parity.
    pub fn source_parts(&self) -> ParityPair<T> {
        let grid = &self.ops.grid;
        match &self.source {
            LaplaceSource::Trig(terms) => {
                let n = grid.n();
                let mut pair = ParityPair::zeros(n);
                for t in terms {
                    if t.is_even() {
                        for (i, v) in pair.even.iter_mut().enumerate() {
                            *v += re(t.eval(grid.node(i)));
                        }
                    } else {
                        for (i, v) in pair.odd.iter_mut().enumerate() {
                            *v += re(t.eval(grid.node(i + 1)));
                        }
                    }
                }
                pair
            }
            LaplaceSource::Callable(_) => parity_split(&self.samples(), grid).expect("grid sized samples"),
        }
    }

    /// Exact density sampled on the grid.
    pub fn analytic_samples(&self) -> Vec<Cx<T>> {
        let mu = analytic_density(&self.source.fourier(), self.shape.epsilon());
        self.ops.grid.nodes().iter().map(|&s| mu.eval(s)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct DensitySolution<T> {
    pub values: Vec<Cx<T>>,
    pub method: Method,
    pub runtime: Duration,
    pub ill_conditioned: bool,
}

/// Trapezoid Nystrom matrix `1/2 I - dt K^L`.
pub fn ptr_matrix<T: Real>(problem: &LaplaceProblem<T>) -> Matrix<T> {
    let g = &problem.ops.grid;
    let dt = g.dt();
    let half = T::lit(0.5);
    Matrix::from_fn(g.len(), g.len(), |i, j| {
        let d = if i == j { half } else { T::zero() };
        d - dt * laplace_kernel(g.node(i), g.node(j), &problem.shape)
    })
}

/// Mirror correction `arctan(dt / (4 eps)) / pi`.
pub fn mirror_correction<T: Real>(dt: T, epsilon: T) -> T {
    (dt / (T::lit(4.0) * epsilon)).atan() / T::PI()
}

/// Trapezoid matrix with each mirror entry replaced by the asymptotic
/// correction.
pub fn mtr_matrix<T: Real>(problem: &LaplaceProblem<T>) -> Matrix<T> {
    let g = &problem.ops.grid;
    let mut a = ptr_matrix(problem);
    let corr = mirror_correction(g.dt(), problem.shape.epsilon());
    for i in 0..g.len() {
        let j = g.mirror(i);
        let d = if i == j { T::lit(0.5) } else { T::zero() };
        a[(i, j)] = d + corr;
    }
    a
}

fn dense_solve<T: Real>(a: Matrix<T>, problem: &LaplaceProblem<T>, method: Method, start: Instant) -> Result<DensitySolution<T>> {
    let sol = lu_solve(&DenseSystem { matrix: a.to_complex(), rhs: problem.samples() })?;
    Ok(DensitySolution { values: sol.x, method, runtime: start.elapsed(), ill_conditioned: sol.ill_conditioned })
}

pub fn solve_ptr<T: Real>(problem: &LaplaceProblem<T>) -> Result<DensitySolution<T>> {
    let start = Instant::now();
    dense_solve(ptr_matrix(problem), problem, Method::Ptr, start)
}

pub fn solve_mtr<T: Real>(problem: &LaplaceProblem<T>) -> Result<DensitySolution<T>> {
    let start = Instant::now();
    dense_solve(mtr_matrix(problem), problem, Method::Mtr, start)
}

/// `mu_ev = f_ev - eps L1 f_ev`, `mu_od = L1^{-1} f_od / eps`.
pub fn qpax_parts<T: Real>(problem: &LaplaceProblem<T>) -> ParityPair<T> {
    let ops = &problem.ops;
    let e = problem.shape.epsilon();
    let f = problem.source_parts();
    let l1f = ops.l1_even.apply(&f.even);
    let even = f.even.iter().zip(&l1f).map(|(a, b)| a - b * e).collect();
    let odd = ops.l1_odd_inverse.apply(&f.odd).into_iter().map(|v| v / e).collect();
    ParityPair { even, odd }
}

pub fn solve_qpax_laplace<T: Real>(problem: &LaplaceProblem<T>) -> Result<DensitySolution<T>> {
    let start = Instant::now();
    let parts = qpax_parts(problem);
    let values = parity_recombine(&parts, &problem.ops.grid)?;
    Ok(DensitySolution { values, method: Method::Qpax, runtime: start.elapsed(), ill_conditioned: false })
}

pub fn solve<T: Real>(problem: &LaplaceProblem<T>, method: Method) -> Result<DensitySolution<T>> {
    match method {
        Method::Ptr => solve_ptr(problem),
        Method::Mtr => solve_mtr(problem),
        Method::Qpax => solve_qpax_laplace(problem),
        other => Err(crate::Error::Config(format!("{} does not apply to the Laplace problem", other.name()))),
    }
}
