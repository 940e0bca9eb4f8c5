//! Sound-hard and sound-soft scattering by the ellipse.
//!
//! Sound-hard: `(1/2 - K) u = u_in` for the total field `u` on the boundary.
//! Sound-soft: `(1/2 + K) v = v_in` for `v = grad u . (cos s, eps sin s)`,
//! the normal derivative times the arc speed.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{ellipse_point, ellipse_scaled_normal, kress_pair, phi_s, psi_s, EllipseShape};
use crate::incident::IncidentField;
use crate::laplace::mirror_correction;
use crate::linalg::{lu_factor, lu_solve, DenseSystem, Matrix, ILL_CONDITIONED};
use crate::scalar::{cx, Cx, Real};
use crate::specfun::hankel1;
use crate::spectral::{parity_recombine, Parity, ParityPair, SpectralOps};
use crate::{BoundaryCondition, Method};

#[derive(Clone)]
pub struct ScatteringProblem<T: Real> {
    pub shape: EllipseShape<T>,
    pub k: T,
    pub bc: BoundaryCondition,
    pub incident: Arc<dyn IncidentField<T>>,
    pub ops: Arc<SpectralOps<T>>,
}

impl<T: Real> std::fmt::Debug for ScatteringProblem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScatteringProblem")
            .field("epsilon", &self.shape.epsilon())
            .field("k", &self.k)
            .field("bc", &self.bc)
            .field("incident", &self.incident.tag())
            .field("n", &self.ops.n())
            .finish()
    }
}

impl<T: Real> ScatteringProblem<T> {
    pub fn new(
        shape: EllipseShape<T>,
        k: T,
        bc: BoundaryCondition,
        incident: Arc<dyn IncidentField<T>>,
        n: usize,
    ) -> Result<Self> {
        Self::with_ops(shape, k, bc, incident, Arc::new(SpectralOps::new(n)?))
    }

    pub fn with_ops(
        shape: EllipseShape<T>,
        k: T,
        bc: BoundaryCondition,
        incident: Arc<dyn IncidentField<T>>,
        ops: Arc<SpectralOps<T>>,
    ) -> Result<Self> {
        if !(k > T::zero()) || !k.is_finite() {
            return Err(Error::Config(format!("wavenumber must be positive, got {k}")));
        }
        Ok(Self { shape, k, bc, incident, ops })
    }

    pub fn epsilon(&self) -> T {
        self.shape.epsilon()
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryFieldSolution<T> {
    pub values: Vec<Cx<T>>,
    pub method: Method,
    pub bc: BoundaryCondition,
    pub runtime: Duration,
    pub ill_conditioned: bool,
}

/// Right-hand side of the Nystrom systems: `u_in` or `v_in` on the grid.
pub fn boundary_data<T: Real>(problem: &ScatteringProblem<T>) -> Vec<Cx<T>> {
    let inc = &problem.incident;
    problem
        .ops
        .grid
        .nodes()
        .iter()
        .map(|&s| {
            let (x, y) = ellipse_point(s, &problem.shape);
            match problem.bc {
                BoundaryCondition::SoundHard => inc.value(x, y),
                BoundaryCondition::SoundSoft => {
                    let (nx, ny) = ellipse_scaled_normal(s, &problem.shape);
                    inc.dx(x, y) * nx + inc.dy(x, y) * ny
                }
            }
        })
        .collect()
}

fn bc_sign<T: Real>(bc: BoundaryCondition) -> T {
    match bc {
        BoundaryCondition::SoundHard => -T::one(),
        BoundaryCondition::SoundSoft => T::one(),
    }
}

/// Product quadrature matrix; with `modified` the mirror entry of the smooth
/// part is replaced by the asymptotic correction.
pub fn pqr_matrix<T: Real>(problem: &ScatteringProblem<T>, modified: bool) -> Matrix<Cx<T>> {
    let g = &problem.ops.grid;
    let r = &problem.ops.kress;
    let dt = g.dt();
    let sign = bc_sign::<T>(problem.bc);
    let half = T::lit(0.5);
    let corr = mirror_correction(dt, problem.epsilon());
    Matrix::from_fn(g.len(), g.len(), |i, j| {
        let (k1, k2) = kress_pair(g.node(i), g.node(j), &problem.shape, problem.k);
        let log_part = r[g.folded_distance(i, j)] * k1;
        let a = if modified && j == g.mirror(i) { cx(log_part - corr, T::zero()) } else { k2 * dt + log_part };
        let d = if i == j { half } else { T::zero() };
        cx(d, T::zero()) + a * sign
    })
}

fn dense<T: Real>(problem: &ScatteringProblem<T>, modified: bool, method: Method) -> Result<BoundaryFieldSolution<T>> {
    let start = Instant::now();
    let sys = DenseSystem { matrix: pqr_matrix(problem, modified), rhs: boundary_data(problem) };
    let sol = lu_solve(&sys)?;
    Ok(BoundaryFieldSolution {
        values: sol.x,
        method,
        bc: problem.bc,
        runtime: start.elapsed(),
        ill_conditioned: sol.ill_conditioned,
    })
}

pub fn solve_pqr<T: Real>(problem: &ScatteringProblem<T>) -> Result<BoundaryFieldSolution<T>> {
    dense(problem, false, Method::Pqr)
}

pub fn solve_mpqr<T: Real>(problem: &ScatteringProblem<T>) -> Result<BoundaryFieldSolution<T>> {
    dense(problem, true, Method::Mpqr)
}

/// First-order operator of the Helmholtz expansion on one parity class,
/// `L1 * psi - (1 / 2 pi) W_ev * [phi]`.
pub fn assemble_h1<T: Real>(parity: Parity, k: T, ops: &SpectralOps<T>) -> Matrix<Cx<T>> {
    let n = ops.n();
    let g = &ops.grid;
    let (l1, w, off, sg) = match parity {
        Parity::Even => (&ops.l1_even, ops.w_even.clone(), 0usize, T::one()),
        Parity::Odd => (&ops.l1_odd, ops.w_even.block(1..n), 1usize, -T::one()),
    };
    let size = l1.rows();
    let inv_2pi = T::TAU().recip();
    let half = T::lit(0.5);
    let pi = T::PI();
    Matrix::from_fn(size, size, |i, j| {
        let s = g.node(i + off);
        let t = g.node(j + off);
        let ln_part = (phi_s(s, t, k) + sg * phi_s(s, pi - t, k)) * half;
        psi_s(s, t, k) * l1[(i, j)] - cx(inv_2pi * w[(i, j)] * ln_part, T::zero())
    })
}

fn is_zero<T: Real>(v: &[Cx<T>]) -> bool {
    v.iter().all(|x| x.re == T::zero() && x.im == T::zero())
}

struct Sources<T> {
    even: Vec<Cx<T>>,
    odd: Vec<Cx<T>>,
}

fn axis_sources<T: Real>(problem: &ScatteringProblem<T>) -> Sources<T> {
    let g = &problem.ops.grid;
    let n = g.n();
    let inc = &problem.incident;
    let z = T::zero();
    let odd = (1..n)
        .map(|i| {
            let s = g.node(i);
            inc.dx(z, s.sin()) * s.cos()
        })
        .collect();
    let even = (0..=n)
        .map(|i| {
            let s = g.node(i);
            let (sn, cs) = s.sin_cos();
            match problem.bc {
                BoundaryCondition::SoundHard => inc.axis_value(sn),
                BoundaryCondition::SoundSoft => inc.dxx(z, sn) * (cs * cs) + inc.dy(z, sn) * sn,
            }
        })
        .collect();
    Sources { even, odd }
}

fn solve_block<T: Real>(m: &Matrix<Cx<T>>, rhs: &[Cx<T>]) -> Result<(Vec<Cx<T>>, bool)> {
    if is_zero(rhs) {
        return Ok((rhs.to_vec(), false));
    }
    let lu = lu_factor(m)?;
    let x = lu.solve(rhs)?;
    Ok((x, !(lu.cond_estimate() <= T::lit(ILL_CONDITIONED))))
}

/// Sound-hard QPAX:
/// `u_ev = f_ev - eps h1_ev f_ev`, `h1_od u_od = f_od`.
pub fn qpax_sound_hard<T: Real>(problem: &ScatteringProblem<T>) -> Result<BoundaryFieldSolution<T>> {
    let start = Instant::now();
    let ops = &problem.ops;
    let e = problem.epsilon();
    let f = axis_sources(problem);
    let h_ev = assemble_h1(Parity::Even, problem.k, ops);
    let hf = h_ev.matvec(&f.even);
    let even: Vec<Cx<T>> = f.even.iter().zip(&hf).map(|(a, b)| a - b * e).collect();
    let (odd, ill) = solve_block(&assemble_h1(Parity::Odd, problem.k, ops), &f.odd)?;
    finish(problem, ParityPair { even, odd }, ill, start)
}

/// Sound-soft QPAX:
/// `h1_ev v_ev = -(cos^2 s u_xx + sin s u_y)`, `v_od = f_od + eps h1_od f_od`.
pub fn qpax_sound_soft<T: Real>(problem: &ScatteringProblem<T>) -> Result<BoundaryFieldSolution<T>> {
    let start = Instant::now();
    let ops = &problem.ops;
    let e = problem.epsilon();
    let f = axis_sources(problem);
    let neg: Vec<Cx<T>> = f.even.iter().map(|v| -v).collect();
    let (even, ill) = solve_block(&assemble_h1(Parity::Even, problem.k, ops), &neg)?;
    let h_od = assemble_h1(Parity::Odd, problem.k, ops);
    let hf = h_od.matvec(&f.odd);
    let odd = f.odd.iter().zip(&hf).map(|(a, b)| a + b * e).collect();
    finish(problem, ParityPair { even, odd }, ill, start)
}

fn finish<T: Real>(
    problem: &ScatteringProblem<T>,
    parts: ParityPair<T>,
    ill: bool,
    start: Instant,
) -> Result<BoundaryFieldSolution<T>> {
    let values = parity_recombine(&parts, &problem.ops.grid)?;
    Ok(BoundaryFieldSolution { values, method: Method::Qpax, bc: problem.bc, runtime: start.elapsed(), ill_conditioned: ill })
}

pub fn solve_qpax<T: Real>(problem: &ScatteringProblem<T>) -> Result<BoundaryFieldSolution<T>> {
    match problem.bc {
        BoundaryCondition::SoundHard => qpax_sound_hard(problem),
        BoundaryCondition::SoundSoft => qpax_sound_soft(problem),
    }
}

pub fn solve<T: Real>(problem: &ScatteringProblem<T>, method: Method) -> Result<BoundaryFieldSolution<T>> {
    match method {
        Method::Pqr => solve_pqr(problem),
        Method::Mpqr => solve_mpqr(problem),
        Method::Qpax => solve_qpax(problem),
        other => Err(Error::Config(format!("{} does not apply to scattering problems", other.name()))),
    }
}

/// Points closer than this many grid spacings to the boundary are refused.
pub const CLOSE_LIMIT: f64 = 5.0;

/// Distance from `(x, y)` to the ellipse, or `None` inside it.
pub fn boundary_distance<T: Real>(x: T, y: T, shape: &EllipseShape<T>) -> Option<T> {
    let e = shape.epsilon();
    if (x / e) * (x / e) + y * y <= T::one() {
        return None;
    }
    let samples = 4096;
    let h = T::TAU() / T::of(samples);
    let dist = |t: T| {
        let (px, py) = ellipse_point(t, shape);
        ((x - px) * (x - px) + (y - py) * (y - py)).sqrt()
    };
    let (mut best_t, mut best) = (T::zero(), T::infinity());
    for j in 0..samples {
        let t = T::of(j) * h;
        let d = dist(t);
        if d < best {
            best = d;
            best_t = t;
        }
    }
    // golden section refinement around the best sample
    let (mut a, mut b) = (best_t - h, best_t + h);
    let phi = T::lit(0.618_033_988_749_894_8);
    for _ in 0..60 {
        let c = b - (b - a) * phi;
        let d = a + (b - a) * phi;
        if dist(c) < dist(d) {
            b = d;
        } else {
            a = c;
        }
    }
    Some(best.min(dist((a + b) * T::lit(0.5))))
}

/// Scattered field at one exterior point from a boundary solution, by the
/// trapezoid rule on the representation formula.
pub fn evaluate_exterior_point<T: Real>(
    solution: &BoundaryFieldSolution<T>,
    problem: &ScatteringProblem<T>,
    x: T,
    y: T,
) -> Result<Cx<T>> {
    let g = &problem.ops.grid;
    let limit = T::lit(CLOSE_LIMIT) * g.dt();
    let to_f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    match boundary_distance(x, y, &problem.shape) {
        None => return Err(Error::Domain(format!("point ({x}, {y}) lies inside the scatterer"))),
        Some(d) if d < limit => {
            return Err(Error::TooClose { x: to_f(x), y: to_f(y), distance: to_f(d), limit: to_f(limit) })
        }
        _ => {}
    }
    if solution.values.len() != g.len() {
        return Err(Error::SizeMismatch { expected: g.len(), got: solution.values.len() });
    }
    let k = problem.k;
    let quarter = T::lit(0.25);
    let mut acc = Cx::new(T::zero(), T::zero());
    for (j, &s) in g.nodes().iter().enumerate() {
        let (px, py) = ellipse_point(s, &problem.shape);
        let (dx, dy) = (x - px, y - py);
        let r = (dx * dx + dy * dy).sqrt();
        let w = match solution.bc {
            BoundaryCondition::SoundHard => {
                let (nx, ny) = ellipse_scaled_normal(s, &problem.shape);
                hankel1(1, k * r)? * cx(T::zero(), k * quarter) * ((dx * nx + dy * ny) / r)
            }
            BoundaryCondition::SoundSoft => -(hankel1(0, k * r)? * cx(T::zero(), quarter)),
        };
        acc += w * solution.values[j];
    }
    Ok(acc * g.dt())
}

pub fn evaluate_exterior_field<T: Real>(
    solution: &BoundaryFieldSolution<T>,
    problem: &ScatteringProblem<T>,
    points: &[(T, T)],
) -> Result<Vec<Cx<T>>> {
    points.iter().map(|&(x, y)| evaluate_exterior_point(solution, problem, x, y)).collect()
}
